#include "rach/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/beta.hpp>

namespace rach {

SlotGrid::SlotGrid(int delta_sf_ms, int horizon_ms)
    : delta_sf_(delta_sf_ms), horizon_(horizon_ms), eta_(0) {
  if (delta_sf_ms <= 0) throw std::invalid_argument("delta_sf must be > 0");
  if (horizon_ms <= 0) throw std::invalid_argument("horizon T must be > 0");
  eta_ = horizon_ms / delta_sf_ms;
}

int SlotGrid::slot_at_or_after(double t_ms) const {
  const double s = std::ceil(t_ms / delta_sf_);
  if (s < 1.0) return 1;
  if (s > 2e9) return eta_ + 1;
  return static_cast<int>(s);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

long device_count(const ArrivalModel& model) {
  return std::visit(overloaded{[](const M2MType1& m) { return m.n_mtc; },
                               [](const M2MType2& m) { return m.n_mtc; },
                               [](const H2HPoisson&) { return 0L; }},
                    model);
}

void require_m2m(const ArrivalModel& model) {
  if (!is_m2m(model)) throw std::invalid_argument("expected an M2M arrival model");
}

}  // namespace

bool is_m2m(const ArrivalModel& model) { return !std::holds_alternative<H2HPoisson>(model); }

void validate(const ArrivalModel& model) {
  std::visit(overloaded{[](const M2MType1& m) {
                          if (m.n_mtc < 0) throw std::invalid_argument("n_mtc must be >= 0");
                        },
                        [](const M2MType2& m) {
                          if (!(m.alpha > 0.0) || !(m.beta > 0.0))
                            throw std::invalid_argument("beta shapes must be > 0");
                          if (m.n_mtc < 0) throw std::invalid_argument("n_mtc must be >= 0");
                        },
                        [](const H2HPoisson& h) {
                          if (!(h.lambda_slot >= 0.0))
                            throw std::invalid_argument("lambda must be >= 0");
                        }},
             model);
}

double activation_cdf(const ArrivalModel& model, const SlotGrid& grid, double t_ms) {
  require_m2m(model);
  const double u = std::clamp(t_ms / grid.horizon(), 0.0, 1.0);
  if (const auto* m = std::get_if<M2MType2>(&model)) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return boost::math::ibeta(m->alpha, m->beta, u);
  }
  return u;
}

double m2m_new_arrivals(const ArrivalModel& model, const SlotGrid& grid, int i) {
  require_m2m(model);
  if (i < 1 || i > grid.eta())
    throw std::out_of_range("slot index " + std::to_string(i) + " outside [1, eta]");
  const double lo = activation_cdf(model, grid, static_cast<double>(grid.slot_time(i - 1)));
  const double hi = activation_cdf(model, grid, static_cast<double>(grid.slot_time(i)));
  return static_cast<double>(device_count(model)) * std::max(hi - lo, 0.0);
}

Eigen::VectorXd m2m_arrival_profile(const ArrivalModel& model, const SlotGrid& grid) {
  require_m2m(model);
  validate(model);
  Eigen::VectorXd out(grid.eta());
  for (int i = 1; i <= grid.eta(); ++i) out(i - 1) = m2m_new_arrivals(model, grid, i);
  return out;
}

double h2h_mean(const ArrivalModel& model, int i) {
  const auto* h = std::get_if<H2HPoisson>(&model);
  if (h == nullptr) throw std::invalid_argument("expected an H2H arrival model");
  if (i < 1) throw std::out_of_range("slot index must be >= 1");
  return h->lambda_slot;
}

Eigen::VectorXd expected_new_arrivals(const ArrivalModel& model, const SlotGrid& grid) {
  if (is_m2m(model)) return m2m_arrival_profile(model, grid);
  validate(model);
  return Eigen::VectorXd::Constant(grid.eta(), h2h_mean(model, 1));
}

std::vector<double> sample_arrivals(const ArrivalModel& model, const SlotGrid& grid,
                                    std::uint64_t seed) {
  validate(model);
  std::mt19937_64 rng(seed);
  std::vector<double> times;
  const double horizon = grid.horizon();

  std::visit(
      overloaded{
          [&](const M2MType1& m) {
            std::uniform_real_distribution<double> u(0.0, horizon);
            times.reserve(static_cast<std::size_t>(m.n_mtc));
            for (long k = 0; k < m.n_mtc; ++k) times.push_back(u(rng));
          },
          [&](const M2MType2& m) {
            // Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
            std::gamma_distribution<double> ga(m.alpha, 1.0);
            std::gamma_distribution<double> gb(m.beta, 1.0);
            times.reserve(static_cast<std::size_t>(m.n_mtc));
            for (long k = 0; k < m.n_mtc; ++k) {
              const double x = ga(rng);
              const double y = gb(rng);
              times.push_back(horizon * x / (x + y));
            }
          },
          [&](const H2HPoisson& h) {
            if (h.lambda_slot <= 0.0) return;
            std::poisson_distribution<long> count(h.lambda_slot);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            const double delta = grid.delta_sf();
            for (int i = 1; i <= grid.eta(); ++i) {
              const long c = count(rng);
              const double t_i = static_cast<double>(grid.slot_time(i));
              for (long k = 0; k < c; ++k) times.push_back(t_i - u(rng) * delta);
            }
          }},
      model);

  std::sort(times.begin(), times.end());
  return times;
}

}  // namespace rach
