#include "rach/kmc.hpp"

#include <string>

namespace rach {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Integer backoff expiries from origin j whose reattempt slot is i. The slot right
// after the origin also absorbs expiries at or before its own instant.
long landing_count(int i, int j, const BackoffGeometry& geom, const SlotGrid& grid) {
  const long lo = i == j + 1 ? geom.bo_min(grid, j)
                             : std::max(geom.bo_min(grid, j), grid.slot_time(i - 1) + 1);
  const long hi = std::min(geom.bo_max(grid, j), grid.slot_time(i));
  return std::max(0L, hi - lo + 1);
}

long beyond_count(int j, const BackoffGeometry& geom, const SlotGrid& grid) {
  if (j >= grid.eta()) return geom.window_count();
  const long lo = std::max(geom.bo_min(grid, j), grid.slot_time(grid.eta()) + 1);
  return std::max(0L, geom.bo_max(grid, j) - lo + 1);
}

}  // namespace

void validate(const BackoffGeometry& geom) {
  if (geom.t_rar_ms < 0 || geom.w_rar_ms < 0 || geom.w_bo_ms < 0)
    throw std::invalid_argument("backoff durations must be >= 0");
}

void validate(const AllocationPolicy& policy) {
  std::visit(overloaded{[](const SharedPolicy& p) {
                          if (p.M < 1) throw std::invalid_argument("M must be >= 1");
                        },
                        [](const DisjointPolicy& p) {
                          if (p.M < 1) throw std::invalid_argument("M must be >= 1");
                          if (!(p.a > 0 && p.a < p.M))
                            throw std::invalid_argument("a must satisfy 0 < a < M");
                        },
                        [](const JointPolicy& p) {
                          if (p.M < 1) throw std::invalid_argument("M must be >= 1");
                          if (!(p.x > 0 && p.x < p.M))
                            throw std::invalid_argument("x must satisfy 0 < x < M");
                        }},
             policy);
}

int total_preambles(const AllocationPolicy& policy) {
  return std::visit([](const auto& p) { return p.M; }, policy);
}

int max_lag(int i, const BackoffGeometry& geom, const SlotGrid& grid) {
  int k = 0;
  for (int j = i - 1; j >= 1; --j) {
    if (j < i - 1 && geom.bo_max(grid, j) <= grid.slot_time(i - 1)) break;
    if (landing_count(i, j, geom, grid) > 0) ++k;
  }
  return k;
}

double transition_prob(int i, int j, const BackoffGeometry& geom, const SlotGrid& grid) {
  if (j < 1 || j >= i)
    throw std::domain_error("transition needs 1 <= origin < dest, got dest " + std::to_string(i) +
                            ", origin " + std::to_string(j));
  return static_cast<double>(landing_count(i, j, geom, grid)) / geom.window_count();
}

TransitionMatrix::TransitionMatrix(OriginMajor kernel, Eigen::VectorXd beyond_horizon)
    : by_origin_(std::move(kernel)), by_dest_(by_origin_), beyond_(std::move(beyond_horizon)) {
  by_origin_.makeCompressed();
  by_dest_.makeCompressed();
}

double TransitionMatrix::operator()(int dest, int origin) const {
  return by_origin_.coeff(dest - 1, origin - 1);
}

double TransitionMatrix::origin_mass(int j) const {
  double s = 0.0;
  for (OriginMajor::InnerIterator it(by_origin_, j - 1); it; ++it) s += it.value();
  return s;
}

TransitionMatrix build_matrix(const BackoffGeometry& geom, const SlotGrid& grid) {
  validate(geom);
  const int eta = grid.eta();
  const double window = geom.window_count();
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::VectorXd beyond(eta);
  for (int j = 1; j <= eta; ++j) {
    const int last = std::min(eta, grid.slot_at_or_after(static_cast<double>(geom.bo_max(grid, j))));
    for (int i = j + 1; i <= last; ++i) {
      const long c = landing_count(i, j, geom, grid);
      if (c > 0) entries.emplace_back(i - 1, j - 1, c / window);
    }
    beyond(j - 1) = beyond_count(j, geom, grid) / window;
  }
  TransitionMatrix::OriginMajor kernel(eta, eta);
  kernel.setFromTriplets(entries.begin(), entries.end());
  return TransitionMatrix(std::move(kernel), std::move(beyond));
}

ClassSuccess<double> slot_success_probs(const AllocationPolicy& policy, double z_h2h,
                                        double z_m2m, JaMode mode, SuccessForm form) {
  return std::visit(
      overloaded{[&](const SharedPolicy& p) {
                   const double pool = p.M;
                   const double z = z_h2h + z_m2m;
                   return ClassSuccess<double>{success_prob_h2h(z, pool),
                                               detail::clamp_unit(detail::contention_term(z, pool, form))};
                 },
                 [&](const DisjointPolicy& p) {
                   return ClassSuccess<double>{success_prob_h2h(z_h2h, double(p.a)),
                                               detail::clamp_unit(detail::contention_term(
                                                  z_m2m, double(p.M - p.a), form))};
                 },
                 [&](const JointPolicy& p) {
                   return ja_success_probs(z_h2h, z_m2m, double(p.x), double(p.M), mode, form);
                 }},
      policy);
}

PopulationGrid propagate(const AllocationPolicy& policy, const TransitionMatrix& matrix,
                         const NewArrivals& new_arrivals, int max_transmissions, JaMode mode,
                         SuccessForm form) {
  validate(policy);
  if (max_transmissions < 1) throw std::invalid_argument("W must be >= 1");
  const int eta = matrix.dimension();
  if (new_arrivals.h2h.size() != eta || new_arrivals.m2m.size() != eta)
    throw std::invalid_argument("arrival horizon does not match matrix dimension " +
                                std::to_string(eta));
  if ((new_arrivals.h2h.array() < 0.0).any() || (new_arrivals.m2m.array() < 0.0).any())
    throw std::invalid_argument("new arrivals must be >= 0");

  const int W = max_transmissions;
  PopulationGrid grid;
  grid.eta = eta;
  grid.max_transmissions = W;
  for (UeClass c : kUeClasses) {
    ClassPopulation& pop = grid[c];
    pop.arrivals = Eigen::MatrixXd::Zero(eta, W);
    pop.success = Eigen::MatrixXd::Zero(eta, W);
    pop.fail = Eigen::MatrixXd::Zero(eta, W);
    pop.success_prob = Eigen::VectorXd::Ones(eta);
    pop.offered = (c == UeClass::H2H ? new_arrivals.h2h : new_arrivals.m2m).sum();
  }

  ClassPopulation& h2h = grid[UeClass::H2H];
  ClassPopulation& m2m = grid[UeClass::M2M];
  for (int i = 0; i < eta; ++i) {
    h2h.arrivals(i, 0) = new_arrivals.h2h(i);
    m2m.arrivals(i, 0) = new_arrivals.m2m(i);

    const auto ps = slot_success_probs(policy, h2h.arrivals.row(i).sum(),
                                       m2m.arrivals.row(i).sum(), mode, form);
    h2h.success_prob(i) = ps.h2h;
    m2m.success_prob(i) = ps.m2m;

    for (ClassPopulation* pop : {&h2h, &m2m}) {
      pop->success.row(i) = pop->arrivals.row(i) * pop->success_prob(i);
      pop->fail.row(i) = pop->arrivals.row(i) - pop->success.row(i);
      pop->blocked += pop->fail(i, W - 1);
      if (W == 1) continue;
      const auto retrying = pop->fail.row(i).head(W - 1);
      for (TransitionMatrix::OriginMajor::InnerIterator it(matrix.by_origin(), i); it; ++it)
        pop->arrivals.row(it.row()).segment(1, W - 1) += it.value() * retrying;
      pop->in_flight += retrying.sum() * matrix.beyond_horizon(i + 1);
    }
  }
  return grid;
}

}  // namespace rach
