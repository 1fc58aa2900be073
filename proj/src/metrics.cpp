#include "rach/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace rach {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
double sum_classes(Scope scope, F&& f) {
  double s = 0.0;
  for (UeClass c : kUeClasses)
    if (includes(scope, c)) s += f(c);
  return s;
}

double total_success(const PopulationGrid& pop, Scope scope) {
  return sum_classes(scope, [&](UeClass c) { return pop[c].success.sum(); });
}

void check_slot(const PopulationGrid& pop, int i) {
  if (i < 1 || i > pop.eta) throw std::out_of_range("slot " + std::to_string(i) + " outside [1, eta]");
}

double retry_lag_ms(int i, int j, const BackoffGeometry& geom, const SlotGrid& grid, LagMode lag) {
  if (lag == LagMode::OriginMaxLag) return double(max_lag(j, geom, grid)) * grid.delta_sf();
  return double(i - j) * grid.delta_sf();
}

double delay_mass_upto(const PopulationGrid& pop, const TransitionMatrix& matrix,
                       const BackoffGeometry& geom, const SlotGrid& grid, int omega, Scope scope,
                       LagMode lag) {
  double mass = 0.0;
  for (int i = 1; i <= pop.eta; ++i) {
    mass += delay_mass_new(pop, i, geom, grid, scope);
    for (int n = 2; n <= omega; ++n) mass += delay_mass_retx(pop, matrix, i, n, geom, grid, scope, lag);
  }
  return mass;
}

}  // namespace

double access_success_probability(const PopulationGrid& pop, Scope scope) {
  const double offered = sum_classes(scope, [&](UeClass c) { return pop[c].offered; });
  if (!(offered > 0.0)) throw std::domain_error("no arrivals in grid");
  return total_success(pop, scope) / offered;
}

double collision_probability(const PopulationGrid& pop, int M, int eta, Scope scope) {
  if (M <= 0 || eta <= 0) throw std::domain_error("collision probability needs M > 0 and eta > 0");
  return sum_classes(scope, [&](UeClass c) { return pop[c].fail.sum(); }) / (double(eta) * M);
}

double preamble_tx_cdf(const PopulationGrid& pop, int r, Scope scope) {
  if (r < 1 || r > pop.max_transmissions) throw std::out_of_range("r outside [1, W]");
  const double all = total_success(pop, scope);
  if (!(all > 0.0)) throw std::domain_error("no expected successes");
  const double within =
      sum_classes(scope, [&](UeClass c) { return pop[c].success.leftCols(r).sum(); });
  return within / all;
}

double delay_mass_new(const PopulationGrid& pop, int i, const BackoffGeometry& geom,
                      const SlotGrid& grid, Scope scope) {
  check_slot(pop, i);
  const double per_ue = grid.delta_sf() / 2.0 + geom.rar_wait();
  return sum_classes(scope, [&](UeClass c) { return pop[c].success(i - 1, 0); }) * per_ue;
}

double delay_mass_retx(const PopulationGrid& pop, const TransitionMatrix& matrix, int i, int n,
                       const BackoffGeometry& geom, const SlotGrid& grid, Scope scope, LagMode lag) {
  check_slot(pop, i);
  if (n < 2 || n > pop.max_transmissions) throw std::out_of_range("n outside [2, W]");
  double mass = 0.0;
  for (TransitionMatrix::DestMajor::InnerIterator it(matrix.by_dest(), i - 1); it; ++it) {
    const int j = static_cast<int>(it.col()) + 1;
    const double per_ue = retry_lag_ms(i, j, geom, grid, lag) + geom.rar_wait();
    mass += sum_classes(scope, [&](UeClass c) {
              return pop[c].fail(j - 1, n - 2) * it.value() * pop[c].success_prob(i - 1);
            }) *
            per_ue;
  }
  return mass;
}

double access_delay_cdf(const PopulationGrid& pop, const TransitionMatrix& matrix,
                        const BackoffGeometry& geom, const SlotGrid& grid, int omega, Scope scope,
                        LagMode lag) {
  if (omega < 1 || omega > pop.max_transmissions) throw std::out_of_range("omega outside [1, W]");
  const double all = total_success(pop, scope);
  if (!(all > 0.0)) throw std::domain_error("no expected successes");
  return delay_mass_upto(pop, matrix, geom, grid, omega, scope, lag) / all;
}

double expected_access_delay(const PopulationGrid& pop, const TransitionMatrix& matrix,
                             const BackoffGeometry& geom, const SlotGrid& grid, Scope scope,
                             LagMode lag) {
  return access_delay_cdf(pop, matrix, geom, grid, pop.max_transmissions, scope, lag);
}

MetricsReport analyze_metrics(const PopulationGrid& pop, const TransitionMatrix& matrix,
                              const BackoffGeometry& geom, const SlotGrid& grid, int M,
                              LagMode lag) {
  MetricsReport report;
  const int W = pop.max_transmissions;
  for (Scope s : kScopes) {
    ClassMetrics& m = report[s];
    m.offered = sum_classes(s, [&](UeClass c) { return pop[c].offered; });
    m.successes = total_success(pop, s);
    m.failures = sum_classes(s, [&](UeClass c) { return pop[c].fail.sum(); });
    m.blocked = sum_classes(s, [&](UeClass c) { return pop[c].blocked; });
    m.in_flight = sum_classes(s, [&](UeClass c) { return pop[c].in_flight; });
    m.collision_prob = collision_probability(pop, M, pop.eta, s);
    if (m.offered > 0.0) m.success_prob = access_success_probability(pop, s);
    if (m.successes > 0.0) {
      const double delay_mass_all = delay_mass_upto(pop, matrix, geom, grid, W, s, lag);
      double mass = 0.0;
      for (int r = 1; r <= W; ++r) {
        m.preamble_cdf.push_back(preamble_tx_cdf(pop, r, s));
        for (int i = 1; i <= pop.eta; ++i)
          mass += r == 1 ? delay_mass_new(pop, i, geom, grid, s)
                         : delay_mass_retx(pop, matrix, i, r, geom, grid, s, lag);
        m.delay_mass_cdf.push_back(r == W ? delay_mass_all / m.successes : mass / m.successes);
      }
      m.expected_delay_ms = delay_mass_all / m.successes;
    } else {
      m.preamble_cdf.assign(W, kNaN);
      m.delay_mass_cdf.assign(W, kNaN);
    }
  }
  report.collision_above_one = report[Scope::Total].collision_prob > 1.0;
  return report;
}

// ---------------------------------------------------------------------------
// Trace path

namespace {

bool active(const UeRecord& ue) { return !ue.attempts.empty(); }

template <typename F>
void for_each_ue(const SimTrace& trace, Scope scope, F&& f) {
  for (const UeRecord& ue : trace.ues)
    if (includes(scope, ue.cls)) f(ue);
}

std::vector<const UeRecord*> successes_of(const SimTrace& trace, Scope scope) {
  std::vector<const UeRecord*> out;
  for_each_ue(trace, scope, [&](const UeRecord& ue) {
    if (ue.final_state == FinalState::Success) out.push_back(&ue);
  });
  return out;
}

}  // namespace

double access_success_probability(const SimTrace& trace, Scope scope) {
  double offered = 0.0;
  double ok = 0.0;
  for_each_ue(trace, scope, [&](const UeRecord& ue) {
    if (!active(ue)) return;
    offered += 1.0;
    if (ue.final_state == FinalState::Success) ok += 1.0;
  });
  if (offered == 0.0) throw std::domain_error("no active UEs in trace");
  return ok / offered;
}

double collision_probability(const SimTrace& trace, Scope scope) {
  const int eta = trace.config.grid().eta();
  const int M = trace.config.rach.M;
  if (M <= 0 || eta <= 0) throw std::domain_error("collision probability needs M > 0 and eta > 0");
  double collided = 0.0;
  for_each_ue(trace, scope, [&](const UeRecord& ue) {
    for (const Attempt& a : ue.attempts) collided += a.success ? 0.0 : 1.0;
  });
  return collided / (double(eta) * M);
}

double preamble_tx_cdf(const SimTrace& trace, int r, Scope scope) {
  if (r < 1 || r > trace.config.rach.W) throw std::out_of_range("r outside [1, W]");
  const auto ok = successes_of(trace, scope);
  if (ok.empty()) throw std::domain_error("no successes in trace");
  const auto within = std::count_if(ok.begin(), ok.end(), [&](const UeRecord* ue) {
    return static_cast<int>(ue->attempts.size()) <= r;
  });
  return double(within) / double(ok.size());
}

double expected_access_delay(const SimTrace& trace, Scope scope) {
  return access_delay_cdf(trace, trace.config.rach.W, scope);
}

double access_delay_cdf(const SimTrace& trace, int omega, Scope scope) {
  if (omega < 1 || omega > trace.config.rach.W) throw std::out_of_range("omega outside [1, W]");
  const auto ok = successes_of(trace, scope);
  if (ok.empty()) throw std::domain_error("no successes in trace");
  double mass = 0.0;
  for (const UeRecord* ue : ok)
    if (static_cast<int>(ue->attempts.size()) <= omega) mass += ue->delay_ms;
  return mass / double(ok.size());
}

double empirical_delay_cdf(const SimTrace& trace, double d_ms, Scope scope) {
  const auto ok = successes_of(trace, scope);
  if (ok.empty()) throw std::domain_error("no successes in trace");
  const auto within =
      std::count_if(ok.begin(), ok.end(), [&](const UeRecord* ue) { return ue->delay_ms <= d_ms; });
  return double(within) / double(ok.size());
}

MetricsReport trace_metrics(const SimTrace& trace) {
  MetricsReport report;
  const int W = trace.config.rach.W;
  for (Scope s : kScopes) {
    ClassMetrics& m = report[s];
    for_each_ue(trace, s, [&](const UeRecord& ue) {
      if (!active(ue)) return;
      m.offered += 1.0;
      for (const Attempt& a : ue.attempts) m.failures += a.success ? 0.0 : 1.0;
      switch (ue.final_state) {
        case FinalState::Success: m.successes += 1.0; break;
        case FinalState::Blocked: m.blocked += 1.0; break;
        case FinalState::InFlight: m.in_flight += 1.0; break;
      }
    });
    m.collision_prob = collision_probability(trace, s);
    if (m.offered > 0.0) m.success_prob = m.successes / m.offered;
    if (m.successes > 0.0) {
      for (int r = 1; r <= W; ++r) {
        m.preamble_cdf.push_back(preamble_tx_cdf(trace, r, s));
        m.delay_mass_cdf.push_back(access_delay_cdf(trace, r, s));
      }
      m.expected_delay_ms = m.delay_mass_cdf.back();
      // Step function over distinct delays.
      std::map<double, int> histogram;
      for (const UeRecord* ue : successes_of(trace, s)) ++histogram[ue->delay_ms];
      double cumulative = 0.0;
      for (const auto& [delay, count] : histogram) {
        cumulative += count;
        m.delay_cdf.emplace_back(delay, cumulative / m.successes);
      }
    } else {
      m.preamble_cdf.assign(W, kNaN);
      m.delay_mass_cdf.assign(W, kNaN);
    }
  }
  report.collision_above_one = report[Scope::Total].collision_prob > 1.0;
  return report;
}

}  // namespace rach
