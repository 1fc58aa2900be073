#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace rach {

/// Equally spaced random-access time slots (RA-TS) over an activation horizon.
/// Slot i (1-based) occurs at i * delta_sf; slot_time(0) = 0 marks the origin.
class SlotGrid {
 public:
  SlotGrid(int delta_sf_ms, int horizon_ms);

  int delta_sf() const { return delta_sf_; }
  int horizon() const { return horizon_; }
  int eta() const { return eta_; }

  /// Time of RA-TS i in ms, i in [0, eta]. Also defined past eta for backoff bookkeeping.
  long slot_time(int i) const { return static_cast<long>(i) * delta_sf_; }

  /// First RA-TS at or after t (never below 1). May exceed eta.
  int slot_at_or_after(double t_ms) const;

 private:
  int delta_sf_;
  int horizon_;
  int eta_;
};

/// Uniform activation over [0, T].
struct M2MType1 {
  long n_mtc = 0;
};

/// Beta(alpha, beta) activation over [0, T].
struct M2MType2 {
  double alpha = 3.0;
  double beta = 4.0;
  long n_mtc = 0;
};

/// Time-homogeneous Poisson arrivals, expressed per RA-TS.
struct H2HPoisson {
  double lambda_slot = 0.0;

  static H2HPoisson per_second(double calls_per_second, const SlotGrid& grid) {
    return H2HPoisson{calls_per_second * grid.delta_sf() / 1000.0};
  }
};

using ArrivalModel = std::variant<M2MType1, M2MType2, H2HPoisson>;

bool is_m2m(const ArrivalModel& model);

/// Throws std::invalid_argument when a shape/count parameter is out of range.
void validate(const ArrivalModel& model);

/// Fraction of M2M devices activated by time t (the CDF of g over [0, T]).
double activation_cdf(const ArrivalModel& model, const SlotGrid& grid, double t_ms);

/// Expected M2M new arrivals attaching to RA-TS i: N_MTC times the mass of g over
/// (t_{i-1}, t_i].
double m2m_new_arrivals(const ArrivalModel& model, const SlotGrid& grid, int i);

/// m2m_new_arrivals for every slot; entry i-1 holds slot i.
Eigen::VectorXd m2m_arrival_profile(const ArrivalModel& model, const SlotGrid& grid);

/// Mean H2H new arrivals at RA-TS i.
double h2h_mean(const ArrivalModel& model, int i);

/// Expected new arrivals per slot for any model (H2H: constant lambda).
Eigen::VectorXd expected_new_arrivals(const ArrivalModel& model, const SlotGrid& grid);

/// Sampled arrival times in ms, sorted ascending. Deterministic for a fixed seed.
std::vector<double> sample_arrivals(const ArrivalModel& model, const SlotGrid& grid,
                                    std::uint64_t seed);

}  // namespace rach
