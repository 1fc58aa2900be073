#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <boost/rational.hpp>

#include "rach/traffic.hpp"
#include "rach/types.hpp"

namespace rach {

/// RAR wait and backoff window. A UE that collides at t_j may reattempt at any
/// integer ms in [bo_min(j), bo_max(j)], each with probability 1 / window_count().
struct BackoffGeometry {
  int t_rar_ms = 2;
  int w_rar_ms = 5;
  int w_bo_ms = 20;

  int rar_wait() const { return t_rar_ms + w_rar_ms; }
  int window_count() const { return w_bo_ms + 1; }
  long bo_min(const SlotGrid& grid, int j) const { return grid.slot_time(j) + rar_wait(); }
  long bo_max(const SlotGrid& grid, int j) const { return bo_min(grid, j) + w_bo_ms; }
};

void validate(const BackoffGeometry& geom);

struct SharedPolicy {
  int M = 54;
};

/// H2H gets `a` preambles exclusively, M2M the remaining M - a.
struct DisjointPolicy {
  int a = 10;
  int M = 54;
};

/// H2H restricted to `x` preambles; M2M picks from all M, so it shares those x.
struct JointPolicy {
  int x = 10;
  int M = 54;
};

using AllocationPolicy = std::variant<SharedPolicy, DisjointPolicy, JointPolicy>;

void validate(const AllocationPolicy& policy);
int total_preambles(const AllocationPolicy& policy);

/// How the M2M success probability under joint allocation combines its two partitions.
enum class JaMode {
  Mixture,    ///< weighted by the probability of landing in each partition
  AsWritten,  ///< plain sum of the two partition terms, clamped to 1
};

/// How a class contention term is evaluated on a mean contender count Z.
enum class SuccessForm {
  Tagged,   ///< (1 - 1/pool)^max(Z - 1, 0): Z taken as an exact head count
  Poisson,  ///< exp(-Z / pool): contender count Poisson with mean Z
};

namespace detail {

template <typename Scalar>
Scalar power(const Scalar& base, const Scalar& exponent) {
  using std::pow;
  return pow(base, exponent);
}

template <typename Int>
boost::rational<Int> power(const boost::rational<Int>& base, const boost::rational<Int>& exponent) {
  if (exponent.denominator() != 1)
    throw std::domain_error("rational power needs an integral exponent");
  boost::rational<Int> out(1);
  for (Int k = 0; k < exponent.numerator(); ++k) out *= base;
  return out;
}

template <typename Scalar>
Scalar clamp_unit(const Scalar& p) {
  if (p < Scalar(0)) return Scalar(0);
  if (p > Scalar(1)) return Scalar(1);
  return p;
}

/// (1 - 1/pool)^max(z - 1, 0)
template <typename Scalar>
Scalar tagged_term(const Scalar& z, const Scalar& pool) {
  const Scalar one(1);
  const Scalar exponent = z > one ? Scalar(z - one) : Scalar(0);
  return power(Scalar(one - one / pool), exponent);
}

template <typename Scalar>
Scalar contention_term(const Scalar& z, const Scalar& pool, SuccessForm form) {
  using std::exp;
  return form == SuccessForm::Tagged ? tagged_term(z, pool) : Scalar(exp(-z / pool));
}

}  // namespace detail

/// Probability a tagged contender is alone on its preamble when `contenders`
/// UEs (including itself) pick uniformly from `pool` preambles.
template <typename Scalar>
Scalar success_prob_m2m(const Scalar& contenders, const Scalar& pool) {
  if (!(pool >= Scalar(1))) throw std::domain_error("preamble pool must be >= 1");
  return detail::clamp_unit(detail::tagged_term(contenders, pool));
}

/// Poisson-form success probability exp(-Z / pool).
template <typename Scalar>
Scalar success_prob_h2h(const Scalar& contenders, const Scalar& pool) {
  if (!(pool >= Scalar(1))) throw std::domain_error("preamble pool must be >= 1");
  using std::exp;
  return exp(-contenders / pool);
}

template <typename Scalar>
struct ClassSuccess {
  Scalar h2h;
  Scalar m2m;
};

/// Per-class success probabilities when H2H is confined to x shared preambles
/// and M2M spreads over all M.
template <typename Scalar>
ClassSuccess<Scalar> ja_success_probs(const Scalar& z_h2h, const Scalar& z_m2m, const Scalar& x,
                                      const Scalar& M, JaMode mode = JaMode::Mixture,
                                      SuccessForm form = SuccessForm::Poisson) {
  if (!(x > Scalar(0) && x < M)) throw std::domain_error("x must satisfy 0 < x < M");
  using std::exp;
  const Scalar rest = M - x;
  const Scalar shared_term = detail::contention_term(Scalar(z_h2h + z_m2m * x / M), x, form);
  const Scalar own_term = detail::contention_term(Scalar(z_m2m * rest / M), rest, form);
  Scalar m2m = mode == JaMode::Mixture ? Scalar(x / M * shared_term + rest / M * own_term)
                                       : Scalar(shared_term + own_term);
  return {exp(-z_h2h / x), detail::clamp_unit(m2m)};
}

/// Number of earlier slots whose backoff window reaches slot i.
int max_lag(int i, const BackoffGeometry& geom, const SlotGrid& grid);

/// Probability that a UE colliding at slot j next attempts at slot i.
/// Counts the integer backoff expiries u in [bo_min(j), bo_max(j)] whose first RA-TS
/// at or after u is slot i. Throws std::domain_error unless 1 <= j < i.
double transition_prob(int i, int j, const BackoffGeometry& geom, const SlotGrid& grid);

/// Strictly lower-triangular backoff kernel P(i, j), destination i, origin j, both 1-based.
class TransitionMatrix {
 public:
  using OriginMajor = Eigen::SparseMatrix<double, Eigen::ColMajor>;
  using DestMajor = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  TransitionMatrix(OriginMajor kernel, Eigen::VectorXd beyond_horizon);

  int dimension() const { return static_cast<int>(by_origin_.rows()); }
  double operator()(int dest, int origin) const;

  /// Columns are origins (index j - 1).
  const OriginMajor& by_origin() const { return by_origin_; }
  /// Rows are destinations (index i - 1).
  const DestMajor& by_dest() const { return by_dest_; }

  /// Sum over destinations inside the horizon.
  double origin_mass(int j) const;
  /// Mass from origin j whose reattempt falls after the last slot.
  double beyond_horizon(int j) const { return beyond_(j - 1); }

 private:
  OriginMajor by_origin_;
  DestMajor by_dest_;
  Eigen::VectorXd beyond_;
};

TransitionMatrix build_matrix(const BackoffGeometry& geom, const SlotGrid& grid);

/// Expected populations of one class, indexed (slot - 1, retry order - 1).
struct ClassPopulation {
  Eigen::MatrixXd arrivals;
  Eigen::MatrixXd success;
  Eigen::MatrixXd fail;
  Eigen::VectorXd success_prob;  ///< per slot
  double offered = 0.0;          ///< total new arrivals inside the horizon
  double blocked = 0.0;          ///< failures on the W-th attempt
  double in_flight = 0.0;        ///< retries scheduled past the last slot
};

struct PopulationGrid {
  int eta = 0;
  int max_transmissions = 0;
  std::array<ClassPopulation, 2> classes;

  const ClassPopulation& operator[](UeClass c) const { return classes[index_of(c)]; }
  ClassPopulation& operator[](UeClass c) { return classes[index_of(c)]; }

  /// Z(i, n, c), 1-based.
  double expected(int i, int n, UeClass c) const { return (*this)[c].arrivals(i - 1, n - 1); }
  double expected_success(int i, int n, UeClass c) const {
    return (*this)[c].success(i - 1, n - 1);
  }
  double expected_fail(int i, int n, UeClass c) const { return (*this)[c].fail(i - 1, n - 1); }
  /// Sum over retry orders.
  double slot_total(int i, UeClass c) const { return (*this)[c].arrivals.row(i - 1).sum(); }
};

struct NewArrivals {
  Eigen::VectorXd h2h;
  Eigen::VectorXd m2m;
};

/// Per-class success probabilities at one slot given class contender totals.
ClassSuccess<double> slot_success_probs(const AllocationPolicy& policy, double z_h2h,
                                        double z_m2m, JaMode mode = JaMode::Mixture,
                                        SuccessForm form = SuccessForm::Poisson);

/// Forward mean-field recursion of the slot populations under an allocation policy.
PopulationGrid propagate(const AllocationPolicy& policy, const TransitionMatrix& matrix,
                         const NewArrivals& new_arrivals, int max_transmissions,
                         JaMode mode = JaMode::Mixture,
                         SuccessForm form = SuccessForm::Poisson);

}  // namespace rach
