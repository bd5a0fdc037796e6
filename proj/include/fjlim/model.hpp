#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fjlim/graph.hpp"
#include "fjlim/linalg.hpp"
#include "fjlim/types.hpp"

// The opinion-dynamics layer: anchored (Friedkin-Johnsen) and unanchored
// (DeGroot) recursions, the effective matrix (I - Sigma) W, steady states,
// the static gain H(sigma_max), and settling-time measurement.

namespace fjlim {

/// Validated nonnegative row-stochastic irreducible matrix W with a cached
/// nonzero pattern.
class InfluenceMatrix {
 public:
  static constexpr double kRowSumTol = 1e-12;

  /// Validates entries, row sums, and strong connectivity of the nonzero
  /// pattern; throws AssumptionViolated naming the failed assumption with
  /// coordinates.
  static InfluenceMatrix validated(Matrix w);

  int size() const { return static_cast<int>(w_.rows()); }
  const Matrix& matrix() const { return w_; }
  const GraphPattern& pattern() const { return pattern_; }

 private:
  InfluenceMatrix(Matrix w, GraphPattern pattern)
      : w_(std::move(w)), pattern_(std::move(pattern)) {}

  Matrix w_;
  GraphPattern pattern_;
};

struct ImmunityOptions {
  /// Assumption bound: sigma_max <= 1 - epsilon.
  double epsilon = 1e-6;
  /// Accept p_i = 0 for some (not all) agents.
  bool allow_zero = false;
  /// Rescale p so its maximum is exactly 1 instead of rejecting, recording a
  /// warning.
  bool renormalize = false;
};

/// The pair (sigma_max, p) representing Sigma = sigma_max * diag(p), with
/// max_i p_i = 1 so that the decomposition is unambiguous.
class ImmunityProfile {
 public:
  static constexpr double kMaxCoeffTol = 1e-12;

  static ImmunityProfile validated(double sigma_max, Vector p,
                                   const ImmunityOptions& options = {});

  double sigma_max() const { return sigma_max_; }
  const Vector& coefficients() const { return p_; }
  /// Diagonal of Sigma: sigma_i = sigma_max * p_i.
  Vector sigma() const { return sigma_max_ * p_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  ImmunityProfile(double sigma_max, Vector p, std::vector<std::string> warnings)
      : sigma_max_(sigma_max), p_(std::move(p)), warnings_(std::move(warnings)) {}

  double sigma_max_;
  Vector p_;
  std::vector<std::string> warnings_;
};

/// Agent opinions. Entries outside [0, 1] attach a warning, not an error: the
/// dynamics are well defined for any real vector.
struct OpinionVector {
  Vector y;
  std::vector<std::string> warnings;

  static OpinionVector of(Vector y);
  int size() const { return static_cast<int>(y.size()); }
};

/// Static gain H(sigma_max) or its rank-one limit. Row sums are 1 and entries
/// are nonnegative up to roundoff; both are checked at construction.
struct GainMatrix {
  enum class Kind { exact, limit };

  Matrix h;
  Kind kind = Kind::exact;
  double sigma_max = 0.0;  // meaningful for kind == exact

  static constexpr double kRowSumTol = 1e-9;
  static constexpr double kNonnegTol = 1e-10;

  static GainMatrix checked(Matrix h, Kind kind, double sigma_max);
};

/// Discrete trajectory y(0), y(1), ..., y(k_max).
struct Trajectory {
  std::vector<Vector> steps;

  int step_count() const { return static_cast<int>(steps.size()); }
  const Vector& back() const { return steps.back(); }
};

/// Effective matrix (I - Sigma) W: row i is (1 - sigma_i) w_i'. The nonzero
/// pattern equals W's.
Matrix effective_matrix(const InfluenceMatrix& w, const ImmunityProfile& prof);

/// y(k+1) = W y(k).
Trajectory degroot_simulate(const InfluenceMatrix& w, const OpinionVector& y0,
                            int k_max);

/// y(k+1) = (I - Sigma) W y(k) + Sigma y0.
Trajectory fj_simulate(const InfluenceMatrix& w, const ImmunityProfile& prof,
                       const OpinionVector& y0, int k_max);

/// Same recursion written as y(k+1) = Lambda W y(k) + (I - Lambda) y0 with
/// Lambda = I - Sigma; bitwise-identical to fj_simulate for the same profile.
Trajectory fj_simulate_susceptibility_form(const InfluenceMatrix& w,
                                           const ImmunityProfile& prof,
                                           const OpinionVector& y0, int k_max);

/// Fixed point ybar of the anchored recursion: solves
/// [I - (I - Sigma) W] ybar = Sigma y0.
OpinionVector steady_state(const InfluenceMatrix& w, const ImmunityProfile& prof,
                           const OpinionVector& y0);

/// Static gain H = sigma_max [I - (I - sigma_max diag(p)) W]^{-1} diag(p),
/// the map from initial opinions to steady-state opinions.
GainMatrix static_gain(const InfluenceMatrix& w, const ImmunityProfile& prof);

/// Smallest k such that ||y(j) - ybar||_inf stays within
/// (1 - fraction) * ||y(0) - ybar||_inf for every j >= k in the trajectory.
/// Throws NotSettled when even the final step is outside the band.
int settling_time(const Trajectory& traj, const OpinionVector& y_bar,
                  double fraction = 0.95);

/// Simulates up to ceil(50 / sigma_max) steps against the exact steady state
/// and returns the settling time; the horizon tracks the Theta(1/sigma_max)
/// mixing time of the effective matrix.
int settling_steps(const InfluenceMatrix& w, const ImmunityProfile& prof,
                   const OpinionVector& y0, double fraction = 0.95);

}  // namespace fjlim
