#pragma once

#include <optional>
#include <vector>

#include "fjlim/model.hpp"
#include "fjlim/spectral.hpp"
#include "fjlim/types.hpp"

// Asymptotics of the static gain as sigma_max -> 0+: the rank-one limit gain,
// convergence-rate estimation, quasi-consensus metrics, the norm-boundedness
// constant, the order of the double limit, and the two-timescale trace.

namespace fjlim {

/// Rank-one limit of H(sigma_max) as sigma_max -> 0+: every row equals
/// alpha' diag(p) / (alpha' diag(p) 1).
GainMatrix limit_gain(const InfluenceMatrix& w, const Vector& sigma_tilde);

/// Relative spectral-norm gap ||H - Hbar|| / ||H||.
double gain_gap(const GainMatrix& h, const GainMatrix& h_bar);

/// Largest pairwise opinion difference max_i y_i - min_i y_i.
double quasi_consensus_gap(const OpinionVector& y);

/// Throws GridNotDecreasing unless every value lies in (0, 1) and the
/// sequence is strictly decreasing.
void validate_grid(const std::vector<double>& grid);

struct RateReport {
  std::vector<double> grid;        // strictly decreasing, in (0, 1)
  std::vector<double> gaps;        // ||H - Hbar|| / ||H|| per grid point
  std::vector<double> quasi_gaps;  // max_ij |ybar_i - ybar_j| per grid point
  double fitted_slope = 0.0;       // log-log least squares, smallest 3 points
};

/// Sweeps the gain gap and quasi-consensus gap over a sigma_max grid and fits
/// the convergence order; a slope near 1 certifies the O(sigma_max) rate. The
/// fit uses the smallest three grid points (larger sigma_max values sit
/// outside the asymptotic regime).
RateReport rate_study(const InfluenceMatrix& w, const Vector& sigma_tilde,
                      const OpinionVector& y0, const std::vector<double>& grid);

/// Per-instance quasi-consensus constant M such that
/// max_ij |ybar_i - ybar_j| <= M sigma_max is expected to hold for all
/// sigma_max below sigma_fit. Fitted as 1.5x the observed ratio at sigma_fit;
/// the headroom absorbs the O(sigma_max) drift of the ratio.
double quasi_consensus_fit(const InfluenceMatrix& w, const Vector& sigma_tilde,
                           const OpinionVector& y0, double sigma_fit);

struct HNormBoundReport {
  std::vector<double> grid;
  std::vector<double> h_norms;   // ||H(sigma_max)|| per grid point
  double d0 = 0.0;               // min |1 - lambda_i(W)| over non-Perron i
  double c_w = 0.0;              // ((n-1)/(4n))^{(n-1)/2} d0^{n-1}
  double limit_bound = 0.0;      // 1 / (c_w alpha' diag(p) 1)
  bool bounded = false;          // all finite and max <= 10 * min
};

/// Evidence that ||H(sigma_max)|| stays bounded as sigma_max -> 0+, together
/// with the explicit limit constant. Throws DegenerateSpectrum when some
/// non-Perron eigenvalue of W lies within 1e-10 of 1.
HNormBoundReport h_norm_bound_study(const InfluenceMatrix& w,
                                    const Vector& sigma_tilde,
                                    const std::vector<double>& grid);

struct DoubleLimitResult {
  Vector inner_then_outer;  // lim_{sigma->0+} lim_{k->inf} y(sigma, k)
  Vector outer_then_inner;  // lim_{k->inf} lim_{sigma->0+} y(sigma, k)
};

/// Evaluates both orders of the double limit numerically. The inner-first
/// route takes the exact steady state and extrapolates sigma -> 0+ from
/// small_sigma and 2*small_sigma (second-order accurate, avoiding the
/// roundoff blow-up of a single solve at tiny sigma); the outer-first route
/// runs the DeGroot recursion for k_large steps. Requires W primitive, since
/// the sigma = 0 dynamics only converge in that case.
DoubleLimitResult double_limit_check(const InfluenceMatrix& w,
                                     const Vector& sigma_tilde,
                                     const OpinionVector& y0, double small_sigma,
                                     int k_large);

struct TimescaleReport {
  double degroot_consensus = 0.0;  // alpha' y0
  double limit_consensus = 0.0;    // alpha' diag(p) y0 / (alpha' diag(p) 1)
  std::optional<int> plateau_step;
  double plateau_spread = 0.0;
  double plateau_mean = 0.0;
  Vector final_state;
};

/// Scans the anchored trajectory for the early DeGroot plateau: the first
/// step whose spread falls below 5% of the initial spread while the mean sits
/// within 2% of the initial spread of alpha' y0. An absent plateau_step means
/// the trajectory has a single time scale at this sigma_max. Requires W
/// primitive.
TimescaleReport timescale_trace(const InfluenceMatrix& w,
                                const ImmunityProfile& prof,
                                const OpinionVector& y0, int k_max);

}  // namespace fjlim
