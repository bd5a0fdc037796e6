#include "fjlim/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fjlim/errors.hpp"
#include "fjlim/linalg.hpp"

namespace fjlim {

namespace {

constexpr double kBoundedFactor = 10.0;
constexpr double kQuasiFitHeadroom = 1.5;
constexpr double kPlateauSpreadFraction = 0.05;
constexpr double kPlateauMeanFraction = 0.02;

double spread(const Vector& y) { return y.maxCoeff() - y.minCoeff(); }

// Least-squares slope of log(value) against log(sigma) over the tail of the
// grid (the smallest `points` sigma values).
double loglog_slope(const std::vector<double>& grid,
                    const std::vector<double>& values, std::size_t points) {
  const std::size_t count = std::min(points, grid.size());
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t start = grid.size() - count;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = start; i < grid.size(); ++i) {
    const double lx = std::log(grid[i]);
    const double ly = std::log(values[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const auto m = static_cast<double>(count);
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ImmunityProfile profile_at(const Vector& sigma_tilde, double sigma_max) {
  return ImmunityProfile::validated(sigma_max, sigma_tilde);
}

}  // namespace

GainMatrix limit_gain(const InfluenceMatrix& w, const Vector& sigma_tilde) {
  const Vector alpha = left_perron_vector(w);
  const Vector weighted = alpha.cwiseProduct(sigma_tilde);
  const double q1 = weighted.sum();
  if (!(q1 > 0.0)) {
    throw Error("limit_gain: alpha' diag(p) 1 = " + std::to_string(q1));
  }
  const Index n = w.matrix().rows();
  Matrix h_bar(n, n);
  h_bar = Vector::Ones(n) * (weighted / q1).transpose();
  return GainMatrix::checked(std::move(h_bar), GainMatrix::Kind::limit, 0.0);
}

double gain_gap(const GainMatrix& h, const GainMatrix& h_bar) {
  if (h.h.rows() != h_bar.h.rows()) {
    throw Error("gain_gap: dimension mismatch");
  }
  return spectral_norm(h.h - h_bar.h) / spectral_norm(h.h);
}

double quasi_consensus_gap(const OpinionVector& y) {
  if (y.y.size() == 0) return 0.0;
  return spread(y.y);
}

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) {
    throw GridNotDecreasing("sigma_max grid is empty");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < 1.0)) {
      throw GridNotDecreasing("sigma_max grid value " + std::to_string(grid[i]) +
                              " lies outside (0, 1)");
    }
    if (i > 0 && !(grid[i] < grid[i - 1])) {
      throw GridNotDecreasing("sigma_max grid is not strictly decreasing at "
                              "position " + std::to_string(i));
    }
  }
}

RateReport rate_study(const InfluenceMatrix& w, const Vector& sigma_tilde,
                      const OpinionVector& y0, const std::vector<double>& grid) {
  validate_grid(grid);
  const GainMatrix h_bar = limit_gain(w, sigma_tilde);
  RateReport report;
  report.grid = grid;
  for (const double sigma_max : grid) {
    const ImmunityProfile prof = profile_at(sigma_tilde, sigma_max);
    report.gaps.push_back(gain_gap(static_gain(w, prof), h_bar));
    report.quasi_gaps.push_back(quasi_consensus_gap(steady_state(w, prof, y0)));
  }
  report.fitted_slope = loglog_slope(report.grid, report.gaps, 3);
  return report;
}

double quasi_consensus_fit(const InfluenceMatrix& w, const Vector& sigma_tilde,
                           const OpinionVector& y0, double sigma_fit) {
  const ImmunityProfile prof = profile_at(sigma_tilde, sigma_fit);
  return kQuasiFitHeadroom * quasi_consensus_gap(steady_state(w, prof, y0)) /
         sigma_fit;
}

HNormBoundReport h_norm_bound_study(const InfluenceMatrix& w,
                                    const Vector& sigma_tilde,
                                    const std::vector<double>& grid) {
  validate_grid(grid);
  const auto spectrum = eigenvalues(w.matrix());
  std::size_t perron = 0;
  for (std::size_t i = 1; i < spectrum.size(); ++i) {
    if (std::abs(spectrum[i] - 1.0) < std::abs(spectrum[perron] - 1.0)) {
      perron = i;
    }
  }
  HNormBoundReport report;
  report.grid = grid;
  report.d0 = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (i == perron) continue;
    const double dist = std::abs(1.0 - spectrum[i]);
    if (dist <= 1e-10) {
      throw DegenerateSpectrum("h_norm_bound_study: non-Perron eigenvalue "
                               "within 1e-10 of 1");
    }
    report.d0 = first ? dist : std::min(report.d0, dist);
    first = false;
  }
  const auto n = static_cast<double>(w.matrix().rows());
  report.c_w = std::pow((n - 1.0) / (4.0 * n), (n - 1.0) / 2.0) *
               std::pow(report.d0, n - 1.0);
  const Vector alpha = left_perron_vector(w);
  report.limit_bound = 1.0 / (report.c_w * alpha.dot(sigma_tilde));

  for (const double sigma_max : grid) {
    const GainMatrix h = static_gain(w, profile_at(sigma_tilde, sigma_max));
    report.h_norms.push_back(spectral_norm(h.h));
  }
  const auto [lo, hi] =
      std::minmax_element(report.h_norms.begin(), report.h_norms.end());
  report.bounded = std::isfinite(*hi) && *hi <= kBoundedFactor * *lo;
  return report;
}

DoubleLimitResult double_limit_check(const InfluenceMatrix& w,
                                     const Vector& sigma_tilde,
                                     const OpinionVector& y0, double small_sigma,
                                     int k_large) {
  if (!is_primitive(w.pattern())) {
    throw NotPrimitive("double_limit_check: the k -> inf limit at sigma = 0 "
                       "needs a primitive W");
  }
  if (!(small_sigma > 0.0 && 2.0 * small_sigma < 1.0)) {
    throw Error("double_limit_check: small_sigma must lie in (0, 0.5)");
  }
  const Vector at_sigma =
      steady_state(w, profile_at(sigma_tilde, small_sigma), y0).y;
  const Vector at_two_sigma =
      steady_state(w, profile_at(sigma_tilde, 2.0 * small_sigma), y0).y;
  DoubleLimitResult result;
  result.inner_then_outer = 2.0 * at_sigma - at_two_sigma;
  result.outer_then_inner = degroot_simulate(w, y0, k_large).back();
  return result;
}

TimescaleReport timescale_trace(const InfluenceMatrix& w,
                                const ImmunityProfile& prof,
                                const OpinionVector& y0, int k_max) {
  if (!is_primitive(w.pattern())) {
    throw NotPrimitive("timescale_trace: the DeGroot plateau needs a "
                       "primitive W");
  }
  const Vector alpha = left_perron_vector(w);
  const Vector weighted = alpha.cwiseProduct(prof.coefficients());

  TimescaleReport report;
  report.degroot_consensus = alpha.dot(y0.y);
  report.limit_consensus = weighted.dot(y0.y) / weighted.sum();

  const double initial_spread = spread(y0.y);
  const double spread_threshold = kPlateauSpreadFraction * initial_spread;
  const double mean_threshold = kPlateauMeanFraction * initial_spread;

  const Vector sigma = prof.sigma();
  const Vector open = Vector::Ones(sigma.size()) - sigma;
  const Vector anchor_term = sigma.cwiseProduct(y0.y);
  Vector y = y0.y;
  for (int k = 0; k <= k_max; ++k) {
    if (!report.plateau_step.has_value()) {
      const double s = spread(y);
      const double mean_err = std::abs(y.mean() - report.degroot_consensus);
      if (s <= spread_threshold && mean_err <= mean_threshold) {
        report.plateau_step = k;
        report.plateau_spread = s;
        report.plateau_mean = y.mean();
      }
    }
    if (k < k_max) y = open.cwiseProduct(w.matrix() * y) + anchor_term;
  }
  report.final_state = y;
  return report;
}

}  // namespace fjlim
