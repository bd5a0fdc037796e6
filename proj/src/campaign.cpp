#include "fjlim/campaign.hpp"

#include <cmath>

#include "fjlim/asymptotics.hpp"
#include "fjlim/errors.hpp"
#include "fjlim/spectral.hpp"

namespace fjlim {

namespace {

constexpr double kStrictMargin = 1e-10;
constexpr double kResidualTol = 1e-9;
const std::vector<double> kRateGrid = {1e-1, 1e-2, 1e-3};
const std::vector<double> kRadiusGrid = {0.1, 0.2, 0.4};

bool radius_stability(const InfluenceMatrix& w, const Vector& p) {
  for (const double s : kRadiusGrid) {
    const auto prof = ImmunityProfile::validated(s, p);
    if (!(spectral_radius(effective_matrix(w, prof)) < 1.0 - kStrictMargin)) {
      return false;
    }
  }
  return true;
}

bool radius_monotonicity(const InfluenceMatrix& w, const Vector& p) {
  double previous = 1.0;
  for (const double s : kRadiusGrid) {  // increasing sigma_max
    const auto prof = ImmunityProfile::validated(s, p);
    const double rho = spectral_radius(effective_matrix(w, prof));
    if (!(rho < previous - kStrictMargin)) return false;
    previous = rho;
  }
  return true;
}

bool gain_gap_slope(const InfluenceMatrix& w, const Vector& p,
                    const OpinionVector& y0) {
  const RateReport report = rate_study(w, p, y0, kRateGrid);
  return report.fitted_slope >= 0.9 && report.fitted_slope <= 1.5;
}

bool quasi_gap_fit(const InfluenceMatrix& w, const Vector& p,
                    const OpinionVector& y0) {
  const double m = quasi_consensus_fit(w, p, y0, kRateGrid.front());
  for (std::size_t i = 1; i < kRateGrid.size(); ++i) {
    const auto prof = ImmunityProfile::validated(kRateGrid[i], p);
    if (quasi_consensus_gap(steady_state(w, prof, y0)) > m * kRateGrid[i]) {
      return false;
    }
  }
  return true;
}

bool gain_eigenpair(const InfluenceMatrix& w, const Vector& p) {
  const Index n = w.matrix().rows();
  const Vector alpha = left_perron_vector(w);
  const Vector ones = Vector::Ones(n);
  for (const double s : kRateGrid) {
    const auto prof = ImmunityProfile::validated(s, p);
    const Matrix h = static_gain(w, prof).h;
    const Vector sigma = prof.sigma();
    Vector left = alpha.cwiseProduct(
        sigma.cwiseQuotient(Vector::Ones(n) - sigma));  // alpha' S (I - S)^-1
    left /= left.sum();
    const double right_residual = (h * ones - ones).cwiseAbs().maxCoeff();
    const double left_residual =
        (h.transpose() * left - left).cwiseAbs().maxCoeff();
    if (right_residual > kResidualTol || left_residual > kResidualTol) {
      return false;
    }
  }
  return true;
}

bool hong_bound_holds(Rng& rng, int n) {
  constexpr double kBeta = 2.0;
  return hong_lower_bound(random_row_bounded_matrix(rng, n, kBeta), kBeta).holds;
}

}  // namespace

CampaignSummary run_campaign(const CampaignConfig& config) {
  if (config.n < 2 || config.count < 1) {
    throw Error("campaign requires n >= 2 and count >= 1");
  }
  CampaignSummary summary;
  summary.checks = {{"radius_stability"}, {"radius_monotonicity"},
                    {"gain_gap_slope"},   {"quasi_gap_fit"},
                    {"gain_eigenpair"}, {"smin_lower_bound"}};
  const auto tally = [&summary](std::size_t check, bool ok) {
    (ok ? summary.checks[check].pass : summary.checks[check].fail)++;
  };

  Rng rng(config.seed);
  for (int i = 0; i < config.count; ++i) {
    const Instance inst = random_instance(rng, config.n);
    const auto w = InfluenceMatrix::validated(inst.w);
    const auto y0 = OpinionVector::of(*inst.y0);
    const Vector& p = inst.sigma_tilde;

    tally(0, radius_stability(w, p));
    tally(1, radius_monotonicity(w, p));
    tally(2, gain_gap_slope(w, p, y0));
    tally(3, quasi_gap_fit(w, p, y0));
    tally(4, gain_eigenpair(w, p));
    tally(5, hong_bound_holds(rng, config.n));
  }
  return summary;
}

}  // namespace fjlim
