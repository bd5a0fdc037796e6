#include "fjlim/model.hpp"

#include <cmath>
#include <string>

#include "fjlim/errors.hpp"

namespace fjlim {

namespace {

std::string coord(Index i, Index j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

InfluenceMatrix InfluenceMatrix::validated(Matrix w) {
  if (w.rows() == 0 || w.rows() != w.cols()) {
    throw AssumptionViolated("influence matrix must be square and nonempty");
  }
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) {
      if (!std::isfinite(w(i, j))) {
        throw AssumptionViolated("influence matrix entry " + coord(i, j) +
                                 " is not finite");
      }
      if (w(i, j) < 0.0) {
        throw AssumptionViolated("nonnegativity violated: entry " + coord(i, j) +
                                 " = " + std::to_string(w(i, j)));
      }
    }
    const double row_sum = w.row(i).sum();
    if (std::abs(row_sum - 1.0) > kRowSumTol) {
      throw AssumptionViolated("row stochasticity violated: row " +
                               std::to_string(i) + " sums to " +
                               std::to_string(row_sum));
    }
  }
  GraphPattern pattern = GraphPattern::from_matrix(w);
  if (!is_irreducible(pattern)) {
    throw AssumptionViolated(
        "irreducibility violated: the nonzero pattern is not strongly "
        "connected");
  }
  return InfluenceMatrix(std::move(w), std::move(pattern));
}

ImmunityProfile ImmunityProfile::validated(double sigma_max, Vector p,
                                           const ImmunityOptions& options) {
  std::vector<std::string> warnings;
  if (p.size() == 0) {
    throw AssumptionViolated("immunity profile is empty");
  }
  for (Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p(i))) {
      throw AssumptionViolated("sigma_tilde[" + std::to_string(i) +
                               "] is not finite");
    }
  }
  double max_p = p.maxCoeff();
  if (options.renormalize) {
    if (max_p <= 0.0) {
      throw AssumptionViolated("sigma_tilde has no positive entry");
    }
    if (std::abs(max_p - 1.0) > kMaxCoeffTol) {
      warnings.push_back("sigma_tilde renormalized by 1/" +
                         std::to_string(max_p));
      p /= max_p;
      max_p = p.maxCoeff();
    }
  }
  for (Index i = 0; i < p.size(); ++i) {
    const bool positive = p(i) > 0.0;
    if (!positive && !(options.allow_zero && p(i) == 0.0)) {
      throw AssumptionViolated("immunity coefficients must lie in (0, 1]: "
                               "sigma_tilde[" + std::to_string(i) + "] = " +
                               std::to_string(p(i)));
    }
    if (p(i) > 1.0) {
      throw AssumptionViolated("sigma_tilde[" + std::to_string(i) + "] = " +
                               std::to_string(p(i)) + " exceeds 1");
    }
  }
  if (std::abs(max_p - 1.0) > kMaxCoeffTol) {
    throw AssumptionViolated(
        "max sigma_tilde coefficient must equal 1 (got " +
        std::to_string(max_p) + "); pass renormalize to rescale");
  }
  if (options.allow_zero && !(max_p > 0.0)) {
    throw AssumptionViolated("all immunity coefficients are zero");
  }
  if (!(sigma_max > 0.0) || !(sigma_max <= 1.0 - options.epsilon)) {
    throw AssumptionViolated("sigma_max must lie in (0, 1 - " +
                             std::to_string(options.epsilon) + "]: got " +
                             std::to_string(sigma_max));
  }
  return ImmunityProfile(sigma_max, std::move(p), std::move(warnings));
}

OpinionVector OpinionVector::of(Vector y) {
  OpinionVector out;
  for (Index i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y(i))) {
      throw Error("opinion y[" + std::to_string(i) + "] is not finite");
    }
    if (y(i) < 0.0 || y(i) > 1.0) {
      out.warnings.push_back("opinion y[" + std::to_string(i) + "] = " +
                             std::to_string(y(i)) + " lies outside [0, 1]");
    }
  }
  out.y = std::move(y);
  return out;
}

GainMatrix GainMatrix::checked(Matrix h, Kind kind, double sigma_max) {
  for (Index i = 0; i < h.rows(); ++i) {
    const double row_sum = h.row(i).sum();
    if (std::abs(row_sum - 1.0) > kRowSumTol) {
      throw Error("gain matrix row " + std::to_string(i) + " sums to " +
                  std::to_string(row_sum));
    }
    for (Index j = 0; j < h.cols(); ++j) {
      if (h(i, j) < -kNonnegTol) {
        throw Error("gain matrix entry (" + std::to_string(i) + ", " +
                    std::to_string(j) + ") = " + std::to_string(h(i, j)) +
                    " is negative");
      }
    }
  }
  return GainMatrix{std::move(h), kind, sigma_max};
}

Matrix effective_matrix(const InfluenceMatrix& w, const ImmunityProfile& prof) {
  const Vector sigma = prof.sigma();
  Matrix wt = w.matrix();
  for (Index i = 0; i < wt.rows(); ++i) {
    wt.row(i) *= (1.0 - sigma(i));
  }
  return wt;
}

Trajectory degroot_simulate(const InfluenceMatrix& w, const OpinionVector& y0,
                            int k_max) {
  if (k_max < 0) throw Error("degroot_simulate: k_max must be nonnegative");
  Trajectory traj;
  traj.steps.reserve(static_cast<std::size_t>(k_max) + 1);
  traj.steps.push_back(y0.y);
  Vector y = y0.y;
  for (int k = 0; k < k_max; ++k) {
    y = w.matrix() * y;
    traj.steps.push_back(y);
  }
  return traj;
}

namespace {

// Shared anchored step: y_next_i = open_i * (W y)_i + anchor_i * y0_i. Both
// Friedkin forms route through this so their trajectories are
// bitwise-identical for the same Sigma.
Trajectory simulate_anchored(const Matrix& w, const Vector& open,
                             const Vector& anchor, const Vector& y0, int k_max) {
  if (k_max < 0) throw Error("fj_simulate: k_max must be nonnegative");
  Trajectory traj;
  traj.steps.reserve(static_cast<std::size_t>(k_max) + 1);
  traj.steps.push_back(y0);
  Vector y = y0;
  for (int k = 0; k < k_max; ++k) {
    y = open.cwiseProduct(w * y) + anchor.cwiseProduct(y0);
    traj.steps.push_back(y);
  }
  return traj;
}

}  // namespace

Trajectory fj_simulate(const InfluenceMatrix& w, const ImmunityProfile& prof,
                       const OpinionVector& y0, int k_max) {
  const Vector sigma = prof.sigma();
  const Vector open = Vector::Ones(sigma.size()) - sigma;
  return simulate_anchored(w.matrix(), open, sigma, y0.y, k_max);
}

Trajectory fj_simulate_susceptibility_form(const InfluenceMatrix& w,
                                           const ImmunityProfile& prof,
                                           const OpinionVector& y0, int k_max) {
  const Vector sigma = prof.sigma();
  // Lambda = I - Sigma; the anchor weight I - Lambda is Sigma by definition.
  const Vector lambda = Vector::Ones(sigma.size()) - sigma;
  return simulate_anchored(w.matrix(), lambda, sigma, y0.y, k_max);
}

OpinionVector steady_state(const InfluenceMatrix& w, const ImmunityProfile& prof,
                           const OpinionVector& y0) {
  const Index n = w.matrix().rows();
  const Vector sigma = prof.sigma();
  const Matrix system = Matrix::Identity(n, n) - effective_matrix(w, prof);
  const Vector rhs = sigma.cwiseProduct(y0.y);
  const Vector ybar = solve_linear(system, rhs);
  const double residual = (system * ybar - rhs).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    throw SingularMatrix("steady_state residual " + std::to_string(residual));
  }
  return OpinionVector::of(ybar);
}

GainMatrix static_gain(const InfluenceMatrix& w, const ImmunityProfile& prof) {
  const Index n = w.matrix().rows();
  const Matrix system = Matrix::Identity(n, n) - effective_matrix(w, prof);
  const Matrix rhs = prof.sigma().asDiagonal();
  return GainMatrix::checked(solve_linear(system, rhs), GainMatrix::Kind::exact,
                             prof.sigma_max());
}

int settling_time(const Trajectory& traj, const OpinionVector& y_bar,
                  double fraction) {
  if (traj.steps.empty()) {
    throw Error("settling_time: empty trajectory");
  }
  const double threshold =
      (1.0 - fraction) * (traj.steps.front() - y_bar.y).cwiseAbs().maxCoeff();
  int last_outside = -1;
  for (int k = 0; k < traj.step_count(); ++k) {
    if ((traj.steps[k] - y_bar.y).cwiseAbs().maxCoeff() > threshold) {
      last_outside = k;
    }
  }
  if (last_outside == traj.step_count() - 1) {
    throw NotSettled("settling_time: trajectory still outside the band at its "
                     "final step");
  }
  return last_outside + 1;
}

int settling_steps(const InfluenceMatrix& w, const ImmunityProfile& prof,
                   const OpinionVector& y0, double fraction) {
  const OpinionVector ybar = steady_state(w, prof, y0);
  // Mixing time of the effective matrix is Theta(1/sigma_max).
  const auto horizon =
      static_cast<long long>(std::ceil(50.0 / prof.sigma_max()));
  const Vector sigma = prof.sigma();
  const Vector open = Vector::Ones(sigma.size()) - sigma;
  const Vector anchor_term = sigma.cwiseProduct(y0.y);
  const double threshold =
      (1.0 - fraction) * (y0.y - ybar.y).cwiseAbs().maxCoeff();

  Vector y = y0.y;
  long long last_outside =
      (y - ybar.y).cwiseAbs().maxCoeff() > threshold ? 0 : -1;
  bool final_inside = last_outside < 0;
  for (long long k = 1; k <= horizon; ++k) {
    y = open.cwiseProduct(w.matrix() * y) + anchor_term;
    const bool outside = (y - ybar.y).cwiseAbs().maxCoeff() > threshold;
    if (outside) last_outside = k;
    final_inside = !outside;
  }
  if (!final_inside) {
    throw NotSettled("settling_steps: not settled within " +
                     std::to_string(horizon) + " steps");
  }
  return static_cast<int>(last_outside + 1);
}

}  // namespace fjlim
