#include "fjlim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "fjlim/errors.hpp"

namespace fjlim {

std::vector<Complex> eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error("eigenvalues: matrix must be square and nonempty");
  }
  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("eigenvalues: QR iteration exceeded its budget");
  }
  std::vector<Complex> out(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + a.rows());
  std::sort(out.begin(), out.end(), [](const Complex& lhs, const Complex& rhs) {
    const double ml = std::abs(lhs);
    const double mr = std::abs(rhs);
    if (ml != mr) return ml < mr;
    return std::arg(lhs) < std::arg(rhs);
  });
  return out;
}

double spectral_radius(const Matrix& a) {
  return std::abs(eigenvalues(a).back());
}

Vector left_perron_vector(const InfluenceMatrix& w) {
  constexpr double kResidualTol = 1e-12;
  constexpr long kMaxIterations = 1'000'000;

  const Index n = w.matrix().rows();
  // Column form of alpha' M = alpha' with M = (W' + I)/2.
  const Matrix shifted = 0.5 * (w.matrix().transpose() + Matrix::Identity(n, n));
  Vector alpha = Vector::Constant(n, 1.0 / static_cast<double>(n));
  for (long it = 0; it < kMaxIterations; ++it) {
    Vector next = shifted * alpha;
    next /= next.sum();  // entries stay positive: shifted has positive diagonal
    alpha = next;
    const double residual =
        (w.matrix().transpose() * alpha - alpha).cwiseAbs().maxCoeff();
    if (residual <= kResidualTol) {
      return alpha;
    }
  }
  throw ConvergenceFailure("left_perron_vector: no convergence within 1e6 "
                           "iterations");
}

SpectralSummary summarize(const InfluenceMatrix& w) {
  SpectralSummary summary;
  summary.eigenvalues = eigenvalues(w.matrix());
  summary.spectral_radius = std::abs(summary.eigenvalues.back());
  summary.perron_left = left_perron_vector(w);
  return summary;
}

HongBound hong_lower_bound(const Matrix& a, double beta) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error("hong_lower_bound: matrix must be square and nonempty");
  }
  if (!(beta > 0.0)) {
    throw Error("hong_lower_bound: beta must be positive");
  }
  const auto n = static_cast<double>(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    const double row_norm = a.row(i).norm();
    if (row_norm > beta) {
      throw RowNormExceeded("hong_lower_bound: row " + std::to_string(i) +
                            " has norm " + std::to_string(row_norm) +
                            " > beta = " + std::to_string(beta));
    }
  }
  HongBound result;
  result.bound = std::pow((n - 1.0) / (n * beta * beta), (n - 1.0) / 2.0) *
                 std::abs(determinant(a));
  result.holds = min_singular_value(a) >= result.bound - 1e-10;
  return result;
}

PerturbationReport eigen_perturbation_check(const InfluenceMatrix& w,
                                            const Matrix& x,
                                            const std::vector<double>& eps_grid) {
  const Index n = w.matrix().rows();
  const Vector alpha = left_perron_vector(w);
  const Vector ones = Vector::Ones(n);

  PerturbationReport report;
  report.eps = eps_grid;
  report.predicted_slope = alpha.dot(x * ones) / alpha.dot(ones);
  for (const double eps : eps_grid) {
    if (eps == 0.0) {
      report.measured_slopes.push_back(report.predicted_slope);
      report.deviations.push_back(0.0);
      continue;
    }
    const auto spectrum = eigenvalues(w.matrix() + eps * x);
    Complex perron = spectrum.front();
    for (const Complex& lambda : spectrum) {
      if (std::abs(lambda - 1.0) < std::abs(perron - 1.0)) perron = lambda;
    }
    const double measured = (perron.real() - 1.0) / eps;
    report.measured_slopes.push_back(measured);
    report.deviations.push_back(std::abs(measured - report.predicted_slope));
  }
  return report;
}

double spectrum_matching_distance(const std::vector<Complex>& a,
                                  const std::vector<Complex>& b) {
  if (a.size() != b.size()) {
    throw Error("spectrum_matching_distance: size mismatch");
  }
  std::vector<Complex> left = a;
  std::vector<Complex> right = b;
  double worst = 0.0;
  while (!left.empty()) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < left.size(); ++i) {
      for (std::size_t j = 0; j < right.size(); ++j) {
        const double d = std::abs(left[i] - right[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    worst = std::max(worst, best);
    left.erase(left.begin() + static_cast<std::ptrdiff_t>(bi));
    right.erase(right.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return worst;
}

}  // namespace fjlim
