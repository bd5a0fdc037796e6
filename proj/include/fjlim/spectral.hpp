#pragma once

#include <vector>

#include "fjlim/model.hpp"
#include "fjlim/types.hpp"

// Perron-Frobenius machinery: spectra with a deterministic ordering, the left
// Perron vector of a row-stochastic irreducible matrix, the
// minimum-singular-value lower bound, and the first-order eigenvalue
// perturbation check.

namespace fjlim {

/// Eigenvalues with multiplicity, sorted by increasing modulus and ties broken
/// by increasing argument. Throws ConvergenceFailure if the QR iteration does
/// not converge.
std::vector<Complex> eigenvalues(const Matrix& a);

/// Max modulus over eigenvalues(a).
double spectral_radius(const Matrix& a);

/// Spectral radius, full spectrum, and normalized left Perron vector of a
/// validated influence matrix.
struct SpectralSummary {
  double spectral_radius = 0.0;
  std::vector<Complex> eigenvalues;  // sorted: modulus, then argument
  Vector perron_left;                // alpha >= 0, alpha' 1 = 1
};

/// Left Perron vector alpha of W: alpha' W = alpha', alpha' 1 = 1, alpha >= 0.
///
/// Power iteration on (W' + I)/2, which is primitive whenever W is
/// irreducible, so periodic cases converge too. Stops when the residual
/// ||alpha' W - alpha'||_inf falls below 1e-12; iteration cap 1e6.
Vector left_perron_vector(const InfluenceMatrix& w);

SpectralSummary summarize(const InfluenceMatrix& w);

struct HongBound {
  double bound = 0.0;
  bool holds = false;
};

/// Lower bound on the minimum singular value for a matrix whose rows all have
/// Euclidean norm at most beta:
///   smin(A) >= ((n-1)/(n beta^2))^{(n-1)/2} |det(A)|.
/// holds reports smin(A) >= bound - 1e-10. Throws RowNormExceeded when a row
/// norm exceeds beta.
HongBound hong_lower_bound(const Matrix& a, double beta);

/// Finite-difference check of the first-order movement of the Perron
/// eigenvalue of W under W + eps X against the predicted slope
/// alpha' X 1 / (alpha' 1).
struct PerturbationReport {
  std::vector<double> eps;
  double predicted_slope = 0.0;
  std::vector<double> measured_slopes;  // (lambda_perron(W + eps X) - 1) / eps
  std::vector<double> deviations;       // |measured - predicted|
};

PerturbationReport eigen_perturbation_check(const InfluenceMatrix& w,
                                            const Matrix& x,
                                            const std::vector<double>& eps_grid);

/// Greedy nearest-neighbor pairing distance between two spectra: the largest
/// distance over the matched pairs. Used to track eigenvalues across nearby
/// matrices where index order is meaningless.
double spectrum_matching_distance(const std::vector<Complex>& a,
                                  const std::vector<Complex>& b);

}  // namespace fjlim
