#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "fjlim/asymptotics.hpp"
#include "fjlim/errors.hpp"
#include "fjlim/instance.hpp"
#include "fjlim/model.hpp"
#include "fjlim/spectral.hpp"
#include "oracles.hpp"

using namespace fjlim;

namespace {

InfluenceMatrix random_influence(Rng& rng, int n) {
  return InfluenceMatrix::validated(random_instance(rng, n).w);
}

}  // namespace

TEST_CASE("is_irreducible recognizes strong connectivity") {
  const auto ex1 = builtin_ex1();
  CHECK(is_irreducible(GraphPattern::from_matrix(ex1.w)));

  CHECK_FALSE(is_irreducible(GraphPattern::from_matrix(Matrix::Identity(2, 2))));

  // two disjoint 2-cycles
  Matrix blocks = Matrix::Zero(4, 4);
  blocks(0, 1) = blocks(1, 0) = 1.0;
  blocks(2, 3) = blocks(3, 2) = 1.0;
  CHECK_FALSE(is_irreducible(GraphPattern::from_matrix(blocks)));
}

TEST_CASE("is_primitive distinguishes aperiodic, periodic, and cyclic patterns") {
  CHECK(is_primitive(GraphPattern::from_matrix(builtin_ex1().w)));
  CHECK_FALSE(is_primitive(GraphPattern::from_matrix(builtin_ex2().w)));

  Matrix cycle3 = Matrix::Zero(3, 3);
  cycle3(0, 1) = cycle3(1, 2) = cycle3(2, 0) = 1.0;
  CHECK(graph_period(GraphPattern::from_matrix(cycle3)) == 3);
  CHECK_FALSE(is_primitive(GraphPattern::from_matrix(cycle3)));

  CHECK_THROWS_AS(is_primitive(GraphPattern::from_matrix(Matrix::Identity(2, 2))),
                  NotIrreducible);
}

TEST_CASE("eigenvalues: diagonal case and deterministic ordering") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  const auto spectrum = eigenvalues(d);
  REQUIRE(spectrum.size() == 3);
  CHECK(spectrum[0].real() == doctest::Approx(1.0));
  CHECK(spectrum[1].real() == doctest::Approx(2.0));
  CHECK(spectrum[2].real() == doctest::Approx(3.0));
  for (const auto& lambda : spectrum) CHECK(lambda.imag() == 0.0);
}

TEST_CASE("eigenvalues of the periodic example are exactly +-1 and +-2/3") {
  // The characteristic polynomial of the matrix is (x^2 - 1)(x^2 - 4/9), so
  // the middle pair is exactly +-2/3. (Reference writeups of this example
  // quote 0.68, which is a misprint of 2/3.)
  const auto spectrum = eigenvalues(builtin_ex2().w);
  std::vector<double> real_parts;
  for (const auto& lambda : spectrum) {
    CHECK(std::abs(lambda.imag()) < 1e-10);
    real_parts.push_back(lambda.real());
  }
  std::sort(real_parts.begin(), real_parts.end());
  CHECK(real_parts[0] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(real_parts[1] == doctest::Approx(-2.0 / 3.0).epsilon(1e-9));
  CHECK(real_parts[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(real_parts[3] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("eigenvalues satisfy the characteristic-residual oracle") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a(i, j) = 2.0 * rng.u01() - 1.0;
    }
    const double scale = a.cwiseAbs().maxCoeff();
    for (const Complex& lambda : eigenvalues(a)) {
      DenseMatrix<Complex> shifted = a.cast<Complex>();
      shifted.diagonal().array() -= lambda;
      CHECK(std::abs(oracle::cofactor_det<Complex>(shifted)) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("spectral_radius: stochastic, scaled identity, effective matrix") {
  const auto ex1 = builtin_ex1();
  CHECK(spectral_radius(ex1.w) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(spectral_radius(0.5 * Matrix::Identity(3, 3)) == doctest::Approx(0.5));

  const auto w = InfluenceMatrix::validated(ex1.w);
  for (const double sigma_max : {0.1, 0.5, 0.9}) {
    const auto prof = ImmunityProfile::validated(sigma_max, ex1.sigma_tilde);
    CHECK(spectral_radius(effective_matrix(w, prof)) < 1.0);
  }
}

TEST_CASE("left_perron_vector: doubly stochastic, closed form, consensus value") {
  SUBCASE("doubly stochastic gives the uniform vector") {
    Matrix w(3, 3);
    w << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
    const Vector alpha = left_perron_vector(InfluenceMatrix::validated(w));
    for (int i = 0; i < 3; ++i) {
      CHECK(alpha(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    }
  }

  SUBCASE("periodic example has alpha = (0.2, 0.3, 0.3, 0.2)") {
    // Closed form from the balance equations of the weighted path:
    // a1 = (2/3) a2, a2 = a1 + a3/3, a3 = a2/3 + a4, a4 = (2/3) a3.
    const Vector alpha =
        left_perron_vector(InfluenceMatrix::validated(builtin_ex2().w));
    CHECK(alpha(0) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(alpha(1) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(alpha(2) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(alpha(3) == doctest::Approx(0.2).epsilon(1e-9));
  }

  SUBCASE("first example reproduces the 0.22 consensus value") {
    const auto ex1 = builtin_ex1();
    const Vector alpha = left_perron_vector(InfluenceMatrix::validated(ex1.w));
    const double consensus = alpha.dot(*ex1.y0);
    CHECK(std::abs(consensus - 0.22) <= 0.005);  // rounds to 0.22
    CHECK(consensus == doctest::Approx(0.2193034825870647).epsilon(1e-9));
  }
}

TEST_CASE("left_perron_vector residual and normalization invariants") {
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = random_influence(rng, 2 + trial % 7);
    const Vector alpha = left_perron_vector(w);
    CHECK((w.matrix().transpose() * alpha - alpha).cwiseAbs().maxCoeff() <=
          1e-10);
    CHECK(std::abs(alpha.sum() - 1.0) <= 1e-12);
    CHECK(alpha.minCoeff() >= -1e-12);
  }
}

TEST_CASE("summarize ties the spectrum to the radius and the Perron vector") {
  const auto w = InfluenceMatrix::validated(builtin_ex2().w);
  const SpectralSummary summary = summarize(w);
  CHECK(summary.spectral_radius ==
        doctest::Approx(std::abs(summary.eigenvalues.back())));
  CHECK(summary.spectral_radius == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(summary.perron_left.sum() - 1.0) <= 1e-12);
}

TEST_CASE("spectral radius of random irreducible stochastic matrices is 1") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = random_influence(rng, 2 + trial % 7);
    CHECK(spectral_radius(w.matrix()) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("primitivity agrees with the spectral definition") {
  Rng rng(24);
  int primitive_seen = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto w = random_influence(rng, 2 + trial % 6);
    if (!is_primitive(w.pattern())) continue;
    ++primitive_seen;
    int on_circle = 0;
    for (const Complex& lambda : eigenvalues(w.matrix())) {
      if (std::abs(std::abs(lambda) - 1.0) <= 1e-8) ++on_circle;
    }
    CHECK(on_circle == 1);
  }
  CHECK(primitive_seen > 0);
}

TEST_CASE("hong_lower_bound: identity, singular, and randomized checks") {
  SUBCASE("identity at n = 2") {
    const auto result = hong_lower_bound(Matrix::Identity(2, 2), 1.0);
    CHECK(result.bound == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(result.holds);
  }

  SUBCASE("singular matrix gives a zero bound") {
    Matrix singular(2, 2);
    singular << 1.0, 1.0, 1.0, 1.0;
    const auto result = hong_lower_bound(singular, 2.0);
    CHECK(result.bound == doctest::Approx(0.0));
    CHECK(result.holds);
  }

  SUBCASE("row norm above beta is a precondition violation") {
    CHECK_THROWS_AS(hong_lower_bound(3.0 * Matrix::Identity(2, 2), 1.0),
                    RowNormExceeded);
    CHECK_THROWS_AS(hong_lower_bound(Matrix::Identity(2, 2), 0.0), Error);
  }

  SUBCASE("holds on random 4x4 matrices with rows scaled below 2") {
    Rng rng(25);
    for (int trial = 0; trial < 100; ++trial) {
      CHECK(hong_lower_bound(random_row_bounded_matrix(rng, 4, 2.0), 2.0).holds);
    }
  }
}

TEST_CASE("hong_lower_bound property over many sizes") {
  Rng rng(26);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 5;
    CHECK(hong_lower_bound(random_row_bounded_matrix(rng, n, 2.0), 2.0).holds);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("eigen_perturbation_check against the first-order formula") {
  const auto ex1 = builtin_ex1();
  const auto w = InfluenceMatrix::validated(ex1.w);

  SUBCASE("zero direction gives zero deviations") {
    const auto report =
        eigen_perturbation_check(w, Matrix::Zero(4, 4), {1e-4, 1e-6});
    CHECK(report.predicted_slope == 0.0);
    for (const double dev : report.deviations) CHECK(dev <= 1e-8);
  }

  SUBCASE("anchoring direction moves the Perron root by -alpha' p") {
    // X = -diag(p) W is the direction along which the effective matrix
    // leaves W as sigma_max grows.
    const Matrix x = -(ex1.sigma_tilde.asDiagonal() * ex1.w);
    const Vector alpha = left_perron_vector(w);
    const auto report = eigen_perturbation_check(w, x, {1e-3, 1e-4, 1e-5});
    CHECK(report.predicted_slope ==
          doctest::Approx(-alpha.dot(ex1.sigma_tilde)).epsilon(1e-12));
    // each decade of eps shrinks the deviation by about a decade
    for (std::size_t i = 1; i < report.deviations.size(); ++i) {
      CHECK(report.deviations[i] <= 0.2 * report.deviations[i - 1]);
    }
  }

  SUBCASE("random symmetric direction matches to 1e-4 at eps = 1e-6") {
    Rng rng(27);
    Matrix x(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j <= i; ++j) {
        x(i, j) = x(j, i) = 2.0 * rng.u01() - 1.0;
      }
    }
    const auto report = eigen_perturbation_check(w, x, {1e-6});
    CHECK(report.deviations.front() <= 1e-4);
  }
}

TEST_CASE("eigenvalues of the effective matrix approach those of W") {
  const std::vector<double> grid = {1e-1, 1e-2, 1e-3, 1e-4};
  for (const auto& instance : {builtin_ex1(), builtin_ex2()}) {
    const auto w = InfluenceMatrix::validated(instance.w);
    const auto base_spectrum = eigenvalues(instance.w);
    std::vector<double> distances;
    for (const double sigma_max : grid) {
      const auto prof = ImmunityProfile::validated(sigma_max, instance.sigma_tilde);
      distances.push_back(spectrum_matching_distance(
          base_spectrum, eigenvalues(effective_matrix(w, prof))));
    }
    for (std::size_t i = 1; i < distances.size(); ++i) {
      CHECK(distances[i] <= distances[i - 1] + 1e-12);
    }
    CHECK(distances.back() <= 0.1 * distances.front());
  }
}
