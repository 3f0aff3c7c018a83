#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ebcert/linalg.hpp"
#include "ebcert/random.hpp"
#include "oracles.hpp"

using namespace ebcert;

namespace {

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

ComplexMatrix random_hermitian(std::size_t d, Rng& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace

TEST_CASE("tensor follows the Kronecker block ordering") {
  CHECK(tensor(identity(2), identity(2)) == identity(4));
  CHECK(tensor(diagonal({1, 2}), diagonal({3, 4})) == diagonal({3, 4, 6, 8}));

  Rng rng(3);
  const ComplexMatrix a = ginibre(2, 2, rng), b = ginibre(2, 3, rng), c = ginibre(3, 2, rng);
  CHECK(tensor(a, b) == oracle::kron(a, b));
  CHECK(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) < 1e-14);
}

TEST_CASE("partial trace matches index summation") {
  const ComplexMatrix zero = DensityMatrix::basis_state(4, 0).matrix();
  CHECK(partial_trace(zero, 2, 2, Subsystem::first) == DensityMatrix::basis_state(2, 0).matrix());

  Rng rng(5);
  const ComplexMatrix rho = random_density_matrix(4, rng).matrix();
  CHECK(max_abs_diff(partial_trace(rho, 2, 2, Subsystem::first), oracle::partial_trace(rho, 2, 2, true)) < 1e-15);
  CHECK(max_abs_diff(partial_trace(rho, 2, 2, Subsystem::second), oracle::partial_trace(rho, 2, 2, false)) < 1e-15);

  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d1 = 1 + uniform_index(3, rng), d2 = 1 + uniform_index(3, rng);
    const ComplexMatrix a = ginibre(d1, d1, rng), b = ginibre(d2, d2, rng);
    const ComplexMatrix ab = tensor(a, b);
    CHECK(max_abs_diff(partial_trace(ab, d1, d2, Subsystem::first), a * b.trace()) < 1e-12);
    CHECK(max_abs_diff(partial_trace(ab, d1, d2, Subsystem::second), b * a.trace()) < 1e-12);
    const ComplexMatrix m = ginibre(d1 * d2, d1 * d2, rng);
    CHECK(std::abs(partial_trace(m, d1, d2, Subsystem::first).trace() - m.trace()) < 1e-12);
    CHECK(std::abs(partial_trace(m, d1, d2, Subsystem::second).trace() - m.trace()) < 1e-12);
  }
  CHECK_THROWS_AS(partial_trace(identity(5), 2, 2, Subsystem::first), Error);
}

TEST_CASE("partial transpose matches the index oracle and is an involution") {
  Rng rng(8);
  const ComplexMatrix m = ginibre(6, 6, rng);
  const ComplexMatrix pt = partial_transpose(m, 2, 3, Subsystem::second);
  CHECK(max_abs_diff(pt, oracle::partial_transpose_second(m, 2, 3)) == 0.0);
  CHECK(partial_transpose(pt, 2, 3, Subsystem::second) == m);
  const ComplexMatrix full = partial_transpose(partial_transpose(m, 2, 3, Subsystem::first), 2, 3, Subsystem::second);
  CHECK(max_abs_diff(full, m.transpose()) == 0.0);
}

TEST_CASE("eigh reconstructs its input") {
  Rng rng(9);
  for (std::size_t d = 1; d <= 6; ++d) {
    const ComplexMatrix a = random_hermitian(d, rng);
    const HermitianEigen e = eigh(a);
    const ComplexMatrix& v = e.eigenvectors;
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    CHECK(max_abs_diff(v * e.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint(), a) <= 1e-8 * scale);
    CHECK(max_abs_diff(v.adjoint() * v, identity(d)) <= 1e-10);
    for (Eigen::Index i = 1; i < e.eigenvalues.size(); ++i) CHECK(e.eigenvalues(i - 1) <= e.eigenvalues(i));
  }
  ComplexMatrix skew = identity(2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_WITH_AS(eigh(skew), doctest::Contains("hermitian"), Error);
}

TEST_CASE("matrix_power_psd") {
  CHECK(max_abs_diff(matrix_power_psd(identity(3), 3.7), identity(3)) < 1e-14);
  CHECK(max_abs_diff(matrix_power_psd(diagonal({4, 9}), 0.5), diagonal({2, 3})) < 1e-14);
  CHECK(max_abs_diff(matrix_power_psd(diagonal({0, 2}), 0.0), diagonal({0, 1})) == 0.0);

  Rng rng(11);
  const ComplexMatrix a = random_psd(3, 3, rng);
  CHECK(max_abs_diff(matrix_power_psd(a, 2.0), a * a) < 1e-10 * std::max(1.0, (a * a).norm()));

  for (double p : {2.0, 3.0}) {
    const ComplexMatrix low_rank = random_psd(4, 2, rng);
    CHECK(max_abs_diff(matrix_power_psd(matrix_power_psd(low_rank, p), 1.0 / p), low_rank) < 1e-8);
  }
  CHECK_THROWS_WITH_AS(matrix_power_psd(diagonal({1, -0.5}), 0.5), doctest::Contains("psd"), Error);
  // Drift within the tolerance is clamped.
  CHECK(matrix_power_psd(diagonal({1, -1e-12}), 0.5)(1, 1) == Complex(0.0));
}

TEST_CASE("schatten_norm and trace_power") {
  CHECK(schatten_norm(diagonal({0.5, 0.5}), 2) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(trace_power(identity(4), 2.5) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(schatten_norm(identity(2), 0.5), Error);

  Rng rng(13);
  const ComplexMatrix h = random_hermitian(3, rng);
  double oracle_sum = 0.0;
  for (double l : oracle::eigenvalues(h)) oracle_sum += std::pow(std::abs(l), 3.0);
  CHECK(schatten_norm(h, 3) == doctest::Approx(std::cbrt(oracle_sum)).epsilon(1e-12));

  const ComplexMatrix sigma = random_density_matrix(2, rng).matrix();
  CHECK(trace_power(sigma, 2) == doctest::Approx((sigma * sigma).trace().real()).epsilon(1e-13));
  const ComplexMatrix psd = random_psd(4, 4, rng);
  for (int n : {1, 2, 3, 5})
    CHECK(trace_power(psd, n) == doctest::Approx(oracle::trace_power_int(psd, n)).epsilon(1e-11));

  // Non-Hermitian input goes through singular values.
  const ComplexMatrix g = ginibre(3, 2, rng);
  const Eigen::JacobiSVD<ComplexMatrix> svd(g);
  const double s = std::sqrt(svd.singularValues().array().square().sum());
  CHECK(schatten_norm(g, 2) == doctest::Approx(s).epsilon(1e-13));
}

TEST_CASE("Schatten norms of states are ordered and bounded") {
  Rng rng(17);
  const double ps[] = {1.0, 1.5, 2.0, 3.0, 10.0};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + uniform_index(6, rng);
    const DensityMatrix rho = random_density_matrix(d, 1 + uniform_index(d, rng), rng);
    CHECK(schatten_norm(rho.matrix(), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    double previous = 2.0;
    for (double p : ps) {
      const double v = schatten_norm(rho.matrix(), p);
      CHECK(v <= previous + 1e-12);
      CHECK(v <= 1.0 + 1e-12);
      CHECK(v >= std::pow(static_cast<double>(d), 1.0 / p - 1.0) - 1e-12);
      previous = v;
    }
  }
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(DensityMatrix::basis_state(3, 1)) == 0.0);
  for (std::size_t d = 1; d <= 6; ++d)
    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(d)) ==
          doctest::Approx(std::log(static_cast<double>(d))).epsilon(1e-14));
  CHECK(von_neumann_entropy(DensityMatrix(diagonal({0.25, 0.75}))) ==
        doctest::Approx(0.5623351446188083).epsilon(1e-14));

  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + uniform_index(5, rng);
    const DensityMatrix rho = random_density_matrix(d, rng);
    const double s = von_neumann_entropy(rho);
    CHECK(s == doctest::Approx(oracle::entropy(rho.matrix())).epsilon(1e-10));
    CHECK(s >= 0.0);
    CHECK(s <= std::log(static_cast<double>(d)) + 1e-9);
    // Finite-difference form of d/dp Tr rho^p at p = 1.
    const double h = 1e-5;
    const double fd = (1.0 - trace_power(rho.matrix(), 1.0 + h)) / h;
    const double ln_d = std::log(static_cast<double>(d));
    CHECK(std::abs(fd - s) <= 10.0 * ln_d * ln_d * h);
  }
}

TEST_CASE("DensityMatrix validation names the violated invariant") {
  CHECK_THROWS_WITH_AS(DensityMatrix(diagonal({0.5, 0.6})), doctest::Contains("unit_trace"), Error);
  CHECK_THROWS_WITH_AS(DensityMatrix(diagonal({1.5, -0.5})), doctest::Contains("psd"), Error);
  ComplexMatrix m = diagonal({0.5, 0.5});
  m(0, 1) = 0.1;
  CHECK_THROWS_WITH_AS(DensityMatrix{m}, doctest::Contains("hermitian"), Error);
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(DensityMatrix{m}, Error);
  CHECK_THROWS_WITH_AS(DensityMatrix(identity(kMaxDimension + 1) / double(kMaxDimension + 1)),
                       doctest::Contains("dimension"), Error);

  // Deviations inside the tolerance are accepted and symmetrized.
  ComplexMatrix near = diagonal({0.5, 0.5});
  near(0, 1) = 1e-12;
  const DensityMatrix rho(near);
  CHECK(rho.matrix()(0, 1) == rho.matrix()(1, 0));

  const ComplexMatrix off = diagonal({0.5 + 1e-8, 0.5});
  CHECK_THROWS_AS(DensityMatrix{off}, Error);
  {
    Tolerances loose;
    loose.trace = 1e-6;
    const ScopedTolerances scope(loose);
    CHECK_NOTHROW(DensityMatrix{off});
  }
  CHECK_THROWS_AS(DensityMatrix{off}, Error);
}

TEST_CASE("pure and maximally mixed factories") {
  ComplexVector psi(2);
  psi << Complex(3, 0), Complex(0, 4);
  const DensityMatrix rho = DensityMatrix::pure(psi);
  CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(von_neumann_entropy(rho) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(DensityMatrix::maximally_mixed(3).matrix() == identity(3) / 3.0);
}
