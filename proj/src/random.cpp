#include "ebcert/random.hpp"

#include <cmath>

namespace ebcert {

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(rows, cols);
  // Column-major fill keeps the draw order independent of Eigen internals.
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex(re, im);
    }
  return g;
}

ComplexVector random_unit_vector(std::size_t dim, Rng& rng) {
  for (;;) {
    ComplexVector v = ginibre(dim, 1, rng).col(0);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

ComplexMatrix random_psd(std::size_t dim, std::size_t rank, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, rank, rng);
  ComplexMatrix m = g * g.adjoint();
  return 0.5 * (m + m.adjoint());
}

DensityMatrix random_density_matrix(std::size_t dim, std::size_t rank, Rng& rng) {
  require_dimension(dim);
  if (rank == 0) throw Error("dimension", "random_density_matrix rank must be >= 1");
  ComplexMatrix m = random_psd(dim, rank, rng);
  m /= m.trace().real();
  return DensityMatrix(m);
}

DensityMatrix random_pure_state(std::size_t dim, Rng& rng) {
  return DensityMatrix::pure(random_unit_vector(dim, rng));
}

std::size_t uniform_index(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace ebcert
