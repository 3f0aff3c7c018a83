#pragma once

// Dense complex matrix algebra for small quantum systems: Hermitian
// eigendecompositions, PSD matrix powers, tensor products, partial traces,
// Schatten norms and von Neumann entropy.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace ebcert {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest Hilbert-space dimension accepted at API boundaries.
inline constexpr std::size_t kMaxDimension = 64;

/// Error carrying the name of the violated invariant, e.g. "hermitian",
/// "psd", "unit_trace", "povm_completeness", "dimension".
class Error : public std::runtime_error {
 public:
  Error(std::string invariant, const std::string& message)
      : std::runtime_error(invariant + ": " + message), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Numerical tolerances shared by every validation in the library.
struct Tolerances {
  double hermitian = 1e-10;     // max |M - M^dagger| entry
  double psd = 1e-9;            // eigenvalues >= -psd (scaled by max(1, |A|))
  double trace = 1e-10;         // |Tr rho - 1|
  double completeness = 1e-9;   // sum X_k = I, sum A_k^dagger A_k = I (entrywise)
};

const Tolerances& tolerances();
void set_tolerances(const Tolerances& tol);

/// Installs a tolerance record for the lifetime of the object.
class ScopedTolerances {
 public:
  explicit ScopedTolerances(const Tolerances& tol) : saved_(tolerances()) { set_tolerances(tol); }
  ~ScopedTolerances() { set_tolerances(saved_); }
  ScopedTolerances(const ScopedTolerances&) = delete;
  ScopedTolerances& operator=(const ScopedTolerances&) = delete;

 private:
  Tolerances saved_;
};

/// Hermitian, positive semidefinite, unit-trace matrix. Construction validates
/// and stores the Hermitian part of the input.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m);

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix basis_state(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

struct HermitianEigen {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // unitary, columns
};

/// max_ij |M_ij - conj(M_ji)|; infinity for non-square input.
double hermitian_deviation(const ComplexMatrix& m);

/// Throws Error("hermitian") unless m is square and Hermitian within tolerance.
void require_hermitian(const ComplexMatrix& m, const char* what = "matrix");

HermitianEigen eigh(const ComplexMatrix& a);

/// Eigenvalues of a Hermitian PSD matrix with small negative drift clamped to
/// zero. Eigenvalues below -psd * max(1, |A|) raise Error("psd").
RealVector psd_eigenvalues(const ComplexMatrix& a);

ComplexMatrix identity(std::size_t dim);
ComplexMatrix diagonal(std::initializer_list<double> entries);

/// Kronecker product with block (i, j) equal to a(i, j) * b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { first = 1, second = 2 };

/// Partial trace of an operator on C^dim1 (x) C^dim2. keep=first returns
/// Tr_2(m) (dim1 x dim1); keep=second returns Tr_1(m) (dim2 x dim2).
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim1, std::size_t dim2, Subsystem keep);

/// Transpose of the indicated tensor factor.
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t dim1, std::size_t dim2,
                                Subsystem which);

/// V diag(max(l, 0)^p) V^dagger; 0^0 is taken as 0, so p = 0 gives the
/// support projector.
ComplexMatrix matrix_power_psd(const ComplexMatrix& a, double p);

/// (sum sigma_i^p)^(1/p); Hermitian inputs use |eigenvalues|.
double schatten_norm(const ComplexMatrix& a, double p);

/// sum max(l_i, 0)^p for Hermitian PSD a.
double trace_power(const ComplexMatrix& a, double p);

/// -sum l ln l in nats.
double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy of a nonnegative spectrum; zero entries contribute nothing.
double entropy_of_spectrum(const RealVector& eigenvalues);

/// Throws Error("finite") if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what = "matrix");

/// Throws Error("dimension") when dim is zero or exceeds kMaxDimension.
void require_dimension(std::size_t dim, const char* what = "dimension");

}  // namespace ebcert
