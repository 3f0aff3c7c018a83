#include "ebcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ebcert {

namespace {

Tolerances g_tolerances;

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Eigenvalue threshold below which a PSD matrix is declared indefinite.
double psd_floor(const RealVector& eigenvalues) {
  double scale = 1.0;
  if (eigenvalues.size() > 0) scale = std::max(scale, eigenvalues.cwiseAbs().maxCoeff());
  return -tolerances().psd * scale;
}

}  // namespace

const Tolerances& tolerances() { return g_tolerances; }
void set_tolerances(const Tolerances& tol) { g_tolerances = tol; }

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw Error("finite", std::string(what) + " has non-finite entries");
}

void require_dimension(std::size_t dim, const char* what) {
  if (dim == 0 || dim > kMaxDimension)
    throw Error("dimension", std::string(what) + " = " + std::to_string(dim) + " outside [1, " +
                                 std::to_string(kMaxDimension) + "]");
}

double hermitian_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    throw Error("dimension", std::string(what) + " is not square (" + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + ")");
  require_finite(m, what);
  const double dev = hermitian_deviation(m);
  if (dev > tolerances().hermitian * std::max(1.0, max_abs(m)))
    throw Error("hermitian", std::string(what) + " deviates from its adjoint by " + fmt(dev));
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
  require_dimension(static_cast<std::size_t>(m.rows()), "density matrix dimension");
  require_hermitian(m, "density matrix");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > tolerances().trace)
    throw Error("unit_trace", "density matrix trace is " + fmt(tr));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  if (ev.minCoeff() < psd_floor(ev))
    throw Error("psd", "density matrix has eigenvalue " + fmt(ev.minCoeff()));
  m_ = std::move(h);
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw Error("unit_norm", "pure state vector has zero norm");
  const ComplexVector u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  require_dimension(dim);
  return DensityMatrix(identity(dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis_state(std::size_t dim, std::size_t index) {
  require_dimension(dim);
  if (index >= dim) throw Error("dimension", "basis index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(m);
}

HermitianEigen eigh(const ComplexMatrix& a) {
  require_dimension(static_cast<std::size_t>(a.rows()), "eigh dimension");
  require_hermitian(a);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a + a.adjoint()));
  if (es.info() != Eigen::Success) throw Error("eigh", "eigendecomposition did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

RealVector psd_eigenvalues(const ComplexMatrix& a) {
  require_hermitian(a);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() < psd_floor(ev))
    throw Error("psd", "matrix has eigenvalue " + fmt(ev.minCoeff()));
  return ev.cwiseMax(0.0);
}

ComplexMatrix identity(std::size_t dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix diagonal(std::initializer_list<double> entries) {
  ComplexMatrix m = ComplexMatrix::Zero(entries.size(), entries.size());
  Eigen::Index i = 0;
  for (double e : entries) {
    m(i, i) = e;
    ++i;
  }
  return m;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim1, std::size_t dim2, Subsystem keep) {
  require_dimension(dim1, "dim1");
  require_dimension(dim2, "dim2");
  const auto n = static_cast<Eigen::Index>(dim1 * dim2);
  if (m.rows() != n || m.cols() != n)
    throw Error("dimension", "partial_trace expects a " + std::to_string(n) + "x" + std::to_string(n) +
                                 " operator, got " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()));
  const auto d1 = static_cast<Eigen::Index>(dim1);
  const auto d2 = static_cast<Eigen::Index>(dim2);
  if (keep == Subsystem::first) {
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (Eigen::Index i = 0; i < d1; ++i)
      for (Eigen::Index j = 0; j < d1; ++j) out(i, j) = m.block(i * d2, j * d2, d2, d2).trace();
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Eigen::Index i = 0; i < d1; ++i) out += m.block(i * d2, i * d2, d2, d2);
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::size_t dim1, std::size_t dim2,
                                Subsystem which) {
  const auto d1 = static_cast<Eigen::Index>(dim1);
  const auto d2 = static_cast<Eigen::Index>(dim2);
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2)
    throw Error("dimension", "partial_transpose dimension mismatch");
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i1 = 0; i1 < d1; ++i1)
    for (Eigen::Index j1 = 0; j1 < d1; ++j1)
      for (Eigen::Index i2 = 0; i2 < d2; ++i2)
        for (Eigen::Index j2 = 0; j2 < d2; ++j2) {
          const Complex v = m(i1 * d2 + i2, j1 * d2 + j2);
          if (which == Subsystem::first)
            out(j1 * d2 + i2, i1 * d2 + j2) = v;
          else
            out(i1 * d2 + j2, j1 * d2 + i2) = v;
        }
  return out;
}

ComplexMatrix matrix_power_psd(const ComplexMatrix& a, double p) {
  if (!(p >= 0.0)) throw Error("power", "matrix_power_psd requires p >= 0");
  const HermitianEigen e = eigh(a);
  const double floor = psd_floor(e.eigenvalues);
  // Eigenvalues at rounding level are treated as exact zeros; otherwise
  // fractional powers amplify them (1e-16 -> 1e-8 for p = 1/2).
  const double noise = 16.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(a.rows()) *
                       (e.eigenvalues.size() > 0 ? e.eigenvalues.cwiseAbs().maxCoeff() : 0.0);
  RealVector powered(e.eigenvalues.size());
  for (Eigen::Index i = 0; i < powered.size(); ++i) {
    const double l = e.eigenvalues(i);
    if (l < floor) throw Error("psd", "matrix has eigenvalue " + fmt(l));
    if (p == 0.0)
      powered(i) = l > -floor ? 1.0 : 0.0;  // support projector
    else
      powered(i) = l > noise ? std::pow(l, p) : 0.0;
  }
  ComplexMatrix out = e.eigenvectors * powered.asDiagonal() * e.eigenvectors.adjoint();
  require_finite(out, "matrix power");
  return out;
}

double schatten_norm(const ComplexMatrix& a, double p) {
  if (!(p >= 1.0)) throw Error("schatten_p", "Schatten norm requires p >= 1, got " + fmt(p));
  require_finite(a);
  RealVector sv;
  if (a.rows() == a.cols() && hermitian_deviation(a) <= tolerances().hermitian * std::max(1.0, max_abs(a))) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
    sv = es.eigenvalues().cwiseAbs();
  } else {
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    sv = svd.singularValues();
  }
  if (sv.size() == 0) return 0.0;
  // Scale by the largest singular value to keep sigma^p in range.
  const double top = sv.maxCoeff();
  if (top == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) sum += std::pow(sv(i) / top, p);
  return top * std::pow(sum, 1.0 / p);
}

double trace_power(const ComplexMatrix& a, double p) {
  if (!(p >= 1.0)) throw Error("power", "trace_power requires p >= 1, got " + fmt(p));
  const RealVector ev = psd_eigenvalues(a);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0.0) sum += std::pow(ev(i), p);
  return sum;
}

double entropy_of_spectrum(const RealVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues(i);
    if (l > 0.0) s -= l * std::log(l);
  }
  return std::max(s, 0.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_of_spectrum(psd_eigenvalues(rho.matrix()));
}

}  // namespace ebcert
