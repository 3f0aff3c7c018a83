#include "ebcert/channels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ebcert/random.hpp"

namespace ebcert {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Tr(a b) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.transpose().cwiseProduct(b).sum();
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Columns v_j sqrt(l_j) with m = sum_j (v_j sqrt l_j)(v_j sqrt l_j)^dagger.
std::vector<ComplexVector> psd_factors(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(m));
  std::vector<ComplexVector> out;
  const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (Eigen::Index j = es.eigenvalues().size() - 1; j >= 0; --j) {
    const double l = es.eigenvalues()(j);
    if (l > 1e-15 * top) out.emplace_back(es.eigenvectors().col(j) * std::sqrt(l));
  }
  return out;
}

std::string term_label(const char* what, std::size_t k) {
  return std::string(what) + "_" + std::to_string(k + 1);
}

}  // namespace

HolevoEBChannel::HolevoEBChannel(std::size_t dim_in, std::size_t dim_out, std::vector<EBPair> pairs)
    : dim_in_(dim_in), dim_out_(dim_out), pairs_(std::move(pairs)) {
  require_dimension(dim_in, "dim_in");
  require_dimension(dim_out, "dim_out");
  if (pairs_.empty()) throw Error("povm_completeness", "measure-and-prepare channel has no terms");
  ComplexMatrix total = ComplexMatrix::Zero(dim_in, dim_in);
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    EBPair& pair = pairs_[k];
    if (pair.state.dim() != dim_out)
      throw Error("dimension", term_label("R", k) + " has dimension " + std::to_string(pair.state.dim()) +
                                   ", expected " + std::to_string(dim_out));
    if (pair.effect.rows() != static_cast<Eigen::Index>(dim_in) ||
        pair.effect.cols() != static_cast<Eigen::Index>(dim_in))
      throw Error("dimension", term_label("X", k) + " must be " + std::to_string(dim_in) + "x" +
                                   std::to_string(dim_in));
    try {
      psd_eigenvalues(pair.effect);
    } catch (const Error& e) {
      throw Error(e.invariant() == "psd" ? "povm_psd" : e.invariant(),
                  term_label("X", k) + " is not a POVM element (" + e.what() + ")");
    }
    pair.effect = hermitize(pair.effect);
    total += pair.effect;
  }
  const double dev = (total - identity(dim_in)).cwiseAbs().maxCoeff();
  if (dev > tolerances().completeness)
    throw Error("povm_completeness", "sum of X_k deviates from the identity by " + fmt(dev));
}

HolevoEBChannel HolevoEBChannel::replace(const DensityMatrix& sigma, std::size_t dim_in) {
  return HolevoEBChannel(dim_in, sigma.dim(), {EBPair{sigma, identity(dim_in)}});
}

HolevoEBChannel HolevoEBChannel::dephasing(std::size_t dim) {
  std::vector<EBPair> pairs;
  for (std::size_t k = 0; k < dim; ++k) {
    DensityMatrix proj = DensityMatrix::basis_state(dim, k);
    pairs.push_back({proj, proj.matrix()});
  }
  return HolevoEBChannel(dim, dim, std::move(pairs));
}

KrausChannel::KrausChannel(std::size_t dim_in, std::size_t dim_out, std::vector<ComplexMatrix> ops)
    : dim_in_(dim_in), dim_out_(dim_out), ops_(std::move(ops)) {
  require_dimension(dim_in, "dim_in");
  require_dimension(dim_out, "dim_out");
  if (ops_.empty()) throw Error("trace_preservation", "Kraus channel has no operators");
  ComplexMatrix total = ComplexMatrix::Zero(dim_in, dim_in);
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    const ComplexMatrix& a = ops_[k];
    if (a.rows() != static_cast<Eigen::Index>(dim_out) || a.cols() != static_cast<Eigen::Index>(dim_in))
      throw Error("dimension", term_label("A", k) + " must be " + std::to_string(dim_out) + "x" +
                                   std::to_string(dim_in));
    require_finite(a, "Kraus operator");
    total += a.adjoint() * a;
  }
  const double dev = (total - ebcert::identity(dim_in)).cwiseAbs().maxCoeff();
  if (dev > tolerances().completeness)
    throw Error("trace_preservation", "sum of A_k^dagger A_k deviates from the identity by " + fmt(dev));
}

KrausChannel KrausChannel::identity(std::size_t dim) {
  return KrausChannel(dim, dim, {ebcert::identity(dim)});
}

KrausChannel KrausChannel::depolarizing(std::size_t dim, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("depolarizing", "lambda must lie in [0, 1]");
  const auto d = static_cast<Eigen::Index>(dim);
  const double d2 = static_cast<double>(dim * dim);
  ComplexMatrix shift = ComplexMatrix::Zero(d, d);
  ComplexMatrix clock = ComplexMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    shift((j + 1) % d, j) = 1.0;
    clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(d));
  }
  std::vector<ComplexMatrix> ops;
  ComplexMatrix xa = ebcert::identity(dim);
  for (Eigen::Index a = 0; a < d; ++a) {
    ComplexMatrix w = xa;
    for (Eigen::Index b = 0; b < d; ++b) {
      const double weight = (a == 0 && b == 0) ? lambda + (1.0 - lambda) / d2 : (1.0 - lambda) / d2;
      if (weight > 0.0) ops.push_back(std::sqrt(weight) * w);
      w = w * clock;
    }
    xa = shift * xa;
  }
  return KrausChannel(dim, dim, std::move(ops));
}

std::size_t Channel::dim_in() const {
  return std::visit([](const auto& c) { return c.dim_in(); }, rep_);
}

std::size_t Channel::dim_out() const {
  return std::visit([](const auto& c) { return c.dim_out(); }, rep_);
}

ComplexMatrix Channel::apply_operator(const ComplexMatrix& m) const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_out(), dim_out());
  if (is_holevo()) {
    for (const EBPair& pair : holevo().pairs()) out += trace_product(pair.effect, m) * pair.state.matrix();
  } else {
    for (const ComplexMatrix& a : kraus().ops()) out += a * m * a.adjoint();
  }
  return out;
}

ComplexMatrix Channel::apply_pure(const ComplexVector& psi) const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_out(), dim_out());
  if (is_holevo()) {
    for (const EBPair& pair : holevo().pairs())
      out += psi.dot(pair.effect * psi).real() * pair.state.matrix();
  } else {
    for (const ComplexMatrix& a : kraus().ops()) {
      const ComplexVector w = a * psi;
      out.noalias() += w * w.adjoint();
    }
  }
  return out;
}

ComplexMatrix Channel::apply_adjoint(const ComplexMatrix& g) const {
  ComplexMatrix out = ComplexMatrix::Zero(dim_in(), dim_in());
  if (is_holevo()) {
    for (const EBPair& pair : holevo().pairs()) out += trace_product(pair.state.matrix(), g) * pair.effect;
  } else {
    for (const ComplexMatrix& a : kraus().ops()) out += a.adjoint() * g * a;
  }
  return out;
}

ComplexVector Channel::apply_adjoint_to(const ComplexMatrix& g, const ComplexVector& psi) const {
  ComplexVector out = ComplexVector::Zero(psi.size());
  if (is_holevo()) {
    for (const EBPair& pair : holevo().pairs()) out += trace_product(pair.state.matrix(), g) * (pair.effect * psi);
  } else {
    for (const ComplexMatrix& a : kraus().ops()) out.noalias() += a.adjoint() * (g * (a * psi));
  }
  return out;
}

DensityMatrix apply(const Channel& c, const DensityMatrix& rho) {
  if (rho.dim() != c.dim_in())
    throw Error("dimension", "state dimension " + std::to_string(rho.dim()) + " does not match channel input " +
                                 std::to_string(c.dim_in()));
  return DensityMatrix(hermitize(c.apply_operator(rho.matrix())));
}

ComplexMatrix apply_local(const Channel& c, const ComplexMatrix& m12, std::size_t dim2) {
  const auto din = static_cast<Eigen::Index>(c.dim_in());
  const auto dout = static_cast<Eigen::Index>(c.dim_out());
  const auto d2 = static_cast<Eigen::Index>(dim2);
  if (m12.rows() != din * d2 || m12.cols() != din * d2)
    throw Error("dimension", "bipartite operator is " + std::to_string(m12.rows()) + "x" +
                                 std::to_string(m12.cols()) + ", expected " + std::to_string(din * d2));
  if (c.is_holevo()) {
    ComplexMatrix out = ComplexMatrix::Zero(dout * d2, dout * d2);
    for (const EBPair& pair : c.holevo().pairs()) {
      const ComplexMatrix cond =
          partial_trace(tensor(pair.effect, identity(dim2)) * m12, c.dim_in(), dim2, Subsystem::second);
      out += tensor(pair.state.matrix(), cond);
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dout * d2, dout * d2);
  const ComplexMatrix id2 = identity(dim2);
  for (const ComplexMatrix& a : c.kraus().ops()) {
    const ComplexMatrix big = tensor(a, id2);
    out += big * m12 * big.adjoint();
  }
  return out;
}

DensityMatrix apply_local(const Channel& c, const DensityMatrix& rho12, std::size_t dim2) {
  if (rho12.dim() != c.dim_in() * dim2)
    throw Error("dimension", "bipartite state dimension " + std::to_string(rho12.dim()) +
                                 " does not match " + std::to_string(c.dim_in()) + " x " + std::to_string(dim2));
  return DensityMatrix(hermitize(apply_local(c, rho12.matrix(), dim2)));
}

KrausChannel to_kraus(const Channel& c) {
  if (!c.is_holevo()) return c.kraus();
  const HolevoEBChannel& phi = c.holevo();
  std::vector<ComplexMatrix> ops;
  for (const EBPair& pair : phi.pairs()) {
    const auto rs = psd_factors(pair.state.matrix());
    const auto xs = psd_factors(pair.effect);
    for (const ComplexVector& r : rs)
      for (const ComplexVector& x : xs) ops.emplace_back(r * x.adjoint());
  }
  return KrausChannel(phi.dim_in(), phi.dim_out(), std::move(ops));
}

Channel tensor_channels(const Channel& a, const Channel& b) {
  const KrausChannel ka = to_kraus(a);
  const KrausChannel kb = to_kraus(b);
  std::vector<ComplexMatrix> ops;
  ops.reserve(ka.ops().size() * kb.ops().size());
  for (const ComplexMatrix& x : ka.ops())
    for (const ComplexMatrix& y : kb.ops()) ops.push_back(tensor(x, y));
  return KrausChannel(a.dim_in() * b.dim_in(), a.dim_out() * b.dim_out(), std::move(ops));
}

ChoiMatrix::ChoiMatrix(std::size_t dim_in, std::size_t dim_out, const ComplexMatrix& m)
    : dim_in_(dim_in), dim_out_(dim_out), matrix_(m) {
  const ComplexMatrix marginal = partial_trace(matrix_.matrix(), dim_out, dim_in, Subsystem::second);
  const double dev = (marginal - identity(dim_in) / static_cast<double>(dim_in)).cwiseAbs().maxCoeff();
  if (dev > tolerances().completeness)
    throw Error("trace_preservation", "Choi marginal deviates from I/dim_in by " + fmt(dev));
}

ChoiMatrix to_choi(const Channel& c) {
  const std::size_t din = c.dim_in();
  const std::size_t dout = c.dim_out();
  ComplexMatrix m = ComplexMatrix::Zero(dout * din, dout * din);
  for (std::size_t i = 0; i < din; ++i)
    for (std::size_t j = 0; j < din; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(din, din);
      unit(i, j) = 1.0;
      m += tensor(c.apply_operator(unit), unit);
    }
  m /= static_cast<double>(din);
  return ChoiMatrix(din, dout, hermitize(m));
}

ComplexMatrix apply_choi(const ChoiMatrix& choi, const ComplexMatrix& rho) {
  if (rho.rows() != static_cast<Eigen::Index>(choi.dim_in()) || rho.cols() != rho.rows())
    throw Error("dimension", "input does not match Choi input dimension");
  const ComplexMatrix prod = choi.matrix().matrix() * tensor(identity(choi.dim_out()), rho.transpose());
  return static_cast<double>(choi.dim_in()) *
         partial_trace(prod, choi.dim_out(), choi.dim_in(), Subsystem::first);
}

double min_partial_transpose_eigenvalue(const ChoiMatrix& choi) {
  const ComplexMatrix pt =
      partial_transpose(choi.matrix().matrix(), choi.dim_out(), choi.dim_in(), Subsystem::second);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(pt), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

const char* to_string(EBClass c) {
  switch (c) {
    case EBClass::eb: return "EB";
    case EBClass::not_eb: return "NOT_EB";
    case EBClass::undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

EBClass is_entanglement_breaking(const Channel& c) {
  if (c.is_holevo()) return EBClass::eb;
  const ChoiMatrix choi = to_choi(c);
  if (min_partial_transpose_eigenvalue(choi) < -tolerances().psd) return EBClass::not_eb;
  if (c.dim_in() == 1 || c.dim_out() == 1 || c.dim_in() * c.dim_out() <= 6) return EBClass::eb;
  return EBClass::undecided;
}

BipartiteDecomposition bipartite_decomposition(const HolevoEBChannel& phi, const DensityMatrix& rho12,
                                               std::size_t dim2) {
  const std::size_t din = phi.dim_in();
  const std::size_t dout = phi.dim_out();
  if (rho12.dim() != din * dim2)
    throw Error("dimension", "bipartite state dimension " + std::to_string(rho12.dim()) + " does not match " +
                                 std::to_string(din) + " x " + std::to_string(dim2));
  const std::size_t terms = phi.size();
  BipartiteDecomposition d;
  d.weights.reserve(terms);
  d.conditionals.reserve(terms);
  d.root_blocks.reserve(terms);
  const ComplexMatrix id2 = identity(dim2);
  ComplexMatrix row = ComplexMatrix::Zero(dout, dout * terms);
  for (std::size_t k = 0; k < terms; ++k) {
    const EBPair& pair = phi.pairs()[k];
    ComplexMatrix cond =
        hermitize(partial_trace(tensor(pair.effect, id2) * rho12.matrix(), din, dim2, Subsystem::second));
    const double x = cond.trace().real();
    if (x > kInactiveWeight) {
      d.weights.push_back(x);
      d.conditionals.emplace_back(DensityMatrix(cond / x));
      d.root_blocks.push_back(matrix_power_psd(x * pair.state.matrix(), 0.5));
      d.active_terms.push_back(k);
    } else {
      d.weights.push_back(std::max(x, 0.0));
      d.conditionals.emplace_back(std::nullopt);
      d.root_blocks.push_back(ComplexMatrix::Zero(dout, dout));
    }
    row.block(0, static_cast<Eigen::Index>(k * dout), dout, dout) = d.root_blocks.back();
  }
  d.block_gram = row.adjoint() * row;
  return d;
}

ComplexMatrix reconstruct(const HolevoEBChannel& phi, const BipartiteDecomposition& d) {
  const std::size_t dim2 = d.active_terms.empty() ? 1 : d.conditionals[d.active_terms.front()]->dim();
  ComplexMatrix out = ComplexMatrix::Zero(phi.dim_out() * dim2, phi.dim_out() * dim2);
  for (std::size_t k : d.active_terms)
    out += d.weights[k] * tensor(phi.pairs()[k].state.matrix(), d.conditionals[k]->matrix());
  return out;
}

HolevoEBChannel random_eb_channel(std::size_t dim_in, std::size_t dim_out, std::size_t terms,
                                  std::uint64_t seed) {
  if (terms == 0) throw Error("dimension", "random_eb_channel needs at least one term");
  require_dimension(dim_in, "dim_in");
  require_dimension(dim_out, "dim_out");
  Rng rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<DensityMatrix> states;
    std::vector<ComplexMatrix> raw;
    ComplexMatrix total = ComplexMatrix::Zero(dim_in, dim_in);
    for (std::size_t k = 0; k < terms; ++k) {
      states.push_back(random_density_matrix(dim_out, rng));
      raw.push_back(random_psd(dim_in, dim_in, rng));
      total += raw.back();
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(total));
    const RealVector& ev = es.eigenvalues();
    if (ev(0) <= 1e-12 * ev(ev.size() - 1)) continue;
    const ComplexMatrix inv_sqrt =
        es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
    std::vector<EBPair> pairs;
    for (std::size_t k = 0; k < terms; ++k)
      pairs.push_back({std::move(states[k]), hermitize(inv_sqrt * raw[k] * inv_sqrt)});
    return HolevoEBChannel(dim_in, dim_out, std::move(pairs));
  }
  throw Error("povm_completeness", "random POVM normalization was singular after 16 attempts");
}

KrausChannel random_channel(std::size_t dim_in, std::size_t dim_out, std::size_t kraus_rank,
                            std::uint64_t seed) {
  if (kraus_rank == 0) throw Error("dimension", "kraus_rank must be >= 1");
  require_dimension(dim_in, "dim_in");
  require_dimension(dim_out, "dim_out");
  if (kraus_rank * dim_out < dim_in)
    throw Error("dimension", "kraus_rank * dim_out must be at least dim_in for an isometry");
  Rng rng(seed);
  const auto rows = static_cast<Eigen::Index>(kraus_rank * dim_out);
  const auto cols = static_cast<Eigen::Index>(dim_in);
  for (int attempt = 0; attempt < 16; ++attempt) {
    const ComplexMatrix v = ginibre(rows, cols, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(v);
    const ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    if (r.diagonal().cwiseAbs().minCoeff() < 1e-10) continue;
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
    std::vector<ComplexMatrix> ops;
    for (std::size_t k = 0; k < kraus_rank; ++k)
      ops.push_back(q.block(static_cast<Eigen::Index>(k * dim_out), 0, static_cast<Eigen::Index>(dim_out), cols));
    return KrausChannel(dim_in, dim_out, std::move(ops));
  }
  throw Error("trace_preservation", "random isometry sample was rank deficient after 16 attempts");
}

}  // namespace ebcert
