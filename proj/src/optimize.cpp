#include "ebcert/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ebcert/random.hpp"

namespace ebcert {

namespace {

// Floor inside logarithms of output spectra; only multiplies eigenvectors that
// the gradient maps to (numerically) zero.
constexpr double kLogFloor = 1e-30;

// Below this exponent nu_p is reported as exactly 1.
constexpr double kUnitPThreshold = 1.0001;

enum class Manifold { sphere, co_isometry };

using Objective = std::function<double(const ComplexMatrix&, ComplexMatrix*)>;

struct Problem {
  Manifold manifold;
  Objective objective;  // minimized
};

struct LocalResult {
  ComplexMatrix x;
  double f;
  bool converged;
};

double inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

ComplexMatrix retract(Manifold m, const ComplexMatrix& x) {
  if (m == Manifold::sphere) return x / x.norm();
  Eigen::JacobiSVD<ComplexMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

ComplexMatrix tangent(Manifold m, const ComplexMatrix& x, const ComplexMatrix& g) {
  if (m == Manifold::sphere) return g - inner(x, g) * x;
  const ComplexMatrix s = g * x.adjoint();
  return g - 0.5 * (s + s.adjoint()) * x;
}

ComplexMatrix fd_gradient(const Objective& f, const ComplexMatrix& x, double h) {
  ComplexMatrix g(x.rows(), x.cols());
  ComplexMatrix probe = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Complex orig = x(i, j);
      probe(i, j) = orig + h;
      const double fp_re = f(probe, nullptr);
      probe(i, j) = orig - h;
      const double fm_re = f(probe, nullptr);
      probe(i, j) = orig + Complex(0.0, h);
      const double fp_im = f(probe, nullptr);
      probe(i, j) = orig - Complex(0.0, h);
      const double fm_im = f(probe, nullptr);
      probe(i, j) = orig;
      g(i, j) = Complex((fp_re - fm_re) / (2.0 * h), (fp_im - fm_im) / (2.0 * h));
    }
  return g;
}

// Riemannian steepest descent with Barzilai-Borwein trial steps and Armijo
// backtracking.
LocalResult descend(const Problem& pb, const ComplexMatrix& x0, const OptimizerConfig& cfg) {
  auto eval = [&](const ComplexMatrix& x, ComplexMatrix& g) {
    if (cfg.gradient == GradientMode::analytic) return pb.objective(x, &g);
    g = fd_gradient(pb.objective, x, cfg.fd_step);
    return pb.objective(x, nullptr);
  };

  ComplexMatrix x = retract(pb.manifold, x0);
  ComplexMatrix g;
  double f = eval(x, g);
  ComplexMatrix gt = tangent(pb.manifold, x, g);
  double gn = gt.norm();
  double step = gn > 0.0 ? 0.1 / gn : 1.0;
  bool converged = false;
  int stalls = 0;

  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    if (gn < 1e-13) {
      converged = true;
      break;
    }
    double t = step;
    ComplexMatrix xn;
    double fn = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      xn = retract(pb.manifold, x - t * gt);
      fn = pb.objective(xn, nullptr);
      if (fn <= f - 1e-4 * t * gn * gn) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      converged = true;  // no decrease left at machine resolution
      break;
    }
    ComplexMatrix gnew;
    fn = eval(xn, gnew);
    const ComplexMatrix gtn = tangent(pb.manifold, xn, gnew);
    const ComplexMatrix s = xn - x;
    const ComplexMatrix y = gtn - gt;
    const double sy = inner(s, y);
    const double moved = s.norm();
    const double decrease = f - fn;

    x = std::move(xn);
    f = fn;
    gt = gtn;
    gn = gt.norm();
    step = sy > 0.0 ? inner(s, s) / sy : 2.0 * t;
    if (gn > 0.0) step = std::min(step, 1.0 / gn);

    if (moved < cfg.step_tol) {
      converged = true;
      break;
    }
    stalls = decrease <= cfg.value_tol * std::max(1.0, std::abs(f)) ? stalls + 1 : 0;
    if (stalls >= 3) {
      converged = true;
      break;
    }
  }
  return {x, f, converged};
}

struct MultiStartResult {
  ComplexMatrix x;
  double f = std::numeric_limits<double>::infinity();
  std::vector<bool> converged;
  std::size_t best = 0;
  std::size_t discarded = 0;
};

// Starts are independent; the lowest index wins ties.
MultiStartResult multi_start(const Problem& pb, std::size_t starts, const OptimizerConfig& cfg,
                             const std::function<ComplexMatrix(Rng&)>& initial,
                             const std::function<bool(const ComplexMatrix&)>& accept = {}) {
  MultiStartResult out;
  out.converged.reserve(starts);
  for (std::size_t s = 0; s < starts; ++s) {
    Rng rng(cfg.seed + s);
    LocalResult r = descend(pb, initial(rng), cfg);
    out.converged.push_back(r.converged);
    if (accept && !accept(r.x)) {
      ++out.discarded;
      continue;
    }
    if (r.f < out.f) {
      out.f = r.f;
      out.x = std::move(r.x);
      out.best = s;
    }
  }
  return out;
}

void validate(const OptimizerConfig& cfg) {
  if (!(cfg.step_tol > 0.0) || !(cfg.value_tol > 0.0) || !(cfg.fd_step > 0.0))
    throw Error("optimizer_config", "tolerances must be positive");
}

struct Spectrum {
  RealVector values;
  ComplexMatrix vectors;
};

Spectrum spectrum(const ComplexMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (sigma + sigma.adjoint()));
  return {es.eigenvalues().cwiseMax(0.0), es.eigenvectors()};
}

ComplexMatrix log_of(const Spectrum& s) {
  RealVector l(s.values.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) l(i) = std::log(std::max(s.values(i), kLogFloor));
  return s.vectors * l.asDiagonal() * s.vectors.adjoint();
}

double entropy_term(const Spectrum& s) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i)
    if (s.values(i) > 0.0) out -= s.values(i) * std::log(s.values(i));
  return out;
}

Ensemble ensemble_from(const ComplexMatrix& v) {
  Ensemble e;
  double total = 0.0;
  for (Eigen::Index k = 0; k < v.cols(); ++k) total += v.col(k).squaredNorm();
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const double w = v.col(k).squaredNorm();
    if (!(w > 0.0)) continue;
    e.probabilities.push_back(w / total);
    e.states.push_back(DensityMatrix::pure(v.col(k)));
  }
  return e;
}

// p_k = |v_k|^2 terms: value sum_k (-Tr s_k ln s_k + p_k ln p_k) with s_k = c(v_k v_k^dagger).
double member_entropies(const Channel& c, const ComplexMatrix& v, ComplexMatrix* grad) {
  double value = 0.0;
  if (grad) *grad = ComplexMatrix::Zero(v.rows(), v.cols());
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    const ComplexVector vk = v.col(k);
    const double pk = vk.squaredNorm();
    if (!(pk > 0.0)) continue;
    const Spectrum s = spectrum(c.apply_pure(vk));
    value += entropy_term(s) + pk * std::log(pk);
    if (grad) grad->col(k) = 2.0 * (std::log(pk) * vk - c.apply_adjoint_to(log_of(s), vk));
  }
  return value;
}

}  // namespace

std::size_t resolved_starts(const OptimizerConfig& cfg, std::size_t dim_in) {
  if (cfg.starts > 0) return cfg.starts;
  return dim_in >= 4 ? 256 : 64;
}

const char* to_string(BoundKind b) {
  switch (b) {
    case BoundKind::exact: return "exact";
    case BoundKind::lower: return "lower bound";
    case BoundKind::upper: return "upper bound";
  }
  return "exact";
}

ComplexMatrix Ensemble::average() const {
  if (states.empty()) return {};
  ComplexMatrix out = ComplexMatrix::Zero(states.front().dim(), states.front().dim());
  for (std::size_t k = 0; k < states.size(); ++k) out += probabilities[k] * states[k].matrix();
  return out;
}

namespace objectives {

double output_trace_power(const Channel& c, const ComplexVector& psi_in, double p, ComplexVector* grad) {
  const ComplexVector psi = psi_in / psi_in.norm();
  const Spectrum s = spectrum(c.apply_pure(psi));
  double value = 0.0;
  RealVector deriv(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    const double l = s.values(i);
    value += l > 0.0 ? std::pow(l, p) : 0.0;
    deriv(i) = l > 0.0 ? std::pow(l, p - 1.0) : 0.0;
  }
  if (grad) {
    const ComplexMatrix g = s.vectors * deriv.asDiagonal() * s.vectors.adjoint();
    *grad = 2.0 * p * c.apply_adjoint_to(g, psi);
  }
  return value;
}

double output_entropy(const Channel& c, const ComplexVector& psi_in, ComplexVector* grad) {
  const ComplexVector psi = psi_in / psi_in.norm();
  const Spectrum s = spectrum(c.apply_pure(psi));
  if (grad) *grad = -2.0 * (c.apply_adjoint_to(log_of(s), psi) + psi);
  return entropy_term(s);
}

double ensemble_holevo(const Channel& c, const ComplexMatrix& v_in, ComplexMatrix* grad) {
  const ComplexMatrix v = v_in / v_in.norm();
  ComplexMatrix avg = ComplexMatrix::Zero(c.dim_out(), c.dim_out());
  for (Eigen::Index k = 0; k < v.cols(); ++k) avg += c.apply_pure(v.col(k));
  const Spectrum s = spectrum(avg);
  ComplexMatrix member_grad;
  const double members = member_entropies(c, v, grad ? &member_grad : nullptr);
  if (grad) {
    const ComplexMatrix log_avg = log_of(s);
    grad->resize(v.rows(), v.cols());
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
      const ComplexVector vk = v.col(k);
      grad->col(k) = -2.0 * (c.apply_adjoint_to(log_avg, vk) + vk) - member_grad.col(k);
    }
  }
  return entropy_term(s) - members;
}

double ensemble_entropy(const Channel& c, const ComplexMatrix& v, ComplexMatrix* grad) {
  return member_entropies(c, v, grad);
}

}  // namespace objectives

double holevo_quantity(const Channel& c, const Ensemble& e) {
  const DensityMatrix avg(e.average());
  return von_neumann_entropy(apply(c, avg)) - average_output_entropy(c, e);
}

double average_output_entropy(const Channel& c, const Ensemble& e) {
  double out = 0.0;
  for (std::size_t k = 0; k < e.states.size(); ++k)
    out += e.probabilities[k] * von_neumann_entropy(apply(c, e.states[k]));
  return out;
}

OptResult max_output_pnorm(const Channel& c, double p, const OptimizerConfig& cfg) {
  if (!(p >= 1.0)) throw Error("schatten_p", "maximal output p-norm requires p >= 1");
  validate(cfg);
  const std::size_t d = c.dim_in();
  OptResult out;
  out.bound = BoundKind::lower;
  if (p < kUnitPThreshold) {
    out.value = 1.0;
    out.bound = BoundKind::exact;
    out.state = ComplexVector::Unit(static_cast<Eigen::Index>(d), 0);
    return out;
  }
  const Problem pb{Manifold::sphere, [&](const ComplexMatrix& x, ComplexMatrix* g) {
                     ComplexVector gv;
                     const double v = objectives::output_trace_power(c, x.col(0), p, g ? &gv : nullptr);
                     if (g) *g = -gv;
                     return -v;
                   }};
  const std::size_t starts = resolved_starts(cfg, d);
  MultiStartResult r = multi_start(pb, starts, cfg, [&](Rng& rng) -> ComplexMatrix {
    return random_unit_vector(d, rng);
  });
  out.state = r.x.col(0) / r.x.norm();
  out.value = schatten_norm(apply(c, DensityMatrix::pure(out.state)).matrix(), p);
  out.starts_used = starts;
  out.converged = std::move(r.converged);
  out.best_start_index = r.best;
  return out;
}

OptResult min_output_entropy(const Channel& c, const OptimizerConfig& cfg) {
  validate(cfg);
  const std::size_t d = c.dim_in();
  const Problem pb{Manifold::sphere, [&](const ComplexMatrix& x, ComplexMatrix* g) {
                     ComplexVector gv;
                     const double v = objectives::output_entropy(c, x.col(0), g ? &gv : nullptr);
                     if (g) *g = gv;
                     return v;
                   }};
  const std::size_t starts = resolved_starts(cfg, d);
  MultiStartResult r = multi_start(pb, starts, cfg, [&](Rng& rng) -> ComplexMatrix {
    return random_unit_vector(d, rng);
  });
  OptResult out;
  out.bound = BoundKind::upper;
  out.state = r.x.col(0) / r.x.norm();
  out.value = von_neumann_entropy(apply(c, DensityMatrix::pure(out.state)));
  out.starts_used = starts;
  out.converged = std::move(r.converged);
  out.best_start_index = r.best;
  return out;
}

OptResult avg_output_entropy(const Channel& c, const DensityMatrix& rho_avg, const OptimizerConfig& cfg) {
  validate(cfg);
  const std::size_t d = c.dim_in();
  if (rho_avg.dim() != d)
    throw Error("dimension", "average state dimension does not match channel input");
  const auto members = static_cast<Eigen::Index>(d * d);
  // rho_avg = B B^dagger; feasible ensembles are V = B Q with Q Q^dagger = I.
  const HermitianEigen e = eigh(rho_avg.matrix());
  const ComplexMatrix b = e.eigenvectors * e.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  const Problem pb{Manifold::co_isometry, [&](const ComplexMatrix& q, ComplexMatrix* g) {
                     ComplexMatrix gv;
                     const double v = objectives::ensemble_entropy(c, b * q, g ? &gv : nullptr);
                     if (g) *g = b.adjoint() * gv;
                     return v;
                   }};
  auto residual = [&](const ComplexMatrix& q) {
    const ComplexMatrix v = b * q;
    return (v * v.adjoint() - rho_avg.matrix()).norm();
  };
  const std::size_t starts = resolved_starts(cfg, d);
  MultiStartResult r = multi_start(
      pb, starts, cfg, [&](Rng& rng) { return ginibre(d, static_cast<std::size_t>(members), rng); },
      [&](const ComplexMatrix& q) { return residual(q) <= 1e-6; });
  OptResult out;
  out.bound = BoundKind::upper;
  out.starts_used = starts;
  out.discarded_starts = r.discarded;
  if (r.x.size() == 0)
    throw Error("optimizer", "all " + std::to_string(starts) +
                                 " starts violated the average-state constraint (residual > 1e-6)");
  Ensemble ens = ensemble_from(b * r.x);
  out.constraint_residual = (ens.average() - rho_avg.matrix()).norm();
  out.value = average_output_entropy(c, ens);
  out.ensemble = std::move(ens);
  out.converged = std::move(r.converged);
  out.best_start_index = r.best;
  return out;
}

OptResult holevo_capacity(const Channel& c, const OptimizerConfig& cfg) {
  validate(cfg);
  const std::size_t d = c.dim_in();
  const std::size_t members = d * d;
  const Problem pb{Manifold::sphere, [&](const ComplexMatrix& v, ComplexMatrix* g) {
                     const double chi = objectives::ensemble_holevo(c, v, g);
                     if (g) *g = -*g;
                     return -chi;
                   }};
  const std::size_t starts = resolved_starts(cfg, d);
  MultiStartResult r = multi_start(pb, starts, cfg, [&](Rng& rng) { return ginibre(d, members, rng); });
  OptResult out;
  out.bound = BoundKind::lower;
  Ensemble ens = ensemble_from(r.x);
  out.value = std::max(0.0, holevo_quantity(c, ens));
  out.ensemble = std::move(ens);
  out.starts_used = starts;
  out.converged = std::move(r.converged);
  out.best_start_index = r.best;
  return out;
}

}  // namespace ebcert
