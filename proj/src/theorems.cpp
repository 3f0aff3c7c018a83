#include "ebcert/theorems.hpp"

#include <algorithm>
#include <cmath>

#include "ebcert/encoding.hpp"
#include "ebcert/random.hpp"

namespace ebcert {

namespace {

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

double entropy_of(const ComplexMatrix& m) { return entropy_of_spectrum(psd_eigenvalues(m)); }

void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error("domain", "p must be a finite real >= 1");
}

void require_state_dims(const DensityMatrix& rho12, std::size_t dim1, std::size_t dim2) {
  if (dim2 == 0 || rho12.dim() != dim1 * dim2)
    throw Error("dimension", "bipartite state of dimension " + std::to_string(rho12.dim()) +
                                 " does not factor as " + std::to_string(dim1) + " x " + std::to_string(dim2));
}

nlohmann::json config_json(const OptimizerConfig& cfg) {
  return {{"starts", cfg.starts},
          {"max_iters", cfg.max_iters},
          {"seed", cfg.seed},
          {"gradient", cfg.gradient == GradientMode::analytic ? "analytic" : "finite_difference"}};
}

DensityMatrix pure_density(const ComplexVector& psi) { return DensityMatrix::pure(psi); }

// Tensor of two ensembles: {p_i q_j, rho_i (x) sigma_j}.
Ensemble product_ensemble(const Ensemble& a, const Ensemble& b) {
  Ensemble e;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    for (std::size_t j = 0; j < b.states.size(); ++j) {
      e.probabilities.push_back(a.probabilities[i] * b.probabilities[j]);
      e.states.emplace_back(tensor(a.states[i].matrix(), b.states[j].matrix()));
    }
  return e;
}

constexpr std::uint64_t kProbeStream = 0x9e3779b97f4a7c15ULL;

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "HOLDS";
    case Verdict::violated: return "VIOLATED";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

InequalityRecord make_record(std::string name, double lhs, double rhs, double tolerance) {
  InequalityRecord r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.gap = rhs - lhs;
  r.tolerance = tolerance;
  r.verdict = r.gap < -tolerance ? Verdict::violated : Verdict::holds;
  return r;
}

InequalityRecord lieb_thirring_check(const ComplexMatrix& a, const ComplexMatrix& b, double p) {
  require_p(p);
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw Error("dimension", "Lieb-Thirring inputs must be square of equal size");
  psd_eigenvalues(a);
  psd_eigenvalues(b);
  const ComplexMatrix a_half = matrix_power_psd(a, 0.5);
  const ComplexMatrix sandwich = a_half * b * a_half;
  const double lhs = trace_power(sandwich, p);
  const double rhs = real_trace_product(matrix_power_psd(a, p), matrix_power_psd(b, p));
  InequalityRecord r = make_record("lieb_thirring", lhs, rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
  r.witness = {{"a", encode_matrix(a)}, {"b", encode_matrix(b)}, {"p", p}};
  return r;
}

InequalityRecord lieb_thirring_general(const ComplexMatrix& c, const ComplexMatrix& b, double p) {
  require_p(p);
  if (b.rows() != b.cols() || c.cols() != b.rows())
    throw Error("dimension", "c must have as many columns as b has rows");
  psd_eigenvalues(b);
  const ComplexMatrix cbc = c * b * c.adjoint();
  const ComplexMatrix gram = c.adjoint() * c;
  const double lhs = trace_power(cbc, p);
  const double rhs = real_trace_product(matrix_power_psd(gram, p), matrix_power_psd(b, p));

  const ComplexMatrix root = matrix_power_psd(gram, 0.5);
  RealVector s1 = psd_eigenvalues(cbc);
  RealVector s2 = psd_eigenvalues(root * b * root);
  const Eigen::Index n = std::max(s1.size(), s2.size());
  std::vector<double> l1(s1.data(), s1.data() + s1.size()), l2(s2.data(), s2.data() + s2.size());
  l1.resize(static_cast<std::size_t>(n), 0.0);
  l2.resize(static_cast<std::size_t>(n), 0.0);
  std::sort(l1.rbegin(), l1.rend());
  std::sort(l2.rbegin(), l2.rend());
  double mismatch = 0.0;
  for (std::size_t i = 0; i < l1.size(); ++i) mismatch = std::max(mismatch, std::abs(l1[i] - l2[i]));

  InequalityRecord r = make_record("lieb_thirring_general", lhs, rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
  r.witness = {{"c", encode_matrix(c)}, {"b", encode_matrix(b)}, {"p", p}};
  r.diagnostics["spectral_mismatch"] = mismatch;
  return r;
}

Lemma2Report lemma2_check(const HolevoEBChannel& phi, const DensityMatrix& rho12, std::size_t dim2, double p) {
  require_p(p);
  require_state_dims(rho12, phi.dim_in(), dim2);
  const Channel ch(phi);
  const std::size_t dout = phi.dim_out();
  const std::size_t terms = phi.size();
  const auto n = static_cast<Eigen::Index>(dout);

  Lemma2Report rep;
  const ComplexMatrix out = apply_local(ch, rho12.matrix(), dim2);
  rep.lhs = trace_power(out, p);
  rep.decomposition = bipartite_decomposition(phi, rho12, dim2);
  const BipartiteDecomposition& d = rep.decomposition;

  const ComplexMatrix gram_p = matrix_power_psd(d.block_gram, p);
  rep.gram_trace = trace_power(d.block_gram, p);
  for (std::size_t k = 0; k < terms; ++k) {
    const auto off = static_cast<Eigen::Index>(k) * n;
    const double block = gram_p.block(off, off, n, n).trace().real();
    const double g = d.conditionals[k] ? trace_power(d.conditionals[k]->matrix(), p) : 0.0;
    rep.per_term.push_back({k, block, g});
    rep.rhs += block * g;
  }

  // F = [(x_k R_k)^(1/2) (x) I], H = diag(I (x) G_k).
  const auto m = static_cast<Eigen::Index>(dout * dim2);
  const ComplexMatrix id2 = identity(dim2);
  const ComplexMatrix id_out = identity(dout);
  ComplexMatrix f = ComplexMatrix::Zero(m, m * static_cast<Eigen::Index>(terms));
  ComplexMatrix h = ComplexMatrix::Zero(f.cols(), f.cols());
  for (std::size_t k = 0; k < terms; ++k) {
    const auto off = static_cast<Eigen::Index>(k) * m;
    f.block(0, off, m, m) = tensor(d.root_blocks[k], id2);
    if (d.conditionals[k]) h.block(off, off, m, m) = tensor(id_out, d.conditionals[k]->matrix());
  }
  rep.lhs_block = trace_power(f * h * f.adjoint(), p);
  rep.rhs_block = real_trace_product(matrix_power_psd(f.adjoint() * f, p), matrix_power_psd(h, p));

  rep.record = make_record("lemma2", rep.lhs, rep.rhs, 1e-9);
  rep.record.witness = {{"channel", encode_channel(ch)}, {"rho12", encode_matrix(rho12.matrix())},
                        {"dim2", dim2}, {"p", p}};
  rep.record.diagnostics = {{"lhs_block", rep.lhs_block},
                            {"rhs_block", rep.rhs_block},
                            {"gram_trace", rep.gram_trace},
                            {"active_terms", d.active_terms.size()}};
  return rep;
}

InequalityRecord theorem1_verify(const HolevoEBChannel& phi, const Channel& omega, double p,
                                 const OptimizerConfig& cfg, std::size_t trials) {
  require_p(p);
  const Channel ch(phi);
  const OptResult r1 = max_output_pnorm(ch, p, cfg);
  const OptResult r2 = max_output_pnorm(omega, p, cfg);
  const Channel prod = tensor_channels(ch, omega);
  const OptResult r12 = max_output_pnorm(prod, p, cfg);

  Rng rng(cfg.seed ^ kProbeStream);
  const std::size_t dim = prod.dim_in();
  double probe_max = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const ComplexVector psi = random_unit_vector(dim, rng);
    probe_max = std::max(probe_max, schatten_norm(prod.apply_pure(psi), p));
  }
  const double estimate = std::max(r12.value, probe_max);
  const double rhs = r1.value * r2.value;

  const ComplexVector product_state = tensor(r1.state, r2.state).col(0);
  const double product_value = schatten_norm(apply(prod, pure_density(product_state)).matrix(), p);

  InequalityRecord r = make_record("theorem1", estimate, rhs, 1e-6);
  r.lhs_bound = BoundKind::lower;
  r.rhs_bound = BoundKind::lower;
  r.witness = {{"phi", encode_channel(ch)}, {"omega", encode_channel(omega)}, {"p", p},
               {"trials", trials}, {"config", config_json(cfg)}};
  r.diagnostics = {{"nu_phi", r1.value},
                   {"nu_omega", r2.value},
                   {"bipartite_optimum", r12.value},
                   {"probe_max", probe_max},
                   {"product_value", product_value},
                   {"product_state_gap", std::abs(product_value - rhs)},
                   {"optimum_vs_product", estimate - product_value}};
  return r;
}

ComplexMatrix apply_second(const Channel& omega, const ComplexMatrix& m12, std::size_t dim1) {
  const std::size_t d2 = omega.dim_in();
  if (m12.rows() != m12.cols() || static_cast<std::size_t>(m12.rows()) != dim1 * d2)
    throw Error("dimension", "operator does not act on dim1 x omega input");
  const ComplexMatrix id1 = identity(dim1);
  const auto n = static_cast<Eigen::Index>(dim1 * omega.dim_out());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  const KrausChannel kraus = to_kraus(omega);
  for (const ComplexMatrix& a : kraus.ops()) {
    const ComplexMatrix op = tensor(id1, a);
    out += op * m12 * op.adjoint();
  }
  return out;
}

InequalityRecord superadditivity_check(const HolevoEBChannel& phi, const DensityMatrix& rho12, std::size_t dim2) {
  require_state_dims(rho12, phi.dim_in(), dim2);
  const Channel ch(phi);
  const BipartiteDecomposition d = bipartite_decomposition(phi, rho12, dim2);
  const double rhs = entropy_of(apply_local(ch, rho12.matrix(), dim2));
  const ComplexMatrix rho1 = partial_trace(rho12.matrix(), phi.dim_in(), dim2, Subsystem::first);
  const double marginal = entropy_of(ch.apply_operator(rho1));
  double conditional = 0.0;
  for (std::size_t k : d.active_terms) conditional += d.weights[k] * von_neumann_entropy(*d.conditionals[k]);

  InequalityRecord r = make_record("superadditivity", marginal + conditional, rhs, 1e-8);
  r.witness = {{"channel", encode_channel(ch)}, {"rho12", encode_matrix(rho12.matrix())}, {"dim2", dim2}};
  r.diagnostics = {{"output_entropy", rhs}, {"marginal_entropy", marginal}, {"conditional_sum", conditional}};
  return r;
}

InequalityRecord subadditivity_check(const HolevoEBChannel& phi, const Channel& omega, const DensityMatrix& tau12) {
  const std::size_t d1 = phi.dim_in();
  const std::size_t d2 = omega.dim_in();
  require_state_dims(tau12, d1, d2);
  const Channel ch(phi);
  const ComplexMatrix out = apply_second(omega, apply_local(ch, tau12.matrix(), d2), phi.dim_out());
  const double lhs = entropy_of(out);
  const double s1 = entropy_of(ch.apply_operator(partial_trace(tau12.matrix(), d1, d2, Subsystem::first)));
  const double s2 = entropy_of(omega.apply_operator(partial_trace(tau12.matrix(), d1, d2, Subsystem::second)));
  InequalityRecord r = make_record("subadditivity", lhs, s1 + s2, 1e-8);
  r.witness = {{"phi", encode_channel(ch)}, {"omega", encode_channel(omega)},
               {"tau12", encode_matrix(tau12.matrix())}};
  r.diagnostics = {{"entropy_first", s1}, {"entropy_second", s2}};
  return r;
}

InequalityRecord smin_additivity_check(const HolevoEBChannel& phi, const Channel& omega, const OptimizerConfig& cfg) {
  const Channel ch(phi);
  const OptResult r1 = min_output_entropy(ch, cfg);
  const OptResult r2 = min_output_entropy(omega, cfg);
  const Channel prod = tensor_channels(ch, omega);
  const OptResult r12 = min_output_entropy(prod, cfg);
  const ComplexVector product_state = tensor(r1.state, r2.state).col(0);
  const double product_value = von_neumann_entropy(apply(prod, pure_density(product_state)));
  const double s12 = std::min(r12.value, product_value);
  const double sum = r1.value + r2.value;

  InequalityRecord r = make_record("smin_additivity", sum, s12, 1e-3);
  r.lhs_bound = BoundKind::upper;
  r.rhs_bound = BoundKind::upper;
  r.witness = {{"phi", encode_channel(ch)}, {"omega", encode_channel(omega)}, {"config", config_json(cfg)}};
  r.diagnostics = {{"s_phi", r1.value},
                   {"s_omega", r2.value},
                   {"s_product_search", r12.value},
                   {"s_product_state", product_value},
                   {"additivity_defect", std::abs(s12 - sum)}};
  return r;
}

CapacityAdditivityReport capacity_additivity_check(const HolevoEBChannel& phi, const Channel& omega,
                                                   const OptimizerConfig& cfg, std::size_t trials) {
  const Channel ch(phi);
  const OptResult r1 = holevo_capacity(ch, cfg);
  const OptResult r2 = holevo_capacity(omega, cfg);
  const Channel prod = tensor_channels(ch, omega);
  const OptResult r12 = holevo_capacity(prod, cfg);
  const Ensemble product = product_ensemble(*r1.ensemble, *r2.ensemble);
  const double product_value = holevo_quantity(prod, product);
  const bool search_better = r12.value > product_value;
  const double c12 = search_better ? r12.value : product_value;
  const double sum = r1.value + r2.value;

  CapacityAdditivityReport rep;
  rep.additivity = make_record("chi_additivity", c12, sum, 1e-2);
  rep.additivity.lhs_bound = BoundKind::lower;
  rep.additivity.rhs_bound = BoundKind::lower;
  rep.additivity.witness = {{"phi", encode_channel(ch)}, {"omega", encode_channel(omega)},
                            {"config", config_json(cfg)}, {"trials", trials}};
  rep.additivity.diagnostics = {{"chi_phi", r1.value},
                                {"chi_omega", r2.value},
                                {"chi_product_search", r12.value},
                                {"chi_product_ensemble", product_value},
                                {"product_lower_gap", c12 - sum}};

  const Ensemble& best = search_better ? *r12.ensemble : product;
  std::vector<DensityMatrix> states;
  states.emplace_back(best.average());
  for (std::size_t i = 0; i < best.states.size(); ++i)
    if (best.probabilities[i] > kInactiveWeight) states.push_back(best.states[i]);
  Rng rng(cfg.seed ^ kProbeStream);
  const std::size_t dim = prod.dim_in();
  for (std::size_t t = 0; t < trials; ++t)
    states.push_back(random_density_matrix(dim, 1 + uniform_index(dim, rng), rng));
  for (const DensityMatrix& tau : states) rep.subadditivity.push_back(subadditivity_check(phi, omega, tau));
  return rep;
}

InequalityRecord lemma3_check(const HolevoEBChannel& phi, const Channel& omega, const DensityMatrix& tau12,
                              const OptimizerConfig& cfg) {
  const std::size_t d1 = phi.dim_in();
  const std::size_t d2 = omega.dim_in();
  require_state_dims(tau12, d1, d2);
  const Channel ch(phi);
  const Channel prod = tensor_channels(ch, omega);
  const nlohmann::json witness = {{"phi", encode_channel(ch)}, {"omega", encode_channel(omega)},
                                  {"tau12", encode_matrix(tau12.matrix())}, {"config", config_json(cfg)}};

  OptResult joint;
  try {
    joint = avg_output_entropy(prod, tau12, cfg);
  } catch (const Error& e) {
    InequalityRecord r = make_record("lemma3", 0.0, 0.0, 1e-6);
    r.verdict = Verdict::inconclusive;
    r.witness = witness;
    r.diagnostics["optimizer_error"] = e.what();
    return r;
  }

  // Split every member of the joint ensemble through the measurement of phi.
  const Ensemble& ens = *joint.ensemble;
  double t1 = 0.0, t2 = 0.0, min_member_gap = 0.0;
  ComplexMatrix avg1 = ComplexMatrix::Zero(d1, d1);
  ComplexMatrix avg2 = ComplexMatrix::Zero(d2, d2);
  for (std::size_t j = 0; j < ens.states.size(); ++j) {
    const double pj = ens.probabilities[j];
    if (pj <= 0.0) continue;
    const DensityMatrix& member = ens.states[j];
    const BipartiteDecomposition dec = bipartite_decomposition(phi, member, d2);
    const ComplexMatrix m1 = partial_trace(member.matrix(), d1, d2, Subsystem::first);
    const double s_phi = entropy_of(ch.apply_operator(m1));
    double s_omega = 0.0;
    for (std::size_t k : dec.active_terms) {
      const ComplexMatrix& g = dec.conditionals[k]->matrix();
      s_omega += dec.weights[k] * entropy_of(omega.apply_operator(g));
      avg2 += pj * dec.weights[k] * g;
    }
    avg1 += pj * m1;
    t1 += pj * s_phi;
    t2 += pj * s_omega;
    const double member_entropy = entropy_of(prod.apply_operator(member.matrix()));
    const double gap = member_entropy - s_phi - s_omega;
    min_member_gap = j == 0 ? gap : std::min(min_member_gap, gap);
  }
  const double res1 = (avg1 - partial_trace(tau12.matrix(), d1, d2, Subsystem::first)).norm();
  const double res2 = (avg2 - partial_trace(tau12.matrix(), d1, d2, Subsystem::second)).norm();

  InequalityRecord r = make_record("lemma3", t1 + t2, joint.value, 1e-6);
  r.lhs_bound = BoundKind::exact;
  r.rhs_bound = BoundKind::upper;
  r.witness = witness;
  r.diagnostics = {{"joint_estimate", joint.value},
                   {"first_term", t1},
                   {"second_term", t2},
                   {"first_residual", res1},
                   {"second_residual", res2},
                   {"joint_residual", joint.constraint_residual},
                   {"min_member_gap", min_member_gap}};
  if (r.verdict == Verdict::holds && (res1 > 1e-6 || res2 > 1e-6)) r.verdict = Verdict::inconclusive;

  // Direct one-sided estimates of the two marginal minima, for reference only.
  try {
    const DensityMatrix tau1(partial_trace(tau12.matrix(), d1, d2, Subsystem::first));
    const DensityMatrix tau2(partial_trace(tau12.matrix(), d1, d2, Subsystem::second));
    r.diagnostics["first_estimate"] = avg_output_entropy(ch, tau1, cfg).value;
    r.diagnostics["second_estimate"] = avg_output_entropy(omega, tau2, cfg).value;
  } catch (const Error& e) {
    r.diagnostics["marginal_error"] = e.what();
  }
  return r;
}

}  // namespace ebcert
