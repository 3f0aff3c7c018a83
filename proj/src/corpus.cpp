#include "ebcert/corpus.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ebcert/channels.hpp"
#include "ebcert/random.hpp"

namespace ebcert {

namespace {

constexpr std::array<double, 5> kLtPowers = {1.0, 1.5, 2.0, 3.0, 5.0};
constexpr std::array<double, 4> kLemma2Powers = {1.0, 1.5, 2.0, 3.0};
constexpr std::array<double, 3> kTheorem1Powers = {1.5, 2.0, 3.0};

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

template <std::size_t N>
double pick(const std::array<double, N>& values, Rng& rng) {
  return values[uniform_index(N, rng)];
}

std::size_t pick_between(std::size_t lo, std::size_t hi, Rng& rng) { return lo + uniform_index(hi - lo + 1, rng); }

std::string dims_string(std::initializer_list<std::size_t> dims) {
  std::string s;
  for (std::size_t d : dims) s += (s.empty() ? "" : "x") + std::to_string(d);
  return s;
}

nlohmann::json config_to_json(const OptimizerConfig& cfg) {
  return {{"starts", cfg.starts},
          {"max_iters", cfg.max_iters},
          {"step_tol", cfg.step_tol},
          {"value_tol", cfg.value_tol},
          {"gradient", cfg.gradient == GradientMode::analytic ? "analytic" : "finite_difference"},
          {"fd_step", cfg.fd_step}};
}

OptimizerConfig config_from_json(const nlohmann::json& j) {
  OptimizerConfig cfg;
  cfg.starts = j.at("starts").get<std::size_t>();
  cfg.max_iters = j.at("max_iters").get<std::size_t>();
  cfg.step_tol = j.at("step_tol").get<double>();
  cfg.value_tol = j.at("value_tol").get<double>();
  cfg.gradient = j.at("gradient").get<std::string>() == "analytic" ? GradientMode::analytic
                                                                      : GradientMode::finite_difference;
  cfg.fd_step = j.at("fd_step").get<double>();
  return cfg;
}

// PSD matrix of the given trace with a random rank.
ComplexMatrix random_scaled_psd(std::size_t dim, Rng& rng) {
  const ComplexMatrix a = random_psd(dim, pick_between(1, dim, rng), rng);
  const double target = 0.5 + 1.5 * uniform01(rng);
  return a * (target / a.trace().real());
}

// Bipartite state on dim1 x dim2 from the family named by `kind`.
DensityMatrix bipartite_state(const std::string& kind, std::size_t dim1, std::size_t dim2, Rng& rng) {
  if (kind == "product")
    return DensityMatrix(tensor(random_density_matrix(dim1, pick_between(1, dim1, rng), rng).matrix(),
                                random_density_matrix(dim2, pick_between(1, dim2, rng), rng).matrix()));
  if (kind == "entangled") return random_pure_state(dim1 * dim2, rng);
  return random_density_matrix(dim1 * dim2, pick_between(2, dim1 * dim2, rng), rng);
}

struct Pair {
  HolevoEBChannel phi;
  KrausChannel omega;
};

Pair random_pair(std::size_t dim_phi, std::size_t dim_omega, Rng& rng) {
  const std::size_t terms = pick_between(1, 4, rng);
  const std::uint64_t s1 = rng();
  const std::size_t rank = pick_between(1, 4, rng);
  const std::uint64_t s2 = rng();
  return {random_eb_channel(dim_phi, terms, s1), random_channel(dim_omega, dim_omega, rank, s2)};
}

ReportRow run_lt(Rng& rng, const CorpusOptions& opts) {
  const std::size_t d = opts.dims ? opts.dims->first : pick_between(1, 6, rng);
  const double p = opts.p ? *opts.p : pick(kLtPowers, rng);
  ReportRow row;
  row.kind = uniform01(rng) < 0.2 ? "commuting" : "generic";
  ComplexMatrix a, b;
  if (row.kind == "commuting") {
    const ComplexMatrix u = random_channel(d, d, 1, rng()).ops()[0];
    RealVector da(d), db(d);
    for (std::size_t i = 0; i < d; ++i) {
      da(static_cast<Eigen::Index>(i)) = uniform01(rng);
      db(static_cast<Eigen::Index>(i)) = uniform01(rng);
    }
    const double ta = (0.5 + 1.5 * uniform01(rng)) / std::max(da.sum(), 1e-300);
    const double tb = (0.5 + 1.5 * uniform01(rng)) / std::max(db.sum(), 1e-300);
    a = u * (da * ta).cast<Complex>().asDiagonal() * u.adjoint();
    b = u * (db * tb).cast<Complex>().asDiagonal() * u.adjoint();
    a = (a + a.adjoint()) / 2.0;
    b = (b + b.adjoint()) / 2.0;
  } else {
    a = random_scaled_psd(d, rng);
    b = random_scaled_psd(d, rng);
  }
  row.dims = dims_string({d});
  row.p = p;
  row.record = lieb_thirring_check(a, b, p);
  return row;
}

std::string lemma2_kind(Rng& rng) {
  const double u = uniform01(rng);
  return u < 0.15 ? "product" : (u < 0.6 ? "entangled" : "mixed");
}

ReportRow run_lemma2(Rng& rng, const CorpusOptions& opts) {
  const std::size_t din = opts.dims ? opts.dims->first : pick_between(2, 3, rng);
  const std::size_t dout = opts.dims ? opts.dims->first : pick_between(2, 3, rng);
  const std::size_t d2 = opts.dims ? opts.dims->second : pick_between(2, 3, rng);
  const std::size_t terms = pick_between(1, 4, rng);
  const double p = opts.p ? *opts.p : pick(kLemma2Powers, rng);
  ReportRow row;
  row.kind = lemma2_kind(rng);
  const HolevoEBChannel phi = random_eb_channel(din, dout, terms, rng());
  const DensityMatrix rho12 = bipartite_state(row.kind, din, d2, rng);
  const Lemma2Report rep = lemma2_check(phi, rho12, d2, p);
  row.dims = dims_string({din, dout, d2});
  row.p = p;
  row.record = rep.record;
  return row;
}

ReportRow run_superadd(Rng& rng, const CorpusOptions& opts) {
  const std::size_t din = opts.dims ? opts.dims->first : pick_between(2, 3, rng);
  const std::size_t dout = opts.dims ? opts.dims->first : pick_between(2, 3, rng);
  const std::size_t d2 = opts.dims ? opts.dims->second : pick_between(2, 3, rng);
  ReportRow row;
  const double u = uniform01(rng);
  const bool replace = u < 0.15;
  row.kind = replace ? "replace" : lemma2_kind(rng);
  const HolevoEBChannel phi = replace ? HolevoEBChannel::replace(random_density_matrix(dout, rng), din)
                                      : random_eb_channel(din, dout, pick_between(1, 4, rng), rng());
  const DensityMatrix rho12 = bipartite_state(replace ? "mixed" : row.kind, din, d2, rng);
  row.dims = dims_string({din, dout, d2});
  row.record = superadditivity_check(phi, rho12, d2);
  return row;
}

ReportRow run_pair_suite(Suite suite, std::uint64_t instance_seed, Rng& rng, const CorpusOptions& opts) {
  const std::size_t d1 = opts.dims ? opts.dims->first : 2;
  const std::size_t d2 = opts.dims ? opts.dims->second : 2;
  Pair pair = random_pair(d1, d2, rng);
  OptimizerConfig cfg = opts.cfg;
  cfg.seed = instance_seed;
  ReportRow row;
  row.dims = dims_string({d1, d2});
  row.kind = "random";
  switch (suite) {
    case Suite::theorem1: {
      const double p = opts.p ? *opts.p : pick(kTheorem1Powers, rng);
      row.p = p;
      row.record = theorem1_verify(pair.phi, pair.omega, p, cfg, opts.probes);
      break;
    }
    case Suite::smin_add:
      row.record = smin_additivity_check(pair.phi, pair.omega, cfg);
      break;
    case Suite::chi_add: {
      CapacityAdditivityReport rep = capacity_additivity_check(pair.phi, pair.omega, cfg);
      row.record = rep.additivity;
      double min_gap = 0.0;
      std::size_t violated = 0;
      for (std::size_t i = 0; i < rep.subadditivity.size(); ++i) {
        const InequalityRecord& s = rep.subadditivity[i];
        min_gap = i == 0 ? s.gap : std::min(min_gap, s.gap);
        if (s.verdict == Verdict::violated) ++violated;
      }
      row.record.diagnostics["subadditivity_checks"] = rep.subadditivity.size();
      row.record.diagnostics["subadditivity_min_gap"] = min_gap;
      row.record.diagnostics["subadditivity_violations"] = violated;
      if (violated > 0) row.record.verdict = Verdict::violated;
      break;
    }
    case Suite::lemma3: {
      const std::size_t dim = d1 * d2;
      const DensityMatrix tau12 = random_density_matrix(dim, pick_between(1, dim, rng), rng);
      row.record = lemma3_check(pair.phi, pair.omega, tau12, cfg);
      break;
    }
    default:
      throw Error("internal", "not a channel-pair suite");
  }
  return row;
}

}  // namespace

const char* to_string(Suite s) {
  switch (s) {
    case Suite::theorem1: return "theorem1";
    case Suite::lemma2: return "lemma2";
    case Suite::lemma3: return "lemma3";
    case Suite::lt: return "lt";
    case Suite::superadd: return "superadd";
    case Suite::smin_add: return "smin-add";
    case Suite::chi_add: return "chi-add";
  }
  return "?";
}

std::optional<Suite> parse_suite(const std::string& name) {
  for (Suite s : all_suites())
    if (name == to_string(s)) return s;
  return std::nullopt;
}

std::vector<Suite> all_suites() {
  return {Suite::lt, Suite::lemma2, Suite::superadd, Suite::theorem1, Suite::smin_add, Suite::chi_add, Suite::lemma3};
}

ReportRow run_instance(Suite suite, std::uint64_t instance_seed, const CorpusOptions& opts) {
  Rng rng(instance_seed);
  ReportRow row;
  switch (suite) {
    case Suite::lt: row = run_lt(rng, opts); break;
    case Suite::lemma2: row = run_lemma2(rng, opts); break;
    case Suite::superadd: row = run_superadd(rng, opts); break;
    default: row = run_pair_suite(suite, instance_seed, rng, opts); break;
  }
  row.check_name = to_string(suite);
  row.seed = instance_seed;
  nlohmann::json w = {{"suite", to_string(suite)},
                      {"seed", instance_seed},
                      {"probes", opts.probes},
                      {"config", config_to_json(opts.cfg)},
                      {"kind", row.kind},
                      {"inputs", std::move(row.record.witness)}};
  if (opts.p) w["p"] = *opts.p;
  if (opts.dims) w["dims"] = {opts.dims->first, opts.dims->second};
  row.record.witness = std::move(w);
  return row;
}

std::vector<ReportRow> run_suite(Suite suite, const CorpusOptions& opts, bool timing) {
  std::vector<ReportRow> rows;
  rows.reserve(opts.trials);
  for (std::size_t i = 0; i < opts.trials; ++i) {
    const auto start = std::chrono::steady_clock::now();
    ReportRow row = run_instance(suite, opts.seed + i, opts);
    if (timing)
      row.wall_time_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

ReportRow replay(const nlohmann::json& witness) {
  const auto suite = parse_suite(witness.at("suite").get<std::string>());
  if (!suite) throw Error("schema", "witness names an unknown suite");
  CorpusOptions opts;
  opts.probes = witness.at("probes").get<std::size_t>();
  opts.cfg = config_from_json(witness.at("config"));
  if (witness.contains("p")) opts.p = witness["p"].get<double>();
  if (witness.contains("dims")) opts.dims = {witness["dims"][0].get<std::size_t>(), witness["dims"][1].get<std::size_t>()};
  return run_instance(*suite, witness.at("seed").get<std::uint64_t>(), opts);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "check_name,seed,dims,p,lhs,rhs,gap,verdict,wall_time_ms\n";
  for (const ReportRow& r : rows) {
    out << r.check_name << ',' << r.seed << ',' << r.dims << ',' << (r.p ? format_double(*r.p) : "NA") << ','
        << format_double(r.record.lhs) << ',' << format_double(r.record.rhs) << ',' << format_double(r.record.gap)
        << ',' << to_string(r.record.verdict) << ',' << (r.wall_time_ms ? format_double(*r.wall_time_ms) : "NA")
        << '\n';
  }
  return out.str();
}

nlohmann::json report_json(const std::vector<ReportRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const ReportRow& r : rows) {
    nlohmann::json j = {{"check_name", r.check_name},
                        {"seed", r.seed},
                        {"dims", r.dims},
                        {"p", r.p ? nlohmann::json(*r.p) : nlohmann::json(nullptr)},
                        {"kind", r.kind},
                        {"name", r.record.name},
                        {"lhs", r.record.lhs},
                        {"rhs", r.record.rhs},
                        {"gap", r.record.gap},
                        {"tolerance", r.record.tolerance},
                        {"lhs_bound", to_string(r.record.lhs_bound)},
                        {"rhs_bound", to_string(r.record.rhs_bound)},
                        {"verdict", to_string(r.record.verdict)},
                        {"wall_time_ms", r.wall_time_ms ? nlohmann::json(*r.wall_time_ms) : nlohmann::json(nullptr)},
                        {"witness", r.record.witness},
                        {"diagnostics", r.record.diagnostics}};
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace ebcert
