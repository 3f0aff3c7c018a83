// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "ebcert/corpus.hpp"
#include "ebcert/encoding.hpp"
#include "ebcert/random.hpp"
#include "ebcert/spec_io.hpp"
#include "oracles.hpp"

using namespace ebcert;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::size_t count_verdict(const std::vector<ReportRow>& rows, Verdict v) {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [v](const ReportRow& r) { return r.record.verdict == v; }));
}

Outcome lieb_thirring_suite() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  CorpusOptions opts;
  opts.seed = 1;
  opts.trials = 1000;
  const std::vector<ReportRow> rows = run_suite(Suite::lt, opts);
  const double elapsed = seconds_since(start);
  double worst_equality = 0.0;
  std::size_t equality_cases = 0;
  for (const ReportRow& r : rows)
    if (r.kind == "commuting" || *r.p == 1.0) {
      worst_equality = std::max(worst_equality, std::abs(r.record.gap));
      ++equality_cases;
    }
  const std::size_t violated = count_verdict(rows, Verdict::violated);
  o.require(rows.size() == 1000, "row count");
  o.require(violated == 0, std::to_string(violated) + " VIOLATED");
  o.require(worst_equality <= 1e-10, "equality subset |gap| " + fmt(worst_equality));
  o.require(elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
  o.detail = o.pass ? "1000 instances, 0 VIOLATED, " + std::to_string(equality_cases) +
                          " commuting/p=1 cases with max |gap| " + fmt(worst_equality) + ", " + fmt(elapsed) + " s"
                    : o.detail;
  return o;
}

Outcome lemma2_suite() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  CorpusOptions opts;
  opts.seed = 1;
  opts.trials = 300;
  const std::vector<ReportRow> rows = run_suite(Suite::lemma2, opts);
  const double elapsed = seconds_since(start);
  double worst_equality = 0.0, worst_paths = 0.0, worst_lhs_paths = 0.0;
  for (const ReportRow& r : rows) {
    if (r.kind == "product" || *r.p == 1.0) worst_equality = std::max(worst_equality, std::abs(r.record.gap));
    worst_paths = std::max(worst_paths, std::abs(r.record.diagnostics["rhs_block"].get<double>() - r.record.rhs));
    worst_lhs_paths =
        std::max(worst_lhs_paths, std::abs(r.record.diagnostics["lhs_block"].get<double>() - r.record.lhs));
  }
  const std::size_t violated = count_verdict(rows, Verdict::violated);
  o.require(violated == 0, std::to_string(violated) + " VIOLATED");
  o.require(worst_equality <= 1e-9, "equality subset |gap| " + fmt(worst_equality));
  o.require(worst_paths <= 1e-9, "Gram vs block-construction rhs " + fmt(worst_paths));
  o.require(worst_lhs_paths <= 1e-9, "block-construction lhs " + fmt(worst_lhs_paths));
  o.require(elapsed < 120.0, "runtime " + fmt(elapsed) + " s");
  if (o.pass)
    o.detail = "300 instances, 0 VIOLATED, equality |gap| " + fmt(worst_equality) + ", rhs path agreement " +
               fmt(worst_paths) + ", " + fmt(elapsed) + " s";
  return o;
}

Outcome theorem1_suite() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  CorpusOptions opts;
  opts.seed = 1;
  opts.trials = 50;
  opts.probes = 2000;
  opts.cfg.starts = 256;
  const std::vector<ReportRow> rows = run_suite(Suite::theorem1, opts);
  const double elapsed = seconds_since(start);
  double worst_excess = -1.0, worst_product = 0.0;
  for (const ReportRow& r : rows) {
    worst_excess = std::max(worst_excess, r.record.lhs - r.record.rhs);
    worst_product = std::max(worst_product, std::abs(r.record.diagnostics["bipartite_optimum"].get<double>() -
                                                     r.record.diagnostics["product_value"].get<double>()));
  }
  o.require(rows.size() == 50, "row count");
  o.require(worst_excess <= 1e-6, "bipartite estimate exceeds product by " + fmt(worst_excess));
  o.require(worst_product <= 1e-4, "product state vs bipartite optimum " + fmt(worst_product));
  o.require(elapsed < 900.0, "runtime " + fmt(elapsed) + " s");
  if (o.pass)
    o.detail = "50 pairs, max(estimate - product bound) " + fmt(worst_excess) + ", product-state match " +
               fmt(worst_product) + ", " + fmt(elapsed) + " s";
  return o;
}

Outcome superadditivity_suite() {
  Outcome o;
  CorpusOptions opts;
  opts.seed = 1;
  opts.trials = 300;
  const std::vector<ReportRow> rows = run_suite(Suite::superadd, opts);
  double worst_equality = 0.0, min_gap = 1.0;
  std::size_t equality_cases = 0;
  for (const ReportRow& r : rows) {
    min_gap = std::min(min_gap, r.record.gap);
    if (r.kind == "replace" || r.kind == "product") {
      worst_equality = std::max(worst_equality, std::abs(r.record.gap));
      ++equality_cases;
    }
  }
  o.require(count_verdict(rows, Verdict::violated) == 0 && min_gap >= -1e-8, "min gap " + fmt(min_gap));
  o.require(equality_cases > 0 && worst_equality <= 1e-9, "equality subset |gap| " + fmt(worst_equality));
  if (o.pass)
    o.detail = "300 instances, min gap " + fmt(min_gap) + ", " + std::to_string(equality_cases) +
               " replace/product cases with max |gap| " + fmt(worst_equality);
  return o;
}

Outcome additivity_suites() {
  Outcome o;
  CorpusOptions opts;
  opts.seed = 1;
  opts.trials = 20;
  const std::vector<ReportRow> smin = run_suite(Suite::smin_add, opts);
  double worst_smin = 0.0;
  for (const ReportRow& r : smin) worst_smin = std::max(worst_smin, std::abs(r.record.gap));
  o.require(worst_smin <= 1e-3, "S_min additivity defect " + fmt(worst_smin));

  const std::vector<ReportRow> chi = run_suite(Suite::chi_add, opts);
  double worst_chi = 0.0;
  for (const ReportRow& r : chi) worst_chi = std::max(worst_chi, r.record.lhs - r.record.rhs);
  o.require(count_verdict(chi, Verdict::violated) == 0 && worst_chi <= 1e-2, "chi additivity excess " + fmt(worst_chi));

  OptimizerConfig cfg;
  const double ln2 = std::log(2.0);
  const double chi_deph = holevo_capacity(HolevoEBChannel::dephasing(2), cfg).value;
  o.require(std::abs(chi_deph - ln2) <= 1e-4, "dephasing capacity " + fmt(chi_deph));
  for (std::size_t d : {2, 3, 4}) {
    const Channel rep = HolevoEBChannel::replace(DensityMatrix::maximally_mixed(d), d);
    const double s = min_output_entropy(rep, cfg).value;
    o.require(std::abs(s - std::log(double(d))) <= 1e-9, "replace S_min at d=" + std::to_string(d));
  }
  Rng rng(5);
  const double chi_rep = holevo_capacity(HolevoEBChannel::replace(random_density_matrix(2, rng), 2), cfg).value;
  o.require(std::abs(chi_rep) <= 1e-6, "replace capacity " + fmt(chi_rep));
  const Channel half = HolevoEBChannel::replace(DensityMatrix::maximally_mixed(2), 2);
  for (double p : {1.0, 2.0, 3.0}) {
    const double nu = max_output_pnorm(half, p, cfg).value;
    o.require(std::abs(nu - std::pow(2.0, 1.0 / p - 1.0)) <= 1e-9, "replace norm at p=" + fmt(p));
  }
  if (o.pass)
    o.detail = "20 pairs: max S_min defect " + fmt(worst_smin) + ", max chi excess " + fmt(worst_chi) +
               "; closed-form anchors reproduced";
  return o;
}

Outcome optimizer_vs_grid() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Channel c = seed % 2 ? Channel(random_eb_channel(2, 2 + seed % 2, 1 + seed % 4, seed))
                               : Channel(random_channel(2, 2, 1 + seed % 3, seed));
    OptimizerConfig cfg;
    cfg.seed = seed;
    const double diff = std::abs(max_output_pnorm(c, 2.0, cfg).value - oracle::bloch_grid_max_2norm(c));
    worst = std::max(worst, diff);
  }
  o.require(worst <= 1e-4, "max deviation " + fmt(worst));
  if (o.pass) o.detail = "10 qubit channels, max |optimizer - grid| " + fmt(worst);
  return o;
}

Outcome eb_detection() {
  Outcome o;
  Rng rng(7);
  std::size_t agree = 0;
  auto consistent = [&](const Channel& c) {
    const ChoiMatrix choi = to_choi(c);
    const double oracle_min =
        oracle::eigenvalues(oracle::partial_transpose_second(choi.matrix().matrix(), c.dim_out(), c.dim_in())).front();
    const EBClass k = is_entanglement_breaking(c);
    const bool ok = (oracle_min < -tolerances().psd) == (k == EBClass::not_eb);
    agree += ok;
    return std::make_pair(k, ok);
  };
  for (int i = 0; i < 100; ++i) {
    const std::size_t din = 2 + uniform_index(2, rng);
    const HolevoEBChannel phi = random_eb_channel(din, 2 + uniform_index(2, rng), 1 + uniform_index(4, rng), rng());
    const auto [k, ok] = consistent(phi);
    o.require(k == EBClass::eb && ok, "Holevo-form channel " + std::to_string(i));
  }
  o.require(consistent(KrausChannel::identity(2)).first == EBClass::not_eb, "identity");
  o.require(consistent(KrausChannel::depolarizing(2, 0.8)).first == EBClass::not_eb, "depolarizing 0.8");
  for (double lambda : {0.0, 0.2, 1.0 / 3.0 - 1e-6, 0.34, 0.5, 1.0}) {
    const auto [k, ok] = consistent(KrausChannel::depolarizing(2, lambda));
    o.require(ok, "depolarizing sign agreement at " + fmt(lambda));
    (void)k;
  }
  if (o.pass) o.detail = "100 Holevo-form channels EB; identity and depolarizing(0.8) NOT_EB; " +
                         std::to_string(agree) + " classifications agree with the eigenvalue oracle";
  return o;
}

int run_cli(const std::string& args, std::string* err) {
  const fs::path err_file = fs::temp_directory_path() / ("ebcert_acc_err_" + std::to_string(::getpid()));
  const std::string cmd = std::string(EBCERT_CLI) + " " + args + " > /dev/null 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(err_file);
  std::stringstream s;
  s << in.rdbuf();
  *err = s.str();
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism_and_cli() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("ebcert_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string err;
  for (const std::string suite : {"lt", "lemma2", "superadd", "theorem1", "smin-add"}) {
    const std::string a = (dir / (suite + "_a.csv")).string(), b = (dir / (suite + "_b.csv")).string();
    const std::string flags = "verify " + suite + " --trials 5 --seed 3 --starts 8 --json --report ";
    const int ca = run_cli(flags + a, &err), cb = run_cli(flags + b, &err);
    o.require(ca == 0 && cb == 0, suite + " exit codes");
    o.require(slurp(a) == slurp(b) && !slurp(a).empty(), suite + " CSV reports differ");
    o.require(slurp(dir / (suite + "_a.json")) == slurp(dir / (suite + "_b.json")), suite + " JSON reports differ");
  }

  // Every witness replays to the recorded values.
  CorpusOptions opts;
  opts.cfg.starts = 8;
  opts.trials = 3;
  opts.probes = 100;
  for (Suite s : all_suites())
    for (const ReportRow& row : run_suite(s, opts)) {
      const ReportRow again = replay(row.record.witness);
      o.require(again.record.lhs == row.record.lhs && again.record.rhs == row.record.rhs,
                std::string("replay of ") + to_string(s));
    }

  const nlohmann::json base = encode_channel(HolevoEBChannel::dephasing(2));
  nlohmann::json non_psd = base, incomplete = base, bad_trace = base, malformed = base;
  non_psd["pairs"][0]["X"] = nlohmann::json::parse("[[[1.5,0],[0,0]],[[0,0],[0,0]]]");
  non_psd["pairs"][1]["X"] = nlohmann::json::parse("[[[-0.5,0],[0,0]],[[0,0],[1,0]]]");
  incomplete["pairs"][1]["X"] = nlohmann::json::parse("[[[0,0],[0,0]],[[0,0],[0.5,0]]]");
  bad_trace["pairs"][0]["R"] = nlohmann::json::parse("[[[0.8,0],[0,0]],[[0,0],[0,0]]]");
  malformed["pairs"][0]["R"] = "not a matrix";
  const std::pair<nlohmann::json, std::string> cases[] = {
      {non_psd, "psd"}, {incomplete, "povm_completeness"}, {bad_trace, "unit_trace"}, {malformed, "schema"}};
  for (const auto& [spec, invariant] : cases) {
    const std::string file = (dir / "corrupt.json").string();
    write_json_file(file, spec);
    const int code = run_cli("norm " + file + " --p 2", &err);
    o.require(code == 2, invariant + " exit code " + std::to_string(code));
    o.require(err.find(invariant) != std::string::npos, invariant + " not named: " + err);
  }
  fs::remove_all(dir);
  if (o.pass)
    o.detail = "byte-identical CSV/JSON reports for 5 suites, all witnesses replay, 4 corrupted specs exit 2 "
               "naming the invariant";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Lieb-Thirring suite", lieb_thirring_suite},
      {"Block-matrix bound suite", lemma2_suite},
      {"Multiplicativity suite", theorem1_suite},
      {"Entropy superadditivity suite", superadditivity_suite},
      {"Additivity suites and closed-form anchors", additivity_suites},
      {"Optimizer vs Bloch-grid oracle", optimizer_vs_grid},
      {"Entanglement-breaking detection", eb_detection},
      {"Determinism and CLI contract", determinism_and_cli},
  };
  int failures = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
