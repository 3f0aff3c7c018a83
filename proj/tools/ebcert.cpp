// ebcert: channel computations and seeded verification corpora.
//
// Exit codes: 0 success, 1 a VIOLATED record was produced, 2 usage or
// validation error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "ebcert/channels.hpp"
#include "ebcert/corpus.hpp"
#include "ebcert/encoding.hpp"
#include "ebcert/optimize.hpp"
#include "ebcert/spec_io.hpp"

namespace {

using namespace ebcert;

struct Globals {
  std::uint64_t seed = 0;
  std::size_t starts = 0;
  std::optional<double> tol;
  bool json = false;
  bool timing = false;
  std::string report;
};

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

nlohmann::json encode_vector(const ComplexVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

nlohmann::json eigenvalue_list(const ComplexMatrix& m) {
  const RealVector ev = eigh(m).eigenvalues;
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

OptimizerConfig make_config(const Globals& g) {
  OptimizerConfig cfg;
  cfg.seed = g.seed;
  cfg.starts = g.starts;
  return cfg;
}

std::pair<std::size_t, std::size_t> parse_dims(const std::string& s) {
  const auto x = s.find('x');
  try {
    std::size_t used = 0;
    if (x == std::string::npos) {
      const std::size_t d = std::stoul(s, &used);
      if (used != s.size() || d == 0) throw std::invalid_argument(s);
      return {d, d};
    }
    const std::string a = s.substr(0, x), b = s.substr(x + 1);
    const std::size_t d1 = std::stoul(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    const std::size_t d2 = std::stoul(b, &used);
    if (used != b.size() || d1 == 0 || d2 == 0) throw std::invalid_argument(s);
    return {d1, d2};
  } catch (const std::logic_error&) {
    throw Error("usage", "--dims expects AxB with positive integers, got \"" + s + "\"");
  }
}

std::string json_path_for(const std::string& report) {
  const auto slash = report.find_last_of('/');
  const auto dot = report.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return report + ".json";
  return report.substr(0, dot) + ".json";
}

int cmd_verify(const Globals& g, const std::string& suite_name, const CorpusOptions& base) {
  std::vector<Suite> suites;
  if (suite_name == "all") {
    suites = all_suites();
  } else if (auto s = parse_suite(suite_name)) {
    suites.push_back(*s);
  } else {
    throw Error("usage", "unknown suite \"" + suite_name + "\"");
  }
  std::vector<ReportRow> rows;
  for (Suite s : suites) {
    std::vector<ReportRow> part = run_suite(s, base, g.timing);
    std::size_t holds = 0, violated = 0, inconclusive = 0;
    for (const ReportRow& r : part) {
      if (r.record.verdict == Verdict::holds) ++holds;
      if (r.record.verdict == Verdict::violated) ++violated;
      if (r.record.verdict == Verdict::inconclusive) ++inconclusive;
    }
    std::cerr << to_string(s) << ": " << part.size() << " rows, " << holds << " HOLDS, " << violated
              << " VIOLATED, " << inconclusive << " INCONCLUSIVE\n";
    rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  const std::string csv = report_csv(rows);
  if (g.report.empty()) {
    std::cout << (g.json ? report_json(rows).dump(2) + "\n" : csv);
  } else {
    write_text_file(g.report, csv);
    if (g.json) write_json_file(json_path_for(g.report), report_json(rows));
  }
  for (const ReportRow& r : rows)
    if (r.record.verdict == Verdict::violated) return 1;
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Measure-and-prepare channel toolkit: outputs, norms, entropies, capacities and inequality checks"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--starts", g.starts, "Optimizer starts (0 = automatic)");
  app.add_option("--tol", g.tol, "Validation tolerance for Hermiticity, positivity, trace and completeness");
  app.add_flag("--json", g.json, "Also write the report as JSON");
  app.add_flag("--timing", g.timing, "Fill the wall_time_ms report column");
  app.add_option("--report", g.report, "CSV report path (default: stdout)");

  std::string channel_file, state_file;
  double p = 2.0;

  auto* apply_cmd = app.add_subcommand("apply", "Apply a channel to a state and print the output");
  apply_cmd->add_option("channel", channel_file, "Channel spec file")->required();
  apply_cmd->add_option("state", state_file, "State file")->required();

  auto* norm_cmd = app.add_subcommand("norm", "Estimate the maximal output p-norm (lower bound)");
  norm_cmd->add_option("channel", channel_file, "Channel spec file")->required();
  norm_cmd->add_option("--p", p, "Schatten exponent, p >= 1");

  auto* smin_cmd = app.add_subcommand("smin", "Estimate the minimal output entropy (upper bound)");
  smin_cmd->add_option("channel", channel_file, "Channel spec file")->required();

  auto* chi_cmd = app.add_subcommand("chi", "Estimate the Holevo capacity (lower bound)");
  chi_cmd->add_option("channel", channel_file, "Channel spec file")->required();

  auto* eb_cmd = app.add_subcommand("check-eb", "Classify a channel as entanglement breaking");
  eb_cmd->add_option("channel", channel_file, "Channel spec file")->required();

  std::string suite;
  CorpusOptions corpus;
  std::optional<double> verify_p;
  std::string dims;
  auto* verify_cmd = app.add_subcommand("verify", "Run a seeded verification corpus");
  verify_cmd->add_option("suite", suite, "theorem1, lemma2, lemma3, lt, superadd, smin-add, chi-add or all")
      ->required();
  verify_cmd->add_option("--trials", corpus.trials, "Number of instances per suite");
  verify_cmd->add_option("--p", verify_p, "Fixed exponent instead of the suite's draw");
  verify_cmd->add_option("--dims", dims, "Channel dimension x partner dimension, e.g. 2x3");
  verify_cmd->add_option("--probes", corpus.probes, "Random bipartite probes per theorem1 instance");

  std::string kind, out;
  std::size_t dim = 2, dim_in = 0, dim_out = 0, terms = 2, rank = 1;
  auto* random_cmd = app.add_subcommand("random", "Write a seeded random channel spec");
  random_cmd->add_option("kind", kind, "eb or kraus")->required()->check(CLI::IsMember({"eb", "kraus"}));
  random_cmd->add_option("--dim", dim, "Input and output dimension");
  random_cmd->add_option("--dim-in", dim_in, "Input dimension (overrides --dim)");
  random_cmd->add_option("--dim-out", dim_out, "Output dimension (overrides --dim)");
  random_cmd->add_option("-K,--terms", terms, "Number of measure-and-prepare terms (eb)");
  random_cmd->add_option("--rank", rank, "Number of Kraus operators (kraus)");
  random_cmd->add_option("--out", out, "Output path (default: stdout)");

  for (CLI::App* sub : {apply_cmd, norm_cmd, smin_cmd, chi_cmd, eb_cmd, verify_cmd, random_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (g.tol) {
    if (!(*g.tol > 0.0)) throw Error("usage", "--tol must be positive");
    set_tolerances({*g.tol, *g.tol, *g.tol, *g.tol});
  }

  if (*apply_cmd) {
    const Channel c = read_channel_file(channel_file);
    const DensityMatrix rho = read_state_file(state_file);
    const DensityMatrix out_state = apply(c, rho);
    nlohmann::json j = encode_state(out_state);
    j["eigenvalues"] = eigenvalue_list(out_state.matrix());
    print_json(j);
    return 0;
  }
  if (*norm_cmd) {
    if (!(p >= 1.0)) throw Error("domain", "p must be >= 1");
    const Channel c = read_channel_file(channel_file);
    const OptResult r = max_output_pnorm(c, p, make_config(g));
    print_json({{"nu_p", r.value},
                {"p", p},
                {"bound", to_string(r.bound)},
                {"maximizer", encode_vector(r.state)},
                {"starts", r.starts_used}});
    return 0;
  }
  if (*smin_cmd) {
    const Channel c = read_channel_file(channel_file);
    const OptResult r = min_output_entropy(c, make_config(g));
    print_json({{"s_min", r.value},
                {"bound", to_string(r.bound)},
                {"minimizer", encode_vector(r.state)},
                {"starts", r.starts_used}});
    return 0;
  }
  if (*chi_cmd) {
    const Channel c = read_channel_file(channel_file);
    const OptResult r = holevo_capacity(c, make_config(g));
    nlohmann::json ensemble = nlohmann::json::array();
    for (std::size_t k = 0; k < r.ensemble->states.size(); ++k)
      ensemble.push_back({{"probability", r.ensemble->probabilities[k]},
                          {"state", encode_matrix(r.ensemble->states[k].matrix())}});
    print_json({{"chi", r.value}, {"bound", to_string(r.bound)}, {"ensemble", ensemble}, {"starts", r.starts_used}});
    return 0;
  }
  if (*eb_cmd) {
    const Channel c = read_channel_file(channel_file);
    print_json({{"classification", to_string(is_entanglement_breaking(c))},
                {"min_partial_transpose_eigenvalue", min_partial_transpose_eigenvalue(to_choi(c))}});
    return 0;
  }
  if (*verify_cmd) {
    corpus.seed = g.seed;
    corpus.p = verify_p;
    if (corpus.p && !(*corpus.p >= 1.0)) throw Error("domain", "p must be >= 1");
    if (!dims.empty()) corpus.dims = parse_dims(dims);
    corpus.cfg.starts = g.starts;
    return cmd_verify(g, suite, corpus);
  }
  if (*random_cmd) {
    const std::size_t din = dim_in ? dim_in : dim;
    const std::size_t dout = dim_out ? dim_out : dim;
    const Channel c = kind == "eb" ? Channel(random_eb_channel(din, dout, terms, g.seed))
                                   : Channel(random_channel(din, dout, rank, g.seed));
    if (out.empty())
      print_json(encode_channel(c));
    else
      write_channel_file(out, c);
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ebcert::Error& e) {
    std::cerr << "error [" << e.invariant() << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
