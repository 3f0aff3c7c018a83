#pragma once

// Seeded regression corpora. Instance i of a run with base seed s is generated
// from seed s + i alone, so every row can be replayed from its witness.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ebcert/optimize.hpp"
#include "ebcert/theorems.hpp"

namespace ebcert {

enum class Suite { theorem1, lemma2, lemma3, lt, superadd, smin_add, chi_add };

/// CLI names: theorem1, lemma2, lemma3, lt, superadd, smin-add, chi-add.
const char* to_string(Suite s);
std::optional<Suite> parse_suite(const std::string& name);
std::vector<Suite> all_suites();

struct CorpusOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 10;
  std::optional<double> p;                                  // fixed p instead of the suite's draw
  std::optional<std::pair<std::size_t, std::size_t>> dims;  // channel dim x partner dim
  OptimizerConfig cfg;                                      // cfg.seed is replaced per instance
  std::size_t probes = 2000;                                // random bipartite probes (theorem1)
};

struct ReportRow {
  std::string check_name;
  std::uint64_t seed = 0;
  std::string dims;
  std::optional<double> p;
  std::string kind;  // instance family, e.g. "product", "commuting", "replace"
  InequalityRecord record;
  std::optional<double> wall_time_ms;
};

ReportRow run_instance(Suite suite, std::uint64_t instance_seed, const CorpusOptions& opts);

/// opts.trials instances with seeds opts.seed, opts.seed + 1, ...
std::vector<ReportRow> run_suite(Suite suite, const CorpusOptions& opts, bool timing = false);

/// Re-runs the instance described by a row witness.
ReportRow replay(const nlohmann::json& witness);

/// Fixed columns check_name, seed, dims, p, lhs, rhs, gap, verdict, wall_time_ms;
/// doubles use 17 significant digits and absent values print as NA.
std::string report_csv(const std::vector<ReportRow>& rows);
nlohmann::json report_json(const std::vector<ReportRow>& rows);

std::string format_double(double x);

}  // namespace ebcert
