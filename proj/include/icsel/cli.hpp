#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "icsel/gmm.hpp"
#include "icsel/sim.hpp"

namespace icsel::cli {

enum class Format { Csv, Markdown };

struct CliConfig {
  std::string scenario;  // builtin id ("S1.2") or path to a scenario file
  std::vector<std::size_t> n_list;
  std::size_t runs = 0;  // 0 until parsed: 25 for mixtures, 100 otherwise
  std::uint64_t seed = 1;
  std::vector<sim::Criterion> criteria;
  Format format = Format::Csv;
  std::string output;     // empty: standard output
  std::string reference;  // optional reference CSV to compare against
  unsigned threads = 1;
  gmm::EmConfig em{};
};

/// Bad command line. The message names the offending token.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Environment variable that overrides the default worker count.
inline constexpr const char* kThreadsEnv = "ICSEL_THREADS";

/// `env_threads` stands in for the ICSEL_THREADS value (nullptr if unset).
CliConfig parse_args(int argc, const char* const* argv,
                     const char* env_threads = nullptr);

/// Comma-separated criteria. A `key=value` token attaches to the criterion
/// before it, so "aic,bic,swic:beta=1,nu=1000" is three criteria. Names:
/// aic, bic, hq, swic (beta, and nu or alpha), glp (beta, alpha).
std::vector<sim::Criterion> parse_criteria(std::string_view text);

/// "100,1000,1e4" → {100, 1000, 10000}.
std::vector<std::size_t> parse_n_list(std::string_view text);

/// Builtin id or scenario file.
sim::ScenarioConfig resolve_scenario(const std::string& scenario);

/// CSV header `scenario,criterion,n,runs,avg,prop,failures`, avg and prop to
/// two decimals, LF line endings. Markdown carries the same columns.
void emit_report(const sim::ExperimentReport& report, Format format, std::ostream& out);

/// Full command: parse, run, write. Returns the process exit status
/// (0 done, 1 runtime failure, 2 usage error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace icsel::cli
