#pragma once

#include <istream>
#include <stdexcept>
#include <string>

#include "icsel/sim.hpp"

namespace icsel::scenario_file {

// Plain-text scenario description, one `key = value` per line:
//
//   family = mixture          # mixture | regression | pca
//   name = two-blobs
//   true_k = 2
//   m = 4
//   weights = 0.5 0.5
//   means =
//     0 0
//     4 4
//   covariance =              # repeated once per component
//     1 0
//     0 1
//   covariance =
//     1 0.5
//     0.5 1
//
// Regression uses `theta` and `epsilon`; PCA uses `a` (matrix), `r`
// (matrix), `law` (normal | t) and `df`. A key with an empty value opens a
// matrix whose rows follow on their own lines. '#' starts a comment.

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses and validates. Unknown or duplicated keys are errors.
sim::ScenarioConfig parse(std::istream& in, const std::string& source = "<input>");
sim::ScenarioConfig load(const std::string& path);

/// Writes a config back in the same format; parse(serialize(c)) == c up to
/// the printed precision (17 significant digits).
std::string serialize(const sim::ScenarioConfig& cfg);

}  // namespace icsel::scenario_file
