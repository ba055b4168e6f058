#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "icsel/sim.hpp"

namespace icsel::report {

struct ReferenceRow {
  std::string scenario;
  std::string criterion;
  std::size_t n = 0;
  double avg_ref = 0.0;
  double prop_ref = 0.0;
  double tol_avg = 0.0;
  double tol_prop = 0.0;

  void validate() const;  // tolerances must be positive
};

class CompareError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the reference CSV: the report columns
/// (scenario,criterion,n,runs,avg,prop,failures) followed by tol_avg and
/// tol_prop. Lines starting with '#' and blank lines are skipped; runs and
/// failures are read but not kept. Throws CompareError with the line number.
std::vector<ReferenceRow> load_reference_csv(std::istream& in);
std::vector<ReferenceRow> load_reference_csv(const std::string& path);

struct Comparison {
  ReferenceRow ref;
  sim::ReportRow row;
  double delta_avg = 0.0;   // row − ref
  double delta_prop = 0.0;
  bool pass = false;
};

/// One entry per reference, in reference order. Throws CompareError naming
/// the first (scenario, criterion, n) key the report lacks.
std::vector<Comparison> compare(const sim::ExperimentReport& report,
                                const std::vector<ReferenceRow>& refs);

/// "S3.1/bic/n=10000"
std::string key_string(const std::string& scenario, const std::string& criterion,
                       std::size_t n);

}  // namespace icsel::report
