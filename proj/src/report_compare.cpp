#include "icsel/report_compare.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace icsel::report {

namespace {

// Reference values carry two decimals; this absorbs binary rounding of
// differences such as 3.39 − 3.24 so a band edge counts as inside.
constexpr double kEdgeSlack = 1e-9;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_cell(const std::string& text, std::size_t line_no, const char* column) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw CompareError("line " + std::to_string(line_no) + ": bad " + column +
                       " value '" + text + "'");
  }
  return value;
}

}  // namespace

void ReferenceRow::validate() const {
  if (!(tol_avg > 0.0) || !(tol_prop > 0.0)) {
    throw CompareError("non-positive tolerance for " + key_string(scenario, criterion, n));
  }
}

std::string key_string(const std::string& scenario, const std::string& criterion,
                       std::size_t n) {
  return scenario + "/" + criterion + "/n=" + std::to_string(n);
}

std::vector<ReferenceRow> load_reference_csv(std::istream& in) {
  static const char* kHeader =
      "scenario,criterion,n,runs,avg,prop,failures,tol_avg,tol_prop";
  std::vector<ReferenceRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != kHeader) {
        throw CompareError("line " + std::to_string(line_no) + ": expected header '" +
                           kHeader + "'");
      }
      seen_header = true;
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != 9) {
      throw CompareError("line " + std::to_string(line_no) + ": expected 9 columns, got " +
                         std::to_string(cells.size()));
    }
    ReferenceRow r;
    r.scenario = cells[0];
    r.criterion = cells[1];
    r.n = parse_cell<std::size_t>(cells[2], line_no, "n");
    parse_cell<std::size_t>(cells[3], line_no, "runs");
    r.avg_ref = parse_cell<double>(cells[4], line_no, "avg");
    r.prop_ref = parse_cell<double>(cells[5], line_no, "prop");
    parse_cell<std::size_t>(cells[6], line_no, "failures");
    r.tol_avg = parse_cell<double>(cells[7], line_no, "tol_avg");
    r.tol_prop = parse_cell<double>(cells[8], line_no, "tol_prop");
    r.validate();
    rows.push_back(std::move(r));
  }
  if (!seen_header) throw CompareError("reference file has no header");
  return rows;
}

std::vector<ReferenceRow> load_reference_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CompareError("cannot open reference file " + path);
  return load_reference_csv(in);
}

std::vector<Comparison> compare(const sim::ExperimentReport& report,
                                const std::vector<ReferenceRow>& refs) {
  using Key = std::tuple<std::string, std::string, std::size_t>;
  std::map<Key, const sim::ReportRow*> index;
  for (const auto& row : report.rows) index[{row.scenario, row.criterion, row.n}] = &row;

  std::vector<Comparison> out;
  out.reserve(refs.size());
  for (const auto& ref : refs) {
    ref.validate();
    const auto it = index.find({ref.scenario, ref.criterion, ref.n});
    if (it == index.end()) {
      throw CompareError("report has no row for " +
                         key_string(ref.scenario, ref.criterion, ref.n));
    }
    Comparison c{ref, *it->second, it->second->avg - ref.avg_ref,
                 it->second->prop - ref.prop_ref, false};
    c.pass = std::abs(c.delta_avg) <= ref.tol_avg + kEdgeSlack &&
             std::abs(c.delta_prop) <= ref.tol_prop + kEdgeSlack;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace icsel::report
