#include "icsel/scenario_file.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace icsel::scenario_file {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::set<std::string> kKnownKeys{
    "family", "name", "true_k", "m", "weights", "means", "covariance",
    "theta", "epsilon", "a", "r", "law", "df"};

struct Entry {
  std::size_t line = 0;
  std::string scalar;                     // inline value
  std::vector<std::vector<double>> rows;  // matrix rows, when scalar is empty
};

class Reader {
 public:
  Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw ParseError(source_, line, what);
  }

  std::vector<double> numbers(std::string_view text, std::size_t line) const {
    std::vector<double> out;
    std::istringstream ss{std::string(text)};
    std::string tok;
    while (ss >> tok) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        fail(line, "not a number: '" + tok + "'");
      }
      out.push_back(v);
    }
    return out;
  }

  void read(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    Entry* open = nullptr;
    while (std::getline(in, raw)) {
      ++line_no;
      const auto hash = raw.find('#');
      const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        if (!open) fail(line_no, "expected 'key = value'");
        open->rows.push_back(numbers(line, line_no));
        continue;
      }
      const std::string key = trim(std::string_view(line).substr(0, eq));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      if (key.empty()) fail(line_no, "empty key");
      if (!kKnownKeys.count(key)) fail(line_no, "unknown key '" + key + "'");
      const bool repeatable = key == "covariance";
      if (!repeatable && entries_.count(key)) fail(line_no, "duplicate key '" + key + "'");
      auto& list = entries_[key];
      list.push_back({line_no, value, {}});
      open = value.empty() ? &list.back() : nullptr;
    }
    last_line_ = line_no;
  }

  const std::vector<Entry>* find(const std::string& key) {
    used_.insert(key);
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const Entry& need(const std::string& key) {
    const auto* e = find(key);
    if (!e) fail(last_line_, "missing key '" + key + "'");
    return e->front();
  }

  std::string text(const std::string& key) {
    const auto& e = need(key);
    if (e.scalar.empty()) fail(e.line, "'" + key + "' needs a value");
    return e.scalar;
  }

  double number(const std::string& key) {
    const auto& e = need(key);
    const auto v = numbers(e.scalar, e.line);
    if (v.size() != 1) fail(e.line, "'" + key + "' needs one number");
    return v.front();
  }

  std::size_t count(const std::string& key) {
    const auto& e = need(key);
    const double v = number(key);
    if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
      fail(e.line, "'" + key + "' must be a positive integer");
    }
    return static_cast<std::size_t>(v);
  }

  std::vector<double> vector(const std::string& key) {
    const auto& e = need(key);
    auto v = numbers(e.scalar, e.line);
    if (v.empty()) fail(e.line, "'" + key + "' needs at least one number");
    return v;
  }

  Matrix matrix(const Entry& e, const std::string& key) const {
    if (!e.scalar.empty() || e.rows.empty()) {
      fail(e.line, "'" + key + "' needs matrix rows on the following lines");
    }
    const std::size_t cols = e.rows.front().size();
    Matrix out(e.rows.size(), cols);
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
      if (e.rows[r].size() != cols) fail(e.line, "ragged rows in '" + key + "'");
      for (std::size_t c = 0; c < cols; ++c) out(r, c) = e.rows[r][c];
    }
    return out;
  }

  Matrix matrix(const std::string& key) { return matrix(need(key), key); }

  numerics::SymMatrix symmetric(const Entry& e, const std::string& key) const {
    Matrix m = matrix(e, key);
    if (m.rows() != m.cols()) fail(e.line, "'" + key + "' must be square");
    for (std::size_t a = 0; a < m.rows(); ++a)
      for (std::size_t b = 0; b < a; ++b)
        if (m(a, b) != m(b, a)) fail(e.line, "'" + key + "' must be symmetric");
    return numerics::SymMatrix(std::move(m));
  }

  void reject_unused() const {
    for (const auto& [key, list] : entries_) {
      if (!used_.count(key)) fail(list.front().line, "unknown key '" + key + "'");
    }
  }

 private:
  std::string source_;
  std::map<std::string, std::vector<Entry>> entries_;
  std::set<std::string> used_;
  std::size_t last_line_ = 0;
};

void put_matrix(std::ostringstream& out, const std::string& key, const Matrix& m) {
  out << key << " =\n";
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << " ";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, " %.17g", m(r, c));
      out << buf;
    }
    out << "\n";
  }
}

void put_vector(std::ostringstream& out, const std::string& key,
                const std::vector<double>& v) {
  out << key << " =";
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, " %.17g", x);
    out << buf;
  }
  out << "\n";
}

}  // namespace

sim::ScenarioConfig parse(std::istream& in, const std::string& source) {
  Reader rd(source);
  rd.read(in);

  sim::ScenarioConfig cfg;
  cfg.id = sim::ScenarioId::Custom;
  const std::string family = rd.text("family");
  if (family != "mixture" && family != "regression" && family != "pca") {
    rd.fail(rd.need("family").line, "family must be mixture, regression or pca");
  }
  cfg.name = rd.text("name");
  cfg.true_k = rd.count("true_k");
  cfg.m = rd.count("m");

  if (family == "mixture") {
    cfg.family = sim::Family::Mixture;
    sim::MixturePayload p;
    p.weights = rd.vector("weights");
    const Matrix means = rd.matrix("means");
    for (std::size_t z = 0; z < means.rows(); ++z) {
      const auto row = means.row(z);
      p.means.emplace_back(row.begin(), row.end());
    }
    const auto* covs = rd.find("covariance");
    if (!covs) rd.need("covariance");
    for (const auto& e : *covs) p.covariances.push_back(rd.symmetric(e, "covariance"));
    cfg.payload = std::move(p);
  } else if (family == "regression") {
    cfg.family = sim::Family::Regression;
    sim::RegressionPayload p;
    p.theta = rd.vector("theta");
    p.epsilon = rd.find("epsilon") ? rd.number("epsilon") : 0.0;
    cfg.payload = std::move(p);
  } else {
    cfg.family = sim::Family::Pca;
    sim::PcaPayload p;
    p.a = rd.matrix("a");
    p.r = rd.symmetric(rd.need("r"), "r");
    if (rd.find("law")) {
      const std::string law = rd.text("law");
      if (law == "normal") {
        p.law = sim::YLaw::Normal;
      } else if (law == "t") {
        p.law = sim::YLaw::StudentT;
      } else {
        rd.fail(rd.need("law").line, "law must be 'normal' or 't'");
      }
    }
    if (rd.find("df")) p.df = rd.number("df");
    cfg.payload = std::move(p);
  }
  rd.reject_unused();

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ParseError(source, 0, e.what());
  }
  return cfg;
}

sim::ScenarioConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse(in, path);
}

std::string serialize(const sim::ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "family = " << sim::to_string(cfg.family) << "\n";
  out << "name = " << cfg.name << "\n";
  out << "true_k = " << cfg.true_k << "\n";
  out << "m = " << cfg.m << "\n";
  if (const auto* p = std::get_if<sim::MixturePayload>(&cfg.payload)) {
    put_vector(out, "weights", p->weights);
    Matrix means(p->means.size(), p->means.empty() ? 0 : p->means.front().size());
    for (std::size_t z = 0; z < p->means.size(); ++z)
      for (std::size_t a = 0; a < means.cols(); ++a) means(z, a) = p->means[z][a];
    put_matrix(out, "means", means);
    for (const auto& c : p->covariances) put_matrix(out, "covariance", c.matrix());
  } else if (const auto* p = std::get_if<sim::RegressionPayload>(&cfg.payload)) {
    put_vector(out, "theta", p->theta);
    put_vector(out, "epsilon", {p->epsilon});
  } else if (const auto* p = std::get_if<sim::PcaPayload>(&cfg.payload)) {
    put_matrix(out, "a", p->a);
    put_matrix(out, "r", p->r.matrix());
    out << "law = " << (p->law == sim::YLaw::Normal ? "normal" : "t") << "\n";
    put_vector(out, "df", {p->df});
  }
  return out.str();
}

}  // namespace icsel::scenario_file
