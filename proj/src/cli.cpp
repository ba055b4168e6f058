#include "icsel/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <CLI11.hpp>

#include "icsel/report_compare.hpp"
#include "icsel/scenario_file.hpp"

namespace icsel::cli {

namespace {

double parse_number(std::string_view tok, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw UsageError("bad " + std::string(what) + " '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct PendingCriterion {
  std::string name;
  std::string token;  // for error messages
  std::optional<double> alpha, nu;
  std::optional<int> beta;
};

void set_param(PendingCriterion& c, std::string_view kv) {
  const auto eq = kv.find('=');
  if (eq == std::string_view::npos) {
    throw UsageError("criterion parameter '" + std::string(kv) + "' is not key=value");
  }
  const auto key = kv.substr(0, eq);
  const auto val = kv.substr(eq + 1);
  if (key == "beta") {
    const double b = parse_number(val, "beta");
    if (b < 1.0 || b != std::floor(b) || b > 16.0) {
      throw UsageError("beta must be an integer >= 1 in '" + std::string(kv) + "'");
    }
    c.beta = static_cast<int>(b);
  } else if (key == "nu") {
    const double v = parse_number(val, "nu");
    if (!(v >= 2.0)) throw UsageError("nu must be >= 2 in '" + std::string(kv) + "'");
    c.nu = v;
  } else if (key == "alpha") {
    const double v = parse_number(val, "alpha");
    if (!(v > 0.0)) throw UsageError("alpha must be positive in '" + std::string(kv) + "'");
    c.alpha = v;
  } else {
    throw UsageError("unknown criterion parameter '" + std::string(kv) + "'");
  }
}

sim::Criterion finish(const PendingCriterion& p) {
  const auto only_name = [&] {
    if (p.alpha || p.nu || p.beta) {
      throw UsageError("criterion '" + p.name + "' takes no parameters");
    }
  };
  if (p.name == "aic") {
    only_name();
    return sim::aic();
  }
  if (p.name == "bic") {
    only_name();
    return sim::bic();
  }
  if (p.name == "hq") {
    only_name();
    return sim::hannan_quinn();
  }
  const int beta = p.beta.value_or(1);
  if (p.name == "swic") {
    if (p.alpha && p.nu) throw UsageError("swic takes nu or alpha, not both");
    if (p.alpha) return sim::swic(*p.alpha, beta);
    if (!p.nu) throw UsageError("swic needs nu=<value> or alpha=<value>");
    return sim::swic_calibrated(beta, *p.nu);
  }
  if (p.name == "glp") {
    if (p.nu) throw UsageError("glp takes alpha, not nu");
    if (!p.alpha) throw UsageError("glp needs alpha=<value>");
    return sim::generalized_log_plus(*p.alpha, beta);
  }
  throw UsageError("unknown criterion '" + p.token + "'");
}

std::string fixed2(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

unsigned default_threads(const char* env) {
  if (env && *env) {
    const double v = parse_number(env, std::string(kThreadsEnv) + " value");
    if (v < 1.0 || v != std::floor(v)) {
      throw UsageError(std::string(kThreadsEnv) + " must be a positive integer");
    }
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

std::vector<sim::Criterion> parse_criteria(std::string_view text) {
  std::vector<PendingCriterion> pending;
  for (const auto tok : split(text, ',')) {
    if (tok.empty()) throw UsageError("empty criterion in '" + std::string(text) + "'");
    const auto colon = tok.find(':');
    const auto head = tok.substr(0, colon);
    if (head.find('=') != std::string_view::npos) {
      if (pending.empty()) {
        throw UsageError("parameter '" + std::string(tok) + "' has no criterion before it");
      }
      if (colon != std::string_view::npos) {
        throw UsageError("malformed criterion parameter '" + std::string(tok) + "'");
      }
      set_param(pending.back(), tok);
      continue;
    }
    PendingCriterion p;
    p.name = std::string(head);
    p.token = std::string(tok);
    if (colon != std::string_view::npos) {
      for (const auto kv : split(tok.substr(colon + 1), ':')) set_param(p, kv);
    }
    pending.push_back(std::move(p));
  }
  std::vector<sim::Criterion> out;
  for (const auto& p : pending) out.push_back(finish(p));
  return out;
}

std::vector<std::size_t> parse_n_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (const auto tok : split(text, ',')) {
    const double v = parse_number(tok, "sample size");
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) {
      throw UsageError("sample size '" + std::string(tok) + "' is not a positive integer");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

sim::ScenarioConfig resolve_scenario(const std::string& scenario) {
  if (const auto id = sim::parse_scenario_id(scenario)) return sim::builtin_scenario(*id);
  if (!std::filesystem::exists(scenario)) {
    throw UsageError("unknown scenario '" + scenario + "' (not a builtin id or a file)");
  }
  return scenario_file::load(scenario);
}

CliConfig parse_args(int argc, const char* const* argv, const char* env_threads) {
  CLI::App app{"Information-criterion model selection experiments", "icsel"};
  CliConfig cfg;
  std::string n_text, criteria_text = "aic,bic,swic:beta=1,nu=1000,swic:beta=1,nu=10000,"
                                      "swic:beta=2,nu=1000,swic:beta=2,nu=10000";
  std::string format = "csv";
  std::optional<std::size_t> runs;
  std::optional<unsigned> threads;

  app.add_option("--scenario", cfg.scenario, "Builtin id (S1.1..S3.4) or scenario file")
      ->required();
  app.add_option("--n", n_text, "Comma-separated sample sizes")->required();
  app.add_option("--runs", runs, "Replications per sample size (default 25 for "
                                 "mixtures, 100 otherwise)");
  app.add_option("--seed", cfg.seed, "Experiment seed");
  app.add_option("--criteria", criteria_text, "Comma-separated criteria");
  app.add_option("--format", format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));
  app.add_option("--output", cfg.output, "Output file (default: standard output)");
  app.add_option("--reference", cfg.reference, "Reference CSV to compare against");
  app.add_option("--threads", threads, "Worker threads");
  app.add_option("--em-restarts", cfg.em.restarts, "EM restarts per order");
  app.add_option("--em-max-iters", cfg.em.max_iters, "EM iteration cap");
  app.add_option("--em-tol", cfg.em.tol, "EM tolerance on average log-likelihood");
  app.add_option("--em-var-floor", cfg.em.var_floor, "Smallest covariance eigenvalue");
  app.add_option("--em-var-ceiling", cfg.em.var_ceiling, "Largest covariance eigenvalue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.n_list = parse_n_list(n_text);
  cfg.criteria = parse_criteria(criteria_text);
  cfg.format = format == "markdown" ? Format::Markdown : Format::Csv;
  try {
    cfg.em.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (runs) {
    if (*runs < 1) throw UsageError("--runs must be >= 1");
    cfg.runs = *runs;
  }
  if (threads) {
    if (*threads < 1) throw UsageError("--threads must be >= 1");
    cfg.threads = *threads;
  } else {
    cfg.threads = default_threads(env_threads);
  }
  return cfg;
}

void emit_report(const sim::ExperimentReport& report, Format format, std::ostream& out) {
  if (format == Format::Csv) {
    out << "scenario,criterion,n,runs,avg,prop,failures\n";
    for (const auto& r : report.rows) {
      out << r.scenario << ',' << r.criterion << ',' << r.n << ',' << r.runs << ','
          << fixed2(r.avg) << ',' << fixed2(r.prop) << ',' << r.failures << '\n';
    }
  } else {
    out << "| scenario | criterion | n | runs | avg | prop | failures |\n"
        << "|---|---|---:|---:|---:|---:|---:|\n";
    for (const auto& r : report.rows) {
      out << "| " << r.scenario << " | " << r.criterion << " | " << r.n << " | " << r.runs
          << " | " << fixed2(r.avg) << " | " << fixed2(r.prop) << " | " << r.failures
          << " |\n";
    }
  }
  if (!out) throw std::ios_base::failure("failed writing report");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  sim::ScenarioConfig scenario;
  try {
    cfg = parse_args(argc, argv, std::getenv(kThreadsEnv));
    scenario = resolve_scenario(cfg.scenario);
  } catch (const UsageError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (cfg.runs == 0) cfg.runs = scenario.family == sim::Family::Mixture ? 25 : 100;

  try {
    sim::RunOptions opts;
    opts.threads = cfg.threads;
    opts.em = cfg.em;
    const auto report =
        sim::run_experiment(scenario, cfg.criteria, cfg.n_list, cfg.runs, cfg.seed, opts);

    if (cfg.output.empty()) {
      emit_report(report, cfg.format, out);
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) throw std::ios_base::failure("cannot open " + cfg.output + " for writing");
      emit_report(report, cfg.format, file);
    }

    bool complete = true;
    for (const auto& r : report.rows) {
      if (r.failures == r.runs) {
        err << "error: every run failed for " << r.criterion << " at n=" << r.n << "\n";
        complete = false;
      }
    }

    if (!cfg.reference.empty()) {
      auto refs = report::load_reference_csv(cfg.reference);
      std::erase_if(refs, [&](const report::ReferenceRow& ref) {
        return std::none_of(report.rows.begin(), report.rows.end(), [&](const auto& r) {
          return r.scenario == ref.scenario && r.criterion == ref.criterion && r.n == ref.n;
        });
      });
      std::size_t passed = 0;
      for (const auto& c : report::compare(report, refs)) {
        passed += c.pass;
        err << (c.pass ? "PASS " : "FAIL ")
            << report::key_string(c.ref.scenario, c.ref.criterion, c.ref.n)
            << " avg " << fixed2(c.row.avg) << " (ref " << fixed2(c.ref.avg_ref) << ")"
            << " prop " << fixed2(c.row.prop) << " (ref " << fixed2(c.ref.prop_ref) << ")\n";
      }
      err << passed << "/" << refs.size() << " reference cells within tolerance\n";
    }
    return complete ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace icsel::cli
