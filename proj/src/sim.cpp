#include "icsel/sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "icsel/pca.hpp"
#include "icsel/svr.hpp"

namespace icsel::sim {

namespace {

constexpr std::string_view kIdNames[] = {"S1.1", "S1.2", "S1.3", "S1.4",
                                         "S2.1", "S2.2", "S2.3", "S2.4",
                                         "S3.1", "S3.2", "S3.3", "S3.4",
                                         "custom"};

std::string format_number(double v) {
  char buf[64];
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.6g", v);
  }
  return buf;
}

MixturePayload grid_mixture(double scale, const std::vector<std::pair<int, int>>& cells) {
  MixturePayload p;
  const double w = 1.0 / static_cast<double>(cells.size());
  for (auto [a, b] : cells) {
    p.weights.push_back(w);
    p.means.push_back({scale * a, scale * b});
    p.covariances.push_back(numerics::SymMatrix::identity(2));
  }
  return p;
}

const Matrix& a_rank4() {
  static const Matrix a{
      {1, 0, 0, 0},       {0, 0.25, 0, 0},       {0, 0, 0.1, 0},
      {0, 0, 0, 0.1},     {1, 0.25, 0, 0},       {0, 0.25, 0.1, 0},
      {0, 0, 0.1, 0.1},   {1, 0.25, 0.1, 0},     {0, 0.25, 0.1, 0.1},
      {1, 0.25, 0.1, 0.1}};
  return a;
}

const Matrix& a_rank6() {
  static const Matrix a{
      {1, 0, 0, 0, 0, 0},      {0, 0.5, 0, 0, 0, 0},     {0, 0, 0.25, 0, 0, 0},
      {0, 0, 0, 0.25, 0, 0},   {0, 0, 0, 0, 0.1, 0},     {0, 0, 0, 0, 0, 0.1},
      {1, 0.5, 0, 0, 0, 0},    {0, 0.5, 0.25, 0, 0, 0},  {0, 0, 0.25, 0.25, 0, 0},
      {0, 0, 0, 0.25, 0.1, 0}};
  return a;
}

}  // namespace

std::string_view to_string(ScenarioId id) {
  return kIdNames[static_cast<std::size_t>(id)];
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Mixture: return "mixture";
    case Family::Regression: return "regression";
    case Family::Pca: return "pca";
  }
  return "?";
}

std::optional<ScenarioId> parse_scenario_id(std::string_view text) {
  for (std::size_t i = 0; i < 12; ++i) {
    std::string alt(kIdNames[i]);
    alt[2] = '_';
    if (text == kIdNames[i] || text == alt) return static_cast<ScenarioId>(i);
  }
  return std::nullopt;
}

numerics::SymMatrix equicorrelation(std::size_t dim, double rho) {
  numerics::SymMatrix r(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) r.set(i, j, i == j ? 1.0 : rho);
  return r;
}

void ScenarioConfig::validate() const {
  if (m < 1) throw std::invalid_argument("scenario m must be >= 1");
  if (true_k < 1 || true_k > m) {
    throw std::invalid_argument("scenario true_k must lie in [1, m]");
  }
  switch (family) {
    case Family::Mixture: {
      const auto* p = std::get_if<MixturePayload>(&payload);
      if (!p) throw std::invalid_argument("mixture scenario without mixture payload");
      gmm::GmmParams g{p->weights, p->means, p->covariances};
      g.validate();
      if (g.dim() < 1) throw std::invalid_argument("mixture means need d >= 1");
      for (const auto& c : p->covariances) numerics::cholesky(c);
      break;
    }
    case Family::Regression: {
      const auto* p = std::get_if<RegressionPayload>(&payload);
      if (!p) throw std::invalid_argument("regression scenario without regression payload");
      if (p->theta.size() != m) {
        throw std::invalid_argument("regression theta length must equal m");
      }
      if (!(p->epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
      break;
    }
    case Family::Pca: {
      const auto* p = std::get_if<PcaPayload>(&payload);
      if (!p) throw std::invalid_argument("pca scenario without pca payload");
      if (p->a.rows() < 1 || p->a.cols() < 1) throw std::invalid_argument("pca A is empty");
      if (p->r.dim() != p->a.cols()) {
        throw std::invalid_argument("pca R must match the columns of A");
      }
      if (m > p->a.rows()) throw std::invalid_argument("pca m exceeds ambient dimension");
      if (p->law == YLaw::StudentT && !(p->df > 0.0)) {
        throw std::invalid_argument("student-t df must be positive");
      }
      numerics::cholesky(p->r);
      break;
    }
  }
}

std::vector<double> ScenarioConfig::penalty_constants() const {
  switch (family) {
    case Family::Mixture: {
      const auto& p = std::get<MixturePayload>(payload);
      return gmm::mixture_penalty_constants(m, gmm::component_params(p.means.front().size()));
    }
    case Family::Regression:
      return svr::svr_penalty_constants(m);
    case Family::Pca:
      return pca::pca_penalty_constants(m, std::get<PcaPayload>(payload).a.rows());
  }
  throw std::logic_error("unknown family");
}

ScenarioConfig builtin_scenario(ScenarioId id) {
  ScenarioConfig cfg;
  cfg.id = id;
  cfg.name = std::string(to_string(id));
  const std::vector<std::pair<int, int>> four{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  const std::vector<std::pair<int, int>> six{{1, 1}, {1, 2}, {1, 3},
                                             {2, 1}, {2, 2}, {2, 3}};
  const std::vector<double> theta4{1, 0.75, 0.5, 0.25, 0, 0, 0, 0, 0, 0};
  const std::vector<double> theta6{1, 0.85, 0.7, 0.55, 0.4, 0.25, 0, 0, 0, 0};
  switch (id) {
    case ScenarioId::S1_1:
    case ScenarioId::S1_2:
    case ScenarioId::S1_3:
    case ScenarioId::S1_4: {
      const bool wide = id == ScenarioId::S1_2 || id == ScenarioId::S1_4;
      const bool six_comp = id == ScenarioId::S1_3 || id == ScenarioId::S1_4;
      cfg.family = Family::Mixture;
      cfg.m = 8;
      cfg.true_k = six_comp ? 6 : 4;
      cfg.payload = grid_mixture(wide ? 3.0 : 2.0, six_comp ? six : four);
      break;
    }
    case ScenarioId::S2_1:
    case ScenarioId::S2_2:
    case ScenarioId::S2_3:
    case ScenarioId::S2_4: {
      const bool six_k = id == ScenarioId::S2_3 || id == ScenarioId::S2_4;
      const bool svr_eps = id == ScenarioId::S2_2 || id == ScenarioId::S2_4;
      cfg.family = Family::Regression;
      cfg.m = 10;
      cfg.true_k = six_k ? 6 : 4;
      cfg.payload = RegressionPayload{six_k ? theta6 : theta4, svr_eps ? 1.0 : 0.0};
      break;
    }
    case ScenarioId::S3_1:
    case ScenarioId::S3_2:
    case ScenarioId::S3_3:
    case ScenarioId::S3_4: {
      const bool six_k = id == ScenarioId::S3_3 || id == ScenarioId::S3_4;
      const bool heavy = id == ScenarioId::S3_2 || id == ScenarioId::S3_4;
      cfg.family = Family::Pca;
      cfg.m = 10;
      cfg.true_k = six_k ? 6 : 4;
      PcaPayload p;
      p.a = six_k ? a_rank6() : a_rank4();
      p.law = heavy ? YLaw::StudentT : YLaw::Normal;
      p.df = 5.0;
      p.r = equicorrelation(cfg.true_k, 0.75);
      cfg.payload = std::move(p);
      break;
    }
    case ScenarioId::Custom:
      throw std::invalid_argument("custom scenarios come from a scenario file");
  }
  cfg.validate();
  return cfg;
}

Matrix sample_mvn(std::span<const double> mean, const numerics::SymMatrix& cov,
                  std::size_t n, rng::Stream& stream) {
  const std::size_t d = mean.size();
  if (cov.dim() != d) throw std::invalid_argument("mean/covariance dimension mismatch");
  const Matrix l = numerics::cholesky(cov);
  Matrix out(n, d);
  std::vector<double> z(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : z) v = stream.normal();
    auto row = out.row(i);
    for (std::size_t a = 0; a < d; ++a) {
      double s = mean[a];
      for (std::size_t b = 0; b <= a; ++b) s += l(a, b) * z[b];
      row[a] = s;
    }
  }
  return out;
}

Matrix sample_mvt(double df, const numerics::SymMatrix& shape, std::size_t n,
                  rng::Stream& stream) {
  if (!(df > 0.0)) throw std::domain_error("student-t df must be positive");
  const std::vector<double> zero(shape.dim(), 0.0);
  Matrix out = sample_mvn(zero, shape, n, stream);
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = 1.0 / std::sqrt(stream.chi_square(df) / df);
    for (double& v : out.row(i)) v *= scale;
  }
  return out;
}

Matrix sample_scenario(const ScenarioConfig& cfg, std::size_t n, rng::Stream& stream) {
  switch (cfg.family) {
    case Family::Mixture: {
      const auto& p = std::get<MixturePayload>(cfg.payload);
      const std::size_t d = p.means.front().size();
      std::vector<Matrix> chol;
      for (const auto& c : p.covariances) chol.push_back(numerics::cholesky(c));
      Matrix out(n, d);
      std::vector<double> z(d);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t comp = stream.categorical(p.weights.data(), p.weights.size());
        for (double& v : z) v = stream.normal();
        auto row = out.row(i);
        const auto& l = chol[comp];
        for (std::size_t a = 0; a < d; ++a) {
          double s = p.means[comp][a];
          for (std::size_t b = 0; b <= a; ++b) s += l(a, b) * z[b];
          row[a] = s;
        }
      }
      return out;
    }
    case Family::Regression: {
      const auto& p = std::get<RegressionPayload>(cfg.payload);
      const std::size_t m = p.theta.size();
      Matrix out(n, m + 1);
      for (std::size_t i = 0; i < n; ++i) {
        auto row = out.row(i);
        double y = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          row[j + 1] = stream.uniform();
          y += p.theta[j] * row[j + 1];
        }
        row[0] = y + stream.normal();
      }
      return out;
    }
    case Family::Pca: {
      const auto& p = std::get<PcaPayload>(cfg.payload);
      const std::vector<double> zero(p.r.dim(), 0.0);
      const Matrix latent = p.law == YLaw::Normal ? sample_mvn(zero, p.r, n, stream)
                                                  : sample_mvt(p.df, p.r, n, stream);
      return latent * p.a.transpose();
    }
  }
  throw std::logic_error("unknown family");
}

penalty::PenaltySpec Criterion::with_constants(std::vector<double> constants) const {
  penalty::PenaltySpec spec{kind, alpha, beta, std::move(constants)};
  spec.validate();
  return spec;
}

Criterion aic() { return {"aic", penalty::Kind::AIC, 1.0, 1, std::nullopt}; }
Criterion bic() { return {"bic", penalty::Kind::BIC, 1.0, 1, std::nullopt}; }
Criterion hannan_quinn() { return {"hq", penalty::Kind::HannanQuinn, 1.0, 2, std::nullopt}; }

Criterion swic_calibrated(int beta, double nu) {
  const double alpha = penalty::alpha_calibrate(beta, nu);
  return {"swic:b" + std::to_string(beta) + ":v" + format_number(nu),
          penalty::Kind::SWIC, alpha, beta, nu};
}

Criterion swic(double alpha, int beta) {
  if (!(alpha > 0.0)) throw std::invalid_argument("swic alpha must be positive");
  if (beta < 1) throw std::invalid_argument("swic beta must be >= 1");
  return {"swic:b" + std::to_string(beta) + ":a" + format_number(alpha),
          penalty::Kind::SWIC, alpha, beta, std::nullopt};
}

Criterion generalized_log_plus(double alpha, int beta) {
  if (!(alpha > 0.0)) throw std::invalid_argument("glp alpha must be positive");
  if (beta < 1) throw std::invalid_argument("glp beta must be >= 1");
  return {"glp:b" + std::to_string(beta) + ":a" + format_number(alpha),
          penalty::Kind::GeneralizedLogPlus, alpha, beta, std::nullopt};
}

std::vector<Criterion> default_criteria() {
  return {aic(),
          bic(),
          swic_calibrated(1, 1e3),
          swic_calibrated(1, 1e4),
          swic_calibrated(2, 1e3),
          swic_calibrated(2, 1e4)};
}

select::RiskProfile fit_profile(const ScenarioConfig& cfg, const Matrix& data,
                                const gmm::EmConfig& em) {
  switch (cfg.family) {
    case Family::Mixture: {
      select::RiskProfile out;
      out.n = static_cast<double>(data.rows());
      for (const auto& fit : gmm::fit_em_path(data, cfg.m, em)) {
        out.min_risks.push_back(fit.min_avg_nll);
      }
      return out;
    }
    case Family::Regression: {
      const auto& p = std::get<RegressionPayload>(cfg.payload);
      const auto sample = svr::RegressionSample::from_rows(data);
      const select::RiskFitter fitter = [&sample, &p](const Matrix&, std::size_t k) {
        return svr::fit_subset(sample, k, {p.epsilon}).min_risk;
      };
      return select::sweep(fitter, data, cfg.m);
    }
    case Family::Pca:
      return pca::rank_risk_profile(pca::second_moment(data), cfg.m);
  }
  throw std::logic_error("unknown family");
}

std::uint64_t scenario_tag(const ScenarioConfig& cfg) {
  if (cfg.id != ScenarioId::Custom) return static_cast<std::uint64_t>(cfg.id) + 1;
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : cfg.name) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

ExperimentReport run_experiment(const ScenarioConfig& cfg,
                                const std::vector<Criterion>& criteria,
                                const std::vector<std::size_t>& n_list,
                                std::size_t runs, std::uint64_t seed,
                                const RunOptions& opts) {
  cfg.validate();
  if (runs < 1) throw std::invalid_argument("run_experiment needs runs >= 1");
  if (criteria.empty()) throw std::invalid_argument("run_experiment needs a criterion");
  if (n_list.empty()) throw std::invalid_argument("run_experiment needs sample sizes");
  for (std::size_t n : n_list) {
    if (n < 1) throw std::invalid_argument("sample sizes must be >= 1");
  }

  const auto constants = cfg.penalty_constants();
  std::vector<penalty::PenaltySpec> specs;
  for (const auto& c : criteria) specs.push_back(c.with_constants(constants));

  const std::size_t n_c = criteria.size();
  const std::size_t tasks = n_list.size() * runs;
  // chosen[task * n_c + c]; 0 marks a failed run.
  std::vector<std::size_t> chosen(tasks * n_c, 0);
  const std::uint64_t tag = scenario_tag(cfg);

  auto run_task = [&](std::size_t t) {
    const std::size_t n = n_list[t / runs];
    const std::size_t r = t % runs;
    auto stream = rng::Stream::derive(seed, tag, n, r);
    try {
      const Matrix data = sample_scenario(cfg, n, stream);
      gmm::EmConfig em = opts.em;
      em.seed = stream.next_u64();
      em.threads = 1;
      const auto profile = fit_profile(cfg, data, em);
      for (std::size_t c = 0; c < n_c; ++c) {
        chosen[t * n_c + c] = select::select(profile, specs[c]).chosen_k;
      }
    } catch (const std::exception&) {
      // Excluded from Avg/Prop and counted as a failure.
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(tasks)));
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks;) run_task(t);
      });
    }
  }

  ExperimentReport report;
  report.seed = seed;
  for (std::size_t c = 0; c < n_c; ++c) {
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
      ReportRow row;
      row.scenario = cfg.name;
      row.criterion = criteria[c].label;
      row.n = n_list[ni];
      row.runs = runs;
      std::size_t ok = 0, hits = 0, sum = 0;
      for (std::size_t r = 0; r < runs; ++r) {
        const std::size_t k = chosen[(ni * runs + r) * n_c + c];
        if (k == 0) {
          ++row.failures;
          continue;
        }
        ++ok;
        sum += k;
        if (k == cfg.true_k) ++hits;
      }
      if (ok > 0) {
        row.avg = static_cast<double>(sum) / static_cast<double>(ok);
        row.prop = static_cast<double>(hits) / static_cast<double>(ok);
      } else {
        row.avg = std::numeric_limits<double>::quiet_NaN();
        row.prop = std::numeric_limits<double>::quiet_NaN();
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace icsel::sim
