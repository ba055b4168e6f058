#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "icsel/gmm.hpp"
#include "icsel/matrix.hpp"
#include "icsel/numerics.hpp"
#include "icsel/penalty.hpp"
#include "icsel/rng.hpp"
#include "icsel/select.hpp"

namespace icsel::sim {

enum class ScenarioId {
  S1_1, S1_2, S1_3, S1_4,
  S2_1, S2_2, S2_3, S2_4,
  S3_1, S3_2, S3_3, S3_4,
  Custom
};

enum class Family { Mixture, Regression, Pca };

std::string_view to_string(ScenarioId id);  // "S1.1", ..., "custom"
std::string_view to_string(Family family);
/// Accepts "S1.2" or "S1_2"; nullopt otherwise.
std::optional<ScenarioId> parse_scenario_id(std::string_view text);

struct MixturePayload {
  std::vector<double> weights;
  std::vector<std::vector<double>> means;
  std::vector<numerics::SymMatrix> covariances;
};

struct RegressionPayload {
  std::vector<double> theta;  // length m
  double epsilon = 0.0;
};

enum class YLaw { Normal, StudentT };

struct PcaPayload {
  Matrix a;                 // ambient × latent
  YLaw law = YLaw::Normal;
  double df = 5.0;          // StudentT only
  numerics::SymMatrix r;    // latent covariance (normal) or shape (t)
};

struct ScenarioConfig {
  ScenarioId id = ScenarioId::Custom;
  std::string name;  // label used in reports
  Family family = Family::Pca;
  std::size_t true_k = 1;
  std::size_t m = 1;
  std::variant<MixturePayload, RegressionPayload, PcaPayload> payload;

  void validate() const;
  /// Complexity constants c_1..c_m for this family.
  std::vector<double> penalty_constants() const;
};

ScenarioConfig builtin_scenario(ScenarioId id);

/// Unit diagonal, `rho` off the diagonal.
numerics::SymMatrix equicorrelation(std::size_t dim, double rho);

Matrix sample_mvn(std::span<const double> mean, const numerics::SymMatrix& cov,
                  std::size_t n, rng::Stream& stream);

/// Rows Z / sqrt(W / df) with Z ~ N(0, shape) and W ~ χ²(df).
Matrix sample_mvt(double df, const numerics::SymMatrix& shape, std::size_t n,
                  rng::Stream& stream);

/// Mixture: rows are points. Regression: rows are (y, w_1..w_m).
/// Pca: rows are X = A·Y.
Matrix sample_scenario(const ScenarioConfig& cfg, std::size_t n, rng::Stream& stream);

/// A penalty family without constants, plus the stable label used in reports.
struct Criterion {
  std::string label;
  penalty::Kind kind = penalty::Kind::BIC;
  double alpha = 1.0;
  int beta = 1;
  std::optional<double> nu;  // set when alpha came from alpha_calibrate

  penalty::PenaltySpec with_constants(std::vector<double> constants) const;
};

Criterion aic();
Criterion bic();
Criterion hannan_quinn();
/// SWIC with alpha = alpha_calibrate(beta, nu), labelled swic:b<β>:v<ν>.
Criterion swic_calibrated(int beta, double nu);
/// SWIC with an explicit alpha, labelled swic:b<β>:a<α>.
Criterion swic(double alpha, int beta);
Criterion generalized_log_plus(double alpha, int beta);

/// AIC, BIC and SWIC(β, ν) for β ∈ {1, 2}, ν ∈ {10³, 10⁴}.
std::vector<Criterion> default_criteria();

/// Minimized risks for k = 1..cfg.m on one data set.
select::RiskProfile fit_profile(const ScenarioConfig& cfg, const Matrix& data,
                                const gmm::EmConfig& em);

struct ReportRow {
  std::string scenario;
  std::string criterion;
  std::size_t n = 0;
  std::size_t runs = 0;      // requested
  double avg = 0.0;          // over completed runs
  double prop = 0.0;
  std::size_t failures = 0;  // runs excluded because a fit failed
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::uint64_t seed = 0;
};

struct RunOptions {
  unsigned threads = 1;
  gmm::EmConfig em{};  // seed is overwritten per run
};

/// Replicated experiment. Each (n, run) draws from its own substream keyed
/// by (seed, scenario, n, run); every criterion is applied to the same
/// fitted risk profile. Output is independent of the thread count.
ExperimentReport run_experiment(const ScenarioConfig& cfg,
                                const std::vector<Criterion>& criteria,
                                const std::vector<std::size_t>& n_list,
                                std::size_t runs, std::uint64_t seed,
                                const RunOptions& opts = {});

/// Stable 64-bit tag for a scenario (builtin id, or a hash of the name).
std::uint64_t scenario_tag(const ScenarioConfig& cfg);

}  // namespace icsel::sim
