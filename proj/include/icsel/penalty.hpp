#pragma once

#include <string_view>
#include <vector>

namespace icsel::penalty {

enum class Kind { AIC, BIC, HannanQuinn, SWIC, GeneralizedLogPlus };

std::string_view to_string(Kind kind);

/// A penalty family P_{k,n}. `constants` holds c_1 < ... < c_m; hypotheses
/// are indexed from 1 in the public API.
struct PenaltySpec {
  Kind kind = Kind::BIC;
  double alpha = 1.0;
  int beta = 1;
  std::vector<double> constants;

  /// Throws std::invalid_argument unless constants are positive and strictly
  /// increasing, alpha > 0 and beta >= 1.
  void validate() const;
  std::size_t size() const { return constants.size(); }
};

PenaltySpec make_aic(std::vector<double> constants);
PenaltySpec make_bic(std::vector<double> constants);
PenaltySpec make_hannan_quinn(std::vector<double> constants);
PenaltySpec make_swic(double alpha, int beta, std::vector<double> constants);
PenaltySpec make_generalized_log_plus(double alpha, int beta,
                                      std::vector<double> constants);

/// max{1, log x}. Throws std::domain_error for x <= 0.
double log_plus(double x);

/// log_plus applied `beta` times.
double log_plus_iter(double n, int beta);

/// P_{k,n} for 1 <= k <= m. Throws std::out_of_range for a bad k and
/// std::domain_error for n < 1.
double penalty_value(const PenaltySpec& spec, std::size_t k, double n);

/// All m penalties at sample size n, index 0 holding P_{1,n}.
std::vector<double> penalty_values(const PenaltySpec& spec, double n);

/// The SWIC scale that equates an order-beta SWIC with the BIC at n = nu.
double alpha_calibrate(int beta, double nu);

enum class GapScaling { SqrtN, N, SqrtNOverLogLog };
enum class GapVerdict { Diverging, Vanishing, Inconclusive };

std::string_view to_string(GapScaling scaling);
std::string_view to_string(GapVerdict verdict);

struct GapSample {
  double n;
  double scaled_gap;
};

struct PenaltyGapDiagnostic {
  GapScaling scaling;
  std::size_t k;
  std::size_t l;
  std::vector<GapSample> samples;
  GapVerdict verdict;
};

// Numeric stand-in for the limit of s(n)·(P_{l,n} − P_{k,n}) along a grid:
// Diverging when the scaled gaps strictly increase and end above twice the
// first value, Vanishing when they strictly decrease and end below half of
// it, Inconclusive otherwise. Heuristic; meant for tests and diagnostics.
PenaltyGapDiagnostic diagnose_gap(const PenaltySpec& spec, std::size_t k,
                                  std::size_t l, GapScaling scaling,
                                  const std::vector<double>& n_grid);

}  // namespace icsel::penalty
