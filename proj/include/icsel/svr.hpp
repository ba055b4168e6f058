#pragma once

#include <span>
#include <vector>

#include "icsel/lp.hpp"
#include "icsel/matrix.hpp"

namespace icsel::svr {

/// Responses y and covariates w (one row per observation). Hypothesis k uses
/// the first k columns of w.
struct RegressionSample {
  std::vector<double> y;
  Matrix w;

  std::size_t size() const { return y.size(); }
  std::size_t num_covariates() const { return w.cols(); }
  void validate() const;

  /// Splits rows laid out as (y, w_1, ..., w_m).
  static RegressionSample from_rows(const Matrix& rows);
};

struct EpsilonLossSpec {
  double epsilon = 0.0;
};

/// (|y| − ε)_+
double eps_loss(double y, double epsilon);

/// (1/n) Σ (|y_i − w_i^{(k)}·θ| − ε)_+ with k = theta.size().
double empirical_risk(const RegressionSample& data, std::span<const double> theta,
                      EpsilonLossSpec spec);

struct SubsetFit {
  std::vector<double> theta;
  double min_risk = 0.0;
  std::int64_t lp_iterations = 0;
};

/// Exact minimizer of the ε-insensitive L1 empirical risk over the first k
/// covariates. Solved through the LP dual (k equality rows, 2n boxed
/// columns); θ is recovered from the row multipliers.
SubsetFit fit_subset(const RegressionSample& data, std::size_t k,
                     EpsilonLossSpec spec);

/// The textbook primal LP: θ free, u ≥ 0, minimize (1/n)Σu subject to
/// u_i ≥ ±(y_i − w_i θ) − ε. Variables are ordered (θ_1..θ_k, u_1..u_n).
/// Large for big n; used as an independent route in tests.
lp::LinearProgram primal_lp(const RegressionSample& data, std::size_t k,
                            EpsilonLossSpec spec);

/// Closed-form expected risk r_1(θ) for Y ~ Uniform[−2, 2], ε = 4, w = 1.
/// Defined on [−10, 10]; throws std::domain_error elsewhere.
double expected_risk_uniform_example(double theta);

/// c_k = k.
std::vector<double> svr_penalty_constants(std::size_t m);

}  // namespace icsel::svr
