#include "icsel/svr.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace icsel::svr {

void RegressionSample::validate() const {
  if (y.size() != w.rows()) {
    throw std::invalid_argument("regression sample: y has " +
                                std::to_string(y.size()) + " rows, w has " +
                                std::to_string(w.rows()));
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite response");
  }
  for (double v : w.data()) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite covariate");
  }
}

RegressionSample RegressionSample::from_rows(const Matrix& rows) {
  if (rows.cols() < 2) {
    throw std::invalid_argument("regression rows need a response and >= 1 covariate");
  }
  RegressionSample s;
  s.y.resize(rows.rows());
  s.w = Matrix(rows.rows(), rows.cols() - 1);
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    s.y[i] = rows(i, 0);
    for (std::size_t j = 1; j < rows.cols(); ++j) s.w(i, j - 1) = rows(i, j);
  }
  return s;
}

double eps_loss(double y, double epsilon) {
  return std::max(std::abs(y) - epsilon, 0.0);
}

double empirical_risk(const RegressionSample& data, std::span<const double> theta,
                      EpsilonLossSpec spec) {
  if (theta.size() > data.num_covariates()) {
    throw std::invalid_argument("theta longer than covariate count");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto wi = data.w.row(i);
    double r = data.y[i];
    for (std::size_t j = 0; j < theta.size(); ++j) r -= wi[j] * theta[j];
    total += eps_loss(r, spec.epsilon);
  }
  return total / static_cast<double>(data.size());
}

namespace {

void check_args(const RegressionSample& data, std::size_t k, EpsilonLossSpec spec) {
  data.validate();
  if (data.size() == 0) throw std::invalid_argument("empty regression sample");
  if (k < 1 || k > data.num_covariates()) {
    throw std::out_of_range("subset size " + std::to_string(k) +
                            " outside [1, " +
                            std::to_string(data.num_covariates()) + "]");
  }
  if (!(spec.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
}

}  // namespace

SubsetFit fit_subset(const RegressionSample& data, std::size_t k,
                     EpsilonLossSpec spec) {
  check_args(data, k, spec);
  const std::size_t n = data.size();
  const double eps = spec.epsilon;

  // Dual with multipliers scaled by n: a_i, b_i ∈ [0, 1],
  //   max Σ (y_i − ε) a_i − (y_i + ε) b_i   s.t.  Σ_i w_i^{(k)} (a_i − b_i) = 0.
  // Written as a minimization; the primal optimum is −value / n.
  lp::LinearProgram dual;
  dual.objective.resize(2 * n);
  dual.bounds.assign(2 * n, lp::Bound::boxed(0.0, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    dual.objective[i] = -(data.y[i] - eps);
    dual.objective[n + i] = data.y[i] + eps;
  }
  dual.constraints.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    auto& row = dual.constraints[j];
    row.relation = lp::Relation::Equal;
    row.rhs = 0.0;
    row.coeffs.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      row.coeffs[i] = data.w(i, j);
      row.coeffs[n + i] = -data.w(i, j);
    }
  }

  const auto sol = lp::solve(dual);
  if (sol.status != lp::Status::Optimal) {
    // d = 0 is always feasible and the box keeps the dual bounded.
    throw numerics::NumericError(std::string("svr dual LP ended ") +
                                 std::string(lp::to_string(sol.status)));
  }
  SubsetFit fit;
  fit.theta.resize(k);
  for (std::size_t j = 0; j < k; ++j) fit.theta[j] = -sol.duals[j];
  fit.min_risk = std::max(0.0, -sol.objective_value / static_cast<double>(n));
  fit.lp_iterations = sol.iterations;
  return fit;
}

lp::LinearProgram primal_lp(const RegressionSample& data, std::size_t k,
                            EpsilonLossSpec spec) {
  check_args(data, k, spec);
  const std::size_t n = data.size();
  lp::LinearProgram prog;
  prog.objective.assign(k + n, 0.0);
  prog.bounds.assign(k + n, lp::Bound{});
  for (std::size_t j = 0; j < k; ++j) prog.bounds[j] = lp::Bound::free();
  for (std::size_t i = 0; i < n; ++i) {
    prog.objective[k + i] = 1.0 / static_cast<double>(n);
    // u_i + w_i θ ≥ y_i − ε
    lp::Constraint upper{std::vector<double>(k + n, 0.0),
                         lp::Relation::GreaterEqual, data.y[i] - spec.epsilon};
    // u_i − w_i θ ≥ −y_i − ε
    lp::Constraint lower{std::vector<double>(k + n, 0.0),
                         lp::Relation::GreaterEqual, -data.y[i] - spec.epsilon};
    for (std::size_t j = 0; j < k; ++j) {
      upper.coeffs[j] = data.w(i, j);
      lower.coeffs[j] = -data.w(i, j);
    }
    upper.coeffs[k + i] = 1.0;
    lower.coeffs[k + i] = 1.0;
    prog.constraints.push_back(std::move(upper));
    prog.constraints.push_back(std::move(lower));
  }
  return prog;
}

double expected_risk_uniform_example(double theta) {
  if (!(theta >= -10.0 && theta <= 10.0)) {
    throw std::domain_error("expected_risk_uniform_example defined on [-10, 10]");
  }
  if (theta < -6.0) return -4.0 - theta;
  if (theta < -2.0) return (theta + 2.0) * (theta + 2.0) / 8.0;
  if (theta < 2.0) return 0.0;
  if (theta < 6.0) return (theta - 2.0) * (theta - 2.0) / 8.0;
  return theta - 4.0;
}

std::vector<double> svr_penalty_constants(std::size_t m) {
  std::vector<double> c(m);
  for (std::size_t k = 1; k <= m; ++k) c[k - 1] = static_cast<double>(k);
  return c;
}

}  // namespace icsel::svr
