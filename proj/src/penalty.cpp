#include "icsel/penalty.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace icsel::penalty {

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::AIC: return "aic";
    case Kind::BIC: return "bic";
    case Kind::HannanQuinn: return "hq";
    case Kind::SWIC: return "swic";
    case Kind::GeneralizedLogPlus: return "glp";
  }
  return "?";
}

std::string_view to_string(GapScaling scaling) {
  switch (scaling) {
    case GapScaling::SqrtN: return "sqrt_n";
    case GapScaling::N: return "n";
    case GapScaling::SqrtNOverLogLog: return "sqrt_n_over_loglog";
  }
  return "?";
}

std::string_view to_string(GapVerdict verdict) {
  switch (verdict) {
    case GapVerdict::Diverging: return "diverging";
    case GapVerdict::Vanishing: return "vanishing";
    case GapVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

void PenaltySpec::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("penalty alpha must be positive and finite");
  }
  if (beta < 1) {
    throw std::invalid_argument("penalty beta must be >= 1");
  }
  if (constants.empty()) {
    throw std::invalid_argument("penalty needs at least one constant");
  }
  for (std::size_t i = 0; i < constants.size(); ++i) {
    if (!(constants[i] > 0.0) || !std::isfinite(constants[i])) {
      throw std::invalid_argument("penalty constants must be positive");
    }
    if (i > 0 && !(constants[i] > constants[i - 1])) {
      throw std::invalid_argument(
          "penalty constants must be strictly increasing (index " +
          std::to_string(i + 1) + ")");
    }
  }
}

namespace {

PenaltySpec make(Kind kind, double alpha, int beta, std::vector<double> c) {
  PenaltySpec spec{kind, alpha, beta, std::move(c)};
  spec.validate();
  return spec;
}

}  // namespace

PenaltySpec make_aic(std::vector<double> constants) {
  return make(Kind::AIC, 1.0, 1, std::move(constants));
}
PenaltySpec make_bic(std::vector<double> constants) {
  return make(Kind::BIC, 1.0, 1, std::move(constants));
}
PenaltySpec make_hannan_quinn(std::vector<double> constants) {
  return make(Kind::HannanQuinn, 1.0, 2, std::move(constants));
}
PenaltySpec make_swic(double alpha, int beta, std::vector<double> constants) {
  return make(Kind::SWIC, alpha, beta, std::move(constants));
}
PenaltySpec make_generalized_log_plus(double alpha, int beta,
                                      std::vector<double> constants) {
  return make(Kind::GeneralizedLogPlus, alpha, beta, std::move(constants));
}

double log_plus(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("log_plus requires x > 0");
  }
  return std::max(1.0, std::log(x));
}

double log_plus_iter(double n, int beta) {
  if (beta < 1) {
    throw std::domain_error("log_plus_iter requires beta >= 1");
  }
  double v = n;
  for (int i = 0; i < beta; ++i) {
    v = log_plus(v);
  }
  return v;
}

double penalty_value(const PenaltySpec& spec, std::size_t k, double n) {
  if (k < 1 || k > spec.constants.size()) {
    throw std::out_of_range("hypothesis index " + std::to_string(k) +
                            " outside [1, " +
                            std::to_string(spec.constants.size()) + "]");
  }
  if (!(n >= 1.0)) {
    throw std::domain_error("penalty_value requires n >= 1");
  }
  const double c = spec.constants[k - 1];
  switch (spec.kind) {
    case Kind::AIC:
      return c / n;
    case Kind::BIC:
      // log 1 = 0 would give a zero penalty; B1 asks for positivity, so
      // n = 1 falls back to log_plus.
      return c * (n > 1.0 ? std::log(n) : log_plus(n)) / (2.0 * n);
    case Kind::HannanQuinn:
      return c * log_plus_iter(n, 2) / (2.0 * n);
    case Kind::SWIC:
      return spec.alpha * c * std::sqrt(log_plus_iter(n, spec.beta) / n);
    case Kind::GeneralizedLogPlus:
      return spec.alpha * c * log_plus_iter(n, spec.beta) / n;
  }
  throw std::logic_error("unknown penalty kind");
}

std::vector<double> penalty_values(const PenaltySpec& spec, double n) {
  std::vector<double> out(spec.constants.size());
  for (std::size_t k = 1; k <= out.size(); ++k) {
    out[k - 1] = penalty_value(spec, k, n);
  }
  return out;
}

double alpha_calibrate(int beta, double nu) {
  if (!(nu >= 2.0)) {
    throw std::domain_error("alpha_calibrate requires nu >= 2");
  }
  return std::log(nu) / (2.0 * std::sqrt(nu * log_plus_iter(nu, beta)));
}

PenaltyGapDiagnostic diagnose_gap(const PenaltySpec& spec, std::size_t k,
                                  std::size_t l, GapScaling scaling,
                                  const std::vector<double>& n_grid) {
  if (k >= l) {
    throw std::invalid_argument("diagnose_gap requires k < l");
  }
  if (n_grid.size() < 4) {
    throw std::invalid_argument("diagnose_gap needs at least 4 grid points");
  }
  PenaltyGapDiagnostic out{scaling, k, l, {}, GapVerdict::Inconclusive};
  out.samples.reserve(n_grid.size());
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const double n = n_grid[i];
    if (i > 0 && !(n > n_grid[i - 1])) {
      throw std::invalid_argument("n_grid must be strictly increasing");
    }
    const double gap = penalty_value(spec, l, n) - penalty_value(spec, k, n);
    double scale = 0.0;
    switch (scaling) {
      case GapScaling::SqrtN: scale = std::sqrt(n); break;
      case GapScaling::N: scale = n; break;
      case GapScaling::SqrtNOverLogLog:
        scale = std::sqrt(n / log_plus_iter(n, 2));
        break;
    }
    out.samples.push_back({n, scale * gap});
  }

  bool increasing = true;
  bool decreasing = true;
  for (std::size_t i = 1; i < out.samples.size(); ++i) {
    const double prev = out.samples[i - 1].scaled_gap;
    const double cur = out.samples[i].scaled_gap;
    increasing = increasing && cur > prev;
    decreasing = decreasing && cur < prev;
  }
  const double first = out.samples.front().scaled_gap;
  const double last = out.samples.back().scaled_gap;
  if (increasing && last > 2.0 * first) {
    out.verdict = GapVerdict::Diverging;
  } else if (decreasing && last >= 0.0 && last < 0.5 * first) {
    out.verdict = GapVerdict::Vanishing;
  }
  return out;
}

}  // namespace icsel::penalty
