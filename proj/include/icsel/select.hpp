#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "icsel/matrix.hpp"
#include "icsel/penalty.hpp"

namespace icsel::select {

/// min_θ R_{k,n}(θ) for k = 1..m (index 0 holds k = 1).
struct RiskProfile {
  std::vector<double> min_risks;
  double n = 0.0;

  std::size_t size() const { return min_risks.size(); }
  void validate() const;
};

struct SelectionResult {
  std::size_t chosen_k = 0;  // 1-based
  std::vector<double> scores;
  std::vector<double> penalties;
};

class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by sweep when the fitter fails; `k()` is the failing order.
class FitError : public std::runtime_error {
 public:
  FitError(std::size_t k, const std::string& what)
      : std::runtime_error("fit failed at k=" + std::to_string(k) + ": " + what),
        k_(k) {}
  std::size_t k() const { return k_; }

 private:
  std::size_t k_;
};

/// argmin over precomputed penalties; exact comparison, lowest index wins.
SelectionResult select_with_penalties(const RiskProfile& profile,
                                      const std::vector<double>& penalties);

/// K̂_n = min argmin_k { min_risks[k] + P_{k,n} }.
SelectionResult select(const RiskProfile& profile, const penalty::PenaltySpec& spec);

/// Returns the minimized empirical risk at order k (1-based). Must be safe to
/// call concurrently on the same read-only data.
using RiskFitter = std::function<double(const Matrix& data, std::size_t k)>;

/// Evaluates the fitter at k = 1..m, optionally on `threads` workers.
/// Results land in index order whatever the schedule.
RiskProfile sweep(const RiskFitter& fitter, const Matrix& data, std::size_t m,
                  unsigned threads = 1);

}  // namespace icsel::select
