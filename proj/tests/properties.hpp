#pragma once

// Randomized invariant checks shared by the unit tests and the acceptance
// binary. Each suite runs `trials` independent cases and reports the first
// counterexample it meets.

#include <cstdint>
#include <string>

namespace props {

struct Summary {
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return trials > 0 && failures == 0; }
  void fail(std::string what) {
    if (failures++ == 0) first_failure = std::move(what);
  }
};

/// Average log-likelihood never drops between EM iterations (10⁻¹⁰ slack);
/// iterations whose M-step clipped a covariance are exempt.
Summary em_monotonicity(std::size_t trials, std::uint64_t seed);

/// fit_em_path min_avg_nll non-increasing in k, 10⁻⁶ slack, restarts = 10.
Summary gmm_nesting(std::size_t trials, std::uint64_t seed);

/// fit_subset min_risk non-increasing in k, 10⁻⁹ slack.
Summary svr_nesting(std::size_t trials, std::uint64_t seed);

/// rank_risk_profile non-increasing in k and zero at full rank.
Summary pca_nesting(std::size_t trials, std::uint64_t seed);

/// select picks the smallest index among exact score ties.
Summary selection_tie_break(std::size_t trials, std::uint64_t seed);

/// Adding a constant to every risk leaves the choice unchanged.
Summary selection_shift_invariance(std::size_t trials, std::uint64_t seed);

}  // namespace props
