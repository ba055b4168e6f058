#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "icsel/matrix.hpp"
#include "icsel/numerics.hpp"

namespace icsel::gmm {

/// θ_k = (π_1..π_k, μ_1..μ_k, Σ_1..Σ_k) with full covariances.
struct GmmParams {
  std::vector<double> weights;
  std::vector<std::vector<double>> means;
  std::vector<numerics::SymMatrix> covariances;

  std::size_t order() const { return weights.size(); }
  std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }
  /// Shapes agree, weights on the simplex within 1e-12.
  void validate() const;
};

struct EmConfig {
  int restarts = 10;
  int max_iters = 500;
  double tol = 1e-8;  // absolute change in average log-likelihood
  double var_floor = 1e-6;
  double var_ceiling = 1e6;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // restarts run concurrently when > 1

  void validate() const;
};

/// log Σ_z π_z φ(x; μ_z, Σ_z), via log-sum-exp. Throws
/// numerics::NotPositiveDefinite for a singular covariance.
double log_density(const GmmParams& params, std::span<const double> x);

/// One EM restart. `avg_loglik` holds the average log-likelihood at the
/// start of each iteration; the last entry is at the returned parameters.
struct EmRun {
  GmmParams params;
  std::vector<double> avg_loglik;
  std::vector<bool> clipped;  // per M-step: an eigenvalue hit floor/ceiling
  int iterations = 0;
  bool converged = false;
  bool failed = false;
};

EmRun run_em(const Matrix& data, std::size_t k, const EmConfig& cfg,
             std::size_t restart);

struct GmmFit {
  GmmParams params;
  double min_avg_nll = 0.0;
  std::size_t best_restart = 0;
  std::size_t failed_restarts = 0;
};

/// Best of cfg.restarts EM runs by final likelihood (ties: lowest restart).
/// Throws select::DataError when n <= k and numerics::NumericError when no
/// restart survives.
GmmFit fit_em(const Matrix& data, std::size_t k, const EmConfig& cfg);

/// Fits orders 1..m in turn. Besides the random restarts, order k runs EM
/// from the order k−1 optimum with its heaviest component split in two, and
/// falls back to that optimum itself (the component duplicated at half
/// weight) when nothing beats it. min_avg_nll is therefore nonincreasing in
/// k. best_restart == cfg.restarts marks the split run, cfg.restarts + 1
/// the fallback.
std::vector<GmmFit> fit_em_path(const Matrix& data, std::size_t m, const EmConfig& cfg);

/// Free parameters of one full-covariance component in d dimensions:
/// d + d(d+1)/2 (5 for d = 2).
std::size_t component_params(std::size_t d);

/// c_k = k(1 + q).
std::vector<double> mixture_penalty_constants(std::size_t m, std::size_t q);

}  // namespace icsel::gmm
