#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these share code with the library routines they check.

#include <optional>
#include <string>
#include <vector>

#include "icsel/lp.hpp"
#include "icsel/matrix.hpp"
#include "icsel/numerics.hpp"
#include "icsel/rng.hpp"
#include "icsel/svr.hpp"

namespace oracle {

/// Best vertex of a bounded LP found by trying every choice of num_vars
/// active constraints (rows or finite bounds). nullopt when no vertex is
/// feasible. Requires every variable to have finite bounds.
std::optional<double> lp_vertex_enumeration(const icsel::lp::LinearProgram& lp,
                                            double feas_tol = 1e-9);

/// Coefficients of det(λI − A), highest degree first (Faddeev–LeVerrier).
std::vector<double> characteristic_polynomial(const icsel::Matrix& a);

/// Real roots of the characteristic polynomial of a symmetric matrix, found
/// by scanning for sign changes inside the Gershgorin interval and bisecting.
/// Descending order. Returns fewer than d roots if two are closer than the
/// scan can separate.
std::vector<double> eigenvalues_by_bisection(const icsel::Matrix& sym);

/// Minimum of the ε-insensitive empirical risk over the grid
/// {lo, lo+step, ..., hi}^k for k ∈ {1, 2}.
double svr_grid_min(const icsel::svr::RegressionSample& data, std::size_t k, double eps,
                    double lo, double hi, double step);

/// Gaussian MLE average negative log-likelihood: ½(d log 2π + log det Σ̂ + d).
double gaussian_mle_nll(const icsel::Matrix& data);

/// A random bounded LP with ≤ max_vars variables and ≤ max_rows rows.
icsel::lp::LinearProgram random_bounded_lp(icsel::rng::Stream& s, std::size_t max_vars,
                                           std::size_t max_rows);

/// A random symmetric d×d matrix with entries in [−1, 1].
icsel::Matrix random_symmetric(icsel::rng::Stream& s, std::size_t d);

}  // namespace oracle
