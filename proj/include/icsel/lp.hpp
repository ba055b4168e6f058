#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "icsel/matrix.hpp"
#include "icsel/numerics.hpp"

namespace icsel::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Constraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct Bound {
  double lower = 0.0;
  double upper = kInf;

  static Bound free() { return {-kInf, kInf}; }
  static Bound boxed(double lo, double hi) { return {lo, hi}; }
};

/// minimize objective·x subject to the constraints and per-variable bounds.
/// An empty `bounds` means every variable is nonnegative.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<Bound> bounds;

  std::size_t num_vars() const { return objective.size(); }
  void validate() const;
};

enum class Status { Optimal, Infeasible, Unbounded };

std::string_view to_string(Status status);

struct LpSolution {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  /// Row multipliers: d(objective_value)/d(rhs_i) at the optimal basis.
  std::vector<double> duals;
  std::int64_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-8;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-10;
  std::int64_t max_iterations = 1'000'000;
};

/// Dense bounded-variable primal simplex, two phases, Bland's rule for both
/// the entering and the leaving choice. Free and boxed variables stay in the
/// tableau as single columns; bound flips are taken without a pivot.
class SimplexSolver {
 public:
  explicit SimplexSolver(SimplexOptions opts = {}) : opts_(opts) {}

  /// Throws numerics::NumericError when the iteration cap is hit and
  /// std::invalid_argument for a malformed program.
  LpSolution solve(const LinearProgram& lp);

 private:
  enum class Phase { One, Two };

  bool iterate(Phase phase);  // false on unbounded
  void pivot(std::size_t row, std::size_t col);
  void price(const std::vector<double>& cost);

  SimplexOptions opts_;
  std::size_t m_ = 0;  // rows
  std::size_t n_ = 0;  // all columns (structural + slack + artificial)
  std::size_t n_struct_ = 0;
  std::size_t first_artificial_ = 0;
  Matrix tab_;                    // B^{-1} A
  std::vector<double> lo_, up_;   // column bounds
  std::vector<double> x_;         // current value of every column
  std::vector<double> reduced_;   // reduced costs
  std::vector<long> basis_;       // column basic in each row
  std::vector<long> row_of_;      // row where a column is basic, or -1
  std::vector<std::size_t> unit_col_;   // column equal to sign·e_i at start
  std::vector<double> unit_sign_;
  std::int64_t iterations_ = 0;
};

/// Convenience wrapper around a fresh SimplexSolver.
LpSolution solve(const LinearProgram& lp, SimplexOptions opts = {});

}  // namespace icsel::lp
