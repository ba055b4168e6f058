#include "icsel/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace icsel::lp {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

void LinearProgram::validate() const {
  const std::size_t n = objective.size();
  if (n == 0) throw std::invalid_argument("LP has no variables");
  for (double c : objective) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite LP cost");
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& row = constraints[i];
    if (row.coeffs.size() != n) {
      throw std::invalid_argument("LP row " + std::to_string(i) +
                                  " has wrong length");
    }
    if (!std::isfinite(row.rhs)) {
      throw std::invalid_argument("LP row " + std::to_string(i) +
                                  " has non-finite rhs");
    }
    for (double a : row.coeffs) {
      if (!std::isfinite(a)) {
        throw std::invalid_argument("LP row " + std::to_string(i) +
                                    " has a non-finite coefficient");
      }
    }
  }
  if (!bounds.empty() && bounds.size() != n) {
    throw std::invalid_argument("LP bounds length differs from objective");
  }
  for (const auto& b : bounds) {
    if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower > b.upper ||
        b.lower == kInf || b.upper == -kInf) {
      throw std::invalid_argument("LP bound is empty or malformed");
    }
  }
}

void SimplexSolver::price(const std::vector<double>& cost) {
  reduced_ = cost;
  for (std::size_t i = 0; i < m_; ++i) {
    const double cb = cost[static_cast<std::size_t>(basis_[i])];
    if (cb == 0.0) continue;
    const auto row = tab_.row(i);
    for (std::size_t j = 0; j < n_; ++j) reduced_[j] -= cb * row[j];
  }
}

void SimplexSolver::pivot(std::size_t r, std::size_t c) {
  auto prow = tab_.row(r);
  const double inv = 1.0 / prow[c];
  for (double& v : prow) v *= inv;
  prow[c] = 1.0;
  for (std::size_t i = 0; i < m_; ++i) {
    if (i == r) continue;
    auto row = tab_.row(i);
    const double f = row[c];
    if (f == 0.0) continue;
    for (std::size_t j = 0; j < n_; ++j) row[j] -= f * prow[j];
    row[c] = 0.0;
  }
  const double f = reduced_[c];
  if (f != 0.0) {
    for (std::size_t j = 0; j < n_; ++j) reduced_[j] -= f * prow[j];
    reduced_[c] = 0.0;
  }
  row_of_[static_cast<std::size_t>(basis_[r])] = -1;
  basis_[r] = static_cast<long>(c);
  row_of_[c] = static_cast<long>(r);
}

bool SimplexSolver::iterate(Phase) {
  for (;;) {
    // Bland: first eligible column.
    long enter = -1;
    double dir = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (row_of_[j] >= 0 || lo_[j] == up_[j]) continue;
      const double d = reduced_[j];
      if (d < -opts_.optimality_tol && x_[j] < up_[j]) {
        enter = static_cast<long>(j);
        dir = 1.0;
        break;
      }
      if (d > opts_.optimality_tol && x_[j] > lo_[j]) {
        enter = static_cast<long>(j);
        dir = -1.0;
        break;
      }
    }
    if (enter < 0) return true;
    if (++iterations_ > opts_.max_iterations) {
      throw numerics::NumericError("simplex iteration cap exceeded");
    }
    const auto e = static_cast<std::size_t>(enter);

    double row_min = kInf;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = tab_(i, e);
      if (std::abs(a) <= opts_.pivot_tol) continue;
      const auto b = static_cast<std::size_t>(basis_[i]);
      const double rate = -dir * a;
      double lim;
      if (rate < 0.0) {
        if (lo_[b] == -kInf) continue;
        lim = (x_[b] - lo_[b]) / -rate;
      } else {
        if (up_[b] == kInf) continue;
        lim = (up_[b] - x_[b]) / rate;
      }
      row_min = std::min(row_min, std::max(lim, 0.0));
    }
    long leave = -1;
    if (row_min < kInf) {
      const double slack = 1e-12 * (1.0 + row_min);
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = tab_(i, e);
        if (std::abs(a) <= opts_.pivot_tol) continue;
        const auto b = static_cast<std::size_t>(basis_[i]);
        const double rate = -dir * a;
        double lim;
        if (rate < 0.0) {
          if (lo_[b] == -kInf) continue;
          lim = (x_[b] - lo_[b]) / -rate;
        } else {
          if (up_[b] == kInf) continue;
          lim = (up_[b] - x_[b]) / rate;
        }
        if (std::max(lim, 0.0) <= row_min + slack &&
            (leave < 0 || basis_[i] < basis_[static_cast<std::size_t>(leave)])) {
          leave = static_cast<long>(i);
        }
      }
    }
    const double flip = up_[e] - lo_[e];  // inf when either side is open
    if (flip == kInf && leave < 0) return false;

    if (flip <= row_min) {
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = tab_(i, e);
        if (a != 0.0) x_[static_cast<std::size_t>(basis_[i])] -= dir * a * flip;
      }
      x_[e] = dir > 0.0 ? up_[e] : lo_[e];
      continue;
    }

    const double t = row_min;
    const auto r = static_cast<std::size_t>(leave);
    const auto out = static_cast<std::size_t>(basis_[r]);
    const double out_rate = -dir * tab_(r, e);
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = tab_(i, e);
      if (a != 0.0) x_[static_cast<std::size_t>(basis_[i])] -= dir * a * t;
    }
    x_[out] = out_rate < 0.0 ? lo_[out] : up_[out];
    x_[e] += dir * t;
    pivot(r, e);
  }
}

LpSolution SimplexSolver::solve(const LinearProgram& lp) {
  lp.validate();
  const std::size_t m = lp.constraints.size();
  const std::size_t ns = lp.num_vars();

  std::size_t n_slack = 0;
  for (const auto& c : lp.constraints) {
    if (c.relation != Relation::Equal) ++n_slack;
  }
  m_ = m;
  n_struct_ = ns;
  first_artificial_ = ns + n_slack;
  n_ = first_artificial_ + m;
  iterations_ = 0;

  Matrix a(m, n_);
  lo_.assign(n_, 0.0);
  up_.assign(n_, kInf);
  x_.assign(n_, 0.0);
  basis_.assign(m, -1);
  row_of_.assign(n_, -1);
  unit_col_.assign(m, 0);
  unit_sign_.assign(m, 1.0);

  for (std::size_t j = 0; j < ns; ++j) {
    if (!lp.bounds.empty()) {
      lo_[j] = lp.bounds[j].lower;
      up_[j] = lp.bounds[j].upper;
    }
    if (lo_[j] > -kInf) {
      x_[j] = lo_[j];
    } else if (up_[j] < kInf) {
      x_[j] = up_[j];
    }
  }

  std::vector<double> rhs(m);
  double rhs_scale = 0.0;
  std::size_t slack = ns;
  std::vector<double> phase1_cost(n_, 0.0);
  double initial_infeasibility = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& con = lp.constraints[i];
    rhs[i] = con.rhs;
    rhs_scale = std::max(rhs_scale, std::abs(con.rhs));
    double resid = con.rhs;
    for (std::size_t j = 0; j < ns; ++j) {
      a(i, j) = con.coeffs[j];
      resid -= con.coeffs[j] * x_[j];
    }
    const std::size_t art = first_artificial_ + i;
    bool slack_basic = false;
    if (con.relation != Relation::Equal) {
      const double s_sign = con.relation == Relation::LessEqual ? 1.0 : -1.0;
      a(i, slack) = s_sign;
      if (resid * s_sign >= 0.0) {
        unit_col_[i] = slack;
        unit_sign_[i] = s_sign;
        x_[slack] = resid * s_sign;
        slack_basic = true;
      }
      ++slack;
    }
    if (slack_basic) {
      a(i, art) = 1.0;
      up_[art] = 0.0;
    } else {
      const double sigma = resid >= 0.0 ? 1.0 : -1.0;
      a(i, art) = sigma;
      unit_col_[i] = art;
      unit_sign_[i] = sigma;
      x_[art] = std::abs(resid);
      phase1_cost[art] = 1.0;
      initial_infeasibility += std::abs(resid);
    }
    basis_[i] = static_cast<long>(unit_col_[i]);
    row_of_[unit_col_[i]] = static_cast<long>(i);
  }

  tab_ = Matrix(m, n_);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = unit_sign_[i];
    for (std::size_t j = 0; j < n_; ++j) tab_(i, j) = a(i, j) / s;
  }

  // Basic values from scratch: x_B = B^{-1}(b − N x_N), with B^{-1} read off
  // the columns that started as ±e_i.
  auto refresh_basics = [&] {
    std::vector<double> r(rhs);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (row_of_[j] < 0 && x_[j] != 0.0) r[i] -= a(i, j) * x_[j];
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      double v = 0.0;
      for (std::size_t p = 0; p < m; ++p) {
        v += tab_(i, unit_col_[p]) / unit_sign_[p] * r[p];
      }
      x_[static_cast<std::size_t>(basis_[i])] = v;
    }
  };

  LpSolution sol;
  const double feas = opts_.feasibility_tol * (1.0 + rhs_scale);

  // Artificials already at zero form a feasible (degenerate) basis.
  if (initial_infeasibility > feas) {
    price(phase1_cost);
    iterate(Phase::One);
    refresh_basics();
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i) infeas += x_[first_artificial_ + i];
    if (infeas > feas) {
      sol.status = Status::Infeasible;
      sol.iterations = iterations_;
      return sol;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t art = first_artificial_ + i;
    up_[art] = 0.0;
    if (row_of_[art] < 0) x_[art] = 0.0;
  }

  std::vector<double> cost(n_, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), cost.begin());
  price(cost);
  const bool bounded = iterate(Phase::Two);
  sol.iterations = iterations_;
  if (!bounded) {
    sol.status = Status::Unbounded;
    return sol;
  }
  refresh_basics();

  sol.status = Status::Optimal;
  sol.x.assign(x_.begin(), x_.begin() + static_cast<long>(ns));
  sol.objective_value = 0.0;
  for (std::size_t j = 0; j < ns; ++j) sol.objective_value += cost[j] * sol.x[j];
  sol.duals.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t u = unit_col_[i];
    sol.duals[i] = (cost[u] - reduced_[u]) / unit_sign_[i];
  }
  return sol;
}

LpSolution solve(const LinearProgram& lp, SimplexOptions opts) {
  SimplexSolver solver(opts);
  return solver.solve(lp);
}

}  // namespace icsel::lp
