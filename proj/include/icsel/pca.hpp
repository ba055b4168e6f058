#pragma once

#include <vector>

#include "icsel/matrix.hpp"
#include "icsel/numerics.hpp"
#include "icsel/select.hpp"

namespace icsel::pca {

/// Uncentered (1/n) Σ x_i x_iᵀ.
struct SecondMoment {
  numerics::SymMatrix matrix;
  std::size_t n = 0;
  double trace = 0.0;
};

SecondMoment second_moment(const Matrix& data);

/// min_risks[k] = trace − (sum of the k largest eigenvalues), clipped at 0.
select::RiskProfile rank_risk_profile(const SecondMoment& sm, std::size_t m_max);

/// Empirical reconstruction risk (1/n) Σ ‖x − θθᵀx‖² for a given m×k basis.
double reconstruction_risk(const Matrix& data, const Matrix& basis);

/// c_k = k · ambient.
std::vector<double> pca_penalty_constants(std::size_t m_max, std::size_t ambient);

}  // namespace icsel::pca
