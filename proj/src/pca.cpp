#include "icsel/pca.hpp"

#include <stdexcept>
#include <string>

namespace icsel::pca {

SecondMoment second_moment(const Matrix& data) {
  if (data.rows() == 0) throw std::invalid_argument("second_moment needs n >= 1");
  const std::size_t d = data.cols();
  Matrix acc(d, d);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto x = data.row(i);
    for (std::size_t a = 0; a < d; ++a) {
      const double xa = x[a];
      if (xa == 0.0) continue;
      for (std::size_t b = a; b < d; ++b) acc(a, b) += xa * x[b];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(data.rows());
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      acc(a, b) *= inv_n;
      acc(b, a) = acc(a, b);
    }
  }
  SecondMoment sm{numerics::SymMatrix(std::move(acc)), data.rows(), 0.0};
  sm.trace = sm.matrix.trace();
  return sm;
}

select::RiskProfile rank_risk_profile(const SecondMoment& sm, std::size_t m_max) {
  if (m_max < 1 || m_max > sm.matrix.dim()) {
    throw std::out_of_range("m_max " + std::to_string(m_max) + " outside [1, " +
                            std::to_string(sm.matrix.dim()) + "]");
  }
  const auto eig = numerics::jacobi_eigen(sm.matrix);
  select::RiskProfile out;
  out.n = static_cast<double>(sm.n);
  out.min_risks.resize(m_max);
  double captured = 0.0;
  for (std::size_t k = 0; k < m_max; ++k) {
    captured += eig.values[k];
    out.min_risks[k] = std::max(0.0, sm.trace - captured);
  }
  return out;
}

double reconstruction_risk(const Matrix& data, const Matrix& basis) {
  if (basis.rows() != data.cols()) {
    throw std::invalid_argument("basis rows must match the data dimension");
  }
  const std::size_t d = data.cols();
  const std::size_t k = basis.cols();
  std::vector<double> coef(k);
  double total = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto x = data.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < d; ++r) s += basis(r, c) * x[r];
      coef[c] = s;
    }
    for (std::size_t r = 0; r < d; ++r) {
      double proj = 0.0;
      for (std::size_t c = 0; c < k; ++c) proj += basis(r, c) * coef[c];
      const double e = x[r] - proj;
      total += e * e;
    }
  }
  return total / static_cast<double>(data.rows());
}

std::vector<double> pca_penalty_constants(std::size_t m_max, std::size_t ambient) {
  if (m_max > ambient) {
    throw std::invalid_argument("pca_penalty_constants requires m_max <= ambient");
  }
  std::vector<double> c(m_max);
  for (std::size_t k = 1; k <= m_max; ++k) {
    c[k - 1] = static_cast<double>(k * ambient);
  }
  return c;
}

}  // namespace icsel::pca
