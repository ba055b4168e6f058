#include "icsel/select.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace icsel::select {

void RiskProfile::validate() const {
  if (min_risks.empty()) throw DataError("risk profile is empty");
  for (std::size_t i = 0; i < min_risks.size(); ++i) {
    if (!std::isfinite(min_risks[i])) {
      throw DataError("non-finite minimized risk at k=" + std::to_string(i + 1));
    }
  }
}

SelectionResult select_with_penalties(const RiskProfile& profile,
                                      const std::vector<double>& penalties) {
  profile.validate();
  if (penalties.size() != profile.size()) {
    throw std::invalid_argument("risk profile has " +
                                std::to_string(profile.size()) +
                                " entries but " + std::to_string(penalties.size()) +
                                " penalties were supplied");
  }
  SelectionResult out;
  out.penalties = penalties;
  out.scores.resize(profile.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out.scores[i] = profile.min_risks[i] + penalties[i];
    if (out.scores[i] < out.scores[best]) best = i;
  }
  out.chosen_k = best + 1;
  return out;
}

SelectionResult select(const RiskProfile& profile, const penalty::PenaltySpec& spec) {
  profile.validate();
  if (spec.size() != profile.size()) {
    throw std::invalid_argument("risk profile has " +
                                std::to_string(profile.size()) +
                                " entries but the penalty has " +
                                std::to_string(spec.size()) + " constants");
  }
  return select_with_penalties(profile, penalty::penalty_values(spec, profile.n));
}

RiskProfile sweep(const RiskFitter& fitter, const Matrix& data, std::size_t m,
                  unsigned threads) {
  if (m < 1) throw std::invalid_argument("sweep needs m >= 1");
  RiskProfile out;
  out.n = static_cast<double>(data.rows());
  out.min_risks.assign(m, 0.0);
  std::vector<std::exception_ptr> errors(m);

  auto run = [&](std::size_t idx) {
    try {
      out.min_risks[idx] = fitter(data, idx + 1);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(m)));
  if (workers == 1) {
    for (std::size_t i = 0; i < m; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < m;) run(i);
      });
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw FitError(i + 1, e.what());
    } catch (...) {
      throw FitError(i + 1, "unknown error");
    }
  }
  return out;
}

}  // namespace icsel::select
