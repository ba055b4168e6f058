#include "icsel/gmm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "icsel/rng.hpp"
#include "icsel/select.hpp"

namespace icsel::gmm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2π)

/// Per-component quantities for fast density evaluation.
struct Component {
  std::vector<double> mean;
  std::vector<double> inv_chol;  // L^{-1}, lower triangle packed by rows
  double log_norm;  // log π − ½(d log 2π + log det Σ)
};

Matrix invert_lower(const Matrix& l) {
  const std::size_t d = l.rows();
  Matrix inv(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    inv(c, c) = 1.0 / l(c, c);
    for (std::size_t r = c + 1; r < d; ++r) {
      double s = 0.0;
      for (std::size_t p = c; p < r; ++p) s -= l(r, p) * inv(p, c);
      inv(r, c) = s / l(r, r);
    }
  }
  return inv;
}

std::vector<Component> prepare(const GmmParams& p) {
  const std::size_t d = p.dim();
  std::vector<Component> comps;
  comps.reserve(p.order());
  for (std::size_t z = 0; z < p.order(); ++z) {
    const Matrix l = numerics::cholesky(p.covariances[z]);
    const double log_w =
        p.weights[z] > 0.0 ? std::log(p.weights[z]) : -std::numeric_limits<double>::infinity();
    const Matrix inv = invert_lower(l);
    std::vector<double> packed;
    packed.reserve(d * (d + 1) / 2);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b <= a; ++b) packed.push_back(inv(a, b));
    comps.push_back({p.means[z], std::move(packed),
                     log_w - 0.5 * (static_cast<double>(d) * kLog2Pi +
                                    numerics::log_det_from_cholesky(l))});
  }
  return comps;
}

/// Returns log Σ_z π_z φ_z(x) and leaves the posterior weights in `out`.
double component_logs(const std::vector<Component>& comps, std::span<const double> x,
                      std::span<double> out) {
  const std::size_t d = x.size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t z = 0; z < comps.size(); ++z) {
    const auto& c = comps[z];
    const double* li = c.inv_chol.data();
    const double* mu = c.mean.data();
    double q = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      double y = 0.0;
      for (std::size_t b = 0; b <= a; ++b) y += *li++ * (x[b] - mu[b]);
      q += y * y;
    }
    out[z] = c.log_norm - 0.5 * q;
    best = std::max(best, out[z]);
  }
  if (best == -std::numeric_limits<double>::infinity()) return best;
  double s = 0.0;
  for (std::size_t z = 0; z < comps.size(); ++z) {
    out[z] = std::exp(out[z] - best);
    s += out[z];
  }
  for (std::size_t z = 0; z < comps.size(); ++z) out[z] /= s;
  return best + std::log(s);
}

/// Eigenvalue clipping into [floor, ceiling]; reports whether anything moved.
numerics::SymMatrix clip_covariance(const numerics::SymMatrix& s, double floor,
                                    double ceiling, bool& clipped) {
  const auto eig = numerics::jacobi_eigen(s);
  bool moved = false;
  std::vector<double> vals = eig.values;
  for (double& v : vals) {
    const double c = std::clamp(v, floor, ceiling);
    if (c != v) moved = true;
    v = c;
  }
  if (!moved) return s;
  clipped = true;
  const std::size_t d = s.dim();
  Matrix out(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        acc += eig.vectors(a, j) * vals[j] * eig.vectors(b, j);
      out(a, b) = acc;
    }
  return numerics::SymMatrix(std::move(out));
}

/// Responsibility-weighted sums, taken around a fixed shift so the scatter
/// does not cancel badly when the data sit far from the origin.
struct Stats {
  std::size_t k = 0, d = 0;
  std::vector<double> mass;   // k
  std::vector<double> first;  // k × d
  std::vector<double> cross;  // k × d × d, lower triangle used

  Stats(std::size_t k_, std::size_t d_)
      : k(k_), d(d_), mass(k_, 0.0), first(k_ * d_, 0.0), cross(k_ * d_ * d_, 0.0) {}

  void add(std::span<const double> xc, std::span<const double> r) {
    for (std::size_t z = 0; z < k; ++z) {
      const double w = r[z];
      if (w == 0.0) continue;
      mass[z] += w;
      double* f = &first[z * d];
      double* c = &cross[z * d * d];
      for (std::size_t a = 0; a < d; ++a) {
        const double wa = w * xc[a];
        f[a] += wa;
        for (std::size_t b = 0; b <= a; ++b) c[a * d + b] += wa * xc[b];
      }
    }
  }
};

std::vector<double> column_means(const Matrix& data) {
  std::vector<double> mu(data.cols(), 0.0);
  for (std::size_t i = 0; i < data.rows(); ++i)
    for (std::size_t a = 0; a < data.cols(); ++a) mu[a] += data(i, a);
  for (double& v : mu) v /= static_cast<double>(data.rows());
  return mu;
}

/// M-step from accumulated statistics. Returns false when a component has
/// no mass.
bool m_step(const Stats& s, std::span<const double> shift, std::size_t n,
            const EmConfig& cfg, GmmParams& out, bool& clipped) {
  const std::size_t k = s.k;
  const std::size_t d = s.d;
  for (std::size_t z = 0; z < k; ++z) {
    if (!(s.mass[z] > 1e-10)) return false;
  }
  out.weights.assign(k, 0.0);
  out.means.assign(k, std::vector<double>(d));
  out.covariances.clear();
  std::vector<double> centred(d);
  for (std::size_t z = 0; z < k; ++z) {
    const double mz = s.mass[z];
    out.weights[z] = mz / static_cast<double>(n);
    for (std::size_t a = 0; a < d; ++a) {
      centred[a] = s.first[z * d + a] / mz;
      out.means[z][a] = shift[a] + centred[a];
    }
    Matrix cov(d, d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b <= a; ++b) {
        cov(a, b) = s.cross[z * d * d + a * d + b] / mz - centred[a] * centred[b];
        cov(b, a) = cov(a, b);
      }
    out.covariances.push_back(
        clip_covariance(numerics::SymMatrix(std::move(cov)), cfg.var_floor,
                        cfg.var_ceiling, clipped));
  }
  // Renormalize against rounding so the weights sit on the simplex.
  double total = 0.0;
  for (double w : out.weights) total += w;
  for (double& w : out.weights) w /= total;
  return true;
}

/// E-step fused with the next M-step's accumulation. Returns the average
/// log-likelihood at `params` (NaN if some point has zero density).
double e_step(const Matrix& data, std::span<const double> shift, const GmmParams& params,
              Stats& stats) {
  const auto comps = prepare(params);
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  const std::size_t k = params.order();
  std::vector<double> r(k), xc(d);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = data.row(i);
    const double lse = component_logs(comps, x, r);
    if (!std::isfinite(lse)) return std::numeric_limits<double>::quiet_NaN();
    total += lse;
    for (std::size_t a = 0; a < d; ++a) xc[a] = x[a] - shift[a];
    stats.add(xc, r);
  }
  return total / static_cast<double>(n);
}

}  // namespace

void GmmParams::validate() const {
  const std::size_t k = order();
  if (k == 0) throw std::invalid_argument("mixture has no components");
  if (means.size() != k || covariances.size() != k) {
    throw std::invalid_argument("mixture component counts disagree");
  }
  const std::size_t d = dim();
  double total = 0.0;
  for (std::size_t z = 0; z < k; ++z) {
    if (means[z].size() != d || covariances[z].dim() != d) {
      throw std::invalid_argument("mixture component dimensions disagree");
    }
    if (!(weights[z] >= 0.0)) throw std::invalid_argument("negative mixture weight");
    total += weights[z];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights do not sum to 1");
  }
}

void EmConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("EM restarts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("EM max_iters must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("EM tol must be positive");
  if (!(var_floor > 0.0) || !(var_floor < var_ceiling)) {
    throw std::invalid_argument("EM requires 0 < var_floor < var_ceiling");
  }
}

double log_density(const GmmParams& params, std::span<const double> x) {
  params.validate();
  if (x.size() != params.dim()) throw std::invalid_argument("point dimension mismatch");
  const auto comps = prepare(params);
  std::vector<double> scratch(params.order());
  return component_logs(comps, x, scratch);
}

namespace {

// EM from a given starting point. `run.params` holds the start; the first
// entry of avg_loglik is its likelihood.
void iterate_em(const Matrix& data, std::span<const double> shift, const EmConfig& cfg,
                EmRun& run) {
  const std::size_t k = run.params.order(), d = data.cols(), n = data.rows();
  try {
    for (int it = 0;; ++it) {
      Stats stats(k, d);
      const double ll = e_step(data, shift, run.params, stats);
      if (!std::isfinite(ll)) {
        run.failed = true;
        return;
      }
      run.avg_loglik.push_back(ll);
      const std::size_t t = run.avg_loglik.size();
      if (t >= 2 && std::abs(ll - run.avg_loglik[t - 2]) < cfg.tol) {
        run.converged = true;
        return;
      }
      if (it >= cfg.max_iters) return;
      GmmParams next;
      bool clipped = false;
      // A component with no mass ends the run at the last good parameters.
      if (!m_step(stats, shift, n, cfg, next, clipped)) return;
      run.params = std::move(next);
      run.clipped.push_back(clipped);
      run.iterations = it + 1;
    }
  } catch (const numerics::NumericError&) {
    run.failed = true;
  }
}

void check_fit_args(const Matrix& data, std::size_t k, const EmConfig& cfg) {
  cfg.validate();
  if (k < 1) throw std::invalid_argument("mixture order must be >= 1");
  if (data.cols() < 1) throw select::DataError("mixture data needs d >= 1");
  if (data.rows() <= k) {
    throw select::DataError("mixture fit needs n > k (n=" +
                            std::to_string(data.rows()) + ", k=" +
                            std::to_string(k) + ")");
  }
}

std::vector<EmRun> random_restarts(const Matrix& data, std::size_t k, const EmConfig& cfg) {
  const auto restarts = static_cast<std::size_t>(cfg.restarts);
  std::vector<EmRun> runs(restarts);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(restarts)));
  if (workers == 1) {
    for (std::size_t r = 0; r < restarts; ++r) runs[r] = run_em(data, k, cfg, r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r; (r = next.fetch_add(1)) < restarts;) {
          runs[r] = run_em(data, k, cfg, r);
        }
      });
    }
  }
  return runs;
}

std::size_t heaviest(const GmmParams& p) {
  return static_cast<std::size_t>(
      std::max_element(p.weights.begin(), p.weights.end()) - p.weights.begin());
}

// Component z duplicated at half weight: the same density with one more
// component.
GmmParams duplicate_component(const GmmParams& p, std::size_t z) {
  GmmParams out = p;
  out.weights[z] *= 0.5;
  out.weights.push_back(out.weights[z]);
  out.means.push_back(p.means[z]);
  out.covariances.push_back(p.covariances[z]);
  return out;
}

// Component z split along its main axis, means half a standard deviation
// either side.
GmmParams split_component(const GmmParams& p, std::size_t z) {
  GmmParams out = duplicate_component(p, z);
  const auto eig = numerics::jacobi_eigen(p.covariances[z]);
  const double step = 0.5 * std::sqrt(std::max(eig.values.front(), 0.0));
  for (std::size_t a = 0; a < p.dim(); ++a) {
    out.means[z][a] -= step * eig.vectors(a, 0);
    out.means.back()[a] += step * eig.vectors(a, 0);
  }
  return out;
}

// Best candidate by final likelihood, ties to the lower index.
GmmFit pick_best(std::vector<EmRun>& runs, std::size_t k) {
  GmmFit fit;
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].failed || runs[r].avg_loglik.empty()) {
      ++fit.failed_restarts;
      continue;
    }
    const double ll = runs[r].avg_loglik.back();
    if (!any || ll > best) {
      best = ll;
      fit.best_restart = r;
      any = true;
    }
  }
  if (!any) {
    throw numerics::NumericError("all " + std::to_string(runs.size()) +
                                 " EM restarts failed at k=" + std::to_string(k));
  }
  fit.params = std::move(runs[fit.best_restart].params);
  fit.min_avg_nll = -best;
  return fit;
}

}  // namespace

EmRun run_em(const Matrix& data, std::size_t k, const EmConfig& cfg,
             std::size_t restart) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  EmRun run;
  auto stream = rng::Stream::derive(cfg.seed, 0x656d, restart);
  const auto shift = column_means(data);

  // Forgy start: k distinct rows drawn as centres, every point assigned to
  // its nearest centre (ties to the lower index).
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t z = 0; z < k; ++z) {
    const auto j = z + static_cast<std::size_t>(stream.uniform() * static_cast<double>(n - z));
    std::swap(order[z], order[std::min(j, n - 1)]);
  }
  Stats stats(k, d);
  {
    std::vector<double> r(k, 0.0), xc(d);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = data.row(i);
      std::size_t nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t z = 0; z < k; ++z) {
        const auto c = data.row(order[z]);
        double dist = 0.0;
        for (std::size_t a = 0; a < d; ++a) dist += (x[a] - c[a]) * (x[a] - c[a]);
        if (dist < best) {
          best = dist;
          nearest = z;
        }
      }
      std::fill(r.begin(), r.end(), 0.0);
      r[nearest] = 1.0;
      for (std::size_t a = 0; a < d; ++a) xc[a] = x[a] - shift[a];
      stats.add(xc, r);
    }
  }

  try {
    bool clipped = false;
    if (!m_step(stats, shift, n, cfg, run.params, clipped)) {
      run.failed = true;
      return run;
    }
    run.clipped.push_back(clipped);
  } catch (const numerics::NumericError&) {
    run.failed = true;
    return run;
  }
  iterate_em(data, shift, cfg, run);
  return run;
}

GmmFit fit_em(const Matrix& data, std::size_t k, const EmConfig& cfg) {
  check_fit_args(data, k, cfg);
  auto runs = random_restarts(data, k, cfg);
  return pick_best(runs, k);
}

std::vector<GmmFit> fit_em_path(const Matrix& data, std::size_t m, const EmConfig& cfg) {
  check_fit_args(data, m, cfg);
  const auto shift = column_means(data);
  std::vector<GmmFit> path;
  for (std::size_t k = 1; k <= m; ++k) {
    auto runs = random_restarts(data, k, cfg);
    if (k > 1) {
      const GmmFit& prev = path.back();
      const std::size_t z = heaviest(prev.params);

      EmRun split;
      split.params = split_component(prev.params, z);
      iterate_em(data, shift, cfg, split);
      runs.push_back(std::move(split));

      EmRun same;
      same.params = duplicate_component(prev.params, z);
      same.avg_loglik.push_back(-prev.min_avg_nll);
      same.converged = true;
      runs.push_back(std::move(same));
    }
    path.push_back(pick_best(runs, k));
  }
  return path;
}

std::size_t component_params(std::size_t d) { return d + d * (d + 1) / 2; }

std::vector<double> mixture_penalty_constants(std::size_t m, std::size_t q) {
  if (m < 1 || q < 1) throw std::invalid_argument("mixture constants need m, q >= 1");
  std::vector<double> c(m);
  for (std::size_t k = 1; k <= m; ++k) c[k - 1] = static_cast<double>(k * (1 + q));
  return c;
}

}  // namespace icsel::gmm
