#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "icsel/gmm.hpp"
#include "icsel/rng.hpp"
#include "icsel/select.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace icsel;
using gmm::GmmParams;
using numerics::SymMatrix;

namespace {

Matrix two_clusters(rng::Stream& s, std::size_t n, double gap, double spread) {
  Matrix x(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = i % 2 ? gap : 0.0;
    x(i, 0) = c + spread * s.normal();
    x(i, 1) = c + spread * s.normal();
  }
  return x;
}

}  // namespace

TEST_CASE("log density of simple mixtures") {
  const GmmParams std2{{1.0}, {{0.0, 0.0}}, {SymMatrix::identity(2)}};
  const std::vector<double> origin{0.0, 0.0};
  CHECK(gmm::log_density(std2, origin) ==
        doctest::Approx(-std::log(2.0 * std::numbers::pi)).epsilon(1e-14));

  const GmmParams twin{{0.3, 0.7}, {{0.0, 0.0}, {0.0, 0.0}},
                       {SymMatrix::identity(2), SymMatrix::identity(2)}};
  const std::vector<double> x{0.4, -1.1};
  CHECK(gmm::log_density(twin, x) == doctest::Approx(gmm::log_density(std2, x)).epsilon(1e-14));

  const GmmParams pm{{0.5, 0.5}, {{-1.0}, {1.0}}, {SymMatrix{{1.0}}, SymMatrix{{1.0}}}};
  const double phi1 = -0.5 * std::log(2.0 * std::numbers::pi) - 0.5;
  CHECK(gmm::log_density(pm, std::vector<double>{0.0}) == doctest::Approx(phi1).epsilon(1e-14));
}

TEST_CASE("log density errors") {
  const GmmParams singular{{1.0}, {{0.0, 0.0}}, {SymMatrix{{1, 1}, {1, 1}}}};
  CHECK_THROWS_AS(gmm::log_density(singular, std::vector<double>{0, 0}),
                  numerics::NotPositiveDefinite);
  const GmmParams off_simplex{{0.6}, {{0.0}}, {SymMatrix{{1.0}}}};
  CHECK_THROWS(gmm::log_density(off_simplex, std::vector<double>{0}));
}

TEST_CASE("k = 1 matches the closed-form Gaussian fit") {
  auto s = rng::Stream::derive(61, 1);
  for (std::size_t d : {1u, 2u, 3u}) {
    Matrix x(200, d);
    for (auto& v : x.data()) v = 2.0 + 1.7 * s.normal();
    gmm::EmConfig cfg;
    cfg.seed = 5;
    const auto fit = gmm::fit_em(x, 1, cfg);
    CHECK(fit.min_avg_nll == doctest::Approx(oracle::gaussian_mle_nll(x)).epsilon(1e-8));
  }
}

TEST_CASE("duplicated rows leave the fit unchanged") {
  auto s = rng::Stream::derive(62, 1);
  const Matrix x = two_clusters(s, 60, 5.0, 0.5);
  Matrix twice(120, 2);
  for (std::size_t i = 0; i < 120; ++i)
    for (std::size_t a = 0; a < 2; ++a) twice(i, a) = x(i / 2, a);
  gmm::EmConfig cfg;
  cfg.seed = 9;
  for (std::size_t k : {1u, 2u}) {
    CHECK(gmm::fit_em(twice, k, cfg).min_avg_nll ==
          doctest::Approx(gmm::fit_em(x, k, cfg).min_avg_nll).epsilon(1e-6));
  }
}

TEST_CASE("separated clusters favour two components") {
  auto s = rng::Stream::derive(63, 1);
  const Matrix x = two_clusters(s, 200, 10.0, 0.3);
  gmm::EmConfig cfg;
  cfg.seed = 3;
  const auto one = gmm::fit_em(x, 1, cfg), two = gmm::fit_em(x, 2, cfg);
  CHECK(two.min_avg_nll < one.min_avg_nll - 1.0);
  two.params.validate();
}

TEST_CASE("fitted parameters respect the bounds") {
  auto s = rng::Stream::derive(64, 1);
  const Matrix x = two_clusters(s, 80, 3.0, 1.0);
  gmm::EmConfig cfg;
  cfg.seed = 4;
  cfg.var_floor = 0.5;
  cfg.var_ceiling = 2.0;
  const auto fit = gmm::fit_em(x, 3, cfg);
  double total = 0.0;
  for (double w : fit.params.weights) total += w;
  CHECK(std::abs(total - 1.0) <= 1e-12);
  for (const auto& c : fit.params.covariances) {
    for (double v : numerics::jacobi_eigen(c).values) {
      CHECK(v >= 0.5 - 1e-9);
      CHECK(v <= 2.0 + 1e-9);
    }
  }
}

TEST_CASE("relabelling components leaves the likelihood unchanged") {
  auto s = rng::Stream::derive(65, 1);
  const Matrix x = two_clusters(s, 100, 4.0, 1.0);
  gmm::EmConfig cfg;
  cfg.seed = 8;
  const auto fit = gmm::fit_em(x, 3, cfg);
  GmmParams perm = fit.params;
  std::swap(perm.weights[0], perm.weights[2]);
  std::swap(perm.means[0], perm.means[2]);
  std::swap(perm.covariances[0], perm.covariances[2]);
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    a += gmm::log_density(fit.params, x.row(i));
    b += gmm::log_density(perm, x.row(i));
  }
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
  CHECK(-a / 100.0 == doctest::Approx(fit.min_avg_nll).epsilon(1e-9));
}

TEST_CASE("fit_em is deterministic and schedule-independent") {
  auto s = rng::Stream::derive(66, 1);
  const Matrix x = two_clusters(s, 90, 3.0, 1.0);
  gmm::EmConfig cfg;
  cfg.seed = 12;
  const auto a = gmm::fit_em(x, 3, cfg);
  cfg.threads = 4;
  const auto b = gmm::fit_em(x, 3, cfg);
  CHECK(a.min_avg_nll == b.min_avg_nll);
  CHECK(a.best_restart == b.best_restart);
}

TEST_CASE("fit_em argument errors") {
  const Matrix tiny{{0.0}, {1.0}};
  gmm::EmConfig cfg;
  CHECK_THROWS_AS(gmm::fit_em(tiny, 2, cfg), select::DataError);
  cfg.var_floor = 2.0;
  cfg.var_ceiling = 1.0;
  CHECK_THROWS_AS(gmm::fit_em(Matrix{{0.0}, {1.0}, {2.0}}, 1, cfg), std::invalid_argument);
}

TEST_CASE("order path never does worse than independent fits") {
  auto s = rng::Stream::derive(67, 1);
  for (int t = 0; t < 5; ++t) {
    const Matrix x = two_clusters(s, 80, 3.0, 1.0);
    gmm::EmConfig cfg;
    cfg.seed = 20 + t;
    cfg.restarts = 3;
    const auto path = gmm::fit_em_path(x, 4, cfg);
    REQUIRE(path.size() == 4);
    CHECK(path[0].min_avg_nll == gmm::fit_em(x, 1, cfg).min_avg_nll);
    for (std::size_t k = 1; k <= 4; ++k) {
      CHECK(path[k - 1].params.order() == k);
      path[k - 1].params.validate();
      CHECK(path[k - 1].min_avg_nll <= gmm::fit_em(x, k, cfg).min_avg_nll);
      if (k > 1) CHECK(path[k - 1].min_avg_nll <= path[k - 2].min_avg_nll);
    }
  }
  CHECK_THROWS_AS(gmm::fit_em_path(Matrix{{0.0}, {1.0}}, 2, gmm::EmConfig{}), select::DataError);
}

TEST_CASE("duplicated fallback keeps the previous likelihood") {
  // One tight blob: extra components cannot help much, and the duplicated
  // order-1 fit has exactly the order-1 likelihood.
  auto s = rng::Stream::derive(68, 1);
  Matrix x(50, 1);
  for (auto& v : x.data()) v = s.normal();
  gmm::EmConfig cfg;
  cfg.restarts = 1;
  cfg.max_iters = 1;
  const auto path = gmm::fit_em_path(x, 2, cfg);
  CHECK(path[1].min_avg_nll <= path[0].min_avg_nll);
  if (path[1].best_restart == 2) {
    double ll = 0.0;
    for (std::size_t i = 0; i < 50; ++i) ll += gmm::log_density(path[1].params, x.row(i));
    CHECK(-ll / 50.0 == doctest::Approx(path[0].min_avg_nll).epsilon(1e-12));
  }
}

TEST_CASE("mixture penalty constants") {
  CHECK(gmm::mixture_penalty_constants(3, 5) == std::vector<double>{6, 12, 18});
  CHECK(gmm::mixture_penalty_constants(1, 1) == std::vector<double>{2});
  CHECK(gmm::mixture_penalty_constants(8, 5) ==
        std::vector<double>{6, 12, 18, 24, 30, 36, 42, 48});
  CHECK(gmm::component_params(2) == 5);
}

TEST_CASE("EM properties over randomized trials") {
  const auto mono = props::em_monotonicity(1000, 15);
  CHECK_MESSAGE(mono.ok(), mono.first_failure);
  const auto nest = props::gmm_nesting(1000, 16);
  CHECK_MESSAGE(nest.ok(), nest.first_failure);
}
