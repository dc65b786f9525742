#include <doctest.h>

#include <cmath>
#include <random>

#include "deming/deming_ls.hpp"
#include "deming/error.hpp"
#include "oracles.hpp"

using namespace deming;

namespace {

Dataset points(std::initializer_list<std::pair<double, double>> xy, double vx = 1.0, double vy = 1.0) {
  std::vector<Observation> obs;
  for (auto [x, y] : xy) obs.push_back({x, y, vx, vy, 1.0});
  return Dataset(obs);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Dataset swap_xy(const Dataset& ds) {
  std::vector<Observation> obs;
  for (const auto& o : ds) obs.push_back({o.y, o.x, o.var_y, o.var_x, o.weight});
  return Dataset(obs);
}

}  // namespace

TEST_CASE("collinear points give the exact line for any lambda") {
  const auto ds = points({{0, 1}, {1, 3}, {2, 5}});
  for (double lambda : {1e-3, 0.25, 1.0, 4.0, 1e3}) {
    const auto f = fit_simple_deming(ds, lambda);
    CHECK(f.beta0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.beta1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.residual_sd == doctest::Approx(0.0));
    CHECK(f.scenario == Scenario::A);
  }
}

TEST_CASE("three point simple Deming against joint minimization") {
  const auto ds = points({{0, 0}, {1, 2}, {2, 3}});
  const auto f = fit_simple_deming(ds, 1.0);
  CHECK(f.beta1 == doctest::Approx(1.5388).epsilon(1e-4));
  CHECK(f.beta0 == doctest::Approx(0.1279).epsilon(1e-3));
  const auto o = oracle::minimize_simple_ss(ds, 1.0);
  CHECK(std::abs(f.beta1 - o.beta1) < 1e-6);
  CHECK(std::abs(f.beta0 - o.beta0) < 1e-6);
}

TEST_CASE("tiny lambda recovers ordinary least squares") {
  const auto ds = points({{0, 0}, {1, 2}, {2, 3}});
  CHECK(rel(fit_simple_deming(ds, 1e-8).beta1, 1.5) < 1e-4);
}

TEST_CASE("lambda limits on random data") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto ds = oracle::random_dataset(rng, 8, 0.1, 0.1, 0.5);
    std::vector<double> x, y;
    for (const auto& o : ds) {
      x.push_back(o.x);
      y.push_back(o.y);
    }
    const auto s = summarize(ds);
    CHECK(rel(fit_simple_deming(ds, 1e-8).beta1, oracle::ols(x, y).second) < 1e-4);
    CHECK(rel(fit_simple_deming(ds, 1e8).beta1, s.q / s.p) < 1e-4);
  }
}

TEST_CASE("simple Deming degenerate inputs") {
  CHECK_THROWS_AS(fit_simple_deming(points({{1, 0}, {1, 2}, {1, 3}})), Error);
  // Zero cross-product: p = 0.
  CHECK_THROWS_AS(fit_simple_deming(points({{0, 1}, {1, 0}, {2, 1}})), Error);
  CHECK_THROWS_AS(fit_simple_deming(points({{0, 1}, {1, 3}, {2, 5}}), 0.0), Error);
}

TEST_CASE("estimated true values") {
  DemingFit f;
  f.beta0 = 0.0;
  f.beta1 = 1.0;
  f.lambda = 1.0;
  const auto ds = points({{1, 3}, {0, 0}, {2, 2}});
  const auto t = estimate_true_values(ds, f);
  CHECK(t.X_hat[0] == doctest::Approx(2.0));
  CHECK(t.Y_hat[0] == doctest::Approx(2.0));
  CHECK(t.d[1] == 0.0);
  CHECK(t.X_hat[1] == 0.0);
  CHECK(t.Y_hat[1] == 0.0);

  std::mt19937_64 rng(9);
  const auto r = oracle::random_dataset(rng, 7, 0.1, 0.1, 0.5);
  const auto fit = fit_simple_deming(r, 2.5);
  const auto tv = estimate_true_values(r, fit);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(tv.Y_hat[i] == doctest::Approx(fit.beta0 + fit.beta1 * tv.X_hat[i]).epsilon(1e-12));
  }
}

TEST_CASE("swap symmetry gives reciprocal slopes") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const auto ds = oracle::random_dataset(rng, 6, 0.1, 0.1, 0.3);
    for (double lambda : {0.25, 1.0, 4.0}) {
      const double a = fit_simple_deming(ds, lambda).beta1;
      const double b = fit_simple_deming(swap_xy(ds), 1.0 / lambda).beta1;
      CHECK(rel(a * b, 1.0) < 1e-10);
    }
  }
}

TEST_CASE("scale equivariance of the slope") {
  std::mt19937_64 rng(22);
  const auto ds = oracle::random_dataset(rng, 7, 0.1, 0.1, 0.3);
  for (auto [a, b] : {std::pair{2.0, 5.0}, {0.1, 3.0}, {7.0, 0.5}}) {
    std::vector<Observation> obs;
    for (const auto& o : ds) obs.push_back({a * o.x, b * o.y, 1, 1, 1});
    const double lambda = 1.7;
    // lambda is the x-error to y-error variance ratio, so it scales by a^2 / b^2.
    const double s = fit_simple_deming(Dataset(obs), lambda * a * a / (b * b)).beta1;
    CHECK(rel(s, fit_simple_deming(ds, lambda).beta1 * b / a) < 1e-10);
  }
}

TEST_CASE("jackknife covariance is positive definite") {
  std::mt19937_64 rng(23);
  const auto ds = oracle::random_dataset(rng, 10, 0.1, 0.1, 0.4);
  const auto f = fit_simple_deming(ds, 1.0);
  CHECK(f.cov_method == CovMethod::jackknife);
  CHECK(f.cov_params.b00 > 0);
  CHECK(f.cov_params.b11 > 0);
  CHECK(f.cov_params.b00 * f.cov_params.b11 > f.cov_params.b01 * f.cov_params.b01);
}

TEST_CASE("generalized Deming fits collinear data exactly") {
  std::vector<Observation> obs{{0, 1, 0.2, 0.1, 1}, {1, 3, 0.5, 0.3, 1}, {2, 5, 0.1, 0.4, 1}, {4, 9, 0.3, 0.3, 2}};
  const Dataset ds(obs);
  const auto f = fit_generalized_deming(ds);
  CHECK(f.beta0 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.beta1 == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(generalized_deming_objective(ds, f.beta0, f.beta1) == doctest::Approx(0.0));
  CHECK(f.scenario == Scenario::B);
}

TEST_CASE("unit variances reduce generalized Deming to simple Deming") {
  const auto ds = points({{0, 0}, {1, 2}, {2, 3}}, 1.0, 1.0);
  const auto g = fit_generalized_deming(ds);
  CHECK(g.beta1 == doctest::Approx(1.5388).epsilon(1e-4));
  CHECK(std::abs(g.beta1 - fit_simple_deming(ds, 1.0).beta1) < 1e-8);

  std::mt19937_64 rng(31);
  for (double lambda : {0.25, 4.0, 10.0}) {
    const auto r = oracle::random_dataset(rng, 9, 0.1, 0.1, 0.5);
    std::vector<Observation> obs;
    for (const auto& o : r) obs.push_back({o.x, o.y, 1.0, 1.0 / lambda, 1.0});
    const Dataset u(obs);
    const auto gd = fit_generalized_deming(u);
    const auto sd = fit_simple_deming(u, lambda);
    CHECK(std::abs(gd.beta1 - sd.beta1) < 1e-8);
    CHECK(std::abs(gd.beta0 - sd.beta0) < 1e-8);
  }
}

TEST_CASE("heteroscedastic four point set against joint minimization") {
  const Dataset ds({{0, 0.1, 0.5, 0.2, 1}, {1, 1.9, 0.1, 0.4, 1}, {2, 4.2, 0.3, 0.1, 1}, {3, 5.8, 0.2, 0.3, 1}});
  const auto f = fit_generalized_deming(ds);
  const auto o = oracle::minimize_generalized_chi2(ds);
  CHECK(std::abs(f.beta1 - o.beta1) < 1e-6);
  CHECK(std::abs(f.beta0 - o.beta0) < 1e-6);
  CHECK(generalized_deming_objective(ds, f.beta0, f.beta1) == doctest::Approx(o.objective).epsilon(1e-8));
}

TEST_CASE("weights divide the variances used by the York iteration") {
  const Dataset w({{0, 0.1, 0.5, 0.2, 2}, {1, 1.9, 0.1, 0.4, 4}, {2, 4.2, 0.3, 0.1, 1}, {3, 5.8, 0.2, 0.3, 3}});
  const auto a = fit_generalized_deming(w);
  const auto b = fit_generalized_deming(apply_weights(w));
  CHECK(a.beta1 == doctest::Approx(b.beta1).epsilon(1e-14));
}

TEST_CASE("converged objective is no larger than at the OLS start") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    const auto ds = oracle::random_dataset(rng, 10, 0.05, 0.5, 0.5);
    std::vector<double> x, y;
    for (const auto& o : ds) {
      x.push_back(o.x);
      y.push_back(o.y);
    }
    const auto [b0, b1] = oracle::ols(x, y);
    const auto f = fit_generalized_deming(ds);
    CHECK(generalized_deming_objective(ds, f.beta0, f.beta1) <=
          generalized_deming_objective(ds, b0, b1) * (1 + 1e-12));
  }
}

TEST_CASE("York standard errors agree with a large-sample Monte Carlo spread") {
  // Repeated draws from one design: the spread of the estimates should match
  // the reported standard errors to within Monte Carlo noise.
  std::mt19937_64 rng(77);
  std::normal_distribution<double> z(0.0, 1.0);
  const int n = 40, reps = 1500;
  std::vector<double> X(n), vx(n), vy(n);
  for (int i = 0; i < n; ++i) {
    X[i] = -2.0 + 4.0 * i / (n - 1);
    vx[i] = 0.02 + 0.03 * (i % 4);
    vy[i] = 0.05 + 0.02 * (i % 3);
  }
  std::vector<double> slopes;
  double se_sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    std::vector<Observation> obs;
    for (int i = 0; i < n; ++i) {
      obs.push_back({X[i] + std::sqrt(vx[i]) * z(rng), 0.5 + 1.3 * X[i] + std::sqrt(vy[i]) * z(rng), vx[i], vy[i], 1});
    }
    const auto f = fit_generalized_deming(Dataset(obs));
    slopes.push_back(f.beta1);
    se_sum += std::sqrt(f.cov_params.b11);
  }
  double m = 0.0;
  for (double s : slopes) m += s;
  m /= reps;
  double v = 0.0;
  for (double s : slopes) v += (s - m) * (s - m);
  const double sd = std::sqrt(v / (reps - 1));
  CHECK(se_sum / reps == doctest::Approx(sd).epsilon(0.08));
}

TEST_CASE("generalized Deming error conditions") {
  const Dataset singular({{0, 0, 0.0, 0.0, 1}, {1, 2, 0.1, 0.1, 1}, {2, 3, 0.1, 0.1, 1}});
  try {
    fit_generalized_deming(singular);
    FAIL("expected singular-weight error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singular_weight);
  }
  const Dataset flat({{1, 0, 0.1, 0.1, 1}, {1, 2, 0.1, 0.1, 1}, {1, 3, 0.1, 0.1, 1}});
  try {
    fit_generalized_deming(flat);
    FAIL("expected degenerate-fit error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_fit);
  }
  YorkOptions tight;
  tight.max_iterations = 1;
  std::mt19937_64 rng(2);
  const auto ds = oracle::random_dataset(rng, 8, 0.2, 0.6, 0.6);
  try {
    fit_generalized_deming(ds, tight);
    FAIL("expected convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.kind() == ErrorKind::convergence);
    CHECK(std::isfinite(e.beta1));
  }
}

TEST_CASE("WLS closed form and weight semantics") {
  const auto ds = points({{0, 0}, {1, 2}, {2, 3}});
  const auto f = fit_wls(ds);
  CHECK(f.beta1 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(f.beta0 == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(f.scenario == Scenario::wls);
  REQUIRE(f.mse.has_value());
  CHECK(*f.mse == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  const Dataset dup({{0, 0, 1, 1, 1}, {1, 2, 1, 1, 1}, {2, 3, 1, 1, 1}, {2, 3, 1, 1, 1}});
  const Dataset w2({{0, 0, 1, 1, 1}, {1, 2, 1, 1, 1}, {2, 3, 1, 1, 2}});
  const auto a = fit_wls(dup), b = fit_wls(w2);
  CHECK(std::abs(a.beta0 - b.beta0) < 1e-12);
  CHECK(std::abs(a.beta1 - b.beta1) < 1e-12);
  CHECK_THROWS_AS(fit_wls(points({{1, 0}, {1, 2}, {1, 3}})), Error);
}
