#include <doctest.h>

#include <cmath>
#include <random>

#include "deming/deming_ls.hpp"
#include "deming/error.hpp"
#include "deming/inference.hpp"
#include "deming/numeric.hpp"
#include "deming/simulation.hpp"
#include "oracles.hpp"

using namespace deming;

namespace {

DemingFit line_fit(double b0, double b1, Scenario s = Scenario::B) {
  DemingFit f;
  f.beta0 = b0;
  f.beta1 = b1;
  f.scenario = s;
  f.n = 5;
  return f;
}

Dataset b_data(std::uint64_t seed, std::size_t n) {
  SimulationSpec s;
  s.n = n;
  s.beta0 = 0.5;
  s.beta1 = 1.5;
  s.x_law = {XLaw::Kind::uniform, 0.0, 4.0};
  s.var_x_law.a = 0.2;
  s.var_y_law.a = 0.3;
  s.seed = seed;
  return generate_dataset(s).dataset;
}

}  // namespace

TEST_CASE("prediction variance terms") {
  const auto f = line_fit(0.0, 2.0);
  const Cov2 cov{0.04, 0.0, 0.01};
  const auto v = prediction_variance(f, cov, 1.0, 0.25, 0.09);
  CHECK(v.parameter_term == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(v.x_term == doctest::Approx(4.01 * 0.25).epsilon(1e-14));
  CHECK(v.e_y_term == 0.09);
  CHECK(v.total == doctest::Approx(1.1425).epsilon(1e-14));
  CHECK(prediction_variance(f, cov, 1.0, 0.0, 0.09).total == doctest::Approx(0.14).epsilon(1e-14));
  CHECK(prediction_variance(f, Cov2{}, 1.0, 0.0, 0.0).total == 0.0);
}

TEST_CASE("off-diagonal covariance enters twice") {
  const auto v = prediction_variance(line_fit(0, 1), Cov2{0.1, -0.02, 0.03}, 2.0, 0.0, 0.0);
  CHECK(v.total == doctest::Approx(0.1 - 2 * 2 * 0.02 + 4 * 0.03).epsilon(1e-14));
}

TEST_CASE("prediction variance is monotone in each input") {
  const auto f = line_fit(0.3, -1.2);
  const Cov2 base{0.05, 0.01, 0.02};
  const double v0 = prediction_variance(f, base, 1.5, 0.2, 0.1).total;
  CHECK(prediction_variance(f, base, 1.5, 0.3, 0.1).total >= v0);
  CHECK(prediction_variance(f, base, 1.5, 0.2, 0.2).total >= v0);
  // Adding a positive semidefinite matrix.
  CHECK(prediction_variance(f, Cov2{0.06, 0.015, 0.03}, 1.5, 0.2, 0.1).total >= v0);
}

TEST_CASE("t multiplier with three degrees of freedom") {
  const auto f = line_fit(1.0, 2.0);
  const auto pi = prediction_interval(f, Cov2{}, 0.0, 0.0, 1.0, 0.95, 5);
  CHECK((pi.upper - pi.y_hat) == doctest::Approx(3.182446305284263).epsilon(1e-9));
  CHECK(pi.y_hat - pi.lower == doctest::Approx(pi.upper - pi.y_hat).epsilon(1e-15));
  CHECK(student_t_quantile(0.975, 3) == doctest::Approx(3.1824).epsilon(1e-4));
}

TEST_CASE("zero variance gives a degenerate interval") {
  const auto pi = prediction_interval(line_fit(1.0, 2.0), Cov2{}, 3.0, 0.0, 0.0, 0.95, 5);
  CHECK(pi.lower == 7.0);
  CHECK(pi.upper == 7.0);
}

TEST_CASE("interval width increases with the level") {
  const auto f = line_fit(1.0, 2.0);
  double prev = 0.0;
  for (double level : {0.5, 0.8, 0.9, 0.95, 0.99}) {
    const auto pi = prediction_interval(f, Cov2{0.01, 0, 0.01}, 1.0, 0.1, 0.2, level, 20);
    CHECK(pi.upper - pi.lower > prev);
    prev = pi.upper - pi.lower;
  }
  CHECK_THROWS_AS(prediction_interval(f, Cov2{}, 1.0, 0.1, 0.2, 1.0, 20), Error);
  CHECK_THROWS_AS(prediction_interval(f, Cov2{}, 1.0, 0.1, 0.2, 0.0, 20), Error);
}

TEST_CASE("mean-variance mode squares the mean first-stage SD") {
  const Dataset ds({{0, 0, 0.04, 0.01, 1}, {1, 1, 0.09, 0.04, 1}, {2, 2, 0.25, 0.16, 1}});
  const auto prof = error_profile(ds);
  CHECK(prof.mean_sd_y == doctest::Approx(0.7 / 3).epsilon(1e-14));
  CHECK(prof.median_sd_y == doctest::Approx(0.2));
  const auto f = line_fit(0, 1, Scenario::B);
  const auto [vx, vy] = prediction_inputs(f, PiMode::mean_variance, prof, SdSummary::mean, 9.0, 9.0, 1.0);
  CHECK(vy == doctest::Approx((0.7 / 3) * (0.7 / 3)).epsilon(1e-14));
  CHECK(vx == doctest::Approx(prof.mean_sd_x * prof.mean_sd_x).epsilon(1e-14));
  const auto [ix, iy] = prediction_inputs(f, PiMode::individual, prof, SdSummary::mean, 0.3, 0.4, 1.0);
  CHECK(ix == 0.3);
  CHECK(iy == 0.4);
}

TEST_CASE("mse mode is reserved for WLS fits") {
  const Dataset ds({{0, 0, 0.04, 0.01, 1}, {1, 2, 0.09, 0.04, 1}, {2, 3, 0.25, 0.16, 2}});
  const auto w = fit_wls(ds);
  const auto prof = error_profile(ds);
  const auto [vx, vy] = prediction_inputs(w, PiMode::mse, prof, SdSummary::mean, 0, 0, 2.0);
  CHECK(vx == 0.0);
  CHECK(vy == doctest::Approx(*w.mse / 2.0));
  CHECK_THROWS_AS(prediction_inputs(line_fit(0, 1), PiMode::mse, prof, SdSummary::mean, 0, 0, 1), Error);
  CHECK(parse_pi_mode("mean") == PiMode::mean_variance);
}

TEST_CASE("vacuous intervals cover everything") {
  const auto ds = b_data(3, 40);
  auto f = line_fit(0.0, 0.0);
  f.n = ds.size();
  f.cov_params = Cov2{1e200, 0, 0};
  CHECK(pi_coverage(ds, f, PiMode::individual, 0.95) == 1.0);
}

TEST_CASE("coverage counts weights as frequencies") {
  const Dataset ds({{0, 0, 1e-6, 1e-6, 3}, {1, 1, 1e-6, 1e-6, 1}, {2, 50, 1e-6, 1e-6, 1}, {3, 3, 1e-6, 1e-6, 1}});
  auto f = line_fit(0.0, 1.0);
  f.n = 4;
  CHECK(pi_coverage(ds, f, PiMode::individual, 0.95) == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("bootstrap on noiseless data has zero width") {
  const Dataset ds({{0, 1, 0.1, 0.1, 1}, {1, 3, 0.1, 0.1, 1}, {2, 5, 0.1, 0.1, 1}, {3, 7, 0.2, 0.1, 1}, {4, 9, 0.1, 0.3, 1}});
  BootstrapOptions opt;
  opt.replicates = 100;
  const auto r = bootstrap_fit(ds, {Scenario::B, 1.0}, opt);
  CHECK(r.ci_beta1.first == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.ci_beta1.second == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.ci_beta0.second - r.ci_beta0.first == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.B == 100);
}

TEST_CASE("bootstrap is reproducible for a fixed seed") {
  const auto ds = b_data(4, 60);
  BootstrapOptions opt;
  opt.seed = 99;
  const auto a = bootstrap_fit(ds, {Scenario::B, 1.0}, opt);
  const auto b = bootstrap_fit(ds, {Scenario::B, 1.0}, opt);
  CHECK(a.ci_beta1 == b.ci_beta1);
  CHECK(a.ci_beta0 == b.ci_beta0);
  CHECK(a.cov_params.b11 == b.cov_params.b11);
  opt.seed = 100;
  const auto c = bootstrap_fit(ds, {Scenario::B, 1.0}, opt);
  CHECK(c.ci_beta1 != a.ci_beta1);
}

TEST_CASE("bootstrap percentile CI is the empirical quantile of the replicates") {
  const auto ds = b_data(5, 50);
  BootstrapOptions opt;
  opt.replicates = 120;
  opt.level = 0.9;
  const auto r = bootstrap_fit(ds, {Scenario::wls, 1.0}, opt);
  std::vector<double> b1;
  for (const auto& rep : r.replicates) b1.push_back(rep[1]);
  std::sort(b1.begin(), b1.end());
  // Type-7 quantile computed by hand.
  const double h = (b1.size() - 1) * 0.05;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  CHECK(r.ci_beta1.first == doctest::Approx(b1[lo] + (h - lo) * (b1[lo + 1] - b1[lo])).epsilon(1e-14));
}

TEST_CASE("doubling B changes the CI endpoints only modestly") {
  const auto ds = b_data(6, 150);
  BootstrapOptions a, b;
  a.replicates = 200;
  b.replicates = 400;
  a.seed = b.seed = 5;
  const auto ra = bootstrap_fit(ds, {Scenario::B, 1.0}, a);
  const auto rb = bootstrap_fit(ds, {Scenario::B, 1.0}, b);
  const double width = ra.ci_beta1.second - ra.ci_beta1.first;
  CHECK(std::abs(ra.ci_beta1.first - rb.ci_beta1.first) < 0.15 * width);
  CHECK(std::abs(ra.ci_beta1.second - rb.ci_beta1.second) < 0.15 * width);
}

TEST_CASE("bootstrap argument checks and hard failures") {
  const auto ds = b_data(7, 30);
  BootstrapOptions opt;
  opt.replicates = 49;
  CHECK_THROWS_AS(bootstrap_fit(ds, {Scenario::B, 1.0}, opt), Error);
  opt.replicates = 50;
  opt.level = 1.5;
  CHECK_THROWS_AS(bootstrap_fit(ds, {Scenario::B, 1.0}, opt), Error);
  const Dataset flat({{1, 0, 0.1, 0.1, 1}, {1, 2, 0.1, 0.1, 1}, {1, 3, 0.1, 0.1, 1}});
  CHECK_THROWS_AS(bootstrap_fit(flat, {Scenario::B, 1.0}, BootstrapOptions{}), Error);
}

TEST_CASE("weighted resampling favors heavy rows") {
  const Dataset ds({{0, 0, 0.1, 0.1, 1}, {1, 1, 0.1, 0.1, 1}, {2, 2, 0.1, 0.1, 98}});
  std::size_t heavy = 0, total = 0;
  for (std::size_t r = 0; r < 200; ++r) {
    for (auto i : bootstrap_indices(ds, 1, r, true)) {
      heavy += i == 2;
      ++total;
    }
  }
  CHECK(static_cast<double>(heavy) / total > 0.9);
  std::size_t uniform_heavy = 0;
  for (std::size_t r = 0; r < 200; ++r) {
    for (auto i : bootstrap_indices(ds, 1, r, false)) uniform_heavy += i == 2;
  }
  CHECK(static_cast<double>(uniform_heavy) / total == doctest::Approx(1.0 / 3).epsilon(0.15));
}

TEST_CASE("York covariance agrees with the bootstrap spread") {
  const auto ds = b_data(8, 300);
  const auto f = fit_generalized_deming(ds);
  BootstrapOptions opt;
  opt.replicates = 400;
  const auto r = bootstrap_fit(ds, {Scenario::B, 1.0}, opt);
  CHECK(std::sqrt(f.cov_params.b11) == doctest::Approx(std::sqrt(r.cov_params.b11)).epsilon(0.2));
  CHECK(std::sqrt(f.cov_params.b00) == doctest::Approx(std::sqrt(r.cov_params.b00)).epsilon(0.2));
}
