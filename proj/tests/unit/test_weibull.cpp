#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "osr/weibull.hpp"
#include "oracles/weibull_grid.hpp"
#include "support.hpp"

using osr::ErrorCode;
using osr::WeibullModel;
using osr::test::error_of;
using Catch::Approx;

namespace {

std::vector<double> weibull_draws(std::mt19937_64& gen, std::size_t n, double kappa, double lambda,
                                  double shift = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = shift + lambda * std::pow(-std::log1p(-u(gen)), 1.0 / kappa);
  return x;
}

}  // namespace

TEST_CASE("cdf and survival closed forms") {
  const WeibullModel m{0.5, 2.0, 3.0, 10};
  CHECK(m.cdf(0.5) == 0.0);
  CHECK(m.survival(0.5) == 1.0);
  CHECK(m.cdf(0.0) == 0.0);
  CHECK(m.cdf(0.5 + 3.0) == Approx(1.0 - std::exp(-1.0)).margin(1e-12));
  CHECK(m.survival(0.5 + 3.0) == Approx(std::exp(-1.0)).margin(1e-12));

  const WeibullModel expo{-1.0, 1.0, 2.0, 10};
  CHECK(expo.cdf(-1.0 + 2.0 * std::log(2.0)) == Approx(0.5).margin(1e-12));

  for (double x : {-3.0, 0.0, 0.7, 3.5, 10.0, 1e6}) {
    CHECK(m.cdf(x) + m.survival(x) == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("cdf without translation ignores rho") {
  const WeibullModel m{5.0, 1.0, 2.0, 4};
  CHECK(m.cdf(2.0, false) == Approx(1.0 - std::exp(-1.0)).margin(1e-12));
  CHECK(m.cdf(2.0, true) == 0.0);
}

TEST_CASE("cdf is monotone") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> kappa(0.2, 8.0), lambda(0.1, 20.0), rho(-5.0, 5.0);
  for (int t = 0; t < 50; ++t) {
    const WeibullModel m{rho(gen), kappa(gen), lambda(gen), 10};
    auto xs = osr::test::random_vector(gen, 1000, m.rho - 5.0, m.rho + 5.0 * m.lambda);
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 1; i < xs.size(); ++i) REQUIRE(m.cdf(xs[i - 1]) <= m.cdf(xs[i]));
  }
}

TEST_CASE("fit_high recovers Weibull(2, 3) and matches the grid oracle") {
  std::mt19937_64 gen(2024);
  const auto x = weibull_draws(gen, 10000, 2.0, 3.0);
  const auto m = osr::fit_high(x, x.size());
  CHECK(m.kappa >= 1.9);
  CHECK(m.kappa <= 2.1);
  CHECK(m.lambda >= 2.9);
  CHECK(m.lambda <= 3.1);
  CHECK(m.tail_size == x.size());

  std::vector<double> shifted(x.size());
  std::transform(x.begin(), x.end(), shifted.begin(), [&](double v) { return v - m.rho; });
  const auto grid = osr::oracle::weibull_grid_mle(shifted);
  CHECK(m.log_likelihood(x) >= grid.log_likelihood - 1e-3);
  CHECK(m.kappa == Approx(grid.kappa).epsilon(1e-3));
  CHECK(m.lambda == Approx(grid.lambda).epsilon(1e-3));
}

TEST_CASE("fit_high satisfies the shape stationarity condition") {
  std::mt19937_64 gen(3);
  const auto x = weibull_draws(gen, 500, 0.8, 5.0);
  const auto m = osr::fit_high(x, 200);
  const auto tail = osr::select_tail(x, 200);
  double sk = 0, skl = 0, sl = 0;
  for (double v : tail) {
    const double s = v - m.rho;
    sk += std::pow(s, m.kappa);
    skl += std::pow(s, m.kappa) * std::log(s);
    sl += std::log(s);
  }
  CHECK(skl / sk - 1.0 / m.kappa - sl / 200.0 == Approx(0.0).margin(1e-8));
  CHECK(m.lambda == Approx(std::pow(sk / 200.0, 1.0 / m.kappa)).epsilon(1e-12));
}

TEST_CASE("fit_high translates non-positive tails") {
  const std::vector<double> x{-3.0, -1.0, 0.5, 2.0, 4.0};
  const auto m = osr::fit_high(x, 5);
  CHECK(m.rho == Approx(-3.0 - 3e-6).margin(1e-15));
  CHECK(m.valid());
  CHECK(m.cdf(-3.0) > 0.0);

  const std::vector<double> positive{1.0, 2.0, 3.0, 5.0};
  CHECK(osr::fit_high(positive, 4).rho == 0.0);
}

TEST_CASE("fit_high errors") {
  CHECK(error_of([] { (void)osr::fit_high(std::vector<double>{5, 5, 5, 5}, 4); }) ==
        ErrorCode::kDegenerateData);
  CHECK(error_of([] { (void)osr::fit_high(std::vector<double>{1, 2}, 5); }) ==
        ErrorCode::kInsufficientData);
  CHECK(error_of([] { (void)osr::fit_high(std::vector<double>{1, 2, 3}, 1); }) ==
        ErrorCode::kInsufficientData);
  CHECK(error_of([] {
          (void)osr::fit_high(std::vector<double>{1.0, 1.0 + 1e-9, 1.0 + 2e-9, 1.0 + 3e-9}, 4);
        }) == ErrorCode::kNoConvergence);
}

TEST_CASE("fit_high widens the shape bracket for very tight tails") {
  const std::vector<double> x{10.0, 10.001, 10.002, 10.004, 10.005};
  const auto m = osr::fit_high(x, 5);
  CHECK(m.kappa > 1e3);
  std::vector<double> shifted(x.begin(), x.end());
  const auto grid = osr::oracle::weibull_grid_mle(shifted, 17, 30);
  CHECK(m.log_likelihood(x) >= osr::oracle::weibull_log_likelihood(x, grid.kappa, grid.lambda) - 1e-3);
}

TEST_CASE("select_tail keeps the q largest, ties in input order") {
  const std::vector<double> x{3, 9, 1, 9, 4, 3};
  CHECK(osr::select_tail(x, 3) == std::vector<double>{9, 9, 4});
  CHECK(osr::select_tail(x, 5) == std::vector<double>{9, 9, 4, 3, 3});
}

TEST_CASE("fit_high is invariant to permutation and to appending small values") {
  std::mt19937_64 gen(11);
  auto x = weibull_draws(gen, 300, 1.5, 2.0, -1.0);
  const auto base = osr::fit_high(x, 50);
  for (int t = 0; t < 20; ++t) {
    auto y = x;
    std::shuffle(y.begin(), y.end(), gen);
    const auto tail_min = osr::select_tail(x, 50).back();
    for (double v : osr::test::random_vector(gen, 100, tail_min - 10.0, tail_min - 1e-9)) {
      y.push_back(v);
    }
    std::shuffle(y.begin(), y.end(), gen);
    REQUIRE(osr::fit_high(y, 50) == base);
  }
}

TEST_CASE("shape_score is increasing") {
  std::mt19937_64 gen(5);
  const auto x = weibull_draws(gen, 100, 2.0, 1.0);
  double prev = -INFINITY;
  for (double k = 1e-3; k < 1e3; k *= 1.5) {
    const double s = osr::shape_score(x, k);
    CHECK(s >= prev);
    prev = s;
  }
}
