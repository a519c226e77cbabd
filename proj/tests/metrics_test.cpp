#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <cmath>
#include <random>

#include "test_support.hpp"
#include "walign/metrics.hpp"

using namespace walign;
using namespace walign::testing;

TEST_CASE("cv_rmse: identical series score zero") {
  Vec x(4);
  x << 9.5, 10.5, 11.0, 10.0;
  CHECK(metrics::cv_rmse(x, x) == doctest::Approx(0.0));
  CHECK(metrics::nmbe(x, x) == doctest::Approx(0.0));
}

TEST_CASE("cv_rmse and nmbe: constant offset closed form") {
  const Vec truth = Vec::Constant(4, 10.0);
  const Vec pred = Vec::Constant(4, 11.0);
  CHECK(metrics::cv_rmse(truth, pred) == doctest::Approx(10.0));
  CHECK(metrics::nmbe(truth, pred) == doctest::Approx(10.0));
  // Sign convention: under-prediction is negative.
  CHECK(metrics::nmbe(pred, truth) < 0.0);
}

TEST_CASE("cv_rmse: matches a naive loop implementation") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec truth = random_matrix(rng, 100, 1, 3.0) +
                      Vec::Constant(100, 12.0);
    const Vec pred = truth + random_matrix(rng, 100, 1, 0.7);
    double accum = 0.0;
    double mean = 0.0;
    for (Index i = 0; i < truth.size(); ++i) {
      accum += (truth(i) - pred(i)) * (truth(i) - pred(i));
      mean += truth(i);
    }
    mean /= static_cast<double>(truth.size());
    const double expected =
        100.0 * std::sqrt(accum / static_cast<double>(truth.size())) / mean;
    CHECK(metrics::cv_rmse(truth, pred) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("nmbe: bias cancels on mirrored data") {
  Vec truth(2), pred(2);
  truth << 1.0, 3.0;
  pred << 3.0, 1.0;
  CHECK(metrics::nmbe(truth, pred) == doctest::Approx(0.0));
}

TEST_CASE("cv_rmse: invariant to jointly permuting the pairs") {
  std::mt19937_64 rng(10);
  const Vec truth =
      random_matrix(rng, 40, 1, 2.0) + Vec::Constant(40, 10.0);
  const Vec pred = truth + random_matrix(rng, 40, 1, 0.5);
  std::vector<Index> order(40);
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  Vec truth_p(40), pred_p(40);
  for (Index i = 0; i < 40; ++i) {
    truth_p(i) = truth(order[static_cast<std::size_t>(i)]);
    pred_p(i) = pred(order[static_cast<std::size_t>(i)]);
  }
  CHECK(metrics::cv_rmse(truth, pred) ==
        doctest::Approx(metrics::cv_rmse(truth_p, pred_p)).epsilon(1e-12));
}

TEST_CASE("nmbe: depends only on sums") {
  std::mt19937_64 rng(9);
  const Vec truth =
      random_matrix(rng, 60, 1, 2.0) + Vec::Constant(60, 10.0);
  const Vec pred = truth + random_matrix(rng, 60, 1, 1.0);
  Vec shuffled = pred;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(metrics::nmbe(truth, pred) ==
        doctest::Approx(metrics::nmbe(truth, shuffled)).epsilon(1e-12));
}

TEST_CASE("metrics: zero normalizers are explicit errors") {
  Vec zero_mean(2);
  zero_mean << -1.0, 1.0;
  const Vec pred = Vec::Zero(2);
  CHECK_THROWS_AS(metrics::cv_rmse(zero_mean, pred), std::invalid_argument);
  CHECK_THROWS_AS(metrics::nmbe(zero_mean, pred), std::invalid_argument);
  CHECK_THROWS_AS(metrics::cv_rmse(Vec::Zero(3), Vec::Zero(2)),
                  std::invalid_argument);
}

TEST_CASE("verdict: hourly calibration bounds") {
  CHECK(metrics::verdict(29.9, -9.9));
  CHECK(!metrics::verdict(30.1, 0.0));
  CHECK(!metrics::verdict(10.0, 15.0));
  CHECK(metrics::verdict(30.0, 10.0));  // boundary included
}

TEST_CASE("report: assembles the verdict") {
  const Vec truth = Vec::Constant(5, 10.0);
  const Vec pred = Vec::Constant(5, 11.0);
  const auto report =
      metrics::report(truth, pred, "T_ext1", metrics::Window::forecast);
  CHECK(report.cv_rmse_pct == doctest::Approx(10.0));
  CHECK(report.nmbe_pct == doctest::Approx(10.0));
  CHECK(report.passes_ashrae);
  CHECK(report.channel == "T_ext1");
  CHECK(metrics::window_name(report.window) == "forecast");
}
