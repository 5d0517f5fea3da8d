// Copyright 2026 The qconformal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qconformal/conformal.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qconformal/errors.h"

namespace qconformal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  for (const auto& r : rows) m.push_row(r);
  return m;
}

// Smallest t in the multiset with #{r <= t} >= k.
double brute_force_threshold(const std::vector<double>& scores, double alpha) {
  const double n = static_cast<double>(scores.size());
  const auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * (n + 1.0)));
  if (k > scores.size()) return kInf;
  double best = kInf;
  for (double t : scores) {
    std::size_t count = 0;
    for (double r : scores) count += r <= t ? 1 : 0;
    if (count >= k) best = std::min(best, t);
  }
  return best;
}

// V_d = 2 pi / d * V_{d-2}, V_0 = 1, V_1 = 2.
double unit_ball_volume(std::size_t d) {
  if (d == 0) return 1.0;
  if (d == 1) return 2.0;
  return 2.0 * std::numbers::pi / static_cast<double>(d) * unit_ball_volume(d - 2);
}

TEST(Residuals, ZeroWhenEqual) {
  const auto Y = from_rows({{0.1, 0.2}, {0.3, 0.4}});
  for (NormKind norm : {NormKind::L2, NormKind::LInf}) {
    EXPECT_EQ(residuals(Y, Y, norm), (std::vector<double>{0.0, 0.0}));
  }
}

TEST(Residuals, ThreeFourFive) {
  const auto Y = from_rows({{0.3, -0.4, 0.0, 0.0}});
  const auto Yhat = from_rows({{0.0, 0.0, 0.0, 0.0}});
  EXPECT_NEAR(residuals(Y, Yhat, NormKind::LInf)[0], 0.4, 1e-15);
  EXPECT_NEAR(residuals(Y, Yhat, NormKind::L2)[0], 0.5, 1e-15);
}

TEST(Residuals, NormEquivalence) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t d : {1u, 4u, 12u}) {
    Matrix Y(200, d), Yhat(200, d);
    for (std::size_t i = 0; i < 200; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Y(i, j) = u(rng);
        Yhat(i, j) = u(rng);
      }
    const auto linf = residuals(Y, Yhat, NormKind::LInf);
    const auto l2 = residuals(Y, Yhat, NormKind::L2);
    for (std::size_t i = 0; i < 200; ++i) {
      EXPECT_LE(linf[i], l2[i]);
      EXPECT_LE(l2[i], std::sqrt(static_cast<double>(d)) * linf[i] * (1 + 1e-15));
    }
  }
}

TEST(Residuals, ShapeMismatch) {
  EXPECT_THROW(residuals(from_rows({{1.0}}), from_rows({{1.0, 2.0}}), NormKind::L2),
               InputError);
}

TEST(Norm, Names) {
  EXPECT_EQ(parse_norm("l2"), NormKind::L2);
  EXPECT_EQ(parse_norm("linf"), NormKind::LInf);
  EXPECT_EQ(norm_name(NormKind::LInf), "linf");
  EXPECT_FALSE(parse_norm("l1").has_value());
}

TEST(Threshold, HandExamples) {
  const ConformalCalibration nine({9, 8, 7, 6, 5, 4, 3, 2, 1}, NormKind::L2, 4);
  EXPECT_EQ(nine.threshold(0.10), 9.0);
  const ConformalCalibration four({0.4, 0.2, 0.3, 0.1}, NormKind::L2, 4);
  EXPECT_EQ(four.threshold(0.5), 0.3);
  const ConformalCalibration five({1, 2, 3, 4, 5}, NormKind::L2, 4);
  EXPECT_EQ(five.threshold(0.05), kInf);
}

TEST(Threshold, SortedAscending) {
  const ConformalCalibration cal({0.3, 0.1, 0.2, 0.1}, NormKind::LInf, 2);
  EXPECT_EQ(cal.sorted_residuals(), (std::vector<double>{0.1, 0.1, 0.2, 0.3}));
  EXPECT_EQ(cal.size(), 4u);
}

TEST(Threshold, MatchesBruteForceWithTies) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> size(1, 200);
  std::uniform_int_distribution<int> level(0, 20);
  std::uniform_real_distribution<double> alpha(1e-6, 1.0 - 1e-6);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> scores(static_cast<std::size_t>(size(rng)));
    for (double& s : scores) s = level(rng) / 7.0;
    const double a = alpha(rng);
    const ConformalCalibration cal(scores, NormKind::L2, 4);
    EXPECT_EQ(cal.threshold(a), brute_force_threshold(scores, a));
  }
}

TEST(Threshold, NonincreasingInAlpha) {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> scores(150);
  for (double& s : scores) s = e(rng);
  const ConformalCalibration cal(scores, NormKind::L2, 4);
  double previous = kInf;
  for (double a = 0.001; a < 1.0; a += 0.001) {
    const double t = cal.threshold(a);
    EXPECT_LE(t, previous);
    previous = t;
  }
}

TEST(Threshold, Errors) {
  const ConformalCalibration cal({1.0, 2.0}, NormKind::L2, 4);
  for (double a : {0.0, 1.0, -0.1, 1.5, std::nan("")}) {
    EXPECT_THROW(cal.threshold(a), InputError) << a;
  }
  EXPECT_THROW(ConformalCalibration({}, NormKind::L2, 4), InputError);
  EXPECT_THROW(ConformalCalibration({-0.1}, NormKind::L2, 4), InputError);
  EXPECT_THROW(ConformalCalibration({kInf}, NormKind::L2, 4), InputError);
  EXPECT_THROW(ConformalCalibration({std::nan("")}, NormKind::L2, 4), InputError);
}

TEST(Coverage, Examples) {
  EXPECT_EQ(coverage(std::vector<double>{5.0, 1e9}, kInf), 1.0);
  const auto Y = from_rows({{0.1, 0.9}, {0.5, 0.5}});
  EXPECT_EQ(coverage(Y, Y, 0.0, NormKind::L2), 1.0);
  EXPECT_NEAR(coverage(std::vector<double>{0.1, 0.5, 0.9}, 0.5), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(coverage(std::vector<double>{}, 0.5), InputError);
  EXPECT_THROW(coverage(Matrix(), Matrix(), 0.5, NormKind::L2), InputError);
}

TEST(Coverage, LinfTauCoversMoreLinfThanL2Residuals) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 0.1);
  Matrix Y(300, 4), Yhat(300, 4);
  for (std::size_t i = 0; i < 300; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Y(i, j) = g(rng);
      Yhat(i, j) = g(rng);
    }
  const ConformalCalibration cal(residuals(Y, Yhat, NormKind::LInf), NormKind::LInf, 4);
  for (double a : {0.05, 0.1, 0.3}) {
    const double tau = cal.threshold(a);
    EXPECT_GE(coverage(Y, Yhat, tau, NormKind::LInf), coverage(Y, Yhat, tau, NormKind::L2));
  }
}

TEST(Coverage, MarginalGuaranteeUnderExchangeability) {
  // Continuous i.i.d. scores: E[coverage] = k / (n + 1), in [1-a, 1-a+1/(n+1)].
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> e(1.0);
  constexpr std::size_t n = 99;
  constexpr int kTrials = 1000;
  for (double a : {0.1, 0.2, 0.5}) {
    double mean = 0.0;
    for (int t = 0; t < kTrials; ++t) {
      std::vector<double> cal(n), test(100);
      for (double& s : cal) s = e(rng);
      for (double& s : test) s = e(rng);
      mean += coverage(test, ConformalCalibration(cal, NormKind::L2, 1).threshold(a)) / kTrials;
    }
    EXPECT_GE(mean, 1.0 - a - 0.01) << a;
    EXPECT_LE(mean, 1.0 - a + 1.0 / (n + 1) + 0.01) << a;
  }
}

TEST(SetSize, LinfFormula) {
  const auto s = set_size(0.5, 4, NormKind::LInf);
  EXPECT_EQ(s.volume, 1.0);
  EXPECT_EQ(s.sum_size, 4.0);
  EXPECT_NEAR(set_size(0.3, 3, NormKind::LInf).volume, 0.216, 1e-15);
}

TEST(SetSize, L2MatchesRecurrence) {
  EXPECT_NEAR(set_size(1.0, 2, NormKind::L2).volume, std::numbers::pi, 1e-14);
  for (std::size_t d = 1; d <= 12; ++d) {
    for (double tau : {0.2, 0.75, 1.3}) {
      const auto s = set_size(tau, d, NormKind::L2);
      const double want = unit_ball_volume(d) * std::pow(tau, static_cast<double>(d));
      EXPECT_NEAR(s.volume / want, 1.0, 1e-13) << d;
      EXPECT_EQ(s.sum_size, 2.0 * static_cast<double>(d) * tau);
    }
  }
}

TEST(SetSize, L2MatchesMonteCarloLowDim) {
  std::mt19937_64 rng(6);
  for (std::size_t d : {2u, 4u}) {
    const double tau = 0.8;
    std::uniform_real_distribution<double> u(-tau, tau);
    constexpr int kPoints = 1000000;
    int hits = 0;
    for (int i = 0; i < kPoints; ++i) {
      double r2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double x = u(rng);
        r2 += x * x;
      }
      hits += r2 <= tau * tau ? 1 : 0;
    }
    const double mc = std::pow(2.0 * tau, static_cast<double>(d)) * hits / kPoints;
    EXPECT_NEAR(set_size(tau, d, NormKind::L2).volume / mc, 1.0, 0.05) << d;
  }
}

TEST(SetSize, InfiniteTau) {
  for (NormKind norm : {NormKind::L2, NormKind::LInf}) {
    const auto s = set_size(kInf, 12, norm);
    EXPECT_EQ(s.volume, kInf);
    EXPECT_EQ(s.sum_size, kInf);
  }
}

// A dataset whose single feature determines the target, so the model is
// close to exact and the report has predictable structure.
Dataset toy_dataset(std::size_t n) {
  Dataset d;
  d.manifest.generation.feature_mode = FeatureMode::Minimal;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> noise(0.0, 0.1);
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.id = static_cast<std::int64_t>(i);
    s.features = {FeatureMode::Minimal, {1.0, static_cast<double>(i % 40)}};
    const double a = 0.5 + noise(rng);
    s.target = {a, 1.0 - a, 0.0, 0.0};
    d.samples.push_back(s);
  }
  return d;
}

TEST(Evaluate, ReportStructure) {
  const auto data = toy_dataset(400);
  const auto splits = split(data, {}, 1);
  const auto train = gather(data, splits.train);
  ForestParams params;
  params.num_trees = 10;
  const auto model = Forest::fit(train.X, train.Y, params, 42);
  const std::vector<double> alphas{0.05, 0.1, 0.2, 0.3, 0.5};
  const auto report = evaluate(model, splits, data, alphas, NormKind::L2);
  ASSERT_EQ(report.rows.size(), 5u);
  EXPECT_EQ(report.n_cal, splits.cal.size());
  EXPECT_EQ(report.n_test, splits.test.size());
  EXPECT_EQ(report.dim, 4u);
  EXPECT_EQ(report.mse_per_output.size(), 4u);

  const auto test = gather(data, splits.test);
  EXPECT_EQ(report.mse_overall, mse(model, test.X, test.Y).overall);
  const auto cal = gather(data, splits.cal);
  const ConformalCalibration calibration(
      residuals(cal.Y, model.predict(cal.X), NormKind::L2), NormKind::L2, 4);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto& row = report.rows[i];
    EXPECT_EQ(row.alpha, alphas[i]);
    EXPECT_EQ(row.tau, calibration.threshold(alphas[i]));
    EXPECT_EQ(row.coverage, coverage(test.Y, model.predict(test.X), row.tau, NormKind::L2));
    EXPECT_GE(row.coverage, 0.0);
    EXPECT_LE(row.coverage, 1.0);
    if (i > 0) {
      EXPECT_LE(row.tau, report.rows[i - 1].tau);
      EXPECT_LE(row.sum_size, report.rows[i - 1].sum_size);
    }
  }
}

TEST(Evaluate, DuplicateAlphasGiveDuplicateRows) {
  const auto data = toy_dataset(100);
  const auto splits = split(data, {}, 2);
  const auto train = gather(data, splits.train);
  ForestParams params;
  params.num_trees = 3;
  const auto model = Forest::fit(train.X, train.Y, params, 1);
  const std::vector<double> alphas{0.2, 0.2};
  const auto report = evaluate(model, splits, data, alphas, NormKind::LInf);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0], report.rows[1]);
}

TEST(Evaluate, EmptySplitsRejected) {
  const auto data = toy_dataset(50);
  auto splits = split(data, {}, 3);
  const auto train = gather(data, splits.train);
  const auto model = Forest::fit(train.X, train.Y, ForestParams{}, 1);
  const std::vector<double> alphas{0.1};
  auto no_cal = splits;
  no_cal.cal.clear();
  EXPECT_THROW(evaluate(model, no_cal, data, alphas, NormKind::L2), InputError);
  auto no_test = splits;
  no_test.test.clear();
  EXPECT_THROW(evaluate(model, no_test, data, alphas, NormKind::L2), InputError);
}

TEST(ReportCsv, HeaderAndRows) {
  CoverageReport r;
  r.norm = NormKind::LInf;
  r.dim = 4;
  r.n_cal = 3;
  r.n_test = 5;
  r.mse_overall = 0.125;
  r.rows = {{0.5, 0.25, 0.8, 2.0, 0.0625}, {0.05, kInf, 1.0, kInf, kInf}};
  EXPECT_EQ(report_csv(r),
            "alpha,tau,coverage,sum_size,volume,norm,d,n_cal,n_test,mse_overall\n"
            "0.5,0.25,0.8,2,0.0625,linf,4,3,5,0.125\n"
            "0.05,inf,1,inf,inf,linf,4,3,5,0.125\n");
  EXPECT_EQ(report_cells(r).size(), 2u);
}

}  // namespace
}  // namespace qconformal
