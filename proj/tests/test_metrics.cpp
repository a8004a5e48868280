#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "shelfcast/error.hpp"
#include "shelfcast/metrics.hpp"
#include "support/fixtures.hpp"

using namespace shelfcast;

namespace {

FinancialFrame one_series_frame(std::vector<double> y, std::vector<double> p, std::vector<double> history = {}) {
  FinancialFrame f;
  f.series_keys = {"P0@S0"};
  f.train_history = {history};
  for (std::size_t i = 0; i < y.size(); ++i) {
    f.series.push_back(0);
    f.product.push_back(0);
    f.group.push_back(0);
    f.zone.push_back(0);
    f.dates.push_back(Date{19000 + static_cast<std::int32_t>(i)});
    f.y_true.push_back(y[i]);
    f.y_pred.push_back(p[i]);
    f.real_price.push_back(1.0);
    f.cogs.push_back(0.5);
    f.rebate.push_back(0.0);
  }
  return f;
}

}  // namespace

TEST(Wmape, HandSum) {
  std::vector<double> t{2, 0, 4}, p{1, 1, 4};
  EXPECT_NEAR(wmape(t, p), 2.0 / 6.0, 1e-15);
  EXPECT_EQ(wmape(t, t), 0.0);
  std::vector<double> z{0, 0};
  EXPECT_TRUE(std::isnan(wmape(z, z)));
}

TEST(Pointwise, HandComputed) {
  std::vector<double> t{0, 2}, p{1, 1};
  const auto m = pointwise_suite(t, p);
  EXPECT_DOUBLE_EQ(m.mse, 1.0);
  EXPECT_DOUBLE_EQ(m.mae, 1.0);
  EXPECT_DOUBLE_EQ(m.me, 0.0);
  EXPECT_DOUBLE_EQ(m.mfb, 0.0);

  std::vector<double> a{1, 2, 3};
  const auto perfect = pointwise_suite(a, a);
  EXPECT_EQ(perfect.mse, 0.0);
  EXPECT_EQ(perfect.r2, 1.0);

  std::vector<double> c{4, 4, 4};
  EXPECT_TRUE(std::isnan(pointwise_suite(c, a).r2));
}

TEST(TheilsBias, Decomposition) {
  // me = 1, mse = 2
  std::vector<double> t{0, 0}, p{0, 2};
  EXPECT_DOUBLE_EQ(theils_bias(t, p), 0.5);
  std::vector<double> p2{1, -1};
  EXPECT_DOUBLE_EQ(theils_bias(t, p2), 0.0);
  std::vector<double> t3{1, 2, 3}, p3{3, 4, 5};
  EXPECT_DOUBLE_EQ(theils_bias(t3, p3), 1.0);
  EXPECT_EQ(theils_bias(t3, t3), 0.0);
}

TEST(ScaledErrors, HandComputed) {
  std::vector<double> train{1, 3, 1, 3}, t{2, 2}, p{1, 1};
  const auto s = scaled_errors(train, t, p);
  EXPECT_DOUBLE_EQ(s.mase, 0.5);
  EXPECT_DOUBLE_EQ(s.rmsse, 0.5);
  const auto zero = scaled_errors(train, t, t);
  EXPECT_EQ(zero.mase, 0.0);
  EXPECT_EQ(zero.rmsse, 0.0);
  std::vector<double> flat{2, 2, 2};
  EXPECT_TRUE(std::isnan(scaled_errors(flat, t, p).mase));
  std::vector<double> single{2};
  EXPECT_TRUE(std::isnan(scaled_errors(single, t, p).rmsse));
}

TEST(FinancialWmape, SingleCellAndAverage) {
  // True revenue 100, predicted 93.1 in one (zone, group) cell.
  auto f = one_series_frame({100.0}, {93.1});
  const auto g = group_financial_wmape(f);
  EXPECT_NEAR(g.revenue, 0.069, 1e-12);

  // Two products with revenue wmapes 0.2 and 0.4.
  FinancialFrame two = one_series_frame({10.0, 10.0}, {12.0, 6.0});
  two.series_keys.push_back("P1@S0");
  two.train_history.emplace_back();
  two.series[1] = 1;
  two.product[1] = 1;
  const auto s = series_financial_wmape(two);
  EXPECT_NEAR(s.revenue, 0.3, 1e-12);

  auto perfect = one_series_frame({3.0, 4.0}, {3.0, 4.0});
  const auto gp = group_financial_wmape(perfect);
  EXPECT_EQ(gp.revenue, 0.0);
  EXPECT_EQ(gp.profit, 0.0);
}

TEST(FinancialWmape, Errors) {
  FinancialFrame empty;
  EXPECT_THROW(group_financial_wmape(empty), Error);
  auto zeros = one_series_frame({0.0, 0.0}, {1.0, 1.0});
  EXPECT_THROW(series_financial_wmape(zeros), Error);
  EXPECT_THROW(group_financial_wmape(zeros), Error);
}

TEST(FinancialWmape, SingleSeriesGroupEqualsSeries) {
  auto f = one_series_frame({3, 0, 5, 2}, {2, 1, 6, 2});
  const auto g = group_financial_wmape(f);
  const auto s = series_financial_wmape(f);
  EXPECT_NEAR(g.revenue, s.revenue, 1e-15);
  EXPECT_NEAR(g.profit, s.profit, 1e-15);
}

TEST(DemandErrorBias, WeeklyBuckets) {
  // 2022-01-03 is a Monday: one bucket with total true 10, pred 9.
  FinancialFrame f = one_series_frame({5, 5}, {4, 5});
  f.dates = {Date{18995}, Date{18996}};
  const auto d = demand_error_bias(f, 7);
  EXPECT_NEAR(d.bias, -0.1, 1e-15);
  EXPECT_NEAR(d.error, 0.1, 1e-15);

  const auto exact = demand_error_bias(one_series_frame({1, 2}, {1, 2}), 7);
  EXPECT_EQ(exact.error, 0.0);
  EXPECT_EQ(exact.bias, 0.0);

  // Over and under forecasts cancel inside the week.
  FinancialFrame c = one_series_frame({2, 2}, {3, 1});
  c.dates = {Date{18995}, Date{18997}};
  const auto cancel = demand_error_bias(c, 7);
  EXPECT_EQ(cancel.bias, 0.0);
  EXPECT_EQ(cancel.error, 0.0);
  EXPECT_EQ(pointwise_suite(c.y_true, c.y_pred).mfb, 0.0);
  EXPECT_GT(pointwise_suite(c.y_true, c.y_pred).mae, 0.0);

  // Monday starts a new bucket.
  FinancialFrame split = one_series_frame({2, 2}, {3, 1});
  split.dates = {Date{18994}, Date{18995}};
  EXPECT_NEAR(demand_error_bias(split, 7).error, 0.5, 1e-15);
}

TEST(Evaluate, MatchesBruteForceOracle) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const auto rf = fixtures::random_frame(seed);
    for (bool pooled : {false, true}) {
      EvaluationOptions opts;
      opts.pooled_scaled_errors = pooled;
      const auto got = evaluate(rf.frame, opts).table_values();
      const auto want = oracle::compute(rf.rows, rf.history, pooled).table_order();
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t k = 0; k < got.size(); ++k) {
        EXPECT_TRUE(oracle::close(got[k], want[k]))
            << "seed " << seed << " pooled " << pooled << " " << fixtures::kMetricNames[k] << ": " << got[k]
            << " vs " << want[k];
      }
    }
  }
}

TEST(Evaluate, ScaleCovariance) {
  const double k = 3.5;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto rf = fixtures::random_frame(seed);
    auto scaled = rf.frame;
    for (auto& v : scaled.y_true) v *= k;
    for (auto& v : scaled.y_pred) v *= k;
    for (auto& h : scaled.train_history) {
      for (auto& v : h) v *= k;
    }
    const auto a = evaluate(rf.frame);
    const auto b = evaluate(scaled);
    auto same = [](double x, double y) { return oracle::close(x, y, 1e-9); };
    EXPECT_TRUE(same(a.group_rev_wmape, b.group_rev_wmape));
    EXPECT_TRUE(same(a.series_profit_wmape, b.series_profit_wmape));
    EXPECT_TRUE(same(a.mfb, b.mfb));
    EXPECT_TRUE(same(a.mase, b.mase));
    EXPECT_TRUE(same(a.rmsse, b.rmsse));
    EXPECT_TRUE(same(a.r2, b.r2));
    EXPECT_TRUE(same(a.theils_bias, b.theils_bias));
    EXPECT_TRUE(same(a.demand_error, b.demand_error));
    EXPECT_TRUE(same(a.demand_bias, b.demand_bias));
    EXPECT_TRUE(same(a.mse * k * k, b.mse));
    EXPECT_TRUE(same(a.mae * k, b.mae));
    EXPECT_TRUE(same(a.rmse * k, b.rmse));
    EXPECT_TRUE(same(a.me * k, b.me));
  }
}

TEST(Evaluate, ReportInvariants) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto r = evaluate(fixtures::random_frame(seed).frame);
    EXPECT_DOUBLE_EQ(r.rmse, std::sqrt(r.mse));
    EXPECT_GE(r.theils_bias, 0.0);
    EXPECT_LE(r.theils_bias, 1.0);
    if (!std::isnan(r.group_rev_wmape)) EXPECT_GE(r.group_rev_wmape, 0.0);
    // Weekly totals sum to the row totals, so the signed ratios coincide.
    if (!std::isnan(r.mfb)) EXPECT_NEAR(r.mfb, r.demand_bias, 1e-12);
  }
}

TEST(MaskedEvaluate, EqualsFilteredFrameBitwise) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto rf = fixtures::random_frame(seed);
    std::vector<std::uint8_t> mask(rf.frame.rows());
    std::mt19937_64 rng(seed * 7);
    bool any = false;
    for (auto& m : mask) {
      m = rng() % 3 != 0;
      any = any || m;
    }
    if (!any) mask[0] = 1;
    const auto a = masked_evaluate(rf.frame, mask).table_values();
    const auto b = evaluate(filter_frame(rf.frame, mask)).table_values();
    ASSERT_EQ(a.size(), b.size());
    EXPECT_EQ(0, std::memcmp(a.data(), b.data(), a.size() * sizeof(double))) << "seed " << seed;
  }
}

TEST(MaskedEvaluate, EdgeMasks) {
  const auto rf = fixtures::random_frame(5);
  std::vector<std::uint8_t> all(rf.frame.rows(), 1);
  const auto a = masked_evaluate(rf.frame, all).table_values();
  const auto b = evaluate(rf.frame).table_values();
  EXPECT_EQ(0, std::memcmp(a.data(), b.data(), a.size() * sizeof(double)));
  std::vector<std::uint8_t> none(rf.frame.rows(), 0);
  EXPECT_THROW(masked_evaluate(rf.frame, none), Error);
  std::vector<std::uint8_t> short_mask(rf.frame.rows() + 1, 1);
  EXPECT_THROW(masked_evaluate(rf.frame, short_mask), Error);
}

TEST(MaskedEvaluate, DroppingExactRowsKeepsErrorSums) {
  auto f = one_series_frame({3, 4, 5, 6}, {3, 2, 5, 9});
  std::vector<std::uint8_t> keep{0, 1, 0, 1};
  const auto r = masked_evaluate(f, keep);
  EXPECT_EQ(r.rows, 2u);
  EXPECT_DOUBLE_EQ(r.mae, (2.0 + 3.0) / 2.0);
}

TEST(GroupTable, HeaderOrderAndSentinels) {
  EXPECT_STREQ(kGroupTableHeader,
               "Group,MSE,RMSE,MAE,R2,Group Revenue WMAPE,Series Revenue WMAPE,Group Profit WMAPE,"
               "Series Profit WMAPE,Demand Error,Demand Bias,RMSSE,MASE,ME,MFB,Theils Bias");
  MetricReport r;
  r.r2 = std::nan("");
  const auto csv = group_table_csv({{"ALL", r}});
  EXPECT_NE(csv.find("\nALL,"), std::string::npos);
  EXPECT_NE(csv.find(",NaN,"), std::string::npos);
  EXPECT_NE(csv.find("# ALL rows=0"), std::string::npos);
}
