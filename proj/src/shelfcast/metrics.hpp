#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shelfcast/date.hpp"

namespace shelfcast {

class FeatureMatrix;

// Validation rows with everything needed for the financial metrics, plus
// each series' observed training history for the scaled errors.
struct FinancialFrame {
  std::vector<std::string> series_keys;
  std::vector<std::vector<double>> train_history;

  std::vector<std::int32_t> series;
  std::vector<int> product;
  std::vector<int> group;
  std::vector<int> zone;
  std::vector<Date> dates;
  std::vector<double> y_true;
  std::vector<double> y_pred;
  std::vector<double> real_price;
  std::vector<double> cogs;
  std::vector<double> rebate;

  std::size_t rows() const { return y_true.size(); }
  double unit_margin(std::size_t i) const { return real_price[i] - cogs[i] + rebate[i]; }
  double true_revenue(std::size_t i) const { return y_true[i] * real_price[i]; }
  double pred_revenue(std::size_t i) const { return y_pred[i] * real_price[i]; }
  double true_profit(std::size_t i) const { return y_true[i] * unit_margin(i); }
  double pred_profit(std::size_t i) const { return y_pred[i] * unit_margin(i); }

  void validate() const;
};

// Frame over `rows` of `m` with predictions `pred` (one per row). Histories
// are the observed training targets of each series.
FinancialFrame build_frame(const FeatureMatrix& m, std::span<const std::size_t> rows, std::span<const double> pred);

// Keeps rows where keep[i] != 0; series tables are carried over unchanged.
FinancialFrame filter_frame(const FinancialFrame& frame, std::span<const std::uint8_t> keep);

struct MetricReport {
  double mse = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  double r2 = 0.0;
  double rmsse = 0.0;
  double mase = 0.0;
  double me = 0.0;
  double mfb = 0.0;
  double theils_bias = 0.0;
  double group_rev_wmape = 0.0;
  double series_rev_wmape = 0.0;
  double group_profit_wmape = 0.0;
  double series_profit_wmape = 0.0;
  double demand_error = 0.0;
  double demand_bias = 0.0;

  std::size_t rows = 0;
  std::size_t series = 0;
  std::size_t scale_excluded = 0;
  std::size_t series_rev_excluded = 0;
  std::size_t series_profit_excluded = 0;

  // The 15 metric values in table column order.
  std::vector<double> table_values() const;
};

struct EvaluationOptions {
  int bucket_days = 7;
  bool pooled_scaled_errors = false;
};

// Undefined values are NaN throughout.
double wmape(std::span<const double> y_true, std::span<const double> y_pred);

struct PointwiseMetrics {
  double mse, rmse, mae, r2, me, mfb;
};
PointwiseMetrics pointwise_suite(std::span<const double> y_true, std::span<const double> y_pred);
double theils_bias(std::span<const double> y_true, std::span<const double> y_pred);

// Mean absolute and mean squared one-step differences of a training
// history; NaN when there are fewer than two points or the series is flat.
struct NaiveScale {
  double abs;
  double sq;
};
NaiveScale naive_scale(std::span<const double> train);

struct ScaledErrors {
  double mase;
  double rmsse;
};
// NaN for both when the history has fewer than two points or zero scale.
ScaledErrors scaled_errors(std::span<const double> train, std::span<const double> y_true,
                           std::span<const double> y_pred);

struct PairMetric {
  double revenue;
  double profit;
  std::size_t revenue_excluded = 0;
  std::size_t profit_excluded = 0;
};
// Both throw Error(kEmpty) on an empty frame and Error(kNumeric) when no
// cell has a defined value.
PairMetric group_financial_wmape(const FinancialFrame& frame);
PairMetric series_financial_wmape(const FinancialFrame& frame);

struct DemandMetrics {
  double error;
  double bias;
};
DemandMetrics demand_error_bias(const FinancialFrame& frame, int bucket_days = 7);

MetricReport evaluate(const FinancialFrame& frame, const EvaluationOptions& opts = {});
// Same as evaluate(filter_frame(frame, mask)); throws Error(kEmpty) when the
// mask keeps nothing.
MetricReport masked_evaluate(const FinancialFrame& frame, std::span<const std::uint8_t> mask,
                             const EvaluationOptions& opts = {});

extern const char* const kGroupTableHeader;
extern const char* const kSummaryMetricHeader;

// One row per entry, header kGroupTableHeader, and '#' footer lines with the
// exclusion counts.
std::string group_table_csv(const std::vector<std::pair<std::string, MetricReport>>& rows);
std::string format_metric(double v);

}  // namespace shelfcast
