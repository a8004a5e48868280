#include "shelfcast/metrics.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "shelfcast/csv.hpp"
#include "shelfcast/error.hpp"
#include "shelfcast/feature_matrix.hpp"

namespace shelfcast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ratio(long double num, long double den) {
  if (!(den > 0.0L)) return kNaN;
  return static_cast<double>(num / den);
}

double mean_finite(const std::vector<double>& v, std::size_t& excluded) {
  long double s = 0.0L;
  std::size_t n = 0;
  excluded = 0;
  for (double x : v) {
    if (std::isfinite(x)) {
      s += x;
      ++n;
    } else {
      ++excluded;
    }
  }
  return n == 0 ? kNaN : static_cast<double>(s / static_cast<long double>(n));
}

}  // namespace

void FinancialFrame::validate() const {
  const std::size_t n = rows();
  require(y_pred.size() == n && series.size() == n && product.size() == n && group.size() == n &&
              zone.size() == n && dates.size() == n && real_price.size() == n && cogs.size() == n &&
              rebate.size() == n,
          "financial frame: columns differ in length");
  require(train_history.size() == series_keys.size(), "financial frame: history table size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    require(series[i] >= 0 && static_cast<std::size_t>(series[i]) < series_keys.size(),
            "financial frame: series index out of range");
  }
}

FinancialFrame build_frame(const FeatureMatrix& m, std::span<const std::size_t> rows, std::span<const double> pred) {
  require(rows.size() == pred.size(), "build_frame: one prediction per row is required");
  FinancialFrame f;
  for (const auto& sm : m.series) {
    f.series_keys.push_back(sm.key);
    std::vector<double> hist;
    for (std::size_t r = sm.begin; r < sm.end; ++r) {
      if (m.split[r] == SplitTag::kTrain && m.observed[r] && !std::isnan(m.target[r])) hist.push_back(m.target[r]);
    }
    f.train_history.push_back(std::move(hist));
  }
  const auto& price = m.aux_column("real_price");
  const auto& cogs = m.aux_column("real_cogs");
  const auto& rebate = m.aux_column("real_rebate");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    const auto& sm = m.series[static_cast<std::size_t>(m.row_series[r])];
    f.series.push_back(m.row_series[r]);
    f.product.push_back(sm.product);
    f.group.push_back(sm.group);
    f.zone.push_back(sm.zone);
    f.dates.push_back(m.dates[r]);
    f.y_true.push_back(m.target[r]);
    f.y_pred.push_back(pred[i]);
    f.real_price.push_back(price[r]);
    f.cogs.push_back(cogs[r]);
    f.rebate.push_back(rebate[r]);
  }
  return f;
}

FinancialFrame filter_frame(const FinancialFrame& frame, std::span<const std::uint8_t> keep) {
  require(keep.size() == frame.rows(), "filter_frame: mask not aligned with frame");
  FinancialFrame f;
  f.series_keys = frame.series_keys;
  f.train_history = frame.train_history;
  for (std::size_t i = 0; i < frame.rows(); ++i) {
    if (!keep[i]) continue;
    f.series.push_back(frame.series[i]);
    f.product.push_back(frame.product[i]);
    f.group.push_back(frame.group[i]);
    f.zone.push_back(frame.zone[i]);
    f.dates.push_back(frame.dates[i]);
    f.y_true.push_back(frame.y_true[i]);
    f.y_pred.push_back(frame.y_pred[i]);
    f.real_price.push_back(frame.real_price[i]);
    f.cogs.push_back(frame.cogs[i]);
    f.rebate.push_back(frame.rebate[i]);
  }
  return f;
}

std::vector<double> MetricReport::table_values() const {
  return {mse,
          rmse,
          mae,
          r2,
          group_rev_wmape,
          series_rev_wmape,
          group_profit_wmape,
          series_profit_wmape,
          demand_error,
          demand_bias,
          rmsse,
          mase,
          me,
          mfb,
          theils_bias};
}

double wmape(std::span<const double> y_true, std::span<const double> y_pred) {
  require(y_true.size() == y_pred.size(), "wmape: length mismatch");
  long double num = 0.0L;
  long double den = 0.0L;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    num += std::fabs(static_cast<long double>(y_pred[i]) - y_true[i]);
    den += y_true[i];
  }
  return ratio(num, den);
}

PointwiseMetrics pointwise_suite(std::span<const double> y_true, std::span<const double> y_pred) {
  require(y_true.size() == y_pred.size(), "pointwise metrics: length mismatch");
  const std::size_t n = y_true.size();
  if (n == 0) fail(ErrorCode::kEmpty, "pointwise metrics: no rows");
  long double sse = 0.0L;
  long double sae = 0.0L;
  long double se = 0.0L;
  long double st = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double e = static_cast<long double>(y_pred[i]) - y_true[i];
    sse += e * e;
    sae += std::fabs(e);
    se += e;
    st += y_true[i];
  }
  const long double mean_t = st / n;
  long double sst = 0.0L;
  for (double t : y_true) sst += (t - mean_t) * (t - mean_t);
  PointwiseMetrics p{};
  p.mse = static_cast<double>(sse / n);
  p.rmse = std::sqrt(p.mse);
  p.mae = static_cast<double>(sae / n);
  p.r2 = sst > 0.0L ? static_cast<double>(1.0L - sse / sst) : kNaN;
  p.me = static_cast<double>(se / n);
  p.mfb = ratio(se, st);
  return p;
}

double theils_bias(std::span<const double> y_true, std::span<const double> y_pred) {
  const auto p = pointwise_suite(y_true, y_pred);
  if (!(p.mse > 0.0)) return 0.0;
  return std::min(1.0, p.me * p.me / p.mse);
}

NaiveScale naive_scale(std::span<const double> train) {
  if (train.size() < 2) return {kNaN, kNaN};
  long double sa = 0.0L;
  long double ss = 0.0L;
  for (std::size_t t = 1; t < train.size(); ++t) {
    const long double d = static_cast<long double>(train[t]) - train[t - 1];
    sa += std::fabs(d);
    ss += d * d;
  }
  const long double k = static_cast<long double>(train.size() - 1);
  if (!(sa > 0.0L)) return {kNaN, kNaN};
  return {static_cast<double>(sa / k), static_cast<double>(ss / k)};
}

ScaledErrors scaled_errors(std::span<const double> train, std::span<const double> y_true,
                           std::span<const double> y_pred) {
  require(y_true.size() == y_pred.size(), "scaled errors: length mismatch");
  const NaiveScale sc = naive_scale(train);
  if (std::isnan(sc.abs) || y_true.empty()) return {kNaN, kNaN};
  long double ea = 0.0L;
  long double es = 0.0L;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const long double e = static_cast<long double>(y_pred[i]) - y_true[i];
    ea += std::fabs(e);
    es += e * e;
  }
  const long double n = static_cast<long double>(y_true.size());
  return {static_cast<double>((ea / n) / sc.abs), static_cast<double>(std::sqrt((es / n) / sc.sq))};
}

namespace {

struct Cell {
  long double true_rev = 0.0L;
  long double pred_rev = 0.0L;
  long double true_profit = 0.0L;
  long double pred_profit = 0.0L;
};

PairMetric group_wmape_impl(const FinancialFrame& f) {
  std::map<std::pair<int, int>, Cell> cells;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    auto& c = cells[{f.zone[i], f.group[i]}];
    c.true_rev += f.true_revenue(i);
    c.pred_rev += f.pred_revenue(i);
    c.true_profit += f.true_profit(i);
    c.pred_profit += f.pred_profit(i);
  }
  long double nr = 0.0L, dr = 0.0L, np = 0.0L, dp = 0.0L;
  for (const auto& [k, c] : cells) {
    nr += std::fabs(c.pred_rev - c.true_rev);
    dr += c.true_rev;
    np += std::fabs(c.pred_profit - c.true_profit);
    dp += c.true_profit;
  }
  return {ratio(nr, dr), ratio(np, dp)};
}

PairMetric series_wmape_impl(const FinancialFrame& f) {
  std::map<int, Cell> products;
  for (std::size_t i = 0; i < f.rows(); ++i) {
    auto& c = products[f.product[i]];
    c.true_rev += f.true_revenue(i);
    c.pred_rev += f.pred_revenue(i);
    c.true_profit += f.true_profit(i);
    c.pred_profit += f.pred_profit(i);
  }
  std::vector<double> rev;
  std::vector<double> profit;
  for (const auto& [k, c] : products) {
    rev.push_back(ratio(std::fabs(c.pred_rev - c.true_rev), c.true_rev));
    profit.push_back(ratio(std::fabs(c.pred_profit - c.true_profit), c.true_profit));
  }
  PairMetric out{};
  out.revenue = mean_finite(rev, out.revenue_excluded);
  out.profit = mean_finite(profit, out.profit_excluded);
  return out;
}

}  // namespace

PairMetric group_financial_wmape(const FinancialFrame& frame) {
  frame.validate();
  if (frame.rows() == 0) fail(ErrorCode::kEmpty, "group wmape: empty frame");
  auto out = group_wmape_impl(frame);
  if (std::isnan(out.revenue) && std::isnan(out.profit)) {
    fail(ErrorCode::kNumeric, "group wmape: true totals are zero in every cell");
  }
  return out;
}

PairMetric series_financial_wmape(const FinancialFrame& frame) {
  frame.validate();
  if (frame.rows() == 0) fail(ErrorCode::kEmpty, "series wmape: empty frame");
  auto out = series_wmape_impl(frame);
  if (std::isnan(out.revenue) && std::isnan(out.profit)) {
    fail(ErrorCode::kNumeric, "series wmape: every series has zero true totals");
  }
  return out;
}

DemandMetrics demand_error_bias(const FinancialFrame& frame, int bucket_days) {
  require(bucket_days >= 1, "demand error: bucket length must be >= 1");
  std::map<std::pair<std::int32_t, std::int32_t>, std::pair<long double, long double>> buckets;
  for (std::size_t i = 0; i < frame.rows(); ++i) {
    auto& b = buckets[{frame.series[i], bucket_index(frame.dates[i], bucket_days)}];
    b.first += frame.y_true[i];
    b.second += frame.y_pred[i];
  }
  long double abs_err = 0.0L;
  long double err = 0.0L;
  long double total = 0.0L;
  for (const auto& [k, b] : buckets) {
    abs_err += std::fabs(b.second - b.first);
    err += b.second - b.first;
    total += b.first;
  }
  return {ratio(abs_err, total), ratio(err, total)};
}

MetricReport evaluate(const FinancialFrame& frame, const EvaluationOptions& opts) {
  frame.validate();
  if (frame.rows() == 0) fail(ErrorCode::kEmpty, "evaluate: no rows to score");
  MetricReport r;
  r.rows = frame.rows();
  const auto p = pointwise_suite(frame.y_true, frame.y_pred);
  r.mse = p.mse;
  r.rmse = p.rmse;
  r.mae = p.mae;
  r.r2 = p.r2;
  r.me = p.me;
  r.mfb = p.mfb;
  r.theils_bias = p.mse > 0.0 ? std::min(1.0, p.me * p.me / p.mse) : 0.0;

  const auto g = group_wmape_impl(frame);
  r.group_rev_wmape = g.revenue;
  r.group_profit_wmape = g.profit;
  const auto s = series_wmape_impl(frame);
  r.series_rev_wmape = s.revenue;
  r.series_profit_wmape = s.profit;
  r.series_rev_excluded = s.revenue_excluded;
  r.series_profit_excluded = s.profit_excluded;

  const auto d = demand_error_bias(frame, opts.bucket_days);
  r.demand_error = d.error;
  r.demand_bias = d.bias;

  std::map<std::int32_t, std::pair<std::vector<double>, std::vector<double>>> by_series;
  for (std::size_t i = 0; i < frame.rows(); ++i) {
    auto& e = by_series[frame.series[i]];
    e.first.push_back(frame.y_true[i]);
    e.second.push_back(frame.y_pred[i]);
  }
  r.series = by_series.size();
  if (!opts.pooled_scaled_errors) {
    std::vector<double> mase;
    std::vector<double> rmsse;
    for (const auto& [sid, e] : by_series) {
      const auto se = scaled_errors(frame.train_history[static_cast<std::size_t>(sid)], e.first, e.second);
      mase.push_back(se.mase);
      rmsse.push_back(se.rmsse);
    }
    r.mase = mean_finite(mase, r.scale_excluded);
    std::size_t ignored = 0;
    r.rmsse = mean_finite(rmsse, ignored);
  } else {
    long double sa = 0.0L;
    long double ss = 0.0L;
    std::size_t n = 0;
    for (const auto& [sid, e] : by_series) {
      const NaiveScale sc = naive_scale(frame.train_history[static_cast<std::size_t>(sid)]);
      if (std::isnan(sc.abs)) {
        ++r.scale_excluded;
        continue;
      }
      for (std::size_t i = 0; i < e.first.size(); ++i) {
        const long double err = static_cast<long double>(e.second[i]) - e.first[i];
        sa += std::fabs(err) / sc.abs;
        ss += err * err / sc.sq;
        ++n;
      }
    }
    r.mase = n == 0 ? kNaN : static_cast<double>(sa / n);
    r.rmsse = n == 0 ? kNaN : static_cast<double>(std::sqrt(ss / n));
  }
  return r;
}

MetricReport masked_evaluate(const FinancialFrame& frame, std::span<const std::uint8_t> mask,
                             const EvaluationOptions& opts) {
  require(mask.size() == frame.rows(), "masked_evaluate: mask not aligned with frame");
  bool any = false;
  for (auto m : mask) any = any || m != 0;
  if (!any) fail(ErrorCode::kEmpty, "masked_evaluate: mask excludes every row");
  return evaluate(filter_frame(frame, mask), opts);
}

const char* const kGroupTableHeader =
    "Group,MSE,RMSE,MAE,R2,Group Revenue WMAPE,Series Revenue WMAPE,Group Profit WMAPE,Series Profit WMAPE,"
    "Demand Error,Demand Bias,RMSSE,MASE,ME,MFB,Theils Bias";

const char* const kSummaryMetricHeader =
    "RMSSE,MASE,MSE,RMSE,MAE,R2,ME,MFB,Theils Bias,Group Revenue WMAPE,Series Revenue WMAPE,Group Profit WMAPE,"
    "Series Profit WMAPE,Demand Error,Demand Bias";

std::string format_metric(double v) { return std::isnan(v) ? std::string("NaN") : format_number(v); }

std::string group_table_csv(const std::vector<std::pair<std::string, MetricReport>>& rows) {
  std::string out = kGroupTableHeader;
  out += '\n';
  for (const auto& [name, rep] : rows) {
    out += name;
    for (double v : rep.table_values()) out += ',' + format_metric(v);
    out += '\n';
  }
  for (const auto& [name, rep] : rows) {
    out += "# " + name + " rows=" + std::to_string(rep.rows) + " series=" + std::to_string(rep.series) +
           " scale_excluded=" + std::to_string(rep.scale_excluded) +
           " series_revenue_excluded=" + std::to_string(rep.series_rev_excluded) +
           " series_profit_excluded=" + std::to_string(rep.series_profit_excluded) + '\n';
  }
  return out;
}

}  // namespace shelfcast
