#include "shelfcast/feature_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "shelfcast/csv.hpp"
#include "shelfcast/error.hpp"
#include "shelfcast/preprocess.hpp"

namespace shelfcast {

void FeatureMatrix::add_feature(std::string name, std::vector<double> values) {
  require(values.size() == rows(), "feature '" + name + "' has wrong length");
  require(!has_feature(name), "duplicate feature '" + name + "'");
  feature_names.push_back(std::move(name));
  features.push_back(std::move(values));
}

bool FeatureMatrix::has_feature(std::string_view name) const {
  return std::find(feature_names.begin(), feature_names.end(), name) != feature_names.end();
}

std::size_t FeatureMatrix::feature_index(std::string_view name) const {
  auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) fail(ErrorCode::kInvalidArgument, "unknown feature '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - feature_names.begin());
}

std::size_t FeatureMatrix::categorical_index(std::string_view name) const {
  auto it = std::find(categorical_names.begin(), categorical_names.end(), name);
  if (it == categorical_names.end()) {
    fail(ErrorCode::kInvalidArgument, "unknown categorical '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - categorical_names.begin());
}

const std::vector<double>& FeatureMatrix::aux_column(std::string_view name) const {
  auto it = std::find(aux_names.begin(), aux_names.end(), name);
  if (it == aux_names.end()) fail(ErrorCode::kInvalidArgument, "unknown aux column '" + std::string(name) + "'");
  return aux[static_cast<std::size_t>(it - aux_names.begin())];
}

std::vector<std::size_t> FeatureMatrix::select_rows(SplitTag tag, bool observed_only) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rows(); ++r) {
    if (split[r] == tag && (!observed_only || observed[r])) out.push_back(r);
  }
  return out;
}

std::vector<std::size_t> FeatureMatrix::select_rows(SplitTag tag, bool observed_only, int group) const {
  std::vector<std::size_t> out;
  for (const auto& sm : series) {
    if (sm.group != group) continue;
    for (std::size_t r = sm.begin; r < sm.end; ++r) {
      if (split[r] == tag && (!observed_only || observed[r])) out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FeatureMatrix split_and_filter(const SalesPanel& panel, const ImputationMask& mask, const SplitSpec& spec) {
  require(mask.row_count() == panel.row_count(), "split_and_filter: mask not aligned with panel");
  require(spec.min_train_points >= 0, "split_and_filter: min_train_points must be >= 0");
  if (panel.series_count() == 0) fail(ErrorCode::kEmpty, "split_and_filter: panel is empty");
  if (!(panel.first_date() < spec.cutoff && spec.cutoff <= panel.last_date())) {
    fail(ErrorCode::kInvalidArgument, "split cutoff " + format_date(spec.cutoff) + " is outside the panel range " +
                                          format_date(panel.first_date()) + ".." + format_date(panel.last_date()));
  }
  const auto rel = relative_prices(panel);
  const auto& obs_sales = mask.field(Field::kSales);

  FeatureMatrix m;
  m.group_names = panel.groups;
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < panel.series_count(); ++s) {
    const auto& sp = panel.series[s];
    std::size_t train_obs = 0;
    std::size_t valid_obs = 0;
    for (std::int32_t i = 0; i < sp.length; ++i) {
      if (!obs_sales[sp.offset + i]) continue;
      if (sp.first + i < spec.cutoff) {
        ++train_obs;
      } else {
        ++valid_obs;
      }
    }
    if (spec.require_both_periods && (train_obs == 0 || valid_obs == 0)) {
      ++m.dropped_both_periods;
      continue;
    }
    if (train_obs < static_cast<std::size_t>(spec.min_train_points)) {
      ++m.dropped_min_train;
      continue;
    }
    keep.push_back(s);
  }
  if (keep.empty()) {
    const char* binding = m.dropped_min_train > 0 && m.dropped_both_periods == 0 ? "min_train_points"
                          : m.dropped_min_train > 0                          ? "require_both_periods and min_train_points"
                                                                              : "require_both_periods";
    fail(ErrorCode::kEmpty, std::string("split_and_filter: no series left after filter ") + binding);
  }

  std::size_t total = 0;
  for (std::size_t s : keep) total += static_cast<std::size_t>(panel.series[s].length);

  static const char* kNumericNames[] = {"dow",   "month",      "day_of_month", "real_price", "real_competitor_price",
                                        "promo_flag", "promo_count", "stock", "cpi", "salary_regional",
                                        "population", "out_store_rel", "in_store_rel"};
  constexpr std::size_t kNumeric = std::size(kNumericNames);
  m.feature_names.assign(std::begin(kNumericNames), std::end(kNumericNames));
  m.features.assign(kNumeric, std::vector<double>(total));
  m.categorical_names = {"series", "product", "store", "group", "uon", "zone"};
  m.categoricals.assign(m.categorical_names.size(), std::vector<std::int32_t>(total));
  m.aux_names = {"real_price", "real_cogs", "real_rebate"};
  m.aux.assign(3, std::vector<double>(total));
  m.row_series.resize(total);
  m.dates.resize(total);
  m.target.resize(total);
  m.observed.resize(total);
  m.split.resize(total);

  std::size_t r = 0;
  for (std::size_t s : keep) {
    const auto& sp = panel.series[s];
    SeriesMeta meta;
    meta.key = panel.series_key(s);
    meta.product = sp.product;
    meta.store = sp.store;
    meta.group = panel.group_of(s);
    meta.uon = panel.uon_of(s);
    meta.zone = panel.zone_of(s);
    meta.begin = r;
    const auto series_index = static_cast<std::int32_t>(m.series.size());
    for (std::int32_t i = 0; i < sp.length; ++i, ++r) {
      const std::size_t pr = sp.offset + static_cast<std::size_t>(i);
      const Date d = sp.first + i;
      m.row_series[r] = series_index;
      m.dates[r] = d;
      m.target[r] = panel.column(Field::kSales)[pr];
      m.observed[r] = obs_sales[pr];
      m.split[r] = d < spec.cutoff ? SplitTag::kTrain : SplitTag::kValid;
      const double vals[kNumeric] = {static_cast<double>(weekday(d)),
                                     static_cast<double>(month_of(d)),
                                     static_cast<double>(day_of_month(d)),
                                     panel.column(Field::kPrice)[pr],
                                     panel.column(Field::kCompetitorPrice)[pr],
                                     panel.column(Field::kPromoFlag)[pr],
                                     panel.column(Field::kPromoCount)[pr],
                                     panel.column(Field::kStock)[pr],
                                     panel.column(Field::kCpi)[pr],
                                     panel.column(Field::kSalaryRegional)[pr],
                                     panel.column(Field::kPopulation)[pr],
                                     rel.out_store[pr],
                                     rel.in_store[pr]};
      for (std::size_t k = 0; k < kNumeric; ++k) m.features[k][r] = vals[k];
      const std::int32_t cats[] = {series_index, meta.product, meta.store, meta.group, meta.uon, meta.zone};
      for (std::size_t k = 0; k < m.categoricals.size(); ++k) m.categoricals[k][r] = cats[k];
      m.aux[0][r] = panel.column(Field::kPrice)[pr];
      m.aux[1][r] = panel.column(Field::kCogs)[pr];
      m.aux[2][r] = panel.column(Field::kRebate)[pr];
    }
    meta.end = r;
    m.series.push_back(std::move(meta));
  }
  return m;
}

namespace {

const std::vector<double>& source_column(const FeatureMatrix& m, std::string_view source) {
  if (source == "target") return m.target;
  return m.feature(source);
}

std::string source_label(std::string_view source) {
  return source == "target" ? std::string("sales") : std::string(source);
}

}  // namespace

void add_lag_features(FeatureMatrix& m, std::string_view source, std::span<const int> lags) {
  for (int k : lags) require(k >= 1, "lag offsets must be >= 1");
  const std::vector<double> src = source_column(m, source);
  for (int k : lags) {
    std::vector<double> col(m.rows(), std::nan(""));
    for (const auto& sm : m.series) {
      for (std::size_t r = sm.begin; r < sm.end; ++r) {
        if (r >= sm.begin + static_cast<std::size_t>(k)) {
          const std::size_t q = r - static_cast<std::size_t>(k);
          if (m.dates[r] - m.dates[q] == k) col[r] = src[q];
        }
      }
    }
    m.add_feature(source_label(source) + "_lag_" + std::to_string(k), std::move(col));
  }
}

const char* rolling_stat_name(RollingStat s) {
  switch (s) {
    case RollingStat::kMean: return "mean";
    case RollingStat::kStd: return "std";
    case RollingStat::kNonzeroRate: return "nzrate";
  }
  return "?";
}

void add_rolling_features(FeatureMatrix& m, std::string_view source, std::span<const int> windows,
                          std::span<const RollingStat> stats) {
  for (int w : windows) require(w >= 1, "rolling windows must be >= 1");
  const std::vector<double> src = source_column(m, source);
  for (int w : windows) {
    std::vector<std::vector<double>> cols(stats.size(), std::vector<double>(m.rows(), std::nan("")));
    for (const auto& sm : m.series) {
      for (std::size_t r = sm.begin; r < sm.end; ++r) {
        double sum = 0.0;
        std::size_t count = 0;
        std::size_t nonzero = 0;
        const Date lo = m.dates[r] - w;
        for (std::size_t q = r; q > sm.begin;) {
          --q;
          if (m.dates[q] < lo) break;
          const double v = src[q];
          if (std::isnan(v)) continue;
          sum += v;
          ++count;
          nonzero += v != 0.0;
        }
        if (count == 0) continue;
        const double mean = sum / static_cast<double>(count);
        for (std::size_t k = 0; k < stats.size(); ++k) {
          switch (stats[k]) {
            case RollingStat::kMean:
              cols[k][r] = mean;
              break;
            case RollingStat::kStd: {
              double ss = 0.0;
              for (std::size_t q = r; q > sm.begin;) {
                --q;
                if (m.dates[q] < lo) break;
                if (!std::isnan(src[q])) ss += (src[q] - mean) * (src[q] - mean);
              }
              cols[k][r] = std::sqrt(ss / static_cast<double>(count));
              break;
            }
            case RollingStat::kNonzeroRate:
              cols[k][r] = static_cast<double>(nonzero) / static_cast<double>(count);
              break;
          }
        }
      }
    }
    for (std::size_t k = 0; k < stats.size(); ++k) {
      m.add_feature(source_label(source) + "_roll" + std::to_string(w) + "_" + rolling_stat_name(stats[k]),
                    std::move(cols[k]));
    }
  }
}

void add_default_history_features(FeatureMatrix& m, const FeatureOptions& opts) {
  add_lag_features(m, "target", opts.lags);
  static constexpr RollingStat kSalesStats[] = {RollingStat::kMean, RollingStat::kStd, RollingStat::kNonzeroRate};
  add_rolling_features(m, "target", opts.windows, kSalesStats);
  if (opts.lag_promotions) {
    add_lag_features(m, "promo_flag", opts.lags);
    static constexpr RollingStat kPromoStats[] = {RollingStat::kMean};
    add_rolling_features(m, "promo_flag", opts.windows, kPromoStats);
  }
}

void write_feature_matrix(const FeatureMatrix& m, const std::string& csv_path, const std::string& schema_path) {
  std::string schema;
  schema += "# group_names";
  for (const auto& g : m.group_names) schema += "," + g;
  schema += "\nseries_key,key\ndate,key\ntarget,target\nobserved,mask\nsplit,tag\n";
  for (const auto& n : m.feature_names) schema += n + ",feature\n";
  for (const auto& n : m.categorical_names) schema += n + ",categorical\n";
  for (const auto& n : m.aux_names) schema += n + ",aux\n";

  std::string csv = "series_key,date,target,observed,split";
  for (const auto& n : m.feature_names) csv += "," + n;
  for (const auto& n : m.categorical_names) csv += "," + n;
  for (const auto& n : m.aux_names) csv += "," + n;
  csv += '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    csv += m.series[m.row_series[r]].key;
    csv += ',' + format_date(m.dates[r]);
    csv += ',' + format_number(m.target[r]);
    csv += m.observed[r] ? ",1" : ",0";
    csv += m.split[r] == SplitTag::kTrain ? ",train" : ",valid";
    for (const auto& col : m.features) csv += ',' + format_number(col[r]);
    for (const auto& col : m.categoricals) csv += ',' + std::to_string(col[r]);
    for (const auto& col : m.aux) csv += ',' + format_number(col[r]);
    csv += '\n';
  }
  write_file_atomic(schema_path, schema);
  write_file_atomic(csv_path, csv);
}

FeatureMatrix read_feature_matrix(const std::string& csv_path, const std::string& schema_path) {
  FeatureMatrix m;
  std::vector<std::pair<std::string, std::string>> roles;
  {
    std::istringstream in(read_file(schema_path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto f = split_csv_line(line);
      if (f[0] == "# group_names") {
        for (std::size_t i = 1; i < f.size(); ++i) m.group_names.emplace_back(f[i]);
        continue;
      }
      if (f.size() != 2) fail(ErrorCode::kParse, "bad schema line: " + line);
      roles.emplace_back(std::string(f[0]), std::string(f[1]));
    }
  }
  for (const auto& [name, role] : roles) {
    if (role == "feature") {
      m.feature_names.push_back(name);
    } else if (role == "categorical") {
      m.categorical_names.push_back(name);
    } else if (role == "aux") {
      m.aux_names.push_back(name);
    } else if (role != "key" && role != "target" && role != "mask" && role != "tag") {
      fail(ErrorCode::kParse, "unknown column role '" + role + "'");
    }
  }
  m.features.resize(m.feature_names.size());
  m.categoricals.resize(m.categorical_names.size());
  m.aux.resize(m.aux_names.size());

  std::istringstream in(read_file(csv_path));
  std::string line;
  std::getline(in, line);
  const auto header = split_csv_line(line);
  if (header.size() != roles.size()) fail(ErrorCode::kParse, "feature matrix header does not match schema");
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (header[i] != roles[i].first) fail(ErrorCode::kParse, "column order does not match schema");
  }
  std::unordered_map<std::string, std::int32_t> series_index;
  const std::size_t nf = m.feature_names.size();
  const std::size_t nc = m.categorical_names.size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != roles.size()) fail(ErrorCode::kParse, "feature matrix row has wrong field count");
    auto [it, inserted] = series_index.try_emplace(std::string(f[0]), static_cast<std::int32_t>(m.series.size()));
    if (inserted) {
      SeriesMeta meta;
      meta.key = std::string(f[0]);
      meta.begin = m.rows();
      m.series.push_back(meta);
    } else if (it->second != static_cast<std::int32_t>(m.series.size()) - 1) {
      fail(ErrorCode::kParse, "feature matrix rows are not grouped by series");
    }
    m.row_series.push_back(it->second);
    m.dates.push_back(parse_date(f[1]));
    m.target.push_back(parse_number(f[2]));
    m.observed.push_back(f[3] == "1" ? 1 : 0);
    m.split.push_back(f[4] == "train" ? SplitTag::kTrain : SplitTag::kValid);
    for (std::size_t k = 0; k < nf; ++k) m.features[k].push_back(parse_number(f[5 + k]));
    for (std::size_t k = 0; k < nc; ++k) m.categoricals[k].push_back(static_cast<std::int32_t>(parse_integer(f[5 + nf + k])));
    for (std::size_t k = 0; k < m.aux.size(); ++k) m.aux[k].push_back(parse_number(f[5 + nf + nc + k]));
    m.series.back().end = m.rows();
  }
  auto cat_or = [&](std::string_view name) -> const std::vector<std::int32_t>* {
    auto it = std::find(m.categorical_names.begin(), m.categorical_names.end(), name);
    return it == m.categorical_names.end() ? nullptr : &m.categoricals[it - m.categorical_names.begin()];
  };
  for (auto& sm : m.series) {
    if (const auto* c = cat_or("product")) sm.product = (*c)[sm.begin];
    if (const auto* c = cat_or("store")) sm.store = (*c)[sm.begin];
    if (const auto* c = cat_or("group")) sm.group = (*c)[sm.begin];
    if (const auto* c = cat_or("uon")) sm.uon = (*c)[sm.begin];
    if (const auto* c = cat_or("zone")) sm.zone = (*c)[sm.begin];
  }
  return m;
}

}  // namespace shelfcast
