#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shelfcast/date.hpp"
#include "shelfcast/panel.hpp"

namespace shelfcast {

enum class SplitTag : std::uint8_t { kTrain = 0, kValid = 1 };

struct SplitSpec {
  Date cutoff;
  int min_train_points = 0;
  bool require_both_periods = true;
};

struct SeriesMeta {
  std::string key;
  int product = 0;
  int store = 0;
  int group = 0;
  int uon = 0;
  int zone = 0;
  std::size_t begin = 0;  // first row in the matrix
  std::size_t end = 0;    // one past the last row
};

// Model-ready tabular view. Rows are grouped by series and sorted by date
// within a series. Feature columns are real-valued (NaN = missing);
// categorical columns hold integer codes and are target-encoded at fit time;
// auxiliary columns carry the real price, cogs and rebate used for financial
// evaluation.
class FeatureMatrix {
 public:
  std::vector<std::string> group_names;
  std::vector<SeriesMeta> series;

  std::vector<std::int32_t> row_series;
  std::vector<Date> dates;
  std::vector<double> target;
  std::vector<std::uint8_t> observed;
  std::vector<SplitTag> split;

  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> features;
  std::vector<std::string> categorical_names;
  std::vector<std::vector<std::int32_t>> categoricals;
  std::vector<std::string> aux_names;
  std::vector<std::vector<double>> aux;

  // Bookkeeping from split_and_filter.
  std::size_t dropped_both_periods = 0;
  std::size_t dropped_min_train = 0;

  std::size_t rows() const { return dates.size(); }

  void add_feature(std::string name, std::vector<double> values);
  // Index of a feature column; throws if absent.
  std::size_t feature_index(std::string_view name) const;
  bool has_feature(std::string_view name) const;
  const std::vector<double>& feature(std::string_view name) const { return features[feature_index(name)]; }
  std::size_t categorical_index(std::string_view name) const;
  const std::vector<double>& aux_column(std::string_view name) const;

  // Rows tagged `tag`; with `observed_only`, rows whose target was observed.
  std::vector<std::size_t> select_rows(SplitTag tag, bool observed_only) const;
  // Same, restricted to one product group.
  std::vector<std::size_t> select_rows(SplitTag tag, bool observed_only, int group) const;
};

// Builds the base matrix from a prepared (imputed and deflated) panel: tags
// rows train/valid at the cutoff, drops series that fail the filters, and
// adds calendar, price, relative-price, promotion, stock and macro columns.
// Observed flags come from `mask` (sales cells). Throws Error(kEmpty)
// naming the binding filter when nothing survives.
FeatureMatrix split_and_filter(const SalesPanel& panel, const ImputationMask& mask, const SplitSpec& spec);

// `source` is "target" or the name of an existing feature column.
void add_lag_features(FeatureMatrix& m, std::string_view source, std::span<const int> lags);

enum class RollingStat { kMean, kStd, kNonzeroRate };
const char* rolling_stat_name(RollingStat s);

// Windows cover [t - w, t - 1]: strictly before the row. Missing values are
// skipped; an all-missing window yields NaN.
void add_rolling_features(FeatureMatrix& m, std::string_view source, std::span<const int> windows,
                          std::span<const RollingStat> stats);

struct FeatureOptions {
  std::vector<int> lags = {1, 7, 14, 28};
  std::vector<int> windows = {7, 28};
  bool lag_promotions = true;
};

// Lag and rolling features for sales (and promotions when enabled).
void add_default_history_features(FeatureMatrix& m, const FeatureOptions& opts);

// CSV with a sidecar schema listing column roles (key, target, mask, tag,
// feature, categorical, aux).
void write_feature_matrix(const FeatureMatrix& m, const std::string& csv_path, const std::string& schema_path);
FeatureMatrix read_feature_matrix(const std::string& csv_path, const std::string& schema_path);

}  // namespace shelfcast
