#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace shelfcast {

enum class Loss { kSquared, kQuantile };
enum class Growth { kLeafWise, kLevelWise };

struct GbdtConfig {
  int n_rounds = 500;
  double learning_rate = 0.05;
  int max_depth = 0;    // 0 = unlimited
  int max_leaves = 31;  // 0 = unlimited
  double min_child_weight = 1e-3;
  double lambda_l2 = 1.0;
  double min_split_gain = 0.0;
  int n_bins = 255;
  double subsample = 1.0;
  double colsample = 1.0;
  Loss loss = Loss::kSquared;
  double alpha = 0.5;  // quantile level for Loss::kQuantile
  Growth growth = Growth::kLeafWise;
  std::uint64_t seed = 0;

  // Throws Error(kInvalidArgument) naming the first offending field.
  void validate() const;
};

// Upper bin edges for one feature. A finite value v falls in the first bin
// whose edge is >= v (or the last value bin); NaN falls in missing_bin().
struct BinMapper {
  std::vector<double> edges;

  std::uint16_t bin(double v) const;
  std::size_t value_bins() const { return edges.size() + 1; }
  std::uint16_t missing_bin() const { return static_cast<std::uint16_t>(edges.size() + 1); }
  std::size_t codes() const { return edges.size() + 2; }
};

// Midpoints between distinct values when there are at most n_bins of them,
// otherwise interior quantiles of the finite values.
BinMapper build_bin_mapper(std::span<const double> values, int n_bins);

double split_gain(double g_left, double h_left, double g_right, double h_right, double lambda);

// Columns by name over a common row set.
struct TabularView {
  std::vector<std::string> names;
  std::vector<std::span<const double>> columns;
  std::span<const double> target;

  std::size_t rows() const { return columns.empty() ? target.size() : columns.front().size(); }
};

// Binned training set, rows stored in a canonical order that depends only on
// row contents.
struct BinnedData {
  std::vector<std::string> names;
  std::vector<BinMapper> mappers;
  std::vector<std::vector<std::uint16_t>> bins;
  std::vector<double> target;

  std::size_t rows() const { return target.size(); }
  std::size_t features() const { return names.size(); }
};

BinnedData bin_dataset(const TabularView& view, int n_bins);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  int threshold_bin = 0;
  double threshold = 0.0;
  bool default_left = false;
  int left = -1;
  int right = -1;
  double value = 0.0;
  double gain = 0.0;
  double cover = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  double predict(std::span<const double> row) const;
  std::size_t leaves() const;
  int depth() const;
};

enum class ImportanceKind { kGain, kSplitCount };

class GbdtModel {
 public:
  Loss loss = Loss::kSquared;
  double alpha = 0.5;
  double base_score = 0.0;
  double learning_rate = 1.0;
  std::vector<std::string> feature_names;
  std::vector<BinMapper> mappers;
  std::vector<Tree> trees;
  std::vector<double> importance_gain;
  std::vector<double> importance_split;
  std::vector<double> train_loss;  // after each round

  // Row-major: one row of `feature_names.size()` values.
  double predict_row(std::span<const double> row) const;
  // Maps columns by name; extra columns are ignored, absent ones are an error.
  std::vector<double> predict(const TabularView& view) const;
  // Uses only the first `n_trees` trees.
  std::vector<double> predict(const TabularView& view, std::size_t n_trees) const;

  std::map<std::string, double> feature_importance(ImportanceKind kind = ImportanceKind::kGain) const;

  std::string serialize() const;
  static GbdtModel deserialize(const std::string& text);
  void save(const std::string& path) const;
  static GbdtModel load(const std::string& path);
};

GbdtModel fit(const TabularView& view, const GbdtConfig& cfg);
GbdtModel fit_binned(const BinnedData& data, const GbdtConfig& cfg);

}  // namespace shelfcast
