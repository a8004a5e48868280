#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "shelfcast/encoding.hpp"
#include "shelfcast/feature_matrix.hpp"
#include "shelfcast/gbdt.hpp"

namespace shelfcast {

// A model the experiment harness can fit and score. `fit` trains on the
// given rows of the matrix using `m.target`; `predict` must return one value
// per requested row.
class Forecaster {
 public:
  virtual ~Forecaster() = default;
  virtual std::string name() const = 0;
  virtual void fit(const FeatureMatrix& m, std::span<const std::size_t> train_rows) = 0;
  virtual std::vector<double> predict(const FeatureMatrix& m, std::span<const std::size_t> rows) const = 0;
};

struct NaiveMeanModel {
  std::unordered_map<std::string, double> series_mean;
  std::unordered_map<int, double> group_mean;
  double global_mean = 0.0;

  double predict(const std::string& series_key, int group) const;
};

NaiveMeanModel naive_fit(const FeatureMatrix& m, std::span<const std::size_t> train_rows);
std::vector<double> naive_predict(const NaiveMeanModel& model, const FeatureMatrix& m,
                                  std::span<const std::size_t> rows);

class NaiveMeanForecaster final : public Forecaster {
 public:
  std::string name() const override { return "naive"; }
  void fit(const FeatureMatrix& m, std::span<const std::size_t> train_rows) override;
  std::vector<double> predict(const FeatureMatrix& m, std::span<const std::size_t> rows) const override;
  const NaiveMeanModel& model() const { return model_; }

 private:
  NaiveMeanModel model_;
};

struct ForecasterOptions {
  GbdtConfig gbdt;
  // Feature columns to use; empty means all numeric features.
  std::vector<std::string> features;
  bool encode_categoricals = true;
  double encoder_alpha = 1.0;
  std::uint64_t seed = 0;
};

// Gathers the selected feature columns (and target-encoded categoricals) of
// `rows` into a dense table.
struct DenseTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<double> target;

  TabularView view() const;
};

class GbdtForecaster final : public Forecaster {
 public:
  explicit GbdtForecaster(ForecasterOptions opts) : opts_(std::move(opts)) {}
  std::string name() const override { return "gbdt"; }
  void fit(const FeatureMatrix& m, std::span<const std::size_t> train_rows) override;
  std::vector<double> predict(const FeatureMatrix& m, std::span<const std::size_t> rows) const override;

  const GbdtModel& model() const { return model_; }
  const EncoderState& encoders() const { return encoders_; }

  // Training table for `rows`: ordered encodings, as used by fit.
  DenseTable training_table(const FeatureMatrix& m, std::span<const std::size_t> rows);

 private:
  DenseTable table(const FeatureMatrix& m, std::span<const std::size_t> rows) const;
  bool wants(const std::string& name) const;

  ForecasterOptions opts_;
  EncoderState encoders_;
  GbdtModel model_;
};

using ForecasterFactory = std::function<std::unique_ptr<Forecaster>(const ForecasterOptions&)>;

// Built-ins are "gbdt" and "naive".
void register_forecaster(const std::string& name, ForecasterFactory factory);
std::unique_ptr<Forecaster> make_forecaster(const std::string& name, const ForecasterOptions& opts);
std::vector<std::string> forecaster_names();

}  // namespace shelfcast
