#include "shelfcast/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "shelfcast/error.hpp"

namespace shelfcast {

double NaiveMeanModel::predict(const std::string& series_key, int group) const {
  if (auto it = series_mean.find(series_key); it != series_mean.end()) return it->second;
  if (auto it = group_mean.find(group); it != group_mean.end()) return it->second;
  return global_mean;
}

NaiveMeanModel naive_fit(const FeatureMatrix& m, std::span<const std::size_t> train_rows) {
  if (train_rows.empty()) fail(ErrorCode::kEmpty, "naive_fit: no training rows");
  struct Acc {
    long double sum = 0.0L;
    std::size_t count = 0;
  };
  std::map<std::int32_t, Acc> by_series;
  std::map<int, Acc> by_group;
  Acc all;
  for (std::size_t r : train_rows) {
    const double y = m.target[r];
    if (std::isnan(y)) fail(ErrorCode::kNumeric, "naive_fit: NaN target in training rows");
    const auto s = m.row_series[r];
    auto add = [y](Acc& a) {
      a.sum += y;
      ++a.count;
    };
    add(by_series[s]);
    add(by_group[m.series[static_cast<std::size_t>(s)].group]);
    add(all);
  }
  NaiveMeanModel model;
  for (const auto& [s, a] : by_series) {
    model.series_mean[m.series[static_cast<std::size_t>(s)].key] = static_cast<double>(a.sum / a.count);
  }
  for (const auto& [g, a] : by_group) model.group_mean[g] = static_cast<double>(a.sum / a.count);
  model.global_mean = static_cast<double>(all.sum / all.count);
  return model;
}

std::vector<double> naive_predict(const NaiveMeanModel& model, const FeatureMatrix& m,
                                  std::span<const std::size_t> rows) {
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& sm = m.series[static_cast<std::size_t>(m.row_series[rows[i]])];
    out[i] = model.predict(sm.key, sm.group);
  }
  return out;
}

void NaiveMeanForecaster::fit(const FeatureMatrix& m, std::span<const std::size_t> train_rows) {
  model_ = naive_fit(m, train_rows);
}

std::vector<double> NaiveMeanForecaster::predict(const FeatureMatrix& m, std::span<const std::size_t> rows) const {
  return naive_predict(model_, m, rows);
}

TabularView DenseTable::view() const {
  TabularView v;
  v.names = names;
  for (const auto& c : columns) v.columns.emplace_back(c);
  v.target = target;
  return v;
}

bool GbdtForecaster::wants(const std::string& name) const {
  return opts_.features.empty() || std::find(opts_.features.begin(), opts_.features.end(), name) != opts_.features.end();
}

DenseTable GbdtForecaster::table(const FeatureMatrix& m, std::span<const std::size_t> rows) const {
  DenseTable t;
  const auto& names = opts_.features.empty() ? m.feature_names : opts_.features;
  for (const auto& name : names) {
    if (name.rfind("te_", 0) == 0) continue;
    const auto& src = m.feature(name);
    std::vector<double> col(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) col[i] = src[rows[i]];
    t.names.push_back(name);
    t.columns.push_back(std::move(col));
  }
  t.target.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) t.target[i] = m.target[rows[i]];
  return t;
}

DenseTable GbdtForecaster::training_table(const FeatureMatrix& m, std::span<const std::size_t> rows) {
  DenseTable t = table(m, rows);
  if (opts_.encode_categoricals && !m.categorical_names.empty()) {
    encoders_ = EncoderState::fit(m, rows, t.target, opts_.encoder_alpha, opts_.seed);
    auto enc = encoders_.transform(m, rows, true, t.target);
    auto names = encoders_.output_names();
    for (std::size_t k = 0; k < enc.size(); ++k) {
      if (!wants(names[k])) continue;
      t.names.push_back(names[k]);
      t.columns.push_back(std::move(enc[k]));
    }
  } else {
    encoders_ = EncoderState{};
  }
  return t;
}

void GbdtForecaster::fit(const FeatureMatrix& m, std::span<const std::size_t> train_rows) {
  if (train_rows.empty()) fail(ErrorCode::kEmpty, "gbdt forecaster: no training rows");
  const DenseTable t = training_table(m, train_rows);
  model_ = shelfcast::fit(t.view(), opts_.gbdt);
}

std::vector<double> GbdtForecaster::predict(const FeatureMatrix& m, std::span<const std::size_t> rows) const {
  DenseTable t = table(m, rows);
  if (!encoders_.columns.empty()) {
    auto enc = encoders_.transform(m, rows, false);
    auto names = encoders_.output_names();
    for (std::size_t k = 0; k < enc.size(); ++k) {
      if (!wants(names[k])) continue;
      t.names.push_back(names[k]);
      t.columns.push_back(std::move(enc[k]));
    }
  }
  return model_.predict(t.view());
}

namespace {

std::mutex& registry_mutex() {
  static std::mutex mu;
  return mu;
}

std::map<std::string, ForecasterFactory>& registry() {
  static std::map<std::string, ForecasterFactory> r = {
      {"gbdt", [](const ForecasterOptions& o) { return std::unique_ptr<Forecaster>(new GbdtForecaster(o)); }},
      {"naive", [](const ForecasterOptions&) { return std::unique_ptr<Forecaster>(new NaiveMeanForecaster()); }},
  };
  return r;
}

}  // namespace

void register_forecaster(const std::string& name, ForecasterFactory factory) {
  require(!name.empty() && factory != nullptr, "register_forecaster: need a name and a factory");
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(factory);
}

std::unique_ptr<Forecaster> make_forecaster(const std::string& name, const ForecasterOptions& opts) {
  ForecasterFactory f;
  {
    std::lock_guard lock(registry_mutex());
    auto it = registry().find(name);
    if (it == registry().end()) fail(ErrorCode::kInvalidArgument, "unknown model '" + name + "'");
    f = it->second;
  }
  return f(opts);
}

std::vector<std::string> forecaster_names() {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

}  // namespace shelfcast
