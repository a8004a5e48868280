#include "shelfcast/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "shelfcast/error.hpp"
#include "shelfcast/feature_matrix.hpp"

namespace shelfcast {

void TargetEncoder::fit(std::span<const std::int32_t> categories, std::span<const double> target, double alpha,
                        double prior) {
  require(categories.size() == target.size(), "target encoder: categories and target differ in length");
  require(alpha > 0.0, "target encoder: alpha must be > 0");
  stats_.clear();
  long double total = 0.0L;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (std::isnan(target[i])) fail(ErrorCode::kNumeric, "target encoder: NaN target");
    auto& st = stats_[categories[i]];
    st.sum += target[i];
    st.count += 1.0;
    total += target[i];
  }
  alpha_ = alpha;
  if (std::isnan(prior)) {
    prior_ = target.empty() ? 0.0 : static_cast<double>(total / static_cast<long double>(target.size()));
  } else {
    prior_ = prior;
  }
}

double TargetEncoder::encode(std::int32_t category) const {
  auto it = stats_.find(category);
  if (it == stats_.end()) return prior_;
  return (it->second.sum + alpha_ * prior_) / (it->second.count + alpha_);
}

std::vector<double> TargetEncoder::encode(std::span<const std::int32_t> categories) const {
  std::vector<double> out(categories.size());
  for (std::size_t i = 0; i < categories.size(); ++i) out[i] = encode(categories[i]);
  return out;
}

std::vector<double> TargetEncoder::encode_ordered(std::span<const std::int32_t> categories,
                                                  std::span<const double> target, std::uint64_t seed) const {
  require(categories.size() == target.size(), "target encoder: categories and target differ in length");
  std::vector<std::size_t> order(categories.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates with our own index draw so the permutation does not depend
  // on the standard library's shuffle implementation.
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  std::unordered_map<std::int32_t, Stat> running;
  std::vector<double> out(categories.size());
  for (std::size_t idx : order) {
    auto& st = running[categories[idx]];
    out[idx] = (st.sum + alpha_ * prior_) / (st.count + alpha_);
    st.sum += target[idx];
    st.count += 1.0;
  }
  return out;
}

void TargetEncoder::set_state(double prior, double alpha, std::unordered_map<std::int32_t, Stat> stats) {
  prior_ = prior;
  alpha_ = alpha;
  stats_ = std::move(stats);
}

EncoderState EncoderState::fit(const FeatureMatrix& m, std::span<const std::size_t> train_rows,
                               std::span<const double> target, double alpha, std::uint64_t seed) {
  require(train_rows.size() == target.size(), "encoder fit: rows and target differ in length");
  EncoderState st;
  st.columns = m.categorical_names;
  st.alpha = alpha;
  st.seed = seed;
  std::vector<std::int32_t> cats(train_rows.size());
  for (std::size_t c = 0; c < m.categoricals.size(); ++c) {
    for (std::size_t i = 0; i < train_rows.size(); ++i) cats[i] = m.categoricals[c][train_rows[i]];
    TargetEncoder enc;
    enc.fit(cats, target, alpha);
    st.encoders.push_back(std::move(enc));
  }
  return st;
}

std::vector<std::vector<double>> EncoderState::transform(const FeatureMatrix& m, std::span<const std::size_t> rows,
                                                         bool ordered, std::span<const double> target) const {
  if (ordered) require(target.size() == rows.size(), "ordered encoding needs the fitting targets");
  std::vector<std::vector<double>> out;
  std::vector<std::int32_t> cats(rows.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& col = m.categoricals[m.categorical_index(columns[c])];
    for (std::size_t i = 0; i < rows.size(); ++i) cats[i] = col[rows[i]];
    if (ordered) {
      out.push_back(encoders[c].encode_ordered(cats, target, seed + c));
    } else {
      out.push_back(encoders[c].encode(cats));
    }
  }
  return out;
}

std::vector<std::string> EncoderState::output_names() const {
  std::vector<std::string> names;
  for (const auto& c : columns) names.push_back("te_" + c);
  return names;
}

}  // namespace shelfcast
