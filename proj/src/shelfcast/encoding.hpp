#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace shelfcast {

class FeatureMatrix;

// Smoothed target statistics for one categorical column:
// enc(c) = (sum_c + alpha * prior) / (count_c + alpha).
class TargetEncoder {
 public:
  struct Stat {
    double sum = 0.0;
    double count = 0.0;
  };

  // `prior` defaults to the mean of `target` when NaN.
  void fit(std::span<const std::int32_t> categories, std::span<const double> target, double alpha,
           double prior = std::numeric_limits<double>::quiet_NaN());

  double encode(std::int32_t category) const;
  std::vector<double> encode(std::span<const std::int32_t> categories) const;

  // Encoding of the fitting rows themselves: rows are visited in a seeded
  // permutation and each row only sees statistics of rows visited before it.
  std::vector<double> encode_ordered(std::span<const std::int32_t> categories, std::span<const double> target,
                                     std::uint64_t seed) const;

  double prior() const { return prior_; }
  double alpha() const { return alpha_; }
  const std::unordered_map<std::int32_t, Stat>& stats() const { return stats_; }

  void set_state(double prior, double alpha, std::unordered_map<std::int32_t, Stat> stats);

 private:
  double prior_ = 0.0;
  double alpha_ = 1.0;
  std::unordered_map<std::int32_t, Stat> stats_;
};

// One encoder per categorical column of a FeatureMatrix.
struct EncoderState {
  std::vector<std::string> columns;
  std::vector<TargetEncoder> encoders;
  double alpha = 1.0;
  std::uint64_t seed = 0;

  // Fits every categorical column on `train_rows`.
  static EncoderState fit(const FeatureMatrix& m, std::span<const std::size_t> train_rows,
                          std::span<const double> target, double alpha, std::uint64_t seed);

  // Encoded columns named te_<column>. With `ordered`, `rows` must be the
  // fitting rows and `target` their targets.
  std::vector<std::vector<double>> transform(const FeatureMatrix& m, std::span<const std::size_t> rows,
                                             bool ordered, std::span<const double> target = {}) const;
  std::vector<std::string> output_names() const;
};

}  // namespace shelfcast
