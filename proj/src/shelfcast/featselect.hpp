#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "shelfcast/gbdt.hpp"

namespace shelfcast {

enum class Decision { kAccepted, kRejected, kTentative };
const char* decision_name(Decision d);

struct BorutaConfig {
  int max_iters = 50;
  double p_value = 0.05;
  ImportanceKind importance = ImportanceKind::kGain;
  double shadow_percentile = 100.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FeatureDecision {
  std::vector<std::string> names;
  std::vector<Decision> decisions;
  std::vector<int> hits;
  int iterations = 0;
  // trace[i][f] = 1 when feature f scored a hit in iteration i.
  std::vector<std::vector<std::uint8_t>> trace;

  // Accepted and tentative features, in input order.
  std::vector<std::string> kept() const;
  std::size_t count(Decision d) const;
  std::string to_csv() const;  // feature,decision,hits,iters
};

using BorutaTrainer = std::function<GbdtModel(const BinnedData&)>;

// Two-sided exact binomial test of `hits` successes in `n` fair trials.
double binomial_two_sided_p(int hits, int n);

FeatureDecision boruta_select(const BinnedData& data, const BorutaConfig& cfg, const BorutaTrainer& trainer);
FeatureDecision boruta_select(const TabularView& view, const BorutaConfig& cfg, const BorutaTrainer& trainer,
                              int n_bins = 255);

// Trainer fitting `cfg` on the augmented data as-is.
BorutaTrainer gbdt_trainer(const GbdtConfig& cfg);

struct PrefilterConfig {
  double max_missing = 0.8;
  double min_variance = 1e-12;
  double max_abs_correlation = 0.99;
};

struct PrefilterResult {
  std::vector<std::string> kept;
  std::vector<std::pair<std::string, std::string>> dropped;  // name, reason
};

// Drops columns with too many missing values, near-zero variance, or a
// near-perfect correlation with an earlier kept column.
PrefilterResult prefilter_features(const TabularView& view, const PrefilterConfig& cfg = {});

}  // namespace shelfcast
