#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "shelfcast/gbdt.hpp"

namespace shelfcast {

class FeatureMatrix;
struct ForecasterOptions;

struct ParamRange {
  std::string name;  // a GbdtConfig field
  double lo = 0.0;
  double hi = 0.0;
  bool integer = false;
  bool log_scale = false;
};

struct TuneSpace {
  std::vector<ParamRange> params;

  static TuneSpace defaults();
  // Applies `value` to the named field of `cfg`; throws for unknown names.
  static void apply(GbdtConfig& cfg, const std::string& name, double value);
  static bool is_integer(const std::string& name);
};

struct TuneResult {
  GbdtConfig best;
  std::size_t best_index = 0;
  std::vector<GbdtConfig> candidates;
  std::vector<double> scores;
};

using TuneScorer = std::function<double(const GbdtConfig&)>;

// Draws `budget` configurations uniformly (log-uniformly where flagged) from
// `space` on top of `base`, scores each (lower is better, NaN counts as
// worst) and returns the first best.
TuneResult tune_random_search(const GbdtConfig& base, const TuneSpace& space, int budget, std::uint64_t seed,
                              const TuneScorer& scorer);

// Scores a configuration by series-averaged validation RMSSE after fitting
// a gbdt forecaster on a seeded `fraction` of the train rows, evaluated on
// the same fraction of the observed validation rows.
TuneScorer rmsse_scorer(const FeatureMatrix& m, std::span<const std::size_t> train_rows,
                        std::span<const std::size_t> valid_rows, double fraction, std::uint64_t seed,
                        const ForecasterOptions& opts);

}  // namespace shelfcast
