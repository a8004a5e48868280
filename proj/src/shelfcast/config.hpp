#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shelfcast/date.hpp"
#include "shelfcast/feature_matrix.hpp"
#include "shelfcast/featselect.hpp"
#include "shelfcast/gbdt.hpp"
#include "shelfcast/metrics.hpp"
#include "shelfcast/panelgen.hpp"
#include "shelfcast/tuning.hpp"

namespace shelfcast {

struct PanelSource {
  std::string path;  // empty: generate
  std::string profile = "default";
  std::optional<std::uint64_t> seed;  // defaults to the experiment seed
  GeneratorProfile generator;
};

struct BorutaSettings {
  bool enabled = true;
  bool per_group = false;
  bool prefilter = true;
  double sample_fraction = 0.1;
  BorutaConfig cfg;
  // Background model used inside each iteration.
  int rounds = 30;
  int leaves = 15;
  int n_bins = 63;
  double learning_rate = 0.1;
  double min_child_weight = 20.0;
  // Demand drivers kept whatever Boruta decides (still prefiltered).
  std::vector<std::string> retain = {"real_price", "real_competitor_price", "out_store_rel", "in_store_rel",
                                     "promo_flag"};
};

struct TuneSettings {
  int budget = 0;  // 0 disables tuning
  double sample_fraction = 0.1;
  TuneSpace space = TuneSpace::defaults();
};

struct ExperimentConfig {
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  std::string cases = "ABCD";
  std::vector<std::string> models = {"gbdt", "naive"};
  int workers = 1;
  bool plot = false;
  double encoder_alpha = 1.0;
  EvaluationOptions eval;

  PanelSource panel;

  std::optional<Date> cutoff;  // defaults to the generator's cutoff fraction
  double cutoff_fraction = 0.8;
  int min_train_points = 0;
  bool require_both_periods = true;

  FeatureOptions features;
  int seasonal_period = 7;
  int seasonal_max_periods = 4;

  BorutaSettings boruta;
  GbdtConfig gbdt;
  TuneSettings tune;

  // Throws Error(kParse) for unknown sections or keys and bad values.
  void set(const std::string& section, const std::string& key, const std::string& value);
  // Throws Error(kParse) for unknown sections or keys.
  std::string get(const std::string& section, const std::string& key) const;
  // Flat key=value lines under [section] headers; '#' and ';' start comments.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  // Every setting in a fixed order; parse(canonical()) reproduces the config.
  std::string canonical() const;
  std::uint64_t hash() const;
  void validate() const;
};

// "A,B" or "AB" -> "AB"; rejects letters outside A-D and duplicates.
std::string parse_case_list(const std::string& text);
std::vector<std::string> split_list(const std::string& text);

}  // namespace shelfcast
