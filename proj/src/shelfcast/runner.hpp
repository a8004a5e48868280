#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shelfcast/baseline.hpp"
#include "shelfcast/config.hpp"
#include "shelfcast/feature_matrix.hpp"
#include "shelfcast/featselect.hpp"
#include "shelfcast/metrics.hpp"
#include "shelfcast/panel.hpp"
#include "shelfcast/tuning.hpp"

namespace shelfcast {

// Cases: A per-group raw, B whole-category raw, C per-group imputed,
// D whole-category imputed.
bool case_is_per_group(char case_id);
bool case_is_imputed(char case_id);

struct PreparedArm {
  bool imputed = false;
  FeatureMatrix matrix;
  std::vector<std::size_t> train_rows;  // rows a model may train on
  std::vector<std::size_t> valid_rows;  // every validation row
};

Date resolve_cutoff(const ExperimentConfig& cfg, const SalesPanel& panel);

// Raw arm: basic fills on exogenous fields, training on observed targets.
// Imputed arm: seasonal fills on every field, training on imputed targets.
// Both arms filter series with the original mask, so their validation rows
// coincide.
PreparedArm prepare_arm(const SalesPanel& panel, const ImputationMask& mask, bool imputed, const ExperimentConfig& cfg,
                        Date cutoff);

struct ModelSetup {
  ForecasterOptions opts;
  // Per-group feature lists; used by per-group cases when present.
  std::map<int, std::vector<std::string>> group_features;
};

struct CellResult {
  char case_id = 'A';
  std::string model;
  bool ok = true;
  std::string error;
  // One row per group (by group name) followed by "ALL".
  std::vector<std::pair<std::string, MetricReport>> groups;
  std::vector<std::string> warnings;
  std::size_t fitted_models = 0;
  std::vector<double> fit_seconds;
  // masked_evaluate agreed bit-for-bit with evaluating the filtered frame
  // for every table row.
  bool masked_identity = true;
  std::vector<std::size_t> train_rows_used;
  std::vector<std::size_t> eval_rows;
  std::string predictions_csv;
};

CellResult run_case(const PreparedArm& arm, char case_id, const std::string& model, const ModelSetup& setup,
                    const ExperimentConfig& cfg);

struct TimingStats {
  std::string model;
  char case_id = 'A';
  double mean_minutes = 0.0;
  double min_minutes = 0.0;
  double max_minutes = 0.0;
};

struct RunReport {
  std::vector<CellResult> cells;
  std::vector<std::string> selected_features;
  std::optional<FeatureDecision> selection;
  std::optional<TuneResult> tuning;
  GbdtConfig gbdt;
  std::size_t series_count = 0;
  std::string provenance;
  std::vector<std::string> warnings;

  bool ok() const;
  std::vector<TimingStats> timings() const;
  std::string summary_csv() const;
  std::string timings_csv() const;
};

// Prefilter + Boruta on a train-row sample of the raw arm, as run_all does.
FeatureDecision select_features(const ExperimentConfig& cfg, const SalesPanel& panel);

// Generates or reads the panel named by the config.
SalesPanel load_panel(const ExperimentConfig& cfg);

RunReport run_all(const ExperimentConfig& cfg);
RunReport run_all(const ExperimentConfig& cfg, const SalesPanel& panel);

// out/<case>/<model>/groups.csv (+ predictions.csv when plotting),
// out/summary.csv, out/timings.csv, out/provenance.txt, out/config.ini.
void write_run_outputs(const RunReport& report, const ExperimentConfig& cfg, const std::string& out_dir);

// Aligned plain-text tables of summary.csv and timings.csv in `out_dir`.
std::string render_report(const std::string& out_dir);

extern const char* const kSummaryHeader;

}  // namespace shelfcast
