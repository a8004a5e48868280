#include "shelfcast/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

#include "shelfcast/csv.hpp"
#include "shelfcast/error.hpp"
#include "shelfcast/panelgen.hpp"
#include "shelfcast/preprocess.hpp"

#ifndef SHELFCAST_VERSION
#define SHELFCAST_VERSION "0.0.0"
#endif

namespace shelfcast {

const char* const kSummaryHeader =
    "Case,Model,RMSSE,MASE,MSE,RMSE,MAE,R2,ME,MFB,Theils Bias,Group Revenue WMAPE,Series Revenue WMAPE,"
    "Group Profit WMAPE,Series Profit WMAPE,Demand Error,Demand Bias,Status";

bool case_is_per_group(char case_id) { return case_id == 'A' || case_id == 'C'; }
bool case_is_imputed(char case_id) { return case_id == 'C' || case_id == 'D'; }

Date resolve_cutoff(const ExperimentConfig& cfg, const SalesPanel& panel) {
  if (cfg.cutoff) return *cfg.cutoff;
  const Date first = panel.first_date();
  const std::int32_t span = panel.last_date() - first + 1;
  return first + static_cast<std::int32_t>(std::lround(cfg.cutoff_fraction * span));
}

PreparedArm prepare_arm(const SalesPanel& panel, const ImputationMask& mask, bool imputed, const ExperimentConfig& cfg,
                        Date cutoff) {
  SalesPanel filled;
  if (imputed) {
    filled = impute_seasonal(panel, mask, kAllFields, cfg.seasonal_period, cfg.seasonal_max_periods).panel;
  } else {
    const auto exo = exogenous_fields();
    filled = impute_basic(panel, mask, exo).panel;
  }
  const SalesPanel real = deflate_prices(filled);
  PreparedArm arm;
  arm.imputed = imputed;
  SplitSpec spec;
  spec.cutoff = cutoff;
  spec.min_train_points = cfg.min_train_points;
  spec.require_both_periods = cfg.require_both_periods;
  arm.matrix = split_and_filter(real, mask, spec);
  add_default_history_features(arm.matrix, cfg.features);
  const auto& m = arm.matrix;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (m.split[r] == SplitTag::kValid) {
      arm.valid_rows.push_back(r);
    } else if (!std::isnan(m.target[r]) && (imputed || m.observed[r])) {
      arm.train_rows.push_back(r);
    }
  }
  return arm;
}

namespace {

struct Job {
  std::size_t cell = 0;
  int group = -1;  // -1: whole category
  std::vector<std::size_t> train;
  std::vector<std::size_t> eval;
  ForecasterOptions opts;
  std::string model;
};

struct JobResult {
  bool ok = true;
  bool skipped = false;
  std::string message;
  std::vector<double> pred;
  double fit_seconds = 0.0;
};

std::vector<int> groups_present(const FeatureMatrix& m) {
  std::vector<int> g;
  for (const auto& s : m.series) g.push_back(s.group);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::vector<Job> plan_cell(const PreparedArm& arm, std::size_t cell, char case_id, const std::string& model,
                           const ModelSetup& setup) {
  const auto& m = arm.matrix;
  std::vector<Job> jobs;
  if (!case_is_per_group(case_id)) {
    Job j;
    j.cell = cell;
    j.train = arm.train_rows;
    j.eval = arm.valid_rows;
    j.opts = setup.opts;
    j.model = model;
    jobs.push_back(std::move(j));
    return jobs;
  }
  for (int g : groups_present(m)) {
    Job j;
    j.cell = cell;
    j.group = g;
    j.model = model;
    j.opts = setup.opts;
    if (auto it = setup.group_features.find(g); it != setup.group_features.end()) j.opts.features = it->second;
    for (std::size_t r : arm.train_rows) {
      if (m.series[static_cast<std::size_t>(m.row_series[r])].group == g) j.train.push_back(r);
    }
    for (std::size_t r : arm.valid_rows) {
      if (m.series[static_cast<std::size_t>(m.row_series[r])].group == g) j.eval.push_back(r);
    }
    jobs.push_back(std::move(j));
  }
  return jobs;
}

JobResult execute_job(const PreparedArm& arm, const Job& job) {
  JobResult res;
  if (job.train.empty()) {
    res.skipped = true;
    res.message = "no training rows";
    return res;
  }
  try {
    auto model = make_forecaster(job.model, job.opts);
    const auto t0 = std::chrono::steady_clock::now();
    model->fit(arm.matrix, job.train);
    const auto t1 = std::chrono::steady_clock::now();
    res.fit_seconds = std::chrono::duration<double>(t1 - t0).count();
    res.pred = model->predict(arm.matrix, job.eval);
    if (res.pred.size() != job.eval.size()) fail(ErrorCode::kInvalidArgument, "model returned wrong prediction count");
  } catch (const std::exception& e) {
    res.ok = false;
    res.message = e.what();
  }
  return res;
}

void run_jobs(const PreparedArm& arm, const std::vector<Job>& jobs, std::vector<JobResult>& results, int workers) {
  results.assign(jobs.size(), JobResult{});
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)), jobs.size());
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = execute_job(arm, jobs[i]);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) results[i] = execute_job(arm, jobs[i]);
    });
  }
  for (auto& th : pool) th.join();
}

bool same_bits(const MetricReport& a, const MetricReport& b) {
  const auto va = a.table_values();
  const auto vb = b.table_values();
  return std::memcmp(va.data(), vb.data(), va.size() * sizeof(double)) == 0 && a.rows == b.rows &&
         a.series == b.series && a.scale_excluded == b.scale_excluded &&
         a.series_rev_excluded == b.series_rev_excluded && a.series_profit_excluded == b.series_profit_excluded;
}

MetricReport nan_report() {
  MetricReport r;
  const double nan = std::nan("");
  r.mse = r.rmse = r.mae = r.r2 = r.rmsse = r.mase = r.me = r.mfb = r.theils_bias = nan;
  r.group_rev_wmape = r.series_rev_wmape = r.group_profit_wmape = r.series_profit_wmape = nan;
  r.demand_error = r.demand_bias = nan;
  return r;
}

void assemble_cell(const PreparedArm& arm, const std::vector<Job>& jobs, const std::vector<JobResult>& results,
                   const ExperimentConfig& cfg, CellResult& cell) {
  const auto& m = arm.matrix;
  std::vector<std::size_t> rows;
  std::vector<double> pred;
  std::vector<int> skipped_groups;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& res = results[j];
    if (!res.ok) {
      cell.ok = false;
      const std::string where = jobs[j].group < 0 ? std::string("all groups")
                                                  : "group " + m.group_names[static_cast<std::size_t>(jobs[j].group)];
      cell.error += (cell.error.empty() ? "" : "; ") + where + ": " + res.message;
      continue;
    }
    if (res.skipped) {
      skipped_groups.push_back(jobs[j].group);
      cell.warnings.push_back("group " + m.group_names[static_cast<std::size_t>(jobs[j].group)] +
                              " skipped: " + res.message);
      continue;
    }
    ++cell.fitted_models;
    cell.fit_seconds.push_back(res.fit_seconds);
    cell.train_rows_used.insert(cell.train_rows_used.end(), jobs[j].train.begin(), jobs[j].train.end());
    rows.insert(rows.end(), jobs[j].eval.begin(), jobs[j].eval.end());
    pred.insert(pred.end(), res.pred.begin(), res.pred.end());
  }
  std::sort(cell.train_rows_used.begin(), cell.train_rows_used.end());
  if (!cell.ok) return;

  // Row order independent of how jobs were split.
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a] < rows[b]; });
  std::vector<std::size_t> sorted_rows(rows.size());
  std::vector<double> sorted_pred(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_rows[i] = rows[order[i]];
    sorted_pred[i] = pred[order[i]];
  }
  cell.eval_rows = sorted_rows;
  const FinancialFrame frame = build_frame(m, sorted_rows, sorted_pred);
  std::vector<std::uint8_t> observed(sorted_rows.size());
  for (std::size_t i = 0; i < sorted_rows.size(); ++i) observed[i] = m.observed[sorted_rows[i]];

  auto score = [&](const std::string& name, const std::vector<std::uint8_t>& keep) {
    const bool any = std::any_of(keep.begin(), keep.end(), [](std::uint8_t k) { return k != 0; });
    if (!any) {
      cell.warnings.push_back("group " + name + " skipped: no observed validation rows");
      cell.groups.emplace_back(name, nan_report());
      return;
    }
    MetricReport rep = masked_evaluate(frame, keep, cfg.eval);
    const MetricReport check = evaluate(filter_frame(frame, keep), cfg.eval);
    if (!same_bits(rep, check)) cell.masked_identity = false;
    cell.groups.emplace_back(name, rep);
  };

  for (int g : groups_present(m)) {
    const std::string& name = m.group_names[static_cast<std::size_t>(g)];
    if (std::find(skipped_groups.begin(), skipped_groups.end(), g) != skipped_groups.end()) {
      cell.groups.emplace_back(name, nan_report());
      continue;
    }
    std::vector<std::uint8_t> keep(observed.size());
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = observed[i] && frame.group[i] == g;
    score(name, keep);
  }
  score("ALL", observed);

  if (cfg.plot) {
    std::string csv = "Group,series_key,date,actual,predicted,observed\n";
    for (std::size_t i = 0; i < sorted_rows.size(); ++i) {
      const std::size_t r = sorted_rows[i];
      const auto& sm = m.series[static_cast<std::size_t>(m.row_series[r])];
      csv += m.group_names[static_cast<std::size_t>(sm.group)] + ',' + sm.key + ',' + format_date(m.dates[r]) + ',' +
             format_number(m.target[r]) + ',' + format_number(sorted_pred[i]) + ',' + (m.observed[r] ? "1" : "0") +
             '\n';
    }
    cell.predictions_csv = std::move(csv);
  }
}

std::vector<std::size_t> sample_fraction(const std::vector<std::size_t>& rows, double fraction, std::uint64_t seed) {
  if (fraction >= 1.0) return rows;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out;
  for (std::size_t r : rows) {
    if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < fraction) out.push_back(r);
  }
  return out;
}

// Prefilter + Boruta over the training table of `rows`.
FeatureDecision select_on(const PreparedArm& arm, const std::vector<std::size_t>& rows, const ExperimentConfig& cfg,
                          const ForecasterOptions& base, std::vector<std::string>& kept) {
  ForecasterOptions o = base;
  o.features.clear();
  GbdtForecaster probe(o);
  DenseTable table = probe.training_table(arm.matrix, rows);
  TabularView view = table.view();
  if (cfg.boruta.prefilter) {
    const auto pre = prefilter_features(view);
    TabularView narrowed;
    narrowed.target = view.target;
    for (const auto& name : pre.kept) {
      const auto idx = static_cast<std::size_t>(std::find(view.names.begin(), view.names.end(), name) - view.names.begin());
      narrowed.names.push_back(name);
      narrowed.columns.push_back(view.columns[idx]);
    }
    view = std::move(narrowed);
  }
  GbdtConfig bg;
  bg.n_rounds = cfg.boruta.rounds;
  bg.max_leaves = cfg.boruta.leaves;
  bg.learning_rate = cfg.boruta.learning_rate;
  bg.n_bins = cfg.boruta.n_bins;
  bg.min_child_weight = cfg.boruta.min_child_weight;
  bg.seed = mix_seed(cfg.seed, 21);
  BorutaConfig bc = cfg.boruta.cfg;
  bc.seed = mix_seed(cfg.seed, 22);
  FeatureDecision d = boruta_select(view, bc, gbdt_trainer(bg), bg.n_bins);
  kept.clear();
  for (std::size_t f = 0; f < d.names.size(); ++f) {
    const bool retained = std::find(cfg.boruta.retain.begin(), cfg.boruta.retain.end(), d.names[f]) !=
                          cfg.boruta.retain.end();
    if (retained || d.decisions[f] != Decision::kRejected) kept.push_back(d.names[f]);
  }
  return d;
}

}  // namespace

CellResult run_case(const PreparedArm& arm, char case_id, const std::string& model, const ModelSetup& setup,
                    const ExperimentConfig& cfg) {
  CellResult cell;
  cell.case_id = case_id;
  cell.model = model;
  const auto jobs = plan_cell(arm, 0, case_id, model, setup);
  std::vector<JobResult> results;
  run_jobs(arm, jobs, results, cfg.workers);
  assemble_cell(arm, jobs, results, cfg, cell);
  return cell;
}

bool RunReport::ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok; });
}

std::vector<TimingStats> RunReport::timings() const {
  std::vector<TimingStats> out;
  for (const auto& c : cells) {
    if (c.fit_seconds.empty()) continue;
    TimingStats t;
    t.model = c.model;
    t.case_id = c.case_id;
    double sum = 0.0;
    t.min_minutes = std::numeric_limits<double>::infinity();
    t.max_minutes = 0.0;
    for (double s : c.fit_seconds) {
      const double m = s / 60.0;
      sum += m;
      t.min_minutes = std::min(t.min_minutes, m);
      t.max_minutes = std::max(t.max_minutes, m);
    }
    t.mean_minutes = std::clamp(sum / static_cast<double>(c.fit_seconds.size()), t.min_minutes, t.max_minutes);
    out.push_back(t);
  }
  return out;
}

std::string RunReport::summary_csv() const {
  std::string out = kSummaryHeader;
  out += '\n';
  for (const auto& c : cells) {
    MetricReport all = nan_report();
    if (c.ok && !c.groups.empty()) all = c.groups.back().second;
    const double vals[] = {all.rmsse,           all.mase,
                           all.mse,             all.rmse,
                           all.mae,             all.r2,
                           all.me,              all.mfb,
                           all.theils_bias,     all.group_rev_wmape,
                           all.series_rev_wmape, all.group_profit_wmape,
                           all.series_profit_wmape, all.demand_error,
                           all.demand_bias};
    out += std::string(1, c.case_id) + ',' + c.model;
    for (double v : vals) out += ',' + format_metric(v);
    out += c.ok ? ",ok\n" : ",failed\n";
  }
  return out;
}

std::string RunReport::timings_csv() const {
  std::string out = "Model,Case,Mean,Min,Max\n";
  for (const auto& t : timings()) {
    out += t.model + ',' + std::string(1, t.case_id) + ',' + format_number(t.mean_minutes) + ',' +
           format_number(t.min_minutes) + ',' + format_number(t.max_minutes) + '\n';
  }
  return out;
}

SalesPanel load_panel(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.panel.path.empty()) return read_panel_csv(cfg.panel.path);
  GeneratorProfile profile = cfg.panel.generator;
  profile.seed = cfg.panel.seed.value_or(cfg.seed);
  profile.cutoff_fraction = cfg.cutoff_fraction;
  return generate_panel(profile);
}

FeatureDecision select_features(const ExperimentConfig& cfg, const SalesPanel& panel) {
  cfg.validate();
  const ImputationMask mask = ImputationMask::from_panel(panel);
  const PreparedArm arm = prepare_arm(panel, mask, false, cfg, resolve_cutoff(cfg, panel));
  const auto sample = sample_fraction(arm.train_rows, cfg.boruta.sample_fraction, mix_seed(cfg.seed, 23));
  if (sample.empty()) fail(ErrorCode::kEmpty, "feature selection sample is empty");
  ForecasterOptions opts;
  opts.encoder_alpha = cfg.encoder_alpha;
  opts.seed = mix_seed(cfg.seed, 11);
  std::vector<std::string> kept;
  return select_on(arm, sample, cfg, opts, kept);
}

RunReport run_all(const ExperimentConfig& cfg) { return run_all(cfg, load_panel(cfg)); }

RunReport run_all(const ExperimentConfig& cfg, const SalesPanel& panel) {
  cfg.validate();
  for (const auto& m : cfg.models) make_forecaster(m, ForecasterOptions{});  // rejects unknown names early

  RunReport report;
  report.series_count = panel.series_count();
  const ImputationMask mask = ImputationMask::from_panel(panel);
  const Date cutoff = resolve_cutoff(cfg, panel);

  ModelSetup setup;
  setup.opts.gbdt = cfg.gbdt;
  setup.opts.gbdt.seed = mix_seed(cfg.seed, 12);
  setup.opts.encoder_alpha = cfg.encoder_alpha;
  setup.opts.seed = mix_seed(cfg.seed, 11);

  const bool need_raw = cfg.cases.find_first_of("AB") != std::string::npos;
  const bool need_imputed = cfg.cases.find_first_of("CD") != std::string::npos;
  const bool uses_gbdt = std::find(cfg.models.begin(), cfg.models.end(), "gbdt") != cfg.models.end();

  // Cells in report order: case-major, then model.
  for (char c : cfg.cases) {
    for (const auto& model : cfg.models) {
      CellResult cell;
      cell.case_id = c;
      cell.model = model;
      report.cells.push_back(std::move(cell));
    }
  }

  bool setup_done = false;
  for (int pass = 0; pass < 2; ++pass) {
    const bool imputed = pass == 1;
    if ((imputed && !need_imputed) || (!imputed && !need_raw)) continue;
    const PreparedArm arm = prepare_arm(panel, mask, imputed, cfg, cutoff);

    if (!setup_done) {
      setup_done = true;
      if (uses_gbdt && cfg.boruta.enabled) {
        const auto sample = sample_fraction(arm.train_rows, cfg.boruta.sample_fraction, mix_seed(cfg.seed, 23));
        if (sample.empty()) fail(ErrorCode::kEmpty, "feature selection sample is empty");
        std::vector<std::string> kept;
        report.selection = select_on(arm, sample, cfg, setup.opts, kept);
        if (kept.empty()) {
          report.warnings.push_back("feature selection rejected every feature; using all features");
        } else {
          setup.opts.features = kept;
        }
        report.selected_features = setup.opts.features;
        if (cfg.boruta.per_group) {
          const auto& m = arm.matrix;
          for (int g : groups_present(m)) {
            std::vector<std::size_t> rows;
            for (std::size_t r : sample) {
              if (m.series[static_cast<std::size_t>(m.row_series[r])].group == g) rows.push_back(r);
            }
            if (rows.empty()) continue;
            std::vector<std::string> gk;
            select_on(arm, rows, cfg, setup.opts, gk);
            if (!gk.empty()) setup.group_features[g] = gk;
          }
        }
      }
      if (uses_gbdt && cfg.tune.budget > 0) {
        std::vector<std::size_t> observed_valid;
        for (std::size_t r : arm.valid_rows) {
          if (arm.matrix.observed[r]) observed_valid.push_back(r);
        }
        auto scorer = rmsse_scorer(arm.matrix, arm.train_rows, observed_valid, cfg.tune.sample_fraction,
                                   mix_seed(cfg.seed, 31), setup.opts);
        report.tuning = tune_random_search(setup.opts.gbdt, cfg.tune.space, cfg.tune.budget, mix_seed(cfg.seed, 32),
                                           scorer);
        setup.opts.gbdt = report.tuning->best;
      }
    }

    std::vector<Job> jobs;
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
      const char c = report.cells[i].case_id;
      if (case_is_imputed(c) != imputed) continue;
      auto cj = plan_cell(arm, i, c, report.cells[i].model, setup);
      std::move(cj.begin(), cj.end(), std::back_inserter(jobs));
    }
    std::vector<JobResult> results;
    run_jobs(arm, jobs, results, cfg.workers);
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
      if (case_is_imputed(report.cells[i].case_id) != imputed) continue;
      std::vector<Job> cell_jobs;
      std::vector<JobResult> cell_results;
      for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (jobs[j].cell != i) continue;
        cell_jobs.push_back(jobs[j]);
        cell_results.push_back(std::move(results[j]));
      }
      try {
        assemble_cell(arm, cell_jobs, cell_results, cfg, report.cells[i]);
      } catch (const std::exception& e) {
        report.cells[i].ok = false;
        report.cells[i].error = e.what();
      }
    }
  }
  report.gbdt = setup.opts.gbdt;

  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(cfg.hash()));
  std::string prov;
  prov += "shelfcast " SHELFCAST_VERSION "\n";
  prov += "seed=" + std::to_string(cfg.seed) + "\n";
  prov += "config_hash=" + std::string(hash) + "\n";
  prov += "series=" + std::to_string(report.series_count) + "\n";
  prov += "cutoff=" + format_date(cutoff) + "\n";
  prov += "selected_features=";
  for (std::size_t i = 0; i < report.selected_features.size(); ++i) {
    prov += (i ? "," : "") + report.selected_features[i];
  }
  prov += "\n";
  if (report.tuning) prov += "tuned_candidate=" + std::to_string(report.tuning->best_index) + "\n";
  for (const auto& w : report.warnings) prov += "warning=" + w + "\n";
  for (const auto& c : report.cells) {
    if (!c.ok) prov += "failed=" + std::string(1, c.case_id) + "/" + c.model + ": " + c.error + "\n";
  }
  report.provenance = std::move(prov);
  return report;
}

void write_run_outputs(const RunReport& report, const ExperimentConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  for (const auto& c : report.cells) {
    const fs::path dir = fs::path(out_dir) / std::string(1, c.case_id) / c.model;
    if (!c.ok) continue;
    std::string table = group_table_csv(c.groups);
    for (const auto& w : c.warnings) table += "# warning: " + w + "\n";
    write_file_atomic((dir / "groups.csv").string(), table);
    if (cfg.plot) write_file_atomic((dir / "predictions.csv").string(), c.predictions_csv);
  }
  write_file_atomic((fs::path(out_dir) / "timings.csv").string(), report.timings_csv());
  write_file_atomic((fs::path(out_dir) / "provenance.txt").string(), report.provenance);
  write_file_atomic((fs::path(out_dir) / "config.ini").string(), cfg.canonical());
  if (report.selection) {
    write_file_atomic((fs::path(out_dir) / "features.csv").string(), report.selection->to_csv());
  }
  // Last, so a present summary implies a complete run.
  write_file_atomic((fs::path(out_dir) / "summary.csv").string(), report.summary_csv());
}

namespace {

std::string align_csv(const std::string& csv) {
  std::vector<std::vector<std::string>> cells;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> row;
    for (auto f : split_csv_line(line)) row.emplace_back(f);
    cells.push_back(std::move(row));
  }
  std::vector<std::size_t> width;
  for (const auto& row : cells) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += row[i];
      if (i + 1 < row.size()) out += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string render_report(const std::string& out_dir) {
  namespace fs = std::filesystem;
  const std::string summary = read_file((fs::path(out_dir) / "summary.csv").string());
  std::string out = "Summary\n" + align_csv(summary);
  const fs::path timings = fs::path(out_dir) / "timings.csv";
  if (fs::exists(timings)) out += "\nTraining time (minutes)\n" + align_csv(read_file(timings.string()));
  return out;
}

}  // namespace shelfcast
