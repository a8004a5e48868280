// Command-line front end over the shelfcast C API.

#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "shelfcast/shelfcast.h"

namespace {

const char* const kClassNames[5] = {"Smooth", "Intermittent", "Erratic", "Lumpy", "No Demand"};

int report_error(const char* what, sc_status st) {
  std::fprintf(stderr, "shelfcast: %s: %s: %s\n", what, sc_status_string(st), sc_last_error());
  return st == SC_ERR_PARTIAL ? 3 : 1;
}

struct Common {
  std::string config;
  std::optional<unsigned long long> seed;
  std::string out;
  std::string cases;
  std::string models;
  std::string panel;
  bool plot = false;
};

// Loads the config file (or defaults) and applies command-line overrides.
sc_status load_config(const Common& c, sc_config** cfg) {
  sc_status st = c.config.empty() ? sc_config_create(cfg) : sc_config_load(c.config.c_str(), cfg);
  if (st != SC_OK) return st;
  auto set = [&](const char* sec, const char* key, const std::string& v) {
    if (st == SC_OK) st = sc_config_set(*cfg, sec, key, v.c_str());
  };
  if (c.seed) set("experiment", "seed", std::to_string(*c.seed));
  if (!c.cases.empty()) set("experiment", "cases", c.cases);
  if (!c.models.empty()) set("experiment", "models", c.models);
  if (c.plot) set("experiment", "plot", "true");
  if (!c.panel.empty()) set("panel", "path", c.panel);
  if (!c.out.empty()) set("experiment", "out_dir", c.out);
  return st;
}

struct Handles {
  sc_config* cfg = nullptr;
  sc_panel* panel = nullptr;
  ~Handles() {
    sc_panel_destroy(panel);
    sc_config_destroy(cfg);
  }
};

void print_stats(const sc_panel_stats& s) {
  std::printf("series            %zu\n", s.series_count);
  std::printf("train series      %zu  missingness %.4f  coverage %.4f\n", s.train_series, s.train_missingness,
              s.train_coverage);
  std::printf("valid series      %zu  missingness %.4f  coverage %.4f\n", s.valid_series, s.valid_missingness,
              s.valid_coverage);
  std::printf("eliminated        %zu  ratio %.4f\n", s.eliminated_count, s.eliminated_ratio);
  std::printf("new               %zu  ratio %.4f\n", s.new_count, s.new_ratio);
  for (int k = 0; k < 5; ++k) {
    std::printf("%-17s %zu  (%.2f%%)\n", kClassNames[k], s.class_count[k], 100.0 * s.class_fraction[k]);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retail demand forecasting experiments"};
  app.set_version_flag("--version", std::string(sc_version()));
  app.require_subcommand(1);

  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config, "Experiment config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "Experiment seed");
  };

  auto* gen = app.add_subcommand("generate", "Generate a synthetic panel CSV");
  add_common(gen);
  std::string gen_out = "panel.csv";
  gen->add_option("--out", gen_out, "Output CSV path");

  auto* cls = app.add_subcommand("classify", "Demand classification per series");
  add_common(cls);
  cls->add_option("--panel", c.panel, "Panel CSV (default: generate per config)");
  std::string cls_out = "classification.csv";
  cls->add_option("--out", cls_out, "Output CSV path");
  bool missing_as_zero = false;
  cls->add_flag("--missing-as-zero", missing_as_zero, "Count missing days as zero demand");

  auto* sel = app.add_subcommand("select", "Boruta feature selection");
  add_common(sel);
  sel->add_option("--panel", c.panel, "Panel CSV (default: generate per config)");
  std::string sel_out = "features.csv";
  sel->add_option("--out", sel_out, "Output CSV path");

  auto* run = app.add_subcommand("run", "Run cases and models and write result tables");
  add_common(run);
  run->add_option("--out", c.out, "Output directory");
  run->add_option("--cases", c.cases, "Cases to run, e.g. A,B,C,D");
  run->add_option("--models", c.models, "Models to run, e.g. gbdt,naive");
  run->add_option("--panel", c.panel, "Panel CSV (default: generate per config)");
  run->add_flag("--plot", c.plot, "Also write per-row predictions for plotting");

  auto* rep = app.add_subcommand("report", "Print the tables of a finished run");
  std::string rep_dir = "out";
  rep->add_option("--out", rep_dir, "Run output directory");

  CLI11_PARSE(app, argc, argv);

  if (rep->parsed()) {
    char* text = nullptr;
    const sc_status st = sc_report(rep_dir.c_str(), &text);
    if (st != SC_OK) return report_error("report", st);
    std::fputs(text, stdout);
    sc_string_free(text);
    return 0;
  }

  Handles h;
  sc_status st = load_config(c, &h.cfg);
  if (st != SC_OK) return report_error("config", st);

  if (gen->parsed()) {
    if ((st = sc_panel_generate(h.cfg, &h.panel)) != SC_OK) return report_error("generate", st);
    if ((st = sc_panel_write_csv(h.panel, gen_out.c_str())) != SC_OK) return report_error("write", st);
    sc_panel_stats stats{};
    if ((st = sc_panel_summarize(h.panel, h.cfg, nullptr, &stats)) != SC_OK) return report_error("summarize", st);
    print_stats(stats);
    std::printf("wrote %s\n", gen_out.c_str());
    return 0;
  }

  if ((st = sc_panel_load(h.cfg, &h.panel)) != SC_OK) return report_error("panel", st);

  if (cls->parsed()) {
    if ((st = sc_panel_classify(h.panel, missing_as_zero ? 1 : 0, cls_out.c_str())) != SC_OK) {
      return report_error("classify", st);
    }
    sc_panel_stats stats{};
    if ((st = sc_panel_summarize(h.panel, h.cfg, nullptr, &stats)) != SC_OK) return report_error("summarize", st);
    for (int k = 0; k < 5; ++k) {
      std::printf("%-13s %zu  (%.2f%%)\n", kClassNames[k], stats.class_count[k], 100.0 * stats.class_fraction[k]);
    }
    std::printf("wrote %s\n", cls_out.c_str());
    return 0;
  }

  if (sel->parsed()) {
    if ((st = sc_select_features(h.cfg, h.panel, sel_out.c_str())) != SC_OK) return report_error("select", st);
    std::printf("wrote %s\n", sel_out.c_str());
    return 0;
  }

  st = sc_run(h.cfg, h.panel, nullptr);
  if (st != SC_OK && st != SC_ERR_PARTIAL) return report_error("run", st);
  const sc_status run_status = st;
  const std::string run_error = sc_last_error();
  char* dir = nullptr;
  if (sc_config_get(h.cfg, "experiment", "out_dir", &dir) == SC_OK) {
    char* text = nullptr;
    if (sc_report(dir, &text) == SC_OK) {
      std::fputs(text, stdout);
      sc_string_free(text);
    }
    sc_string_free(dir);
  }
  if (run_status != SC_OK) {
    std::fprintf(stderr, "shelfcast: run: %s: %s\n", sc_status_string(run_status), run_error.c_str());
    return 3;
  }
  return 0;
}
