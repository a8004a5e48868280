#include "shelfcast/shelfcast.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "shelfcast/config.hpp"
#include "shelfcast/csv.hpp"
#include "shelfcast/demandclass.hpp"
#include "shelfcast/error.hpp"
#include "shelfcast/gbdt.hpp"
#include "shelfcast/panelgen.hpp"
#include "shelfcast/runner.hpp"

struct sc_config {
  shelfcast::ExperimentConfig cfg;
};
struct sc_panel {
  shelfcast::SalesPanel panel;
};
struct sc_model {
  shelfcast::GbdtModel model;
};

namespace {

thread_local std::string g_last_error;

sc_status map_code(shelfcast::ErrorCode c) {
  switch (c) {
    case shelfcast::ErrorCode::kInvalidArgument: return SC_ERR_INVALID_ARGUMENT;
    case shelfcast::ErrorCode::kIo: return SC_ERR_IO;
    case shelfcast::ErrorCode::kParse: return SC_ERR_PARSE;
    case shelfcast::ErrorCode::kEmpty: return SC_ERR_EMPTY;
    case shelfcast::ErrorCode::kNumeric: return SC_ERR_NUMERIC;
    case shelfcast::ErrorCode::kVersion: return SC_ERR_VERSION;
    case shelfcast::ErrorCode::kPartial: return SC_ERR_PARTIAL;
  }
  return SC_ERR_INTERNAL;
}

template <class F>
sc_status guarded(F&& f) {
  g_last_error.clear();
  try {
    return f();
  } catch (const shelfcast::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SC_ERR_INTERNAL;
  }
}

sc_status null_arg(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return SC_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& text) {
  char* buf = static_cast<char*>(std::malloc(text.size() + 1));
  if (!buf) throw std::bad_alloc();
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return buf;
}

shelfcast::TabularView make_view(const char* const* names, const double* const* columns, std::size_t n_features,
                                 std::size_t n_rows, std::vector<std::string>& name_store) {
  shelfcast::TabularView v;
  for (std::size_t f = 0; f < n_features; ++f) {
    shelfcast::require(names[f] != nullptr && columns[f] != nullptr, "feature name and column must not be NULL");
    name_store.emplace_back(names[f]);
    v.columns.emplace_back(columns[f], n_rows);
  }
  v.names = name_store;
  return v;
}

}  // namespace

extern "C" {

const char* sc_version(void) { return SHELFCAST_VERSION; }

const char* sc_status_string(sc_status status) {
  switch (status) {
    case SC_OK: return "ok";
    case SC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SC_ERR_IO: return "i/o error";
    case SC_ERR_PARSE: return "parse error";
    case SC_ERR_EMPTY: return "empty input";
    case SC_ERR_NUMERIC: return "numeric error";
    case SC_ERR_VERSION: return "unsupported version";
    case SC_ERR_PARTIAL: return "partial failure";
    case SC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sc_last_error(void) { return g_last_error.c_str(); }

sc_status sc_config_create(sc_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new sc_config{};
    return SC_OK;
  });
}

sc_status sc_config_load(const char* path, sc_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new sc_config{shelfcast::ExperimentConfig::load(path)};
    return SC_OK;
  });
}

sc_status sc_config_set(sc_config* cfg, const char* section, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!section || !key || !value) return null_arg("section/key/value");
  return guarded([&] {
    cfg->cfg.set(section, key, value);
    return SC_OK;
  });
}

sc_status sc_config_get(const sc_config* cfg, const char* section, const char* key, char** out_value) {
  if (!cfg) return null_arg("cfg");
  if (!section || !key || !out_value) return null_arg("section/key/out_value");
  return guarded([&] {
    *out_value = dup_string(cfg->cfg.get(section, key));
    return SC_OK;
  });
}

sc_status sc_config_write(const sc_config* cfg, const char* path) {
  if (!cfg) return null_arg("cfg");
  if (!path) return null_arg("path");
  return guarded([&] {
    shelfcast::write_file_atomic(path, cfg->cfg.canonical());
    return SC_OK;
  });
}

void sc_config_destroy(sc_config* cfg) { delete cfg; }

sc_status sc_panel_generate(const sc_config* cfg, sc_panel** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto c = cfg->cfg;
    c.panel.path.clear();
    *out = new sc_panel{shelfcast::load_panel(c)};
    return SC_OK;
  });
}

sc_status sc_panel_load(const sc_config* cfg, sc_panel** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new sc_panel{shelfcast::load_panel(cfg->cfg)};
    return SC_OK;
  });
}

sc_status sc_panel_read_csv(const char* path, sc_panel** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new sc_panel{shelfcast::read_panel_csv(path)};
    return SC_OK;
  });
}

sc_status sc_panel_write_csv(const sc_panel* panel, const char* path) {
  if (!panel) return null_arg("panel");
  if (!path) return null_arg("path");
  return guarded([&] {
    shelfcast::write_panel_csv(panel->panel, path);
    return SC_OK;
  });
}

sc_status sc_panel_series_count(const sc_panel* panel, size_t* out) {
  if (!panel) return null_arg("panel");
  if (!out) return null_arg("out");
  *out = panel->panel.series_count();
  g_last_error.clear();
  return SC_OK;
}

sc_status sc_panel_row_count(const sc_panel* panel, size_t* out) {
  if (!panel) return null_arg("panel");
  if (!out) return null_arg("out");
  *out = panel->panel.row_count();
  g_last_error.clear();
  return SC_OK;
}

sc_status sc_panel_summarize(const sc_panel* panel, const sc_config* cfg, const char* cutoff_iso,
                             sc_panel_stats* out) {
  if (!panel) return null_arg("panel");
  if (!out) return null_arg("out");
  if (!cutoff_iso && !cfg) return null_arg("cfg (when cutoff_iso is NULL)");
  return guarded([&] {
    const shelfcast::Date cutoff =
        cutoff_iso ? shelfcast::parse_date(cutoff_iso) : shelfcast::resolve_cutoff(cfg->cfg, panel->panel);
    const auto st = shelfcast::summarize_panel(panel->panel, cutoff);
    sc_panel_stats s{};
    s.series_count = st.series_count;
    s.train_series = st.train.series_count;
    s.valid_series = st.valid.series_count;
    s.train_missingness = st.train.avg_missingness;
    s.valid_missingness = st.valid.avg_missingness;
    s.train_coverage = st.train.avg_coverage_ratio;
    s.valid_coverage = st.valid.avg_coverage_ratio;
    s.eliminated_count = st.eliminated_count;
    s.new_count = st.new_count;
    s.eliminated_ratio = st.eliminated_ratio;
    s.new_ratio = st.new_ratio;
    for (int k = 0; k < 5; ++k) {
      s.class_count[k] = st.class_distribution.counts[static_cast<std::size_t>(k)];
      s.class_fraction[k] = st.class_distribution.fractions[static_cast<std::size_t>(k)];
    }
    *out = s;
    return SC_OK;
  });
}

sc_status sc_panel_classify(const sc_panel* panel, int missing_as_zero, const char* csv_path) {
  if (!panel) return null_arg("panel");
  if (!csv_path) return null_arg("csv_path");
  return guarded([&] {
    shelfcast::DemandStatsOptions opts;
    opts.missing_as_zero = missing_as_zero != 0;
    if (panel->panel.series_count() == 0) shelfcast::fail(shelfcast::ErrorCode::kEmpty, "panel is empty");
    const auto rows = shelfcast::classify_series(panel->panel, opts);
    shelfcast::write_file_atomic(csv_path, shelfcast::classification_csv(rows));
    return SC_OK;
  });
}

void sc_panel_destroy(sc_panel* panel) { delete panel; }

sc_status sc_select_features(const sc_config* cfg, const sc_panel* panel, const char* csv_path) {
  if (!cfg) return null_arg("cfg");
  if (!panel) return null_arg("panel");
  if (!csv_path) return null_arg("csv_path");
  return guarded([&] {
    const auto d = shelfcast::select_features(cfg->cfg, panel->panel);
    shelfcast::write_file_atomic(csv_path, d.to_csv());
    return SC_OK;
  });
}

sc_status sc_run(const sc_config* cfg, const sc_panel* panel, const char* out_dir) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    const auto report = panel ? shelfcast::run_all(cfg->cfg, panel->panel) : shelfcast::run_all(cfg->cfg);
    shelfcast::write_run_outputs(report, cfg->cfg, out_dir ? std::string(out_dir) : cfg->cfg.out_dir);
    if (!report.ok()) {
      std::string msg = "some cells failed:";
      for (const auto& c : report.cells) {
        if (!c.ok) msg += " " + std::string(1, c.case_id) + "/" + c.model + " (" + c.error + ")";
      }
      g_last_error = msg;
      return SC_ERR_PARTIAL;
    }
    return SC_OK;
  });
}

sc_status sc_report(const char* out_dir, char** out_text) {
  if (!out_dir) return null_arg("out_dir");
  if (!out_text) return null_arg("out_text");
  return guarded([&] {
    *out_text = dup_string(shelfcast::render_report(out_dir));
    return SC_OK;
  });
}

void sc_string_free(char* text) { std::free(text); }

sc_status sc_model_fit(const sc_config* cfg, const char* const* names, const double* const* columns,
                       size_t n_features, size_t n_rows, const double* target, sc_model** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  if (!target) return null_arg("target");
  if (n_features > 0 && (!names || !columns)) return null_arg("names/columns");
  return guarded([&] {
    std::vector<std::string> store;
    auto view = make_view(names, columns, n_features, n_rows, store);
    view.target = std::span<const double>(target, n_rows);
    *out = new sc_model{shelfcast::fit(view, cfg->cfg.gbdt)};
    return SC_OK;
  });
}

sc_status sc_model_load(const char* path, sc_model** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new sc_model{shelfcast::GbdtModel::load(path)};
    return SC_OK;
  });
}

sc_status sc_model_save(const sc_model* model, const char* path) {
  if (!model) return null_arg("model");
  if (!path) return null_arg("path");
  return guarded([&] {
    model->model.save(path);
    return SC_OK;
  });
}

sc_status sc_model_predict(const sc_model* model, const char* const* names, const double* const* columns,
                           size_t n_features, size_t n_rows, double* out) {
  if (!model) return null_arg("model");
  if (!out && n_rows > 0) return null_arg("out");
  if (n_features > 0 && (!names || !columns)) return null_arg("names/columns");
  return guarded([&] {
    std::vector<std::string> store;
    auto view = make_view(names, columns, n_features, n_rows, store);
    std::vector<double> dummy(n_rows);
    view.target = dummy;
    const auto pred = model->model.predict(view);
    std::copy(pred.begin(), pred.end(), out);
    return SC_OK;
  });
}

sc_status sc_model_feature_count(const sc_model* model, size_t* out) {
  if (!model) return null_arg("model");
  if (!out) return null_arg("out");
  *out = model->model.feature_names.size();
  g_last_error.clear();
  return SC_OK;
}

void sc_model_destroy(sc_model* model) { delete model; }

}  // extern "C"
