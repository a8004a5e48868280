// Links only the shared library; no C++ core headers.
#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "shelfcast/shelfcast.h"

namespace fs = std::filesystem;

namespace {

struct Config {
  sc_config* p = nullptr;
  ~Config() { sc_config_destroy(p); }
};

struct Panel {
  sc_panel* p = nullptr;
  ~Panel() { sc_panel_destroy(p); }
};

struct Model {
  sc_model* p = nullptr;
  ~Model() { sc_model_destroy(p); }
};

void small(sc_config* cfg) {
  ASSERT_EQ(sc_config_set(cfg, "panel", "profile", "signal"), SC_OK);
  ASSERT_EQ(sc_config_set(cfg, "panel", "n_products", "10"), SC_OK);
  ASSERT_EQ(sc_config_set(cfg, "panel", "n_stores", "2"), SC_OK);
  ASSERT_EQ(sc_config_set(cfg, "panel", "horizon_days", "160"), SC_OK);
  ASSERT_EQ(sc_config_set(cfg, "gbdt", "n_rounds", "10"), SC_OK);
  ASSERT_EQ(sc_config_set(cfg, "boruta", "max_iters", "3"), SC_OK);
  ASSERT_EQ(sc_config_set(cfg, "boruta", "sample_fraction", "0.5"), SC_OK);
}

}  // namespace

TEST(CApi, VersionAndStatusStrings) {
  EXPECT_GT(std::strlen(sc_version()), 0u);
  EXPECT_STRNE(sc_status_string(SC_OK), sc_status_string(SC_ERR_PARSE));
}

TEST(CApi, ConfigErrors) {
  Config cfg;
  ASSERT_EQ(sc_config_create(&cfg.p), SC_OK);
  EXPECT_EQ(sc_config_set(cfg.p, "gbdt", "n_roundz", "3"), SC_ERR_PARSE);
  EXPECT_NE(std::string(sc_last_error()).find("n_roundz"), std::string::npos);
  EXPECT_EQ(sc_config_set(nullptr, "gbdt", "n_rounds", "3"), SC_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sc_config_create(nullptr), SC_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sc_config_load("/nonexistent/dir/x.ini", nullptr), SC_ERR_INVALID_ARGUMENT);
  sc_config* missing = nullptr;
  EXPECT_EQ(sc_config_load("/nonexistent/dir/x.ini", &missing), SC_ERR_IO);
  EXPECT_EQ(missing, nullptr);

  ASSERT_EQ(sc_config_set(cfg.p, "gbdt", "n_rounds", "7"), SC_OK);
  char* v = nullptr;
  ASSERT_EQ(sc_config_get(cfg.p, "gbdt", "n_rounds", &v), SC_OK);
  EXPECT_STREQ(v, "7");
  sc_string_free(v);
  sc_config_destroy(nullptr);
  sc_panel_destroy(nullptr);
  sc_model_destroy(nullptr);
}

TEST(CApi, PanelLifecycle) {
  Config cfg;
  ASSERT_EQ(sc_config_create(&cfg.p), SC_OK);
  small(cfg.p);
  Panel panel;
  ASSERT_EQ(sc_panel_generate(cfg.p, &panel.p), SC_OK) << sc_last_error();
  size_t series = 0, rows = 0;
  ASSERT_EQ(sc_panel_series_count(panel.p, &series), SC_OK);
  ASSERT_EQ(sc_panel_row_count(panel.p, &rows), SC_OK);
  EXPECT_EQ(series, 20u);
  EXPECT_GT(rows, series);

  sc_panel_stats st{};
  ASSERT_EQ(sc_panel_summarize(panel.p, cfg.p, nullptr, &st), SC_OK) << sc_last_error();
  EXPECT_EQ(st.series_count, series);
  double total = 0;
  for (double f : st.class_fraction) total += f;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(sc_panel_summarize(panel.p, nullptr, "not-a-date", &st), SC_ERR_PARSE);

  const fs::path dir = fs::temp_directory_path() / "shelfcast_capi_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto csv = (dir / "panel.csv").string();
  ASSERT_EQ(sc_panel_write_csv(panel.p, csv.c_str()), SC_OK);
  Panel back;
  ASSERT_EQ(sc_panel_read_csv(csv.c_str(), &back.p), SC_OK);
  size_t back_rows = 0;
  ASSERT_EQ(sc_panel_row_count(back.p, &back_rows), SC_OK);
  EXPECT_EQ(back_rows, rows);
  const auto cls = (dir / "classes.csv").string();
  EXPECT_EQ(sc_panel_classify(panel.p, 0, cls.c_str()), SC_OK);
  EXPECT_TRUE(fs::exists(cls));

  const auto out = (dir / "run").string();
  ASSERT_EQ(sc_run(cfg.p, panel.p, out.c_str()), SC_OK) << sc_last_error();
  EXPECT_TRUE(fs::exists(dir / "run" / "summary.csv"));
  char* text = nullptr;
  ASSERT_EQ(sc_report(out.c_str(), &text), SC_OK);
  EXPECT_NE(std::string(text).find("gbdt"), std::string::npos);
  sc_string_free(text);
  EXPECT_EQ(sc_report((dir / "absent").string().c_str(), &text), SC_ERR_IO);
  fs::remove_all(dir);
}

TEST(CApi, ModelFitPredictSaveLoad) {
  Config cfg;
  ASSERT_EQ(sc_config_create(&cfg.p), SC_OK);
  ASSERT_EQ(sc_config_set(cfg.p, "gbdt", "n_rounds", "20"), SC_OK);
  const size_t n = 200;
  std::vector<double> a(n), b(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    a[i] = static_cast<double>(i % 17);
    b[i] = i % 5 == 0 ? std::nan("") : static_cast<double>(i % 3);
    y[i] = 2.0 * a[i] + (i % 5 == 0 ? 0.0 : b[i]);
  }
  const char* names[] = {"a", "b"};
  const double* cols[] = {a.data(), b.data()};
  Model m;
  ASSERT_EQ(sc_model_fit(cfg.p, names, cols, 2, n, y.data(), &m.p), SC_OK) << sc_last_error();
  size_t nf = 0;
  ASSERT_EQ(sc_model_feature_count(m.p, &nf), SC_OK);
  EXPECT_EQ(nf, 2u);
  std::vector<double> p1(n), p2(n);
  ASSERT_EQ(sc_model_predict(m.p, names, cols, 2, n, p1.data()), SC_OK);

  const auto path = (fs::temp_directory_path() / "shelfcast_capi_model.txt").string();
  ASSERT_EQ(sc_model_save(m.p, path.c_str()), SC_OK);
  Model back;
  ASSERT_EQ(sc_model_load(path.c_str(), &back.p), SC_OK);
  ASSERT_EQ(sc_model_predict(back.p, names, cols, 2, n, p2.data()), SC_OK);
  EXPECT_EQ(p1, p2);
  std::remove(path.c_str());

  const char* wrong[] = {"a", "c"};
  EXPECT_EQ(sc_model_predict(m.p, wrong, cols, 2, n, p2.data()), SC_ERR_INVALID_ARGUMENT);
  y[3] = std::nan("");
  Model bad;
  EXPECT_EQ(sc_model_fit(cfg.p, names, cols, 2, n, y.data(), &bad.p), SC_ERR_NUMERIC);
  EXPECT_EQ(bad.p, nullptr);
}
