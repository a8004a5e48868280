#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "oracle/metric_oracle.hpp"
#include "shelfcast/config.hpp"
#include "shelfcast/error.hpp"
#include "shelfcast/runner.hpp"
#include "shelfcast/tuning.hpp"
#include "support/fixtures.hpp"

using namespace shelfcast;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(std::uint64_t seed = 3) {
  ExperimentConfig cfg = ExperimentConfig::parse(
      "[experiment]\n"
      "cases = ABCD\n"
      "models = gbdt,naive\n"
      "[panel]\n"
      "profile = signal\n"
      "n_products = 12\n"
      "n_stores = 2\n"
      "horizon_days = 200\n"
      "[gbdt]\n"
      "n_rounds = 20\n"
      "[boruta]\n"
      "max_iters = 5\n"
      "sample_fraction = 0.5\n");
  cfg.seed = seed;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Prepared {
  ExperimentConfig cfg;
  SalesPanel panel;
  PreparedArm raw;
  PreparedArm imputed;
};

const Prepared& prepared() {
  static const Prepared p = [] {
    Prepared out;
    out.cfg = small_config();
    out.panel = load_panel(out.cfg);
    const auto mask = ImputationMask::from_panel(out.panel);
    const Date cutoff = resolve_cutoff(out.cfg, out.panel);
    out.raw = prepare_arm(out.panel, mask, false, out.cfg, cutoff);
    out.imputed = prepare_arm(out.panel, mask, true, out.cfg, cutoff);
    return out;
  }();
  return p;
}

ModelSetup quick_setup() {
  ModelSetup s;
  s.opts.gbdt.n_rounds = 20;
  return s;
}

}  // namespace

TEST(Config, ParseCanonicalRoundTrip) {
  const auto cfg = small_config(17);
  const auto text = cfg.canonical();
  const auto back = ExperimentConfig::parse(text);
  EXPECT_EQ(back.canonical(), text);
  EXPECT_EQ(back.hash(), cfg.hash());
  EXPECT_EQ(back.get("panel", "n_products"), "12");
  EXPECT_EQ(back.get("panel", "profile"), "signal");
  EXPECT_EQ(back.seed, 17u);
}

TEST(Config, Errors) {
  try {
    ExperimentConfig::parse("[gbdt]\nn_roundz = 3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("n_roundz"), std::string::npos);
  }
  EXPECT_THROW(ExperimentConfig::parse("[nope]\n"), Error);
  EXPECT_THROW(ExperimentConfig::parse("seed = 1\n"), Error);
  EXPECT_THROW(ExperimentConfig::parse("[gbdt]\nn_rounds = many\n"), Error);
  EXPECT_EQ(parse_case_list("A,c"), "AC");
  EXPECT_THROW(parse_case_list("AE"), Error);
  EXPECT_THROW(parse_case_list("AA"), Error);
}

TEST(Tuning, BudgetOneAndDominantConfig) {
  GbdtConfig base;
  int calls = 0;
  auto scorer = [&](const GbdtConfig& g) {
    ++calls;
    return g.learning_rate;
  };
  const auto one = tune_random_search(base, TuneSpace::defaults(), 1, 5, scorer);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(one.candidates.size(), 1u);
  EXPECT_EQ(one.best_index, 0u);

  const auto many = tune_random_search(base, TuneSpace::defaults(), 25, 5, scorer);
  const auto best = std::min_element(many.scores.begin(), many.scores.end());
  EXPECT_EQ(many.best_index, static_cast<std::size_t>(best - many.scores.begin()));
  EXPECT_EQ(many.best.learning_rate, *best);
  const auto again = tune_random_search(base, TuneSpace::defaults(), 25, 5, scorer);
  EXPECT_EQ(again.scores, many.scores);

  // NaN scores count as worst.
  auto nan_first = [n = 0](const GbdtConfig&) mutable { return n++ == 0 ? std::nan("") : 1.0; };
  EXPECT_EQ(tune_random_search(base, TuneSpace::defaults(), 3, 1, nan_first).best_index, 1u);

  TuneSpace space;
  space.params.push_back({"max_leaves", 4, 64, true, false});
  for (const auto& c : tune_random_search(base, space, 20, 2, scorer).candidates) {
    EXPECT_GE(c.max_leaves, 4);
    EXPECT_LE(c.max_leaves, 64);
  }
  EXPECT_THROW(TuneSpace::apply(base, "bogus", 1.0), Error);
  EXPECT_THROW(tune_random_search(base, TuneSpace::defaults(), 0, 1, scorer), Error);
}

TEST(PrepareArm, ValidationRowsCoincide) {
  const auto& p = prepared();
  ASSERT_EQ(p.raw.matrix.rows(), p.imputed.matrix.rows());
  EXPECT_EQ(p.raw.valid_rows, p.imputed.valid_rows);
  for (std::size_t r = 0; r < p.raw.matrix.rows(); ++r) {
    ASSERT_EQ(p.raw.matrix.dates[r], p.imputed.matrix.dates[r]);
    ASSERT_EQ(p.raw.matrix.observed[r], p.imputed.matrix.observed[r]);
  }
  // Raw trains on observed rows only; the imputed arm has at least as many.
  for (std::size_t r : p.raw.train_rows) ASSERT_TRUE(p.raw.matrix.observed[r]);
  EXPECT_GE(p.imputed.train_rows.size(), p.raw.train_rows.size());
}

TEST(RunCase, PerGroupAndWholeCategory) {
  const auto& p = prepared();
  const std::size_t n_groups = p.raw.matrix.group_names.size();
  ASSERT_GE(n_groups, 2u);
  const auto a = run_case(p.raw, 'A', "naive", quick_setup(), p.cfg);
  ASSERT_TRUE(a.ok) << a.error;
  EXPECT_EQ(a.fitted_models, n_groups);
  ASSERT_EQ(a.groups.size(), n_groups + 1);
  EXPECT_EQ(a.groups.back().first, "ALL");
  const auto b = run_case(p.raw, 'B', "naive", quick_setup(), p.cfg);
  ASSERT_TRUE(b.ok) << b.error;
  EXPECT_EQ(b.fitted_models, 1u);

  // The per-group training rows partition the whole-category rows.
  auto ua = a.train_rows_used;
  auto ub = b.train_rows_used;
  std::sort(ua.begin(), ua.end());
  std::sort(ub.begin(), ub.end());
  EXPECT_EQ(ua, ub);
  EXPECT_EQ(std::set<std::size_t>(ua.begin(), ua.end()).size(), ua.size());
  EXPECT_EQ(a.eval_rows, b.eval_rows);

  const auto c = run_case(p.imputed, 'C', "gbdt", quick_setup(), p.cfg);
  ASSERT_TRUE(c.ok) << c.error;
  EXPECT_EQ(c.eval_rows, a.eval_rows);
  EXPECT_TRUE(c.masked_identity);
}

TEST(RunCase, NaiveTableMatchesOfflineComputation) {
  const auto& p = prepared();
  const auto cell = run_case(p.raw, 'B', "naive", quick_setup(), p.cfg);
  ASSERT_TRUE(cell.ok) << cell.error;
  const auto& m = p.raw.matrix;

  // Refit the naive means by hand.
  std::map<std::int32_t, std::pair<long double, std::size_t>> acc;
  for (std::size_t r : p.raw.train_rows) {
    auto& a = acc[m.row_series[r]];
    a.first += m.target[r];
    ++a.second;
  }
  std::vector<oracle::Row> rows;
  std::vector<std::vector<double>> history(m.series.size());
  for (std::size_t r : m.select_rows(SplitTag::kTrain, true)) {
    history[static_cast<std::size_t>(m.row_series[r])].push_back(m.target[r]);
  }
  const auto& price = m.aux_column("real_price");
  const auto& cogs = m.aux_column("real_cogs");
  const auto& rebate = m.aux_column("real_rebate");
  for (std::size_t r : p.raw.valid_rows) {
    if (!m.observed[r]) continue;
    const auto& s = m.series[static_cast<std::size_t>(m.row_series[r])];
    const auto it = acc.find(m.row_series[r]);
    ASSERT_NE(it, acc.end());
    oracle::Row o;
    o.series = m.row_series[r];
    o.product = s.product;
    o.group = s.group;
    o.zone = s.zone;
    o.day = m.dates[r].days;
    o.y = m.target[r];
    o.p = static_cast<double>(it->second.first / it->second.second);
    o.price = price[r];
    o.cogs = cogs[r];
    o.rebate = rebate[r];
    rows.push_back(o);
  }
  const auto expect = oracle::compute(rows, history, false).table_order();
  const auto got = cell.groups.back().second.table_values();
  ASSERT_EQ(got.size(), expect.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    EXPECT_TRUE(oracle::close(got[k], expect[k])) << fixtures::kMetricNames[k] << ": " << got[k] << " vs " << expect[k];
  }
}

TEST(RunAll, DeterministicOutputs) {
  auto cfg = small_config(8);
  const auto a = run_all(cfg);
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a.cells.size(), cfg.models.size() * cfg.cases.size());
  const auto b = run_all(cfg);
  EXPECT_EQ(a.summary_csv(), b.summary_csv());
  EXPECT_EQ(a.selected_features, b.selected_features);
  ASSERT_TRUE(a.selection.has_value());
  const auto& sel = *a.selection;
  for (std::size_t f = 0; f < sel.names.size(); ++f) {
    const bool retained =
        std::find(cfg.boruta.retain.begin(), cfg.boruta.retain.end(), sel.names[f]) != cfg.boruta.retain.end();
    const bool used = std::find(a.selected_features.begin(), a.selected_features.end(), sel.names[f]) !=
                      a.selected_features.end();
    EXPECT_EQ(used, retained || sel.decisions[f] != Decision::kRejected) << sel.names[f];
  }

  const auto csv = a.summary_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kSummaryHeader);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), a.cells.size() + 1);
  for (const auto& t : a.timings()) {
    EXPECT_LE(t.min_minutes, t.mean_minutes);
    EXPECT_LE(t.mean_minutes, t.max_minutes);
  }
  for (const auto& cell : a.cells) {
    if (case_is_imputed(cell.case_id)) EXPECT_TRUE(cell.masked_identity) << cell.case_id << cell.model;
  }

  const fs::path dir = fs::temp_directory_path() / "shelfcast_runner_test";
  fs::remove_all(dir);
  write_run_outputs(a, cfg, dir.string());
  EXPECT_EQ(slurp(dir / "summary.csv"), csv);
  EXPECT_TRUE(fs::exists(dir / "A" / "gbdt" / "groups.csv"));
  EXPECT_TRUE(fs::exists(dir / "D" / "naive" / "groups.csv"));
  EXPECT_EQ(ExperimentConfig::load((dir / "config.ini").string()).canonical(), cfg.canonical());
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    EXPECT_EQ(e.path().filename().string().find(".tmp"), std::string::npos) << e.path();
  }
  EXPECT_NE(render_report(dir.string()).find("Case"), std::string::npos);
  fs::remove_all(dir);
}

TEST(RunAll, UnknownModelRejected) {
  auto cfg = small_config();
  cfg.models = {"gbdt", "arima"};
  EXPECT_THROW(run_all(cfg), Error);
}
