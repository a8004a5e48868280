#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "shelfcast/error.hpp"
#include "shelfcast/gbdt.hpp"
#include "support/fixtures.hpp"

using namespace shelfcast;

namespace {

struct Data {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  std::vector<double> y;

  TabularView view() const {
    TabularView v;
    v.names = names;
    for (const auto& c : cols) v.columns.emplace_back(c);
    v.target = y;
    return v;
  }
};

Data noisy(std::uint64_t seed, std::size_t n = 400) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  Data d;
  d.names = {"a", "b", "c"};
  d.cols.assign(3, std::vector<double>(n));
  d.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& c : d.cols) c[i] = z(rng);
    if (i % 11 == 0) d.cols[2][i] = std::nan("");
    d.y[i] = 2.0 * d.cols[0][i] + (d.cols[1][i] > 0 ? 1.0 : -1.0) + 0.3 * z(rng);
  }
  return d;
}

}  // namespace

TEST(Binning, QuantileEdges) {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  const auto m = build_bin_mapper(v, 4);
  ASSERT_EQ(m.edges.size(), 3u);
  EXPECT_DOUBLE_EQ(m.edges[0], 25.75);
  EXPECT_DOUBLE_EQ(m.edges[1], 50.5);
  EXPECT_DOUBLE_EQ(m.edges[2], 75.25);

  std::vector<double> c(10, 3.0);
  EXPECT_EQ(build_bin_mapper(c, 16).value_bins(), 1u);

  std::vector<double> nan(5, std::nan(""));
  const auto mm = build_bin_mapper(nan, 16);
  EXPECT_EQ(mm.value_bins(), 1u);
  EXPECT_EQ(mm.bin(std::nan("")), mm.missing_bin());

  std::vector<double> few{1, 2, 2, 5};
  const auto mid = build_bin_mapper(few, 255);
  EXPECT_EQ(mid.edges, (std::vector<double>{1.5, 3.5}));
}

TEST(SplitGain, Examples) {
  EXPECT_DOUBLE_EQ(split_gain(2, 2, -2, 2, 0), 4.0);
  EXPECT_DOUBLE_EQ(split_gain(1.5, 3, 1.5, 3, 0), 0.0);
  EXPECT_LT(split_gain(2, 2, -2, 2, 1e12), 1e-10);
}

TEST(Fit, ClosedFormStump) {
  Data d;
  d.names = {"x"};
  d.cols = {{0, 0, 1, 1}};
  d.y = {1, 1, 3, 3};
  GbdtConfig cfg;
  cfg.n_rounds = 1;
  cfg.max_depth = 1;
  cfg.learning_rate = 1.0;
  cfg.lambda_l2 = 0.0;
  const auto model = fit(d.view(), cfg);
  const auto p = model.predict(d.view());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(p[i], d.y[i], 1e-12);
  const double row[] = {0.0};
  EXPECT_NEAR(model.predict_row(row), 1.0, 1e-12);
  EXPECT_EQ(model.feature_importance(ImportanceKind::kSplitCount).at("x"), 1.0);
}

TEST(Fit, ZeroTreesAndConstantTarget) {
  Data d = noisy(1, 50);
  GbdtConfig cfg;
  cfg.n_rounds = 5;
  const auto model = fit(d.view(), cfg);
  for (double v : model.predict(d.view(), 0)) EXPECT_EQ(v, model.base_score);

  std::fill(d.y.begin(), d.y.end(), 4.0);
  const auto flat = fit(d.view(), cfg);
  for (const auto& t : flat.trees) EXPECT_EQ(t.leaves(), 1u);
  for (double v : flat.predict(d.view())) EXPECT_DOUBLE_EQ(v, 4.0);
  for (const auto& [name, imp] : flat.feature_importance()) EXPECT_EQ(imp, 0.0) << name;
}

TEST(Fit, Errors) {
  Data d = noisy(1, 20);
  GbdtConfig cfg;
  d.y[3] = std::nan("");
  EXPECT_THROW(fit(d.view(), cfg), Error);
  Data empty;
  empty.names = {"x"};
  empty.cols = {{}};
  EXPECT_THROW(fit(empty.view(), cfg), Error);
  GbdtConfig bad;
  bad.n_bins = 1;
  EXPECT_THROW(bad.validate(), Error);
  bad = GbdtConfig{};
  bad.learning_rate = 0.0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Fit, MatchesExactGreedy) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto msg = fixtures::check_equivalence(seed);
    EXPECT_TRUE(msg.empty()) << "seed " << seed << ": " << msg;
  }
}

TEST(Fit, MonotoneTrainingLoss) {
  const Data d = noisy(3, 500);
  GbdtConfig cfg;
  cfg.n_rounds = 200;
  cfg.min_child_weight = 0.0;
  const auto model = fit(d.view(), cfg);
  ASSERT_EQ(model.train_loss.size(), 200u);
  for (std::size_t t = 1; t < model.train_loss.size(); ++t) {
    ASSERT_LE(model.train_loss[t], model.train_loss[t - 1]) << "round " << t;
  }
}

TEST(Fit, RowPermutationInvariance) {
  const Data d = noisy(4, 300);
  Data shuffled = d;
  std::vector<std::size_t> perm(d.y.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(1);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    shuffled.y[i] = d.y[perm[i]];
    for (std::size_t f = 0; f < d.cols.size(); ++f) shuffled.cols[f][i] = d.cols[f][perm[i]];
  }
  GbdtConfig cfg;
  cfg.n_rounds = 30;
  cfg.subsample = 0.7;
  cfg.colsample = 0.67;
  cfg.seed = 5;
  EXPECT_EQ(fit(d.view(), cfg).serialize(), fit(shuffled.view(), cfg).serialize());
}

TEST(Fit, SeededSampling) {
  const Data d = noisy(5, 300);
  GbdtConfig cfg;
  cfg.n_rounds = 20;
  cfg.subsample = 0.5;
  cfg.seed = 1;
  const auto a = fit(d.view(), cfg).serialize();
  EXPECT_EQ(a, fit(d.view(), cfg).serialize());
  cfg.seed = 2;
  EXPECT_NE(a, fit(d.view(), cfg).serialize());
}

TEST(Fit, QuantileConstant) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z(0.0, 1.0);
  Data d;
  d.names = {"noise"};
  d.cols = {std::vector<double>(1001)};
  d.y.resize(1001);
  for (std::size_t i = 0; i < d.y.size(); ++i) {
    d.cols[0][i] = 1.0;
    d.y[i] = z(rng);
  }
  for (double tau : {0.1, 0.5, 0.9}) {
    GbdtConfig cfg;
    cfg.loss = Loss::kQuantile;
    cfg.alpha = tau;
    cfg.n_rounds = 50;
    const auto p = fit(d.view(), cfg).predict(d.view());
    auto sorted = d.y;
    std::sort(sorted.begin(), sorted.end());
    const auto k = static_cast<std::size_t>(std::llround(tau * 1000.0));
    EXPECT_GE(p[0], sorted[k - 1]);
    EXPECT_LE(p[0], sorted[k + 1]);
  }
}

TEST(Predict, MissingRoutingAndFeatureLayout) {
  const Data d = noisy(6, 300);
  GbdtConfig cfg;
  cfg.n_rounds = 20;
  const auto model = fit(d.view(), cfg);
  // Extra and reordered columns are fine.
  Data re = d;
  std::swap(re.names[0], re.names[2]);
  std::swap(re.cols[0], re.cols[2]);
  re.names.push_back("extra");
  re.cols.push_back(std::vector<double>(d.y.size(), 0.0));
  EXPECT_EQ(model.predict(d.view()), model.predict(re.view()));
  Data missing = d;
  missing.names.pop_back();
  missing.cols.pop_back();
  EXPECT_THROW(model.predict(missing.view()), Error);
  // NaN rows follow each node's default direction.
  std::vector<double> row{std::nan(""), std::nan(""), std::nan("")};
  double expect = model.base_score;
  for (const auto& t : model.trees) {
    int i = 0;
    while (t.nodes[static_cast<std::size_t>(i)].feature >= 0) {
      i = t.nodes[static_cast<std::size_t>(i)].default_left ? t.nodes[static_cast<std::size_t>(i)].left
                                                             : t.nodes[static_cast<std::size_t>(i)].right;
    }
    expect += model.learning_rate * t.nodes[static_cast<std::size_t>(i)].value;
  }
  EXPECT_DOUBLE_EQ(model.predict_row(row), expect);
}

TEST(Serialize, RoundTripAndVersion) {
  const Data d = noisy(7, 200);
  GbdtConfig cfg;
  cfg.n_rounds = 15;
  const auto model = fit(d.view(), cfg);
  const auto text = model.serialize();
  EXPECT_EQ(text.rfind("shelfcast-gbdt v1", 0), 0u);
  const auto back = GbdtModel::deserialize(text);
  EXPECT_EQ(back.serialize(), text);
  EXPECT_EQ(back.predict(d.view()), model.predict(d.view()));

  std::string future = text;
  future.replace(0, 17, "shelfcast-gbdt v9");
  try {
    GbdtModel::deserialize(future);
    FAIL() << "expected a version error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVersion);
  }
  EXPECT_THROW(GbdtModel::deserialize(text.substr(0, text.size() / 2)), Error);
}

TEST(Growth, LevelWiseRespectsDepth) {
  const Data d = noisy(9, 400);
  GbdtConfig cfg;
  cfg.n_rounds = 5;
  cfg.growth = Growth::kLevelWise;
  cfg.max_depth = 3;
  cfg.max_leaves = 0;
  for (const auto& t : fit(d.view(), cfg).trees) EXPECT_LE(t.depth(), 3);
  cfg.growth = Growth::kLeafWise;
  cfg.max_depth = 0;
  cfg.max_leaves = 6;
  for (const auto& t : fit(d.view(), cfg).trees) EXPECT_LE(t.leaves(), 6u);
}
