#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oracle/metric_oracle.hpp"
#include "oracle/tree_oracle.hpp"
#include "shelfcast/demandclass.hpp"
#include "shelfcast/gbdt.hpp"
#include "shelfcast/metrics.hpp"
#include "shelfcast/panel.hpp"

namespace fixtures {

struct RandomFrame {
  shelfcast::FinancialFrame frame;
  std::vector<oracle::Row> rows;
  std::vector<std::vector<double>> history;
};

// Small random validation frame (1..max_rows rows) over a handful of
// series, products, groups and zones. Some targets are zero, some train
// histories are flat or too short.
inline RandomFrame random_frame(std::uint64_t seed, int max_rows = 50) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  RandomFrame out;
  const int n_series = pick(1, 6);
  std::vector<int> product(n_series), group(n_series), zone(n_series);
  for (int s = 0; s < n_series; ++s) {
    product[s] = pick(0, 3);
    group[s] = pick(0, 2);
    zone[s] = pick(0, 1);
    out.frame.series_keys.push_back("s" + std::to_string(s));
    std::vector<double> h;
    const int len = pick(0, 12);
    const bool flat = pick(0, 5) == 0;
    for (int t = 0; t < len; ++t) h.push_back(flat ? 3.0 : std::floor(uni(0.0, 8.0)));
    out.history.push_back(h);
  }
  out.frame.train_history = out.history;

  const int n = pick(1, max_rows);
  const int base_day = 19000 + pick(0, 6);
  for (int i = 0; i < n; ++i) {
    oracle::Row r;
    r.series = pick(0, n_series - 1);
    r.product = product[r.series];
    r.group = group[r.series];
    r.zone = zone[r.series];
    r.day = base_day + pick(0, 27);
    r.y = pick(0, 3) == 0 ? 0.0 : uni(0.0, 20.0);
    r.p = uni(0.0, 20.0);
    r.price = uni(1.0, 10.0);
    r.cogs = r.price * uni(0.3, 0.9);
    r.rebate = pick(0, 2) == 0 ? uni(0.0, 0.5) : 0.0;
    out.rows.push_back(r);

    auto& f = out.frame;
    f.series.push_back(r.series);
    f.product.push_back(r.product);
    f.group.push_back(r.group);
    f.zone.push_back(r.zone);
    f.dates.push_back(shelfcast::Date{r.day});
    f.y_true.push_back(r.y);
    f.y_pred.push_back(r.p);
    f.real_price.push_back(r.price);
    f.cogs.push_back(r.cogs);
    f.rebate.push_back(r.rebate);
  }
  return out;
}

inline std::vector<double> report_values(const shelfcast::MetricReport& r) { return r.table_values(); }

inline const char* const kMetricNames[15] = {"MSE",         "RMSE",        "MAE",   "R2",   "Group Revenue WMAPE",
                                             "Series Revenue WMAPE", "Group Profit WMAPE", "Series Profit WMAPE",
                                             "Demand Error", "Demand Bias", "RMSSE", "MASE", "ME", "MFB",
                                             "Theils Bias"};

// Compares one fitted tree against the greedy oracle on the training rows:
// at every node the two must send the same rows left, and leaves must
// agree to `tol`. Returns an empty string on agreement.
inline std::string compare_tree(const shelfcast::Tree& tree, int node, const oracle::GreedyTree& ref,
                                const oracle::GreedyNode& ref_node, const std::vector<std::vector<double>>& x,
                                const std::vector<std::size_t>& rows, double tol) {
  const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
  const bool leaf = nd.feature < 0;
  if (leaf != ref_node.leaf) {
    return std::string("node kind differs (") + (leaf ? "leaf" : "split") + " vs " +
           (ref_node.leaf ? "leaf" : "split") + ") on " + std::to_string(rows.size()) + " rows";
  }
  if (leaf) {
    const double a = nd.value;
    const double b = ref_node.value;
    if (std::fabs(a - b) > tol * std::fmax(1.0, std::fabs(b))) {
      return "leaf value " + std::to_string(a) + " vs " + std::to_string(b);
    }
    return {};
  }
  std::vector<std::size_t> l, r, rl, rr;
  for (std::size_t row : rows) {
    const double v = x[static_cast<std::size_t>(nd.feature)][row];
    const bool left = std::isnan(v) ? nd.default_left : v <= nd.threshold;
    (left ? l : r).push_back(row);
    (ref.goes_left(ref_node, row) ? rl : rr).push_back(row);
  }
  if (l != rl) {
    return "split differs: feature " + std::to_string(nd.feature) + " <= " + std::to_string(nd.threshold) +
           " vs feature " + std::to_string(ref_node.feature) + " <= " + std::to_string(ref_node.threshold);
  }
  auto left = compare_tree(tree, nd.left, ref, *ref_node.left, x, l, tol);
  if (!left.empty()) return left;
  return compare_tree(tree, nd.right, ref, *ref_node.right, x, r, tol);
}

struct EquivalenceCase {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
};

// <= 200 rows, 1..3 features mixing continuous, integer-valued and
// partially missing columns.
inline EquivalenceCase equivalence_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EquivalenceCase c;
  const std::size_t n = 20 + rng() % 181;
  const std::size_t nf = 1 + rng() % 3;
  c.x.assign(nf, std::vector<double>(n));
  for (std::size_t f = 0; f < nf; ++f) {
    const int kind = static_cast<int>(rng() % 3);
    for (std::size_t r = 0; r < n; ++r) {
      double v = kind == 1 ? std::floor(u(rng) * 12.0) : u(rng) * 10.0 - 5.0;
      if (kind == 2 && u(rng) < 0.2) v = std::nan("");
      c.x[f][r] = v;
    }
  }
  c.y.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double a = std::isnan(c.x[0][r]) ? 1.5 : c.x[0][r];
    c.y[r] = std::sin(a) * 3.0 + (nf > 1 && !std::isnan(c.x[1][r]) ? 0.3 * c.x[1][r] : -0.7) + u(rng);
  }
  return c;
}

// Fits `rounds` depth-2 trees with the histogram learner and replays the
// same boosting loop with the greedy oracle. Empty string on agreement.
inline std::string check_equivalence(std::uint64_t seed, int rounds = 3, double tol = 1e-9) {
  const EquivalenceCase c = equivalence_case(seed);
  const std::size_t n = c.y.size();
  shelfcast::GbdtConfig cfg;
  cfg.n_rounds = rounds;
  cfg.learning_rate = 0.5;
  cfg.max_depth = 2;
  cfg.max_leaves = 4;
  cfg.min_child_weight = 0.0;
  cfg.lambda_l2 = (seed % 2 == 0) ? 1.0 : 0.0;
  cfg.n_bins = 255;
  cfg.growth = seed % 3 == 0 ? shelfcast::Growth::kLevelWise : shelfcast::Growth::kLeafWise;

  shelfcast::TabularView view;
  for (std::size_t f = 0; f < c.x.size(); ++f) {
    view.names.push_back("f" + std::to_string(f));
    view.columns.emplace_back(c.x[f]);
  }
  view.target = c.y;
  const auto model = shelfcast::fit(view, cfg);

  double mean = 0.0;
  for (double v : c.y) mean += v;
  mean /= static_cast<double>(n);
  if (std::fabs(model.base_score - mean) > tol * std::fmax(1.0, std::fabs(mean))) return "base score differs";

  std::vector<double> pred(n, mean), grad(n), hess(n, 1.0);
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  oracle::GreedyParams gp;
  gp.max_depth = 2;
  gp.lambda = cfg.lambda_l2;
  for (int t = 0; t < rounds; ++t) {
    for (std::size_t i = 0; i < n; ++i) grad[i] = pred[i] - c.y[i];
    oracle::GreedyTree ref(c.x, grad, hess, gp);
    const auto root = ref.build(all);
    if (static_cast<std::size_t>(t) >= model.trees.size()) return "model has fewer trees";
    auto msg = compare_tree(model.trees[static_cast<std::size_t>(t)], 0, ref, *root, c.x, all, tol);
    if (!msg.empty()) return "round " + std::to_string(t) + ": " + msg;
    for (std::size_t i = 0; i < n; ++i) pred[i] += cfg.learning_rate * ref.predict(*root, i);
  }
  return {};
}

// Tiny hand-built panel: one product per group, one store, `days` days.
inline shelfcast::SalesPanel tiny_panel(int n_groups, int days, shelfcast::Date start = shelfcast::Date{19358}) {
  using namespace shelfcast;
  SalesPanel p;
  p.stores.push_back({"S0", 0, 1, 0});
  for (int g = 0; g < n_groups; ++g) {
    p.groups.push_back("G" + std::to_string(g));
    p.uons.push_back("U" + std::to_string(g));
    p.uon_group.push_back(g);
    ProductSpec prod;
    prod.id = "P" + std::to_string(g);
    prod.group = g;
    prod.uon = g;
    prod.base_price = 5.0 + g;
    prod.cogs = 3.0;
    prod.rebate = 0.1;
    prod.intro = start;
    p.products.push_back(prod);
  }
  for (int g = 0; g < n_groups; ++g) {
    const std::size_t s = p.add_series(g, 0, start, days);
    for (int t = 0; t < days; ++t) {
      const std::size_t r = p.series[s].offset + static_cast<std::size_t>(t);
      p.column(Field::kSales)[r] = static_cast<double>((t * 7 + g * 3) % 5);
      p.column(Field::kPrice)[r] = 5.0 + g;
      p.column(Field::kCogs)[r] = 3.0;
      p.column(Field::kRebate)[r] = 0.1;
      p.column(Field::kPromoFlag)[r] = t % 9 == 0 ? 1.0 : 0.0;
      p.column(Field::kPromoCount)[r] = t % 9 == 0 ? 1.0 : 0.0;
      p.column(Field::kStock)[r] = 20.0;
      p.column(Field::kCompetitorPrice)[r] = 5.5 + g;
      p.column(Field::kCpi)[r] = 100.0 + 0.01 * t;
      p.column(Field::kSalaryRegional)[r] = 1500.0;
      p.column(Field::kPopulation)[r] = 50000.0;
    }
  }
  return p;
}


struct BoundarySeries {
  std::vector<double> values;
  shelfcast::DemandClass expected;
};

// Series whose ADI and CV^2 sit just below, exactly on, or just above the
// cut-offs. Demand sizes alternate between a/10 and b/10 (13 of each), so
// CV^2 = ((a-b)/(a+b))^2; 25 gaps of 1 or 2 days give ADI = span/25. The
// expected class is decided in integer arithmetic.
inline std::vector<BoundarySeries> boundary_series() {
  using shelfcast::DemandClass;
  const int spans[] = {32, 33, 34, 25, 50};
  const int pairs[][2] = {{168, 32}, {170, 30}, {172, 28}, {100, 100}, {190, 10}};
  std::vector<BoundarySeries> out;
  int variant = 0;
  while (out.size() < 199) {
    for (int span : spans) {
      for (const auto& ab : pairs) {
        if (out.size() >= 199) break;
        const int lead = variant % 4;
        const int trail = (variant / 4) % 3;
        const double scale = 1.0 + (variant % 5);
        std::vector<double> v(static_cast<std::size_t>(lead), 0.0);
        const int doubles = span - 25;
        for (int d = 0; d < 26; ++d) {
          v.push_back(scale * (d % 2 == 0 ? ab[0] : ab[1]) / 10.0);
          if (d == 25) break;
          if (d < doubles) v.push_back(0.0);
        }
        for (int t = 0; t < trail; ++t) v.push_back(0.0);
        const bool sparse = span * 100 >= 132 * 25;
        const long diff = ab[0] - ab[1];
        const long sum = ab[0] + ab[1];
        const bool variable = diff * diff * 100 >= 49 * sum * sum;
        DemandClass c = sparse ? (variable ? DemandClass::kLumpy : DemandClass::kIntermittent)
                               : (variable ? DemandClass::kErratic : DemandClass::kSmooth);
        out.push_back({std::move(v), c});
      }
    }
    ++variant;
  }
  out.push_back({std::vector<double>(30, 0.0), DemandClass::kNoDemand});
  return out;
}

struct BorutaData {
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  std::vector<double> y;
  std::size_t informative = 0;

  shelfcast::TabularView view() const {
    shelfcast::TabularView v;
    v.names = names;
    for (const auto& c : cols) v.columns.emplace_back(c);
    v.target = y;
    return v;
  }
};

// `informative` standard-normal features that each drive the target
// (linear, step and quadratic shapes), followed by `noise` independent
// standard-normal features.
inline BorutaData boruta_data(std::uint64_t seed, std::size_t rows, std::size_t informative, std::size_t noise) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  BorutaData d;
  d.informative = informative;
  for (std::size_t f = 0; f < informative + noise; ++f) {
    d.names.push_back((f < informative ? "x" : "noise") + std::to_string(f < informative ? f : f - informative));
    d.cols.emplace_back(rows);
    for (auto& v : d.cols.back()) v = z(rng);
  }
  d.y.assign(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t f = 0; f < informative; ++f) {
      const double x = d.cols[f][r];
      switch (f % 3) {
        case 0: d.y[r] += x; break;
        case 1: d.y[r] += x > 0.0 ? 1.0 : -1.0; break;
        default: d.y[r] += 0.7 * x * x; break;
      }
    }
    d.y[r] += 0.5 * z(rng);
  }
  return d;
}

}  // namespace fixtures
