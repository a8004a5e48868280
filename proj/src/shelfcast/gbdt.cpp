#include "shelfcast/gbdt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "shelfcast/csv.hpp"
#include "shelfcast/error.hpp"
#include "shelfcast/numeric.hpp"

namespace shelfcast {

namespace {

constexpr char kModelMagic[] = "shelfcast-gbdt";
constexpr int kModelVersion = 1;
constexpr std::size_t kBinSampleRows = 200000;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void GbdtConfig::validate() const {
  require(n_rounds >= 1, "gbdt: n_rounds must be >= 1");
  require(learning_rate > 0.0 && learning_rate <= 1.0, "gbdt: learning_rate must be in (0,1]");
  require(max_depth >= 0, "gbdt: max_depth must be >= 0");
  require(max_leaves == 0 || max_leaves >= 2, "gbdt: max_leaves must be 0 or >= 2");
  require(max_depth >= 1 || max_leaves >= 2, "gbdt: need max_depth >= 1 or max_leaves >= 2");
  require(min_child_weight >= 0.0, "gbdt: min_child_weight must be >= 0");
  require(lambda_l2 >= 0.0, "gbdt: lambda_l2 must be >= 0");
  require(min_split_gain >= 0.0, "gbdt: min_split_gain must be >= 0");
  require(n_bins >= 2 && n_bins <= 256, "gbdt: n_bins must be in [2,256]");
  require(subsample > 0.0 && subsample <= 1.0, "gbdt: subsample must be in (0,1]");
  require(colsample > 0.0 && colsample <= 1.0, "gbdt: colsample must be in (0,1]");
  require(loss != Loss::kQuantile || (alpha > 0.0 && alpha < 1.0), "gbdt: quantile alpha must be in (0,1)");
}

std::uint16_t BinMapper::bin(double v) const {
  if (std::isnan(v)) return missing_bin();
  return static_cast<std::uint16_t>(std::lower_bound(edges.begin(), edges.end(), v) - edges.begin());
}

BinMapper build_bin_mapper(std::span<const double> values, int n_bins) {
  require(n_bins >= 2, "build_bin_mapper: n_bins must be >= 2");
  std::size_t finite = 0;
  for (double v : values) finite += !std::isnan(v);
  const std::size_t stride = finite > kBinSampleRows ? (finite + kBinSampleRows - 1) / kBinSampleRows : 1;
  std::vector<double> sample;
  sample.reserve(finite / stride + 1);
  std::size_t k = 0;
  for (double v : values) {
    if (std::isnan(v)) continue;
    if (k++ % stride == 0) sample.push_back(v);
  }
  BinMapper m;
  if (sample.empty()) return m;
  std::sort(sample.begin(), sample.end());
  std::vector<double> distinct;
  std::unique_copy(sample.begin(), sample.end(), std::back_inserter(distinct));
  if (distinct.size() <= static_cast<std::size_t>(n_bins)) {
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
      double mid = distinct[i] + (distinct[i + 1] - distinct[i]) / 2.0;
      if (!(mid < distinct[i + 1])) mid = distinct[i];  // adjacent doubles
      m.edges.push_back(mid);
    }
    return m;
  }
  for (int b = 1; b < n_bins; ++b) {
    const double e = quantile_sorted(sample, static_cast<double>(b) / n_bins);
    if (e >= distinct.back()) break;
    if (m.edges.empty() || e > m.edges.back()) m.edges.push_back(e);
  }
  return m;
}

double split_gain(double g_left, double h_left, double g_right, double h_right, double lambda) {
  auto term = [lambda](double g, double h) {
    const double d = h + lambda;
    return d > 0.0 ? g * g / d : 0.0;
  };
  return term(g_left, h_left) + term(g_right, h_right) - term(g_left + g_right, h_left + h_right);
}

BinnedData bin_dataset(const TabularView& view, int n_bins) {
  const std::size_t n = view.target.size();
  const std::size_t nf = view.columns.size();
  require(view.names.size() == nf, "bin_dataset: names and columns differ in length");
  for (const auto& c : view.columns) require(c.size() == n, "bin_dataset: column length differs from target");

  // Canonical row order: content hash, then bitwise lexicographic order.
  auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v); };
  std::vector<std::uint64_t> hash(n);
  for (std::size_t r = 0; r < n; ++r) hash[r] = mix(bits(view.target[r]));
  for (const auto& c : view.columns) {
    for (std::size_t r = 0; r < n; ++r) hash[r] = mix(hash[r] ^ bits(c[r]));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (hash[a] != hash[b]) return hash[a] < hash[b];
    if (bits(view.target[a]) != bits(view.target[b])) return bits(view.target[a]) < bits(view.target[b]);
    for (const auto& c : view.columns) {
      if (bits(c[a]) != bits(c[b])) return bits(c[a]) < bits(c[b]);
    }
    return false;
  });

  BinnedData d;
  d.names = view.names;
  d.target.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.target[i] = view.target[order[i]];
  std::vector<double> col(n);
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t i = 0; i < n; ++i) col[i] = view.columns[f][order[i]];
    BinMapper mapper = build_bin_mapper(col, n_bins);
    std::vector<std::uint16_t> codes(n);
    for (std::size_t i = 0; i < n; ++i) codes[i] = mapper.bin(col[i]);
    d.mappers.push_back(std::move(mapper));
    d.bins.push_back(std::move(codes));
  }
  return d;
}

double Tree::predict(std::span<const double> row) const {
  int i = 0;
  while (nodes[i].feature >= 0) {
    const auto& nd = nodes[i];
    const double v = row[static_cast<std::size_t>(nd.feature)];
    const bool left = std::isnan(v) ? nd.default_left : v <= nd.threshold;
    i = left ? nd.left : nd.right;
  }
  return nodes[i].value;
}

std::size_t Tree::leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

int Tree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].feature < 0) continue;
    d[nodes[i].left] = d[nodes[i].right] = d[i] + 1;
    best = std::max(best, d[i] + 1);
  }
  return best;
}

namespace {

struct HistBin {
  double g = 0.0;
  double h = 0.0;
  std::uint32_t c = 0;
};

struct SplitInfo {
  bool valid = false;
  double gain = 0.0;
  int feature = -1;
  int bin = 0;
  bool default_left = false;
};

struct Leaf {
  int node = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  int depth = 0;
  std::vector<HistBin> hist;
  SplitInfo best;
};

class TreeBuilder {
 public:
  TreeBuilder(const BinnedData& data, const GbdtConfig& cfg, const std::vector<double>& grad,
              const std::vector<double>& hess, std::vector<int> features)
      : data_(data), cfg_(cfg), grad_(grad), hess_(hess), features_(std::move(features)) {
    offsets_.resize(features_.size() + 1, 0);
    for (std::size_t k = 0; k < features_.size(); ++k) {
      offsets_[k + 1] = offsets_[k] + data_.mappers[static_cast<std::size_t>(features_[k])].codes();
    }
  }

  // `rows` is reordered in place so each final leaf owns a contiguous range.
  Tree build(std::vector<std::size_t>& rows, std::vector<std::pair<std::size_t, std::size_t>>& leaf_ranges,
             std::vector<int>& leaf_nodes) {
    rows_ = &rows;
    Tree tree;
    tree.nodes.emplace_back();
    Leaf root;
    root.node = 0;
    root.begin = 0;
    root.end = rows.size();
    root.hist = histogram(root.begin, root.end);
    find_split(root);

    std::vector<Leaf> done;
    std::size_t n_leaves = 1;
    const std::size_t max_leaves =
        cfg_.max_leaves > 0 ? static_cast<std::size_t>(cfg_.max_leaves) : std::numeric_limits<std::size_t>::max();

    if (cfg_.growth == Growth::kLeafWise) {
      std::vector<Leaf> open;
      open.push_back(std::move(root));
      while (n_leaves < max_leaves) {
        int pick = -1;
        for (std::size_t i = 0; i < open.size(); ++i) {
          if (!open[i].best.valid) continue;
          if (pick < 0 || open[i].best.gain > open[static_cast<std::size_t>(pick)].best.gain ||
              (open[i].best.gain == open[static_cast<std::size_t>(pick)].best.gain &&
               open[i].node < open[static_cast<std::size_t>(pick)].node)) {
            pick = static_cast<int>(i);
          }
        }
        if (pick < 0) break;
        Leaf parent = std::move(open[static_cast<std::size_t>(pick)]);
        open.erase(open.begin() + pick);
        auto [l, r] = split(tree, parent);
        open.push_back(std::move(l));
        open.push_back(std::move(r));
        ++n_leaves;
      }
      done = std::move(open);
    } else {
      std::vector<Leaf> level;
      level.push_back(std::move(root));
      while (!level.empty()) {
        std::vector<Leaf> next;
        for (auto& leaf : level) {
          if (leaf.best.valid && n_leaves < max_leaves) {
            auto [l, r] = split(tree, leaf);
            next.push_back(std::move(l));
            next.push_back(std::move(r));
            ++n_leaves;
          } else {
            leaf.hist.clear();
            done.push_back(std::move(leaf));
          }
        }
        level = std::move(next);
      }
    }
    std::sort(done.begin(), done.end(), [](const Leaf& a, const Leaf& b) { return a.node < b.node; });
    leaf_ranges.clear();
    leaf_nodes.clear();
    for (const auto& leaf : done) {
      long double g = 0.0L;
      long double h = 0.0L;
      for (std::size_t i = leaf.begin; i < leaf.end; ++i) {
        g += grad_[rows[i]];
        h += hess_[rows[i]];
      }
      auto& nd = tree.nodes[static_cast<std::size_t>(leaf.node)];
      nd.value = static_cast<double>(-g / (h + static_cast<long double>(cfg_.lambda_l2)));
      nd.cover = static_cast<double>(h);
      leaf_ranges.emplace_back(leaf.begin, leaf.end);
      leaf_nodes.push_back(leaf.node);
    }
    return tree;
  }

 private:
  std::vector<HistBin> histogram(std::size_t begin, std::size_t end) const {
    std::vector<HistBin> hist(offsets_.back());
    const auto& rows = *rows_;
    for (std::size_t k = 0; k < features_.size(); ++k) {
      const auto& codes = data_.bins[static_cast<std::size_t>(features_[k])];
      HistBin* h = hist.data() + offsets_[k];
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t r = rows[i];
        HistBin& b = h[codes[r]];
        b.g += grad_[r];
        b.h += hess_[r];
        ++b.c;
      }
    }
    return hist;
  }

  void find_split(Leaf& leaf) const {
    leaf.best = SplitInfo{};
    if (cfg_.max_depth > 0 && leaf.depth >= cfg_.max_depth) return;
    if (leaf.end - leaf.begin < 2) return;
    const double threshold = cfg_.min_split_gain + 1e-12;
    for (std::size_t k = 0; k < features_.size(); ++k) {
      const std::size_t f = static_cast<std::size_t>(features_[k]);
      const HistBin* h = leaf.hist.data() + offsets_[k];
      const std::size_t nv = data_.mappers[f].value_bins();
      const HistBin miss = h[nv];
      double tg = miss.g;
      double th = miss.h;
      std::uint32_t tc = miss.c;
      for (std::size_t b = 0; b < nv; ++b) {
        tg += h[b].g;
        th += h[b].h;
        tc += h[b].c;
      }
      double gl = 0.0;
      double hl = 0.0;
      std::uint32_t cl = 0;
      for (std::size_t b = 0; b < nv; ++b) {
        gl += h[b].g;
        hl += h[b].h;
        cl += h[b].c;
        const bool last = b + 1 == nv;
        if (last && miss.c == 0) break;
        // Missing values to the right, then to the left.
        for (int side = 0; side < 2; ++side) {
          if (side == 1 && (miss.c == 0 || last)) break;
          const double lg = side == 0 ? gl : gl + miss.g;
          const double lh = side == 0 ? hl : hl + miss.h;
          const std::uint32_t lc = side == 0 ? cl : cl + miss.c;
          const double rg = tg - lg;
          const double rh = th - lh;
          const std::uint32_t rc = tc - lc;
          if (lc == 0 || rc == 0) continue;
          // Values-only vs missing-only partitions are taken at the last bin
          // (values left, missing right) so empty bins never produce them.
          if (side == 1 && cl == 0) continue;
          if (side == 0 && !last && cl + miss.c == tc) continue;
          if (lh < cfg_.min_child_weight || rh < cfg_.min_child_weight) continue;
          const double gain = split_gain(lg, lh, rg, rh, cfg_.lambda_l2);
          if (!(gain > threshold)) continue;
          if (!leaf.best.valid || gain > leaf.best.gain) {
            leaf.best.valid = true;
            leaf.best.gain = gain;
            leaf.best.feature = static_cast<int>(f);
            leaf.best.bin = static_cast<int>(b);
            leaf.best.default_left = side == 1;
          }
        }
      }
    }
  }

  std::pair<Leaf, Leaf> split(Tree& tree, Leaf& parent) {
    const SplitInfo s = parent.best;
    const std::size_t f = static_cast<std::size_t>(s.feature);
    const auto& codes = data_.bins[f];
    const std::uint16_t missing = data_.mappers[f].missing_bin();
    auto& rows = *rows_;
    auto goes_left = [&](std::size_t r) {
      const std::uint16_t c = codes[r];
      return c == missing ? s.default_left : c <= s.bin;
    };
    auto mid = std::stable_partition(rows.begin() + static_cast<std::ptrdiff_t>(parent.begin),
                                     rows.begin() + static_cast<std::ptrdiff_t>(parent.end), goes_left);
    const std::size_t cut = static_cast<std::size_t>(mid - rows.begin());

    const int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    auto& nd = tree.nodes[static_cast<std::size_t>(parent.node)];
    nd.feature = s.feature;
    nd.threshold_bin = s.bin;
    const auto& edges = data_.mappers[f].edges;
    nd.threshold = static_cast<std::size_t>(s.bin) < edges.size() ? edges[static_cast<std::size_t>(s.bin)]
                                                                   : std::numeric_limits<double>::infinity();
    nd.default_left = s.default_left;
    nd.left = left_id;
    nd.right = left_id + 1;
    nd.gain = s.gain;

    Leaf l;
    Leaf r;
    l.node = left_id;
    r.node = left_id + 1;
    l.begin = parent.begin;
    l.end = cut;
    r.begin = cut;
    r.end = parent.end;
    l.depth = r.depth = parent.depth + 1;
    Leaf& small = (l.end - l.begin) <= (r.end - r.begin) ? l : r;
    Leaf& large = &small == &l ? r : l;
    small.hist = histogram(small.begin, small.end);
    large.hist = std::move(parent.hist);
    for (std::size_t i = 0; i < large.hist.size(); ++i) {
      large.hist[i].g -= small.hist[i].g;
      large.hist[i].h -= small.hist[i].h;
      large.hist[i].c -= small.hist[i].c;
    }
    find_split(l);
    find_split(r);
    return {std::move(l), std::move(r)};
  }

  const BinnedData& data_;
  const GbdtConfig& cfg_;
  const std::vector<double>& grad_;
  const std::vector<double>& hess_;
  std::vector<int> features_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t>* rows_ = nullptr;
};

int leaf_of_binned(const Tree& tree, const BinnedData& data, std::size_t row) {
  int i = 0;
  while (tree.nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const auto& nd = tree.nodes[static_cast<std::size_t>(i)];
    const std::size_t f = static_cast<std::size_t>(nd.feature);
    const std::uint16_t c = data.bins[f][row];
    const bool left = c == data.mappers[f].missing_bin() ? nd.default_left : c <= nd.threshold_bin;
    i = left ? nd.left : nd.right;
  }
  return i;
}

long double round_loss(const GbdtConfig& cfg, const std::vector<double>& y, const std::vector<double>& pred) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const long double e = static_cast<long double>(y[i]) - static_cast<long double>(pred[i]);
    if (cfg.loss == Loss::kSquared) {
      acc += e * e;
    } else {
      acc += e >= 0 ? cfg.alpha * e : (cfg.alpha - 1.0) * e;
    }
  }
  return acc / static_cast<long double>(y.size());
}

}  // namespace

GbdtModel fit_binned(const BinnedData& data, const GbdtConfig& cfg) {
  cfg.validate();
  const std::size_t n = data.rows();
  const std::size_t nf = data.features();
  if (n == 0) fail(ErrorCode::kEmpty, "gbdt fit: no training rows");
  if (nf == 0) fail(ErrorCode::kEmpty, "gbdt fit: no features");
  for (double v : data.target) {
    if (!std::isfinite(v)) fail(ErrorCode::kNumeric, "gbdt fit: non-finite target");
  }

  GbdtModel model;
  model.loss = cfg.loss;
  model.alpha = cfg.alpha;
  model.learning_rate = cfg.learning_rate;
  model.feature_names = data.names;
  model.mappers = data.mappers;
  model.importance_gain.assign(nf, 0.0);
  model.importance_split.assign(nf, 0.0);

  if (cfg.loss == Loss::kSquared) {
    long double s = 0.0L;
    for (double v : data.target) s += v;
    model.base_score = static_cast<double>(s / static_cast<long double>(n));
  } else {
    model.base_score = quantile(data.target, cfg.alpha);
  }

  std::vector<double> pred(n, model.base_score);
  std::vector<double> grad(n);
  std::vector<double> hess(n, 1.0);
  std::vector<std::size_t> rows;
  std::vector<std::pair<std::size_t, std::size_t>> leaf_ranges;
  std::vector<int> leaf_nodes;
  std::vector<double> residuals;
  const std::size_t n_cols =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.colsample * static_cast<double>(nf))));

  for (int round = 0; round < cfg.n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      if (cfg.loss == Loss::kSquared) {
        grad[i] = pred[i] - data.target[i];
      } else {
        grad[i] = (data.target[i] <= pred[i] ? 1.0 : 0.0) - cfg.alpha;
      }
    }
    std::mt19937_64 rng(mix(cfg.seed ^ mix(static_cast<std::uint64_t>(round) + 1)));
    rows.clear();
    if (cfg.subsample < 1.0) {
      for (std::size_t i = 0; i < n; ++i) {
        if (uniform01(rng) < cfg.subsample) rows.push_back(i);
      }
      if (rows.empty()) rows.push_back(static_cast<std::size_t>(rng() % n));
    } else {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    std::vector<int> feats(nf);
    std::iota(feats.begin(), feats.end(), 0);
    if (n_cols < nf) {
      for (std::size_t i = 0; i < n_cols; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % (nf - i));
        std::swap(feats[i], feats[j]);
      }
      feats.resize(n_cols);
      std::sort(feats.begin(), feats.end());
    }

    TreeBuilder builder(data, cfg, grad, hess, std::move(feats));
    Tree tree = builder.build(rows, leaf_ranges, leaf_nodes);

    if (cfg.loss == Loss::kQuantile) {
      for (std::size_t k = 0; k < leaf_ranges.size(); ++k) {
        residuals.clear();
        for (std::size_t i = leaf_ranges[k].first; i < leaf_ranges[k].second; ++i) {
          residuals.push_back(data.target[rows[i]] - pred[rows[i]]);
        }
        tree.nodes[static_cast<std::size_t>(leaf_nodes[k])].value = quantile(residuals, cfg.alpha);
      }
    }
    for (const auto& nd : tree.nodes) {
      if (nd.feature < 0) continue;
      model.importance_gain[static_cast<std::size_t>(nd.feature)] += nd.gain;
      model.importance_split[static_cast<std::size_t>(nd.feature)] += 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] += cfg.learning_rate * tree.nodes[static_cast<std::size_t>(leaf_of_binned(tree, data, i))].value;
    }
    model.trees.push_back(std::move(tree));
    model.train_loss.push_back(static_cast<double>(round_loss(cfg, data.target, pred)));
  }
  return model;
}

GbdtModel fit(const TabularView& view, const GbdtConfig& cfg) {
  cfg.validate();
  if (view.target.empty()) fail(ErrorCode::kEmpty, "gbdt fit: no training rows");
  if (view.columns.empty()) fail(ErrorCode::kEmpty, "gbdt fit: no features");
  for (double v : view.target) {
    if (!std::isfinite(v)) fail(ErrorCode::kNumeric, "gbdt fit: non-finite target");
  }
  return fit_binned(bin_dataset(view, cfg.n_bins), cfg);
}

double GbdtModel::predict_row(std::span<const double> row) const {
  require(row.size() == feature_names.size(), "predict_row: wrong number of features");
  double acc = base_score;
  for (const auto& t : trees) acc += learning_rate * t.predict(row);
  return acc;
}

std::vector<double> GbdtModel::predict(const TabularView& view) const { return predict(view, trees.size()); }

std::vector<double> GbdtModel::predict(const TabularView& view, std::size_t n_trees) const {
  require(view.names.size() == view.columns.size(), "predict: names and columns differ in length");
  std::vector<std::size_t> map(feature_names.size());
  for (std::size_t f = 0; f < feature_names.size(); ++f) {
    auto it = std::find(view.names.begin(), view.names.end(), feature_names[f]);
    if (it == view.names.end()) {
      fail(ErrorCode::kInvalidArgument, "predict: feature '" + feature_names[f] + "' is missing from the input");
    }
    map[f] = static_cast<std::size_t>(it - view.names.begin());
  }
  const std::size_t n = view.rows();
  n_trees = std::min(n_trees, trees.size());
  std::vector<double> out(n, base_score);
  std::vector<double> row(feature_names.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t f = 0; f < map.size(); ++f) row[f] = view.columns[map[f]][r];
    double acc = base_score;
    for (std::size_t t = 0; t < n_trees; ++t) acc += learning_rate * trees[t].predict(row);
    out[r] = acc;
  }
  return out;
}

std::map<std::string, double> GbdtModel::feature_importance(ImportanceKind kind) const {
  std::map<std::string, double> out;
  const auto& src = kind == ImportanceKind::kGain ? importance_gain : importance_split;
  for (std::size_t f = 0; f < feature_names.size(); ++f) out[feature_names[f]] = src[f];
  return out;
}

std::string GbdtModel::serialize() const {
  std::ostringstream os;
  os << kModelMagic << " v" << kModelVersion << '\n';
  os << "loss " << (loss == Loss::kSquared ? "squared" : "quantile") << ' ' << format_number(alpha) << '\n';
  os << "base_score " << format_number(base_score) << '\n';
  os << "learning_rate " << format_number(learning_rate) << '\n';
  os << "features " << feature_names.size() << '\n';
  for (std::size_t f = 0; f < feature_names.size(); ++f) {
    require(feature_names[f].find_first_of(" \t\n") == std::string::npos,
            "model feature names must not contain whitespace");
    os << "feature " << feature_names[f] << ' ' << format_number(importance_gain[f]) << ' '
       << format_number(importance_split[f]) << ' ' << mappers[f].edges.size();
    for (double e : mappers[f].edges) os << ' ' << format_number(e);
    os << '\n';
  }
  os << "trees " << trees.size() << '\n';
  for (const auto& t : trees) {
    os << "tree " << t.nodes.size() << '\n';
    for (const auto& nd : t.nodes) {
      os << "node " << nd.feature << ' ' << nd.threshold_bin << ' ' << format_number(nd.threshold) << ' '
         << (nd.default_left ? 1 : 0) << ' ' << nd.left << ' ' << nd.right << ' ' << format_number(nd.value) << ' '
         << format_number(nd.gain) << ' ' << format_number(nd.cover) << '\n';
    }
  }
  os << "train_loss " << train_loss.size();
  for (double v : train_loss) os << ' ' << format_number(v);
  os << "\nend\n";
  return os.str();
}

namespace {

class Reader {
 public:
  explicit Reader(const std::string& text) : in_(text) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) fail(ErrorCode::kParse, "model file truncated");
    return w;
  }
  void expect(const char* kw) {
    const std::string w = word();
    if (w != kw) fail(ErrorCode::kParse, std::string("model file: expected '") + kw + "', got '" + w + "'");
  }
  double number() { return parse_number(word()); }
  long long integer() { return parse_integer(word()); }

 private:
  std::istringstream in_;
};

}  // namespace

GbdtModel GbdtModel::deserialize(const std::string& text) {
  Reader rd(text);
  if (rd.word() != kModelMagic) fail(ErrorCode::kParse, "not a shelfcast model file");
  const std::string version = rd.word();
  if (version != "v" + std::to_string(kModelVersion)) {
    fail(ErrorCode::kVersion, "unsupported model version '" + version + "'");
  }
  GbdtModel m;
  rd.expect("loss");
  const std::string loss = rd.word();
  if (loss == "squared") {
    m.loss = Loss::kSquared;
  } else if (loss == "quantile") {
    m.loss = Loss::kQuantile;
  } else {
    fail(ErrorCode::kParse, "unknown loss '" + loss + "'");
  }
  m.alpha = rd.number();
  rd.expect("base_score");
  m.base_score = rd.number();
  rd.expect("learning_rate");
  m.learning_rate = rd.number();
  rd.expect("features");
  const long long nf = rd.integer();
  if (nf < 0) fail(ErrorCode::kParse, "model file: negative feature count");
  for (long long f = 0; f < nf; ++f) {
    rd.expect("feature");
    m.feature_names.push_back(rd.word());
    m.importance_gain.push_back(rd.number());
    m.importance_split.push_back(rd.number());
    const long long ne = rd.integer();
    if (ne < 0 || ne > 256) fail(ErrorCode::kParse, "model file: bad edge count");
    BinMapper bm;
    for (long long e = 0; e < ne; ++e) bm.edges.push_back(rd.number());
    m.mappers.push_back(std::move(bm));
  }
  rd.expect("trees");
  const long long nt = rd.integer();
  if (nt < 0) fail(ErrorCode::kParse, "model file: negative tree count");
  for (long long t = 0; t < nt; ++t) {
    rd.expect("tree");
    const long long nn = rd.integer();
    if (nn < 1) fail(ErrorCode::kParse, "model file: empty tree");
    Tree tree;
    for (long long i = 0; i < nn; ++i) {
      rd.expect("node");
      TreeNode nd;
      nd.feature = static_cast<int>(rd.integer());
      nd.threshold_bin = static_cast<int>(rd.integer());
      nd.threshold = rd.number();
      nd.default_left = rd.integer() != 0;
      nd.left = static_cast<int>(rd.integer());
      nd.right = static_cast<int>(rd.integer());
      nd.value = rd.number();
      nd.gain = rd.number();
      nd.cover = rd.number();
      if (nd.feature >= nf) fail(ErrorCode::kParse, "model file: node feature out of range");
      if (nd.feature >= 0 && (nd.left <= i || nd.right <= i || nd.left >= nn || nd.right >= nn)) {
        fail(ErrorCode::kParse, "model file: bad child index");
      }
      tree.nodes.push_back(nd);
    }
    m.trees.push_back(std::move(tree));
  }
  rd.expect("train_loss");
  const long long nl = rd.integer();
  for (long long i = 0; i < nl; ++i) m.train_loss.push_back(rd.number());
  rd.expect("end");
  return m;
}

void GbdtModel::save(const std::string& path) const { write_file_atomic(path, serialize()); }

GbdtModel GbdtModel::load(const std::string& path) { return deserialize(read_file(path)); }

}  // namespace shelfcast
