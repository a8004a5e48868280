#include "shelfcast/tuning.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "shelfcast/baseline.hpp"
#include "shelfcast/error.hpp"
#include "shelfcast/feature_matrix.hpp"
#include "shelfcast/metrics.hpp"

namespace shelfcast {

TuneSpace TuneSpace::defaults() {
  TuneSpace s;
  s.params = {
      {"learning_rate", 0.02, 0.2, false, true},
      {"max_leaves", 8, 63, true, false},
      {"lambda_l2", 0.1, 10.0, false, true},
      {"min_child_weight", 1e-3, 20.0, false, true},
      {"colsample", 0.5, 1.0, false, false},
  };
  return s;
}

bool TuneSpace::is_integer(const std::string& name) {
  return name == "n_rounds" || name == "max_depth" || name == "max_leaves" || name == "n_bins";
}

void TuneSpace::apply(GbdtConfig& cfg, const std::string& name, double value) {
  if (name == "n_rounds") {
    cfg.n_rounds = static_cast<int>(std::lround(value));
  } else if (name == "learning_rate") {
    cfg.learning_rate = value;
  } else if (name == "max_depth") {
    cfg.max_depth = static_cast<int>(std::lround(value));
  } else if (name == "max_leaves") {
    cfg.max_leaves = static_cast<int>(std::lround(value));
  } else if (name == "min_child_weight") {
    cfg.min_child_weight = value;
  } else if (name == "lambda_l2") {
    cfg.lambda_l2 = value;
  } else if (name == "min_split_gain") {
    cfg.min_split_gain = value;
  } else if (name == "n_bins") {
    cfg.n_bins = static_cast<int>(std::lround(value));
  } else if (name == "subsample") {
    cfg.subsample = value;
  } else if (name == "colsample") {
    cfg.colsample = value;
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown tunable parameter '" + name + "'");
  }
}

TuneResult tune_random_search(const GbdtConfig& base, const TuneSpace& space, int budget, std::uint64_t seed,
                              const TuneScorer& scorer) {
  require(budget >= 1, "tuning budget must be >= 1");
  if (space.params.empty()) fail(ErrorCode::kInvalidArgument, "tuning space is empty");
  for (const auto& p : space.params) {
    require(p.lo <= p.hi, "tuning range for '" + p.name + "' has lo > hi");
    require(!p.log_scale || p.lo > 0.0, "log-scale range for '" + p.name + "' must be positive");
  }
  std::mt19937_64 rng(seed);
  auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  TuneResult res;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < budget; ++i) {
    GbdtConfig cfg = base;
    for (const auto& p : space.params) {
      double v;
      if (p.integer) {
        const auto lo = static_cast<long long>(std::ceil(p.lo));
        const auto hi = static_cast<long long>(std::floor(p.hi));
        require(lo <= hi, "integer range for '" + p.name + "' holds no integer");
        v = static_cast<double>(lo + static_cast<long long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)));
      } else if (p.log_scale) {
        v = std::exp(std::log(p.lo) + u01() * (std::log(p.hi) - std::log(p.lo)));
      } else {
        v = p.lo + u01() * (p.hi - p.lo);
      }
      TuneSpace::apply(cfg, p.name, v);
    }
    cfg.validate();
    double score = scorer(cfg);
    if (std::isnan(score)) score = std::numeric_limits<double>::infinity();
    res.candidates.push_back(cfg);
    res.scores.push_back(score);
    if (i == 0 || score < best) {
      best = score;
      res.best_index = static_cast<std::size_t>(i);
    }
  }
  res.best = res.candidates[res.best_index];
  return res;
}

namespace {

std::vector<std::size_t> sample_rows(std::span<const std::size_t> rows, double fraction, std::uint64_t seed) {
  if (fraction >= 1.0) return {rows.begin(), rows.end()};
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out;
  for (std::size_t r : rows) {
    if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < fraction) out.push_back(r);
  }
  return out;
}

}  // namespace

TuneScorer rmsse_scorer(const FeatureMatrix& m, std::span<const std::size_t> train_rows,
                        std::span<const std::size_t> valid_rows, double fraction, std::uint64_t seed,
                        const ForecasterOptions& opts) {
  require(fraction > 0.0 && fraction <= 1.0, "tuning sample fraction must be in (0,1]");
  auto train = sample_rows(train_rows, fraction, seed);
  auto valid = sample_rows(valid_rows, fraction, seed + 1);
  if (train.empty() || valid.empty()) fail(ErrorCode::kEmpty, "tuning subsample is empty");
  return [&m, train = std::move(train), valid = std::move(valid), opts](const GbdtConfig& cfg) {
    ForecasterOptions o = opts;
    o.gbdt = cfg;
    GbdtForecaster model(o);
    model.fit(m, train);
    const auto pred = model.predict(m, valid);
    return evaluate(build_frame(m, valid, pred)).rmsse;
  };
}

}  // namespace shelfcast
