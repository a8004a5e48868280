#include "shelfcast/featselect.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shelfcast/csv.hpp"
#include "shelfcast/error.hpp"
#include "shelfcast/numeric.hpp"

namespace shelfcast {

const char* decision_name(Decision d) {
  switch (d) {
    case Decision::kAccepted: return "Accepted";
    case Decision::kRejected: return "Rejected";
    case Decision::kTentative: return "Tentative";
  }
  return "?";
}

void BorutaConfig::validate() const {
  require(max_iters >= 1, "boruta: max_iters must be >= 1");
  require(p_value > 0.0 && p_value < 1.0, "boruta: p_value must be in (0,1)");
  require(shadow_percentile >= 0.0 && shadow_percentile <= 100.0, "boruta: shadow_percentile must be in [0,100]");
}

std::vector<std::string> FeatureDecision::kept() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (decisions[i] != Decision::kRejected) out.push_back(names[i]);
  }
  return out;
}

std::size_t FeatureDecision::count(Decision d) const {
  return static_cast<std::size_t>(std::count(decisions.begin(), decisions.end(), d));
}

std::string FeatureDecision::to_csv() const {
  std::string out = "feature,decision,hits,iters\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    out += names[i] + ',' + decision_name(decisions[i]) + ',' + std::to_string(hits[i]) + ',' +
           std::to_string(iterations) + '\n';
  }
  return out;
}

double binomial_two_sided_p(int hits, int n) {
  require(n >= 1 && hits >= 0 && hits <= n, "binomial test: need 0 <= hits <= n, n >= 1");
  auto log_pmf = [n](int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0);
  };
  double upper = 0.0;
  for (int k = hits; k <= n; ++k) upper += std::exp(log_pmf(k));
  double lower = 0.0;
  for (int k = 0; k <= hits; ++k) lower += std::exp(log_pmf(k));
  return std::min(1.0, 2.0 * std::min(upper, lower));
}

FeatureDecision boruta_select(const BinnedData& data, const BorutaConfig& cfg, const BorutaTrainer& trainer) {
  cfg.validate();
  const std::size_t nf = data.features();
  if (nf == 0) fail(ErrorCode::kEmpty, "boruta: no features");
  if (data.rows() == 0) fail(ErrorCode::kEmpty, "boruta: no training rows");

  FeatureDecision out;
  out.names = data.names;
  out.hits.assign(nf, 0);

  BinnedData aug;
  aug.names = data.names;
  aug.mappers = data.mappers;
  aug.bins = data.bins;
  aug.target = data.target;
  for (std::size_t f = 0; f < nf; ++f) {
    aug.names.push_back("__shadow_" + std::to_string(f));
    aug.mappers.push_back(data.mappers[f]);
    aug.bins.push_back(data.bins[f]);
  }

  const std::size_t n = data.rows();
  std::vector<double> shadow_imp(nf);
  for (int it = 0; it < cfg.max_iters; ++it) {
    std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(it) + 1);
    for (std::size_t f = 0; f < nf; ++f) {
      auto& col = aug.bins[nf + f];
      col = data.bins[f];
      for (std::size_t i = n; i > 1; --i) std::swap(col[i - 1], col[static_cast<std::size_t>(rng() % i)]);
    }
    GbdtModel model;
    try {
      model = trainer(aug);
    } catch (const Error& e) {
      throw Error(e.code(), "boruta iteration " + std::to_string(it) + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, "boruta iteration " + std::to_string(it) + ": " + e.what());
    }
    require(model.feature_names.size() == aug.names.size(), "boruta: trainer returned a model with wrong features");
    const auto& imp = cfg.importance == ImportanceKind::kGain ? model.importance_gain : model.importance_split;
    for (std::size_t f = 0; f < nf; ++f) shadow_imp[f] = imp[nf + f];
    std::vector<double> sorted = shadow_imp;
    std::sort(sorted.begin(), sorted.end());
    const double bar = quantile_sorted(sorted, cfg.shadow_percentile / 100.0);
    std::vector<std::uint8_t> row(nf, 0);
    for (std::size_t f = 0; f < nf; ++f) {
      if (imp[f] > bar) {
        row[f] = 1;
        ++out.hits[f];
      }
    }
    out.trace.push_back(std::move(row));
  }
  out.iterations = cfg.max_iters;
  for (std::size_t f = 0; f < nf; ++f) {
    const double p = binomial_two_sided_p(out.hits[f], cfg.max_iters);
    Decision d = Decision::kTentative;
    if (p < cfg.p_value) {
      if (2 * out.hits[f] > cfg.max_iters) d = Decision::kAccepted;
      if (2 * out.hits[f] < cfg.max_iters) d = Decision::kRejected;
    }
    out.decisions.push_back(d);
  }
  return out;
}

FeatureDecision boruta_select(const TabularView& view, const BorutaConfig& cfg, const BorutaTrainer& trainer,
                              int n_bins) {
  if (view.columns.empty()) fail(ErrorCode::kEmpty, "boruta: no features");
  return boruta_select(bin_dataset(view, n_bins), cfg, trainer);
}

BorutaTrainer gbdt_trainer(const GbdtConfig& cfg) {
  return [cfg](const BinnedData& d) { return fit_binned(d, cfg); };
}

PrefilterResult prefilter_features(const TabularView& view, const PrefilterConfig& cfg) {
  PrefilterResult res;
  const std::size_t n = view.rows();
  std::vector<std::size_t> kept_idx;
  std::vector<double> means;
  for (std::size_t f = 0; f < view.columns.size(); ++f) {
    const auto col = view.columns[f];
    std::size_t finite = 0;
    long double sum = 0.0L;
    for (double v : col) {
      if (std::isnan(v)) continue;
      ++finite;
      sum += v;
    }
    const double missing = n == 0 ? 1.0 : 1.0 - static_cast<double>(finite) / static_cast<double>(n);
    if (missing > cfg.max_missing) {
      res.dropped.emplace_back(view.names[f], "missing");
      continue;
    }
    const double mean = finite == 0 ? 0.0 : static_cast<double>(sum / finite);
    long double ss = 0.0L;
    for (double v : col) {
      if (!std::isnan(v)) ss += (v - mean) * (v - mean);
    }
    const double var = finite == 0 ? 0.0 : static_cast<double>(ss / finite);
    if (!(var >= cfg.min_variance)) {
      res.dropped.emplace_back(view.names[f], "low_variance");
      continue;
    }
    bool collinear = false;
    for (std::size_t k = 0; k < kept_idx.size() && !collinear; ++k) {
      const auto other = view.columns[kept_idx[k]];
      long double cov = 0.0L;
      long double va = 0.0L;
      long double vb = 0.0L;
      std::size_t m = 0;
      for (std::size_t r = 0; r < n; ++r) {
        if (std::isnan(col[r]) || std::isnan(other[r])) continue;
        const long double a = col[r] - mean;
        const long double b = other[r] - means[k];
        cov += a * b;
        va += a * a;
        vb += b * b;
        ++m;
      }
      if (m < 2 || va <= 0 || vb <= 0) continue;
      const double corr = static_cast<double>(cov / std::sqrt(va * vb));
      if (std::fabs(corr) > cfg.max_abs_correlation) collinear = true;
    }
    if (collinear) {
      res.dropped.emplace_back(view.names[f], "collinear");
      continue;
    }
    kept_idx.push_back(f);
    means.push_back(mean);
    res.kept.push_back(view.names[f]);
  }
  return res;
}

}  // namespace shelfcast
