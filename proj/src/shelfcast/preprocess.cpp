#include "shelfcast/preprocess.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "shelfcast/error.hpp"

namespace shelfcast {

namespace {

// Basic fill of one series/field in place. Returns false when the series has
// no observed value for the field.
bool basic_fill(std::span<double> vals, std::span<const std::uint8_t> observed, bool categorical) {
  const std::size_t n = vals.size();
  if (categorical) {
    std::map<double, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) {
      if (observed[i]) ++counts[vals[i]];
    }
    if (counts.empty()) return false;
    double mode = counts.begin()->first;
    std::size_t best = 0;
    for (const auto& [v, c] : counts) {
      if (c > best) {
        best = c;
        mode = v;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!observed[i]) vals[i] = mode;
    }
    return true;
  }
  std::size_t first_obs = n;
  double last = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n; ++i) {
    if (observed[i]) {
      last = vals[i];
      if (first_obs == n) first_obs = i;
    } else if (first_obs != n) {
      vals[i] = last;
    }
  }
  if (first_obs == n) return false;
  for (std::size_t i = 0; i < first_obs; ++i) vals[i] = vals[first_obs];
  return true;
}

void check_mask(const SalesPanel& panel, const ImputationMask& mask) {
  require(mask.row_count() == panel.row_count(), "imputation mask is not aligned with the panel");
}

std::span<const std::uint8_t> mask_span(const ImputationMask& mask, Field f, const SeriesSpec& sp) {
  return std::span<const std::uint8_t>(mask.field(f)).subspan(sp.offset, static_cast<std::size_t>(sp.length));
}

}  // namespace

std::vector<Field> exogenous_fields() {
  std::vector<Field> out;
  for (Field f : kAllFields) {
    if (f != Field::kSales) out.push_back(f);
  }
  return out;
}

ImputeResult impute_basic(const SalesPanel& panel, const ImputationMask& mask, std::span<const Field> fields) {
  check_mask(panel, mask);
  ImputeResult res{panel, {}};
  for (std::size_t s = 0; s < panel.series_count(); ++s) {
    const auto& sp = panel.series[s];
    for (Field f : fields) {
      auto vals = res.panel.values(f, s);
      if (!basic_fill(vals, mask_span(mask, f, sp), is_categorical(f))) res.unfilled.push_back({s, f});
    }
  }
  return res;
}

ImputeResult impute_seasonal(const SalesPanel& panel, const ImputationMask& mask, std::span<const Field> fields,
                             int period, int max_periods) {
  require(period >= 1, "impute_seasonal: period must be >= 1");
  require(max_periods >= 0, "impute_seasonal: max_periods must be >= 0");
  check_mask(panel, mask);
  ImputeResult res{panel, {}};
  for (std::size_t s = 0; s < panel.series_count(); ++s) {
    const auto& sp = panel.series[s];
    const auto n = static_cast<std::ptrdiff_t>(sp.length);
    for (Field f : fields) {
      const auto obs = mask_span(mask, f, sp);
      const auto src = panel.values(f, s);
      auto out = res.panel.values(f, s);
      const bool categorical = is_categorical(f);

      // Nearest observed index at or before / after each position.
      std::vector<std::ptrdiff_t> prev(n, -1), next(n, -1);
      std::ptrdiff_t last = -1;
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        if (obs[i]) last = i;
        prev[i] = last;
      }
      last = -1;
      for (std::ptrdiff_t i = n - 1; i >= 0; --i) {
        if (obs[i]) last = i;
        next[i] = last;
      }
      if (n > 0 && prev[n - 1] < 0) {
        res.unfilled.push_back({s, f});
        continue;
      }

      std::vector<std::uint8_t> pending(n, 0);
      bool any_pending = false;
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        if (obs[i]) continue;
        bool done = false;
        for (int k = 1; k <= max_periods && !done; ++k) {
          const std::ptrdiff_t before = i - static_cast<std::ptrdiff_t>(k) * period;
          const std::ptrdiff_t after = i + static_cast<std::ptrdiff_t>(k) * period;
          if (before >= 0 && obs[before]) {
            out[i] = src[before];
            done = true;
          } else if (after < n && obs[after]) {
            out[i] = src[after];
            done = true;
          }
        }
        if (!done && !categorical && prev[i] >= 0 && next[i] >= 0) {
          const double a = src[prev[i]];
          const double b = src[next[i]];
          const double w = static_cast<double>(i - prev[i]) / static_cast<double>(next[i] - prev[i]);
          out[i] = a + (b - a) * w;
          done = true;
        }
        if (!done) {
          pending[i] = 1;
          any_pending = true;
        }
      }
      if (any_pending) {
        // Edges (and categorical gaps) fall back to the basic fill computed
        // from observed cells only.
        std::vector<double> basic(src.begin(), src.end());
        basic_fill(basic, obs, categorical);
        for (std::ptrdiff_t i = 0; i < n; ++i) {
          if (pending[i]) out[i] = basic[i];
        }
      }
    }
  }
  return res;
}

namespace {

SalesPanel rescale_prices(const SalesPanel& panel, double base_cpi, bool deflate) {
  if (!(base_cpi > 0.0)) fail(ErrorCode::kNumeric, "base cpi must be positive");
  SalesPanel out = panel;
  const auto& cpi = panel.column(Field::kCpi);
  static constexpr Field kPriceFields[] = {Field::kPrice, Field::kCompetitorPrice, Field::kCogs, Field::kRebate};
  for (std::size_t r = 0; r < panel.row_count(); ++r) {
    bool any = false;
    for (Field f : kPriceFields) any = any || !std::isnan(panel.column(f)[r]);
    if (!any) continue;
    const double c = cpi[r];
    if (!(c > 0.0)) {
      fail(ErrorCode::kNumeric, "cpi must be positive where prices are present (row " + std::to_string(r) + ")");
    }
    const double factor = deflate ? base_cpi / c : c / base_cpi;
    for (Field f : kPriceFields) {
      double& v = out.column(f)[r];
      if (!std::isnan(v)) v *= factor;
    }
  }
  return out;
}

}  // namespace

SalesPanel deflate_prices(const SalesPanel& panel, double base_cpi) { return rescale_prices(panel, base_cpi, true); }

SalesPanel inflate_prices(const SalesPanel& panel, double base_cpi) { return rescale_prices(panel, base_cpi, false); }

RelativePrices relative_prices(const SalesPanel& panel) {
  const std::size_t n = panel.row_count();
  RelativePrices rel;
  rel.out_store.assign(n, std::nan(""));
  rel.in_store.assign(n, std::nan(""));
  const auto& price = panel.column(Field::kPrice);
  const auto& comp = panel.column(Field::kCompetitorPrice);

  struct Acc {
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::unordered_map<std::uint64_t, Acc> uon_day;
  uon_day.reserve(n / 2 + 1);
  auto key = [&](std::size_t s, std::int32_t day) {
    const auto store = static_cast<std::uint64_t>(panel.series[s].store);
    const auto uon = static_cast<std::uint64_t>(panel.uon_of(s));
    return (store << 44) ^ (uon << 24) ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(day) & 0xFFFFFF);
  };
  for (std::size_t s = 0; s < panel.series_count(); ++s) {
    const auto& sp = panel.series[s];
    for (std::int32_t i = 0; i < sp.length; ++i) {
      const double p = price[sp.offset + i];
      if (std::isnan(p)) continue;
      auto& acc = uon_day[key(s, (sp.first + i).days)];
      acc.sum += p;
      ++acc.count;
    }
  }
  for (std::size_t s = 0; s < panel.series_count(); ++s) {
    const auto& sp = panel.series[s];
    for (std::int32_t i = 0; i < sp.length; ++i) {
      const std::size_t r = sp.offset + static_cast<std::size_t>(i);
      const double p = price[r];
      if (std::isnan(p)) continue;
      const double c = comp[r];
      if (!std::isnan(c)) {
        if (c == 0.0) {
          ++rel.zero_denominators;
        } else {
          rel.out_store[r] = (p - c) / c;
        }
      }
      const auto& acc = uon_day.at(key(s, (sp.first + i).days));
      const double mean = acc.sum / static_cast<double>(acc.count);
      if (mean == 0.0) {
        ++rel.zero_denominators;
      } else {
        rel.in_store[r] = acc.count == 1 ? 0.0 : (p - mean) / mean;
      }
    }
  }
  return rel;
}

}  // namespace shelfcast
