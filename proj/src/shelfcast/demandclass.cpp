#include "shelfcast/demandclass.hpp"

#include <cmath>

#include "shelfcast/csv.hpp"
#include "shelfcast/error.hpp"

namespace shelfcast {

const char* demand_class_name(DemandClass c) {
  switch (c) {
    case DemandClass::kSmooth: return "Smooth";
    case DemandClass::kIntermittent: return "Intermittent";
    case DemandClass::kErratic: return "Erratic";
    case DemandClass::kLumpy: return "Lumpy";
    case DemandClass::kNoDemand: return "No Demand";
  }
  return "?";
}

DemandStats demand_stats(std::span<const double> series, const DemandStatsOptions& opts) {
  require(!series.empty(), "demand_stats: series must be nonempty");
  DemandStats st;
  std::size_t period = 0;  // index among the periods that are kept
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t kept = 0;
  double sum = 0.0;
  for (double v : series) {
    if (std::isnan(v)) {
      if (!opts.missing_as_zero) continue;
      v = 0.0;
    }
    require(v >= 0.0, "demand_stats: negative demand");
    if (v > 0.0) {
      if (st.nonzero_count == 0) first = period;
      last = period;
      ++st.nonzero_count;
      sum += v;
    }
    ++period;
    ++kept;
  }
  if (st.nonzero_count == 0) {
    st.adi = std::nan("");
    st.cv2 = std::nan("");
    return st;
  }
  const auto n = static_cast<double>(st.nonzero_count);
  if (opts.count_leading_interval) {
    st.adi = static_cast<double>(last + 1) / n;
  } else if (st.nonzero_count == 1) {
    st.adi = static_cast<double>(kept);
  } else {
    st.adi = static_cast<double>(last - first) / (n - 1.0);
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : series) {
    if (std::isnan(v) || v <= 0.0) continue;
    ss += (v - mean) * (v - mean);
  }
  st.cv2 = (ss / n) / (mean * mean);
  return st;
}

DemandClass classify(const DemandStats& stats) {
  if (stats.nonzero_count == 0) return DemandClass::kNoDemand;
  const bool sparse = stats.adi >= kAdiCutoff;
  const bool variable = stats.cv2 >= kCv2Cutoff;
  if (!sparse && !variable) return DemandClass::kSmooth;
  if (sparse && !variable) return DemandClass::kIntermittent;
  if (!sparse && variable) return DemandClass::kErratic;
  return DemandClass::kLumpy;
}

std::vector<SeriesClassification> classify_series(const SalesPanel& panel,
                                                  const DemandStatsOptions& opts) {
  if (panel.series_count() == 0) fail(ErrorCode::kEmpty, "classify: panel has no series");
  std::vector<SeriesClassification> out;
  out.reserve(panel.series_count());
  for (std::size_t s = 0; s < panel.series_count(); ++s) {
    auto st = demand_stats(panel.values(Field::kSales, s), opts);
    out.push_back({panel.series_key(s), st, classify(st)});
  }
  return out;
}

ClassDistribution tally(std::span<const SeriesClassification> rows) {
  if (rows.empty()) fail(ErrorCode::kEmpty, "classify: no series");
  ClassDistribution d;
  for (const auto& r : rows) ++d.counts[static_cast<int>(r.label)];
  d.total = rows.size();
  for (std::size_t k = 0; k < kDemandClassCount; ++k) {
    d.fractions[k] = static_cast<double>(d.counts[k]) / static_cast<double>(d.total);
  }
  return d;
}

ClassDistribution classify_panel(const SalesPanel& panel, const DemandStatsOptions& opts) {
  auto rows = classify_series(panel, opts);
  return tally(rows);
}

std::string classification_csv(std::span<const SeriesClassification> rows) {
  std::string out = "series_key,adi,cv2,class\n";
  for (const auto& r : rows) {
    out += r.series_key;
    out += ',';
    out += format_number(r.stats.adi);
    out += ',';
    out += format_number(r.stats.cv2);
    out += ',';
    out += demand_class_name(r.label);
    out += '\n';
  }
  return out;
}

}  // namespace shelfcast
