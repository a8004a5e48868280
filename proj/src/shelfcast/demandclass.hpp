#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "shelfcast/panel.hpp"

namespace shelfcast {

enum class DemandClass : int { kSmooth = 0, kIntermittent, kErratic, kLumpy, kNoDemand };
inline constexpr std::size_t kDemandClassCount = 5;
inline constexpr std::array<DemandClass, kDemandClassCount> kAllDemandClasses = {
    DemandClass::kSmooth, DemandClass::kIntermittent, DemandClass::kErratic, DemandClass::kLumpy,
    DemandClass::kNoDemand};

const char* demand_class_name(DemandClass c);

// Syntetos-Boylan cut-offs.
inline constexpr double kAdiCutoff = 1.32;
inline constexpr double kCv2Cutoff = 0.49;

struct DemandStats {
  double adi = 0.0;  // NaN when nonzero_count == 0
  double cv2 = 0.0;  // NaN when nonzero_count == 0
  std::size_t nonzero_count = 0;
};

struct DemandStatsOptions {
  // Count the periods before the first demand as a leading interval, giving
  // ADI = (index of last demand + 1) / demands.
  bool count_leading_interval = false;
  // Treat missing (NaN) periods as zero demand instead of skipping them.
  bool missing_as_zero = false;
};

// ADI is the mean interval between successive demand occurrences; CV^2 uses
// the population variance of the nonzero sizes.
DemandStats demand_stats(std::span<const double> series, const DemandStatsOptions& opts = {});
DemandClass classify(const DemandStats& stats);

struct ClassDistribution {
  std::array<std::size_t, kDemandClassCount> counts{};
  std::array<double, kDemandClassCount> fractions{};
  std::size_t total = 0;

  double fraction(DemandClass c) const { return fractions[static_cast<int>(c)]; }
};

struct SeriesClassification {
  std::string series_key;
  DemandStats stats;
  DemandClass label;
};

std::vector<SeriesClassification> classify_series(const SalesPanel& panel,
                                                  const DemandStatsOptions& opts = {});
ClassDistribution classify_panel(const SalesPanel& panel, const DemandStatsOptions& opts = {});
ClassDistribution tally(std::span<const SeriesClassification> rows);

// series_key,adi,cv2,class
std::string classification_csv(std::span<const SeriesClassification> rows);

}  // namespace shelfcast
