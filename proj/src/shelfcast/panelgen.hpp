#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "shelfcast/date.hpp"
#include "shelfcast/demandclass.hpp"
#include "shelfcast/panel.hpp"

namespace shelfcast {

// Length distribution of missing-value bursts.
struct BurstLength {
  enum class Kind { kConstant, kGeometric, kUniform };
  Kind kind = Kind::kGeometric;
  double mean = 14.0;  // constant length, or geometric mean (>= 1)
  int min = 1;         // uniform bounds, inclusive
  int max = 1;

  double expected() const;
  int sample(std::mt19937_64& rng) const;
  static BurstLength constant(int n) { return {Kind::kConstant, static_cast<double>(n), n, n}; }
  static BurstLength geometric(double mean) { return {Kind::kGeometric, mean, 1, 1}; }
  static BurstLength uniform(int lo, int hi) { return {Kind::kUniform, (lo + hi) / 2.0, lo, hi}; }
};

struct GeneratorProfile {
  int n_stores = 10;
  int n_groups = 8;
  int n_products = 500;
  int uons_per_group = 6;
  int n_zones = 3;
  int n_regions = 4;
  int horizon_days = 730;
  Date start = Date{18993};  // 2022-01-01
  // Position of the train/valid cutoff used to place product eliminations and
  // introductions.
  double cutoff_fraction = 0.8;

  // Target fractions indexed by DemandClass.
  std::array<double, kDemandClassCount> class_mix = {0.0243, 0.7006, 0.0311, 0.2348, 0.0092};

  double missing_rate = 0.50;
  BurstLength burst = BurstLength::geometric(14.0);
  std::vector<Field> missable = {Field::kSales, Field::kPrice, Field::kPromoCount, Field::kStock,
                                 Field::kCompetitorPrice};

  double eliminated_ratio = 0.30;
  double new_ratio = 0.10;
  double promo_rate = 0.08;

  // Demand response (log-scale multipliers on the demand intensity).
  double promo_uplift = 0.7;
  double promo_discount = 0.15;
  double price_elasticity = 1.5;
  double weekly_amplitude = 0.25;
  double yearly_amplitude = 0.15;
  double demand_noise = 0.15;

  double cpi_monthly_drift = 0.004;
  double cpi_noise = 0.002;
  double competitor_price_sd = 0.08;
  double margin_floor = 0.05;

  std::uint64_t seed = 42;

  // Throws Error(kInvalidArgument) naming the offending field.
  void validate() const;

  std::int32_t cutoff_offset() const;
  Date cutoff_date() const { return start + cutoff_offset(); }

  static GeneratorProfile defaults() { return {}; }
  // Denser demand with strong promotion/price/weekday effects: a panel where
  // exogenous features carry real signal.
  static GeneratorProfile signal_bearing();
};

SalesPanel generate_panel(const GeneratorProfile& profile);

// Blanks `fields` in contiguous bursts so that the expected missing fraction
// equals `rate`. Rows are never removed. The returned mask marks cells that
// still hold a value.
std::pair<SalesPanel, ImputationMask> inject_missingness(const SalesPanel& panel, double rate,
                                                         const BurstLength& burst,
                                                         std::uint64_t seed,
                                                         const std::vector<Field>& fields = {Field::kSales});

struct PeriodStats {
  std::size_t series_count = 0;  // series with >= 1 observed sale in the period
  std::size_t rows = 0;
  double avg_missingness = 0.0;     // missing sales cells / rows
  double avg_coverage_ratio = 0.0;  // mean over series of observed / lifespan days
};

struct PanelStats {
  std::size_t series_count = 0;
  PeriodStats train;
  PeriodStats valid;
  std::size_t eliminated_count = 0;  // last observed sale before cutoff
  std::size_t new_count = 0;         // first observed sale at or after cutoff
  double eliminated_ratio = 0.0;     // eliminated / train.series_count
  double new_ratio = 0.0;            // new / valid.series_count
  ClassDistribution class_distribution;
};

PanelStats summarize_panel(const SalesPanel& panel, Date cutoff);

// Deterministic 64-bit mixer used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace shelfcast
