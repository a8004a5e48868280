#include "shelfcast/panelgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shelfcast/error.hpp"

namespace shelfcast {

namespace {

void check_fraction(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, std::string("profile.") + name + " must be in [0,1]");
  }
}

void check_positive(int v, const char* name) {
  if (v < 1) fail(ErrorCode::kInvalidArgument, std::string("profile.") + name + " must be >= 1");
}

std::string padded(const char* prefix, int v, int width) {
  std::string digits = std::to_string(v);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

// Per-series demand process parameters, drawn once per series.
struct DemandProcess {
  DemandClass cls = DemandClass::kIntermittent;
  double occurrence = 1.0;  // base probability of a demand day
  double level = 1.0;       // size scale
  double sigma = 0.0;       // lognormal dispersion of sizes
};

DemandProcess draw_process(DemandClass cls, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DemandProcess p;
  p.cls = cls;
  switch (cls) {
    case DemandClass::kSmooth:
      p.occurrence = 0.985;
      p.level = 5.0 + 9.0 * u(rng);
      break;
    case DemandClass::kErratic:
      p.occurrence = 0.985;
      p.level = 1.5 + 4.0 * u(rng);
      p.sigma = 1.05 + 0.35 * u(rng);
      break;
    case DemandClass::kIntermittent:
      p.occurrence = 0.06 + 0.36 * u(rng);
      p.level = 0.15 + 0.85 * u(rng);
      break;
    case DemandClass::kLumpy:
      p.occurrence = 0.06 + 0.36 * u(rng);
      p.level = 1.0 + 3.0 * u(rng);
      p.sigma = 1.05 + 0.35 * u(rng);
      break;
    case DemandClass::kNoDemand:
      p.occurrence = 0.0;
      break;
  }
  return p;
}

double draw_units(const DemandProcess& p, double intensity, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (p.cls) {
    case DemandClass::kNoDemand:
      return 0.0;
    case DemandClass::kSmooth: {
      if (u(rng) >= p.occurrence) return 0.0;
      std::poisson_distribution<int> pois(p.level * intensity);
      return 1.0 + pois(rng);
    }
    case DemandClass::kIntermittent: {
      if (u(rng) >= std::min(0.7, p.occurrence * intensity)) return 0.0;
      std::poisson_distribution<int> pois(p.level);
      return 1.0 + pois(rng);
    }
    case DemandClass::kErratic: {
      if (u(rng) >= p.occurrence) return 0.0;
      std::lognormal_distribution<double> ln(std::log(p.level * intensity), p.sigma);
      return 1.0 + std::floor(ln(rng));
    }
    case DemandClass::kLumpy: {
      if (u(rng) >= std::min(0.7, p.occurrence * intensity)) return 0.0;
      std::lognormal_distribution<double> ln(std::log(p.level), p.sigma);
      return 1.0 + std::floor(ln(rng));
    }
  }
  return 0.0;
}

DemandClass draw_class(const std::array<double, kDemandClassCount>& mix, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(rng);
  for (std::size_t k = 0; k < kDemandClassCount; ++k) {
    if (x < mix[k]) return static_cast<DemandClass>(k);
    x -= mix[k];
  }
  for (std::size_t k = kDemandClassCount; k-- > 0;) {
    if (mix[k] > 0.0) return static_cast<DemandClass>(k);
  }
  return DemandClass::kIntermittent;
}

// Weekday log-multipliers (Monday first), scaled by the profile amplitude.
constexpr std::array<double, 7> kWeekdayShape = {-0.4, -0.6, -0.2, 0.0, 0.4, 1.0, -0.2};

}  // namespace

double BurstLength::expected() const {
  switch (kind) {
    case Kind::kConstant: return mean;
    case Kind::kGeometric: return mean;
    case Kind::kUniform: return (min + max) / 2.0;
  }
  return mean;
}

int BurstLength::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::kConstant:
      return std::max(1, static_cast<int>(std::lround(mean)));
    case Kind::kGeometric: {
      std::geometric_distribution<int> g(1.0 / std::max(1.0, mean));
      return 1 + g(rng);
    }
    case Kind::kUniform: {
      std::uniform_int_distribution<int> d(min, max);
      return d(rng);
    }
  }
  return 1;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::int32_t GeneratorProfile::cutoff_offset() const {
  return static_cast<std::int32_t>(std::lround(cutoff_fraction * horizon_days));
}

GeneratorProfile GeneratorProfile::signal_bearing() {
  GeneratorProfile p;
  p.n_stores = 4;
  p.n_groups = 3;
  p.n_products = 40;
  p.uons_per_group = 4;
  p.horizon_days = 420;
  p.class_mix = {0.55, 0.20, 0.15, 0.10, 0.0};
  p.missing_rate = 0.15;
  p.burst = BurstLength::geometric(5.0);
  p.eliminated_ratio = 0.05;
  p.new_ratio = 0.0;
  p.promo_rate = 0.15;
  p.promo_uplift = 1.0;
  p.price_elasticity = 2.0;
  p.weekly_amplitude = 0.45;
  p.demand_noise = 0.1;
  return p;
}

void GeneratorProfile::validate() const {
  check_positive(n_stores, "n_stores");
  check_positive(n_groups, "n_groups");
  check_positive(n_products, "n_products");
  check_positive(uons_per_group, "uons_per_group");
  check_positive(n_zones, "n_zones");
  check_positive(n_regions, "n_regions");
  if (horizon_days < 60) fail(ErrorCode::kInvalidArgument, "profile.horizon_days must be >= 60");
  if (!(cutoff_fraction > 0.0 && cutoff_fraction < 1.0)) {
    fail(ErrorCode::kInvalidArgument, "profile.cutoff_fraction must be in (0,1)");
  }
  double total = 0.0;
  for (double f : class_mix) {
    check_fraction(f, "class_mix");
    total += f;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    fail(ErrorCode::kInvalidArgument, "profile.class_mix must sum to 1 (got " + std::to_string(total) + ")");
  }
  check_fraction(missing_rate, "missing_rate");
  check_fraction(eliminated_ratio, "eliminated_ratio");
  check_fraction(new_ratio, "new_ratio");
  check_fraction(promo_rate, "promo_rate");
  check_fraction(promo_discount, "promo_discount");
  check_fraction(margin_floor, "margin_floor");
  if (burst.kind == BurstLength::Kind::kUniform && (burst.min < 1 || burst.max < burst.min)) {
    fail(ErrorCode::kInvalidArgument, "profile.burst uniform bounds invalid");
  }
  if (burst.kind != BurstLength::Kind::kUniform && burst.mean < 1.0) {
    fail(ErrorCode::kInvalidArgument, "profile.burst mean must be >= 1");
  }
  if (demand_noise < 0.0 || competitor_price_sd < 0.0 || cpi_noise < 0.0) {
    fail(ErrorCode::kInvalidArgument, "profile noise scales must be >= 0");
  }
  const std::int32_t cut = cutoff_offset();
  if (cut < 45 || horizon_days - cut < 31) {
    fail(ErrorCode::kInvalidArgument, "profile.cutoff_fraction leaves too few days on one side");
  }
}

SalesPanel generate_panel(const GeneratorProfile& profile) {
  profile.validate();
  SalesPanel panel;
  std::mt19937_64 rng(mix_seed(profile.seed, 0));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> n01(0.0, 1.0);

  for (int g = 0; g < profile.n_groups; ++g) {
    panel.groups.push_back(padded("G", g + 1, 2));
    for (int k = 0; k < profile.uons_per_group; ++k) {
      panel.uons.push_back(panel.groups.back() + "-U" + std::to_string(k + 1));
      panel.uon_group.push_back(g);
    }
  }

  std::vector<double> zone_price_factor(profile.n_zones);
  for (int z = 0; z < profile.n_zones; ++z) {
    zone_price_factor[z] = profile.n_zones == 1 ? 1.0 : 0.94 + 0.12 * z / (profile.n_zones - 1);
  }
  std::vector<double> store_scale(profile.n_stores);
  std::vector<double> store_competition(profile.n_stores);
  for (int s = 0; s < profile.n_stores; ++s) {
    StoreSpec st;
    st.id = padded("S", s + 1, 3);
    st.zone_id = 1 + static_cast<int>(u01(rng) * profile.n_zones) % profile.n_zones;
    st.region_id = 1 + static_cast<int>(u01(rng) * profile.n_regions) % profile.n_regions;
    std::poisson_distribution<int> comp(2.0);
    st.competitor_count = comp(rng);
    store_scale[s] = std::exp(0.3 * n01(rng));
    store_competition[s] = std::exp(0.05 * n01(rng));
    panel.stores.push_back(st);
  }

  // Macro series: national CPI on a monthly geometric drift, regional salaries
  // and store-area population.
  const int n_months = profile.horizon_days / 28 + 2;
  std::vector<double> cpi_month(n_months);
  double cpi = 100.0;
  for (int m = 0; m < n_months; ++m) {
    cpi_month[m] = cpi;
    cpi *= 1.0 + profile.cpi_monthly_drift + profile.cpi_noise * n01(rng);
  }
  std::vector<std::vector<double>> salary_month(profile.n_regions, std::vector<double>(n_months));
  for (int r = 0; r < profile.n_regions; ++r) {
    double sal = 900.0 + 500.0 * u01(rng);
    for (int m = 0; m < n_months; ++m) {
      salary_month[r][m] = std::round(sal * 100.0) / 100.0;
      sal *= 1.003 + 0.004 * n01(rng);
    }
  }
  std::vector<double> population(profile.n_stores);
  for (int s = 0; s < profile.n_stores; ++s) population[s] = std::round(5000.0 + 45000.0 * u01(rng));

  std::vector<int> month_of_day(profile.horizon_days);
  {
    int m = 0;
    int prev_month = month_of(profile.start);
    for (int t = 0; t < profile.horizon_days; ++t) {
      const int cur = month_of(profile.start + t);
      if (cur != prev_month) {
        ++m;
        prev_month = cur;
      }
      month_of_day[t] = std::min(m, n_months - 1);
    }
  }

  // Product lifecycle. Fractions are chosen so that, measured at the cutoff,
  // eliminated / train series ~ eliminated_ratio and new / valid series ~
  // new_ratio.
  const std::int32_t cut = profile.cutoff_offset();
  const std::int32_t horizon = profile.horizon_days;
  const double re = profile.eliminated_ratio;
  const double rn = profile.new_ratio;
  const double new_share = rn * (1.0 - re) / std::max(1e-12, 1.0 - rn * re);

  struct Lifecycle {
    std::int32_t begin;  // first row offset
    std::int32_t end;    // one past last row offset
  };
  // Exact counts, shuffled over products.
  enum class Kind : std::uint8_t { kRegular, kNew, kEliminated };
  const int n_new = static_cast<int>(std::lround(new_share * profile.n_products));
  const int n_elim = static_cast<int>(std::lround(re * (profile.n_products - n_new)));
  std::vector<Kind> kinds(static_cast<std::size_t>(profile.n_products), Kind::kRegular);
  std::fill_n(kinds.begin(), n_new, Kind::kNew);
  std::fill_n(kinds.begin() + n_new, n_elim, Kind::kEliminated);
  for (std::size_t i = kinds.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(u01(rng) * static_cast<double>(i)) % i;
    std::swap(kinds[i - 1], kinds[j]);
  }

  std::vector<Lifecycle> life(profile.n_products);
  for (int p = 0; p < profile.n_products; ++p) {
    ProductSpec prod;
    prod.id = padded("P", p + 1, 5);
    prod.group = static_cast<int>(u01(rng) * profile.n_groups) % profile.n_groups;
    prod.uon = prod.group * profile.uons_per_group +
               static_cast<int>(u01(rng) * profile.uons_per_group) % profile.uons_per_group;
    std::lognormal_distribution<double> price_dist(std::log(3.0), 0.7);
    prod.base_price = std::max(0.19, std::round(price_dist(rng) * 100.0) / 100.0);
    prod.cogs = std::round(prod.base_price * (0.45 + (0.5 - profile.margin_floor) * u01(rng)) * 100.0) / 100.0;
    prod.cogs = std::min(prod.cogs, prod.base_price * (1.0 - profile.margin_floor));
    prod.rebate = u01(rng) < 0.3 ? std::round(prod.cogs * 0.05 * u01(rng) * 100.0) / 100.0 : 0.0;

    const Kind kind = kinds[static_cast<std::size_t>(p)];
    Lifecycle lc{0, horizon};
    if (kind == Kind::kNew) {
      lc.begin = cut + static_cast<std::int32_t>(u01(rng) * (horizon - cut - 30));
      prod.intro = profile.start + lc.begin;
    } else if (kind == Kind::kEliminated) {
      lc.begin = u01(rng) < 0.5 ? 0 : static_cast<std::int32_t>(u01(rng) * (cut - 90));
      const std::int32_t min_end = lc.begin + 45;
      lc.end = min_end + static_cast<std::int32_t>(u01(rng) * (cut - 1 - min_end));
      prod.elim = profile.start + lc.end;
      prod.intro = profile.start + lc.begin;
    } else {
      lc.begin = u01(rng) < 0.6 ? 0 : static_cast<std::int32_t>(u01(rng) * (cut - 60));
      prod.intro = profile.start + lc.begin;
    }
    if (lc.begin == 0) prod.intro = profile.start - static_cast<std::int32_t>(1 + u01(rng) * 365);
    life[p] = lc;
    panel.products.push_back(prod);
  }

  // Weekly promotion campaigns per (product, zone), and step changes in the
  // regular shelf price.
  const int n_weeks = horizon / 7 + 2;
  std::vector<std::uint8_t> promo(static_cast<std::size_t>(profile.n_products) * profile.n_zones * n_weeks);
  std::vector<std::vector<double>> price_level(profile.n_products);
  for (int p = 0; p < profile.n_products; ++p) {
    std::mt19937_64 prng(mix_seed(profile.seed, 1'000'000 + p));
    for (int z = 0; z < profile.n_zones; ++z) {
      for (int w = 0; w < n_weeks; ++w) {
        promo[(static_cast<std::size_t>(p) * profile.n_zones + z) * n_weeks + w] =
            u01(prng) < profile.promo_rate ? 1 : 0;
      }
    }
    auto& lvl = price_level[p];
    lvl.resize(horizon);
    double level = 1.0;
    for (int t = 0; t < horizon; ++t) {
      if (u01(prng) < 1.0 / 90.0) level *= std::exp(0.06 * n01(prng));
      lvl[t] = level;
    }
  }

  for (int p = 0; p < profile.n_products; ++p) {
    const auto& prod = panel.products[p];
    const Lifecycle lc = life[p];
    for (int st = 0; st < profile.n_stores; ++st) {
      const std::size_t s = panel.add_series(p, st, profile.start + lc.begin, lc.end - lc.begin);
      std::mt19937_64 srng(mix_seed(profile.seed, 2'000'000 + s));
      const DemandClass cls = draw_class(profile.class_mix, srng);
      const DemandProcess proc = draw_process(cls, srng);
      const auto& store = panel.stores[st];
      const int zone = store.zone_id - 1;
      const double zone_factor = zone_price_factor[zone];
      const double comp_factor = store_competition[st] * std::exp(0.05 * n01(srng));
      const double scale = cls == DemandClass::kIntermittent || cls == DemandClass::kLumpy
                               ? std::sqrt(store_scale[st])
                               : store_scale[st];
      const double stock_level = 5.0 + 8.0 * proc.level * (proc.occurrence + 0.1);
      const double phase = 2.0 * std::numbers::pi * u01(srng);
      const std::size_t off = panel.series[s].offset;

      for (std::int32_t i = 0; i < lc.end - lc.begin; ++i) {
        const std::int32_t t = lc.begin + i;
        const Date day = profile.start + t;
        const std::size_t row = off + static_cast<std::size_t>(i);
        const double cpi_t = cpi_month[month_of_day[t]];
        const bool on_promo = promo[(static_cast<std::size_t>(p) * profile.n_zones + zone) * n_weeks + t / 7] != 0;
        const double regular = prod.base_price * price_level[p][t] * zone_factor * cpi_t / 100.0;
        const double price = std::round(regular * (on_promo ? 1.0 - profile.promo_discount : 1.0) * 100.0) / 100.0;
        const double competitor = std::round(regular * comp_factor *
                                             std::exp(profile.competitor_price_sd * n01(srng)) * 100.0) / 100.0;

        const double log_intensity =
            profile.weekly_amplitude * kWeekdayShape[weekday(day)] +
            profile.yearly_amplitude * std::sin(2.0 * std::numbers::pi * day_of_year(day) / 365.25 + phase) +
            (on_promo ? profile.promo_uplift : 0.0) -
            profile.price_elasticity * std::log(std::max(1e-6, price) / std::max(1e-6, competitor)) +
            profile.demand_noise * n01(srng);
        const double intensity = scale * std::exp(log_intensity);

        const bool stockout = u01(srng) < 0.01;
        const double stock = stockout ? 0.0 : std::round(stock_level * (0.6 + 0.8 * u01(srng)));
        double units = draw_units(proc, intensity, srng);
        if (stockout) units = 0.0;

        auto set = [&](Field f, double v) { panel.column(f)[row] = v; };
        set(Field::kSales, units);
        set(Field::kPrice, price);
        set(Field::kCogs, std::round(prod.cogs * cpi_t) / 100.0);
        set(Field::kRebate, std::round(prod.rebate * cpi_t) / 100.0);
        set(Field::kPromoFlag, on_promo ? 1.0 : 0.0);
        std::poisson_distribution<int> extra(0.4);
        set(Field::kPromoCount, on_promo ? 1.0 + extra(srng) : (u01(srng) < 0.05 ? 1.0 : 0.0));
        set(Field::kStock, stock);
        set(Field::kCompetitorPrice, competitor);
        set(Field::kCpi, std::round(cpi_t * 1000.0) / 1000.0);
        set(Field::kSalaryRegional, salary_month[store.region_id - 1][month_of_day[t]]);
        set(Field::kPopulation, population[st] + std::floor(t / 365.0) * 50.0);
      }
    }
  }

  if (profile.missing_rate > 0.0) {
    auto injected = inject_missingness(panel, profile.missing_rate, profile.burst,
                                       mix_seed(profile.seed, 3), profile.missable);
    return std::move(injected.first);
  }
  return panel;
}

std::pair<SalesPanel, ImputationMask> inject_missingness(const SalesPanel& panel, double rate,
                                                         const BurstLength& burst, std::uint64_t seed,
                                                         const std::vector<Field>& fields) {
  check_fraction(rate, "missing rate");
  SalesPanel out = panel;
  if (rate > 0.0) {
    const double burst_mean = burst.expected();
    // Alternating renewal process: observed runs are geometric with the mean
    // that makes the long-run missing share equal `rate`.
    const double observed_mean = rate >= 1.0 ? 0.0 : burst_mean * (1.0 - rate) / rate;
    for (std::size_t s = 0; s < out.series_count(); ++s) {
      std::mt19937_64 rng(mix_seed(seed, s));
      std::uniform_real_distribution<double> u01(0.0, 1.0);
      const auto& sp = out.series[s];
      const auto len = static_cast<std::size_t>(sp.length);
      std::vector<std::uint8_t> missing(len, 0);
      if (rate >= 1.0) {
        std::fill(missing.begin(), missing.end(), 1);
      } else {
        std::size_t i = 0;
        bool in_burst = u01(rng) < rate;
        bool first_run = true;
        while (i < len) {
          std::size_t run = 0;
          if (in_burst) {
            int b = burst.sample(rng);
            if (first_run) {
              // Stationary start: the series opens part-way through a burst.
              std::uniform_int_distribution<int> residual(1, b);
              b = residual(rng);
            }
            run = static_cast<std::size_t>(b);
            for (std::size_t k = i; k < std::min(len, i + run); ++k) missing[k] = 1;
          } else {
            std::geometric_distribution<int> g(1.0 / std::max(1.0, observed_mean));
            run = observed_mean < 1.0 ? 1 : static_cast<std::size_t>(1 + g(rng));
          }
          i += run;
          in_burst = !in_burst;
          first_run = false;
        }
      }
      for (Field f : fields) {
        auto vals = out.values(f, s);
        for (std::size_t k = 0; k < len; ++k) {
          if (missing[k]) vals[k] = std::nan("");
        }
      }
    }
  }
  ImputationMask mask = ImputationMask::from_panel(out);
  return {std::move(out), std::move(mask)};
}

PanelStats summarize_panel(const SalesPanel& panel, Date cutoff) {
  if (panel.series_count() == 0) fail(ErrorCode::kEmpty, "summarize_panel: panel is empty");
  PanelStats st;
  st.series_count = panel.series_count();
  std::size_t train_missing = 0;
  std::size_t valid_missing = 0;
  double train_cov = 0.0;
  double valid_cov = 0.0;
  std::size_t train_life_series = 0;
  std::size_t valid_life_series = 0;

  for (std::size_t s = 0; s < panel.series_count(); ++s) {
    const auto& sp = panel.series[s];
    const auto sales = panel.values(Field::kSales, s);
    std::size_t tr_rows = 0, tr_obs = 0, va_rows = 0, va_obs = 0;
    for (std::int32_t i = 0; i < sp.length; ++i) {
      const bool obs = !std::isnan(sales[i]);
      if (sp.first + i < cutoff) {
        ++tr_rows;
        tr_obs += obs;
      } else {
        ++va_rows;
        va_obs += obs;
      }
    }
    st.train.rows += tr_rows;
    st.valid.rows += va_rows;
    train_missing += tr_rows - tr_obs;
    valid_missing += va_rows - va_obs;
    if (tr_rows > 0) {
      train_cov += static_cast<double>(tr_obs) / static_cast<double>(tr_rows);
      ++train_life_series;
    }
    if (va_rows > 0) {
      valid_cov += static_cast<double>(va_obs) / static_cast<double>(va_rows);
      ++valid_life_series;
    }
    const bool in_train = tr_obs > 0;
    const bool in_valid = va_obs > 0;
    st.train.series_count += in_train;
    st.valid.series_count += in_valid;
    st.eliminated_count += in_train && !in_valid;
    st.new_count += in_valid && !in_train;
  }
  auto ratio = [](double num, std::size_t den) { return den == 0 ? 0.0 : num / static_cast<double>(den); };
  st.train.avg_missingness = ratio(static_cast<double>(train_missing), st.train.rows);
  st.valid.avg_missingness = ratio(static_cast<double>(valid_missing), st.valid.rows);
  st.train.avg_coverage_ratio = ratio(train_cov, train_life_series);
  st.valid.avg_coverage_ratio = ratio(valid_cov, valid_life_series);
  st.eliminated_ratio = ratio(static_cast<double>(st.eliminated_count), st.train.series_count);
  st.new_ratio = ratio(static_cast<double>(st.new_count), st.valid.series_count);
  st.class_distribution = classify_panel(panel);
  return st;
}

}  // namespace shelfcast
