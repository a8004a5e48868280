#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shelfcast/date.hpp"

namespace shelfcast {

// Per-row numeric fields of a panel. Missing values are NaN.
enum class Field : int {
  kSales = 0,
  kPrice,
  kCogs,
  kRebate,
  kPromoFlag,
  kPromoCount,
  kStock,
  kCompetitorPrice,
  kCpi,
  kSalaryRegional,
  kPopulation,
};
inline constexpr std::size_t kFieldCount = 11;
inline constexpr std::array<Field, kFieldCount> kAllFields = {
    Field::kSales,      Field::kPrice, Field::kCogs,           Field::kRebate,
    Field::kPromoFlag,  Field::kPromoCount, Field::kStock,     Field::kCompetitorPrice,
    Field::kCpi,        Field::kSalaryRegional, Field::kPopulation};

const char* field_name(Field f);
Field field_from_name(std::string_view name);
// Fields imputed with the per-series mode rather than ffill/bfill.
bool is_categorical(Field f);

struct StoreSpec {
  std::string id;
  int zone_id = 0;
  int competitor_count = 0;
  int region_id = 0;
};

struct ProductSpec {
  std::string id;
  int group = 0;  // index into SalesPanel::groups
  int uon = 0;    // index into SalesPanel::uons
  double base_price = 0.0;
  double cogs = 0.0;
  double rebate = 0.0;
  Date intro;
  std::optional<Date> elim;
};

// One product-store combination. Rows are daily and contiguous from `first`
// for `length` days, stored at [offset, offset + length) in every column.
struct SeriesSpec {
  int product = 0;
  int store = 0;
  Date first;
  std::int32_t length = 0;
  std::size_t offset = 0;

  Date last() const { return first + (length - 1); }
};

// Long-format daily panel, stored series-major and column-wise.
class SalesPanel {
 public:
  std::vector<std::string> groups;
  std::vector<std::string> uons;
  std::vector<int> uon_group;  // uon index -> group index
  std::vector<StoreSpec> stores;
  std::vector<ProductSpec> products;
  std::vector<SeriesSpec> series;
  std::array<std::vector<double>, kFieldCount> columns;

  std::size_t row_count() const { return columns[0].size(); }
  std::size_t series_count() const { return series.size(); }

  std::vector<double>& column(Field f) { return columns[static_cast<int>(f)]; }
  const std::vector<double>& column(Field f) const { return columns[static_cast<int>(f)]; }

  std::span<double> values(Field f, std::size_t s);
  std::span<const double> values(Field f, std::size_t s) const;

  std::string series_key(std::size_t s) const;
  int group_of(std::size_t s) const { return products[series[s].product].group; }
  int uon_of(std::size_t s) const { return products[series[s].product].uon; }
  int zone_of(std::size_t s) const { return stores[series[s].store].zone_id; }

  Date first_date() const;
  Date last_date() const;

  // Appends a series of `length` rows (all NaN) and returns its index.
  std::size_t add_series(int product, int store, Date first, std::int32_t length);
};

// Per-cell observation flags: true = originally observed. Same shape as the
// panel it was taken from.
class ImputationMask {
 public:
  ImputationMask() = default;
  static ImputationMask from_panel(const SalesPanel& panel);

  bool observed(Field f, std::size_t row) const { return cells_[static_cast<int>(f)][row] != 0; }
  const std::vector<std::uint8_t>& field(Field f) const { return cells_[static_cast<int>(f)]; }
  std::vector<std::uint8_t>& field(Field f) { return cells_[static_cast<int>(f)]; }
  std::size_t row_count() const { return cells_[0].size(); }

 private:
  std::array<std::vector<std::uint8_t>, kFieldCount> cells_;
};

// Fixed CSV header, one row per panel row, ISO dates, empty field = missing.
inline constexpr const char* kPanelCsvHeader =
    "product_id,store_id,date,sales,price,cogs,rebate,promo_flag,promo_count,stock,"
    "competitor_price,cpi,salary_regional,population,group_id,uon_id,zone_id";

std::string panel_to_csv(const SalesPanel& panel);
void write_panel_csv(const SalesPanel& panel, const std::string& path);
SalesPanel panel_from_csv(const std::string& text);
SalesPanel read_panel_csv(const std::string& path);

}  // namespace shelfcast
