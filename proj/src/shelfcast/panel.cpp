#include "shelfcast/panel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "shelfcast/csv.hpp"
#include "shelfcast/error.hpp"

namespace shelfcast {

namespace {

constexpr std::array<const char*, kFieldCount> kFieldNames = {
    "sales", "price", "cogs", "rebate", "promo_flag", "promo_count", "stock",
    "competitor_price", "cpi", "salary_regional", "population"};

}  // namespace

const char* field_name(Field f) { return kFieldNames[static_cast<int>(f)]; }

Field field_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFieldCount; ++i) {
    if (name == kFieldNames[i]) return static_cast<Field>(i);
  }
  fail(ErrorCode::kInvalidArgument, "unknown panel field '" + std::string(name) + "'");
}

bool is_categorical(Field f) { return f == Field::kPromoFlag; }

std::span<double> SalesPanel::values(Field f, std::size_t s) {
  const auto& sp = series[s];
  return std::span<double>(column(f)).subspan(sp.offset, static_cast<std::size_t>(sp.length));
}

std::span<const double> SalesPanel::values(Field f, std::size_t s) const {
  const auto& sp = series[s];
  return std::span<const double>(column(f)).subspan(sp.offset, static_cast<std::size_t>(sp.length));
}

std::string SalesPanel::series_key(std::size_t s) const {
  return products[series[s].product].id + "@" + stores[series[s].store].id;
}

Date SalesPanel::first_date() const {
  require(!series.empty(), "panel is empty");
  Date d = series.front().first;
  for (const auto& s : series) d = std::min(d, s.first);
  return d;
}

Date SalesPanel::last_date() const {
  require(!series.empty(), "panel is empty");
  Date d = series.front().last();
  for (const auto& s : series) d = std::max(d, s.last());
  return d;
}

std::size_t SalesPanel::add_series(int product, int store, Date first, std::int32_t length) {
  require(length >= 1, "series length must be >= 1");
  SeriesSpec sp{product, store, first, length, row_count()};
  series.push_back(sp);
  for (auto& col : columns) col.resize(col.size() + static_cast<std::size_t>(length), std::nan(""));
  return series.size() - 1;
}

ImputationMask ImputationMask::from_panel(const SalesPanel& panel) {
  ImputationMask mask;
  for (Field f : kAllFields) {
    const auto& col = panel.column(f);
    auto& cells = mask.field(f);
    cells.resize(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) cells[i] = std::isnan(col[i]) ? 0 : 1;
  }
  return mask;
}

std::string panel_to_csv(const SalesPanel& panel) {
  std::string out;
  out.reserve(panel.row_count() * 96 + 256);
  out += kPanelCsvHeader;
  out += '\n';
  static constexpr std::array<Field, 11> kOrder = {
      Field::kSales, Field::kPrice,           Field::kCogs, Field::kRebate,
      Field::kPromoFlag, Field::kPromoCount,  Field::kStock, Field::kCompetitorPrice,
      Field::kCpi,   Field::kSalaryRegional, Field::kPopulation};
  for (std::size_t s = 0; s < panel.series_count(); ++s) {
    const auto& sp = panel.series[s];
    const auto& prod = panel.products[sp.product];
    const auto& store = panel.stores[sp.store];
    const std::string tail = "," + panel.groups[prod.group] + "," + panel.uons[prod.uon] + "," +
                             std::to_string(store.zone_id) + "\n";
    for (std::int32_t i = 0; i < sp.length; ++i) {
      const std::size_t row = sp.offset + static_cast<std::size_t>(i);
      out += prod.id;
      out += ',';
      out += store.id;
      out += ',';
      out += format_date(sp.first + i);
      for (Field f : kOrder) {
        out += ',';
        out += format_number(panel.column(f)[row]);
      }
      out += tail;
    }
  }
  return out;
}

void write_panel_csv(const SalesPanel& panel, const std::string& path) {
  write_file_atomic(path, panel_to_csv(panel));
}

SalesPanel panel_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kParse, "panel CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kPanelCsvHeader) fail(ErrorCode::kParse, "unexpected panel CSV header: " + line);

  struct Cell {
    Date date;
    std::array<double, kFieldCount> values;
  };
  SalesPanel panel;
  std::unordered_map<std::string, int> product_index, store_index, group_index, uon_index;
  std::map<std::pair<int, int>, std::vector<Cell>> by_series;

  auto intern = [](std::unordered_map<std::string, int>& idx, std::vector<std::string>& names,
                   std::string_view key) {
    auto [it, inserted] = idx.try_emplace(std::string(key), static_cast<int>(names.size()));
    if (inserted) names.emplace_back(key);
    return it->second;
  };
  std::vector<std::string> product_names, store_names;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != 17) {
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected 17 fields, got " +
                                  std::to_string(f.size()));
    }
    const int p = intern(product_index, product_names, f[0]);
    const int st = intern(store_index, store_names, f[1]);
    const int g = intern(group_index, panel.groups, f[14]);
    const int u = intern(uon_index, panel.uons, f[15]);
    const int zone = static_cast<int>(parse_integer(f[16]));
    if (static_cast<std::size_t>(p) == panel.products.size()) {
      ProductSpec prod;
      prod.id = std::string(f[0]);
      prod.group = g;
      prod.uon = u;
      panel.products.push_back(prod);
    } else if (panel.products[p].group != g || panel.products[p].uon != u) {
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": product " + std::string(f[0]) +
                                  " changes group/uon");
    }
    if (static_cast<std::size_t>(u) == panel.uon_group.size()) {
      panel.uon_group.push_back(g);
    } else if (panel.uon_group[u] != g) {
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": uon " + std::string(f[15]) +
                                  " belongs to two groups");
    }
    if (static_cast<std::size_t>(st) == panel.stores.size()) {
      panel.stores.push_back(StoreSpec{std::string(f[1]), zone, 0, 0});
    }
    Cell cell;
    cell.date = parse_date(f[2]);
    for (std::size_t k = 0; k < kFieldCount; ++k) cell.values[k] = parse_number(f[3 + k]);
    by_series[{p, st}].push_back(cell);
  }
  if (by_series.empty()) fail(ErrorCode::kEmpty, "panel CSV has no rows");

  for (auto& [key, cells] : by_series) {
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < cells.size(); ++i) {
      if (cells[i].date == cells[i - 1].date) {
        fail(ErrorCode::kParse, "duplicate date " + format_date(cells[i].date) + " for series " +
                                    product_names[key.first] + "@" + store_names[key.second]);
      }
    }
    const Date first = cells.front().date;
    const std::int32_t length = cells.back().date - first + 1;
    const std::size_t s = panel.add_series(key.first, key.second, first, length);
    const std::size_t offset = panel.series[s].offset;
    // Absent days inside the span stay NaN (missing).
    for (const auto& c : cells) {
      const std::size_t row = offset + static_cast<std::size_t>(c.date - first);
      for (std::size_t k = 0; k < kFieldCount; ++k) panel.columns[k][row] = c.values[k];
    }
  }
  // Product lifecycle: earliest/latest row over all stores; base price and
  // costs are the first observed values.
  std::vector<bool> seen(panel.products.size(), false);
  for (std::size_t s = 0; s < panel.series_count(); ++s) {
    const auto& sp = panel.series[s];
    auto& prod = panel.products[sp.product];
    if (!seen[sp.product]) {
      prod.intro = sp.first;
      prod.elim = sp.last() + 1;
      seen[sp.product] = true;
    } else {
      prod.intro = std::min(prod.intro, sp.first);
      prod.elim = std::max(*prod.elim, sp.last() + 1);
    }
    auto first_finite = [&](Field f) {
      for (double v : panel.values(f, s)) {
        if (!std::isnan(v)) return v;
      }
      return std::nan("");
    };
    if (prod.base_price == 0.0) {
      const double p = first_finite(Field::kPrice);
      if (!std::isnan(p)) prod.base_price = p;
      const double c = first_finite(Field::kCogs);
      if (!std::isnan(c)) prod.cogs = c;
      const double r = first_finite(Field::kRebate);
      if (!std::isnan(r)) prod.rebate = r;
    }
  }
  return panel;
}

SalesPanel read_panel_csv(const std::string& path) { return panel_from_csv(read_file(path)); }

}  // namespace shelfcast
