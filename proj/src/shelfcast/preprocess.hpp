#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shelfcast/panel.hpp"

namespace shelfcast {

// A (series, field) pair that had no observed value to impute from; such
// cells stay missing.
struct UnfilledField {
  std::size_t series = 0;
  Field field = Field::kSales;
};

struct ImputeResult {
  SalesPanel panel;
  std::vector<UnfilledField> unfilled;
};

// Every field except sales: the exogenous inputs that get basic fills before
// modelling.
std::vector<Field> exogenous_fields();

// Numeric fields: forward fill then backward fill within each series.
// Categorical fields: per-series mode (smallest value on ties). Only
// mask-true cells are used as sources and mask-true cells are never changed,
// which makes the operation idempotent.
ImputeResult impute_basic(const SalesPanel& panel, const ImputationMask& mask,
                          std::span<const Field> fields);

// Seasonal stand-in for a learned imputer. A missing cell takes the nearest
// observed value on the same phase of `period` within `max_periods` periods
// (earlier wins ties); otherwise linear interpolation between the
// neighbouring observed values; otherwise the basic fill.
ImputeResult impute_seasonal(const SalesPanel& panel, const ImputationMask& mask,
                             std::span<const Field> fields, int period = 7, int max_periods = 4);

// real = nominal * base_cpi / cpi for price, competitor_price, cogs and rebate.
SalesPanel deflate_prices(const SalesPanel& panel, double base_cpi = 100.0);
// Inverse of deflate_prices.
SalesPanel inflate_prices(const SalesPanel& panel, double base_cpi = 100.0);

struct RelativePrices {
  // (price - competitor) / competitor
  std::vector<double> out_store;
  // (price - mean price of the same store, UoN and day) / that mean
  std::vector<double> in_store;
  std::size_t zero_denominators = 0;
};

// Expects real (deflated) prices. Aligned with the panel rows.
RelativePrices relative_prices(const SalesPanel& panel);

}  // namespace shelfcast
