#include "shelfcast/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

#include "shelfcast/csv.hpp"
#include "shelfcast/error.hpp"

namespace shelfcast {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  fail(ErrorCode::kParse, "config key '" + key + "': " + what + " (got '" + value + "')");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, v, "expected a number");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, v, "expected an integer");
  return out;
}

int to_int32(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x < -2147483647LL || x > 2147483647LL) bad_value(key, v, "integer out of range");
  return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) bad_value(key, v, "expected a non-negative integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "expected true or false");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split_list(v)) out.push_back(to_int32(key, item));
  return out;
}

std::string str(double v) { return format_number(v); }
std::string str(bool v) { return v ? "true" : "false"; }
std::string str(int v) { return std::to_string(v); }

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

struct Entry {
  const char* section;
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

#define SC_DOUBLE(sec, name, member)                                             \
  Entry {                                                                        \
    sec, name, [](const ExperimentConfig& c) { return str(c.member); },          \
        [](ExperimentConfig& c, const std::string& v) { c.member = to_double(name, v); } \
  }
#define SC_INT(sec, name, member)                                                \
  Entry {                                                                        \
    sec, name, [](const ExperimentConfig& c) { return str(c.member); },          \
        [](ExperimentConfig& c, const std::string& v) { c.member = to_int32(name, v); } \
  }
#define SC_BOOL(sec, name, member)                                               \
  Entry {                                                                        \
    sec, name, [](const ExperimentConfig& c) { return str(c.member); },          \
        [](ExperimentConfig& c, const std::string& v) { c.member = to_bool(name, v); } \
  }

std::string space_to_string(const TuneSpace& s) {
  std::string out;
  for (std::size_t i = 0; i < s.params.size(); ++i) {
    const auto& p = s.params[i];
    out += (i ? "," : "") + p.name + ":" + str(p.lo) + ":" + str(p.hi) + (p.log_scale ? ":log" : "");
  }
  return out;
}

TuneSpace space_from_string(const std::string& v) {
  TuneSpace s;
  for (const auto& item : split_list(v)) {
    std::vector<std::string> parts;
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(trim(part));
    if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log")) {
      bad_value("space", item, "expected name:lo:hi[:log]");
    }
    GbdtConfig probe;
    TuneSpace::apply(probe, parts[0], 1.0);  // rejects unknown names
    ParamRange p;
    p.name = parts[0];
    p.lo = to_double("space", parts[1]);
    p.hi = to_double("space", parts[2]);
    p.integer = TuneSpace::is_integer(p.name);
    p.log_scale = parts.size() == 4;
    s.params.push_back(p);
  }
  return s;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"experiment", "seed", [](const ExperimentConfig& c) { return std::to_string(c.seed); },
       [](ExperimentConfig& c, const std::string& v) { c.seed = to_u64("seed", v); }},
      {"experiment", "out_dir", [](const ExperimentConfig& c) { return c.out_dir; },
       [](ExperimentConfig& c, const std::string& v) { c.out_dir = v; }},
      {"experiment", "cases", [](const ExperimentConfig& c) { return c.cases; },
       [](ExperimentConfig& c, const std::string& v) { c.cases = parse_case_list(v); }},
      {"experiment", "models",
       [](const ExperimentConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.models.size(); ++i) out += (i ? "," : "") + c.models[i];
         return out;
       },
       [](ExperimentConfig& c, const std::string& v) { c.models = split_list(v); }},
      SC_INT("experiment", "workers", workers),
      SC_BOOL("experiment", "plot", plot),
      SC_DOUBLE("experiment", "encoder_alpha", encoder_alpha),
      SC_INT("experiment", "bucket_days", eval.bucket_days),
      SC_BOOL("experiment", "pooled_scaled_errors", eval.pooled_scaled_errors),

      {"panel", "profile", [](const ExperimentConfig& c) { return c.panel.profile; },
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "default") {
           c.panel.generator = GeneratorProfile::defaults();
         } else if (v == "signal") {
           c.panel.generator = GeneratorProfile::signal_bearing();
         } else {
           bad_value("profile", v, "expected default or signal");
         }
         c.panel.profile = v;
       }},
      {"panel", "path", [](const ExperimentConfig& c) { return c.panel.path; },
       [](ExperimentConfig& c, const std::string& v) { c.panel.path = v; }},
      {"panel", "seed", [](const ExperimentConfig& c) { return c.panel.seed ? std::to_string(*c.panel.seed) : ""; },
       [](ExperimentConfig& c, const std::string& v) {
         if (v.empty()) {
           c.panel.seed.reset();
         } else {
           c.panel.seed = to_u64("seed", v);
         }
       }},
      SC_INT("panel", "n_stores", panel.generator.n_stores),
      SC_INT("panel", "n_groups", panel.generator.n_groups),
      SC_INT("panel", "n_products", panel.generator.n_products),
      SC_INT("panel", "uons_per_group", panel.generator.uons_per_group),
      SC_INT("panel", "n_zones", panel.generator.n_zones),
      SC_INT("panel", "n_regions", panel.generator.n_regions),
      SC_INT("panel", "horizon_days", panel.generator.horizon_days),
      {"panel", "start_date", [](const ExperimentConfig& c) { return format_date(c.panel.generator.start); },
       [](ExperimentConfig& c, const std::string& v) { c.panel.generator.start = parse_date(v); }},
      {"panel", "class_mix",
       [](const ExperimentConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.panel.generator.class_mix.size(); ++i) {
           out += (i ? "," : "") + str(c.panel.generator.class_mix[i]);
         }
         return out;
       },
       [](ExperimentConfig& c, const std::string& v) {
         const auto items = split_list(v);
         if (items.size() != c.panel.generator.class_mix.size()) {
           bad_value("class_mix", v, "expected five fractions (smooth,intermittent,erratic,lumpy,no-demand)");
         }
         for (std::size_t i = 0; i < items.size(); ++i) c.panel.generator.class_mix[i] = to_double("class_mix", items[i]);
       }},
      SC_DOUBLE("panel", "missing_rate", panel.generator.missing_rate),
      {"panel", "burst_mean", [](const ExperimentConfig& c) { return str(c.panel.generator.burst.mean); },
       [](ExperimentConfig& c, const std::string& v) {
         c.panel.generator.burst = BurstLength::geometric(to_double("burst_mean", v));
       }},
      SC_DOUBLE("panel", "eliminated_ratio", panel.generator.eliminated_ratio),
      SC_DOUBLE("panel", "new_ratio", panel.generator.new_ratio),
      SC_DOUBLE("panel", "promo_rate", panel.generator.promo_rate),
      SC_DOUBLE("panel", "promo_uplift", panel.generator.promo_uplift),
      SC_DOUBLE("panel", "price_elasticity", panel.generator.price_elasticity),
      SC_DOUBLE("panel", "weekly_amplitude", panel.generator.weekly_amplitude),
      SC_DOUBLE("panel", "demand_noise", panel.generator.demand_noise),

      {"split", "cutoff", [](const ExperimentConfig& c) { return c.cutoff ? format_date(*c.cutoff) : ""; },
       [](ExperimentConfig& c, const std::string& v) {
         if (v.empty()) {
           c.cutoff.reset();
         } else {
           c.cutoff = parse_date(v);
         }
       }},
      SC_DOUBLE("split", "cutoff_fraction", cutoff_fraction),
      SC_INT("split", "min_train_points", min_train_points),
      SC_BOOL("split", "require_both_periods", require_both_periods),

      {"features", "lags", [](const ExperimentConfig& c) { return join_ints(c.features.lags); },
       [](ExperimentConfig& c, const std::string& v) { c.features.lags = to_int_list("lags", v); }},
      {"features", "windows", [](const ExperimentConfig& c) { return join_ints(c.features.windows); },
       [](ExperimentConfig& c, const std::string& v) { c.features.windows = to_int_list("windows", v); }},
      SC_BOOL("features", "lag_promotions", features.lag_promotions),
      SC_INT("features", "seasonal_period", seasonal_period),
      SC_INT("features", "seasonal_max_periods", seasonal_max_periods),

      SC_BOOL("boruta", "enabled", boruta.enabled),
      SC_BOOL("boruta", "per_group", boruta.per_group),
      SC_BOOL("boruta", "prefilter", boruta.prefilter),
      SC_DOUBLE("boruta", "sample_fraction", boruta.sample_fraction),
      SC_INT("boruta", "max_iters", boruta.cfg.max_iters),
      SC_DOUBLE("boruta", "p_value", boruta.cfg.p_value),
      {"boruta", "importance",
       [](const ExperimentConfig& c) {
         return std::string(c.boruta.cfg.importance == ImportanceKind::kGain ? "gain" : "split");
       },
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "gain") {
           c.boruta.cfg.importance = ImportanceKind::kGain;
         } else if (v == "split") {
           c.boruta.cfg.importance = ImportanceKind::kSplitCount;
         } else {
           bad_value("importance", v, "expected gain or split");
         }
       }},
      SC_DOUBLE("boruta", "shadow_percentile", boruta.cfg.shadow_percentile),
      SC_INT("boruta", "rounds", boruta.rounds),
      SC_INT("boruta", "leaves", boruta.leaves),
      SC_INT("boruta", "n_bins", boruta.n_bins),
      SC_DOUBLE("boruta", "learning_rate", boruta.learning_rate),
      SC_DOUBLE("boruta", "min_child_weight", boruta.min_child_weight),
      {"boruta", "retain",
       [](const ExperimentConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.boruta.retain.size(); ++i) out += (i ? "," : "") + c.boruta.retain[i];
         return out;
       },
       [](ExperimentConfig& c, const std::string& v) { c.boruta.retain = split_list(v); }},

      SC_INT("gbdt", "n_rounds", gbdt.n_rounds),
      SC_DOUBLE("gbdt", "learning_rate", gbdt.learning_rate),
      SC_INT("gbdt", "max_depth", gbdt.max_depth),
      SC_INT("gbdt", "max_leaves", gbdt.max_leaves),
      SC_DOUBLE("gbdt", "min_child_weight", gbdt.min_child_weight),
      SC_DOUBLE("gbdt", "lambda_l2", gbdt.lambda_l2),
      SC_DOUBLE("gbdt", "min_split_gain", gbdt.min_split_gain),
      SC_INT("gbdt", "n_bins", gbdt.n_bins),
      SC_DOUBLE("gbdt", "subsample", gbdt.subsample),
      SC_DOUBLE("gbdt", "colsample", gbdt.colsample),
      {"gbdt", "loss", [](const ExperimentConfig& c) { return std::string(c.gbdt.loss == Loss::kSquared ? "squared" : "quantile"); },
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "squared") {
           c.gbdt.loss = Loss::kSquared;
         } else if (v == "quantile") {
           c.gbdt.loss = Loss::kQuantile;
         } else {
           bad_value("loss", v, "expected squared or quantile");
         }
       }},
      SC_DOUBLE("gbdt", "alpha", gbdt.alpha),
      {"gbdt", "growth", [](const ExperimentConfig& c) { return std::string(c.gbdt.growth == Growth::kLeafWise ? "leaf" : "level"); },
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "leaf") {
           c.gbdt.growth = Growth::kLeafWise;
         } else if (v == "level") {
           c.gbdt.growth = Growth::kLevelWise;
         } else {
           bad_value("growth", v, "expected leaf or level");
         }
       }},

      SC_INT("tune", "budget", tune.budget),
      SC_DOUBLE("tune", "sample_fraction", tune.sample_fraction),
      {"tune", "space", [](const ExperimentConfig& c) { return space_to_string(c.tune.space); },
       [](ExperimentConfig& c, const std::string& v) { c.tune.space = space_from_string(v); }},
  };
  return table;
}

#undef SC_DOUBLE
#undef SC_INT
#undef SC_BOOL

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string parse_case_list(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (ch == ',' || ch == ' ') continue;
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (c < 'A' || c > 'D') fail(ErrorCode::kParse, std::string("unknown case '") + ch + "' (expected A-D)");
    if (out.find(c) != std::string::npos) fail(ErrorCode::kParse, std::string("case '") + c + "' listed twice");
    out += c;
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ExperimentConfig::set(const std::string& section, const std::string& key, const std::string& value) {
  for (const auto& e : entries()) {
    if (section == e.section && key == e.key) {
      e.set(*this, value);
      return;
    }
  }
  fail(ErrorCode::kParse, "unknown config key '" + key + "' in section [" + section + "]");
}

std::string ExperimentConfig::get(const std::string& section, const std::string& key) const {
  for (const auto& e : entries()) {
    if (section == e.section && key == e.key) return e.get(*this);
  }
  fail(ErrorCode::kParse, "unknown config key '" + key + "' in section [" + section + "]");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorCode::kParse, "config line " + std::to_string(line_no) + ": bad section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      const bool known = std::any_of(entries().begin(), entries().end(),
                                     [&](const Entry& e) { return section == e.section; });
      if (!known) fail(ErrorCode::kParse, "config line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorCode::kParse, "config line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty()) fail(ErrorCode::kParse, "config line " + std::to_string(line_no) + ": key outside a section");
    try {
      cfg.set(section, trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.code(), "config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) { return parse(read_file(path)); }

std::string ExperimentConfig::canonical() const {
  std::string out;
  std::string section;
  for (const auto& e : entries()) {
    if (section != e.section) {
      section = e.section;
      out += "[" + section + "]\n";
    }
    out += std::string(e.key) + " = " + e.get(*this) + "\n";
  }
  return out;
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void ExperimentConfig::validate() const {
  require(!cases.empty(), "config: at least one case is required");
  require(!models.empty(), "config: at least one model is required");
  require(workers >= 1, "config: workers must be >= 1");
  require(encoder_alpha > 0.0, "config: encoder_alpha must be > 0");
  require(eval.bucket_days >= 1, "config: bucket_days must be >= 1");
  require(cutoff_fraction > 0.0 && cutoff_fraction < 1.0, "config: cutoff_fraction must be in (0,1)");
  require(min_train_points >= 0, "config: min_train_points must be >= 0");
  require(seasonal_period >= 1 && seasonal_max_periods >= 0, "config: bad seasonal imputer settings");
  require(boruta.sample_fraction > 0.0 && boruta.sample_fraction <= 1.0, "config: boruta.sample_fraction must be in (0,1]");
  require(boruta.rounds >= 1 && boruta.leaves >= 2, "config: boruta background model needs rounds >= 1, leaves >= 2");
  require(boruta.min_child_weight >= 0.0, "config: boruta.min_child_weight must be >= 0");
  require(tune.budget >= 0, "config: tune.budget must be >= 0");
  require(tune.sample_fraction > 0.0 && tune.sample_fraction <= 1.0, "config: tune.sample_fraction must be in (0,1]");
  boruta.cfg.validate();
  gbdt.validate();
  if (panel.path.empty()) panel.generator.validate();
}

}  // namespace shelfcast
