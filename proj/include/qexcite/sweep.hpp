// Copyright 2026 The qexcite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "qexcite/config.hpp"
#include "qexcite/dynamics.hpp"
#include "qexcite/envelope.hpp"
#include "qexcite/error.hpp"
#include "qexcite/observables.hpp"

namespace qexcite {

enum class Scale { linear, log };

struct SweepAxis {
  std::string name;
  Scale scale = Scale::linear;
  double min = 0.0;
  double max = 0.0;
  int count = 2;

  std::vector<double> values() const {
    return scale == Scale::log ? log_grid(min, max, count) : linear_grid(min, max, count);
  }
};

struct SweepPlan {
  SystemConfig base;
  std::vector<SweepAxis> axes;  // one or two; the first varies slowest
  int jobs = 1;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.count);
    return n;
  }
};

/// Parsed configuration file: always a base config, a plan when sweep.* keys are present.
struct ConfigFile {
  SystemConfig config;
  std::optional<SweepPlan> plan;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto k = s.find(sep);
    out.push_back(trim(s.substr(0, k)));
    if (k == std::string_view::npos) return out;
    s.remove_prefix(k + 1);
  }
}

inline std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<int> to_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Real-valued SystemConfig fields addressable by name (the sweepable set).
inline double* real_field(SystemConfig& c, std::string_view name) {
  static const std::map<std::string_view, double SystemConfig::*> fields = {
      {"gamma_sigma", &SystemConfig::gamma_sigma},
      {"gamma_a", &SystemConfig::gamma_a},
      {"P_sigma", &SystemConfig::P_sigma},
      {"Omega_sigma", &SystemConfig::Omega_sigma},
      {"epsilon_1", &SystemConfig::epsilon_1},
      {"delta_sigma", &SystemConfig::delta_sigma},
      {"delta_a", &SystemConfig::delta_a},
      {"gamma_sigma_star", &SystemConfig::gamma_sigma_star},
      {"gamma_phi", &SystemConfig::gamma_phi},
      {"N_boost", &SystemConfig::N_boost},
      {"tail_tol", &SystemConfig::tail_tol},
  };
  const auto it = fields.find(name);
  return it == fields.end() ? nullptr : &(c.*(it->second));
}

/// Range rule for a single key, or an empty string when the value is fine.
inline std::string range_problem(std::string_view key, double v) {
  if (key == "epsilon_1") return v >= 0.0 && v <= 1.0 ? "" : "must lie in [0, 1]";
  if (key == "N_boost") return v >= 1.0 ? "" : "must be >= 1";
  if (key == "tail_tol") return v > 0.0 && v < 1e-2 ? "" : "must lie in (0, 1e-2)";
  if (key == "delta_sigma" || key == "delta_a") return "";
  return v >= 0.0 ? "" : "must be >= 0";
}

/// Status column text for a failed point; commas would break the CSV.
inline std::string error_status(std::string msg) {
  std::replace(msg.begin(), msg.end(), ',', ';');
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  return "error: " + msg;
}

}  // namespace detail

/// Sets a named real parameter; throws InvalidConfig for unknown names.
inline void set_parameter(SystemConfig& c, std::string_view name, double value) {
  double* field = detail::real_field(c, name);
  if (field == nullptr) throw InvalidConfig("unknown parameter '" + std::string(name) + "'");
  *field = value;
}

/// Parses the key=value format. sweep.* values may hold two comma-separated
/// entries for a 2-D sweep.
inline ConfigFile parse_config(std::string_view text) {
  ConfigFile out;
  std::map<std::string, std::pair<int, std::string>> sweep;  // key -> (line, value)
  std::map<std::string, int> seen;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected key=value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");
    if (const auto [it, fresh] = seen.emplace(key, line_no); !fresh)
      throw ConfigError(line_no, "duplicate key '" + key + "' (first set on line " +
                                     std::to_string(it->second) + ")");

    if (key == "scheme") {
      const auto s = parse_scheme(value);
      if (!s) throw ConfigError(line_no, "scheme: unknown value '" + std::string(value) + "'");
      out.config.scheme = *s;
    } else if (key == "drive") {
      const auto d = parse_drive(value);
      if (!d) throw ConfigError(line_no, "drive: unknown value '" + std::string(value) + "'");
      out.config.drive = *d;
    } else if (key == "n_max") {
      const auto v = detail::to_int(value);
      if (!v) throw ConfigError(line_no, "n_max: not an integer: '" + std::string(value) + "'");
      if (*v < 0) throw ConfigError(line_no, "n_max: must be >= 0");
      out.config.n_max = *v;
    } else if (key.starts_with("sweep.")) {
      static const std::vector<std::string> keys = {"sweep.param", "sweep.scale", "sweep.min",
                                                    "sweep.max", "sweep.count"};
      if (std::find(keys.begin(), keys.end(), key) == keys.end())
        throw ConfigError(line_no, "unknown key '" + key + "'");
      sweep[key] = {line_no, std::string(value)};
    } else if (double* field = detail::real_field(out.config, key)) {
      const auto v = detail::to_double(value);
      if (!v) throw ConfigError(line_no, key + ": not a number: '" + std::string(value) + "'");
      if (const auto problem = detail::range_problem(key, *v); !problem.empty())
        throw ConfigError(line_no, key + ": " + problem + ", got " + std::string(value));
      *field = *v;
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }

  try {
    validate(out.config);
  } catch (const InvalidConfig& e) {
    throw ConfigError(line_no, e.what());
  }
  if (sweep.empty()) return out;

  for (const char* required : {"sweep.param", "sweep.min", "sweep.max", "sweep.count"}) {
    if (!sweep.contains(required))
      throw ConfigError(line_no, std::string("missing '") + required + "' for the sweep");
  }
  const auto names = detail::split(sweep["sweep.param"].second, ',');
  if (names.size() > 2) throw ConfigError(sweep["sweep.param"].first, "at most two swept parameters");
  auto column = [&](const std::string& key, std::size_t k, std::string_view fallback) {
    if (!sweep.contains(key)) return std::pair<int, std::string>{line_no, std::string(fallback)};
    const auto parts = detail::split(sweep[key].second, ',');
    if (parts.size() != names.size())
      throw ConfigError(sweep[key].first, key + ": expected " + std::to_string(names.size()) +
                                              " comma-separated entries");
    return std::pair<int, std::string>{sweep[key].first, std::string(parts[k])};
  };

  SweepPlan plan;
  plan.base = out.config;
  for (std::size_t k = 0; k < names.size(); ++k) {
    SweepAxis axis;
    const int param_line = sweep["sweep.param"].first;
    axis.name = std::string(names[k]);
    SystemConfig probe;
    if (detail::real_field(probe, axis.name) == nullptr || axis.name == "tail_tol")
      throw ConfigError(param_line, "sweep.param: '" + axis.name + "' cannot be swept");
    const auto [scale_line, scale] = column("sweep.scale", k, "linear");
    if (scale == "log") {
      axis.scale = Scale::log;
    } else if (scale != "linear") {
      throw ConfigError(scale_line, "sweep.scale: expected linear or log, got '" + scale + "'");
    }
    const auto [min_line, min_text] = column("sweep.min", k, "");
    const auto [max_line, max_text] = column("sweep.max", k, "");
    const auto [count_line, count_text] = column("sweep.count", k, "");
    const auto lo = detail::to_double(min_text);
    if (!lo) throw ConfigError(min_line, "sweep.min: not a finite number: '" + min_text + "'");
    const auto hi = detail::to_double(max_text);
    if (!hi) throw ConfigError(max_line, "sweep.max: not a finite number: '" + max_text + "'");
    const auto count = detail::to_int(count_text);
    if (!count) throw ConfigError(count_line, "sweep.count: not an integer: '" + count_text + "'");
    if (*count < 2) throw ConfigError(count_line, "sweep.count: must be >= 2");
    if (axis.scale == Scale::log && (*lo <= 0.0 || *hi <= 0.0))
      throw ConfigError(axis.scale == Scale::log && *lo <= 0.0 ? min_line : max_line,
                        "log sweep of '" + axis.name + "' needs positive bounds");
    for (const auto& [text_line, v] : {std::pair{min_line, *lo}, std::pair{max_line, *hi}}) {
      if (const auto problem = detail::range_problem(axis.name, v); !problem.empty())
        throw ConfigError(text_line, axis.name + ": sweep bound " + problem);
    }
    axis.min = *lo;
    axis.max = *hi;
    axis.count = *count;
    plan.axes.push_back(axis);
  }
  out.plan = std::move(plan);
  return out;
}

inline ConfigFile load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << f.rdbuf();
  return parse_config(buffer.str());
}

/// Steady-state record for one configuration. Solver failures become a record
/// with status "error: ..." and undefined observables.
inline ObservableRecord evaluate_point(const SystemConfig& c) {
  try {
    return make_record(solve_steady(c));
  } catch (const Error& e) {
    ObservableRecord r;
    r.config = c;
    r.n_a = std::numeric_limits<double>::quiet_NaN();
    r.n_sigma = std::numeric_limits<double>::quiet_NaN();
    r.tail_mass = std::numeric_limits<double>::quiet_NaN();
    r.status = detail::error_status(e.what());
    return r;
  }
}

/// (n_a, g2) chart model backed by steady-state solves. The pump is P_sigma for
/// the incoherent drive and Omega_sigma otherwise; the ratio sets gamma_a in
/// units of gamma_sigma. Points needing more than n_cap photons come back empty.
inline ChartModel steady_chart_model(SystemConfig base, int n_cap = 40) {
  return [base, n_cap](double pump, double ratio) -> ChartPoint {
    SystemConfig c = base;
    (c.drive == Drive::incoherent ? c.P_sigma : c.Omega_sigma) = pump;
    c.gamma_a = ratio * c.gamma_sigma;
    try {
      const ObservableRecord r = make_record(solve_steady(c, n_cap));
      if (!r.g2) return {};
      return {r.n_a, *r.g2};
    } catch (const Error&) {
      return {};
    }
  };
}

/// One record per grid point in row-major order, evaluated on `plan.jobs` threads.
inline std::vector<ObservableRecord> run_sweep(const SweepPlan& plan) {
  if (plan.axes.empty() || plan.axes.size() > 2) throw InvalidConfig("a sweep needs one or two axes");
  std::vector<std::vector<double>> grids;
  for (const auto& a : plan.axes) grids.push_back(a.values());
  const std::size_t inner = grids.size() == 2 ? grids[1].size() : 1;
  const std::size_t total = plan.size();

  std::vector<ObservableRecord> out(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      SystemConfig c = plan.base;
      const double p1 = grids[0][k / inner];
      set_parameter(c, plan.axes[0].name, p1);
      std::optional<double> p2;
      if (grids.size() == 2) {
        p2 = grids[1][k % inner];
        set_parameter(c, plan.axes[1].name, *p2);
      }
      ObservableRecord r;
      try {
        validate(c);
        r = evaluate_point(c);
      } catch (const InvalidConfig& e) {
        r.config = c;
        r.n_a = r.n_sigma = r.tail_mass = std::numeric_limits<double>::quiet_NaN();
        r.status = detail::error_status(e.what());
      }
      r.param1 = p1;
      r.param2 = p2;
      out[k] = std::move(r);
    }
  };
  const int jobs = std::clamp(plan.jobs, 1, 256);
  std::vector<std::jthread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  return out;
}

// ---------------------------------------------------------------------------
// Emission

inline constexpr std::string_view kCsvHeader =
    "param1,param2,n_a,g2,g3,n_sigma,n_max,tail_mass,status";

namespace detail {

/// Shortest decimal that parses back to the same double; "NA" for non-finite.
inline std::string format_real(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::string format_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string("NA");
}

inline std::optional<double> parse_real(std::string_view s) {
  if (s == "NA") return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidConfig("malformed number '" + std::string(s) + "'");
  return v;
}

inline nlohmann::json json_real(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

inline std::optional<double> from_json_real(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace detail

inline std::string to_csv(const std::vector<ObservableRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += detail::format_real(r.param1) + ',' + detail::format_real(r.param2) + ',' +
           detail::format_real(r.n_a) + ',' + detail::format_real(r.g2) + ',' +
           detail::format_real(r.g3) + ',' + detail::format_real(r.n_sigma) + ',' +
           std::to_string(r.n_max) + ',' + detail::format_real(r.tail_mass) + ',' + r.status +
           '\n';
  }
  return out;
}

inline std::string to_json(const std::vector<ObservableRecord>& records) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : records) {
    rows.push_back({{"param1", detail::json_real(r.param1)},
                    {"param2", detail::json_real(r.param2)},
                    {"n_a", detail::json_real(r.n_a)},
                    {"g2", detail::json_real(r.g2)},
                    {"g3", detail::json_real(r.g3)},
                    {"n_sigma", detail::json_real(r.n_sigma)},
                    {"n_max", r.n_max},
                    {"tail_mass", detail::json_real(r.tail_mass)},
                    {"status", r.status}});
  }
  return rows.dump(1) + "\n";
}

/// Reads back the emitted columns; the config snapshot is not part of the format.
inline std::vector<ObservableRecord> from_csv(std::string_view text) {
  std::vector<ObservableRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw InvalidConfig("unexpected CSV header");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 9) throw InvalidConfig("CSV row with " + std::to_string(f.size()) + " fields");
    ObservableRecord r;
    r.param1 = detail::parse_real(f[0]).value_or(nan);
    r.param2 = detail::parse_real(f[1]);
    r.n_a = detail::parse_real(f[2]).value_or(nan);
    r.g2 = detail::parse_real(f[3]);
    r.g3 = detail::parse_real(f[4]);
    r.n_sigma = detail::parse_real(f[5]).value_or(nan);
    const auto n = detail::to_int(f[6]);
    if (!n) throw InvalidConfig("malformed n_max '" + std::string(f[6]) + "'");
    r.n_max = *n;
    r.tail_mass = detail::parse_real(f[7]).value_or(nan);
    r.status = std::string(f[8]);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<ObservableRecord> from_json(std::string_view text) {
  const auto rows = nlohmann::json::parse(text);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<ObservableRecord> out;
  for (const auto& j : rows) {
    ObservableRecord r;
    r.param1 = detail::from_json_real(j.at("param1")).value_or(nan);
    r.param2 = detail::from_json_real(j.at("param2"));
    r.n_a = detail::from_json_real(j.at("n_a")).value_or(nan);
    r.g2 = detail::from_json_real(j.at("g2"));
    r.g3 = detail::from_json_real(j.at("g3"));
    r.n_sigma = detail::from_json_real(j.at("n_sigma")).value_or(nan);
    r.n_max = j.at("n_max").get<int>();
    r.tail_mass = detail::from_json_real(j.at("tail_mass")).value_or(nan);
    r.status = j.at("status").get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

/// Equality over the emitted columns (NaN equals NaN).
inline bool same_emitted_fields(const ObservableRecord& a, const ObservableRecord& b) {
  auto eq = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
  auto eq_opt = [&](const std::optional<double>& x, const std::optional<double>& y) {
    return x.has_value() == y.has_value() && (!x || eq(*x, *y));
  };
  return eq(a.param1, b.param1) && eq_opt(a.param2, b.param2) && eq(a.n_a, b.n_a) &&
         eq_opt(a.g2, b.g2) && eq_opt(a.g3, b.g3) && eq(a.n_sigma, b.n_sigma) &&
         a.n_max == b.n_max && eq(a.tail_mass, b.tail_mass) && a.status == b.status;
}

}  // namespace qexcite
