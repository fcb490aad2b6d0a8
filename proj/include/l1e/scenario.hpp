#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "l1e/simulator.hpp"
#include "l1e/system_models.hpp"

namespace l1e {

/// Parse or validation failure, anchored to a line of the scenario file.
struct ScenarioError : std::runtime_error {
  ScenarioError(std::string file_in, int line_in, const std::string& msg)
      : std::runtime_error(file_in + ":" + std::to_string(line_in) + ": " + msg),
        file(std::move(file_in)),
        line(line_in) {}

  std::string file;
  int line;
};

struct Scenario {
  PlantParams plant;
  ReferenceModel ref;
  L1Config l1;
  InitialConditions init;
  IntegratorConfig integrator;
};

namespace detail {

struct RawValue {
  std::string text;
  int line = 0;
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline double parse_double(const std::string& file, const RawValue& rv) {
  try {
    std::size_t used = 0;
    const double v = std::stod(rv.text, &used);
    if (trim(rv.text.substr(used)) != "")
      throw ScenarioError(file, rv.line, "trailing characters after number: '" + rv.text + "'");
    return v;
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception&) {
    throw ScenarioError(file, rv.line, "expected a number, got '" + rv.text + "'");
  }
}

inline Vec parse_vector(const std::string& file, const RawValue& rv) {
  Vec out;
  std::istringstream ss(rv.text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) throw ScenarioError(file, rv.line, "empty entry in vector '" + rv.text + "'");
    out.push_back(parse_double(file, {cell, rv.line}));
  }
  if (out.empty()) throw ScenarioError(file, rv.line, "expected a vector of numbers");
  return out;
}

}  // namespace detail

/// Parses the sectioned key=value scenario format:
///
///   [plant]       n, a
///   [reference]   a_m, Q (optional: n values = diagonal, n^2 = row-major)
///   [l1]          k, gamma, projection_radius (optional)
///   [init]        x0, u0, xhat0, thetahat0, v0 (all optional)
///   [integrator]  dt, t_end, sample_every (optional), blowup_threshold (optional)
///
/// '#' and ';' start comments. Every module-level invariant is re-validated
/// here; violations surface as ScenarioError anchored to the offending line.
inline Scenario parse_scenario(const std::string& text, const std::string& file = "<string>") {
  using detail::RawValue;

  static const std::map<std::string, std::vector<std::string>> known = {
      {"plant", {"n", "a"}},
      {"reference", {"a_m", "Q"}},
      {"l1", {"k", "gamma", "projection_radius"}},
      {"init", {"x0", "u0", "xhat0", "thetahat0", "v0"}},
      {"integrator", {"dt", "t_end", "sample_every", "blowup_threshold"}},
  };

  std::map<std::string, RawValue> values;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;

    if (body.front() == '[') {
      if (body.back() != ']')
        throw ScenarioError(file, lineno, "malformed section header '" + body + "'");
      section = detail::trim(body.substr(1, body.size() - 2));
      if (!known.count(section))
        throw ScenarioError(file, lineno, "unknown section [" + section + "]");
      continue;
    }

    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ScenarioError(file, lineno, "expected 'key = value', got '" + body + "'");
    if (section.empty()) throw ScenarioError(file, lineno, "key outside of any [section]");
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string value = detail::trim(body.substr(eq + 1));
    const auto& keys = known.at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ScenarioError(file, lineno, "unknown key '" + key + "' in section [" + section + "]");
    const std::string full = section + "." + key;
    if (values.count(full)) throw ScenarioError(file, lineno, "duplicate key '" + full + "'");
    if (value.empty()) throw ScenarioError(file, lineno, "empty value for '" + full + "'");
    values[full] = {value, lineno};
  }

  auto require = [&](const std::string& full) -> const RawValue& {
    const auto it = values.find(full);
    if (it == values.end()) throw ScenarioError(file, 0, "missing required key '" + full + "'");
    return it->second;
  };
  auto optional_value = [&](const std::string& full) -> const RawValue* {
    const auto it = values.find(full);
    return it == values.end() ? nullptr : &it->second;
  };

  // plant
  const RawValue& n_raw = require("plant.n");
  const double n_val = detail::parse_double(file, n_raw);
  if (n_val < 1.0 || n_val != std::floor(n_val))
    throw ScenarioError(file, n_raw.line, "plant.n must be a positive integer");
  const std::size_t n = static_cast<std::size_t>(n_val);

  const RawValue& a_raw = require("plant.a");
  const Vec a = detail::parse_vector(file, a_raw);
  if (a.size() != n)
    throw ScenarioError(file, a_raw.line,
                        "plant.a has " + std::to_string(a.size()) + " entries, expected n = " +
                            std::to_string(n));

  // reference
  const RawValue& am_raw = require("reference.a_m");
  const Vec a_m = detail::parse_vector(file, am_raw);
  if (a_m.size() != n)
    throw ScenarioError(file, am_raw.line,
                        "reference.a_m has " + std::to_string(a_m.size()) +
                            " entries, expected n = " + std::to_string(n));

  Matrix q;
  if (const RawValue* q_raw = optional_value("reference.Q")) {
    const Vec qv = detail::parse_vector(file, *q_raw);
    if (qv.size() == n) {
      q = Matrix(n);
      for (std::size_t i = 0; i < n; ++i) q(i, i) = qv[i];
    } else if (qv.size() == n * n) {
      q = Matrix(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q(i, j) = qv[i * n + j];
    } else {
      throw ScenarioError(file, q_raw->line,
                          "reference.Q needs n (diagonal) or n^2 (row-major) entries");
    }
  }

  // l1
  L1Config l1;
  l1.k = detail::parse_double(file, require("l1.k"));
  l1.gamma = detail::parse_double(file, require("l1.gamma"));
  if (const RawValue* pr = optional_value("l1.projection_radius"))
    l1.projection_radius = detail::parse_double(file, *pr);

  // init
  InitialConditions init = default_init(n);
  if (const RawValue* rv = optional_value("init.x0")) init.x0 = detail::parse_vector(file, *rv);
  if (const RawValue* rv = optional_value("init.u0")) init.u0 = detail::parse_double(file, *rv);
  if (const RawValue* rv = optional_value("init.xhat0")) init.xhat0 = detail::parse_vector(file, *rv);
  if (const RawValue* rv = optional_value("init.thetahat0"))
    init.thetahat0 = detail::parse_vector(file, *rv);
  if (const RawValue* rv = optional_value("init.v0")) init.v0 = detail::parse_double(file, *rv);

  // integrator
  IntegratorConfig icfg;
  icfg.dt = detail::parse_double(file, require("integrator.dt"));
  icfg.t_end = detail::parse_double(file, require("integrator.t_end"));
  if (const RawValue* rv = optional_value("integrator.sample_every")) {
    const double se = detail::parse_double(file, *rv);
    if (se < 1.0 || se != std::floor(se))
      throw ScenarioError(file, rv->line, "integrator.sample_every must be a positive integer");
    icfg.sample_every = static_cast<std::size_t>(se);
  }
  if (const RawValue* rv = optional_value("integrator.blowup_threshold"))
    icfg.blowup_threshold = detail::parse_double(file, *rv);

  // re-validate every module-level invariant, mapping failures to lines
  auto rethrow_at = [&](int line, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(file, line, e.what());
    } catch (const NoSolutionError& e) {
      throw ScenarioError(file, line, e.what());
    }
  };

  std::optional<PlantParams> plant;
  rethrow_at(a_raw.line, [&] { plant.emplace(a); });
  std::optional<ReferenceModel> ref;
  rethrow_at(am_raw.line, [&] { ref.emplace(a_m, q); });
  rethrow_at(require("l1.k").line, [&] { l1.validate(); });
  rethrow_at(optional_value("init.x0") ? optional_value("init.x0")->line : 0,
             [&] { init.validate(n); });
  rethrow_at(require("integrator.dt").line, [&] { icfg.validate(); });

  return Scenario{std::move(*plant), std::move(*ref), l1, std::move(init), icfg};
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path.string(), 0, "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

}  // namespace l1e
