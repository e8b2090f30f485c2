#include "optomech/sweep.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "optomech/analysis.hpp"
#include "optomech/constants.hpp"
#include "optomech/entropy.hpp"
#include "optomech/errors.hpp"
#include "optomech/parallel.hpp"
#include "optomech/state.hpp"

namespace optomech {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<SweepMode, std::string_view>, 8> kModeNames{{
    {SweepMode::tangle_map, "tangle-map"},
    {SweepMode::negativity_map, "negativity-map"},
    {SweepMode::marker_map, "marker-map"},
    {SweepMode::kc_curve, "kc-curve"},
    {SweepMode::mutual_info, "mutual-info"},
    {SweepMode::density_dump, "density-dump"},
    {SweepMode::demo_qubit, "demo-qubit"},
    {SweepMode::scaling_check, "scaling-check"},
}};

struct AxisRule {
  const char* name;
  std::optional<double> fallback;  // empty: required
};

// Axis order per mode; this is also the lexicographic row order.
std::vector<AxisRule> axis_rules(SweepMode mode) {
  switch (mode) {
    case SweepMode::tangle_map:
      return {{"k", {}}, {"theta", {}}, {"alpha", 1.0}, {"nbar", 0.0}};
    case SweepMode::negativity_map:
      return {{"k", {}}, {"theta", {}}, {"alpha", 1.0}, {"nbar", {}}};
    case SweepMode::marker_map:
      return {{"arctan_b_scaled", {}}, {"x", {}}};
    case SweepMode::kc_curve:
      return {{"alpha", {}}};
    case SweepMode::mutual_info:
      return {{"alpha", {}}, {"nbar", {}}, {"theta", {}}, {"k", {}}};
    case SweepMode::density_dump:
      return {{"k", {}}, {"alpha", {}}, {"nbar", {}}, {"theta", {}}};
    case SweepMode::demo_qubit:
      return {{"k", {}}, {"theta", {}}};
    case SweepMode::scaling_check:
      return {{"alpha", {}}, {"k", {}}, {"nbar", {}}, {"theta", {}}, {"s", {}}};
  }
  return {};
}

std::vector<std::string> columns_for(SweepMode mode) {
  switch (mode) {
    case SweepMode::tangle_map:
      return {"k", "theta_over_pi", "tangle", "error"};
    case SweepMode::negativity_map:
      return {"k", "theta_over_pi", "alpha", "nbar", "negativity", "error"};
    case SweepMode::marker_map:
      return {"arctan_b_scaled", "x", "H_value", "sign", "error"};
    case SweepMode::kc_curve:
      return {"alpha", "k_c", "residual", "error"};
    case SweepMode::mutual_info:
      return {"alpha", "nbar", "theta", "S1", "S2", "S", "I_norm", "araki_lieb", "error"};
    case SweepMode::density_dump:
      return {};
    case SweepMode::demo_qubit:
      return {"k", "theta_over_pi", "negativity", "concurrence", "error"};
    case SweepMode::scaling_check:
      return {"alpha", "k", "nbar", "theta", "s", "lhs", "rhs", "relative_gap",
              "lhs_quartic", "rhs_quartic", "relative_gap_quartic", "error"};
  }
  return {};
}

double number_or_angle(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_angle(v.get<std::string>());
  throw ConfigError(where + ": expected a number");
}

double trim_parse(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("cannot parse number '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string_view to_string(SweepMode mode) {
  for (const auto& [m, name] : kModeNames)
    if (m == mode) return name;
  return "unknown";
}

SweepMode parse_mode(std::string_view name) {
  for (const auto& [m, n] : kModeNames)
    if (n == name) return m;
  throw ConfigError("unknown sweep mode '" + std::string(name) + "'");
}

double parse_angle(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  const auto p = s.find("pi");
  if (p == std::string::npos) return trim_parse(s);
  std::string_view coef(s.data(), p);
  std::string_view rest(s.data() + p + 2, s.size() - p - 2);
  double factor = 1.0;
  if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);
  if (coef == "-") factor = -1.0;
  else if (!coef.empty()) factor = trim_parse(coef);
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw ConfigError("cannot parse angle '" + s + "'");
    divisor = trim_parse(rest.substr(1));
    if (divisor == 0.0) throw ConfigError("angle divides by zero");
  }
  return factor * constants::pi / divisor;
}

GridAxis parse_axis(const std::string& name, const json& spec) {
  GridAxis axis{name, {}};
  const std::string where = "axis '" + name + "'";
  if (spec.is_array()) {
    for (const auto& v : spec) axis.values.push_back(number_or_angle(v, where));
  } else if (spec.is_object()) {
    for (const char* key : {"start", "stop", "count"})
      if (!spec.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    const double start = number_or_angle(spec["start"], where);
    const double stop = number_or_angle(spec["stop"], where);
    if (!spec["count"].is_number_integer()) throw ConfigError(where + ": count must be an integer");
    const long long count = spec["count"].get<long long>();
    if (count < 0) throw ConfigError(where + ": negative count");
    const bool log = spec.value("log", false);
    const std::string exclude = spec.value("exclude", std::string("none"));
    if (exclude != "none" && exclude != "start" && exclude != "stop" && exclude != "both")
      throw ConfigError(where + ": exclude must be none, start, stop or both");
    if (log && !(start > 0.0 && stop > 0.0))
      throw ConfigError(where + ": log spacing needs positive bounds");
    const double a = log ? std::log(start) : start;
    const double b = log ? std::log(stop) : stop;
    // Positions j / (intervals) with the excluded ends removed.
    const bool skip_start = exclude == "start" || exclude == "both";
    const bool skip_stop = exclude == "stop" || exclude == "both";
    const long long intervals = count - 1 + (skip_start ? 1 : 0) + (skip_stop ? 1 : 0);
    for (long long i = 0; i < count; ++i) {
      const long long j = i + (skip_start ? 1 : 0);
      double v;
      if (intervals == 0) v = a;
      else if (j == intervals) v = b;
      else v = a + (b - a) * static_cast<double>(j) / static_cast<double>(intervals);
      axis.values.push_back(log ? std::exp(v) : v);
    }
    if (log && !axis.values.empty()) {
      if (!skip_start) axis.values.front() = start;
      if (!skip_stop) axis.values.back() = stop;
    }
  } else {
    axis.values.push_back(number_or_angle(spec, where));
  }
  if (axis.values.empty()) throw ConfigError(where + ": empty grid");
  for (double v : axis.values)
    if (!std::isfinite(v)) throw ConfigError(where + ": non-finite value");
  return axis;
}

SweepConfig SweepConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  if (!doc.contains("mode") || !doc["mode"].is_string())
    throw ConfigError("config: 'mode' is required");
  SweepConfig cfg;
  cfg.mode = parse_mode(doc["mode"].get<std::string>());
  const json grid = doc.value("grid", json::object());
  if (!grid.is_object()) throw ConfigError("config: 'grid' must be an object");

  for (const auto& [key, _] : grid.items()) {
    bool known = key == "temperature";
    for (const auto& rule : axis_rules(cfg.mode)) known = known || key == rule.name;
    if (!known) throw ConfigError("config: axis '" + key + "' not used by mode " +
                                  std::string(to_string(cfg.mode)));
  }
  cfg.mirror_freq = doc.value("mirror_freq", 1.0);
  if (!(cfg.mirror_freq > 0.0)) throw ConfigError("config: mirror_freq must be positive");

  for (const auto& rule : axis_rules(cfg.mode)) {
    const std::string name = rule.name;
    if (name == "nbar" && grid.contains("temperature")) {
      GridAxis temps = parse_axis("temperature", grid["temperature"]);
      GridAxis nbar{"nbar", {}};
      for (double t : temps.values) {
        if (!(t > 0.0)) throw ConfigError("config: temperature must be positive");
        nbar.values.push_back(thermal_occupancy(t, cfg.mirror_freq));
      }
      if (grid.contains("nbar")) {
        GridAxis given = parse_axis("nbar", grid["nbar"]);
        if (given.values.size() != nbar.values.size())
          throw ConfigError("config: nbar and temperature grids differ in size");
        for (std::size_t i = 0; i < given.values.size(); ++i) {
          const double scale = std::max(std::abs(given.values[i]), std::abs(nbar.values[i]));
          if (std::abs(given.values[i] - nbar.values[i]) > 1e-9 * scale)
            throw ConfigError("config: nbar disagrees with temperature beyond 1e-9 relative");
        }
      }
      cfg.axes.push_back(std::move(nbar));
    } else if (grid.contains(name)) {
      cfg.axes.push_back(parse_axis(name, grid[name]));
    } else if (rule.fallback) {
      cfg.axes.push_back({name, {*rule.fallback}});
    } else {
      throw ConfigError("config: mode " + std::string(to_string(cfg.mode)) +
                        " requires axis '" + name + "'");
    }
  }

  for (const auto& axis : cfg.axes) {
    for (double v : axis.values) {
      if ((axis.name == "nbar" || axis.name == "alpha") && v < 0.0)
        throw ConfigError("config: " + axis.name + " must be >= 0");
      if (axis.name == "x" && !(v >= 0.0 && v < 1.0))
        throw ConfigError("config: x must lie in [0, 1)");
      if (axis.name == "arctan_b_scaled" && !(v >= 0.0 && v < 1.0))
        throw ConfigError("config: arctan_b_scaled must lie in [0, 1)");
      if (axis.name == "s" && (v < 2.0 || v != std::floor(v)))
        throw ConfigError("config: s must be an integer >= 2");
    }
  }
  if (cfg.mode == SweepMode::tangle_map && cfg.axis("nbar").values != std::vector<double>{0.0})
    throw ConfigError("config: tangle-map needs nbar = 0 (the tangle is defined for pure states)");
  if (cfg.mode == SweepMode::density_dump && cfg.cardinality() != 1)
    throw ConfigError("config: density-dump takes a single parameter point");

  if (doc.contains("subspace")) {
    const json& s = doc["subspace"];
    if (!s.is_array() || s.size() != 4)
      throw ConfigError("config: subspace must be [mu, nu, n, m]");
    try {
      cfg.subspace = {s[0].get<int>(), s[1].get<int>(), s[2].get<int>(), s[3].get<int>()};
    } catch (const json::exception&) {
      throw ConfigError("config: subspace entries must be integers");
    }
  } else if (cfg.mode == SweepMode::tangle_map) {
    cfg.subspace = {1, 2, 1, 2};
  }
  try {
    cfg.subspace.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (doc.contains("truncation")) {
    const json& t = doc["truncation"];
    Truncation tr;
    tr.cav_max = t.value("cav_max", tr.cav_max);
    tr.mir_max = t.value("mir_max", tr.mir_max);
    tr.tail_tol = t.value("tail_tol", tr.tail_tol);
    try {
      tr.validate();
    } catch (const Error& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    cfg.truncation = tr;
  }

  cfg.output = doc.value("output", std::string());
  const long long workers = doc.value("workers", 1LL);
  if (workers < 1) throw ConfigError("config: workers must be >= 1");
  cfg.workers = static_cast<unsigned>(workers);

  cfg.echo = doc;
  cfg.echo.erase("output");
  cfg.echo.erase("workers");
  return cfg;
}

SweepConfig SweepConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return from_json(doc);
}

const GridAxis& SweepConfig::axis(std::string_view name) const {
  for (const auto& a : axes)
    if (a.name == name) return a;
  throw ConfigError("config: no axis '" + std::string(name) + "'");
}

std::size_t SweepConfig::cardinality() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

namespace {

using Point = std::vector<double>;  // one value per axis, in axis order
using Cells = std::vector<std::string>;

struct PointView {
  const SweepConfig& cfg;
  const Point& p;
  double operator[](std::string_view name) const {
    for (std::size_t i = 0; i < cfg.axes.size(); ++i)
      if (cfg.axes[i].name == name) return p[i];
    throw ConfigError("config: no axis '" + std::string(name) + "'");
  }
  SystemParams params() const {
    SystemParams sp;
    sp.mirror_freq = cfg.mirror_freq;
    sp.coupling_k = (*this)["k"];
    sp.alpha = (*this)["alpha"];
    sp.nbar = (*this)["nbar"];
    return sp;
  }
};

// Measure cells for one grid point (without the echoed axis cells and the
// error column).
Cells evaluate(const SweepConfig& cfg, const PointView& pt) {
  const auto f = format_number;
  switch (cfg.mode) {
    case SweepMode::tangle_map:
    case SweepMode::negativity_map:
      return {f(subspace_measure(pt.params(), ScaledTime(pt["theta"]), cfg.subspace))};
    case SweepMode::marker_map: {
      const double b = std::tan(0.5 * constants::pi * pt["arctan_b_scaled"]);
      const double h = marker_h(b, pt["x"]);
      // det(rho^{T_P}) = -G H with G > 0
      const MarkerSign s = sign_of(-h);
      return {f(h), s == MarkerSign::positive ? "1" : s == MarkerSign::negative ? "-1" : "0"};
    }
    case SweepMode::kc_curve: {
      const auto r = solve_kc(pt["alpha"]);
      return {f(r.k_c), f(r.residual)};
    }
    case SweepMode::mutual_info: {
      SystemParams sp = pt.params();
      const auto r = mutual_information(sp, pt["theta"]);
      return {f(r.s_mirror), f(r.s_cavity), f(r.s_total), f(r.mutual),
              r.araki_lieb_quantum ? "1" : "0"};
    }
    case SweepMode::demo_qubit: {
      const auto s = demo_qubit_photon(ScaledTime(pt["theta"]), pt["k"]);
      return {f(negativity(s)), f(concurrence(s))};
    }
    case SweepMode::scaling_check: {
      const int s = static_cast<int>(pt["s"]);
      const ScaledTime theta(pt["theta"]);
      const auto a = scaling_check(pt["alpha"], pt["k"], pt["nbar"], theta, s);
      const auto q = scaling_check_quartic(pt["alpha"], pt["k"], pt["nbar"], theta, s);
      return {f(a.lhs), f(a.rhs), f(a.relative_gap()), f(q.lhs), f(q.rhs), f(q.relative_gap())};
    }
    case SweepMode::density_dump:
      break;
  }
  return {};
}

// Cells echoing the grid point, matching the leading CSV columns.
Cells echo_point(const SweepConfig& cfg, const PointView& pt) {
  const auto f = format_number;
  switch (cfg.mode) {
    case SweepMode::tangle_map:
    case SweepMode::demo_qubit:
      return {f(pt["k"]), f(pt["theta"] / constants::pi)};
    case SweepMode::negativity_map:
      return {f(pt["k"]), f(pt["theta"] / constants::pi), f(pt["alpha"]), f(pt["nbar"])};
    case SweepMode::marker_map:
      return {f(pt["arctan_b_scaled"]), f(pt["x"])};
    case SweepMode::kc_curve:
      return {f(pt["alpha"])};
    case SweepMode::mutual_info:
      return {f(pt["alpha"]), f(pt["nbar"]), f(pt["theta"])};
    case SweepMode::scaling_check:
      return {f(pt["alpha"]), f(pt["k"]), f(pt["nbar"]), f(pt["theta"]), f(pt["s"])};
    case SweepMode::density_dump:
      break;
  }
  return {};
}

Point point_at(const SweepConfig& cfg, std::size_t flat) {
  Point p(cfg.axes.size());
  for (std::size_t i = cfg.axes.size(); i-- > 0;) {
    const auto& vals = cfg.axes[i].values;
    p[i] = vals[flat % vals.size()];
    flat /= vals.size();
  }
  return p;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepResult result;
  result.mode = cfg.mode;
  result.echo = cfg.echo;
  result.workers = cfg.workers;
  result.columns = columns_for(cfg.mode);

  if (cfg.mode == SweepMode::density_dump) {
    const Point p = point_at(cfg, 0);
    const PointView pt{cfg, p};
    const SystemParams sp = pt.params();
    const ScaledTime theta(pt["theta"]);
    const Truncation tr = cfg.truncation ? *cfg.truncation : choose_truncation(sp, theta);
    const DensityBlock block = build_rho(sp, theta, tr, cfg.workers);
    std::ostringstream os;
    block.write_json(os);
    result.document = json::parse(os.str());
  } else {
    const std::size_t n = cfg.cardinality();
    result.rows.resize(n);
    std::vector<char> failed(n, 0);
    parallel_for(n, cfg.workers, [&](std::size_t i) {
      const Point p = point_at(cfg, i);
      const PointView pt{cfg, p};
      Cells row = echo_point(cfg, pt);
      const std::size_t measures = result.columns.size() - row.size() - 1;
      std::string code;
      try {
        Cells m = evaluate(cfg, pt);
        row.insert(row.end(), m.begin(), m.end());
      } catch (const Error& e) {
        code = std::string(to_string(e.code()));
      } catch (const std::exception&) {
        code = "internal";
      }
      if (!code.empty()) {
        row.resize(result.columns.size() - 1 - measures);
        row.insert(row.end(), measures, "nan");
        failed[i] = 1;
      }
      row.push_back(code);
      result.rows[i] = std::move(row);
    });
    for (char c : failed) result.error_rows += c;
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  out << "# optomech sweep\n";
  out << "# version: " << kToolVersion << '\n';
  out << "# mode: " << to_string(result.mode) << '\n';
  out << "# config: " << result.echo.dump() << '\n';
  out << "# rows: " << result.rows.size() << '\n';
  out << "# error_rows: " << result.error_rows << '\n';
  for (std::size_t i = 0; i < result.columns.size(); ++i)
    out << (i ? "," : "") << result.columns[i];
  out << '\n';
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

json sidecar(const SweepResult& result, const std::string& output) {
  return json{{"version", kToolVersion},
              {"mode", std::string(to_string(result.mode))},
              {"output", output},
              {"rows", result.rows.size()},
              {"error_rows", result.error_rows},
              {"wall_time_s", result.wall_seconds},
              {"workers", result.workers},
              {"config", result.echo}};
}

void write_outputs(const SweepResult& result, const std::string& output) {
  if (output.empty()) throw ConfigError("config: no output path");
  std::ofstream out(output, std::ios::binary);
  if (!out) throw ConfigError("config: cannot write " + output);
  if (result.document) out << result.document->dump(2) << '\n';
  else write_csv(result, out);
  std::ofstream meta(output + ".meta.json", std::ios::binary);
  if (!meta) throw ConfigError("config: cannot write " + output + ".meta.json");
  meta << sidecar(result, output).dump(2) << '\n';
}

}  // namespace optomech
