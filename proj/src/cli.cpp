#include "kuothom/cli.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <initializer_list>
#include <numbers>

#include "kuothom/errors.hpp"
#include "kuothom/lojasiewicz.hpp"
#include "kuothom/quantities.hpp"
#include "kuothom/random.hpp"
#include "kuothom/text.hpp"

namespace kuothom::cli {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

ojson number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double rounded = std::strtod(buf, nullptr);
  return rounded == 0 ? 0.0 : rounded;
}

// ---------------------------------------------------------------------------
// Config

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError("unknown key \"" + key + "\" in " + where);
}

std::uint64_t get_count(const json& v, const std::string& key, std::uint64_t min_value,
                        std::uint64_t max_value = UINT_MAX) {
  bool ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  const std::uint64_t x = ok ? v.get<std::uint64_t>() : 0;
  if (!ok || x < min_value || x > max_value)
    throw ConfigError(key + " must be an integer >= " + std::to_string(min_value));
  return x;
}

unsigned get_positive(const json& v, const std::string& key) {
  return static_cast<unsigned>(get_count(v, key, 1));
}

double get_positive_real(const json& v, const std::string& key) {
  if (!v.is_number() || !std::isfinite(v.get<double>()) || !(v.get<double>() > 0))
    throw ConfigError(key + " must be a positive number");
  return v.get<double>();
}

std::vector<unsigned> get_positive_list(const json& v, const std::string& key) {
  if (!v.is_array()) return {get_positive(v, key)};
  if (v.empty()) throw ConfigError(key + " must not be empty");
  std::vector<unsigned> out;
  for (const auto& e : v) out.push_back(get_positive(e, key));
  return out;
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key + " must be a string");
  return v.get<std::string>();
}

/// Present and not null; null keeps the default, so an echoed config
/// parses back to itself.
bool has(const json& obj, const char* key) { return obj.contains(key) && !obj.at(key).is_null(); }

Rational parse_fraction(const std::string& text) {
  Rational q;
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty() || q.set_str(s, 10) != 0 || q.get_den() == 0)
    throw ConfigError("\"" + text + "\" is not a fraction");
  q.canonicalize();
  if (q < 0 || q > 1) throw ConfigError("deformation parameter " + text + " is outside [0, 1]");
  return q;
}

CompatibilityTask parse_compatibility(const json& j) {
  check_keys(j, {"g", "t", "r", "m"}, "relative.compatibility");
  CompatibilityTask c;
  if (!has(j, "g")) throw ConfigError("relative.compatibility.g is required");
  const auto& g = j.at("g");
  if (g.is_string()) c.g = {g.get<std::string>()};
  else if (g.is_array() && !g.empty())
    for (const auto& e : g) c.g.push_back(get_string(e, "relative.compatibility.g"));
  else throw ConfigError("relative.compatibility.g must be a string or a list of strings");
  if (has(j, "t")) {
    const auto& t = j.at("t");
    if (!t.is_array() || t.empty()) throw ConfigError("relative.compatibility.t must be a nonempty list");
    c.t.clear();
    for (const auto& e : t) {
      std::string s = e.is_number_integer() ? std::to_string(e.get<std::int64_t>())
                                            : get_string(e, "relative.compatibility.t");
      parse_fraction(s);
      c.t.push_back(s);
    }
  }
  if (has(j, "r")) c.r = get_positive(j.at("r"), "relative.compatibility.r");
  if (has(j, "m")) c.m = get_positive(j.at("m"), "relative.compatibility.m");
  return c;
}

}  // namespace

TaskConfig parse_config(const json& j) {
  check_keys(j,
             {"m", "r", "radii", "grid", "multistart", "directions", "tolerance", "seed", "horn_width",
              "ratio_samples", "arcs", "relative"},
             "config");
  TaskConfig c;
  if (has(j, "m")) c.m = get_positive_list(j.at("m"), "m");
  if (has(j, "r")) c.r = get_positive_list(j.at("r"), "r");
  if (has(j, "radii")) {
    const auto& radii = j.at("radii");
    if (!radii.is_array() || radii.size() < 4) throw ConfigError("radii must list at least 4 values");
    c.radii.clear();
    for (const auto& e : radii) c.radii.push_back(get_positive_real(e, "radii"));
    for (std::size_t k = 1; k < c.radii.size(); ++k)
      if (!(c.radii[k] < c.radii[k - 1])) throw ConfigError("radii must be strictly decreasing");
  }
  if (has(j, "grid")) c.grid = get_positive(j.at("grid"), "grid");
  if (has(j, "multistart")) c.multistart = get_positive(j.at("multistart"), "multistart");
  if (has(j, "directions")) c.directions = get_positive(j.at("directions"), "directions");
  if (has(j, "tolerance")) c.tolerance = get_positive_real(j.at("tolerance"), "tolerance");
  if (has(j, "seed")) c.seed = get_count(j.at("seed"), "seed", 0, UINT64_MAX);
  if (has(j, "horn_width")) c.horn_width = get_positive_real(j.at("horn_width"), "horn_width");
  if (has(j, "ratio_samples")) c.ratio_samples = get_positive(j.at("ratio_samples"), "ratio_samples");
  if (has(j, "arcs")) {
    const auto& a = j.at("arcs");
    check_keys(a, {"count", "max_exponent", "max_terms", "coeff_bound", "file"}, "arcs");
    if (has(a, "count")) c.arcs.count = static_cast<unsigned>(get_count(a.at("count"), "arcs.count", 0));
    if (has(a, "max_exponent"))
      c.arcs.bounds.max_exponent = get_positive(a.at("max_exponent"), "arcs.max_exponent");
    if (has(a, "max_terms")) c.arcs.bounds.max_terms = get_positive(a.at("max_terms"), "arcs.max_terms");
    if (has(a, "coeff_bound"))
      c.arcs.bounds.coeff_bound = get_positive(a.at("coeff_bound"), "arcs.coeff_bound");
    if (has(a, "file")) c.arcs.file = get_string(a.at("file"), "arcs.file");
  }
  if (has(j, "relative")) {
    const auto& rel = j.at("relative");
    check_keys(rel, {"ball", "bands", "samples", "multistart", "alpha_max", "compatibility"}, "relative");
    if (has(rel, "ball")) c.relative.ball = get_positive_real(rel.at("ball"), "relative.ball");
    if (has(rel, "bands"))
      c.relative.bands = static_cast<unsigned>(get_count(rel.at("bands"), "relative.bands", 4));
    if (has(rel, "samples")) c.relative.samples = get_positive(rel.at("samples"), "relative.samples");
    if (has(rel, "multistart"))
      c.relative.multistart = get_positive(rel.at("multistart"), "relative.multistart");
    if (has(rel, "alpha_max")) c.relative.alpha_max = get_positive(rel.at("alpha_max"), "relative.alpha_max");
    if (has(rel, "compatibility")) c.relative.compatibility = parse_compatibility(rel.at("compatibility"));
  }
  return c;
}

TaskConfig parse_config_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

ojson config_json(const TaskConfig& c) {
  ojson j;
  j["m"] = c.m;
  j["r"] = c.r;
  j["radii"] = ojson::array();
  for (double r : c.radii) j["radii"].push_back(number(r));
  j["grid"] = c.grid;
  j["multistart"] = c.multistart;
  j["directions"] = c.directions;
  j["tolerance"] = number(c.tolerance);
  j["seed"] = c.seed ? ojson(*c.seed) : ojson(nullptr);
  j["horn_width"] = number(c.horn_width);
  j["ratio_samples"] = c.ratio_samples;
  ojson a;
  a["count"] = c.arcs.count;
  a["max_exponent"] = c.arcs.bounds.max_exponent;
  a["max_terms"] = c.arcs.bounds.max_terms;
  a["coeff_bound"] = c.arcs.bounds.coeff_bound;
  a["file"] = c.arcs.file ? ojson(*c.arcs.file) : ojson(nullptr);
  j["arcs"] = a;
  ojson rel;
  rel["ball"] = number(c.relative.ball);
  rel["bands"] = c.relative.bands;
  rel["samples"] = c.relative.samples;
  rel["multistart"] = c.relative.multistart;
  rel["alpha_max"] = c.relative.alpha_max;
  if (c.relative.compatibility) {
    const auto& cc = *c.relative.compatibility;
    ojson comp;
    comp["g"] = cc.g;
    comp["t"] = cc.t;
    comp["r"] = cc.r ? ojson(*cc.r) : ojson(nullptr);
    comp["m"] = cc.m ? ojson(*cc.m) : ojson(nullptr);
    rel["compatibility"] = comp;
  } else {
    rel["compatibility"] = nullptr;
  }
  j["relative"] = rel;
  return j;
}

// ---------------------------------------------------------------------------
// Germ files

MapGerm parse_germ(std::string_view text) {
  struct Line {
    std::string content;
    std::size_t number;
  };
  std::vector<Line> components;
  std::optional<std::size_t> n;
  std::optional<unsigned> r;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (const auto colon = line.find(':'); colon != std::string::npos) {
      std::string key = line.substr(first, colon - first);
      key.erase(key.find_last_not_of(" \t") + 1);
      const std::string value = line.substr(colon + 1);
      char* tail = nullptr;
      const long long v = std::strtoll(value.c_str(), &tail, 10);
      const bool tail_blank = tail && std::string_view(tail).find_first_not_of(" \t\r") == std::string_view::npos;
      if (key != "n" && key != "r") throw ParseError("unknown directive \"" + key + "\"", number, first + 1);
      if (value.find_first_not_of(" \t\r") == std::string::npos || !tail_blank || v < 1)
        throw ParseError(key + ": expects a positive integer", number, colon + 2);
      if (key == "n") n = static_cast<std::size_t>(v);
      else r = static_cast<unsigned>(v);
      continue;
    }
    components.push_back({line, number});
  }
  if (components.empty()) throw ParseError("germ file has no components", number, 1);
  std::size_t nvars = n.value_or(0);
  if (!n)
    for (const auto& c : components)
      nvars = std::max(nvars, parse_polynomial(c.content, 0, c.number).nvars());
  std::vector<Polynomial> polys;
  for (const auto& c : components) {
    Polynomial p = parse_polynomial(c.content, nvars, c.number);
    if (!is_zero(p.constant_term()))
      throw ParseError("component has a nonzero constant term", c.number,
                       c.content.find_first_not_of(" \t") + 1);
    polys.push_back(std::move(p));
  }
  if (polys.size() > nvars)
    throw ParseError("more components (" + std::to_string(polys.size()) + ") than variables (" +
                         std::to_string(nvars) + ")",
                     components[nvars].number, 1);
  return MapGerm(nvars, std::move(polys), r);
}

// ---------------------------------------------------------------------------
// Report pieces

namespace {

ojson order_json(Order o) { return o.is_infinite() ? ojson("inf") : ojson(o.value()); }

ojson header(const std::string& command, const TaskConfig& config) {
  ojson j;
  j["schema"] = kSchema;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = config_json(config);
  return j;
}

ojson germ_json(const MapGerm& f) {
  ojson j;
  j["n"] = f.n();
  j["p"] = f.p();
  j["jet_degree"] = f.jet_degree() ? ojson(*f.jet_degree()) : ojson(nullptr);
  j["components"] = ojson::array();
  for (const auto& c : f.components()) j["components"].push_back(to_string(c));
  return j;
}

ojson minors_json(const MinorCache& cache) {
  const auto list = [](const std::vector<Minor>& minors) {
    ojson out = ojson::array();
    for (const auto& mnr : minors) {
      ojson cols = ojson::array();
      for (std::size_t c : mnr.columns) cols.push_back(c + 1);
      out.push_back({{"columns", cols}, {"value", to_string(mnr.value)}});
    }
    return out;
  };
  ojson j;
  j["rho"] = to_string(cache.rho());
  j["kuo"] = list(cache.kuo());
  j["thom"] = list(cache.thom());
  return j;
}

ojson estimate_fields(ojson j, const std::optional<ExponentEstimate>& e) {
  j["slope"] = e ? number(e->slope) : ojson(nullptr);
  j["log_constant"] = e ? number(e->log_constant) : ojson(nullptr);
  j["r_squared"] = e ? number(e->r_squared) : ojson(nullptr);
  j["n_points"] = e ? ojson(e->n_points) : ojson(0);
  return j;
}

ojson verdict_json(const ConditionVerdict& v) {
  ojson j;
  j["condition"] = v.condition;
  j["holds"] = v.holds;
  j["target"] = number(v.target);
  j["tolerance"] = number(v.tolerance);
  j = estimate_fields(std::move(j), v.estimate);
  j["diagnostic"] = v.diagnostic.empty() ? ojson(nullptr) : ojson(v.diagnostic);
  j["caveat"] = v.caveat;
  return j;
}

/// Scans computed once and shared between the verdicts that need them, kept
/// in first-use order.
class ScanBook {
 public:
  template <class Make>
  const RadialScan& get(const std::string& id, Make&& make) {
    for (const auto& [key, scan] : scans_)
      if (key == id) return scan;
    scans_.emplace_back(id, make());
    return scans_.back().second;
  }

  static std::string csv_name(const std::string& id) { return "scan_" + id + ".csv"; }

  void emit(ojson& out, std::vector<std::pair<std::string, std::string>>& files) const {
    out = ojson::array();
    for (const auto& [id, scan] : scans_) {
      ojson j;
      j["id"] = id;
      j["csv"] = csv_name(id);
      j["radii"] = ojson::array();
      j["min_values"] = ojson::array();
      j["vanishing"] = ojson::array();
      j["empty"] = ojson::array();
      for (std::size_t k = 0; k < scan.radii.size(); ++k) {
        j["radii"].push_back(number(scan.radii[k]));
        j["min_values"].push_back(number(scan.min_values[k]));
        j["vanishing"].push_back(static_cast<bool>(scan.vanishing[k]));
        j["empty"].push_back(static_cast<bool>(scan.empty[k]));
      }
      j["evaluations"] = scan.evaluations;
      out.push_back(std::move(j));
      files.emplace_back(csv_name(id), scan_csv(scan));
    }
  }

 private:
  std::deque<std::pair<std::string, RadialScan>> scans_;  // stable references
};

ScanConfig scan_config(const TaskConfig& c) {
  ScanConfig s;
  s.radii = c.radii;
  s.strategy.grid = c.grid;
  s.strategy.multistart = c.multistart;
  s.strategy.directions = c.directions;
  s.strategy.seed = c.seed.value_or(0);
  s.tolerance = c.tolerance;
  return s;
}

void require_seed(const TaskConfig& c, const std::string& command) {
  if (!c.seed) throw ConfigError(command + " needs a seed (--seed or \"seed\" in the config)");
}

std::string power_name(const char* q, unsigned m) { return std::string(q) + "_" + std::to_string(m); }

struct Section {
  ojson json;
  std::vector<std::pair<std::string, std::string>> files;
  int exit_code = kOk;
  std::string message;
};

Section analyze_section(const MapGerm& f, const TaskConfig& config) {
  const GermQuantities q(f);
  const ScanConfig sc = scan_config(config);
  const std::size_t n = f.n(), p = f.p();
  Section s;
  ojson& out = s.json;
  out["germ"] = germ_json(f);
  out["minors"] = minors_json(q.minors());
  out["symbolic"] = {{"m", 2}, {"K", to_string(q.kuo_polynomial(2))}, {"T", to_string(q.thom_polynomial(2))}};

  ojson diagnostics = ojson::array();
  if (f.is_zero_map())
    diagnostics.push_back("degenerate input: zero map, K_m and T_m vanish identically and every condition fails");
  if (n == p) diagnostics.push_back("n = p: no (p+1)-minors, T_m = |f|^m");

  ScanBook book;
  const auto quantity_scan = [&](Quantity which, unsigned m) -> const RadialScan& {
    const std::string id = power_name(which == Quantity::Kuo ? "kuo" : "thom", m);
    return book.get(id, [&] { return scan_quantity(q, which, m, sc); });
  };
  const auto gradient = [&]() -> const RadialScan& {
    return book.get("gradient", [&] {
      return radial_scan(n, [&q](std::span<const double> x) { return q.gradient_norm(x); }, sc.radii,
                         sc.strategy);
    });
  };
  const auto entry = [&](const ConditionVerdict& v, unsigned r, const std::string& scan_id) {
    ojson j = verdict_json(v);
    ojson e;
    e["condition"] = j["condition"];
    e["r"] = r;
    e["scan"] = scan_id;
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "condition") e[it.key()] = it.value();
    return e;
  };

  ojson conditions = ojson::array();
  for (unsigned r : config.r) {
    if (p == 1)
      conditions.push_back(entry(verdict_from_scan("kuiper-kuo", gradient(), r - 1.0, sc.tolerance), r, "gradient"));
    const std::string horn_id = "horn_r" + std::to_string(r);
    const auto& horn = book.get(horn_id, [&] { return horn_scan(q, r, config.horn_width, sc); });
    conditions.push_back(entry(verdict_from_scan("kuo", horn, r - 1.0, sc.tolerance), r, horn_id));
    conditions.push_back(
        entry(verdict_from_scan("ktilde", quantity_scan(Quantity::Kuo, 1), r, sc.tolerance), r, "kuo_1"));
    conditions.push_back(entry(
        verdict_from_scan("thom-inequality", quantity_scan(Quantity::Thom, 2), 2.0 * r, sc.tolerance), r, "thom_2"));
  }
  out["diagnostics"] = diagnostics;
  out["conditions"] = conditions;

  ojson equivalence = ojson::array();
  for (unsigned m : config.m)
    for (unsigned r : config.r) {
      const double target = static_cast<double>(r) * m;
      const std::string suffix = " >= c|x|^" + std::to_string(r * m);
      const auto k = verdict_from_scan(power_name("K", m) + suffix, quantity_scan(Quantity::Kuo, m), target, sc.tolerance);
      const auto t = verdict_from_scan(power_name("T", m) + suffix, quantity_scan(Quantity::Thom, m), target, sc.tolerance);
      ojson e;
      e["m"] = m;
      e["r"] = r;
      e["kuo"] = verdict_json(k);
      e["thom"] = verdict_json(t);
      e["agree"] = k.holds == t.holds;
      equivalence.push_back(std::move(e));
    }
  out["equivalence"] = equivalence;

  if (p == 1) {
    const unsigned r_max = *std::max_element(config.r.begin(), config.r.end());
    ojson degree = nullptr;
    for (unsigned r = 1; r <= r_max; ++r)
      if (verdict_from_scan("kuiper-kuo", gradient(), r - 1.0, sc.tolerance).holds) {
        degree = r;
        break;
      }
    out["sufficiency_degree"] = {{"r_max", r_max}, {"estimate", degree}};
  } else {
    out["sufficiency_degree"] = nullptr;
  }

  ojson ratios = ojson::array();
  for (unsigned m : config.m) {
    const RatioBounds b = ratio_bounds(q, m, sc.radii.front(), config.ratio_samples, config.seed.value_or(0));
    ratios.push_back({{"m", m},
                      {"radius", number(sc.radii.front())},
                      {"samples", config.ratio_samples},
                      {"counted", b.counted},
                      {"max_kuo_over_thom", number(b.kuo_over_thom)},
                      {"max_thom_over_kuo", number(b.thom_over_kuo)}});
  }
  out["ratio_bounds"] = ratios;

  book.emit(out["scans"], s.files);
  out["csv_columns"] = {{"scan_*.csv", "radius,min_value; 0 marks a vanishing minimum, inf an empty sphere"}};
  out["caveats"] = {kNumericalCaveat,
                    "conditions are claimed on some neighbourhood of 0; behaviour below the smallest radius is "
                    "not observed"};
  return s;
}

std::vector<Arc> random_arcs(const TaskConfig& config, std::size_t n) {
  RandomStream root(*config.seed, "arcs");
  std::vector<Arc> arcs;
  for (unsigned i = 0; i < config.arcs.count; ++i)
    arcs.push_back(arc_generator(root.substream("arc-" + std::to_string(i)).next(), n, config.arcs.bounds));
  return arcs;
}

Section arcs_section(const MapGerm& f, const TaskConfig& config, std::optional<std::span<const Arc>> given) {
  std::vector<Arc> generated;
  if (!given) {
    require_seed(config, "arcs");
    generated = random_arcs(config, f.n());
  }
  const std::span<const Arc> arcs = given ? *given : std::span<const Arc>(generated);
  for (std::size_t i = 0; i < arcs.size(); ++i)
    if (arcs[i].size() != f.n())
      throw ConfigError("arc " + std::to_string(i) + " has " + std::to_string(arcs[i].size()) +
                        " components but the germ has " + std::to_string(f.n()) + " variables");
  const GermQuantities q(f);
  Section s;
  s.json["germ"] = germ_json(f);
  s.json["source"] = given ? "file" : "random";
  s.json["arcs"] = ojson::array();
  for (const auto& a : arcs) s.json["arcs"].push_back(to_string(a));
  ojson probes = ojson::array();
  std::size_t mismatches = 0;
  for (unsigned m : config.m) {
    const ProbeReport report = equivalence_probe(q, arcs, m);
    const std::string csv = "arcs_m" + std::to_string(m) + ".csv";
    ojson rows = ojson::array();
    for (const auto& row : report.rows)
      rows.push_back({{"arc_id", row.arc_id},
                      {"ord_K", order_json(row.kuo)},
                      {"ord_T", order_json(row.thom)},
                      {"equal", row.equal}});
    probes.push_back({{"m", m},
                      {"csv", csv},
                      {"arcs", report.rows.size()},
                      {"equal", report.equal_count},
                      {"mismatch", report.mismatch_count},
                      {"rows", rows}});
    s.files.emplace_back(csv, probe_csv(report));
    mismatches += report.mismatch_count;
  }
  s.json["probes"] = probes;
  s.json["csv_columns"] = {{"arcs_m*.csv", "arc_id,ord_K,ord_T,equal; inf marks an infinite order"}};
  if (mismatches > 0) {
    s.exit_code = kInconsistency;
    s.message = std::to_string(mismatches) + " arc(s) with ord K_m != ord T_m";
  }
  return s;
}

void attach(ojson& out, Report& report, Section&& s) {
  for (auto& file : s.files) report.csv_files.push_back(std::move(file));
  if (s.exit_code != kOk && report.exit_code == kOk) {
    report.exit_code = s.exit_code;
    report.message = s.message;
  }
  out = std::move(s.json);
}

ojson ellipticity_json(const EllipticityReport& e, std::span<const Polynomial> generators) {
  ojson gens = ojson::array();
  for (const auto& g : e.generators) {
    ojson j;
    j["index"] = g.index;
    j["generator"] = to_string(generators[g.index]);
    j["skipped"] = g.skipped;
    j["diagnostic"] = g.diagnostic.empty() ? ojson(nullptr) : ojson(g.diagnostic);
    j = estimate_fields(std::move(j), g.estimate);
    j["alpha"] = g.alpha ? ojson(*g.alpha) : ojson(nullptr);
    j["holds"] = g.holds;
    gens.push_back(std::move(j));
  }
  return {{"alpha_max", e.alpha_max}, {"holds", e.holds}, {"generators", gens}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands

Report cmd_analyze(const MapGerm& f, const TaskConfig& config) {
  require_seed(config, "analyze");
  Report report;
  report.json = header("analyze", config);
  attach(report.json["results"], report, analyze_section(f, config));
  return report;
}

Report cmd_arcs(const MapGerm& f, const TaskConfig& config, std::optional<std::span<const Arc>> arcs) {
  Report report;
  report.json = header("arcs", config);
  attach(report.json["results"], report, arcs_section(f, config, arcs));
  return report;
}

Report cmd_relative(const MapGerm& f, const SigmaSet& sigma, const TaskConfig& config) {
  require_seed(config, "relative");
  if (sigma.n() != f.n())
    throw ConfigError("Sigma lives in R^" + std::to_string(sigma.n()) + " but the germ in R^" +
                      std::to_string(f.n()));
  const GermQuantities q(f);
  const SigmaDistance dist(sigma);
  RelativeConfig rc;
  rc.ball = config.relative.ball;
  rc.bands = config.relative.bands;
  rc.samples = config.relative.samples;
  rc.multistart = config.relative.multistart;
  rc.tolerance = config.tolerance;
  rc.seed = *config.seed;

  // Validate the compatibility germ before any scan.
  std::optional<MapGerm> g;
  if (const auto& cc = config.relative.compatibility) {
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < cc->g.size(); ++i) comps.push_back(parse_polynomial(cc->g[i], f.n(), i + 1));
    g = MapGerm(f.n(), std::move(comps));
    const unsigned r = cc->r.value_or(config.r.front());
    if (!jets_equal_on_sigma(f, *g, r, sigma))
      throw PreconditionError("the " + std::to_string(r) + "-jets of f and g differ on Sigma; they are not "
                              "candidates for r-compatibility");
  }

  Report report;
  report.json = header("relative", config);
  ojson& out = report.json["results"];
  out["germ"] = germ_json(f);
  out["sigma"] = {{"text", to_string(sigma)},
                  {"variant", sigma.is_subspaces() ? "subspaces" : "algebraic"},
                  {"distance_method", dist.method()},
                  {"coherence", "assumed, not checked"}};
  ojson notes = ojson::array();
  if (sigma.is_origin())
    notes.push_back("Sigma = {0}: d(x, Sigma) = |x|, so the relative conditions reduce to the non-relative "
                    "inequalities K_m, T_m >= c|x|^(rm)");
  out["notes"] = notes;
  out["shell_distances"] = ojson::array();
  for (double d : shell_distances(rc)) out["shell_distances"].push_back(number(d));

  ScanBook book;
  ojson conditions = ojson::array();
  for (unsigned m : config.m) {
    const auto& ks = book.get(power_name("relative_kuo", m),
                              [&] { return check_relative(q, Quantity::Kuo, 1, m, dist, rc).scan; });
    const auto& ts = book.get(power_name("relative_thom", m),
                              [&] { return check_relative(q, Quantity::Thom, 1, m, dist, rc).scan; });
    for (unsigned r : config.r) {
      const double target = static_cast<double>(r) * m;
      auto k = verdict_from_scan(relative_condition_name(Quantity::Kuo, r, m), ks, target, rc.tolerance);
      auto t = verdict_from_scan(relative_condition_name(Quantity::Thom, r, m), ts, target, rc.tolerance);
      k.caveat = t.caveat = kRelativeCaveat;
      ojson e;
      e["m"] = m;
      e["r"] = r;
      e["kuo"] = verdict_json(k);
      e["thom"] = verdict_json(t);
      e["agree"] = k.holds == t.holds;
      conditions.push_back(std::move(e));
    }
  }
  out["conditions"] = conditions;

  if (g) {
    const auto& cc = *config.relative.compatibility;
    const unsigned r = cc.r.value_or(config.r.front());
    const unsigned m = cc.m.value_or(config.m.front());
    std::vector<Rational> ts;
    for (const auto& t : cc.t) ts.push_back(parse_fraction(t));
    const CompatibilityReport cr = check_compatibility(f, *g, r, m, Quantity::Kuo, dist, ts, rc);
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < cr.rows.size(); ++i) {
      const auto& v = cr.rows[i].result.verdict;
      rows.push_back({{"t", to_string(cr.rows[i].t)},
                      {"condition", v.condition},
                      {"holds", v.holds},
                      {"slope", v.estimate ? number(v.estimate->slope) : ojson(nullptr)},
                      {"diagnostic", v.diagnostic.empty() ? ojson(nullptr) : ojson(v.diagnostic)}});
    }
    ojson comp;
    comp["g"] = germ_json(*g)["components"];
    comp["r"] = r;
    comp["m"] = m;
    comp["jets_equal"] = true;
    comp["rows"] = rows;
    comp["consistent"] = cr.consistent;
    comp["diagnostic"] = cr.consistent ? ojson(nullptr)
                                       : ojson("verdicts differ across t; the scans disagree with "
                                               "r-compatibility, numerical evidence only");
    out["compatibility"] = comp;
  } else {
    out["compatibility"] = nullptr;
  }

  const auto kuo_gens = ideal_generators_kuo(f);
  const auto thom_gens = ideal_generators_thom(f);
  out["ellipticity"] = {
      {"kuo", ellipticity_json(sigma_elliptic_probe(kuo_gens, dist, config.relative.alpha_max, rc), kuo_gens)},
      {"thom", ellipticity_json(sigma_elliptic_probe(thom_gens, dist, config.relative.alpha_max, rc), thom_gens)}};

  book.emit(out["scans"], report.csv_files);
  out["csv_columns"] = {{"scan_*.csv", "radius,min_value; radius is the shell distance d(x, Sigma)"}};
  out["caveats"] = {kRelativeCaveat, "coherence of Sigma is assumed, not checked"};
  return report;
}

Report cmd_example(const TaskConfig& config) {
  TaskConfig c = config;
  if (!c.seed) c.seed = 7;
  const MapGerm f = parse_germ("x - y^2\nx^2\n");
  const GermQuantities q(f);

  Report report;
  report.json = header("example", c);
  ojson& out = report.json["results"];

  const auto compare = [](const Polynomial& computed, const char* expected_text) {
    const Polynomial expected = parse_polynomial(expected_text, 2);
    return ojson{{"computed", to_string(computed)},
                 {"expected", expected_text},
                 {"equal", computed == expected}};
  };
  out["reference"] = {{"K_2", compare(q.kuo_polynomial(2), "16*(x^2 + y^2)*x^2*y^2 + (x - y^2)^2 + x^4")},
                      {"T_2", compare(q.thom_polynomial(2), "(x - y^2)^2 + x^4")}};

  // K_2/T_2 on a polar grid of 100 radii times 100 angles in the ball of
  // radius 0.01.
  constexpr int kRings = 100, kAngles = 100;
  constexpr double kBall = 0.01, kBound = 66;
  double lo = INFINITY, hi = 0;
  std::size_t counted = 0;
  for (int i = 1; i <= kRings; ++i)
    for (int j = 0; j < kAngles; ++j) {
      const double rad = kBall * i / kRings, th = 2 * std::numbers::pi * j / kAngles;
      const double x[2] = {rad * std::cos(th), rad * std::sin(th)};
      const double t = q.thom(2, x);
      if (!(t > 0)) continue;
      const double ratio = q.kuo(2, x) / t;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      ++counted;
    }
  out["ratio_grid"] = {{"m", 2},
                       {"ball", number(kBall)},
                       {"points", kRings * kAngles},
                       {"counted", counted},
                       {"min_ratio", number(lo)},
                       {"max_ratio", number(hi)},
                       {"bound", number(kBound)},
                       {"within", lo >= 1 && hi <= kBound}};

  attach(out["analyze"], report, analyze_section(f, c));
  attach(out["arcs"], report, arcs_section(f, c, std::nullopt));
  return report;
}

std::string render(const Report& report) { return report.json.dump(2) + "\n"; }

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    os << content;
  };
  write("report.json", render(report));
  for (const auto& [name, content] : report.csv_files) write(name, content);
}

}  // namespace kuothom::cli
