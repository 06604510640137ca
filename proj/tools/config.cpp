#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "pdrelax/errors.hpp"
#include "pdrelax/provenance.hpp"

namespace pdrelax::cli {

namespace {

void only_keys(const json& node, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!node.is_object()) throw ConfigError(where + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = node.begin(); it != node.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

const char* unit_label(Dim d) {
  switch (d) {
    case Dim::One: return "1";
    case Dim::Stress: return "Pa";
    case Dim::Angle: return "deg";
  }
  return "1";
}

double unit_factor(Dim d, const std::string& unit, const std::string& key) {
  static const std::map<std::string, double> stress{{"Pa", 1.0}, {"kPa", 1e3}, {"MPa", 1e6}, {"GPa", 1e9}};
  if (d == Dim::Stress) {
    auto it = stress.find(unit);
    if (it != stress.end()) return it->second;
  } else if (unit == unit_label(d)) {
    return 1.0;
  }
  throw ConfigError("'" + key + "' has unit '" + unit + "', expected " + (d == Dim::Stress ? "a stress unit" : std::string("'") + unit_label(d) + "'"));
}

template <class T>
T plain(const json& node, const std::string& key, T fallback) {
  if (!node.contains(key)) return fallback;
  try {
    return node.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + key + "' has the wrong type");
  }
}

double positive(double x, const std::string& key) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("'" + key + "' must be positive");
  return x;
}

SymTensor tensor_quantity(const json& node, const std::string& key) {
  if (!node.contains(key)) throw ConfigError("missing '" + key + "'");
  const json& q = node.at(key);
  only_keys(q, key, {"value", "unit"});
  if (!q.contains("unit") || q.at("unit") != "1") throw ConfigError("'" + key + "' must carry unit '1'");
  if (!q.contains("value") || !q.at("value").is_array() || q.at("value").size() != 6)
    throw ConfigError("'" + key + "' needs six components xx, yy, zz, yz, xz, xy");
  SymTensor t;
  for (int i = 0; i < 6; ++i) {
    if (!q.at("value")[i].is_number()) throw ConfigError("'" + key + "' has a non-numeric component");
    t[i] = q.at("value")[i].get<double>();
  }
  return t;
}

json tensor_json(const SymTensor& t) { return {{"value", std::vector<double>(t.c.begin(), t.c.end())}, {"unit", "1"}}; }

const char* to_key(EnergyKind k) { return k == EnergyKind::Condensed ? "condensed" : "relaxed"; }

EnergyKind energy_kind(const std::string& s) {
  if (s == "condensed") return EnergyKind::Condensed;
  if (s == "relaxed") return EnergyKind::Relaxed;
  throw ConfigError("energy must be 'condensed' or 'relaxed', got '" + s + "'");
}

// --- envelope --------------------------------------------------------------

EnvelopeCheckConfig parse_envelope(const json& j, json& canon) {
  only_keys(j, "envelope config", {"b", "y_min", "y_max", "r", "margin", "nodes", "tolerance_constant", "recalibrate"});
  EnvelopeCheckConfig c;
  c.b = positive(quantity_or(j, "b", Dim::One, c.b), "b");
  c.y_min = quantity_or(j, "y_min", Dim::One, c.y_min);
  c.y_max = quantity_or(j, "y_max", Dim::One, c.y_max);
  if (j.contains("r")) {
    const json& r = j.at("r");
    only_keys(r, "r", {"kind", "y0", "peak", "level"});
    c.r.kind = plain<std::string>(r, "kind", c.r.kind);
    c.r.y0 = quantity_or(r, "y0", Dim::One, c.r.y0);
    c.r.peak = quantity_or(r, "peak", Dim::One, c.r.peak);
    c.r.level = quantity_or(r, "level", Dim::One, c.r.level);
  }
  c.margin = quantity_or(j, "margin", Dim::One, c.margin);
  c.nodes = plain<int>(j, "nodes", c.nodes);
  c.tolerance_constant = positive(quantity_or(j, "tolerance_constant", Dim::One, c.tolerance_constant), "tolerance_constant");
  c.recalibrate = plain<bool>(j, "recalibrate", c.recalibrate);
  if (c.nodes < 5 || c.nodes > 2001) throw ConfigError("'nodes' must lie in [5, 2001]");
  if (c.margin < 0) throw ConfigError("'margin' must be non-negative");
  canon = {{"b", make_quantity(c.b, Dim::One)},
           {"y_min", make_quantity(c.y_min, Dim::One)},
           {"y_max", make_quantity(c.y_max, Dim::One)},
           {"r",
            {{"kind", c.r.kind},
             {"y0", make_quantity(c.r.y0, Dim::One)},
             {"peak", make_quantity(c.r.peak, Dim::One)},
             {"level", make_quantity(c.r.level, Dim::One)}}},
           {"margin", make_quantity(c.margin, Dim::One)},
           {"nodes", c.nodes},
           {"tolerance_constant", make_quantity(c.tolerance_constant, Dim::One)},
           {"recalibrate", c.recalibrate}};
  return c;
}

// --- fem1d -----------------------------------------------------------------

Fem1DConfig parse_fem1d(const json& j, json& canon) {
  only_keys(j, "fem1d config", {"n", "length", "u_ext", "b", "alpha", "fit", "y1_scale", "y2_scale", "max_iter",
                                "cases", "seeds", "energies", "equal_tol", "gap_max", "cluster_radius"});
  Fem1DConfig c;
  Experiment1D& e = c.base;
  e.n = plain<int>(j, "n", e.n);
  e.L = quantity_or(j, "length", Dim::One, e.L);
  e.u_ext = quantity_or(j, "u_ext", Dim::One, e.u_ext);
  e.b = quantity_or(j, "b", Dim::One, e.b);
  e.alpha = quantity_or(j, "alpha", Dim::One, e.alpha);
  if (j.contains("fit")) {
    const json& f = j.at("fit");
    only_keys(f, "fit", {"y_min", "y_max", "y0", "r_max"});
    e.fit.y_min = quantity_or(f, "y_min", Dim::One, e.fit.y_min);
    e.fit.y_max = quantity_or(f, "y_max", Dim::One, e.fit.y_max);
    e.fit.y0 = quantity_or(f, "y0", Dim::One, e.fit.y0);
    e.fit.r_max = quantity_or(f, "r_max", Dim::One, e.fit.r_max);
  }
  e.y1_scale = quantity_or(j, "y1_scale", Dim::One, e.y1_scale);
  e.y2_scale = quantity_or(j, "y2_scale", Dim::One, e.y2_scale);
  e.max_iter = plain<int>(j, "max_iter", e.max_iter);
  if (j.contains("cases")) {
    if (!j.at("cases").is_array() || j.at("cases").empty()) throw ConfigError("'cases' must be a non-empty array");
    c.cases.clear();
    for (const json& k : j.at("cases")) {
      only_keys(k, "case", {"name", "v_ext"});
      c.cases.push_back({plain<std::string>(k, "name", "case" + std::to_string(c.cases.size())),
                         quantity(k, "v_ext", Dim::One)});
    }
  }
  c.seeds = plain<std::vector<std::uint64_t>>(j, "seeds", c.seeds);
  if (c.seeds.empty()) throw ConfigError("'seeds' must not be empty");
  if (j.contains("energies")) {
    c.energies.clear();
    for (const auto& s : plain<std::vector<std::string>>(j, "energies", {})) c.energies.push_back(energy_kind(s));
    if (c.energies.empty()) throw ConfigError("'energies' must not be empty");
  }
  c.equal_tol = positive(plain<double>(j, "equal_tol", c.equal_tol), "equal_tol");
  c.gap_max = positive(quantity_or(j, "gap_max", Dim::One, c.gap_max), "gap_max");
  c.cluster_radius = positive(quantity_or(j, "cluster_radius", Dim::One, c.cluster_radius), "cluster_radius");
  for (const auto& k : c.cases) {
    Experiment1D probe = e;
    probe.v_ext = k.v_ext;
    probe.validate();
  }
  json cases = json::array();
  for (const auto& k : c.cases) cases.push_back({{"name", k.name}, {"v_ext", make_quantity(k.v_ext, Dim::One)}});
  json energies = json::array();
  for (auto k : c.energies) energies.push_back(to_key(k));
  canon = {{"n", e.n},
           {"length", make_quantity(e.L, Dim::One)},
           {"u_ext", make_quantity(e.u_ext, Dim::One)},
           {"b", make_quantity(e.b, Dim::One)},
           {"alpha", make_quantity(e.alpha, Dim::One)},
           {"fit",
            {{"y_min", make_quantity(e.fit.y_min, Dim::One)},
             {"y_max", make_quantity(e.fit.y_max, Dim::One)},
             {"y0", make_quantity(e.fit.y0, Dim::One)},
             {"r_max", make_quantity(e.fit.r_max, Dim::One)}}},
           {"y1_scale", make_quantity(e.y1_scale, Dim::One)},
           {"y2_scale", make_quantity(e.y2_scale, Dim::One)},
           {"max_iter", e.max_iter},
           {"cases", cases},
           {"seeds", c.seeds},
           {"energies", energies},
           {"equal_tol", c.equal_tol},
           {"gap_max", make_quantity(c.gap_max, Dim::One)},
           {"cluster_radius", make_quantity(c.cluster_radius, Dim::One)}};
  return c;
}

// --- point3d ---------------------------------------------------------------

std::vector<StrainPath> default_paths(const RelaxedMaterial& rm) {
  const double ts = rm.trace_scale();
  auto at = [&](double y1, double y2) {
    SymTensor n{{1.0, -1.0, 0, 0, 0, 0}};
    n = (1.0 / n.norm()) * n;
    return (y1 / ts / 3.0) * SymTensor::identity() + y2 * n;
  };
  EnvelopeParams p = rm.envelope();
  return {
      {"hydrostatic", at(p.y_min - 0.02, 0.0), at(p.y_max + 0.02, 0.0), 400},
      // fixed trace between the support ends, deviator grown through Y1, Y2, Y3 and Y4
      {"deviatoric", at(-0.045, 0.0), at(-0.045, 1.5 * p.y2_star()), 400},
      // oblique path that also leaves the support
      {"oblique", at(p.y_min - 0.01, 0.01), at(p.y_max + 0.01, 1.4 * p.y2_star()), 400},
  };
}

PointProbeConfig parse_point3d(const json& j, json& canon) {
  only_keys(j, "point3d config", {"K", "mu", "b", "y_min", "y_max", "paths", "fd_tol", "jump_tol"});
  PointProbeConfig c;
  c.K = positive(quantity_or(j, "K", Dim::Stress, c.K), "K");
  c.mu = positive(quantity_or(j, "mu", Dim::Stress, c.mu), "mu");
  c.b = positive(quantity_or(j, "b", Dim::One, c.b), "b");
  c.y_min = quantity_or(j, "y_min", Dim::One, c.y_min);
  c.y_max = quantity_or(j, "y_max", Dim::One, c.y_max);
  c.fd_tol = positive(plain<double>(j, "fd_tol", c.fd_tol), "fd_tol");
  c.jump_tol = positive(plain<double>(j, "jump_tol", c.jump_tol), "jump_tol");
  auto rm = RelaxedMaterial::from_envelope(c.K, c.mu, EnvelopeParams(c.b, c.y_min, c.y_max));
  if (j.contains("paths")) {
    if (!j.at("paths").is_array() || j.at("paths").empty()) throw ConfigError("'paths' must be a non-empty array");
    for (const json& q : j.at("paths")) {
      only_keys(q, "path", {"name", "from", "to", "steps"});
      StrainPath sp;
      sp.name = plain<std::string>(q, "name", "path" + std::to_string(c.paths.size()));
      sp.from = tensor_quantity(q, "from");
      sp.to = tensor_quantity(q, "to");
      sp.steps = plain<int>(q, "steps", sp.steps);
      c.paths.push_back(sp);
    }
  } else {
    c.paths = default_paths(rm);
  }
  std::set<std::string> names;
  json paths = json::array();
  for (const auto& sp : c.paths) {
    if (sp.steps < 2 || sp.steps > 1000000) throw ConfigError("path '" + sp.name + "' needs 2..1e6 steps");
    if (!names.insert(sp.name).second) throw ConfigError("duplicate path name '" + sp.name + "'");
    for (char ch : sp.name)
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-')
        throw ConfigError("path name '" + sp.name + "' may only use letters, digits, '_' and '-'");
    paths.push_back({{"name", sp.name}, {"from", tensor_json(sp.from)}, {"to", tensor_json(sp.to)}, {"steps", sp.steps}});
  }
  canon = {{"K", make_quantity(c.K, Dim::Stress)},
           {"mu", make_quantity(c.mu, Dim::Stress)},
           {"b", make_quantity(c.b, Dim::One)},
           {"y_min", make_quantity(c.y_min, Dim::One)},
           {"y_max", make_quantity(c.y_max, Dim::One)},
           {"paths", paths},
           {"fd_tol", c.fd_tol},
           {"jump_tol", c.jump_tol}};
  return c;
}

// --- plate -----------------------------------------------------------------

PlateConfig parse_plate(const json& j, json& canon, const std::string& config_dir) {
  only_keys(j, "plate config", {"K", "mu", "b", "y_min", "y_max", "y0", "r_max", "hole_radius", "grading", "levels", "mesh_file",
                                "steps", "u_final", "max_newton", "max_halvings", "monitors", "energy", "tolerance",
                                "vtk"});
  PlateConfig c;
  c.K = positive(quantity_or(j, "K", Dim::Stress, c.K), "K");
  c.mu = positive(quantity_or(j, "mu", Dim::Stress, c.mu), "mu");
  c.b = positive(quantity_or(j, "b", Dim::One, c.b), "b");
  c.y_min = quantity_or(j, "y_min", Dim::One, c.y_min);
  c.y_max = quantity_or(j, "y_max", Dim::One, c.y_max);
  c.y0 = quantity_or(j, "y0", Dim::One, c.y0);
  c.r_max = positive(quantity_or(j, "r_max", Dim::One, c.r_max), "r_max");
  c.hole_radius = positive(quantity_or(j, "hole_radius", Dim::One, c.hole_radius), "hole_radius");
  c.grading = positive(quantity_or(j, "grading", Dim::One, c.grading), "grading");
  c.levels = plain<std::vector<int>>(j, "levels", c.levels);
  if (c.levels.empty()) throw ConfigError("'levels' must not be empty");
  for (int l : c.levels)
    if (l < 0 || l > 5) throw ConfigError("refinement levels must lie in [0, 5]");
  c.mesh_file = plain<std::string>(j, "mesh_file", "");
  if (!c.mesh_file.empty()) {
    std::filesystem::path mp(c.mesh_file);
    if (mp.is_relative()) mp = std::filesystem::path(config_dir) / mp;
    if (!std::filesystem::exists(mp)) throw ConfigError("mesh file '" + mp.string() + "' does not exist");
    c.mesh_file = mp.lexically_normal().string();
  }
  LoadProgram& lp = c.program;
  lp.n_steps = plain<int>(j, "steps", lp.n_steps);
  lp.u_final = quantity_or(j, "u_final", Dim::One, lp.u_final);
  lp.max_newton = plain<int>(j, "max_newton", lp.max_newton);
  lp.max_halvings = plain<int>(j, "max_halvings", lp.max_halvings);
  if (j.contains("monitors")) {
    if (!j.at("monitors").is_array() || j.at("monitors").empty()) throw ConfigError("'monitors' must be a non-empty array");
    lp.monitors.clear();
    for (const json& m : j.at("monitors")) {
      only_keys(m, "monitor", {"center", "r_in", "r_out", "theta_lo", "theta_hi"});
      MonitorPatch mp;
      if (m.contains("center")) {
        const json& q = m.at("center");
        if (!q.is_object() || q.value("unit", "") != "1" || !q.contains("value") || !q.at("value").is_array() ||
            q.at("value").size() != 2)
          throw ConfigError("monitor 'center' must be {\"value\": [x, y], \"unit\": \"1\"}");
        mp.center = {q.at("value")[0].get<double>(), q.at("value")[1].get<double>()};
      }
      mp.r_in = quantity_or(m, "r_in", Dim::One, mp.r_in);
      mp.r_out = quantity_or(m, "r_out", Dim::One, mp.r_out);
      mp.theta_lo = quantity_or(m, "theta_lo", Dim::Angle, mp.theta_lo);
      mp.theta_hi = quantity_or(m, "theta_hi", Dim::Angle, mp.theta_hi);
      lp.monitors.push_back(mp);
    }
  }
  lp.validate();
  std::string energy = plain<std::string>(j, "energy", "relaxed");
  c.energy = energy_kind(energy) == EnergyKind::Condensed ? PlateEnergy::Condensed : PlateEnergy::Relaxed;
  c.tolerance = positive(quantity_or(j, "tolerance", Dim::One, c.tolerance), "tolerance");
  c.vtk = plain<bool>(j, "vtk", c.vtk);
  json monitors = json::array();
  for (const auto& m : lp.monitors)
    monitors.push_back({{"center", {{"value", {m.center[0], m.center[1]}}, {"unit", "1"}}},
                        {"r_in", make_quantity(m.r_in, Dim::One)},
                        {"r_out", make_quantity(m.r_out, Dim::One)},
                        {"theta_lo", make_quantity(m.theta_lo, Dim::Angle)},
                        {"theta_hi", make_quantity(m.theta_hi, Dim::Angle)}});
  canon = {{"K", make_quantity(c.K, Dim::Stress)},
           {"mu", make_quantity(c.mu, Dim::Stress)},
           {"b", make_quantity(c.b, Dim::One)},
           {"y_min", make_quantity(c.y_min, Dim::One)},
           {"y_max", make_quantity(c.y_max, Dim::One)},
           {"y0", make_quantity(c.y0, Dim::One)},
           {"r_max", make_quantity(c.r_max, Dim::One)},
           {"hole_radius", make_quantity(c.hole_radius, Dim::One)},
           {"grading", make_quantity(c.grading, Dim::One)},
           {"levels", c.levels},
           {"mesh_file", c.mesh_file},
           {"steps", lp.n_steps},
           {"u_final", make_quantity(lp.u_final, Dim::One)},
           {"max_newton", lp.max_newton},
           {"max_halvings", lp.max_halvings},
           {"monitors", monitors},
           {"energy", energy},
           {"tolerance", make_quantity(c.tolerance, Dim::One)},
           {"vtk", c.vtk}};
  return c;
}

}  // namespace

double quantity(const json& node, const std::string& key, Dim dim) {
  if (!node.contains(key)) throw ConfigError("missing '" + key + "'");
  const json& q = node.at(key);
  if (!q.is_object() || !q.contains("value") || !q.contains("unit"))
    throw ConfigError("'" + key + "' must be {\"value\": <number>, \"unit\": \"...\"}");
  only_keys(q, key, {"value", "unit"});
  if (!q.at("value").is_number() || !q.at("unit").is_string())
    throw ConfigError("'" + key + "' needs a numeric value and a unit string");
  double v = q.at("value").get<double>() * unit_factor(dim, q.at("unit").get<std::string>(), key);
  if (!std::isfinite(v)) throw ConfigError("'" + key + "' is not finite");
  return v;
}

double quantity_or(const json& node, const std::string& key, Dim dim, double fallback) {
  return node.contains(key) ? quantity(node, key, dim) : fallback;
}

json make_quantity(double value, Dim dim) { return {{"value", value}, {"unit", unit_label(dim)}}; }

DissipationFunction YieldSpec::build(const EnvelopeParams& p) const {
  if (kind == "quadratic") return DissipationFunction::quadratic(p.y_min, p.y_max, y0, peak);
  if (kind == "reference") return DissipationFunction::reference(p);
  if (kind == "triangle") return DissipationFunction::triangle(p.y_min, p.y_max, peak);
  if (kind == "constant_cap") return DissipationFunction::constant_cap(p.y_min, p.y_max, level);
  throw ConfigError("unknown yield function kind '" + kind + "'");
}

std::string RunConfig::provenance() const { return provenance_line(canonical.dump(), seed); }

RunConfig load_config(const std::string& command, const json& raw, const std::string& out_dir, const Overrides& over,
                      const std::string& config_dir) {
  json body = raw;
  if (body.is_null()) body = json::object();
  if (!body.is_object()) throw ConfigError("config must be a JSON object");
  // the command name and seed may sit at the top level next to the body
  if (body.contains("command")) {
    if (body.at("command") != command)
      throw ConfigError("config is for '" + body.at("command").get<std::string>() + "', not '" + command + "'");
    body.erase("command");
  }
  RunConfig rc;
  rc.command = command;
  rc.out_dir = out_dir;
  rc.seed = plain<std::uint64_t>(body, "seed", 0);
  body.erase("seed");

  if (over.energy && command != "fem1d" && command != "plate")
    throw ConfigError("--energy applies to fem1d and plate only");

  json canon;
  if (command == "envelope") {
    EnvelopeCheckConfig c = parse_envelope(body, canon);
    if (over.refine) {
      if (*over.refine < 0 || *over.refine > 5) throw ConfigError("--refine must lie in [0, 5]");
      c.nodes = 50 * (1 << *over.refine) + 1;
      canon["nodes"] = c.nodes;
    }
    c.r.build(EnvelopeParams(c.b, c.y_min, c.y_max));  // validates the kind early
    rc.body = c;
  } else if (command == "fem1d") {
    Fem1DConfig c = parse_fem1d(body, canon);
    if (over.seed) {
      c.seeds = {*over.seed};
      canon["seeds"] = c.seeds;
    }
    if (over.refine) {
      if (*over.refine < 0 || *over.refine > 4) throw ConfigError("--refine must lie in [0, 4]");
      c.base.n <<= *over.refine;
      canon["n"] = c.base.n;
    }
    if (over.energy) {
      c.energies = {energy_kind(*over.energy)};
      canon["energies"] = {*over.energy};
    }
    rc.seed = c.seeds.front();
    rc.body = c;
  } else if (command == "point3d") {
    PointProbeConfig c = parse_point3d(body, canon);
    if (over.refine) {
      if (*over.refine < 0 || *over.refine > 6) throw ConfigError("--refine must lie in [0, 6]");
      for (size_t k = 0; k < c.paths.size(); ++k) {
        c.paths[k].steps <<= *over.refine;
        canon["paths"][k]["steps"] = c.paths[k].steps;
      }
    }
    rc.body = c;
  } else if (command == "plate") {
    PlateConfig c = parse_plate(body, canon, config_dir);
    if (over.refine) {
      if (*over.refine < 0 || *over.refine > 4) throw ConfigError("--refine must lie in [0, 4]");
      c.levels = {*over.refine, *over.refine + 1};
      canon["levels"] = c.levels;
    }
    if (over.energy) {
      c.energy = energy_kind(*over.energy) == EnergyKind::Condensed ? PlateEnergy::Condensed : PlateEnergy::Relaxed;
      canon["energy"] = *over.energy;
    }
    rc.body = c;
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  if (over.seed && command != "fem1d") rc.seed = *over.seed;
  canon["command"] = command;
  canon["seed"] = rc.seed;
  rc.canonical = canon;
  return rc;
}

}  // namespace pdrelax::cli
