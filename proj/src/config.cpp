#include "kcsim/config.hpp"

#include <fstream>
#include <cstdlib>
#include <thread>

#include "kcsim/parallel.hpp"

namespace kcsim {

using nlohmann::json;

std::vector<double> Range::values() const {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  if (n > 1) v.back() = hi;
  return v;
}

Range parse_range(const std::string& s) {
  const auto p1 = s.find(':');
  const auto p2 = p1 == std::string::npos ? p1 : s.find(':', p1 + 1);
  if (p2 == std::string::npos) throw Error(ErrorCode::Config, "range must be lo:hi:n, got '" + s + "'");
  try {
    Range r{std::stod(s.substr(0, p1)), std::stod(s.substr(p1 + 1, p2 - p1 - 1)),
            std::stoi(s.substr(p2 + 1))};
    if (r.n < 1) throw Error(ErrorCode::Config, "range count must be >= 1");
    return r;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::Config, "range must be lo:hi:n, got '" + s + "'");
  }
}

namespace {

json range_json(const Range& r) { return {{"lo", r.lo}, {"hi", r.hi}, {"n", r.n}}; }

Range range_from(const json& j) {
  if (j.is_string()) return parse_range(j.get<std::string>());
  return {j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("n").get<int>()};
}

}  // namespace

int default_workers() {
  if (const char* env = std::getenv("KCSIM_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::Config, std::string("KCSIM_WORKERS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

json to_json(const RunConfig& c) {
  json j;
  j["system"] = c.system;
  if (c.params) {
    j["params"] = {{"k4", c.params->k4}, {"k2", c.params->k2}, {"k1", c.params->k1}, {"mass", c.params->mass}};
  } else {
    j["params"] = nullptr;
  }
  j["c"] = c.c;
  j["c_scan"] = c.c_scan ? range_json(*c.c_scan) : json(nullptr);
  j["dim"] = c.dim;
  j["basis_scale"] = c.basis_scale;
  j["M"] = c.M;
  j["grid"] = {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"n_points", c.grid.n_points}};
  j["kappa"] = c.diss.kappa;
  j["n_th"] = c.diss.n_th;
  j["tau"] = c.tau;
  j["horizon"] = c.horizon;
  j["horizon_factor"] = c.horizon_factor;
  j["max_steps"] = c.max_steps;
  j["records"] = c.records;
  j["burn_in_fraction"] = c.burn_in_fraction;
  j["x_cut"] = c.x_cut;
  j["reactant_side"] = c.reactant_side;
  j["tail"] = c.tail;
  j["engines"] = c.engines;
  j["xp_dissipator"] = c.xp_dissipator;
  j["n_levels"] = c.n_levels;
  j["limits"] = {{"max_eps2_over_K", c.limits.max_eps2_over_K},
                 {"max_eps1_over_K", c.limits.max_eps1_over_K},
                 {"max_abs_delta_over_K", c.limits.max_abs_delta_over_K}};
  j["eps1"] = range_json(c.eps1);
  j["eps2"] = range_json(c.eps2);
  j["sweep_dim"] = c.sweep_dim;
  j["sweep_M"] = c.sweep_M;
  j["sweep_kerr"] = c.sweep_kerr;
  j["sweep_delta"] = c.sweep_delta;
  j["resume"] = c.resume;
  j["table2_systems"] = c.table2_systems;
  j["table2_single"] = c.table2_single;
  j["literature"] = c.literature;
  j["fit_window"] = {{"x_min", c.fit_window.x_min}, {"x_max", c.fit_window.x_max},
                     {"n_points", c.fit_window.n_points}};
  j["output_dir"] = c.output_dir;
  j["workers"] = c.workers;
  return j;
}

RunConfig config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) throw Error(ErrorCode::Config, "config root must be an object");
  const json known = to_json(RunConfig{});
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.contains(it.key())) throw Error(ErrorCode::Config, "unknown config key '" + it.key() + "'");
  }
  std::string key;
  try {
    auto get = [&](const char* k, auto& field) {
      key = k;
      if (j.contains(k) && !j.at(k).is_null()) field = j.at(k).get<std::decay_t<decltype(field)>>();
    };
    get("system", c.system);
    key = "params";
    if (j.contains("params") && !j["params"].is_null()) {
      const json& p = j["params"];
      DoubleWellParams dw;
      dw.k4 = p.at("k4").get<double>();
      dw.k2 = p.at("k2").get<double>();
      dw.k1 = p.value("k1", 0.0);
      dw.mass = p.value("mass", kProtonMass);
      c.params = dw;
    }
    get("c", c.c);
    key = "c_scan";
    if (j.contains("c_scan") && !j["c_scan"].is_null()) c.c_scan = range_from(j["c_scan"]);
    get("dim", c.dim);
    get("basis_scale", c.basis_scale);
    get("M", c.M);
    key = "grid";
    if (j.contains("grid")) {
      c.grid.x_min = j["grid"].value("x_min", c.grid.x_min);
      c.grid.x_max = j["grid"].value("x_max", c.grid.x_max);
      c.grid.n_points = j["grid"].value("n_points", c.grid.n_points);
    }
    get("kappa", c.diss.kappa);
    get("n_th", c.diss.n_th);
    get("tau", c.tau);
    get("horizon", c.horizon);
    get("horizon_factor", c.horizon_factor);
    get("max_steps", c.max_steps);
    get("records", c.records);
    get("burn_in_fraction", c.burn_in_fraction);
    get("x_cut", c.x_cut);
    get("reactant_side", c.reactant_side);
    get("tail", c.tail);
    get("engines", c.engines);
    get("xp_dissipator", c.xp_dissipator);
    get("n_levels", c.n_levels);
    key = "limits";
    if (j.contains("limits")) {
      c.limits.max_eps2_over_K = j["limits"].value("max_eps2_over_K", c.limits.max_eps2_over_K);
      c.limits.max_eps1_over_K = j["limits"].value("max_eps1_over_K", c.limits.max_eps1_over_K);
      c.limits.max_abs_delta_over_K = j["limits"].value("max_abs_delta_over_K", c.limits.max_abs_delta_over_K);
    }
    key = "eps1";
    if (j.contains("eps1")) c.eps1 = range_from(j["eps1"]);
    key = "eps2";
    if (j.contains("eps2")) c.eps2 = range_from(j["eps2"]);
    get("sweep_dim", c.sweep_dim);
    get("sweep_M", c.sweep_M);
    get("sweep_kerr", c.sweep_kerr);
    get("sweep_delta", c.sweep_delta);
    get("resume", c.resume);
    get("table2_systems", c.table2_systems);
    get("table2_single", c.table2_single);
    get("literature", c.literature);
    key = "fit_window";
    if (j.contains("fit_window")) {
      c.fit_window.x_min = j["fit_window"].value("x_min", c.fit_window.x_min);
      c.fit_window.x_max = j["fit_window"].value("x_max", c.fit_window.x_max);
      c.fit_window.n_points = j["fit_window"].value("n_points", c.fit_window.n_points);
    }
    get("output_dir", c.output_dir);
    get("workers", c.workers);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, "bad value for '" + key + "': " + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, "cannot parse '" + path + "': " + e.what());
  }
  return config_from_json(j, std::move(base));
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::Config, m); };
  if (!c.params) {
    try {
      find_system(c.system);
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  if (!(c.c > 0.0)) fail("c must be positive");
  if (c.dim < 2) fail("dim must be >= 2");
  if (c.M < 1 || c.M > c.dim) fail("M must lie in [1, dim]");
  if (c.grid.n_points < 2 || !(c.grid.x_max > c.grid.x_min)) fail("grid needs n_points >= 2 and x_max > x_min");
  if (!(c.diss.kappa >= 0.0) || !(c.diss.n_th >= 0.0)) fail("kappa and n_th must be non-negative");
  if (!(c.tau > 0.0)) fail("tau must be positive");
  if (!(c.horizon_factor > 0.0)) fail("horizon_factor must be positive");
  if (c.max_steps < 1) fail("max_steps must be >= 1");
  if (c.records < 2) fail("records must be >= 2");
  if (!(c.burn_in_fraction >= 0.0 && c.burn_in_fraction < 1.0)) fail("burn_in_fraction must be in [0, 1)");
  if (c.reactant_side != "auto" && c.reactant_side != "left" && c.reactant_side != "right") {
    fail("reactant_side must be auto, left or right");
  }
  if (!(c.tail > 0.0)) fail("tail must be positive");
  if (c.engines.empty()) fail("engines must not be empty");
  for (const auto& e : c.engines) {
    if (e != "dw" && e != "kc") fail("engine must be dw or kc, got '" + e + "'");
  }
  if (c.c_scan) {
    if (!(c.c_scan->lo > 0.0) || (c.c_scan->n > 1 && !(c.c_scan->hi > c.c_scan->lo))) {
      fail("c_scan must be positive and increasing");
    }
  }
  if (!(c.limits.max_eps2_over_K > 0.0) || !(c.limits.max_eps1_over_K > 0.0) ||
      !(c.limits.max_abs_delta_over_K > 0.0)) {
    fail("device limits must be positive");
  }
  if (c.eps1.n < 1 || c.eps2.n < 1) fail("sweep ranges need n >= 1");
  if (c.sweep_dim < 2 || c.sweep_M < 1 || c.sweep_M > c.sweep_dim) fail("sweep_M must lie in [1, sweep_dim]");
  if (!(c.sweep_kerr > 0.0)) fail("sweep_kerr must be positive");
  for (const auto& s : c.table2_systems) {
    try {
      find_system(s);
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  if (c.fit_window.n_points < 4 || !(c.fit_window.x_max > c.fit_window.x_min)) fail("bad fit_window");
}

DoubleWellParams resolve_params(const RunConfig& cfg) {
  return cfg.params ? *cfg.params : find_system(cfg.system).params;
}

ChemRunConfig to_chem_config(const RunConfig& c) {
  ChemRunConfig r;
  r.dw = resolve_params(c);
  r.c = c.c;
  r.dim = c.dim;
  r.basis_scale = c.basis_scale;
  r.M = c.M;
  r.diss = c.diss;
  r.grid = c.grid;
  r.initial.tail = c.tail;
  if (c.reactant_side != "auto") r.initial.reactant_side = parse_side(c.reactant_side);
  r.x_cut = c.x_cut;
  r.xp_dissipator = c.xp_dissipator;
  r.tau = c.tau;
  r.horizon = c.horizon;
  r.horizon_factor = c.horizon_factor;
  r.max_steps = c.max_steps;
  r.records = c.records;
  r.burn_in_fraction = c.burn_in_fraction;
  return r;
}

DeviceSweepOptions to_sweep_options(const RunConfig& c) {
  DeviceSweepOptions o;
  o.dim = c.sweep_dim;
  o.M = c.sweep_M;
  o.kerr = c.sweep_kerr;
  o.delta = c.sweep_delta;
  o.diss = c.diss;
  o.workers = resolve_workers(c);
  return o;
}

int resolve_workers(const RunConfig& c) { return c.workers > 0 ? c.workers : default_workers(); }

}  // namespace kcsim
