// kcsim command-line front end: spectra, dynamics, sweep, table2, fit-potential.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "kcsim/chem.hpp"
#include "kcsim/config.hpp"
#include "kcsim/csv.hpp"
#include "kcsim/mapping.hpp"
#include "kcsim/observables.hpp"
#include "kcsim/pipeline.hpp"
#include "kcsim/spectra.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kcsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitMismatch = 4;

// Flags are parsed into `flags`; only those given on the command line are
// copied over the config file values afterwards.
struct Overrides {
  RunConfig flags;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> items;

  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, T RunConfig::*field, const std::string& desc) {
    CLI::Option* opt = app->add_option(name, flags.*field, desc);
    items.emplace_back(opt, [this, field](RunConfig& c) { c.*field = flags.*field; });
    return opt;
  }

  CLI::Option* add_flag(CLI::App* app, const std::string& name, bool RunConfig::*field, const std::string& desc) {
    CLI::Option* opt = app->add_flag(name, flags.*field, desc);
    items.emplace_back(opt, [this, field](RunConfig& c) { c.*field = flags.*field; });
    return opt;
  }

  void custom(CLI::Option* opt, std::function<void(RunConfig&)> apply) {
    items.emplace_back(opt, std::move(apply));
  }

  void apply(RunConfig& c) const {
    for (const auto& [opt, fn] : items) {
      if (opt->count() > 0) fn(c);
    }
  }
};

struct Globals {
  std::string config_path;
  std::string range_c, range_eps1, range_eps2;
  std::string params_text;
  double kappa = 0.0, n_th = 0.0;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Config, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

fs::path prepare_output(const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Config, "cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

std::string c_tag(double c) {
  std::ostringstream os;
  os << "c" << format_number(c);
  return os.str();
}

int n_levels_for(const RunConfig& cfg) {
  if (cfg.n_levels > 0) return cfg.n_levels;
  if (cfg.params) return 6;
  return find_system(cfg.system).expected_states_below_barrier;
}

int cmd_spectra(const RunConfig& cfg) {
  const fs::path dir = prepare_output(cfg);
  const DoubleWellParams dw = resolve_params(cfg);
  const int n_levels = n_levels_for(cfg);
  const double scale = cfg.basis_scale > 0.0 ? cfg.basis_scale : suggested_basis_scale(dw);

  const FockOperatorSet ops = make_fock_operators(cfg.dim, scale);
  const CMatrix H_dw = build_double_well_hamiltonian(dw, ops);
  const EigenSystem eig_dw = eigendecompose(H_dw, &ops.x);
  const CMatrix H_kc = -build_kerr_cat_hamiltonian(chem_to_device(dw, cfg.c), mapped_annihilator(ops, cfg.c));
  const EigenSystem eig_kc = eigendecompose(H_kc, &ops.x);
  const WellGeometry geo = analyze_well(dw);
  const int below = count_states_below_barrier(eig_dw, dw);
  const std::vector<double> dev = compare_spectra(eig_kc.values, eig_dw.values, n_levels);

  CsvTable levels{csv_schema::levels(), {}};
  for (int i = 0; i < n_levels; ++i) {
    levels.rows.push_back({std::to_string(i), format_number(eig_dw.values[i]), format_number(eig_kc.values[i]),
                           format_number(dev[i]), eig_dw.values[i] < geo.v_ridge ? "1" : "0"});
  }
  write_csv((dir / "levels.csv").string(), levels);

  std::vector<double> cs = cfg.c_scan ? cfg.c_scan->values() : std::vector<double>{cfg.c};
  CScanOptions so;
  so.dim = cfg.dim;
  so.basis_scale = scale;
  const CScanReport report = c_feasibility_scan(dw, cs, n_levels, cfg.limits, so);
  CsvTable scan{csv_schema::cscan(), {}};
  json points = json::array();
  for (const auto& pt : report.points) {
    for (int i = 0; i < n_levels; ++i) {
      scan.rows.push_back({format_number(pt.c), std::to_string(i), format_number(pt.deviations[i]),
                           format_number(pt.eps2_over_K), format_number(pt.eps1_over_K),
                           format_number(pt.delta_over_K), format_number(pt.inequality),
                           pt.chemically_accurate ? "1" : "0", pt.device_feasible ? "1" : "0"});
    }
    points.push_back({{"c", pt.c},
                      {"max_abs_dE", *std::max_element(pt.deviations.begin(), pt.deviations.end())},
                      {"eps2_over_K", pt.eps2_over_K},
                      {"eps1_over_K", pt.eps1_over_K},
                      {"delta_over_K", pt.delta_over_K},
                      {"inequality", pt.inequality},
                      {"chemically_accurate", pt.chemically_accurate},
                      {"device_feasible", pt.device_feasible}});
  }
  write_csv((dir / "cscan.csv").string(), scan);

  const KerrCatParams kc = chem_to_device(dw, cfg.c);
  json summary{{"config", to_json(cfg)},
               {"basis_scale", scale},
               {"states_below_barrier", below},
               {"n_levels", n_levels},
               {"max_abs_dE", *std::max_element(dev.begin(), dev.end())},
               {"chemically_accurate", std::all_of(dev.begin(), dev.end(), [](double d) { return d < kChemicalAccuracy; })},
               {"kerr_cat", {{"delta", kc.delta}, {"kerr", kc.kerr}, {"eps1", kc.eps1}, {"eps2", kc.eps2}}},
               {"well", {{"left_min", geo.left_min}, {"ridge", geo.ridge}, {"right_min", geo.right_min},
                         {"v_left", geo.v_left}, {"v_ridge", geo.v_ridge}, {"v_right", geo.v_right}}},
               {"scan", points}};
  write_json(dir / "spectra.json", summary);
  std::cout << "states below barrier: " << below << "\nmax |dE| over " << n_levels
            << " levels at c=" << cfg.c << ": " << format_number(summary["max_abs_dE"].get<double>()) << " Eh\n";
  return kExitOk;
}

json rate_json(const ChemRunResult& r) {
  json j{{"engine", to_string(r.engine)},
         {"basis_scale", r.basis_scale},
         {"spectral_T", r.spectral.T},
         {"spectral_eigenvalue", {r.spectral.eigenvalue.real(), r.spectral.eigenvalue.imag()}},
         {"initial_state", {{"source_index", r.initial.source_index},
                            {"reactant_side", to_string(r.initial.reactant_side)},
                            {"cutoff", r.initial.cutoff},
                            {"prob_before", r.initial.prob_before},
                            {"prob_after", r.initial.prob_after}}},
         {"product_side", to_string(r.product_side)},
         {"horizon", r.horizon},
         {"n_steps", r.n_steps},
         {"stride", r.stride}};
  if (r.fit) {
    j["fit"] = {{"T", r.fit->T}, {"sigma", r.fit->sigma}, {"amplitude", r.fit->amplitude},
                {"offset", r.fit->offset}, {"residual_norm", r.fit->residual_norm},
                {"well_conditioned", r.fit->well_conditioned}};
  } else {
    j["fit"] = nullptr;
    j["fit_error"] = r.fit_error;
  }
  return j;
}

int cmd_dynamics(const RunConfig& cfg) {
  const fs::path dir = prepare_output(cfg);
  const std::vector<double> cs = cfg.c_scan ? cfg.c_scan->values() : std::vector<double>{cfg.c};
  struct Job {
    double c;
    Engine engine;
    std::optional<ChemRunResult> result;
    std::string error;
  };
  std::vector<Job> jobs;
  for (double c : cs) {
    for (const auto& e : cfg.engines) jobs.push_back({c, parse_engine(e), std::nullopt, ""});
  }
  parallel_for(jobs.size(), resolve_workers(cfg), [&](std::size_t i) {
    RunConfig local = cfg;
    local.c = jobs[i].c;
    try {
      jobs[i].result = run_chemical(to_chem_config(local), jobs[i].engine);
    } catch (const std::exception& e) {
      jobs[i].error = e.what();
    }
  });

  bool failed = false;
  json runs = json::array();
  for (const auto& job : jobs) {
    json entry{{"c", job.c}, {"engine", to_string(job.engine)}};
    if (!job.result) {
      failed = true;
      entry["error"] = job.error;
      std::cerr << "error (" << to_string(job.engine) << ", c=" << job.c << "): " << job.error << '\n';
      runs.push_back(entry);
      continue;
    }
    const ChemRunResult& r = *job.result;
    const std::string name = std::string("trajectory_") + to_string(job.engine) + "_" + c_tag(job.c) + ".csv";
    CsvTable t{csv_schema::trajectory(), {}};
    for (const auto& row : r.rows) {
      t.rows.push_back({format_number(row.t), format_number(row.p_left), format_number(row.p_right),
                        format_number(row.overlap), format_number(row.trace)});
    }
    write_csv((dir / name).string(), t);
    entry.update(rate_json(r));
    entry["trajectory_csv"] = name;
    runs.push_back(entry);
    std::cout << to_string(job.engine) << " c=" << job.c << ": spectral T_X = " << format_number(r.spectral.T);
    if (r.fit) {
      std::cout << ", fitted T_X = " << format_number(r.fit->T) << " +- " << format_number(r.fit->sigma) << '\n';
    } else {
      failed = true;
      std::cout << ", fit failed: " << r.fit_error << '\n';
    }
  }
  write_json(dir / "rates.json", {{"config", to_json(cfg)}, {"runs", runs}});
  return failed ? kExitNumerical : kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
  const fs::path dir = prepare_output(cfg);
  const fs::path path = dir / "heatmap.csv";
  const std::vector<double> e1 = cfg.eps1.values();
  const std::vector<double> e2 = cfg.eps2.values();
  struct Cell {
    double eps1, eps2;
  };
  std::vector<Cell> cells;
  for (double b : e2) {
    for (double a : e1) cells.push_back({a, b});
  }

  std::size_t done = 0;
  if (cfg.resume && fs::exists(path)) {
    const CsvTable prev = read_csv(path.string());
    if (prev.header != csv_schema::heatmap()) throw Error(ErrorCode::Config, "existing heatmap.csv has another layout");
    for (const auto& row : prev.rows) {
      if (done >= cells.size() || row[0] != format_number(cells[done].eps1) || row[1] != format_number(cells[done].eps2)) {
        throw Error(ErrorCode::Config, "existing heatmap.csv does not match the requested grid; rerun without --resume");
      }
      ++done;
    }
  }
  CsvAppender out(path.string(), csv_schema::heatmap(), cfg.resume && done > 0);

  DeviceSweepOptions opts = to_sweep_options(cfg);
  // Cells finish out of order; rows are flushed in grid order.
  std::vector<std::optional<std::pair<double, std::string>>> results(cells.size());
  std::mutex mu;
  std::size_t next_write = done;
  std::size_t failures = 0;
  parallel_for(cells.size() - done, opts.workers, [&](std::size_t k) {
    const std::size_t i = done + k;
    std::pair<double, std::string> res{std::nan(""), "ok"};
    try {
      res.first = device_cell_timescale(cells[i].eps1, cells[i].eps2, opts);
    } catch (const std::exception& e) {
      res.second = e.what();
    }
    std::lock_guard<std::mutex> lock(mu);
    results[i] = res;
    while (next_write < cells.size() && results[next_write]) {
      const auto& r = *results[next_write];
      if (r.second != "ok") {
        ++failures;
        std::cerr << "cell (" << cells[next_write].eps1 << ", " << cells[next_write].eps2 << ") failed: " << r.second << '\n';
      }
      out.row({format_number(cells[next_write].eps1), format_number(cells[next_write].eps2),
               format_number(r.first), r.second});
      ++next_write;
    }
  });

  const CsvTable all = read_csv(path.string());
  double tmin = INFINITY, tmax = 0.0;
  for (const auto& row : all.rows) {
    const double t = std::stod(row[2]);
    if (std::isfinite(t)) {
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
    }
  }
  write_json(dir / "sweep.json", {{"config", to_json(cfg)},
                                  {"cells", all.rows.size()},
                                  {"failed_cells_this_run", failures},
                                  {"T_min", tmin},
                                  {"T_max", tmax},
                                  {"max_over_min", tmax / tmin}});
  std::cout << "sweep: " << all.rows.size() << " cells, T_X range [" << format_number(tmin) << ", "
            << format_number(tmax) << "]\n";
  return kExitOk;
}

int cmd_table2(const RunConfig& cfg, bool single_column) {
  const fs::path dir = prepare_output(cfg);
  Table2Options opt;
  opt.systems = cfg.table2_systems;
  opt.engines.clear();
  for (const auto& e : cfg.engines) opt.engines.push_back(parse_engine(e));
  if (single_column || cfg.table2_single) opt.only = cfg.diss;
  opt.base = to_chem_config(cfg);
  opt.workers = resolve_workers(cfg);
  const std::vector<Table2Cell> cells = run_table2(opt);
  if (cells.empty()) throw Error(ErrorCode::Config, "no Table 2 cell matches the requested selection");

  CsvTable t{csv_schema::table2(), {}};
  json rows = json::array();
  int n_fail = 0;
  for (const auto& c : cells) {
    if (!c.pass) ++n_fail;
    t.rows.push_back({c.ref.system, to_string(c.ref.engine), format_number(c.ref.kappa), format_number(c.ref.n_th),
                      format_number(c.ref.T), format_number(c.ref.tolerance), format_number(c.spectral_T),
                      format_number(c.fit_T), format_number(c.fit_sigma), c.pass ? "1" : "0", c.status});
    rows.push_back({{"system", c.ref.system}, {"engine", to_string(c.ref.engine)}, {"kappa", c.ref.kappa},
                    {"n_th", c.ref.n_th}, {"T_paper", c.ref.T}, {"tolerance", c.ref.tolerance},
                    {"T_spectral", c.spectral_T}, {"T_fit", std::isnan(c.fit_T) ? json(nullptr) : json(c.fit_T)},
                    {"T_fit_sigma", c.fit_sigma}, {"pass", c.pass}, {"status", c.status}});
    std::cout << c.ref.system << ' ' << to_string(c.ref.engine) << " (" << c.ref.kappa << ", " << c.ref.n_th
              << "): " << format_number(c.spectral_T) << " vs " << c.ref.T << " +- " << c.ref.tolerance
              << (c.pass ? "  ok" : "  MISMATCH") << '\n';
  }
  write_csv((dir / "table2.csv").string(), t);
  write_json(dir / "table2.json", {{"config", to_json(cfg)}, {"cells", rows}, {"mismatches", n_fail}});
  std::cout << cells.size() - n_fail << "/" << cells.size() << " cells within tolerance\n";
  return n_fail == 0 ? kExitOk : kExitMismatch;
}

int cmd_fit_potential(const RunConfig& cfg) {
  const fs::path dir = prepare_output(cfg);
  const LiteraturePotential& pot = find_literature_potential(cfg.literature);
  const QuarticFit fit = fit_quartic(pot, cfg.fit_window);
  json j{{"config", to_json(cfg)},
         {"literature", pot.name},
         {"k4", fit.params.k4},
         {"k2", fit.params.k2},
         {"k1", fit.params.k1},
         {"offset", fit.offset},
         {"rms_residual", fit.rms_residual}};
  try {
    const auto& sys = find_system(pot.name);
    j["table1"] = {{"k4", sys.params.k4}, {"k2", sys.params.k2}, {"k1", sys.params.k1}};
  } catch (const Error&) {
  }
  write_json(dir / ("fit_" + pot.name + ".json"), j);
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int classify(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Config:
    case ErrorCode::NotFound:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidDimension:
    case ErrorCode::NotADoubleWell:
    case ErrorCode::InfeasibleParameters:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kerr-cat / double-well mapping simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides ov;
  Globals g;

  app.add_option("--config", g.config_path, "JSON config file; command-line flags take precedence")
      ->check(CLI::ExistingFile);
  ov.add(&app, "--workers", &RunConfig::workers, "Worker threads (default: $KCSIM_WORKERS or all cores)");
  ov.add(&app, "-o,--output-dir", &RunConfig::output_dir, "Directory for CSV/JSON outputs");

  auto add_system = [&](CLI::App* sub) {
    ov.add(sub, "--system", &RunConfig::system, "Registry system: " + [] {
      std::string s;
      for (const auto& n : system_names()) s += (s.empty() ? "" : ", ") + n;
      return s;
    }());
    auto* p = sub->add_option("--params", g.params_text, "Custom well 'k4,k2,k1[,mass]' in atomic units");
    ov.custom(p, [&g](RunConfig& c) {
      std::vector<double> v;
      std::stringstream ss(g.params_text);
      std::string tok;
      while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
      if (v.size() < 3 || v.size() > 4) throw Error(ErrorCode::Config, "--params needs k4,k2,k1[,mass]");
      c.params = DoubleWellParams{v[0], v[1], v[2], v.size() == 4 ? v[3] : kProtonMass};
    });
  };
  auto add_basis = [&](CLI::App* sub) {
    ov.add(sub, "--c", &RunConfig::c, "Mapping length scale c (a0)");
    ov.add(sub, "--dim", &RunConfig::dim, "Fock truncation");
    ov.add(sub, "--basis-scale", &RunConfig::basis_scale, "Fock basis length (a0); <= 0 derives it from the potential");
    auto* cs = sub->add_option("--c-scan", g.range_c, "c values lo:hi:n");
    ov.custom(cs, [&g](RunConfig& c) { c.c_scan = parse_range(g.range_c); });
  };
  auto add_diss = [&](CLI::App* sub) {
    auto* k = sub->add_option("--kappa", g.kappa, "Loss rate kappa");
    ov.custom(k, [&g](RunConfig& c) { c.diss.kappa = g.kappa; });
    auto* n = sub->add_option("--nth,--n-th", g.n_th, "Thermal occupation n_th");
    ov.custom(n, [&g](RunConfig& c) { c.diss.n_th = g.n_th; });
    return std::pair{k, n};
  };
  auto add_dyn = [&](CLI::App* sub) {
    ov.add(sub, "--M", &RunConfig::M, "Dynamics subspace size");
    ov.add(sub, "--engines", &RunConfig::engines, "Engines: dw, kc")->delimiter(',');
    ov.add(sub, "--tau", &RunConfig::tau, "Time step (hbar/Eh)");
    ov.add(sub, "--horizon", &RunConfig::horizon, "Propagation time; <= 0 uses horizon-factor x spectral T_X");
    ov.add(sub, "--horizon-factor", &RunConfig::horizon_factor, "Horizon in units of the spectral T_X");
    ov.add(sub, "--max-steps", &RunConfig::max_steps, "Step cap");
    ov.add(sub, "--records", &RunConfig::records, "Approximate number of recorded points");
    ov.add(sub, "--burn-in-fraction", &RunConfig::burn_in_fraction, "Fraction of the horizon skipped by the fit");
    ov.add(sub, "--x-cut", &RunConfig::x_cut, "Population cut position (a0)");
    ov.add(sub, "--reactant-side", &RunConfig::reactant_side, "auto, left or right");
    ov.add(sub, "--tail", &RunConfig::tail, "Sigmoid filter tail (a0)");
    ov.add_flag(sub, "--xp-dissipator", &RunConfig::xp_dissipator, "Assemble the dissipator from x and p");
  };

  CLI::App* spectra = app.add_subcommand("spectra", "Levels, KC-vs-DW deviations and c-scan feasibility");
  add_system(spectra);
  add_basis(spectra);
  ov.add(spectra, "--n-levels", &RunConfig::n_levels, "Levels compared (default: states below barrier)");

  CLI::App* dynamics = app.add_subcommand("dynamics", "Lindblad dynamics, populations and rates");
  add_system(dynamics);
  add_basis(dynamics);
  add_diss(dynamics);
  add_dyn(dynamics);

  CLI::App* sweep = app.add_subcommand("sweep", "Device-unit T_X heatmap over (eps1, eps2)");
  add_diss(sweep);
  auto* r1 = sweep->add_option("--eps1", g.range_eps1, "eps1 range lo:hi:n (units of K)");
  ov.custom(r1, [&g](RunConfig& c) { c.eps1 = parse_range(g.range_eps1); });
  auto* r2 = sweep->add_option("--eps2", g.range_eps2, "eps2 range lo:hi:n (units of K)");
  ov.custom(r2, [&g](RunConfig& c) { c.eps2 = parse_range(g.range_eps2); });
  ov.add(sweep, "--dim", &RunConfig::sweep_dim, "Fock truncation");
  ov.add(sweep, "--M", &RunConfig::sweep_M, "Subspace size");
  ov.add(sweep, "--delta", &RunConfig::sweep_delta, "Detuning (units of K)");
  ov.add_flag(sweep, "--resume", &RunConfig::resume, "Continue an interrupted heatmap.csv");

  CLI::App* table2 = app.add_subcommand("table2", "Reproduce the rate table for all systems");
  auto [t2k, t2n] = add_diss(table2);
  ov.add(table2, "--engines", &RunConfig::engines, "Engines: dw, kc")->delimiter(',');
  ov.add(table2, "--systems", &RunConfig::table2_systems, "Subset of systems")->delimiter(',');
  ov.add(table2, "--c", &RunConfig::c, "Mapping length scale c (a0)");
  ov.add(table2, "--dim", &RunConfig::dim, "Fock truncation");
  ov.add(table2, "--M", &RunConfig::M, "Dynamics subspace size");
  ov.add(table2, "--basis-scale", &RunConfig::basis_scale, "Fock basis length (a0)");
  ov.add(table2, "--burn-in-fraction", &RunConfig::burn_in_fraction, "Fraction of the horizon skipped by the fit");

  CLI::App* fitpot = app.add_subcommand("fit-potential", "Refit a literature potential to the quartic form");
  ov.add(fitpot, "--literature", &RunConfig::literature, "cis-cis, cis-trans, at or gc");
  auto* fx0 = fitpot->add_option("--x-min", ov.flags.fit_window.x_min, "Fit window start (a0)");
  ov.custom(fx0, [&ov](RunConfig& c) { c.fit_window.x_min = ov.flags.fit_window.x_min; });
  auto* fx1 = fitpot->add_option("--x-max", ov.flags.fit_window.x_max, "Fit window end (a0)");
  ov.custom(fx1, [&ov](RunConfig& c) { c.fit_window.x_max = ov.flags.fit_window.x_max; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
    ov.apply(cfg);
    validate(cfg);
    if (*spectra) return cmd_spectra(cfg);
    if (*dynamics) return cmd_dynamics(cfg);
    if (*sweep) return cmd_sweep(cfg);
    if (*table2) return cmd_table2(cfg, t2k->count() > 0 || t2n->count() > 0);
    if (*fitpot) return cmd_fit_potential(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return classify(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
