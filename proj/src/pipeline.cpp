#include "kcsim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "kcsim/parallel.hpp"

#include "kcsim/mapping.hpp"

namespace kcsim {

const char* to_string(Engine e) { return e == Engine::DoubleWell ? "dw" : "kc"; }

Engine parse_engine(const std::string& s) {
  if (s == "dw") return Engine::DoubleWell;
  if (s == "kc") return Engine::KerrCat;
  throw Error(ErrorCode::InvalidArgument, "engine must be 'dw' or 'kc', got '" + s + "'");
}

void validate(const ChemRunConfig& cfg) {
  validate(cfg.dw);
  validate(cfg.diss);
  if (!(cfg.c > 0.0)) throw Error(ErrorCode::Config, "c must be positive");
  if (cfg.dim < 2) throw Error(ErrorCode::Config, "dim must be >= 2");
  if (cfg.M < 1 || cfg.M > cfg.dim) throw Error(ErrorCode::Config, "M must be in [1, dim]");
  if (!(cfg.tau > 0.0)) throw Error(ErrorCode::Config, "tau must be positive");
  if (cfg.max_steps < 1) throw Error(ErrorCode::Config, "max_steps must be >= 1");
  if (cfg.records < 2) throw Error(ErrorCode::Config, "records must be >= 2");
  if (!(cfg.burn_in_fraction >= 0.0 && cfg.burn_in_fraction < 1.0)) {
    throw Error(ErrorCode::Config, "burn_in_fraction must be in [0, 1)");
  }
  if (!(cfg.initial.tail > 0.0)) throw Error(ErrorCode::Config, "filter tail must be positive");
}

EngineModel build_engine_model(const ChemRunConfig& cfg, Engine engine) {
  validate(cfg);
  EngineModel m;
  m.engine = engine;
  m.basis_scale = cfg.basis_scale > 0.0 ? cfg.basis_scale : suggested_basis_scale(cfg.dw);
  m.ops = make_fock_operators(cfg.dim, m.basis_scale);
  const CMatrix a_full = mapped_annihilator(m.ops, cfg.c);
  if (engine == Engine::DoubleWell) {
    m.H = build_double_well_hamiltonian(cfg.dw, m.ops);
  } else {
    m.H = -build_kerr_cat_hamiltonian(chem_to_device(cfg.dw, cfg.c), a_full);
  }
  m.eig = eigendecompose(m.H, &m.ops.x);
  m.reduced = reduce_subspace(m.eig, m.H, m.ops, cfg.M);
  m.a_c = project(m.reduced.transform, a_full);
  if (cfg.xp_dissipator) {
    m.L = build_lindbladian_xp(m.reduced.H, m.reduced.x, m.reduced.p, cfg.c, cfg.diss);
  } else {
    m.L = build_lindbladian(m.reduced.H, m.a_c, m.a_c.adjoint(), cfg.diss);
  }
  return m;
}

ChemRunResult run_chemical(const ChemRunConfig& cfg, Engine engine) {
  const EngineModel m = build_engine_model(cfg, engine);
  ChemRunResult out;
  out.engine = engine;
  out.basis_scale = m.basis_scale;
  out.spectral = spectral_timescale(m.L);
  if (!cfg.trajectory) return out;

  const PositionGrid grid = build_position_grid(cfg.dim, m.basis_scale, cfg.grid);
  out.initial = prepare_initial_state(m.eig, m.reduced.transform, grid, cfg.dw, cfg.initial);
  out.product_side = cfg.product_side.value_or(opposite(out.initial.reactant_side));

  const RegionProjector right = heaviside_projector(grid, m.reduced.transform, cfg.x_cut, Side::Right);
  const RegionProjector left = heaviside_projector(grid, m.reduced.transform, cfg.x_cut, Side::Left);

  out.horizon = cfg.horizon > 0.0 ? cfg.horizon : cfg.horizon_factor * out.spectral.T;
  out.n_steps = std::min<long>(cfg.max_steps, std::max<long>(1, std::lround(out.horizon / cfg.tau)));
  out.horizon = out.n_steps * cfg.tau;
  out.stride = std::max<long>(1, out.n_steps / cfg.records);

  const CMatrix& rho0 = out.initial.rho;
  propagate(m.L, rho0, cfg.tau, out.n_steps, out.stride, [&](double t, const CMatrix& rho) {
    TrajectoryRow row;
    row.t = t;
    row.p_left = population(rho, left);
    row.p_right = population(rho, right);
    row.overlap = overlap(rho, rho0);
    row.trace = rho.trace().real();
    row.hermiticity = hermiticity_defect(rho);
    const CMatrix herm = 0.5 * (rho + rho.adjoint());
    row.min_eigenvalue = Eigen::SelfAdjointEigenSolver<CMatrix>(herm, Eigen::EigenvaluesOnly)
                             .eigenvalues()[0];
    out.rows.push_back(row);
  });

  try {
    out.fit = fit_product_population(out, cfg.burn_in_fraction);
  } catch (const Error& e) {
    out.fit_error = e.what();
  }
  return out;
}

RateResult fit_product_population(const ChemRunResult& run, double burn_in_fraction) {
  std::vector<double> t, v;
  const double start = burn_in_fraction * run.horizon;
  for (std::size_t i = 1; i < run.rows.size(); ++i) {
    if (run.rows[i].t < start) continue;
    t.push_back(run.rows[i].t);
    v.push_back(run.product_side == Side::Right ? run.rows[i].p_right : run.rows[i].p_left);
  }
  return fit_exponential(t, v);
}

const std::vector<Table2Reference>& table2_reference() {
  static const std::vector<Table2Reference> refs = [] {
    struct Row {
      const char* system;
      Engine engine;
      double T[4];
      double tol[4];
    };
    const Row rows[] = {
        {"cis-cis", Engine::KerrCat, {91, 91, 303, 295}, {1, 1, 4, 4}},
        {"cis-cis", Engine::DoubleWell, {91, 91, 303, 295}, {1, 1, 4, 4}},
        {"cis-trans", Engine::KerrCat, {147, 142, 527, 499}, {2, 2, 7, 6}},
        {"cis-trans", Engine::DoubleWell, {147, 142, 528, 500}, {2, 2, 7, 6}},
        {"at", Engine::KerrCat, {95, 94, 323, 314}, {1, 1, 4, 4}},
        {"at", Engine::DoubleWell, {95, 94, 323, 314}, {1, 1, 4, 4}},
        {"gc", Engine::KerrCat, {96, 95, 325, 316}, {1, 1, 4, 4}},
        {"gc", Engine::DoubleWell, {96, 95, 325, 316}, {1, 1, 4, 4}},
    };
    const double pairs[4][2] = {{0.1, 0.1}, {0.1, 0.05}, {0.025, 0.1}, {0.025, 0.05}};
    std::vector<Table2Reference> out;
    for (const Row& r : rows) {
      for (int k = 0; k < 4; ++k) {
        out.push_back({r.system, pairs[k][0], pairs[k][1], r.engine, r.T[k], r.tol[k]});
      }
    }
    return out;
  }();
  return refs;
}

std::vector<Table2Cell> run_table2(const Table2Options& options) {
  std::vector<Table2Cell> cells;
  for (const auto& ref : table2_reference()) {
    if (!options.systems.empty() &&
        std::find(options.systems.begin(), options.systems.end(), ref.system) == options.systems.end()) {
      continue;
    }
    if (std::find(options.engines.begin(), options.engines.end(), ref.engine) == options.engines.end()) {
      continue;
    }
    if (options.only && (options.only->kappa != ref.kappa || options.only->n_th != ref.n_th)) continue;
    Table2Cell cell;
    cell.ref = ref;
    cells.push_back(cell);
  }
  parallel_for(cells.size(), options.workers, [&](std::size_t i) {
    Table2Cell& cell = cells[i];
    ChemRunConfig cfg = options.base;
    cfg.dw = find_system(cell.ref.system).params;
    cfg.diss = {cell.ref.kappa, cell.ref.n_th};
    try {
      const ChemRunResult run = run_chemical(cfg, cell.ref.engine);
      cell.spectral_T = run.spectral.T;
      if (run.fit) {
        cell.fit_T = run.fit->T;
        cell.fit_sigma = run.fit->sigma;
      } else {
        cell.fit_T = std::numeric_limits<double>::quiet_NaN();
        if (cfg.trajectory) cell.status = run.fit_error;
      }
      cell.pass = std::abs(cell.spectral_T - cell.ref.T) <= cell.ref.tolerance;
    } catch (const std::exception& e) {
      cell.status = e.what();
      cell.spectral_T = std::numeric_limits<double>::quiet_NaN();
      cell.fit_T = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return cells;
}

}  // namespace kcsim
