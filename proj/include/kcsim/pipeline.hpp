#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kcsim/chem.hpp"
#include "kcsim/dynamics.hpp"
#include "kcsim/observables.hpp"
#include "kcsim/parallel.hpp"
#include "kcsim/spectra.hpp"
#include "kcsim/states.hpp"

namespace kcsim {

enum class Engine { DoubleWell, KerrCat };

const char* to_string(Engine e);
Engine parse_engine(const std::string& s);

struct ChemRunConfig {
  DoubleWellParams dw;
  double c = 0.1;
  int dim = 300;
  double basis_scale = 0.0;  // <= 0: suggested_basis_scale(dw)
  int M = 20;
  DissipationParams diss{0.1, 0.1};
  GridSpec grid;
  InitialStateOptions initial;
  double x_cut = 0.0;                 // product projector cut
  std::optional<Side> product_side;   // default: opposite the reactant
  bool xp_dissipator = false;         // assemble the dissipator in x/p form
  bool trajectory = true;             // false: spectral timescale only
  double tau = 0.1;
  double horizon = 0.0;               // <= 0: horizon_factor * spectral T
  double horizon_factor = 10.0;
  long max_steps = 100000;
  int records = 1000;
  double burn_in_fraction = 0.2;
};

void validate(const ChemRunConfig& cfg);

/// Everything needed to propagate one engine in the reduced basis.
struct EngineModel {
  Engine engine = Engine::DoubleWell;
  double basis_scale = 0.0;
  FockOperatorSet ops;
  CMatrix H;  // full Fock-basis Hamiltonian (H_DW or -H_KC)
  EigenSystem eig;
  ReducedOperatorSet reduced;
  CMatrix a_c;  // reduced chemical-mode annihilator
  LindbladSuperoperator L;
};

EngineModel build_engine_model(const ChemRunConfig& cfg, Engine engine);

struct TrajectoryRow {
  double t = 0.0;
  double p_left = 0.0;
  double p_right = 0.0;
  double overlap = 0.0;
  double trace = 0.0;
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
};

struct ChemRunResult {
  Engine engine = Engine::DoubleWell;
  double basis_scale = 0.0;
  SpectralTimescale spectral;
  std::optional<RateResult> fit;
  std::string fit_error;
  InitialState initial;
  Side product_side = Side::Left;
  double horizon = 0.0;
  long n_steps = 0;
  long stride = 1;
  std::vector<TrajectoryRow> rows;
};

ChemRunResult run_chemical(const ChemRunConfig& cfg, Engine engine);

/// Fit of the product population after the burn-in window. The first record
/// is always skipped.
RateResult fit_product_population(const ChemRunResult& run, double burn_in_fraction);

struct Table2Reference {
  std::string system;
  double kappa;
  double n_th;
  Engine engine;
  double T;
  double tolerance;
};

/// Published central values and their stated uncertainties.
const std::vector<Table2Reference>& table2_reference();

struct Table2Cell {
  Table2Reference ref;
  double spectral_T = 0.0;
  double fit_T = 0.0;   // NaN when the fit failed
  double fit_sigma = 0.0;
  bool pass = false;
  std::string status = "ok";
};

struct Table2Options {
  std::vector<std::string> systems;  // empty: all
  std::vector<Engine> engines{Engine::DoubleWell, Engine::KerrCat};
  std::optional<DissipationParams> only;  // single column
  ChemRunConfig base;                      // dw and diss are overwritten per cell
  int workers = 1;
};

std::vector<Table2Cell> run_table2(const Table2Options& options);

}  // namespace kcsim
