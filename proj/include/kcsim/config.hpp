#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "kcsim/chem.hpp"
#include "kcsim/mapping.hpp"
#include "kcsim/pipeline.hpp"

namespace kcsim {

/// Grid of `n` evenly spaced values from lo to hi inclusive.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;

  std::vector<double> values() const;
};

/// Parses "lo:hi:n".
Range parse_range(const std::string& s);

/// Every option of every subcommand. Defaults are the production settings.
struct RunConfig {
  std::string system = "cis-cis";
  std::optional<DoubleWellParams> params;  // overrides the registry entry
  double c = 0.1;
  std::optional<Range> c_scan;
  int dim = 300;
  double basis_scale = 0.0;  // <= 0: derived from the potential
  int M = 20;
  GridSpec grid;
  DissipationParams diss{0.1, 0.1};
  double tau = 0.1;
  double horizon = 0.0;
  double horizon_factor = 10.0;
  long max_steps = 100000;
  int records = 1000;
  double burn_in_fraction = 0.2;
  double x_cut = 0.0;
  std::string reactant_side = "auto";
  double tail = 0.5;
  std::vector<std::string> engines{"dw", "kc"};
  bool xp_dissipator = false;
  int n_levels = 0;  // <= 0: the system's states-below-barrier count
  DeviceLimits limits;  // placeholders, not measured hardware values
  Range eps1{0.0, 10.0, 101};
  Range eps2{0.0, 20.0, 101};
  int sweep_dim = 60;
  int sweep_M = 20;
  double sweep_kerr = 1.0;
  double sweep_delta = 0.0;
  bool resume = false;
  std::vector<std::string> table2_systems;
  bool table2_single = false;  // use diss as the only column
  std::string literature = "gc";
  FitWindow fit_window;
  std::string output_dir = "out";
  int workers = 0;  // <= 0: KCSIM_WORKERS or hardware concurrency
};

/// Throws Config with the offending key on unknown keys or bad types.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
nlohmann::json to_json(const RunConfig& cfg);

/// Range and consistency checks; throws Config.
void validate(const RunConfig& cfg);

DoubleWellParams resolve_params(const RunConfig& cfg);
ChemRunConfig to_chem_config(const RunConfig& cfg);
DeviceSweepOptions to_sweep_options(const RunConfig& cfg);
int resolve_workers(const RunConfig& cfg);

}  // namespace kcsim
