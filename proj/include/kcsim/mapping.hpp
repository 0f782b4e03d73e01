#pragma once

#include <vector>

#include "kcsim/operators.hpp"

namespace kcsim {

/// Double-well to Kerr-cat parameters at length scale c (a0).
KerrCatParams chem_to_device(const DoubleWellParams& dw, double c);

/// Inverse of chem_to_device. Solves the 2x2 system in {hbar^2/(2c^2 m), c^2 k2}
/// given by the eps2 and Delta relations. Throws InfeasibleParameters when
/// K <= 0 or the implied mass or k2 is non-positive.
DoubleWellParams device_to_chem(const KerrCatParams& kc, double c);

/// hbar^2/(m k2 c^4); the mapping is trustworthy when this is >> 1.
double inequality_ratio(const DoubleWellParams& dw, double c);

struct SymmetricWell {
  double x0;  // a0
  double activation_energy;  // E_h
};

SymmetricWell symmetric_well_geometry(double k2, double k4);

/// Stationary points of V(x) = k4 x^4 - k2 x^2 + k1 x.
struct WellGeometry {
  double left_min;
  double ridge;
  double right_min;
  double v_left;
  double v_ridge;
  double v_right;

  double reactant_min() const { return v_left > v_right ? left_min : right_min; }
  double deeper_value() const { return v_left < v_right ? v_left : v_right; }
};

/// Throws NotADoubleWell when V has a single minimum.
WellGeometry analyze_well(const DoubleWellParams& dw);

/// Basis length b = sqrt(X/P) that balances position and momentum coverage at
/// an energy three barrier depths above the ridge (X: outer turning point, P:
/// maximum momentum). Used as the default Fock basis scale in chemical mode.
double suggested_basis_scale(const DoubleWellParams& dw);

/// Device capabilities expressed as ratios to K. Defaults are placeholders,
/// not measured hardware limits.
struct DeviceLimits {
  double max_eps2_over_K = 20.0;
  double max_eps1_over_K = 10.0;
  double max_abs_delta_over_K = 20.0;
};

struct CScanPoint {
  double c = 0.0;
  std::vector<double> deviations;  // |E_KC - E_DW| per level, ground-state aligned
  double eps2_over_K = 0.0;
  double eps1_over_K = 0.0;
  double delta_over_K = 0.0;
  double inequality = 0.0;
  bool chemically_accurate = false;
  bool device_feasible = false;
};

struct CScanReport {
  int n_levels = 0;
  std::vector<CScanPoint> points;
};

struct CScanOptions {
  int dim = 300;
  double basis_scale = 0.0;  // <= 0 selects suggested_basis_scale(dw)
  double tolerance = kChemicalAccuracy;
};

/// For each c builds H_DW and -H_KC in the same basis and records per-level
/// deviations, device ratios and feasibility flags.
CScanReport c_feasibility_scan(const DoubleWellParams& dw, const std::vector<double>& c_values,
                               int n_levels, const DeviceLimits& limits,
                               const CScanOptions& options = {});

}  // namespace kcsim
