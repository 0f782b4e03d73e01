#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kcsim/operators.hpp"

namespace kcsim {

struct ChemicalSystem {
  std::string name;
  std::string label;
  DoubleWellParams params;
  int expected_states_below_barrier = 0;
};

/// The four shipped systems: cis-cis, cis-trans, at, gc.
const std::vector<ChemicalSystem>& chemical_systems();

/// Throws NotFound listing the registry names.
const ChemicalSystem& find_system(const std::string& name);

std::vector<std::string> system_names();

struct LiteraturePotential {
  enum class Kind { QuarticCubic, DoubleMorse };
  Kind kind = Kind::QuarticCubic;
  std::string name;
  // QuarticCubic: k1 z - k2 z^2 - k3 z^3 + k4 z^4 with z = x / length_scale.
  double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
  double length_scale = 1.0;
  // DoubleMorse: V1{e^{-2a1(x-r1)} - 2e^{-a1(x-r1)}} + V2{e^{2a2(x-r2)} - 2e^{a2(x-r2)}}.
  double V1 = 0.0, V2 = 0.0, a1 = 0.0, a2 = 0.0, r1 = 0.0, r2 = 0.0;
};

const std::vector<LiteraturePotential>& literature_potentials();
const LiteraturePotential& find_literature_potential(const std::string& name);

double evaluate_literature(const LiteraturePotential& pot, double x);

struct FitWindow {
  double x_min = -5.0;
  double x_max = 5.0;
  int n_points = 1001;
};

struct QuarticFit {
  DoubleWellParams params;
  double offset = 0.0;
  double rms_residual = 0.0;
};

/// Least squares of V on {1, x, -x^2, x^4} over a uniform window. Throws
/// NotADoubleWell unless k4 > 0 and k2 > 0.
QuarticFit fit_quartic(const std::function<double(double)>& V, const FitWindow& window = {},
                       double mass = kProtonMass);
QuarticFit fit_quartic(const LiteraturePotential& pot, const FitWindow& window = {},
                       double mass = kProtonMass);

}  // namespace kcsim
