#include "kcsim/mapping.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "kcsim/spectra.hpp"

namespace kcsim {

KerrCatParams chem_to_device(const DoubleWellParams& dw, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "mapping scale c must be positive");
  const double c2 = c * c;
  const double c4 = c2 * c2;
  KerrCatParams k;
  k.kerr = 4.0 * c4 * dw.k4;
  k.eps2 = 1.0 / (4.0 * c2 * dw.mass) + 0.5 * c2 * dw.k2;
  k.delta = -1.0 / (2.0 * c2 * dw.mass) + c2 * dw.k2 - 8.0 * c4 * dw.k4;
  k.eps1 = -c * dw.k1 / std::numbers::sqrt2;
  return k;
}

DoubleWellParams device_to_chem(const KerrCatParams& kc, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "mapping scale c must be positive");
  if (!(kc.kerr > 0.0)) {
    throw Error(ErrorCode::InfeasibleParameters, "K must be positive to map onto a double well");
  }
  const double c2 = c * c;
  // eps2 = (u + v)/2, Delta + 2K = v - u, with u = 1/(2 c^2 m) and v = c^2 k2.
  const double shifted = kc.delta + 2.0 * kc.kerr;
  const double u = kc.eps2 - 0.5 * shifted;
  const double v = kc.eps2 + 0.5 * shifted;
  if (!(u > 0.0)) throw Error(ErrorCode::InfeasibleParameters, "implied mass is not positive");
  if (!(v > 0.0)) throw Error(ErrorCode::InfeasibleParameters, "implied k2 is not positive");
  DoubleWellParams dw;
  dw.mass = 1.0 / (2.0 * c2 * u);
  dw.k2 = v / c2;
  dw.k4 = kc.kerr / (4.0 * c2 * c2);
  dw.k1 = -std::numbers::sqrt2 * kc.eps1 / c;
  return dw;
}

double inequality_ratio(const DoubleWellParams& dw, double c) {
  const double c2 = c * c;
  return 1.0 / (dw.mass * dw.k2 * c2 * c2);
}

SymmetricWell symmetric_well_geometry(double k2, double k4) {
  if (!(k2 > 0.0) || !(k4 > 0.0)) {
    throw Error(ErrorCode::NotADoubleWell, "symmetric well needs k2 > 0 and k4 > 0");
  }
  return {std::sqrt(k2 / (2.0 * k4)), k2 * k2 / (4.0 * k4)};
}

WellGeometry analyze_well(const DoubleWellParams& dw) {
  validate(dw);
  // V'(x) = 4 k4 x^3 - 2 k2 x + k1; depressed cubic x^3 + p x + q.
  const double p = -dw.k2 / (2.0 * dw.k4);
  const double q = dw.k1 / (4.0 * dw.k4);
  const double disc = 4.0 * p * p * p + 27.0 * q * q;
  if (!(disc < 0.0)) {
    throw Error(ErrorCode::NotADoubleWell, "potential has a single minimum (asymmetry exceeds barrier)");
  }
  const double r = 2.0 * std::sqrt(-p / 3.0);
  const double phi = std::acos(std::clamp(3.0 * q / (p * r), -1.0, 1.0)) / 3.0;
  std::array<double, 3> roots{};
  for (int k = 0; k < 3; ++k) roots[k] = r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
  for (double& x : roots) {
    for (int it = 0; it < 3; ++it) {
      const double f = x * x * x + p * x + q;
      const double df = 3.0 * x * x + p;
      if (df != 0.0) x -= f / df;
    }
  }
  std::sort(roots.begin(), roots.end());
  WellGeometry g{};
  g.left_min = roots[0];
  g.ridge = roots[1];
  g.right_min = roots[2];
  g.v_left = dw.potential(g.left_min);
  g.v_ridge = dw.potential(g.ridge);
  g.v_right = dw.potential(g.right_min);
  return g;
}

namespace {

// Outermost x on one side where V(x) = energy, starting from a point below it.
double turning_point(const DoubleWellParams& dw, double start, double direction, double energy) {
  double inner = start;
  double step = 1.0;
  double outer = start + direction * step;
  while (dw.potential(outer) < energy) {
    inner = outer;
    step *= 2.0;
    outer = start + direction * step;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (inner + outer);
    (dw.potential(mid) < energy ? inner : outer) = mid;
  }
  return 0.5 * (inner + outer);
}

}  // namespace

double suggested_basis_scale(const DoubleWellParams& dw) {
  const WellGeometry g = analyze_well(dw);
  const double bottom = g.deeper_value();
  const double depth = g.v_ridge - bottom;
  const double energy = g.v_ridge + 3.0 * depth;
  const double x_reach = std::max(std::abs(turning_point(dw, g.left_min, -1.0, energy)),
                                  std::abs(turning_point(dw, g.right_min, 1.0, energy)));
  const double p_reach = std::sqrt(2.0 * dw.mass * (energy - bottom));
  return std::sqrt(x_reach / p_reach);
}

CScanReport c_feasibility_scan(const DoubleWellParams& dw, const std::vector<double>& c_values,
                               int n_levels, const DeviceLimits& limits,
                               const CScanOptions& options) {
  validate(dw);
  if (n_levels < 1) throw Error(ErrorCode::InvalidArgument, "n_levels must be >= 1");
  for (std::size_t i = 0; i < c_values.size(); ++i) {
    if (!(c_values[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "c values must be positive");
    if (i > 0 && !(c_values[i] > c_values[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "c values must be strictly increasing");
    }
  }
  const double scale = options.basis_scale > 0.0 ? options.basis_scale : suggested_basis_scale(dw);
  const FockOperatorSet ops = make_fock_operators(options.dim, scale);
  const RVector e_dw = eigendecompose(build_double_well_hamiltonian(dw, ops)).values;

  CScanReport report;
  report.n_levels = n_levels;
  for (double c : c_values) {
    const KerrCatParams kc = chem_to_device(dw, c);
    const CMatrix neg_kc = -build_kerr_cat_hamiltonian(kc, mapped_annihilator(ops, c));
    const RVector e_kc = eigendecompose(neg_kc).values;

    CScanPoint pt;
    pt.c = c;
    pt.deviations = compare_spectra(e_kc, e_dw, n_levels);
    pt.eps2_over_K = kc.eps2 / kc.kerr;
    pt.eps1_over_K = kc.eps1 / kc.kerr;
    pt.delta_over_K = kc.delta / kc.kerr;
    pt.inequality = inequality_ratio(dw, c);
    pt.chemically_accurate = std::all_of(pt.deviations.begin(), pt.deviations.end(),
                                         [&](double d) { return d < options.tolerance; });
    pt.device_feasible = std::abs(pt.eps2_over_K) <= limits.max_eps2_over_K &&
                         std::abs(pt.eps1_over_K) <= limits.max_eps1_over_K &&
                         std::abs(pt.delta_over_K) <= limits.max_abs_delta_over_K;
    report.points.push_back(std::move(pt));
  }
  return report;
}

}  // namespace kcsim
