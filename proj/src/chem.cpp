#include "kcsim/chem.hpp"

#include <cmath>

namespace kcsim {

const std::vector<ChemicalSystem>& chemical_systems() {
  static const std::vector<ChemicalSystem> systems = {
      {"cis-cis", "Malonaldehyde (cis-cis)", {7.1e-4, 4.0e-3, 0.0, kProtonMass}, 6},
      {"cis-trans", "Malonaldehyde (cis-trans)", {9.4e-5, 3.0e-3, 2.9e-3, kProtonMass}, 24},
      {"at", "Adenine-Thymine", {1.4e-3, 1.08e-2, 5.2e-3, kProtonMass}, 12},
      {"gc", "Guanine-Cytosine", {7.7e-4, 6.9e-3, 4.5e-3, kProtonMass}, 14},
  };
  return systems;
}

std::vector<std::string> system_names() {
  std::vector<std::string> out;
  for (const auto& s : chemical_systems()) out.push_back(s.name);
  return out;
}

const ChemicalSystem& find_system(const std::string& name) {
  std::string known;
  for (const auto& s : chemical_systems()) {
    if (s.name == name) return s;
    known += (known.empty() ? "" : ", ") + s.name;
  }
  throw Error(ErrorCode::NotFound, "unknown system '" + name + "' (known: " + known + ")");
}

const std::vector<LiteraturePotential>& literature_potentials() {
  using K = LiteraturePotential::Kind;
  static const std::vector<LiteraturePotential> pots = [] {
    std::vector<LiteraturePotential> v;
    LiteraturePotential at;
    at.kind = K::QuarticCubic;
    at.name = "at";
    at.k4 = 0.02068986;
    at.k3 = 0.00525515;
    at.k2 = 0.0413797;
    at.k1 = 0.0157655;
    at.length_scale = 1.9592;
    v.push_back(at);

    LiteraturePotential ct;
    ct.name = "cis-trans";
    ct.k4 = 0.00009374;
    ct.k3 = 0.000109;
    ct.k2 = 0.00299;
    ct.k1 = 0.005232;
    v.push_back(ct);

    LiteraturePotential cc;
    cc.name = "cis-cis";
    cc.k4 = 0.000714286;
    cc.k3 = 0.0;
    cc.k2 = 0.004;
    cc.k1 = 0.0;
    v.push_back(cc);

    LiteraturePotential gc;
    gc.kind = K::DoubleMorse;
    gc.name = "gc";
    gc.V1 = 0.1617;
    gc.V2 = 0.082;
    gc.a1 = 0.305;
    gc.a2 = 0.755;
    gc.r1 = -2.7;
    gc.r2 = 2.1;
    v.push_back(gc);
    return v;
  }();
  return pots;
}

const LiteraturePotential& find_literature_potential(const std::string& name) {
  for (const auto& p : literature_potentials()) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCode::NotFound, "no literature potential named '" + name + "'");
}

double evaluate_literature(const LiteraturePotential& pot, double x) {
  if (pot.kind == LiteraturePotential::Kind::QuarticCubic) {
    const double z = x / pot.length_scale;
    const double z2 = z * z;
    return pot.k1 * z - pot.k2 * z2 - pot.k3 * z2 * z + pot.k4 * z2 * z2;
  }
  const double u1 = std::exp(-pot.a1 * (x - pot.r1));
  const double u2 = std::exp(pot.a2 * (x - pot.r2));
  return pot.V1 * (u1 * u1 - 2.0 * u1) + pot.V2 * (u2 * u2 - 2.0 * u2);
}

QuarticFit fit_quartic(const std::function<double(double)>& V, const FitWindow& w, double mass) {
  if (w.n_points < 4 || !(w.x_max > w.x_min)) {
    throw Error(ErrorCode::InvalidArgument, "fit window needs >= 4 points and x_max > x_min");
  }
  Eigen::MatrixXd A(w.n_points, 4);
  Eigen::VectorXd b(w.n_points);
  for (int i = 0; i < w.n_points; ++i) {
    const double x = w.x_min + (w.x_max - w.x_min) * i / (w.n_points - 1);
    const double x2 = x * x;
    A(i, 0) = 1.0;
    A(i, 1) = x;
    A(i, 2) = -x2;
    A(i, 3) = x2 * x2;
    b[i] = V(x);
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
  QuarticFit fit;
  fit.offset = coef[0];
  fit.params.k1 = coef[1];
  fit.params.k2 = coef[2];
  fit.params.k4 = coef[3];
  fit.params.mass = mass;
  fit.rms_residual = std::sqrt((A * coef - b).squaredNorm() / w.n_points);
  validate(fit.params);
  return fit;
}

QuarticFit fit_quartic(const LiteraturePotential& pot, const FitWindow& window, double mass) {
  return fit_quartic([&](double x) { return evaluate_literature(pot, x); }, window, mass);
}

}  // namespace kcsim
