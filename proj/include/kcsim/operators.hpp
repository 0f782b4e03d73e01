#pragma once

#include <utility>

#include "kcsim/core.hpp"

namespace kcsim {

/// Driven Kerr oscillator parameters. Energies are in E_h for mapped chemical
/// systems and in units of K for device sweeps.
struct KerrCatParams {
  double delta = 0.0;
  double kerr = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
};

/// V(x) = k4 x^4 - k2 x^2 + k1 x with kinetic term p^2/2m (atomic units).
struct DoubleWellParams {
  double k4 = 0.0;
  double k2 = 0.0;
  double k1 = 0.0;
  double mass = kProtonMass;

  double potential(double x) const {
    const double x2 = x * x;
    return k4 * x2 * x2 - k2 * x2 + k1 * x;
  }
};

/// Throws NotADoubleWell unless k4 > 0, k2 > 0 and mass > 0.
void validate(const DoubleWellParams& dw);

/// Truncated oscillator matrices. `scale` is the basis length b with
/// x = (b/sqrt2)(a + a^dag) and p = (1/(i sqrt2 b))(a - a^dag), hbar = 1.
struct FockOperatorSet {
  int dim = 0;
  double scale = 1.0;
  CMatrix a;
  CMatrix a_dag;
  CMatrix x;
  CMatrix p;
};

/// Lower-shift annihilator with a(n-1, n) = sqrt(n) and its adjoint.
std::pair<CMatrix, CMatrix> ladder_ops(int dim);

FockOperatorSet make_fock_operators(int dim, double scale);

/// a_c = (x/c + i c p)/sqrt2 built from the basis x and p. Equals ops.a when
/// c == ops.scale.
CMatrix mapped_annihilator(const FockOperatorSet& ops, double c);

/// Delta a^dag a - K a^dag^2 a^2 + eps2 (a^2 + a^dag^2) + eps1 (a + a^dag).
CMatrix build_kerr_cat_hamiltonian(const KerrCatParams& params, const CMatrix& a);
CMatrix build_kerr_cat_hamiltonian(const KerrCatParams& params, const FockOperatorSet& ops);

/// p^2/2m + k4 x^4 - k2 x^2 + k1 x from the basis matrices.
CMatrix build_double_well_hamiltonian(const DoubleWellParams& dw, const FockOperatorSet& ops);

/// -H_KC written term by term in x and p for mapping scale c, constant
/// terms dropped. Includes the p^4, x^2p^2 and p^2x^2 terms that have no
/// double-well counterpart.
CMatrix build_kc_xp_form(const KerrCatParams& params, const FockOperatorSet& ops, double c);

inline CMatrix commutator(const CMatrix& A, const CMatrix& B) { return A * B - B * A; }

}  // namespace kcsim
