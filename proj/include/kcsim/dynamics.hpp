#pragma once

#include <functional>
#include <vector>

#include "kcsim/core.hpp"

namespace kcsim {

/// kappa in E_h/hbar (chemical mode) or units of K (device mode).
struct DissipationParams {
  double kappa = 0.0;
  double n_th = 0.0;
};

void validate(const DissipationParams& d);

/// Dense generator acting on column-major vec(rho).
struct LindbladSuperoperator {
  CMatrix L;
  int dim = 0;
  DissipationParams diss;
};

/// Column-major flattening and its inverse.
CVector vectorize(const CMatrix& rho);
CMatrix unvectorize(const CVector& v, int dim);

/// -i(I (x) H - H^T (x) I) + kappa(1+n)[a* (x) a - (I (x) a^dag a + (a^dag a)^T (x) I)/2]
///                     + kappa n  [a^T (x) a^dag - (I (x) a a^dag + (a a^dag)^T (x) I)/2].
LindbladSuperoperator build_lindbladian(const CMatrix& H, const CMatrix& a, const CMatrix& a_dag,
                                        const DissipationParams& diss);

/// Same generator with the dissipator written through x and p at mapping
/// scale c:
///   kappa(1+2n)/4 [ (1/c^2)([x rho, x] + [x, rho x]) + c^2([p rho, p] + [p, rho p]) ]
///   - i kappa/4 ([x rho, p] + [x, rho p] - [p rho, x] - [p, rho x]).
/// Products such as xp are kept as matrix products so the result equals
/// build_lindbladian with a = (x/c + i c p)/sqrt2 in any truncation.
LindbladSuperoperator build_lindbladian_xp(const CMatrix& H, const CMatrix& x, const CMatrix& p,
                                           double c, const DissipationParams& diss);

struct Trajectory {
  double tau = 0.0;
  int stride = 1;
  std::vector<double> times;
  std::vector<CMatrix> states;
};

using TrajectoryObserver = std::function<void(double t, const CMatrix& rho)>;

/// P = expm(L tau) once, then rho <- P rho for n_steps steps. The observer is
/// called at t = 0 and every `stride` steps.
void propagate(const LindbladSuperoperator& L, const CMatrix& rho0, double tau, long n_steps,
               long stride, const TrajectoryObserver& observer);

Trajectory propagate(const LindbladSuperoperator& L, const CMatrix& rho0, double tau,
                     long n_steps, long stride);

/// All eigenvalues of the dense generator (LAPACK zgeev).
CVector liouvillian_eigenvalues(const CMatrix& L);

struct EigenPairs {
  CVector values;
  CMatrix vectors;  // right eigenvectors, columns
};
EigenPairs liouvillian_eigensystem(const CMatrix& L);

struct SpectralTimescale {
  double T = 0.0;
  Complex eigenvalue;
};

/// Slowest decaying mode: among eigenvalues with Re < -zero_tol the one with
/// Re closest to zero; T = -1/Re. zero_tol < 0 selects 1e-10 * max|lambda|.
/// Throws UndefinedTimescale when no eigenvalue qualifies.
SpectralTimescale spectral_timescale(const CVector& eigenvalues, double zero_tol = -1.0);
SpectralTimescale spectral_timescale(const LindbladSuperoperator& L, double zero_tol = -1.0);

/// Eigenvector of the eigenvalue nearest zero, reshaped and scaled to trace 1.
CMatrix steady_state(const LindbladSuperoperator& L);

}  // namespace kcsim
