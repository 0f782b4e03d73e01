#include "kcsim/dynamics.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <lapacke.h>

#include "kcsim/expm.hpp"

namespace kcsim {

namespace {

// L += coeff * kron(B, A), i.e. the map rho -> coeff * A rho B^T.
void add_kron(CMatrix& L, Complex coeff, const CMatrix& B, const CMatrix& A) {
  const auto n = A.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex b = coeff * B(i, j);
      if (b == Complex(0.0)) continue;
      L.block(i * n, j * n, n, n).noalias() += b * A;
    }
  }
}

// rho -> A rho
void add_left(CMatrix& L, Complex coeff, const CMatrix& A) {
  const auto n = A.rows();
  for (Eigen::Index i = 0; i < n; ++i) L.block(i * n, i * n, n, n) += coeff * A;
}

// rho -> rho B
void add_right(CMatrix& L, Complex coeff, const CMatrix& B) {
  const auto n = B.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex b = coeff * B(j, i);
      if (b == Complex(0.0)) continue;
      for (Eigen::Index k = 0; k < n; ++k) L(i * n + k, j * n + k) += b;
    }
  }
}

// rho -> coeff * A rho B
void add_sandwich(CMatrix& L, Complex coeff, const CMatrix& A, const CMatrix& B) {
  add_kron(L, coeff, B.transpose(), A);
}

void check_square(const CMatrix& m, Eigen::Index n, const char* name) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::InvalidDimension, std::string(name) + " does not match the Hamiltonian size");
  }
}

LindbladSuperoperator unitary_part(const CMatrix& H, const DissipationParams& diss) {
  if (H.rows() != H.cols() || H.rows() == 0) {
    throw Error(ErrorCode::InvalidDimension, "Hamiltonian must be square and non-empty");
  }
  validate(diss);
  const auto n = H.rows();
  LindbladSuperoperator out;
  out.dim = static_cast<int>(n);
  out.diss = diss;
  out.L = CMatrix::Zero(n * n, n * n);
  add_left(out.L, -kI, H);
  add_right(out.L, kI, H);
  return out;
}

}  // namespace

void validate(const DissipationParams& d) {
  if (!(d.kappa >= 0.0) || !(d.n_th >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "kappa and n_th must be non-negative");
  }
}

CVector vectorize(const CMatrix& rho) {
  return Eigen::Map<const CVector>(rho.data(), rho.size());
}

CMatrix unvectorize(const CVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw Error(ErrorCode::InvalidDimension, "vector length is not dim^2");
  }
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

LindbladSuperoperator build_lindbladian(const CMatrix& H, const CMatrix& a, const CMatrix& a_dag,
                                        const DissipationParams& diss) {
  LindbladSuperoperator out = unitary_part(H, diss);
  const auto n = H.rows();
  check_square(a, n, "a");
  check_square(a_dag, n, "a_dag");
  const double down = diss.kappa * (1.0 + diss.n_th);
  const double up = diss.kappa * diss.n_th;
  if (down != 0.0) {
    const CMatrix ada = a_dag * a;
    add_sandwich(out.L, down, a, a_dag);
    add_left(out.L, -0.5 * down, ada);
    add_right(out.L, -0.5 * down, ada);
  }
  if (up != 0.0) {
    const CMatrix aad = a * a_dag;
    add_sandwich(out.L, up, a_dag, a);
    add_left(out.L, -0.5 * up, aad);
    add_right(out.L, -0.5 * up, aad);
  }
  return out;
}

LindbladSuperoperator build_lindbladian_xp(const CMatrix& H, const CMatrix& x, const CMatrix& p,
                                           double c, const DissipationParams& diss) {
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "mapping scale c must be positive");
  LindbladSuperoperator out = unitary_part(H, diss);
  const auto n = H.rows();
  check_square(x, n, "x");
  check_square(p, n, "p");
  if (diss.kappa == 0.0) return out;

  // [A rho, B] = A rho B - B A rho ; [A, rho B] = A rho B - rho B A
  auto add_comm_left = [&](Complex k, const CMatrix& A, const CMatrix& B) {
    add_sandwich(out.L, k, A, B);
    add_left(out.L, -k, B * A);
  };
  auto add_comm_right = [&](Complex k, const CMatrix& A, const CMatrix& B) {
    add_sandwich(out.L, k, A, B);
    add_right(out.L, -k, B * A);
  };

  const double sym = diss.kappa * (1.0 + 2.0 * diss.n_th) / 4.0;
  const double c2 = c * c;
  add_comm_left(sym / c2, x, x);
  add_comm_right(sym / c2, x, x);
  add_comm_left(sym * c2, p, p);
  add_comm_right(sym * c2, p, p);

  const Complex anti = -kI * diss.kappa / 4.0;
  add_comm_left(anti, x, p);
  add_comm_right(anti, x, p);
  add_comm_left(-anti, p, x);
  add_comm_right(-anti, p, x);
  return out;
}

void propagate(const LindbladSuperoperator& L, const CMatrix& rho0, double tau, long n_steps,
               long stride, const TrajectoryObserver& observer) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "time step must be positive");
  if (n_steps < 0 || stride < 1) throw Error(ErrorCode::InvalidArgument, "need n_steps >= 0 and stride >= 1");
  check_square(rho0, L.dim, "initial density matrix");
  const CMatrix P = expm(L.L * tau);
  CVector v = vectorize(rho0);
  CVector next(v.size());
  observer(0.0, rho0);
  for (long step = 1; step <= n_steps; ++step) {
    next.noalias() = P * v;
    v.swap(next);
    if (step % stride == 0) {
      if (!v.allFinite()) throw Error(ErrorCode::NumericalFailure, "propagation produced non-finite values");
      observer(step * tau, unvectorize(v, L.dim));
    }
  }
}

Trajectory propagate(const LindbladSuperoperator& L, const CMatrix& rho0, double tau,
                     long n_steps, long stride) {
  Trajectory traj;
  traj.tau = tau;
  traj.stride = static_cast<int>(stride);
  propagate(L, rho0, tau, n_steps, stride, [&](double t, const CMatrix& rho) {
    traj.times.push_back(t);
    traj.states.push_back(rho);
  });
  return traj;
}

namespace {

EigenPairs run_zgeev(const CMatrix& L, bool want_vectors) {
  if (L.rows() != L.cols()) throw Error(ErrorCode::InvalidDimension, "generator must be square");
  const lapack_int n = static_cast<lapack_int>(L.rows());
  CMatrix work = L;
  EigenPairs out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  lapack_complex_double dummy{};
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n,
      reinterpret_cast<lapack_complex_double*>(work.data()), n,
      reinterpret_cast<lapack_complex_double*>(out.values.data()), &dummy, 1,
      want_vectors ? reinterpret_cast<lapack_complex_double*>(out.vectors.data()) : &dummy,
      want_vectors ? n : 1);
  if (info != 0) {
    throw Error(ErrorCode::SolverFailure, "zgeev failed with info = " + std::to_string(info));
  }
  return out;
}

}  // namespace

CVector liouvillian_eigenvalues(const CMatrix& L) { return run_zgeev(L, false).values; }

EigenPairs liouvillian_eigensystem(const CMatrix& L) { return run_zgeev(L, true); }

SpectralTimescale spectral_timescale(const CVector& eigenvalues, double zero_tol) {
  if (eigenvalues.size() == 0) throw Error(ErrorCode::UndefinedTimescale, "empty spectrum");
  // Scaled by the full modulus: in the unitary limit every Re is round-off.
  if (zero_tol < 0.0) zero_tol = 1e-10 * eigenvalues.cwiseAbs().maxCoeff();
  SpectralTimescale best{0.0, Complex(-std::numeric_limits<double>::infinity(), 0.0)};
  bool found = false;
  for (const Complex& lam : eigenvalues) {
    if (lam.real() < -zero_tol && lam.real() > best.eigenvalue.real()) {
      best.eigenvalue = lam;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::UndefinedTimescale, "no eigenvalue with negative real part (is kappa zero?)");
  }
  best.T = -1.0 / best.eigenvalue.real();
  return best;
}

SpectralTimescale spectral_timescale(const LindbladSuperoperator& L, double zero_tol) {
  return spectral_timescale(liouvillian_eigenvalues(L.L), zero_tol);
}

CMatrix steady_state(const LindbladSuperoperator& L) {
  const EigenPairs ep = liouvillian_eigensystem(L.L);
  Eigen::Index k = 0;
  ep.values.cwiseAbs().minCoeff(&k);
  CMatrix rho = unvectorize(ep.vectors.col(k), L.dim);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-14) throw Error(ErrorCode::NumericalFailure, "steady state has zero trace");
  return rho / tr;
}

}  // namespace kcsim
