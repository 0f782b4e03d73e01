#pragma once

#include <vector>

#include "kcsim/operators.hpp"

namespace kcsim {

struct EigenSystem {
  RVector values;   // ascending
  CMatrix vectors;  // columns, Fock basis
};

/// Dense Hermitian eigendecomposition. Each eigenvector is rotated so that its
/// largest-magnitude component is real and positive. When `position` is given,
/// eigenvalues closer than `degeneracy_tol` are ordered by <x> ascending.
EigenSystem eigendecompose(const CMatrix& H, const CMatrix* position = nullptr,
                           double degeneracy_tol = 1e-12);

/// Oscillator eigenfunctions psi_n(x_j) on a uniform grid with trapezoid weights.
struct PositionGrid {
  RVector points;
  RVector weights;
  RMatrix basis;  // dim x n_points, basis(n, j) = psi_n(points[j])
  double scale = 1.0;

  int size() const { return static_cast<int>(points.size()); }
};

struct GridSpec {
  double x_min = -10.0;
  double x_max = 10.0;
  int n_points = 2001;
};

/// psi_n with m omega / hbar = 1/scale^2, via the normalized three-term
/// recurrence psi_{n+1} = sqrt(2/(n+1)) xi psi_n - sqrt(n/(n+1)) psi_{n-1}.
PositionGrid build_position_grid(int dim, double scale, const GridSpec& grid_spec = {});

/// Rows are the grid values of the columns of `coefficients` (Fock basis).
CMatrix to_grid(const PositionGrid& grid, const CMatrix& coefficients);

/// Quadrature projection of grid functions (rows) back onto the Fock basis.
/// Returns dim x rows.
CMatrix from_grid(const PositionGrid& grid, const CMatrix& values);

/// Operators restricted to the span of the lowest M eigenvectors.
struct ReducedOperatorSet {
  int M = 0;
  CMatrix transform;  // dim x M
  RVector energies;   // lowest M eigenvalues
  CMatrix H, a, a_dag, x, p;
};

/// A' = D^dag A D for H and the operator set, D the lowest M eigenvectors.
ReducedOperatorSet reduce_subspace(const EigenSystem& eig, const CMatrix& H,
                                   const FockOperatorSet& ops, int M);

/// D^dag A D for an arbitrary operator.
CMatrix project(const CMatrix& transform, const CMatrix& A);

/// |E_a,i - E_b,i| for i < n_levels after subtracting each ground energy.
std::vector<double> compare_spectra(const RVector& energies_a, const RVector& energies_b,
                                    int n_levels);
std::vector<double> compare_spectra(const CMatrix& H_a, const CMatrix& H_b, int n_levels);

/// Number of eigenvalues strictly below the barrier-top energy of dw.
int count_states_below_barrier(const EigenSystem& eig, const DoubleWellParams& dw);

}  // namespace kcsim
