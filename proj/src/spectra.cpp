#include "kcsim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "kcsim/mapping.hpp"

namespace kcsim {

EigenSystem eigendecompose(const CMatrix& H, const CMatrix* position, double degeneracy_tol) {
  if (H.rows() != H.cols() || H.rows() == 0) {
    throw Error(ErrorCode::InvalidDimension, "eigendecompose needs a non-empty square matrix");
  }
  const double scale = std::max(1.0, max_abs(H));
  if (hermiticity_defect(H) > 1e-10 * scale) {
    throw Error(ErrorCode::InvalidArgument, "matrix is not Hermitian within 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(H);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SolverFailure, "Hermitian eigensolver did not converge");
  }
  EigenSystem eig{solver.eigenvalues(), solver.eigenvectors()};

  const Eigen::Index n = H.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index imax = 0;
    eig.vectors.col(k).cwiseAbs().maxCoeff(&imax);
    const Complex pivot = eig.vectors(imax, k);
    eig.vectors.col(k) *= std::conj(pivot) / std::abs(pivot);
  }

  if (position != nullptr) {
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> mean_x(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      mean_x[k] = eig.vectors.col(k).dot(*position * eig.vectors.col(k)).real();
    }
    Eigen::Index start = 0;
    while (start < n) {
      Eigen::Index end = start + 1;
      while (end < n && eig.values[end] - eig.values[end - 1] <
                            degeneracy_tol * std::max(1.0, std::abs(eig.values[end]))) {
        ++end;
      }
      std::stable_sort(order.begin() + start, order.begin() + end,
                       [&](Eigen::Index a, Eigen::Index b) { return mean_x[a] < mean_x[b]; });
      start = end;
    }
    EigenSystem sorted{RVector(n), CMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
      sorted.values[k] = eig.values[order[k]];
      sorted.vectors.col(k) = eig.vectors.col(order[k]);
    }
    return sorted;
  }
  return eig;
}

PositionGrid build_position_grid(int dim, double scale, const GridSpec& gs) {
  if (dim < 1) throw Error(ErrorCode::InvalidDimension, "grid basis needs dim >= 1");
  if (gs.n_points < 2 || !(gs.x_max > gs.x_min)) {
    throw Error(ErrorCode::InvalidArgument, "grid needs n_points >= 2 and x_max > x_min");
  }
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid scale must be positive");

  PositionGrid grid;
  grid.scale = scale;
  grid.points = RVector::LinSpaced(gs.n_points, gs.x_min, gs.x_max);
  const double h = (gs.x_max - gs.x_min) / (gs.n_points - 1);
  grid.weights = RVector::Constant(gs.n_points, h);
  grid.weights[0] *= 0.5;
  grid.weights[gs.n_points - 1] *= 0.5;

  grid.basis.resize(dim, gs.n_points);
  const double norm0 = 1.0 / (std::pow(std::numbers::pi, 0.25) * std::sqrt(scale));
  for (int j = 0; j < gs.n_points; ++j) {
    const double xi = grid.points[j] / scale;
    double prev = 0.0;
    double cur = norm0 * std::exp(-0.5 * xi * xi);
    grid.basis(0, j) = cur;
    for (int n = 0; n + 1 < dim; ++n) {
      const double next = std::sqrt(2.0 / (n + 1)) * xi * cur - std::sqrt(double(n) / (n + 1)) * prev;
      prev = cur;
      cur = next;
      grid.basis(n + 1, j) = cur;
    }
  }
  return grid;
}

CMatrix to_grid(const PositionGrid& grid, const CMatrix& coefficients) {
  if (coefficients.rows() > grid.basis.rows()) {
    throw Error(ErrorCode::InvalidDimension, "coefficients exceed the grid basis size");
  }
  return coefficients.transpose() * grid.basis.topRows(coefficients.rows()).cast<Complex>();
}

CMatrix from_grid(const PositionGrid& grid, const CMatrix& values) {
  if (values.cols() != grid.size()) {
    throw Error(ErrorCode::InvalidDimension, "grid values do not match the grid size");
  }
  const RMatrix weighted = grid.basis * grid.weights.asDiagonal();
  return weighted.cast<Complex>() * values.transpose();
}

CMatrix project(const CMatrix& transform, const CMatrix& A) {
  return transform.adjoint() * A * transform;
}

ReducedOperatorSet reduce_subspace(const EigenSystem& eig, const CMatrix& H,
                                   const FockOperatorSet& ops, int M) {
  const auto dim = eig.vectors.cols();
  if (M < 1 || M > dim) {
    throw Error(ErrorCode::InvalidDimension,
                "subspace size " + std::to_string(M) + " outside [1, " + std::to_string(dim) + "]");
  }
  ReducedOperatorSet r;
  r.M = M;
  r.transform = eig.vectors.leftCols(M);
  r.energies = eig.values.head(M);
  r.H = project(r.transform, H);
  r.a = project(r.transform, ops.a);
  r.a_dag = project(r.transform, ops.a_dag);
  r.x = project(r.transform, ops.x);
  r.p = project(r.transform, ops.p);
  return r;
}

std::vector<double> compare_spectra(const RVector& a, const RVector& b, int n_levels) {
  if (n_levels < 1 || n_levels > a.size() || n_levels > b.size()) {
    throw Error(ErrorCode::InvalidDimension, "n_levels exceeds the available spectrum");
  }
  std::vector<double> out(n_levels);
  for (int i = 0; i < n_levels; ++i) out[i] = std::abs((a[i] - a[0]) - (b[i] - b[0]));
  return out;
}

std::vector<double> compare_spectra(const CMatrix& H_a, const CMatrix& H_b, int n_levels) {
  if (H_a.rows() != H_b.rows()) {
    throw Error(ErrorCode::InvalidDimension, "compare_spectra needs equal dimensions");
  }
  return compare_spectra(eigendecompose(H_a).values, eigendecompose(H_b).values, n_levels);
}

int count_states_below_barrier(const EigenSystem& eig, const DoubleWellParams& dw) {
  const WellGeometry g = analyze_well(dw);
  return static_cast<int>((eig.values.array() < g.v_ridge).count());
}

}  // namespace kcsim
