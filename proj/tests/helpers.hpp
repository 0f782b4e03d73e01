#pragma once

#include <random>

#include "kcsim/chem.hpp"
#include "kcsim/core.hpp"

namespace kcsim::test {

inline CMatrix random_hermitian(int n, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

inline CMatrix random_matrix(int n, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Three-point finite differences on [-L, L] (Dirichlet), Richardson
// extrapolated from grids of spacing h and h/2.
inline RVector finite_difference_levels(const DoubleWellParams& dw, int n, double L, int count) {
  auto levels = [&](int npts) {
    const double h = 2.0 * L / (npts + 1);
    const double t = 1.0 / (2.0 * dw.mass * h * h);
    RVector diag(npts), off = RVector::Constant(npts - 1, -t);
    for (int i = 0; i < npts; ++i) diag[i] = 2.0 * t + dw.potential(-L + h * (i + 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    return RVector(es.eigenvalues().head(count));
  };
  const RVector coarse = levels(n);
  const RVector fine = levels(2 * (n + 1) - 1);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace kcsim::test
