#include "kcsim/operators.hpp"

#include <cmath>

namespace kcsim {

void validate(const DoubleWellParams& dw) {
  if (!(dw.k4 > 0.0) || !(dw.k2 > 0.0) || !(dw.mass > 0.0) || !std::isfinite(dw.k1)) {
    throw Error(ErrorCode::NotADoubleWell,
                "double-well parameters need k4 > 0, k2 > 0, mass > 0 (got k4=" +
                    std::to_string(dw.k4) + ", k2=" + std::to_string(dw.k2) +
                    ", mass=" + std::to_string(dw.mass) + ")");
  }
}

std::pair<CMatrix, CMatrix> ladder_ops(int dim) {
  if (dim < 2) {
    throw Error(ErrorCode::InvalidDimension, "Fock dimension must be >= 2, got " + std::to_string(dim));
  }
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  CMatrix a_dag = a.adjoint();
  return {std::move(a), std::move(a_dag)};
}

FockOperatorSet make_fock_operators(int dim, double scale) {
  if (!(scale > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "basis length scale must be positive");
  }
  FockOperatorSet ops;
  ops.dim = dim;
  ops.scale = scale;
  std::tie(ops.a, ops.a_dag) = ladder_ops(dim);
  ops.x = (scale / std::sqrt(2.0)) * (ops.a + ops.a_dag);
  ops.p = (1.0 / (kI * std::sqrt(2.0) * scale)) * (ops.a - ops.a_dag);
  return ops;
}

CMatrix mapped_annihilator(const FockOperatorSet& ops, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "mapping scale c must be positive");
  if (c == ops.scale) return ops.a;
  return (ops.x / c + kI * c * ops.p) / std::sqrt(2.0);
}

CMatrix build_kerr_cat_hamiltonian(const KerrCatParams& k, const CMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidDimension, "annihilator must be square");
  const CMatrix ad = a.adjoint();
  const CMatrix a2 = a * a;
  const CMatrix ad2 = ad * ad;
  return k.delta * (ad * a) - k.kerr * (ad2 * a2) + k.eps2 * (a2 + ad2) + k.eps1 * (a + ad);
}

CMatrix build_kerr_cat_hamiltonian(const KerrCatParams& params, const FockOperatorSet& ops) {
  return build_kerr_cat_hamiltonian(params, ops.a);
}

CMatrix build_double_well_hamiltonian(const DoubleWellParams& dw, const FockOperatorSet& ops) {
  const CMatrix x2 = ops.x * ops.x;
  const CMatrix p2 = ops.p * ops.p;
  return p2 / (2.0 * dw.mass) + dw.k4 * (x2 * x2) - dw.k2 * x2 + dw.k1 * ops.x;
}

CMatrix build_kc_xp_form(const KerrCatParams& k, const FockOperatorSet& ops, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "mapping scale c must be positive");
  const CMatrix x2 = ops.x * ops.x;
  const CMatrix p2 = ops.p * ops.p;
  const double c2 = c * c;
  const double c4 = c2 * c2;
  return c2 * (k.eps2 - k.kerr - 0.5 * k.delta) * p2
            + (k.kerr / (4.0 * c4)) * (x2 * x2)
            - ((k.eps2 + k.kerr + 0.5 * k.delta) / c2) * x2
            - (k.eps1 * std::sqrt(2.0) / c) * ops.x
            + (k.kerr * c4 / 4.0) * (p2 * p2)
            + (k.kerr / 4.0) * (x2 * p2 + p2 * x2);
}

}  // namespace kcsim
