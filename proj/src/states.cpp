#include "kcsim/states.hpp"

#include <cmath>

namespace kcsim {

const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

Side parse_side(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw Error(ErrorCode::InvalidArgument, "side must be 'left' or 'right', got '" + s + "'");
}

double region_weight(double x, double x_cut, Side side) {
  if (x == x_cut) return 0.5;
  return ((x > x_cut) == (side == Side::Right)) ? 1.0 : 0.0;
}

double SigmoidFilter::operator()(double x) const {
  const double s = 1.0 / (1.0 + std::exp(-(x - x0) / tail));
  return side == Side::Right ? s : 1.0 - s;
}

RVector side_probabilities(const EigenSystem& eig, const PositionGrid& grid, double x_cut,
                           Side side, int n_states) {
  const CMatrix values = to_grid(grid, eig.vectors.leftCols(n_states));
  RVector w(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    w[j] = grid.weights[j] * region_weight(grid.points[j], x_cut, side);
  }
  return values.cwiseAbs2() * w;
}

int select_reactant_eigenstate(const EigenSystem& eig, const PositionGrid& grid, Side side,
                               double x_cut, double threshold, int n_states) {
  if (n_states < 0) n_states = static_cast<int>(eig.vectors.cols());
  if (n_states > eig.vectors.cols()) {
    throw Error(ErrorCode::InvalidDimension, "n_states exceeds the eigensystem size");
  }
  const RVector probs = side_probabilities(eig, grid, x_cut, side, n_states);
  for (int i = 0; i < n_states; ++i) {
    if (probs[i] > threshold + 1e-9) return i;
  }
  if (threshold < 1.0) {
    for (int i = 0; i < n_states; ++i) {
      if (std::abs(probs[i] - threshold) <= 1e-6) return i;
    }
  }
  throw Error(ErrorCode::NotFound, "no eigenstate among the first " + std::to_string(n_states) +
                                       " has more than " + std::to_string(threshold) +
                                       " probability on the " + to_string(side) + " side");
}

FilteredState apply_sigmoid_filter(const PositionGrid& grid, const CVector& psi_grid,
                                   const SigmoidFilter& filter) {
  if (psi_grid.size() != grid.size()) {
    throw Error(ErrorCode::InvalidDimension, "wavefunction does not match the grid");
  }
  if (!(filter.tail > 0.0)) throw Error(ErrorCode::InvalidArgument, "filter tail must be positive");
  FilteredState out;
  out.grid_values.resize(grid.size());
  for (int j = 0; j < grid.size(); ++j) out.grid_values[j] = psi_grid[j] * filter(grid.points[j]);
  const double norm2 = (out.grid_values.cwiseAbs2().array() * grid.weights.array()).sum();
  if (!(norm2 > 1e-300) || !std::isfinite(norm2)) {
    throw Error(ErrorCode::DegenerateFilter, "filtered wavefunction has zero norm");
  }
  out.grid_values /= std::sqrt(norm2);
  out.coefficients = from_grid(grid, out.grid_values.transpose()).col(0);
  return out;
}

CMatrix make_density(const CVector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8) {
    throw Error(ErrorCode::InvalidArgument, "make_density needs a normalized state");
  }
  return psi * psi.adjoint();
}

Side default_reactant_side(const WellGeometry& g) {
  return g.v_right > g.v_left ? Side::Right : Side::Left;
}

InitialState prepare_initial_state(const EigenSystem& eig, const CMatrix& transform,
                                   const PositionGrid& grid, const DoubleWellParams& dw,
                                   const InitialStateOptions& options) {
  const WellGeometry g = analyze_well(dw);
  InitialState st;
  st.reactant_side = options.reactant_side.value_or(default_reactant_side(g));
  st.cutoff = options.cutoff.value_or(g.ridge);
  const int M = static_cast<int>(transform.cols());

  st.source_index =
      select_reactant_eigenstate(eig, grid, st.reactant_side, st.cutoff, options.threshold, M);
  st.prob_before =
      side_probabilities(eig, grid, st.cutoff, st.reactant_side, M)[st.source_index];

  const CVector psi = to_grid(grid, eig.vectors.col(st.source_index)).row(0).transpose();
  st.filtered = apply_sigmoid_filter(grid, psi, {st.cutoff, options.tail, st.reactant_side});

  double after = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    after += grid.weights[j] * std::norm(st.filtered.grid_values[j]) *
             region_weight(grid.points[j], st.cutoff, st.reactant_side);
  }
  st.prob_after = after;

  CVector reduced = transform.adjoint() * st.filtered.coefficients;
  const double n = reduced.norm();
  if (!(n > 0.0)) throw Error(ErrorCode::DegenerateFilter, "filtered state has no weight in the subspace");
  reduced /= n;
  st.rho = make_density(reduced);
  return st;
}

}  // namespace kcsim
