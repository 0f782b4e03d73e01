#pragma once

#include <optional>

#include "kcsim/mapping.hpp"
#include "kcsim/spectra.hpp"

namespace kcsim {

enum class Side { Left, Right };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
const char* to_string(Side s);
Side parse_side(const std::string& s);

/// Weight of grid point x in the half-line beyond x_cut: 1 inside, 0 outside,
/// 1/2 exactly on the cut so that left and right weights sum to one.
double region_weight(double x, double x_cut, Side side);

/// S(x) = 1/(1 + exp(-(x - x0)/tail)) for Side::Right, 1 - S for Side::Left.
struct SigmoidFilter {
  double x0 = 0.0;
  double tail = 0.5;
  Side side = Side::Right;

  double operator()(double x) const;
};

/// Grid probability of each of the first n_states eigenvectors on one side of x_cut.
RVector side_probabilities(const EigenSystem& eig, const PositionGrid& grid, double x_cut,
                           Side side, int n_states);

/// Smallest index among the first n_states eigenvectors whose probability
/// beyond x_cut exceeds threshold. When none does strictly, probabilities
/// within 1e-6 of the threshold count as ties and the lowest such index wins
/// (symmetric wells). Throws NotFound otherwise.
int select_reactant_eigenstate(const EigenSystem& eig, const PositionGrid& grid, Side side,
                               double x_cut, double threshold = 0.5, int n_states = -1);

struct FilteredState {
  CVector grid_values;   // normalized on the grid
  CVector coefficients;  // Fock basis, from quadrature
};

/// Multiplies grid values by the filter, renormalizes and projects back onto
/// the Fock basis of `grid`. Throws DegenerateFilter for zero norm.
FilteredState apply_sigmoid_filter(const PositionGrid& grid, const CVector& psi_grid,
                                   const SigmoidFilter& filter);

/// |psi><psi|. Throws InvalidArgument unless psi has unit norm (1e-8).
CMatrix make_density(const CVector& psi);

struct InitialStateOptions {
  double threshold = 0.5;
  double tail = 0.5;
  std::optional<Side> reactant_side;  // default: side of the higher minimum
  std::optional<double> cutoff;       // default: barrier ridge
};

struct InitialState {
  int source_index = -1;
  Side reactant_side = Side::Right;
  double cutoff = 0.0;
  double prob_before = 0.0;  // reactant-side probability of the source state
  double prob_after = 0.0;   // same after filtering
  FilteredState filtered;
  CMatrix rho;  // M x M in the reduced eigenbasis, trace 1
};

/// Symmetric wells default to the left reactant.
Side default_reactant_side(const WellGeometry& g);

/// Selects the reactant eigenstate among the first M, filters it at the ridge
/// and expresses |psi><psi| in the reduced basis given by `transform`.
InitialState prepare_initial_state(const EigenSystem& eig, const CMatrix& transform,
                                   const PositionGrid& grid, const DoubleWellParams& dw,
                                   const InitialStateOptions& options = {});

}  // namespace kcsim
