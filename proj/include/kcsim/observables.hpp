#pragma once

#include <string>
#include <vector>

#include "kcsim/dynamics.hpp"
#include "kcsim/spectra.hpp"
#include "kcsim/states.hpp"

namespace kcsim {

struct RegionProjector {
  CMatrix op;  // in the basis whose Fock coefficients were supplied
  double x_cut = 0.0;
  Side side = Side::Right;
};

/// Theta_ij = sum_j w_j phi_i(x_j) phi_j(x_j) over grid points beyond x_cut
/// (half weight on the cut itself). `basis` holds Fock coefficients of the
/// dynamics basis in its columns (dim x M).
RegionProjector heaviside_projector(const PositionGrid& grid, const CMatrix& basis, double x_cut,
                                    Side side);

/// Re Tr(rho Theta).
double population(const CMatrix& rho, const RegionProjector& projector);

/// Re Tr(rho_t rho_0).
double overlap(const CMatrix& rho_t, const CMatrix& rho0);

struct RateResult {
  double T = 0.0;
  double sigma = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double residual_norm = 0.0;
  bool well_conditioned = true;  // >= 10 samples spanning >= 2 T
};

/// Least-squares fit of v(t) = C + A exp(-t/T). T is located by a log-spaced
/// scan followed by golden-section refinement; A and C are solved in closed
/// form for each trial T. sigma is the linearized 1-sigma error on T. Throws
/// FitFailure when the optimum sits on the scan boundary or the amplitude
/// vanishes.
RateResult fit_exponential(const std::vector<double>& times, const std::vector<double>& values);

struct DeviceSweepOptions {
  int dim = 60;
  int M = 20;
  double delta = 0.0;
  double kerr = 1.0;
  DissipationParams diss{0.1, 0.1};
  int workers = 1;
};

struct SweepCell {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double T = 0.0;  // NaN when failed
  std::string status = "ok";
};

/// Spectral T_X over an (eps1, eps2) grid in device units. Each cell builds
/// -H_KC, keeps its lowest M eigenstates and diagonalizes the generator.
/// Failed cells keep T = NaN and carry the error text in `status`. Cells are
/// ordered eps2-major.
std::vector<SweepCell> sweep_device_grid(const std::vector<double>& eps1_values,
                                         const std::vector<double>& eps2_values,
                                         const DeviceSweepOptions& options);

double device_cell_timescale(double eps1, double eps2, const DeviceSweepOptions& options);

}  // namespace kcsim
