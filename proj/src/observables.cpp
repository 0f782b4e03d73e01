#include "kcsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kcsim/mapping.hpp"
#include "kcsim/operators.hpp"
#include "kcsim/parallel.hpp"

namespace kcsim {

RegionProjector heaviside_projector(const PositionGrid& grid, const CMatrix& basis, double x_cut,
                                    Side side) {
  const CMatrix phi = to_grid(grid, basis);  // M x npts
  RVector w(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    w[j] = grid.weights[j] * region_weight(grid.points[j], x_cut, side);
  }
  RegionProjector out;
  out.x_cut = x_cut;
  out.side = side;
  out.op = phi.conjugate() * w.asDiagonal() * phi.transpose();
  return out;
}

double population(const CMatrix& rho, const RegionProjector& projector) {
  if (rho.rows() != projector.op.rows()) {
    throw Error(ErrorCode::InvalidDimension, "density matrix and projector sizes differ");
  }
  return (rho.cwiseProduct(projector.op.transpose())).sum().real();
}

double overlap(const CMatrix& rho_t, const CMatrix& rho0) {
  return (rho_t.cwiseProduct(rho0.transpose())).sum().real();
}

namespace {

struct LinearFit {
  double C = 0.0;
  double A = 0.0;
  double ssr = std::numeric_limits<double>::infinity();
};

LinearFit fit_at(const std::vector<double>& t, const std::vector<double>& v, double T) {
  // Normal equations for [1, e] with e = exp(-t/T).
  double s1 = 0.0, se = 0.0, see = 0.0, sv = 0.0, sev = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = std::exp(-t[i] / T);
    s1 += 1.0;
    se += e;
    see += e * e;
    sv += v[i];
    sev += e * v[i];
  }
  LinearFit f;
  const double det = s1 * see - se * se;
  if (!(std::abs(det) > 1e-14 * s1 * see)) return f;
  f.C = (see * sv - se * sev) / det;
  f.A = (s1 * sev - se * sv) / det;
  double ssr = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = v[i] - f.C - f.A * std::exp(-t[i] / T);
    ssr += r * r;
  }
  f.ssr = ssr;
  return f;
}

}  // namespace

RateResult fit_exponential(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size()) {
    throw Error(ErrorCode::InvalidArgument, "times and values differ in length");
  }
  if (times.size() < 4) throw Error(ErrorCode::FitFailure, "need at least 4 samples");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw Error(ErrorCode::InvalidArgument, "times must increase");
  }
  // Shift time origin so exp(-t/T) stays well scaled.
  const double t0 = times.front();
  std::vector<double> t(times.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = times[i] - t0;
  const double span = t.back();
  const double min_dt = [&] {
    double d = span;
    for (std::size_t i = 1; i < t.size(); ++i) d = std::min(d, t[i] - t[i - 1]);
    return d;
  }();

  const double lo = std::log(0.1 * min_dt);
  const double hi = std::log(100.0 * span);
  const int n_scan = 600;
  std::vector<double> ssr(n_scan + 1);
  int best = 0;
  for (int k = 0; k <= n_scan; ++k) {
    ssr[k] = fit_at(t, values, std::exp(lo + (hi - lo) * k / n_scan)).ssr;
    if (ssr[k] < ssr[best]) best = k;
  }
  if (best == 0 || best == n_scan) {
    throw Error(ErrorCode::FitFailure, "no decay time inside the scanned range");
  }

  double a = lo + (hi - lo) * (best - 1) / n_scan;
  double b = lo + (hi - lo) * (best + 1) / n_scan;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = fit_at(t, values, std::exp(x1)).ssr;
  double f2 = fit_at(t, values, std::exp(x2)).ssr;
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = fit_at(t, values, std::exp(x1)).ssr;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = fit_at(t, values, std::exp(x2)).ssr;
    }
  }
  const double T = std::exp(0.5 * (a + b));
  const LinearFit lf = fit_at(t, values, T);

  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (!(std::abs(lf.A) > 1e-10 * std::max(vmax, 1e-300))) {
    throw Error(ErrorCode::FitFailure, "fitted amplitude vanishes");
  }

  RateResult r;
  r.T = T;
  r.offset = lf.C;
  r.amplitude = lf.A * std::exp(t0 / T);  // referred back to the original time origin
  r.residual_norm = std::sqrt(lf.ssr);

  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd J(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = std::exp(-t[i] / T);
    J(i, 0) = 1.0;
    J(i, 1) = e;
    J(i, 2) = lf.A * t[i] / (T * T) * e;
  }
  const double s2 = n > 3 ? lf.ssr / static_cast<double>(n - 3) : 0.0;
  const Eigen::Matrix3d JtJ = J.transpose() * J;
  const Eigen::Matrix3d cov = s2 * JtJ.inverse();
  r.sigma = std::sqrt(std::max(0.0, cov(2, 2)));
  r.well_conditioned = n >= 10 && span >= 2.0 * T;
  return r;
}

double device_cell_timescale(double eps1, double eps2, const DeviceSweepOptions& o) {
  const FockOperatorSet ops = make_fock_operators(o.dim, 1.0);
  const KerrCatParams kc{o.delta, o.kerr, eps1, eps2};
  const CMatrix H = -build_kerr_cat_hamiltonian(kc, ops.a);
  const EigenSystem eig = eigendecompose(H);
  const ReducedOperatorSet r = reduce_subspace(eig, H, ops, o.M);
  return spectral_timescale(build_lindbladian(r.H, r.a, r.a_dag, o.diss)).T;
}

std::vector<SweepCell> sweep_device_grid(const std::vector<double>& eps1_values,
                                         const std::vector<double>& eps2_values,
                                         const DeviceSweepOptions& options) {
  if (!(options.kerr > 0.0)) throw Error(ErrorCode::InvalidArgument, "K must be positive");
  if (options.M > options.dim) throw Error(ErrorCode::InvalidDimension, "M exceeds dim");
  validate(options.diss);
  std::vector<SweepCell> cells;
  for (double e2 : eps2_values) {
    for (double e1 : eps1_values) cells.push_back({e1, e2, std::numeric_limits<double>::quiet_NaN(), "pending"});
  }
  parallel_for(cells.size(), options.workers, [&](std::size_t i) {
    try {
      cells[i].T = device_cell_timescale(cells[i].eps1, cells[i].eps2, options);
      cells[i].status = "ok";
    } catch (const std::exception& e) {
      cells[i].status = e.what();
    }
  });
  return cells;
}

}  // namespace kcsim
