#include "doctest.h"
#include "helpers.hpp"
#include "kcsim/chem.hpp"
#include "kcsim/mapping.hpp"
#include "kcsim/spectra.hpp"
#include "kcsim/states.hpp"

using namespace kcsim;
using doctest::Approx;

namespace {

struct Setup {
  DoubleWellParams dw;
  double scale;
  FockOperatorSet ops;
  EigenSystem eig;
  PositionGrid grid;

  explicit Setup(const DoubleWellParams& p, int dim = 300)
      : dw(p),
        scale(suggested_basis_scale(p)),
        ops(make_fock_operators(dim, scale)),
        eig(eigendecompose(build_double_well_hamiltonian(p, ops), &ops.x)),
        grid(build_position_grid(dim, scale)) {}

  CVector grid_state(int k) const { return to_grid(grid, eig.vectors.col(k)).row(0).transpose(); }

  double side_prob(const CVector& psi, double cut, Side side) const {
    double p = 0.0;
    for (int j = 0; j < grid.size(); ++j) p += grid.weights[j] * std::norm(psi[j]) * region_weight(grid.points[j], cut, side);
    return p;
  }
};

}  // namespace

TEST_CASE("sigmoid filter values") {
  SigmoidFilter f{1.0, 0.5, Side::Right};
  CHECK(f(1.0) == Approx(0.5));
  CHECK(f(3.0) > 0.98);
  CHECK(f(-1.0) < 0.02);
  SigmoidFilter l{1.0, 0.5, Side::Left};
  for (double x : {-3.0, 0.0, 1.3, 4.0}) {
    CHECK(f(x) + l(x) == Approx(1.0));
    CHECK(f(x) > 0.0);
    CHECK(f(x) < 1.0);
  }
  CHECK(region_weight(0.0, 0.0, Side::Right) == 0.5);
  CHECK(region_weight(0.1, 0.0, Side::Right) == 1.0);
  CHECK(region_weight(0.1, 0.0, Side::Left) == 0.0);
}

TEST_CASE("symmetric well picks the ground state and the filter breaks the tie") {
  const Setup s(find_system("cis-cis").params);
  const RVector left = side_probabilities(s.eig, s.grid, 0.0, Side::Left, 4);
  CHECK(left[0] == Approx(0.5).epsilon(1e-6));
  CHECK(select_reactant_eigenstate(s.eig, s.grid, Side::Left, 0.0) == 0);
  CHECK(select_reactant_eigenstate(s.eig, s.grid, Side::Right, 0.0) == 0);
  try {
    select_reactant_eigenstate(s.eig, s.grid, Side::Left, 0.0, 1.0, 20);
    FAIL("expected NotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFound);
  }
}

TEST_CASE("adenine-thymine initial state sits in the higher well") {
  const Setup s(find_system("at").params);
  const WellGeometry g = analyze_well(s.dw);
  CHECK(g.v_right > g.v_left);
  CHECK(default_reactant_side(g) == Side::Right);
  const int k = select_reactant_eigenstate(s.eig, s.grid, Side::Right, g.ridge);
  CHECK(side_probabilities(s.eig, s.grid, g.ridge, Side::Right, k + 1)[k] > 0.5);
  for (int i = 0; i < k; ++i) CHECK(side_probabilities(s.eig, s.grid, g.ridge, Side::Right, k + 1)[i] <= 0.5);
}

TEST_CASE("filter limits") {
  const Setup s(find_system("cis-cis").params);
  const CVector psi = s.grid_state(0);

  // Small tail reproduces hard masking.
  const FilteredState sharp = apply_sigmoid_filter(s.grid, psi, {0.0, 1e-9, Side::Left});
  CHECK(s.side_prob(sharp.grid_values, 0.0, Side::Left) == Approx(1.0).epsilon(1e-6));
  for (int j = 1001; j < s.grid.size(); ++j) CHECK(std::abs(sharp.grid_values[j]) < 1e-12);

  // A state far from the cutoff is left alone.
  const FilteredState far = apply_sigmoid_filter(s.grid, psi, {-8.0, 0.5, Side::Right});
  CHECK((far.grid_values - psi).norm() * std::sqrt(s.grid.weights[1]) < 1e-3);

  CHECK_THROWS_AS(apply_sigmoid_filter(s.grid, CVector::Zero(s.grid.size()), {0.0, 0.5, Side::Left}), Error);
  CHECK_THROWS_AS(apply_sigmoid_filter(s.grid, psi, {0.0, 0.0, Side::Left}), Error);
}

TEST_CASE("prepared initial states") {
  for (const auto& sys : chemical_systems()) {
    CAPTURE(sys.name);
    const Setup s(sys.params);
    const ReducedOperatorSet r = reduce_subspace(s.eig, build_double_well_hamiltonian(s.dw, s.ops), s.ops, 20);
    const InitialState st = prepare_initial_state(s.eig, r.transform, s.grid, s.dw);
    CHECK(st.prob_before > 0.5 - 1e-6);
    CHECK(st.prob_after > 0.99);
    CHECK(st.rho.trace().real() == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(st.rho.trace().imag()) < 1e-14);
    CHECK(hermiticity_defect(st.rho) < 1e-14);
    CHECK((st.rho * st.rho).trace().real() == Approx(1.0).epsilon(1e-12));
    const RVector ev = Eigen::SelfAdjointEigenSolver<CMatrix>(st.rho).eigenvalues();
    CHECK(ev.minCoeff() > -1e-12);
  }
}

TEST_CASE("mirror covariance of the initial state") {
  DoubleWellParams dw = find_system("gc").params;
  DoubleWellParams mirrored = dw;
  mirrored.k1 = -dw.k1;
  const Setup a(dw), b(mirrored);
  const WellGeometry ga = analyze_well(dw), gb = analyze_well(mirrored);
  CHECK(gb.ridge == Approx(-ga.ridge));
  CHECK(default_reactant_side(gb) == opposite(default_reactant_side(ga)));

  const ReducedOperatorSet ra = reduce_subspace(a.eig, build_double_well_hamiltonian(dw, a.ops), a.ops, 20);
  const ReducedOperatorSet rb = reduce_subspace(b.eig, build_double_well_hamiltonian(mirrored, b.ops), b.ops, 20);
  const InitialState sa = prepare_initial_state(a.eig, ra.transform, a.grid, dw);
  const InitialState sb = prepare_initial_state(b.eig, rb.transform, b.grid, mirrored);
  CHECK(sa.source_index == sb.source_index);
  CHECK(sa.prob_after == Approx(sb.prob_after).epsilon(1e-8));
  // psi_b(x) = +-psi_a(-x) on the symmetric grid.
  const int n = a.grid.size();
  const CVector& pa = sa.filtered.grid_values;
  const CVector& pb = sb.filtered.grid_values;
  Complex inner = 0.0;
  for (int j = 0; j < n; ++j) inner += pb[j] * std::conj(pa[n - 1 - j]);
  const double sign = inner.real() > 0 ? 1.0 : -1.0;
  double diff = 0.0;
  for (int j = 0; j < n; ++j) diff = std::max(diff, std::abs(pb[j] - sign * pa[n - 1 - j]));
  CHECK(diff < 1e-8);
}

TEST_CASE("make_density") {
  CVector e0 = CVector::Zero(4);
  e0[0] = 1.0;
  const CMatrix r = make_density(e0);
  CHECK(r(0, 0) == Complex(1.0));
  CHECK(max_abs(r) == 1.0);
  CHECK((r * r).trace().real() == Approx(1.0));
  CHECK_THROWS_AS(make_density(2.0 * e0), Error);
}

TEST_CASE("side parsing") {
  CHECK(parse_side("left") == Side::Left);
  CHECK(parse_side("right") == Side::Right);
  CHECK_THROWS_AS(parse_side("up"), Error);
}
