#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "kcsim/chem.hpp"
#include "kcsim/mapping.hpp"

using namespace kcsim;
using doctest::Approx;

namespace {

// k2 is recovered from eps2 + (Delta + 2K)/2, which cancels the kinetic
// term 1/(2 c^2 m); its error scales with that term rather than with k2.
void check_close(const DoubleWellParams& a, const DoubleWellParams& b, double c, double rel) {
  const double kinetic = 1.0 / (2.0 * c * c * b.mass) / (c * c);
  CHECK(std::abs(a.k4 - b.k4) <= rel * std::abs(b.k4));
  CHECK(std::abs(a.k2 - b.k2) <= rel * (std::abs(b.k2) + kinetic));
  CHECK(std::abs(a.k1 - b.k1) <= rel * std::max(std::abs(b.k1), 1e-300));
  CHECK(std::abs(a.mass - b.mass) <= rel * b.mass);
}

}  // namespace

TEST_CASE("cis-cis forward map at c = 0.1") {
  const DoubleWellParams dw{7.1e-4, 4.0e-3, 0.0, 1836.0};
  const KerrCatParams k = chem_to_device(dw, 0.1);
  // Hand evaluation: K = 4 c^4 k4, eps2 = 1/(4 c^2 m) + c^2 k2 / 2,
  // Delta = -1/(2 c^2 m) + c^2 k2 - 8 c^4 k4.
  CHECK(k.kerr == Approx(2.84e-7).epsilon(1e-12).scale(0));
  CHECK(k.eps2 == Approx(1.0 / (4 * 0.01 * 1836.0) + 0.5 * 0.01 * 4.0e-3).epsilon(1e-12).scale(0));
  CHECK(k.eps2 == Approx(1.36365e-2).epsilon(1e-5).scale(0));
  CHECK(k.delta == Approx(-2.71937e-2).epsilon(1e-5).scale(0));
  CHECK(k.eps1 == 0.0);
  CHECK(k.eps2 / k.kerr == Approx(4.80e4).epsilon(2e-3).scale(0));
}

TEST_CASE("eps1 follows k1") {
  DoubleWellParams dw{1e-3, 5e-3, 2e-3, 1836.0};
  CHECK(chem_to_device(dw, 0.2).eps1 == Approx(-0.2 * 2e-3 / std::sqrt(2.0)).scale(0));
  dw.k1 = 0.0;
  CHECK(chem_to_device(dw, 0.2).eps1 == 0.0);
  KerrCatParams k = chem_to_device(dw, 0.2);
  CHECK(device_to_chem(k, 0.2).k1 == 0.0);
}

TEST_CASE("round trip on the shipped systems and random draws") {
  for (const auto& s : chemical_systems()) {
    for (double c : {0.05, 0.1, 0.3, 1.0}) {
      check_close(device_to_chem(chem_to_device(s.params, c), c), s.params, c, 1e-12);
    }
  }
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> lg(-5.0, -1.0);
  std::uniform_real_distribution<double> uc(0.05, 1.0);
  for (int i = 0; i < 200; ++i) {
    const DoubleWellParams dw{std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng)),
                              (i % 2 ? 1 : -1) * std::pow(10.0, lg(rng)), 1836.0};
    const double c = uc(rng);
    check_close(device_to_chem(chem_to_device(dw, c), c), dw, c, 1e-12);
  }
}

TEST_CASE("inverse map rejects infeasible device parameters") {
  CHECK_THROWS_AS(device_to_chem(KerrCatParams{0.0, 0.0, 0.0, 1.0}, 0.1), Error);
  CHECK_THROWS_AS(device_to_chem(KerrCatParams{0.0, -1.0, 0.0, 1.0}, 0.1), Error);
  // eps2 = 0, Delta = -2K gives u = v = 0.
  try {
    device_to_chem(KerrCatParams{-2.0, 1.0, 0.0, 0.0}, 0.1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfeasibleParameters);
  }
  CHECK_THROWS_AS(chem_to_device(DoubleWellParams{1, 1, 0, 1}, 0.0), Error);
}

TEST_CASE("inequality ratio") {
  const DoubleWellParams dw = find_system("cis-cis").params;
  CHECK(inequality_ratio(dw, 0.1) == Approx(1.0 / (1836.0 * 4.0e-3 * 1e-4)));
  CHECK(inequality_ratio(dw, 0.1) == Approx(1361.7).epsilon(1e-4).scale(0));
  CHECK(inequality_ratio(dw, 1.0) == Approx(0.1362).epsilon(1e-3).scale(0));
  const double c = 0.37;
  CHECK(inequality_ratio(dw, c / std::pow(10.0, 0.25)) == Approx(10.0 * inequality_ratio(dw, c)));
  for (double s : {0.5, 2.0, 3.0}) {
    CHECK(inequality_ratio(dw, s * c) == Approx(inequality_ratio(dw, c) / std::pow(s, 4)).epsilon(1e-13).scale(0));
  }
}

TEST_CASE("symmetric well geometry") {
  const auto cc = symmetric_well_geometry(4.0e-3, 7.1e-4);
  CHECK(cc.x0 == Approx(1.6783).epsilon(1e-4).scale(0));
  CHECK(cc.activation_energy == Approx(5.6338e-3).epsilon(1e-4).scale(0));
  const auto toy = symmetric_well_geometry(2.0, 0.5);
  CHECK(toy.x0 == Approx(std::sqrt(2.0)));
  CHECK(toy.activation_energy == Approx(2.0));
  CHECK(symmetric_well_geometry(2.0, 1.0).activation_energy == Approx(0.5 * toy.activation_energy));
  CHECK_THROWS_AS(symmetric_well_geometry(-1.0, 1.0), Error);
}

TEST_CASE("analyze_well finds the stationary points") {
  const DoubleWellParams sym{0.5, 2.0, 0.0, 1.0};
  const WellGeometry g = analyze_well(sym);
  CHECK(g.left_min == Approx(-std::sqrt(2.0)));
  CHECK(g.right_min == Approx(std::sqrt(2.0)));
  CHECK(std::abs(g.ridge) < 1e-12);
  CHECK(g.v_ridge - g.v_left == Approx(2.0));
  for (const auto& s : chemical_systems()) {
    const WellGeometry w = analyze_well(s.params);
    const auto dV = [&](double x) { return 4 * s.params.k4 * x * x * x - 2 * s.params.k2 * x + s.params.k1; };
    CHECK(std::abs(dV(w.left_min)) < 1e-14);
    CHECK(std::abs(dV(w.ridge)) < 1e-14);
    CHECK(std::abs(dV(w.right_min)) < 1e-14);
    CHECK(w.v_ridge > std::max(w.v_left, w.v_right));
    if (s.params.k1 > 0) CHECK(w.v_right > w.v_left);
  }
  CHECK_THROWS_AS(analyze_well(DoubleWellParams{1.0, 1.0, 5.0, 1.0}), Error);
}

TEST_CASE("c scan: ratios diverge as c shrinks and flags are consistent") {
  const DoubleWellParams dw = find_system("cis-cis").params;
  CScanOptions opt;
  opt.dim = 150;
  const CScanReport r = c_feasibility_scan(dw, {0.05, 0.1, 0.2, 0.5}, 6, DeviceLimits{}, opt);
  REQUIRE(r.points.size() == 4);
  for (std::size_t i = 1; i < r.points.size(); ++i) {
    CHECK(std::abs(r.points[i].eps2_over_K) < std::abs(r.points[i - 1].eps2_over_K));
    CHECK(std::abs(r.points[i].delta_over_K) < std::abs(r.points[i - 1].delta_over_K));
  }
  for (const auto& p : r.points) {
    CHECK(p.deviations.size() == 6u);
    for (double d : p.deviations) CHECK(d >= 0.0);
    CHECK(p.inequality == Approx(inequality_ratio(dw, p.c)));
  }
  CHECK(r.points[1].chemically_accurate);
  CHECK_FALSE(r.points[3].chemically_accurate);
  // cis-cis needs eps2/K ~ 5e4 at c = 0.1, far beyond the placeholder limits.
  CHECK_FALSE(r.points[1].device_feasible);

  DeviceLimits generous{1e6, 1e6, 1e6};
  CHECK(c_feasibility_scan(dw, {0.1}, 6, generous, opt).points[0].device_feasible);
  CHECK_THROWS_AS(c_feasibility_scan(dw, {0.2, 0.1}, 6, generous, opt), Error);
  CHECK_THROWS_AS(c_feasibility_scan(dw, {-0.1}, 6, generous, opt), Error);
  CHECK_THROWS_AS(c_feasibility_scan(dw, {0.1}, 0, generous, opt), Error);
}

TEST_CASE("per-level deviations do not grow as c decreases") {
  // Per level this holds while no two levels of the two spectra swap order.
  // cis-trans interleaves left- and right-well states, and the KC shift moves
  // them past each other already at c = 0.25, so only its worst level is
  // checked.
  std::vector<double> cs;
  for (int i = 0; i < 10; ++i) cs.push_back(0.05 + 0.05 * i);
  for (const auto& s : chemical_systems()) {
    CAPTURE(s.name);
    const CScanReport r = c_feasibility_scan(s.params, cs, s.expected_states_below_barrier, DeviceLimits{});
    for (std::size_t i = 1; i < r.points.size(); ++i) {
      if (!r.points[i].chemically_accurate || s.name == "cis-trans") break;
      for (std::size_t l = 0; l < r.points[i].deviations.size(); ++l) {
        CHECK(r.points[i - 1].deviations[l] <= r.points[i].deviations[l] + 1e-12);
      }
    }
    double prev = 0.0;
    for (const auto& p : r.points) {
      const double worst = *std::max_element(p.deviations.begin(), p.deviations.end());
      CHECK(worst >= prev);
      prev = worst;
    }
  }
}
