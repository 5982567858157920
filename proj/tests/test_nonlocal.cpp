#include <doctest.h>

#include <cmath>

#include "darboux2d/catalog.hpp"
#include "darboux2d/errors.hpp"
#include "darboux2d/moutard.hpp"
#include "darboux2d/nonlocal.hpp"
#include "test_util.hpp"

using namespace darboux;
using testutil::kPi;

namespace {

const Point2 kMid{kPi / 2, kPi / 2};

ScalarField2 drift_h() {
  return make_field("H", [](auto x, auto y) {
    (void)x;
    using std::sin;
    return -log_abs(sin(y));
  }, [](Point2 p) { return std::sin(p.y) != 0.0; });
}

ScalarField2 trig_shift(double p = 1.0, double x0 = 0.0) {
  return -2.0 * drift_h() + tanh_profile(p, x0).s;
}

ScalarField2 sin_x() {
  return make_field("sin x", [](auto x, auto y) {
    (void)y;
    using std::sin;
    return sin(x);
  });
}

ScalarField2 sin_y() {
  return make_field("sin y", [](auto x, auto y) {
    (void)x;
    using std::sin;
    return sin(y);
  });
}

ScalarField2 linear_b() {
  return make_field("2+x", [](auto x, auto y) {
    (void)y;
    return 2.0 + x;
  });
}

ScalarField2 radial_shift() { return shift_from_b(-1.0 * radial_B(1.5, 1.0, 1.0)); }

RecoveryOptions avoid_origin() {
  RecoveryOptions o;
  o.keep_out = [](Point2 p) { return p.x * p.x + p.y * p.y < 0.0625; };
  return o;
}

NonlocalPotential trig_q(double c) {
  RecoveryOptions o;
  o.keep_out = [](Point2 p) { return std::fabs(std::sin(p.y)) < 0.05; };
  return recover_q(sin_x(), sin_y(), kMid, c, kDefaultPanelsPerUnit, o);
}

}  // namespace

TEST_SUITE("nonlocal") {
  TEST_CASE("constant shift is degenerate") {
    CHECK_THROWS_AS(coefficients(constant_field(0.0), constant_field(3.0), {1.0, 1.0}), DegenerateError);
  }

  TEST_CASE("coefficients for h = 0 reduce to the gradient of s") {
    const ScalarField2 s = shift_from_b(oracle::b_three_halves());
    const DarbouxCoefficients c = coefficients(constant_field(0.0), s, {0.0, 2.0});
    // B = 7/9, B_y = 24/81 at (0, 2), so s_y = -B_y/B = -8/21 and F = 2 s_y^2.
    CHECK(c.f == doctest::Approx(128.0 / 441.0).epsilon(1e-10));
    CHECK(c.r1 == doctest::Approx(c.f1 / c.f));
    CHECK(c.r2 == doctest::Approx(c.f2 / c.f));
  }

  TEST_CASE("trigonometric coefficients are finite") {
    const DarbouxCoefficients c = coefficients(drift_h(), trig_shift(), {1.0, 1.0});
    CHECK(std::isfinite(c.f));
    CHECK(c.f != 0.0);
    CHECK(std::isfinite(c.r1));
    CHECK(std::isfinite(c.r2));
  }

  TEST_CASE("shift residuals vanish on admissible shifts") {
    const ScalarField2 zero = constant_field(0.0);
    for (const Point2 p : {Point2{0.5, 1.0}, Point2{1.0, -2.0}, Point2{3.0, 0.0}}) {
      const auto [a, b] = shift_residuals(zero, shift_from_b(linear_b()), p);
      CHECK(std::fabs(a) < 1e-8);
      CHECK(std::fabs(b) < 1e-8);
    }
    const auto [r1, r2] = shift_residuals(zero, radial_shift(), {0.0, 2.0});
    CHECK(std::fabs(r1) < 1e-7);
    CHECK(std::fabs(r2) < 1e-7);
    const ScalarField2 s = -2.0 * drift_h() + separable_S(2.0, 1.0, 0.0).s;
    const auto [t1, t2] = shift_residuals(drift_h(), s, {1.0, 1.0});
    CHECK(std::fabs(t1) < 1e-7);
    CHECK(std::fabs(t2) < 1e-7);
  }

  TEST_CASE("inadmissible shifts leave a residual") {
    const ScalarField2 s = shift_from_b(make_field("x^2+1", [](auto x, auto y) {
      (void)y;
      return x * x + 1.0;
    }));
    const auto [a, b] = shift_residuals(constant_field(0.0), s, {1.0, 0.5});
    CHECK(std::fabs(a) + std::fabs(b) > 1e-3);
  }

  TEST_CASE("new potential") {
    const ScalarField2 u = oracle::radial_potential_three_halves();
    CHECK(new_potential(u, constant_field(0.0), constant_field(0.0), {1.0, 0.5}) == doctest::Approx(u({1.0, 0.5})));
    CHECK(new_potential(constant_field(0.0), constant_field(0.0), shift_from_b(oracle::b_three_halves()), {0.0, 2.0}) ==
          doctest::Approx(-36.0 / 81.0).epsilon(1e-10));
    const double expected = -1.0 + 2.0 + 2.0 / std::pow(std::sinh(kPi / 2), 2);
    CHECK(new_potential(constant_field(-1.0), drift_h(), trig_shift(), kMid) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(1.3776452).epsilon(1e-7));
    const ScalarField2 field = new_potential_field(constant_field(-1.0), drift_h(), trig_shift());
    const ScalarField2 u46 = oracle::trig_potential_intermediate(1.0, 0.0);
    for (const Point2 p : testutil::lattice(0.5, 3.0, 0.5, 3.0)) CHECK(field(p) == doctest::Approx(u46(p)).epsilon(1e-10));
  }

  TEST_CASE("new solution, trigonometric example") {
    const ScalarField2 y = new_solution(sin_x(), trig_q(2.0), drift_h(), trig_shift());
    // The general formula yields the closed-form seed up to the factor -1.
    CHECK(-y(kMid) == doctest::Approx(2.0 / std::tanh(kPi / 2)).epsilon(1e-10));
    const ScalarField2 seed = oracle::trig_seed(1.0, 0.0, 2.0);
    for (const Point2 p : testutil::lattice(0.6, 2.9, 0.6, 2.9)) CHECK(-y(p) == doctest::Approx(seed(p)).epsilon(1e-8));
  }

  TEST_CASE("new solution, radial example") {
    const ScalarField2 one = constant_field(1.0);
    const ScalarField2 zero = constant_field(0.0);
    const NonlocalPotential q1 = recover_q(oracle::y_l1(), one, {1.0, 0.0}, 0.0, 64, avoid_origin());
    const NonlocalPotential q2 = recover_q(oracle::y_l2(), one, {1.0, 0.0}, 1.0, 64, avoid_origin());
    const ScalarField2 s = radial_shift();
    const ScalarField2 y1 = new_solution(oracle::y_l1(), q1, zero, s);
    const ScalarField2 y2 = new_solution(oracle::y_l2(), q2, zero, s);
    CHECK(y1({1.0, 1.0}) == doctest::Approx(1.3581942).epsilon(1e-6));
    CHECK(-2.0 * y1({1.0, 1.0}) == doctest::Approx(oracle::y_tilde_l1(0.0)({1.0, 1.0})).epsilon(1e-8));
    CHECK(std::fabs(y2({1.0, 1.0})) < 1e-8);
    for (const Point2 p : {Point2{2.0, 0.5}, Point2{-0.7, 1.4}, Point2{0.3, -2.2}}) {
      CHECK(-2.0 * y1(p) == doctest::Approx(oracle::y_tilde_l1(0.0)(p)).epsilon(1e-8));
      CHECK(-2.0 * y2(p) == doctest::Approx(oracle::y_tilde_l2(0.0)(p)).epsilon(1e-8));
    }
  }

  TEST_CASE("Fokker-Planck image is consistent with the Schroedinger image") {
    const ScalarField2 h = drift_h(), s = trig_shift();
    const NonlocalPotential q = trig_q(2.0);
    const ScalarField2 w = substitution_w_from_y(sin_x(), h);
    const ScalarField2 w_new = fokker_planck_new_w(w, q.field(), h, s);
    const ScalarField2 y_new = new_solution(sin_x(), q, h, s);
    const ScalarField2 back = substitution_y_from_w(w_new, h + s);
    for (const Point2 p : testutil::lattice(0.6, 2.9, 0.6, 2.9)) {
      CHECK(back(p) == doctest::Approx(y_new(p)).epsilon(1e-9));
    }
    const ScalarField2 w_map = fokker_planck_new_w(w, q.field(), s, [&](Point2 p) { return coefficients(h, s, p); });
    CHECK(w_map({1.0, 2.0}) == doctest::Approx(w_new({1.0, 2.0})).epsilon(1e-12));

    const ScalarField2 zero = constant_field(0.0);
    const NonlocalPotential q1 = recover_q(oracle::y_l1(), constant_field(1.0), {1.0, 0.0}, 0.0, 64, avoid_origin());
    const ScalarField2 rs = radial_shift();
    const Point2 p{1.5, 0.5};
    CHECK(fokker_planck_new_w(oracle::y_l1(), q1.field(), zero, rs)(p) ==
          doctest::Approx(new_solution(oracle::y_l1(), q1, zero, rs)(p) * std::exp(-rs(p))));
  }

  TEST_CASE("h = 0 residual") {
    const ScalarField2 harmonic = make_field("1+x+y", [](auto x, auto y) { return 1.0 + x + y; });
    const auto [a, b] = h0_residual(harmonic, {0.3, 0.7});
    CHECK(a == 0.0);
    CHECK(b == 0.0);
    const auto [c, d] = h0_residual(radial_B(1.5, 1.0, 1.0), {0.0, 2.0});
    CHECK(std::fabs(c) < 1e-7);
    CHECK(std::fabs(d) < 1e-7);
    const ScalarField2 x2 = make_field("x^2", [](auto x, auto y) {
      (void)y;
      return x * x;
    });
    const auto [e, f] = h0_residual(x2, {1.0, 0.0});
    CHECK(std::fabs(e) + std::fabs(f) > 1e-3);
  }

  TEST_CASE("first integral") {
    const ScalarField2 b = radial_B(1.5, 1.0, 1.0);
    for (const Point2 p : testutil::lattice(0.5, 2.5, 0.5, 2.5)) {
      if (std::fabs(std::hypot(p.x, p.y) - 1.0) < 1e-3) continue;
      CHECK(h0_first_integral(b, p) == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(h0_first_integral(reciprocal(b), p) == doctest::Approx(1.0).epsilon(1e-8));
    }
    const ScalarField2 b4 = radial_B(1.5, 1.0, 4.0);
    CHECK(h0_first_integral(b4, {2.0, 0.5}) == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(h0_first_integral(reciprocal(b4), {2.0, 0.5}) == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(h0_first_integral(radial_B(2.0, 3.0, 1.0), {0.4, -1.1}) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(h0_first_integral(linear_b(), {1.0, 1.0}), ZeroLaplacianError);
  }

  TEST_CASE("radial B") {
    CHECK(radial_B(1.5, 1.0, 1.0)({0.0, 2.0}) == doctest::Approx(-7.0 / 9.0));
    CHECK(radial_B(1.0, 1.0, 1.0)({2.0, 0.0}) == doctest::Approx(-0.6));
    CHECK(radial_B(1.5, 1.0, 4.0)({0.0, 2.0}) == doctest::Approx(-14.0 / 9.0));
    CHECK(-1.0 * radial_B(1.5, 1.0, 1.0)({0.7, 0.2}) == doctest::Approx(oracle::b_three_halves()({0.7, 0.2})));
    CHECK_THROWS_AS(radial_B(1.5, 1.0, 0.0), ParamError);
    CHECK_THROWS_AS(radial_B(1.5, 1.0, -1.0), ParamError);
    CHECK_FALSE(radial_B(1.5, 1.0, 1.0).in_domain({0.0, 0.0}));
    CHECK(radial_B(1.0, 1.0, 1.0).in_domain({0.0, 0.0}));
    CHECK(radial_B(1.0, 1.0, 1.0).in_domain({3.0, 0.0}));
    CHECK_FALSE(radial_B(2.0, -1.0, 1.0).in_domain({1.0, 0.0}));
  }

  TEST_CASE("radial potential") {
    CHECK(radial_potential(1.0, 1.0, {0.0, 0.0}) == doctest::Approx(-8.0));
    CHECK(radial_potential(1.5, 1.0, {1.0, 0.0}) == doctest::Approx(-4.5));
    CHECK(radial_potential(2.0, 3.0, {1.0, 1.0}) == doctest::Approx(-192.0 / 49.0));
    const ScalarField2 u = radial_potential_field(1.5, 1.0);
    const ScalarField2 oracle_u = oracle::radial_potential_three_halves();
    for (const Point2 p : testutil::lattice(-2, 2, 0.3, 2)) CHECK(u(p) == doctest::Approx(oracle_u(p)).epsilon(1e-12));
    // Laplacian(B_r) / B_r.
    const ScalarField2 b = radial_B(2.0, 3.0, 1.0);
    CHECK(laplacian_at(b, {0.4, 0.9}) / b({0.4, 0.9}) == doctest::Approx(radial_potential(2.0, 3.0, {0.4, 0.9})));
  }

  TEST_CASE("radial potential scaling") {
    const double c1 = 1.5, c2 = 1.0, lambda = 1.7;
    const double c2s = c2 * std::pow(lambda, 2 * c1);
    for (const Point2 p : {Point2{0.3, 0.4}, Point2{1.0, 2.0}}) {
      const Point2 q{lambda * p.x, lambda * p.y};
      CHECK(radial_potential(c1, c2s, q) == doctest::Approx(radial_potential(c1, c2, p) / (lambda * lambda)));
    }
  }

  TEST_CASE("separable profile") {
    const SeparableProfile flat = separable_S(2.0, 0.0, 0.7);
    CHECK(flat.degenerate);
    CHECK(flat.s({1.3, 5.0}) == doctest::Approx(0.7));
    const SeparableProfile t = tanh_profile(1.0, 0.0);
    CHECK_FALSE(t.degenerate);
    CHECK(t.s({2.0, 0.0}) == doctest::Approx(std::log(std::tanh(2.0))).epsilon(1e-14));
    CHECK(std::fabs(t.s({2.0, 0.0}) + 0.0366370) < 2e-6);
    CHECK(t.s({2.0, 0.0}) == doctest::Approx(separable_S(2.0, 1.0, 0.0).s({2.0, 9.0})).epsilon(1e-14));
    for (int k = 0; k < 25; ++k) {
      const double x = 0.3 + 0.1 * k;
      CHECK(std::fabs(separable_ode_residual(t.s, x)) < 1e-9);
    }
    CHECK(std::fabs(separable_ode_residual(separable_S(3.0, 2.0, 0.5).s, 1.0)) < 1e-9);
    CHECK_THROWS_AS(t.s({-1.0, 0.0}), BranchError);
  }

  TEST_CASE("separable potential") {
    const double expected = 1.3776452;
    CHECK(separable_potential(drift_h(), 2.0, 1.0, kMid) == doctest::Approx(expected).epsilon(1e-7));
    const ScalarField2 u = separable_potential_field(drift_h(), 2.0, 1.0);
    const ScalarField2 u46 = oracle::trig_potential_intermediate(1.0, 0.0);
    for (const Point2 p : testutil::lattice(0.5, 3.0, 0.5, 3.0)) CHECK(u(p) == doctest::Approx(u46(p)).epsilon(1e-10));
    // C2 -> 0 drops the profile term: u_H + 2 H'' = -1 + 2 / sin^2 y.
    CHECK(separable_potential(drift_h(), 2.0, 0.0, {0.4, 1.0}) ==
          doctest::Approx(-1.0 + 2.0 / std::pow(std::sin(1.0), 2)));
    // H = 0 leaves the wall profile: 4 C1^2 where e^{C1 x} = 2 C2.
    CHECK(separable_potential(constant_field(0.0), 2.0, 1.0, {std::log(2.0) / 2.0, 0.0}) == doctest::Approx(16.0));
  }

  TEST_CASE("certify") {
    const GridSpec probe{0.5, 3.0, 0.5, 3.0, 5, 5};
    const ShiftFunction trig = certify(drift_h(), trig_shift(), probe);
    CHECK(trig.certificate < 1e-7);
    CHECK_FALSE(trig.moutard_case);
    const ShiftFunction m = certify(drift_h(), -2.0 * drift_h(), probe);
    CHECK(m.moutard_case);
    const ShiftFunction radial =
        certify(constant_field(0.0), radial_shift(), {-2, 2, -2, 2, 5, 5},
                [](Point2 p) { return std::fabs(std::hypot(p.x, p.y) - 1.0) > 0.1 && testutil::outside_disk(p, 0.3); });
    CHECK(radial.certificate < 1e-7);
    CHECK_THROWS_AS(certify(drift_h(), trig_shift(), probe, [](Point2) { return false; }), EmptyMaskError);
  }
}
