#include <doctest.h>

#include <cmath>

#include "darboux2d/catalog.hpp"
#include "darboux2d/errors.hpp"
#include "darboux2d/moutard.hpp"
#include "test_util.hpp"

using namespace darboux;
using testutil::kPi;

namespace {

const Point2 kMid{kPi / 2, kPi / 2};

ScalarField2 neg_log_sin_y() {
  return make_field("H", [](auto x, auto y) {
    (void)x;
    using std::sin;
    return -log_abs(sin(y));
  }, [](Point2 p) { return std::sin(p.y) != 0.0; });
}

ScalarField2 coord_x() {
  return make_field("x", [](auto x, auto y) {
    (void)y;
    return x;
  });
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

RecoveryOptions avoid_origin() {
  RecoveryOptions o;
  o.keep_out = [](Point2 p) { return p.x * p.x + p.y * p.y < 0.0625; };
  return o;
}

}  // namespace

TEST_SUITE("moutard") {
  TEST_CASE("drift potential") {
    CHECK(drift_potential(constant_field(0.0), {0.3, 0.4}) == 0.0);
    for (const Point2 p : {kMid, Point2{0.3, 1.1}, Point2{2.0, 2.7}}) {
      CHECK(drift_potential(neg_log_sin_y(), p) == doctest::Approx(-1.0).epsilon(1e-12));
    }
    CHECK(drift_potential(-1.0 * coord_x(), {5.0, -1.0}) == doctest::Approx(1.0));
    CHECK(drift_potential_field(neg_log_sin_y())({1.0, 1.0}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(drift_potential(neg_log_sin_y(), {1.0, 0.0}), DomainError);
  }

  TEST_CASE("solution substitutions") {
    CHECK(substitution_y_from_w(constant_field(1.0), constant_field(0.0))({2.0, 3.0}) == 1.0);
    CHECK(substitution_y_from_w(coord_x(), constant_field(std::log(2.0)))({1.5, 0.0}) ==
          doctest::Approx(3.0));
    const ScalarField2 y = sin_x();
    const ScalarField2 h = neg_log_sin_y();
    const ScalarField2 back = substitution_y_from_w(substitution_w_from_y(y, h), h);
    CHECK(back({0.7, 1.2}) == doctest::Approx(y({0.7, 1.2})));
  }

  TEST_CASE("Moutard potential values") {
    CHECK(moutard_potential(constant_field(0.0), constant_field(1.0), {1.0, 1.0}) == 0.0);
    CHECK(moutard_potential(constant_field(0.0), coord_x(), {2.0, 0.3}) == doctest::Approx(0.5));
    const ScalarField2 u46 = oracle::trig_potential_intermediate(1.0, 0.0);
    const ScalarField2 seed = oracle::trig_seed(1.0, 0.0, 2.0);
    const ScalarField2 u48 = oracle::trig_potential_final(1.0, 0.0, 2.0);
    for (const Point2 p : {kMid, Point2{0.8, 1.3}, Point2{2.5, 0.9}}) {
      CHECK(moutard_potential(u46, seed, p) == doctest::Approx(u48(p)).epsilon(1e-10));
      CHECK(moutard_potential_field(u46, seed)(p) == doctest::Approx(u48(p)).epsilon(1e-10));
    }
  }

  TEST_CASE("zero seeds are rejected") {
    CHECK_THROWS_AS(moutard_potential(constant_field(0.0), coord_x(), {0.0, 1.0}), ZeroSeedError);
    CHECK_THROWS_AS(moutard_potential_field(constant_field(0.0), coord_x())({0.0, 1.0}), ZeroSeedError);
    CHECK_THROWS_AS(moutard_simple_solution(coord_x())({0.0, 1.0}), ZeroSeedError);
  }

  TEST_CASE("pair map") {
    const auto [w0, y0] = moutard_pair_map(sin_x(), constant_field(0.0), neg_log_sin_y());
    CHECK(w0({1.0, 1.0}) == 0.0);
    CHECK(y0({1.0, 1.0}) == 0.0);
    const ScalarField2 q = oracle::trig_q(2.0);
    const auto [w1, y1] = moutard_pair_map(sin_x(), q, constant_field(0.0));
    CHECK(w1({0.4, 0.9}) == doctest::Approx(q({0.4, 0.9})));
    CHECK(y1({0.4, 0.9}) == doctest::Approx(q({0.4, 0.9})));
    const auto [w2, y2] = moutard_pair_map(sin_x(), q, neg_log_sin_y());
    CHECK(y2(kMid) == doctest::Approx(2.0));
    // W = e^{2h} Q carried back with the reversed drift gives e^h Q.
    const ScalarField2 back = substitution_y_from_w(w2, -1.0 * neg_log_sin_y());
    CHECK(back({0.7, 2.1}) == doctest::Approx(y2({0.7, 2.1})));
  }

  TEST_CASE("Moutard solution through Q") {
    // Y = Y_h with Q = 1 gives the simple solution.
    const ScalarField2 yh = coord_x();
    const NonlocalPotential q_one = recover_q(yh, yh, {1.0, 1.0}, 1.0);
    const ScalarField2 simple = moutard_solution(yh, yh, q_one);
    CHECK(simple({2.0, 0.5}) == doctest::Approx(0.5));
    CHECK(moutard_simple_solution(yh)({2.0, 0.5}) == doctest::Approx(0.5));

    // Y_h = 1 turns the harmonic seed into its partner.
    const ScalarField2 one = constant_field(1.0);
    const NonlocalPotential ql1 = recover_q(oracle::y_l1(), one, {3, 3}, oracle::q_l1(0.0)({3, 3}), 64, avoid_origin());
    CHECK(moutard_solution(oracle::y_l1(), one, ql1)({1.0, 1.0}) == doctest::Approx(-0.5).epsilon(1e-10));

    // Trigonometric pair: Q / sin y.
    const NonlocalPotential qt = recover_q(sin_x(), sin_y(), kMid, 2.0);
    const ScalarField2 yt = moutard_solution(sin_x(), sin_y(), qt);
    CHECK(yt(kMid) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(yt({1.0, 2.0}) == doctest::Approx((2.0 - std::cos(2.0) * std::cos(1.0)) / std::sin(2.0)).epsilon(1e-10));

    // Second step of the twofold chain.
    const ScalarField2 y1 = oracle::y_tilde_l1(0.0), y2 = oracle::y_tilde_l2(0.0);
    const NonlocalPotential q12 = recover_q(y2, y1, {3, 3}, oracle::q12(0.0)({3, 3}), 64, avoid_origin());
    const ScalarField2 y2t = moutard_solution(y2, y1, q12);
    for (const Point2 p : {Point2{1.0, 1.0}, Point2{2.0, -0.5}, Point2{-1.5, 1.5}}) {
      CHECK(y2t(p) == doctest::Approx(oracle::q12(0.0)(p) / y1(p)).epsilon(1e-8));
    }
  }

  TEST_CASE("incompatible seeds raise CompatibilityError") {
    const ScalarField2 ex = make_field("e^x", [](auto x, auto y) {
      (void)y;
      using std::exp;
      return exp(x);
    });
    const NonlocalPotential q = recover_q(sin_x(), ex, {1.0, 1.0}, 0.0);
    CHECK(q.compat_residual() > 1e-3);
    CHECK_THROWS_AS(moutard_solution(sin_x(), ex, q), CompatibilityError);
  }

  TEST_CASE("involution") {
    const ScalarField2 zero = constant_field(0.0);
    const ScalarField2 x = coord_x();
    const ScalarField2 once = moutard_potential_field(zero, x);
    const ScalarField2 inverse = moutard_simple_solution(x);
    for (const Point2 p : testutil::lattice(0.5, 2.5, -1.0, 1.0)) {
      CHECK(std::fabs(moutard_potential(once, inverse, p)) < 1e-10);
    }
    const ScalarField2 u46 = oracle::trig_potential_intermediate(1.0, 0.0);
    const ScalarField2 seed = oracle::trig_seed(1.0, 0.0, 2.5);
    const ScalarField2 u48 = moutard_potential_field(u46, seed);
    const ScalarField2 inv = moutard_simple_solution(seed);
    for (const Point2 p : testutil::lattice(0.6, 2.9, 0.6, 2.9)) {
      CHECK(std::fabs(moutard_potential(u48, inv, p) - u46(p)) < 1e-10 * std::max(1.0, std::fabs(u46(p))));
    }
  }

  TEST_CASE("twofold with proportional seeds leaves u unchanged") {
    const ScalarField2 u = oracle::radial_potential_three_halves();
    const ScalarField2 y1 = oracle::y_tilde_l1(0.0);
    const ScalarField2 y2 = 3.0 * y1;
    const NonlocalPotential q = recover_q(y2, y1, {2, 2}, 5.0, 64, avoid_origin());
    for (const Point2 p : {Point2{1.0, 2.0}, Point2{-1.0, 0.7}}) {
      CHECK(q(p) == doctest::Approx(5.0));
      CHECK(twofold_potential(u, y1, y2, q, p) == doctest::Approx(u(p)).epsilon(1e-12));
    }
  }

  TEST_CASE("twofold potential and solution of the radial example") {
    const ScalarField2 u = oracle::radial_potential_three_halves();
    const ScalarField2 y1 = oracle::y_tilde_l1(0.0), y2 = oracle::y_tilde_l2(0.0);
    const Point2 base{3, 3};
    const Point2 on_circle{0.6, 0.8};
    const NonlocalPotential q0 = recover_q(y2, y1, base, oracle::q12(0.0)(base), 64, avoid_origin());
    CHECK(twofold_potential(u, y1, y2, q0, on_circle) == doctest::Approx(-0.3528).epsilon(1e-8));
    CHECK(twofold_potential_field(u, y1, y2, q0.field())({1.0, 0.0}) == doctest::Approx(-0.3528).epsilon(1e-8));
    const NonlocalPotential q1 = recover_q(y2, y1, base, oracle::q12(1.0)(base), 64, avoid_origin());
    CHECK(twofold_potential(u, y1, y2, q1, on_circle) == doctest::Approx(-2.0 * 1348.0 / 2704.0).epsilon(1e-8));

    const ScalarField2 sol = twofold_solution(y1, q0.field());
    CHECK(sol({1.0, 1.0}) == doctest::Approx(-0.595989).epsilon(1e-6));
    CHECK(std::fabs(sol({1.0, 0.0})) < 1e-12);
    CHECK(twofold_solution(y1, constant_field(1.0))({0.5, 0.9}) == doctest::Approx(y1({0.5, 0.9})));
    CHECK_THROWS_AS(twofold_solution(y1, constant_field(0.0))({0.5, 0.9}), ZeroQError);
  }

  TEST_CASE("choose_sign_constant") {
    GridData g({0, 1, 0, 1, 3, 3});
    CHECK_THROWS_AS(choose_sign_constant(g), EmptyMaskError);
    auto fill = [&g](double lo, double hi) {
      for (std::size_t k = 0; k < g.values.size(); ++k) {
        g.values[k] = lo + (hi - lo) * static_cast<double>(k) / 8.0;
        g.mask[k] = 1;
      }
    };
    fill(2, 5);
    CHECK(*choose_sign_constant(g) == 0.0);
    fill(-1, 3);
    CHECK(*choose_sign_constant(g) == doctest::Approx(1.0 + 4e-6));
    g.values[3] = std::nan("");
    CHECK_FALSE(choose_sign_constant(g).has_value());
    fill(-1e9, 1e9);
    CHECK_FALSE(choose_sign_constant(g).has_value());

    const GridData q = sample(oracle::q12(0.0), {-4, 4, -4, 4, 41, 41}, kDefaultMagnitudeCap, [](Point2 p) {
      const double r = std::hypot(p.x, p.y);
      return r >= 0.2 && r <= 4.0;
    });
    CHECK(*choose_sign_constant(q) == 0.0);
  }

  TEST_CASE("transform record") {
    TransformRecord r;
    r.entry = "radial";
    r.params = {{"C1", 1.5}};
    r.add(TransformKind::kTwofold, {"Y1", "Y2"}, {{"C", 0.0}});
    CHECK(r.steps.size() == 1);
    CHECK(*r.param("C1") == 1.5);
    CHECK_FALSE(r.param("C2").has_value());
    CHECK(std::string(to_string(TransformKind::kNonlocalShift)) == "nonlocal_shift");
  }
}
