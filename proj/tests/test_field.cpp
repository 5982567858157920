#include <doctest.h>

#include <cmath>

#include "darboux2d/catalog.hpp"
#include "darboux2d/errors.hpp"
#include "darboux2d/field.hpp"
#include "test_util.hpp"

using namespace darboux;

namespace {

ScalarField2 x2y() {
  return make_field("x^2 y", [](auto x, auto y) { return x * x * y; });
}

ScalarField2 log_x() {
  return ScalarField2("ln x", [](Point2 p) { return std::log(p.x); }, [](Point2 p) { return p.x > 0.0; });
}

}  // namespace

TEST_SUITE("field") {
  TEST_CASE("jet3_at uses analytic jets") {
    const Jet3 j = jet3_at(x2y(), {1.0, 2.0});
    CHECK(j.value == doctest::Approx(2.0));
    CHECK(j.x == doctest::Approx(4.0));
    CHECK(j.xxy == doctest::Approx(2.0));
    CHECK(j.yyy == 0.0);
    CHECK(j.valid);
  }

  TEST_CASE("closed-form B at (0,2)") {
    const ScalarField2 b = oracle::b_three_halves();
    CHECK(b({0.0, 2.0}) == doctest::Approx(7.0 / 9.0).epsilon(1e-12));
    CHECK(jet3_at(b, {0.0, 2.0}).value == doctest::Approx(7.0 / 9.0).epsilon(1e-12));
  }

  TEST_CASE("finite-difference jet of ln x") {
    const ScalarField2 f = log_x();
    CHECK_FALSE(f.has_analytic_jets());
    const Jet3 j = jet3_at(f, {2.0, 0.0}, 1e-3);
    CHECK(std::fabs(j.xx + 0.25) < 1e-6);
    CHECK(std::fabs(j.x - 0.5) < 1e-6);
    CHECK(std::fabs(j.xxx - 0.25) < 1e-5);
    CHECK(j.y == 0.0);
  }

  TEST_CASE("stencil leaving the domain raises DomainError") {
    CHECK_THROWS_AS(jet3_at(log_x(), {1e-3, 0.0}, 1e-3), DomainError);
    CHECK_THROWS_AS(jet3_at(log_x(), {-1.0, 0.0}, 1e-3), DomainError);
  }

  TEST_CASE("non-finite samples raise NonFiniteError") {
    const ScalarField2 bad("nan", [](Point2) { return std::nan(""); });
    CHECK_THROWS_AS(jet3_at(bad, {0.0, 0.0}, 1e-3), NonFiniteError);
  }

  TEST_CASE("laplacian_at") {
    const ScalarField2 r2 = make_field("r^2", [](auto x, auto y) { return x * x + y * y; });
    CHECK(laplacian_at(r2, {0.3, -2.0}) == doctest::Approx(4.0));
    CHECK(laplacian_at(r2.without_jets(), {0.3, -2.0}) == doctest::Approx(4.0).epsilon(1e-6));

    const ScalarField2 h = oracle::y_l1();
    CHECK(std::fabs(laplacian_at(h, {1.0, 1.0})) < 1e-12);
    CHECK(std::fabs(laplacian_at(h.without_jets(), {1.0, 1.0})) < 1e-6);

    const ScalarField2 b = oracle::b_three_halves();
    CHECK(laplacian_at(b.without_jets(), {0.0, 2.0}) == doctest::Approx(laplacian_at(b, {0.0, 2.0})).epsilon(1e-6));
  }

  TEST_CASE("finite differences converge at second order") {
    const ScalarField2 b = oracle::b_three_halves();
    const Point2 p{0.7, 1.1};
    const Jet3 exact = jet3_at(b, p);
    const Jet3 coarse = fd_jet3(b, p, 2e-2);
    const Jet3 fine = fd_jet3(b, p, 1e-2);
    const double entries[][3] = {{exact.xx, coarse.xx, fine.xx},
                                 {exact.xy, coarse.xy, fine.xy},
                                 {exact.xxx, coarse.xxx, fine.xxx},
                                 {exact.xxy, coarse.xxy, fine.xxy},
                                 {exact.yyy, coarse.yyy, fine.yyy}};
    for (const auto& e : entries) {
      const double ratio = std::fabs(e[1] - e[0]) / std::fabs(e[2] - e[0]);
      CHECK(ratio > 3.0);
      CHECK(ratio < 5.0);
    }
  }

  TEST_CASE("mixed partial is symmetric") {
    const ScalarField2 b = oracle::b_three_halves().without_jets();
    const Point2 p{0.9, -1.3};
    const double a = fd_mixed_xy(b, p, 1e-3, true);
    const double c = fd_mixed_xy(b, p, 1e-3, false);
    CHECK(std::fabs(a - c) < 1e-8);
  }

  TEST_CASE("analytic value agrees with plain evaluator") {
    const ScalarField2 f = oracle::trig_potential_final(1.0, 0.0, 2.5);
    for (const Point2 p : testutil::lattice(0.6, 2.9, 0.6, 2.9)) {
      CHECK(f.taylor(p, 3).value() == doctest::Approx(f(p)).epsilon(1e-12));
    }
  }

  TEST_CASE("field algebra composes jets") {
    const ScalarField2 f = oracle::y_l1();
    const ScalarField2 g = oracle::y_l2();
    const Point2 p{1.2, 0.4};
    const ScalarField2 prod = f * g;
    CHECK(prod.has_analytic_jets());
    const Taylor2 tf = f.taylor(p, 3), tg = g.taylor(p, 3);
    CHECK(prod.taylor(p, 3).derivative(2, 1) == doctest::Approx((tf * tg).derivative(2, 1)));
    CHECK((f / g)(p) == doctest::Approx(f(p) / g(p)));
    CHECK((f - g)(p) == doctest::Approx(f(p) - g(p)));
    CHECK(exp(f)(p) == doctest::Approx(std::exp(f(p))));
    CHECK(log_abs(-1.0 * g)(p) == doctest::Approx(std::log(g(p))));
    CHECK(reciprocal(f)(p) == doctest::Approx(1.0 / f(p)));
    CHECK(constant_field(3.0)(p) == 3.0);
    CHECK_FALSE(f.restricted([](Point2 q) { return q.x < 0; }).in_domain(p));
  }

  TEST_CASE("combine_fields tracks derivative losses") {
    const ScalarField2 f = oracle::y_l1();
    const ScalarField2 lap = combine_fields("lap", {f}, {2}, [](std::span<const Taylor2> t) {
      return t[0].dx().dx() + t[0].dy().dy();
    });
    CHECK(lap.analytic_order() == Taylor2::kMaxOrder - 2);
    CHECK(std::fabs(lap({0.5, 1.5})) < 1e-12);
  }
}
