#include <doctest.h>

#include <cmath>

#include "darboux2d/catalog.hpp"
#include "darboux2d/errors.hpp"
#include "darboux2d/verify.hpp"
#include "test_util.hpp"

using namespace darboux;
using testutil::kPi;

namespace {

const GridSpec kCoarseRadial{-3, 3, -3, 3, 33, 33};
const GridSpec kCoarseTrig{0.5, 3, 0.5, 3, 33, 33};

}  // namespace

TEST_SUITE("catalog") {
  TEST_CASE("radial entry") {
    const CatalogEntry e = build_radial_example(1.5, 1.0);
    CHECK(e.name == "radial");
    CHECK(e.nonsingular);
    CHECK(e.closed_form.u({1.0, 0.0}) == doctest::Approx(-4.5));
    // s = -ln|B| is singular on r = 1; next to it the chain loses digits to cancellation
    CHECK(e.machinery.u({1.0 + 1e-4, 0.0}) == doctest::Approx(e.closed_form.u({1.0 + 1e-4, 0.0})).epsilon(1e-6));
    CHECK(e.machinery.u({1.5, 0.0}) == doctest::Approx(e.closed_form.u({1.5, 0.0})).epsilon(1e-10));
    CHECK(e.reference_grid.nx == 129);
    CHECK_FALSE(e.region({0.1, 0.2}));
    CHECK(e.region({2.0, 2.0}));
    CHECK(e.potentials.size() == 2);
    CHECK(e.machinery.provenance.steps.size() == 1);
    CHECK(e.machinery.provenance.steps[0].kind == TransformKind::kNonlocalShift);
    CHECK(*e.machinery.provenance.param("C1") == 1.5);
  }

  TEST_CASE("radial nonsingularity flag") {
    CHECK_FALSE(build_radial_example(0.5, 1.0).nonsingular);
    CHECK_FALSE(build_radial_example(2.0, -1.0).nonsingular);
    CHECK(build_radial_example(2.0, 3.0).nonsingular);
  }

  TEST_CASE("twofold entry") {
    const CatalogEntry e = build_twofold_radial(0.0);
    CHECK(e.nonsingular);
    CHECK(e.closed_form.u({0.6, 0.8}) == doctest::Approx(-0.3528).epsilon(1e-10));
    CHECK(e.closed_form.y({1.0, 1.0}) == doctest::Approx(-0.595989).epsilon(1e-6));
    CHECK(e.machinery.y({1.0, 1.0}) == doctest::Approx(-0.595989).epsilon(1e-6));
    CHECK(e.machinery.provenance.steps.size() == 2);
    CHECK(e.machinery.provenance.steps[1].kind == TransformKind::kTwofold);
    CHECK(build_twofold_radial(1.0).nonsingular);
    CHECK_FALSE(build_twofold_radial(-60.0).nonsingular);
  }

  TEST_CASE("trig entry") {
    const CatalogEntry e = build_trig_example(1.0, 0.0, 2.5);
    CHECK(e.nonsingular);
    CHECK(e.base_point.x == doctest::Approx(kPi / 2));
    CHECK_FALSE(e.region({1.0, 0.01}));
    CHECK_FALSE(build_trig_example(1.0, 0.0, 1.5).nonsingular);
    CHECK_FALSE(build_trig_example(-1.0, 0.0, 2.5).nonsingular);
    const CatalogEntry two = build_trig_example(1.0, 0.0, 2.0);
    CHECK(1.0 / two.closed_form.y({kPi / 2, kPi / 2}) == doctest::Approx(2.0 / std::tanh(kPi / 2)).epsilon(1e-12));
  }

  TEST_CASE("oracle delta on coarse grids") {
    const OracleDelta r = oracle_delta(build_radial_example(1.5, 1.0), kCoarseRadial,
                                       [](Point2 p) { return testutil::outside_disk(p, 0.5); });
    CHECK(r.worst().max_abs < 1e-6);
    CHECK(r.mask_mismatch == 0);
    CHECK(r.items.size() >= 4);
    const OracleDelta t = oracle_delta(build_trig_example(1.0, 0.0, 2.0), kCoarseTrig,
                                       [](Point2 p) { return std::fabs(std::sin(p.y)) >= 0.05; });
    CHECK(t.worst().max_abs < 1e-5);
    CHECK(t.mask_mismatch == 0);
    CHECK(t.solution.max_abs < 1e-5);
  }

  TEST_CASE("oracle delta rejects unreachable grids") {
    const CatalogEntry e = build_trig_example(1.0, 0.0, 2.5);
    CHECK_THROWS_AS(oracle_delta(e, {0.5, 3, 0.5, 4, 17, 17}), PathBlockedError);
  }

  TEST_CASE("build_entry") {
    CHECK(entry_names().size() == 3);
    CHECK(default_params("trig").size() == 3);
    CHECK(default_params("trig")[2].second == 2.5);
    CHECK_THROWS_AS(default_params("bogus"), UnknownEntryError);
    CHECK_THROWS_AS(build_entry("bogus"), UnknownEntryError);
    CHECK_THROWS_AS(build_entry("trig", {{"q", 1.0}}), ParamError);
    CHECK_THROWS_AS(build_entry("trig", {{"C", std::nan("")}}), ParamError);
    const CatalogEntry e = build_entry("radial", {{"C2", 2.0}});
    CHECK(*e.machinery.provenance.param("C2") == 2.0);
    CHECK(*e.machinery.provenance.param("C1") == 1.5);
  }

  TEST_CASE("replay reproduces the machinery") {
    const std::vector<Point2> probes = {{1.2, 0.4}, {-2.0, 1.5}, {0.7, -0.9}};
    const CatalogEntry radial = build_radial_example(1.5, 1.0, 0.3, -0.2);
    CHECK(replay(radial.machinery.provenance, radial, probes) <= 1e-10);
    const CatalogEntry trig = build_trig_example(1.0, 0.2, 3.0);
    CHECK(replay(trig.machinery.provenance, trig, {{1.0, 1.0}, {2.0, 2.5}}) <= 1e-10);
  }
}
