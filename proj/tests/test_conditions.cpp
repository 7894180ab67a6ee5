#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gibbspp/conditions.hpp"
#include "gibbspp/errors.hpp"

using namespace gibbspp;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("triangular lattice constants in the plane") {
    const LatticeConstants lc = lattice_constants(2, Del2{});
    CHECK(lc.rho0 == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-12));
    CHECK(lc.gamma_bound == 6);
    // bulk cell neighbors in lattice coordinates
    REQUIRE(lc.bulk_offsets.size() == 6);
    auto has = [&](int i, int j) {
        for (const auto& o : lc.bulk_offsets)
            if (o[0] == i && o[1] == j) return true;
        return false;
    };
    CHECK(has(-1, 0));
    CHECK(has(-1, 1));
    CHECK(has(0, 1));
    CHECK(has(1, 0));
    CHECK(has(1, -1));
    CHECK(has(0, -1));
    // unit spacing recipe
    CHECK(std::fabs(lc.recipe.M.det()) == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("tessellation structures are planar only") {
    CHECK_THROWS_AS(lattice_constants(3, Del2{}), UnsupportedDimension);
    CHECK_THROWS_AS(lattice_constants(3, Gab2{}), UnsupportedDimension);
    CHECK_NOTHROW(lattice_constants(3, SG{}));
}

TEST_CASE("activity threshold closed forms") {
    // no growth term: any activity works
    CHECK(threshold({ThresholdInput::Model::EdgeLength, 1.0, 0.0, 2.0}) == 0.0);
    CHECK(threshold({ThresholdInput::Model::TriangleDiameter, 5.0, 0.0, 1.5}) == 0.0);

    // frozen value for kappa0 = 0, kappa1 = 1, alpha = 2 on edge lengths:
    // (1 + 2 rho0) e^0 (3 e^2 / 2)^(1/2) / (pi rho0^2) with rho0 = sqrt(3)/6
    const double rho0 = std::sqrt(3.0) / 6.0;
    const double expect =
        (1.0 + 2.0 * rho0) * std::sqrt(3.0 * 2.0 * std::exp(2.0) / 2.0) / (kPi * rho0 * rho0);
    const double got = threshold({ThresholdInput::Model::EdgeLength, 0.0, 1.0, 2.0});
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    CHECK(got == doctest::Approx(12.0 * (1.0 + std::sqrt(3.0)) * std::exp(1.0) / kPi)
                     .epsilon(1e-6));

    // monotone in each tail parameter
    const double base = threshold({ThresholdInput::Model::EdgeLength, 0.5, 1.0, 2.0});
    CHECK(threshold({ThresholdInput::Model::EdgeLength, 1.0, 1.0, 2.0}) > base);
    CHECK(threshold({ThresholdInput::Model::EdgeLength, 0.5, 2.0, 2.0}) > base);

    // triangle model differs from the edge model
    const double tri = threshold({ThresholdInput::Model::TriangleDiameter, 0.0, 1.0, 2.0});
    const double tri_expect = ((2.0 / std::sqrt(3.0)) + 2.0 * rho0) *
                              std::sqrt(2.0 * std::exp(2.0)) / (kPi * rho0 * rho0);
    CHECK(tri == doctest::Approx(tri_expect).epsilon(1e-12));
}

TEST_CASE("template weight under the reference measure") {
    const LatticeConstants lc = lattice_constants(2, Del2{});
    const LatticeSpec lat = LatticeSpec::triangular(0.4);

    SUBCASE("singleton: exactly one point in the centered ball") {
        const CellTemplate tpl = SingletonBall{0.05};
        const double z = 2.0;
        const GammaWeight w = gamma_weight(z, lat, tpl);
        CHECK(w.exact);
        const double cell = std::fabs(lat.M.det());
        const double ball = kPi * 0.05 * 0.05;
        CHECK(w.value == doctest::Approx(std::exp(-z * cell) * z * ball).epsilon(1e-12));
        CHECK(w.lower_bound <= w.value + 1e-15);
    }

    SUBCASE("cluster: monte carlo refinement beats the analytic bound") {
        const CellTemplate tpl = ClusterTemplate{3, 0.08, 0.03};
        Rng rng(41);
        const GammaWeight w = gamma_weight(1.5, lat, tpl, 20000, &rng);
        CHECK(!w.exact);
        CHECK(w.lower_bound > 0.0);
        CHECK(w.value + 3.0 * w.mc_error >= w.lower_bound);
        CHECK(w.value > 0.0);
    }
}

TEST_CASE("per-cell energy of the canonical fill") {
    const LatticeConstants lc = lattice_constants(2, Del2{});
    const double a = 0.4;
    const LatticeSpec lat = LatticeSpec::triangular(a);
    const CellTemplate tpl = SingletonBall{1e-9};

    CHECK(c_gamma(Del2{}, Potential::zero(Del2{}), lat, tpl) == 0.0);

    // singleton fill of the triangular lattice: each point has 6 edges of
    // length a, each edge split between 2 cells, so 3 edges per cell and
    // c_gamma = 3 (kappa0 + kappa1 a^alpha); equality needs a tight
    // template, the general bound allows the in-cell wiggle room
    const double k0 = 0.3, k1 = 1.2, al = 2.0;
    const Potential phi = Potential::poly_edge({k0, k1, al, std::nullopt});
    const double cg = c_gamma(Del2{}, phi, lat, tpl);
    const double tight = 3.0 * (k0 + k1 * std::pow(a, al));
    CHECK(cg == doctest::Approx(tight).epsilon(1e-6));

    // with a fat template the worst case grows but stays below the bound
    // with edge lengths stretched by the cell diameter allowance
    const double rho0 = lc.rho0;
    const CellTemplate fat = SingletonBall{rho0 * a * 0.9};
    const double cg_fat = c_gamma(Del2{}, phi, lat, fat);
    CHECK(cg_fat >= tight - 1e-9);
    CHECK(cg_fat <= 3.0 * (k0 + k1 * std::pow(a * (1.0 + 2.0 * rho0), al)) + 1e-9);
}

TEST_CASE("hypothesis check verdicts") {
    const LatticeConstants lc = lattice_constants(2, Del2{});

    SUBCASE("mild edge growth at moderate activity") {
        const Potential phi = Potential::poly_edge({0.0, 0.01, 2.0, std::nullopt});
        const LatticeSpec lat = LatticeSpec::triangular(0.2);
        const RegularityReport r =
            check_conditions(Del2{}, phi, 10.0, lat, SingletonBall{0.02});
        CHECK(r.threshold_applicable);
        CHECK(r.z_min < 10.0);
        CHECK(r.u3_holds);
        CHECK(r.stability_ok);
        CHECK(r.verdict);
    }

    SUBCASE("bounded-range exclusion holds at any activity") {
        const Potential phi =
            Potential::long_edge_exclusion({0.3, 0.5, 0.8, 0.0, std::nullopt});
        // spacing inside (l0, l1)
        const LatticeSpec lat = LatticeSpec::triangular(0.4);
        const RegularityReport r =
            check_conditions(Del2{}, phi, 250.0, lat, SingletonBall{0.02});
        CHECK(r.u3_hat_holds);
        CHECK(r.verdict);
    }

    SUBCASE("scale invariant hard constraint") {
        const Potential phi = Potential::hard_equilateral({0.3});
        const LatticeSpec lat = LatticeSpec::triangular(0.5);
        const RegularityReport r =
            check_conditions(Del3{}, phi, 40.0, lat, SingletonBall{0.02});
        CHECK(r.verdict);
    }

    SUBCASE("huge constant cost at tiny activity fails") {
        const Potential phi = Potential::poly_edge({50.0, 1.0, 2.0, std::nullopt});
        const LatticeSpec lat = LatticeSpec::triangular(0.4);
        const RegularityReport r =
            check_conditions(Del2{}, phi, 0.01, lat, SingletonBall{0.02});
        CHECK(!r.verdict);
        CHECK(r.z_min > 0.01);
    }
}

TEST_CASE("report serialization") {
    const LatticeConstants lc = lattice_constants(2, Del2{});
    const LatticeSpec lat = LatticeSpec::triangular(0.2);
    const Potential phi = Potential::poly_edge({0.0, 0.01, 2.0, std::nullopt});
    const RegularityReport r = check_conditions(Del2{}, phi, 10.0, lat, SingletonBall{0.02});
    const std::string s = serialize_report(r);
    for (const char* key :
         {"verdict", "z", "z_min", "c_gamma", "stability", "rho0", "gamma_bound"})
        CHECK_MESSAGE(s.find(key) != std::string::npos, key);
    CHECK(s.find("verdict: 1") != std::string::npos);
}

TEST_CASE("stability constants") {
    // nonnegative potential: no negative part, constant 0
    CHECK(stability_constant(Del2{}, Potential::poly_edge({0.1, 1.0, 2.0, std::nullopt})) ==
          0.0);
    // profile dipping to -0.5 on Delaunay edges: at most 3 edges per point
    PiecewiseLinear dip{{0.0, 1.0, 2.0}, {-0.5, -0.5, 0.0}};
    const double cs =
        stability_constant(Del2{}, Potential::poly_edge({0.0, 0.0, 1.0, dip}));
    CHECK(cs == doctest::Approx(3.0 * 0.5));
}
