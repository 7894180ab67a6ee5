#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gibbspp/errors.hpp"
#include "gibbspp/oracle.hpp"

using namespace gibbspp;

namespace {

GibbsSpec free_spec(double z, double side) {
    return oracle_spec(Del2{}, Potential::zero(Del2{}), z, Window::box({0.0, 0.0}, {side, side}),
                       Configuration());
}

}  // namespace

TEST_CASE("free gas partition function is exactly one") {
    const GibbsSpec spec = free_spec(2.0, 1.0);
    Rng rng(7);
    const SeriesEstimate z = partition_function(spec, 25, 200, rng);
    // every integrand is e^0: no monte carlo noise at all
    CHECK(z.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(z.mc_error == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(z.tail_bound < 1e-6);
    CHECK(z.truncation_n == 25);
}

TEST_CASE("hard forcing to at most one point") {
    // a pair core wider than the window forbids two or more points (the
    // nearest pair is always a Delaunay edge), so Z = e^{-zV} (1 + zV)
    const Window w = Window::box({0.0, 0.0}, {0.8, 0.8});
    const Potential phi =
        Potential::long_edge_exclusion({0.1, 0.2, 10.0, 2.0, std::nullopt});
    const GibbsSpec spec = oracle_spec(Del2{}, phi, 3.0, w, Configuration());
    Rng rng(11);
    const SeriesEstimate z = partition_function(spec, 20, 400, rng);
    const double v = 0.64;
    const double expect = std::exp(-3.0 * v) * (1.0 + 3.0 * v);
    CHECK(z.value == doctest::Approx(expect).epsilon(1e-9));
    // terms beyond n = 1 vanish
    REQUIRE(z.terms.size() >= 3);
    CHECK(z.terms[2] == 0.0);
}

TEST_CASE("expectation of the point count for the free gas") {
    const double z = 1.5, side = 1.0;
    const GibbsSpec spec = free_spec(z, side);
    Rng rng(13);
    const SeriesEstimate e = gibbs_expectation(
        spec, [](const Configuration& c) { return static_cast<double>(c.size()); }, 30, 400,
        rng);
    CHECK(e.value == doctest::Approx(z * side * side).epsilon(1e-6));
}

TEST_CASE("expectation reacts to the potential") {
    // repulsive pair cost lowers the mean count below the free value
    const Window w = Window::box({0.0, 0.0}, {1.0, 1.0});
    const Potential phi = Potential::poly_edge({1.0, 0.0, 1.0, std::nullopt});
    const GibbsSpec spec = oracle_spec(Del2{}, phi, 2.0, w, Configuration());
    Rng rng(17);
    const SeriesEstimate e = gibbs_expectation(
        spec, [](const Configuration& c) { return static_cast<double>(c.size()); }, 22, 600,
        rng);
    CHECK(e.value < 2.0);
    CHECK(e.value > 0.0);
    CHECK(e.mc_error < 0.05);
}

TEST_CASE("window consistency of the finite-volume distributions") {
    const Window big = Window::box({0.0, 0.0}, {1.0, 1.0});
    const Window small = Window::box({0.25, 0.25}, {0.75, 0.75});
    const Potential phi = Potential::poly_edge({0.2, 0.5, 2.0, std::nullopt});
    const GibbsSpec outer = oracle_spec(Del2{}, phi, 1.5, big, Configuration());
    const std::vector<TestFunctional> fs = {
        [&](const Configuration& c) {
            double k = 0.0;
            for (const Point& p : c.points())
                if (small.contains(p)) k += 1.0;
            return k;
        },
        [](const Configuration& c) { return c.size() >= 2 ? 1.0 : 0.0; },
    };
    Rng rng(19);
    const ConsistencyResult r = consistency_check(outer, small, fs, 14, 320, rng);
    CHECK(r.deviations.size() == fs.size());
    // the floor absorbs float roundoff when both sides collapse to machine
    // precision
    CHECK(r.max_deviation <= r.budget + 1e-9);
    CHECK(r.budget < 0.25);
}

TEST_CASE("series truncation guard") {
    // stability constant forces a growing tail the window cannot absorb
    const GibbsSpec spec = free_spec(5.0, 3.0);
    Rng rng(23);
    CHECK_THROWS_AS(partition_function(spec, 8, 50, rng, /*c_s=*/2.0), TailNotConverged);
}

TEST_CASE("series report carries the bracket") {
    const GibbsSpec spec = free_spec(1.0, 1.0);
    Rng rng(29);
    const SeriesEstimate z = partition_function(spec, 18, 100, rng);
    const std::string rep = series_report(z);
    for (const char* key : {"value", "truncation_n", "mc_error", "tail_bound", "bracket_low",
                            "bracket_high", "term_0"})
        CHECK_MESSAGE(rep.find(key) != std::string::npos, key);
}

TEST_CASE("entropy bound on a small box") {
    const LatticeSpec lat = LatticeSpec::triangular(0.4);
    const Potential phi = Potential::poly_edge({0.0, 0.05, 2.0, std::nullopt});
    Rng rng(31);
    const EntropyDiagnostic d =
        entropy_diagnostic(Del2{}, phi, 2.0, lat, SingletonBall{0.05}, 2, 4000, rng);
    CHECK(d.holds);
    CHECK(d.lhs <= d.rhs + 3.0 * d.sigma + 1e-12);
    CHECK(std::isfinite(d.lhs));
    CHECK(std::isfinite(d.rhs));
}
