#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "gibbspp/errors.hpp"
#include "gibbspp/pointpattern.hpp"
#include "gibbspp/runconfig.hpp"

using namespace gibbspp;

TEST_CASE("point pattern round-trips at full precision") {
    Rng rng(77);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::vector<Point> pts;
    for (int i = 0; i < 40; ++i) pts.push_back({u(rng), u(rng)});
    const Configuration c(pts);

    std::ostringstream out;
    write_point_pattern(out, c);
    std::istringstream in(out.str());
    const Configuration back = read_point_pattern(in);
    REQUIRE(back.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(back[i][0] == c[i][0]);
        CHECK(back[i][1] == c[i][1]);
    }
    CHECK(out.str().rfind("x,y\n", 0) == 0);
}

TEST_CASE("point pattern rejects malformed input") {
    std::istringstream bad_header("a,b\n1,2\n");
    CHECK_THROWS_AS(read_point_pattern(bad_header), ConfigError);
    std::istringstream short_row("x,y\n1.0\n");
    CHECK_THROWS_AS(read_point_pattern(short_row), ConfigError);
    std::istringstream bad_number("x,y\n1.0,abc\n");
    CHECK_THROWS_AS(read_point_pattern(bad_number), ConfigError);
    std::istringstream empty_ok("x,y\n");
    CHECK(read_point_pattern(empty_ok).size() == 0);
}

namespace {
const char* kConfig = R"(
seed = 42

[model]
structure = del2
potential = poly_edge
z = 0.5
kappa0 = 0.1
kappa1 = 0.25
alpha = 2

[window]
lo = 0 0
hi = 1 1

[boundary]
kind = lattice
spacing = 0.3
template = singleton
b = 0.05

[sampler]
steps = 2000
burn_in = 100
thinning = 5
)";
}

TEST_CASE("run config parses and builds a spec") {
    const RunConfig cfg = RunConfig::parse(kConfig);
    CHECK(cfg.seed == 42);
    CHECK(cfg.z == 0.5);
    CHECK(cfg.kappa1 == 0.25);
    CHECK(cfg.sampler.steps == 2000);
    CHECK(std::holds_alternative<Del2>(cfg.structure_id()));

    const GibbsSpec spec = cfg.spec();
    CHECK(spec.window.volume() == doctest::Approx(1.0));
    CHECK(spec.boundary.size() > 0);
    for (const Point& p : spec.boundary.points()) CHECK(!spec.window.contains(p));
    CHECK(spec.confinement.ok);
}

TEST_CASE("run config serialization is idempotent") {
    const RunConfig cfg = RunConfig::parse(kConfig);
    const std::string once = cfg.serialize();
    const RunConfig cfg2 = RunConfig::parse(once);
    CHECK(cfg2.serialize() == once);
    CHECK(cfg2.seed == cfg.seed);
    CHECK(cfg2.kappa0 == cfg.kappa0);
    CHECK(cfg2.spacing == cfg.spacing);
}

TEST_CASE("run config rejects unknown keys and bad values") {
    CHECK_THROWS_AS(RunConfig::parse("[model]\nstructure = del2\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("[mystery]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("[model]\nstructure = dodecahedron\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("[model]\npotential = flux\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("[model]\nz = -1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("[window]\nlo = 0 0\nhi = 0 1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("[model]\nz = abc\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("just some words\n"), ConfigError);
}

TEST_CASE("comments and blank lines are tolerated") {
    const RunConfig cfg = RunConfig::parse("# header\nseed = 7\n\n[model]\nz = 2 # inline\n");
    CHECK(cfg.seed == 7);
    CHECK(cfg.z == 2.0);
}
