#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "gibbspp/extended_real.hpp"
#include "gibbspp/geometry.hpp"

namespace gibbspp {

// Hypergraph structures. A structure turns a configuration into a set of
// hyperedges (finite subsets of the configuration).

struct LCr {
    double r = 1.0;  // locally complete: all subsets of diameter <= r
};
struct Del2 {};   // Delaunay edges
struct Del3 {};   // Delaunay triangles
struct Del2b {};  // Delaunay edges with both Voronoi cells bounded
struct Gab2 {};   // Gabriel edges
struct SG {};     // all singletons
struct SGk {
    int k = 1;  // singletons carrying their k nearest neighbors
};
struct SGb {};  // singletons with bounded Voronoi cell

using StructureId = std::variant<LCr, Del2, Del3, Del2b, Gab2, SG, SGk, SGb>;

bool operator==(const StructureId& a, const StructureId& b);
std::string structure_tag(const StructureId& s);

struct Hyperedge {
    std::vector<Point> eta;  // lex-sorted
    StructureId structure;

    friend bool operator==(const Hyperedge& a, const Hyperedge& b) {
        return a.eta == b.eta && a.structure == b.structure;
    }
};

/// Bounded region outside of which the configuration cannot influence a
/// hyperedge's presence or potential value. Stored as a union of closed
/// balls plus one enclosing ball.
struct Horizon {
    std::vector<Ball> region;
    Ball enclosing;
};

/// Constants for the range condition: connecting chains of at most ell_R
/// point-free regions, occupation threshold n_R (-1 when not needed), and a
/// free scale parameter delta_R.
struct RangeConstants {
    int ell_R = 1;
    int n_R = -1;
    double delta_R = 1.0;
};

RangeConstants range_constants(const StructureId& s);

/// Certificate that the configuration outside distance r from the window is
/// irrelevant to every hyperedge affected by the window.
struct BoundaryCertificate {
    bool ok = false;
    double r = 0.0;
    Configuration boundary_points;  // config restricted to the r-annulus
    /// Diagnostic: largest horizon reach beyond the window actually observed
    /// on the given configuration.
    double r_observed = 0.0;
    int n = 0;  // box scale used, when the lattice certificate applies
    int m = 0;  // translate count used
};

std::vector<Hyperedge> enumerate_hyperedges(const StructureId& s, const Configuration& config);

/// Horizon of a hyperedge. Throws NotAHyperedge when eta is not in the
/// structure's hyperedge set for config.
Horizon horizon(const StructureId& s, const Hyperedge& eta, const Configuration& config);

/// Hyperedges of interior + boundary whose horizon intersects the window.
/// A superset of the exactly-affected set; the surplus terms do not depend
/// on the interior, so Gibbs weights are unchanged.
std::vector<Hyperedge> affected(const StructureId& s, const Configuration& interior,
                                const Configuration& boundary, const Window& window);

/// Range-confinement certificate. Finite-range and singleton structures are
/// certified directly; tessellation and k-neighbor structures use the
/// lattice box-occupation criterion with translates of scale n and count m
/// (0 = automatic choice). ok=false is a valid outcome.
BoundaryCertificate confinement(const StructureId& s, const Configuration& config,
                                const Window& window, const LatticeSpec& lattice, int m = 0,
                                int n = 0, int n_cap = 12);

struct PerturbReport {
    bool pass = true;
    int trials = 0;
    int failures = 0;
};

/// Randomized check that modifying the configuration beyond distance r from
/// the window leaves every affected hyperedge and its value unchanged.
PerturbReport perturb_outside_test(
    const StructureId& s,
    const std::function<ExtendedReal(const Hyperedge&, const Configuration&)>& evaluate,
    const Configuration& config, const Window& window, double r, int trials, Rng& rng);

}  // namespace gibbspp
