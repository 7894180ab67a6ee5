#pragma once

#include "gibbspp/potential.hpp"

namespace gibbspp {

/// Finite-volume model: structure, potential, activity, window and a fixed
/// outside configuration with its confinement certificate.
struct GibbsSpec {
    StructureId structure;
    Potential potential;
    double z = 1.0;
    Window window;
    Configuration boundary;  // outside the window
    BoundaryCertificate confinement;
};

/// Builds a spec and computes the confinement certificate with the given
/// lattice. Throws ConfigError when the boundary intersects the window or
/// z <= 0.
GibbsSpec make_spec(StructureId structure, Potential potential, double z, Window window,
                    Configuration boundary, const LatticeSpec& lattice);

struct EnergyBreakdown {
    ExtendedReal total;
    double negative_part = 0.0;
    std::vector<std::pair<Hyperedge, ExtendedReal>> per_hyperedge;
};

/// Energy of the interior configuration given the spec's boundary
/// condition: sum of phi over hyperedges affected by the window.
EnergyBreakdown hamiltonian(const GibbsSpec& spec, const Configuration& interior);

struct Move {
    enum class Kind { Insert, Delete, Translate };
    Kind kind = Kind::Insert;
    Point x;
    Point y;  // Translate target
};

/// hamiltonian(after) - hamiltonian(before). Infinite after-state gives
/// +inf; finite after-state from an infinite before-state gives the -inf
/// marker.
ExtendedReal energy_delta(const GibbsSpec& spec, const Configuration& interior, const Move& move);

struct AdmissibilityReport {
    double neg_part_finite_fraction = 0.0;
    double z_estimate = 0.0;  // MC estimate of the partition function
    double z_low = 0.0;
    double z_high = 0.0;
};

/// Poisson-sample interiors and report the fraction with finite negative
/// part plus a crude Monte Carlo bracket for Z.
AdmissibilityReport admissibility_audit(const GibbsSpec& spec, int mc_samples, Rng& rng);

/// Worst (-H / #points) over Poisson-sampled interiors across the spec
/// family; the stability constant any c_S must dominate.
double stability_audit(const std::vector<GibbsSpec>& specs, int samples_per_spec, Rng& rng);

/// Serialized breakdown: total, negative part, count, top contributors.
std::string breakdown_report(const EnergyBreakdown& b);

/// Poisson(z|window|) number of points, uniform positions.
Configuration sample_poisson(double z, const Window& window, Rng& rng);

}  // namespace gibbspp
