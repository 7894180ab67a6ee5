#pragma once

#include <cstdint>
#include <string>

#include "gibbspp/energy.hpp"
#include "gibbspp/sampler.hpp"

namespace gibbspp {

/// Parsed run configuration. Text format is key = value lines grouped under
/// [model] / [window] / [boundary] / [sampler] sections, plus a top-level
/// seed. Unknown keys and sections are rejected.
struct RunConfig {
    std::uint64_t seed = 1;

    // [model]
    std::string structure = "del2";  // lcr del2 del3 del2b gab2 sg sgk sgb
    double lcr_radius = 1.0;
    int k = 1;  // sgk / forced_clustering neighbor count
    std::string potential = "zero";
    double z = 1.0;
    double kappa0 = 0.0, kappa1 = 0.0, alpha = 1.0;
    double delta = 0.1;
    double l0 = 0.5, l1 = 1.0, l2 = 1.0, r0 = 0.0;
    double range = 1.0;  // many_body hyperedge range
    std::vector<double> cardinality_values;

    // [window]
    Point lo, hi;  // axis-aligned box, any dimension

    // [boundary]
    std::string boundary_kind = "empty";  // empty | file | lattice
    std::string boundary_file;
    double spacing = 0.4;               // lattice spacing a (also certificate lattice)
    std::string template_kind = "singleton";  // singleton | cluster
    double template_b = 0.05;
    double template_delta = 0.05;
    int template_k = 1;
    double margin = 0.0;  // fill this far beyond the window; 0 = auto

    // [sampler]
    SamplerConfig sampler;
    int chains = 1;

    static RunConfig parse(const std::string& text);
    static RunConfig parse_file(const std::string& path);
    std::string serialize() const;

    StructureId structure_id() const;
    Potential make_potential() const;
    LatticeSpec lattice() const;
    CellTemplate cell_template() const;
    Window window() const;
    Configuration boundary() const;
    GibbsSpec spec() const;
};

}  // namespace gibbspp
