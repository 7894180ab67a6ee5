#pragma once

#include "gibbspp/potential.hpp"

namespace gibbspp {

struct LatticeConstants {
    double rho0 = 0.0;       // inradius ratio of the triangular cell (d=2)
    int gamma_bound = 0;     // bound on the lattice neighbor count
    std::vector<std::array<int, 2>> bulk_offsets;  // Delaunay neighbors of a bulk cell (d=2)
    LatticeSpec recipe;      // unit-spacing lattice; scale M by a for spacing a
};

/// Lattice recipe and constants for the given dimension and structure.
/// Tessellation structures are d=2 only.
LatticeConstants lattice_constants(int d, const StructureId& s);

struct GammaWeight {
    double value = 0.0;        // reference-measure weight of the template event
    double lower_bound = 0.0;  // analytic lower bound
    double mc_error = 0.0;
    bool exact = false;
};

/// Weight of the per-cell template event under the Poisson reference
/// measure on one cell. Singleton templates are exact; cluster templates
/// get the analytic lower bound plus a Monte Carlo refinement.
GammaWeight gamma_weight(double z, const LatticeSpec& lattice, const CellTemplate& tpl,
                         int mc_samples = 0, Rng* rng = nullptr);

/// Per-cell energy sum over the canonical pseudo-periodic fill: the sum of
/// phi (or its positive part) over hyperedges meeting the central cell,
/// each divided by the number of cells the hyperedge touches. Evaluated on
/// a patch of patch_half*2+1 cells per axis.
double c_gamma(const StructureId& s, const Potential& potential, const LatticeSpec& lattice,
               const CellTemplate& tpl, bool positive_part = true, int patch_half = 3,
               double cap = 1e6);

struct ThresholdInput {
    enum class Model { EdgeLength, TriangleDiameter };
    Model model = Model::EdgeLength;
    double kappa0 = 0.0, kappa1 = 0.0, alpha = 1.0;
};

/// Smallest activity for which the explicit sufficient condition holds;
/// kappa1 = 0 gives 0.
double threshold(const ThresholdInput& in);

struct RegularityReport {
    double r_gamma = 0.0;
    double c_gamma_signed = 0.0;
    double c_gamma_plus = 0.0;
    double pi_c_gamma = 0.0;   // template-event weight
    double log_scaled_weight = 0.0;  // z|C| + ln pi_c_gamma
    bool u3_holds = false;
    bool u3_hat_holds = false;
    bool stability_ok = false;
    double c_s = 0.0;
    RangeConstants range;
    double z = 0.0;
    double z_min = 0.0;        // threshold when applicable, else 0
    bool threshold_applicable = false;
    bool verdict = false;
    // constants
    double a_spacing = 0.0;
    double rho0 = 0.0;
    int gamma_bound = 0;
    double nu_d = 0.0;
    double cell_volume = 0.0;
    // lower density bound (heuristic where flagged)
    double density_a = 0.0;
    double density_b = 0.0;
    bool density_checked = false;
    bool density_heuristic = false;
};

/// Full hypothesis check for a model at activity z over the given lattice
/// and template. Throws UnsupportedModel for variants with no verified
/// route.
RegularityReport check_conditions(const StructureId& s, const Potential& potential, double z,
                                  const LatticeSpec& lattice, const CellTemplate& tpl);

std::string serialize_report(const RegularityReport& r);

/// Stability constant from the hyperedge-count bound per structure times
/// the potential's lower-bound constant.
double stability_constant(const StructureId& s, const Potential& potential);

}  // namespace gibbspp
