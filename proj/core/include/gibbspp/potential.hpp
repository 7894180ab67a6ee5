#pragma once

#include <functional>
#include <memory>
#include <string>

#include "gibbspp/hypergraph.hpp"

namespace gibbspp {

/// Piecewise-linear profile on [breaks.front(), breaks.back()], constant
/// outside that interval. Bounded by construction.
struct PiecewiseLinear {
    std::vector<double> breaks;
    std::vector<double> values;

    double operator()(double x) const;
    double min_value() const;
    double max_value() const;
};

struct PotentialMetadata {
    double c_phi = 0.0;  // phi >= -c_phi everywhere
    bool hard_exclusion = false;
    bool scale_invariant = false;
    std::vector<StructureId> structures;
};

class Potential;

// Variant payloads. Each defines phi(eta, omega) on its structure.

/// phi(l) = kappa0 + kappa1 l^alpha + profile(l) on Delaunay edges.
struct PolyEdgeSpec {
    double kappa0 = 0.0, kappa1 = 0.0, alpha = 1.0;
    std::optional<PiecewiseLinear> profile;
};

/// Edges longer than l2 (or shorter than the hard core r0) are forbidden;
/// inner profile otherwise. (l0, l1) records the feasible lattice spacing
/// band used for initialization.
struct LongEdgeExclusionSpec {
    double l0 = 0.5, l1 = 1.0, l2 = 1.0;
    double r0 = 0.0;
    std::optional<PiecewiseLinear> inner;
};

/// phi = kappa0 + kappa1 * circumdiameter^alpha on Delaunay triangles.
struct PolyTriangleSpec {
    double kappa0 = 0.0, kappa1 = 0.0, alpha = 1.0;
};

/// phi(beta, gamma) of the smallest/largest interior angle, infinite when
/// beta <= pi/3 - delta.
struct AngleTriangleSpec {
    double delta = 0.1;
    std::function<double(double, double)> profile;  // null = 0
    double sup_abs = 0.0;                           // bound on |profile|
};

/// 0 when the smallest angle exceeds pi/3 - delta, infinity otherwise.
struct HardEquilateralSpec {
    double delta = 0.1;  // in (0, pi/3)
};

/// On k-neighbor singletons: infinite when the point together with its k
/// nearest neighbors has diameter >= delta, else a bounded function of the
/// cluster.
struct ForcedClusteringSpec {
    int k = 1;
    double delta = 1.0;
    std::function<double(const std::vector<Point>&)> phi;  // null = 0
    double sup_abs = 0.0;
};

/// Bounded functional of the (bounded) Voronoi cell.
struct VoronoiCellSpec {
    enum class Kind { Faces, Area, Perimeter };
    Kind kind = Kind::Faces;
    PiecewiseLinear profile;  // applied to the raw functional value
};

/// 0 when the bounded Voronoi cell has six edges, infinity otherwise.
struct DistortedTriangularSpec {};

/// Bounded functional of the shared Voronoi facet length of an adjacent
/// bounded pair.
struct AdjacentVoronoiSpec {
    PiecewiseLinear profile;
};

/// Potential on locally complete hyperedges of range r: per-cardinality
/// constants plus an optional pair profile of the edge length and an
/// optional hard core.
struct ManyBodySpec {
    double r = 1.0;
    std::vector<double> cardinality_values;  // value for #eta = 1, 2, ...
    std::optional<PiecewiseLinear> pair_profile;
    double hardcore_r0 = 0.0;
};

namespace detail {
struct PotentialAccess;
}

class Potential {
  public:
    static Potential poly_edge(PolyEdgeSpec s);
    static Potential long_edge_exclusion(LongEdgeExclusionSpec s);
    static Potential poly_triangle(PolyTriangleSpec s);
    static Potential angle_triangle(AngleTriangleSpec s);
    static Potential hard_equilateral(HardEquilateralSpec s);
    static Potential forced_clustering(ForcedClusteringSpec s);
    static Potential voronoi_cell_functional(VoronoiCellSpec s);
    static Potential distorted_triangular();
    static Potential adjacent_voronoi(AdjacentVoronoiSpec s);
    static Potential many_body(ManyBodySpec s);
    static Potential zero(StructureId structure);  // phi == 0 on any structure
    static Potential sum(std::vector<Potential> parts);

    /// phi(eta, omega). Throws StructureMismatch when eta's structure does
    /// not belong to this potential.
    ExtendedReal evaluate(const Hyperedge& eta, const Configuration& config) const;

    const PotentialMetadata& metadata() const { return meta_; }
    /// The single structure for non-sum potentials.
    const StructureId& structure() const;
    bool is_sum() const;
    const std::vector<Potential>& parts() const;
    const std::string& name() const { return name_; }

    /// evaluate(eta, omega) == evaluate(eta + x, omega + x).
    bool shift_check(const Hyperedge& eta, const Configuration& config, const Point& x) const;

    struct PolyParams {
        double kappa0 = 0.0, kappa1 = 0.0, alpha = 1.0;
        bool triangle = false;
    };
    /// Parameters when this is a pure polynomial edge/triangle potential.
    std::optional<PolyParams> poly_params() const;

    struct LongEdgeParams {
        double l0 = 0.0, l1 = 0.0, l2 = 0.0, r0 = 0.0;
    };
    std::optional<LongEdgeParams> long_edge_params() const;

  private:
    friend struct detail::PotentialAccess;
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    PotentialMetadata meta_;
    std::string name_;
};

/// Smallest and largest interior angle of a triangle.
std::pair<double, double> triangle_angles(const Point& a, const Point& b, const Point& c);

}  // namespace gibbspp
