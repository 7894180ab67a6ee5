#include "gibbspp/potential.hpp"

#include <algorithm>
#include <cmath>

#include "gibbspp/errors.hpp"

namespace gibbspp {

double PiecewiseLinear::operator()(double x) const {
    if (breaks.empty()) return 0.0;
    if (x <= breaks.front()) return values.front();
    if (x >= breaks.back()) return values.back();
    const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - breaks.begin());
    const double t = (x - breaks[i - 1]) / (breaks[i] - breaks[i - 1]);
    return values[i - 1] + t * (values[i] - values[i - 1]);
}

double PiecewiseLinear::min_value() const {
    return breaks.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

double PiecewiseLinear::max_value() const {
    return breaks.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::pair<double, double> triangle_angles(const Point& a, const Point& b, const Point& c) {
    const double a2 = dist2(b, c), b2 = dist2(a, c), c2 = dist2(a, b);
    const double la = std::sqrt(a2), lb = std::sqrt(b2), lc = std::sqrt(c2);
    if (la == 0.0 || lb == 0.0 || lc == 0.0) throw GeometryDegenerate("zero-length triangle side");
    auto ang = [](double opp2, double s1, double s2, double s1sq, double s2sq) {
        const double cosv = std::clamp((s1sq + s2sq - opp2) / (2.0 * s1 * s2), -1.0, 1.0);
        return std::acos(cosv);
    };
    const double A = ang(a2, lb, lc, b2, c2);
    const double B = ang(b2, la, lc, a2, c2);
    const double C = ang(c2, la, lb, a2, b2);
    const double lo = std::min({A, B, C});
    const double hi = std::max({A, B, C});
    return {lo, hi};
}

namespace {

using Payload =
    std::variant<PolyEdgeSpec, LongEdgeExclusionSpec, PolyTriangleSpec, AngleTriangleSpec,
                 HardEquilateralSpec, ForcedClusteringSpec, VoronoiCellSpec,
                 DistortedTriangularSpec, AdjacentVoronoiSpec, ManyBodySpec,
                 std::monostate /* zero */>;

}  // namespace

struct Potential::Impl {
    Payload payload;
    StructureId structure;          // for non-sum potentials
    std::vector<Potential> parts;   // for sums
    bool sum = false;
};

namespace {

ExtendedReal eval_one(const Payload& payload, const StructureId& structure, const Hyperedge& eta,
                      const Configuration& config) {
    if (const auto* p = std::get_if<PolyEdgeSpec>(&payload)) {
        const double l = dist(eta.eta[0], eta.eta[1]);
        double v = p->kappa0 + p->kappa1 * std::pow(l, p->alpha);
        if (p->profile) v += (*p->profile)(l);
        return v;
    }
    if (const auto* p = std::get_if<LongEdgeExclusionSpec>(&payload)) {
        const double l = dist(eta.eta[0], eta.eta[1]);
        if (l > p->l2 || l < p->r0) return ExtendedReal::infinity();
        return p->inner ? (*p->inner)(l) : 0.0;
    }
    if (const auto* p = std::get_if<PolyTriangleSpec>(&payload)) {
        const auto cb = circumball(eta.eta);
        if (!cb) throw GeometryDegenerate("degenerate triangle");
        return p->kappa0 + p->kappa1 * std::pow(2.0 * cb->radius, p->alpha);
    }
    if (const auto* p = std::get_if<AngleTriangleSpec>(&payload)) {
        const auto [beta, gamma] = triangle_angles(eta.eta[0], eta.eta[1], eta.eta[2]);
        if (beta <= M_PI / 3.0 - p->delta) return ExtendedReal::infinity();
        return p->profile ? p->profile(beta, gamma) : 0.0;
    }
    if (const auto* p = std::get_if<HardEquilateralSpec>(&payload)) {
        const auto [beta, gamma] = triangle_angles(eta.eta[0], eta.eta[1], eta.eta[2]);
        (void)gamma;
        if (beta <= M_PI / 3.0 - p->delta) return ExtendedReal::infinity();
        return 0.0;
    }
    if (const auto* p = std::get_if<ForcedClusteringSpec>(&payload)) {
        std::vector<Point> cluster = knn_order(config, eta.eta[0], p->k);
        cluster.push_back(eta.eta[0]);
        double diam = 0.0;
        for (std::size_t i = 0; i < cluster.size(); ++i)
            for (std::size_t j = i + 1; j < cluster.size(); ++j)
                diam = std::max(diam, dist(cluster[i], cluster[j]));
        if (diam >= p->delta) return ExtendedReal::infinity();
        return p->phi ? p->phi(cluster) : 0.0;
    }
    if (const auto* p = std::get_if<VoronoiCellSpec>(&payload)) {
        const VoronoiCell cell = voronoi_cell(config, eta.eta[0]);
        if (!cell.bounded) throw GeometryDegenerate("unbounded cell in SGb evaluation");
        double raw = 0.0;
        switch (p->kind) {
            case VoronoiCellSpec::Kind::Faces: raw = cell.face_count; break;
            case VoronoiCellSpec::Kind::Area: raw = cell.area(); break;
            case VoronoiCellSpec::Kind::Perimeter: raw = cell.perimeter(); break;
        }
        return p->profile(raw);
    }
    if (std::holds_alternative<DistortedTriangularSpec>(payload)) {
        const VoronoiCell cell = voronoi_cell(config, eta.eta[0]);
        if (!cell.bounded) throw GeometryDegenerate("unbounded cell in SGb evaluation");
        return cell.face_count == 6 ? ExtendedReal(0.0) : ExtendedReal::infinity();
    }
    if (const auto* p = std::get_if<AdjacentVoronoiSpec>(&payload)) {
        const DelaunayResult del = delaunay(config);
        const int i0 = config.index_of(eta.eta[0]);
        const int i1 = config.index_of(eta.eta[1]);
        const std::array<int, 2> key = {std::min(i0, i1), std::max(i0, i1)};
        const auto it = std::lower_bound(del.edges.begin(), del.edges.end(), key);
        if (it == del.edges.end() || *it != key) throw NotAHyperedge();
        const auto& tris = del.edge_triangles[it - del.edges.begin()];
        if (tris.size() != 2) throw GeometryDegenerate("pair without two incident triangles");
        const auto b0 = circumball({config[del.triangles[tris[0]][0]],
                                    config[del.triangles[tris[0]][1]],
                                    config[del.triangles[tris[0]][2]]});
        const auto b1 = circumball({config[del.triangles[tris[1]][0]],
                                    config[del.triangles[tris[1]][1]],
                                    config[del.triangles[tris[1]][2]]});
        return p->profile(dist(b0->center, b1->center));
    }
    if (const auto* p = std::get_if<ManyBodySpec>(&payload)) {
        const std::size_t m = eta.eta.size();
        double v = 0.0;
        if (m <= p->cardinality_values.size()) v = p->cardinality_values[m - 1];
        if (m == 2) {
            const double l = dist(eta.eta[0], eta.eta[1]);
            if (p->hardcore_r0 > 0.0 && l < p->hardcore_r0) return ExtendedReal::infinity();
            if (p->pair_profile) v += (*p->pair_profile)(l);
        }
        return v;
    }
    (void)structure;
    return 0.0;  // zero potential
}

}  // namespace

namespace detail {
struct PotentialAccess {
    static Potential make(Payload payload, StructureId structure, PotentialMetadata meta,
                          std::string name) {
        Potential p;
        auto impl = std::make_shared<Potential::Impl>();
        impl->payload = std::move(payload);
        impl->structure = structure;
        p.impl_ = std::move(impl);
        meta.structures = {structure};
        p.meta_ = std::move(meta);
        p.name_ = std::move(name);
        return p;
    }
    static Potential make_sum(std::vector<Potential> parts) {
        Potential p;
        auto impl = std::make_shared<Potential::Impl>();
        impl->sum = true;
        impl->parts = std::move(parts);
        PotentialMetadata meta;
        for (const Potential& q : impl->parts) {
            meta.c_phi += q.metadata().c_phi;
            meta.hard_exclusion = meta.hard_exclusion || q.metadata().hard_exclusion;
            for (const StructureId& s : q.metadata().structures) meta.structures.push_back(s);
        }
        meta.scale_invariant = std::all_of(impl->parts.begin(), impl->parts.end(),
                                           [](const Potential& q) {
                                               return q.metadata().scale_invariant;
                                           });
        p.impl_ = std::move(impl);
        p.meta_ = std::move(meta);
        p.name_ = "sum";
        return p;
    }
    friend class Potential;
};
}  // namespace detail

Potential Potential::poly_edge(PolyEdgeSpec s) {
    PotentialMetadata m;
    const double prof_min = s.profile ? s.profile->min_value() : 0.0;
    m.c_phi = std::max(0.0, -(s.kappa0 + prof_min));
    return detail::PotentialAccess::make(std::move(s), Del2{}, m, "poly_edge");
}

Potential Potential::long_edge_exclusion(LongEdgeExclusionSpec s) {
    PotentialMetadata m;
    m.c_phi = std::max(0.0, -(s.inner ? s.inner->min_value() : 0.0));
    m.hard_exclusion = true;
    return detail::PotentialAccess::make(std::move(s), Del2{}, m, "long_edge_exclusion");
}

Potential Potential::poly_triangle(PolyTriangleSpec s) {
    PotentialMetadata m;
    m.c_phi = std::max(0.0, -s.kappa0);
    return detail::PotentialAccess::make(std::move(s), Del3{}, m, "poly_triangle");
}

Potential Potential::angle_triangle(AngleTriangleSpec s) {
    PotentialMetadata m;
    m.c_phi = s.sup_abs;
    m.hard_exclusion = true;
    m.scale_invariant = true;
    return detail::PotentialAccess::make(std::move(s), Del3{}, m, "angle_triangle");
}

Potential Potential::hard_equilateral(HardEquilateralSpec s) {
    PotentialMetadata m;
    m.hard_exclusion = true;
    m.scale_invariant = true;
    return detail::PotentialAccess::make(std::move(s), Del3{}, m, "hard_equilateral");
}

Potential Potential::forced_clustering(ForcedClusteringSpec s) {
    PotentialMetadata m;
    m.c_phi = s.sup_abs;
    m.hard_exclusion = true;
    const int k = s.k;
    return detail::PotentialAccess::make(std::move(s), SGk{k}, m, "forced_clustering");
}

Potential Potential::voronoi_cell_functional(VoronoiCellSpec s) {
    PotentialMetadata m;
    m.c_phi = std::max(0.0, -s.profile.min_value());
    return detail::PotentialAccess::make(std::move(s), SGb{}, m, "voronoi_cell");
}

Potential Potential::distorted_triangular() {
    PotentialMetadata m;
    m.hard_exclusion = true;
    m.scale_invariant = true;
    return detail::PotentialAccess::make(DistortedTriangularSpec{}, SGb{}, m,
                                         "distorted_triangular");
}

Potential Potential::adjacent_voronoi(AdjacentVoronoiSpec s) {
    PotentialMetadata m;
    m.c_phi = std::max(0.0, -s.profile.min_value());
    return detail::PotentialAccess::make(std::move(s), Del2b{}, m, "adjacent_voronoi");
}

Potential Potential::many_body(ManyBodySpec s) {
    PotentialMetadata m;
    double lo = 0.0;
    for (double v : s.cardinality_values) lo = std::min(lo, v);
    if (s.pair_profile) lo += std::min(0.0, s.pair_profile->min_value());
    m.c_phi = std::max(0.0, -lo);
    m.hard_exclusion = s.hardcore_r0 > 0.0;
    const double r = s.r;
    return detail::PotentialAccess::make(std::move(s), LCr{r}, m, "many_body");
}

Potential Potential::zero(StructureId structure) {
    PotentialMetadata m;
    m.scale_invariant = true;
    return detail::PotentialAccess::make(std::monostate{}, structure, m, "zero");
}

Potential Potential::sum(std::vector<Potential> parts) {
    for (const Potential& p : parts)
        if (p.is_sum()) throw ConfigError("nested sum potentials are not supported");
    return detail::PotentialAccess::make_sum(std::move(parts));
}

ExtendedReal Potential::evaluate(const Hyperedge& eta, const Configuration& config) const {
    if (impl_->sum) {
        for (const Potential& p : impl_->parts)
            if (p.structure() == eta.structure) return p.evaluate(eta, config);
        throw StructureMismatch("hyperedge structure not in sum");
    }
    if (!(impl_->structure == eta.structure))
        throw StructureMismatch("hyperedge from a different structure");
    return eval_one(impl_->payload, impl_->structure, eta, config);
}

const StructureId& Potential::structure() const {
    if (impl_->sum) throw StructureMismatch("sum potential has several structures");
    return impl_->structure;
}

bool Potential::is_sum() const { return impl_->sum; }

const std::vector<Potential>& Potential::parts() const { return impl_->parts; }

std::optional<Potential::PolyParams> Potential::poly_params() const {
    if (impl_->sum) return std::nullopt;
    if (const auto* p = std::get_if<PolyEdgeSpec>(&impl_->payload)) {
        if (p->profile) return std::nullopt;
        return PolyParams{p->kappa0, p->kappa1, p->alpha, false};
    }
    if (const auto* p = std::get_if<PolyTriangleSpec>(&impl_->payload))
        return PolyParams{p->kappa0, p->kappa1, p->alpha, true};
    return std::nullopt;
}

std::optional<Potential::LongEdgeParams> Potential::long_edge_params() const {
    if (impl_->sum) return std::nullopt;
    if (const auto* p = std::get_if<LongEdgeExclusionSpec>(&impl_->payload))
        return LongEdgeParams{p->l0, p->l1, p->l2, p->r0};
    return std::nullopt;
}

bool Potential::shift_check(const Hyperedge& eta, const Configuration& config,
                            const Point& x) const {
    Hyperedge shifted = eta;
    for (Point& p : shifted.eta)
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += x[i];
    std::sort(shifted.eta.begin(), shifted.eta.end(), lex_less);
    return evaluate(eta, config) == evaluate(shifted, config.translated(x));
}

}  // namespace gibbspp
