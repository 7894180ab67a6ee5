#include "gibbspp/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gibbspp/errors.hpp"

namespace gibbspp {

namespace {

constexpr double kNegPartCap = 1e6;

}  // namespace

GibbsSpec make_spec(StructureId structure, Potential potential, double z, Window window,
                    Configuration boundary, const LatticeSpec& lattice) {
    if (!(z > 0.0)) throw ConfigError("activity must be positive");
    for (const Point& p : boundary.points())
        if (window.contains(p)) throw ConfigError("boundary point inside the window");
    GibbsSpec spec;
    spec.structure = structure;
    spec.potential = std::move(potential);
    spec.z = z;
    spec.window = window;
    spec.confinement = confinement(structure, boundary, window, lattice);
    spec.boundary = std::move(boundary);
    return spec;
}

EnergyBreakdown hamiltonian(const GibbsSpec& spec, const Configuration& interior) {
    if (!spec.confinement.ok) throw NotConfined();
    for (const Point& p : interior.points())
        if (!spec.window.contains(p)) throw IllegalMove("interior point outside the window");

    // points beyond the certificate radius cannot matter
    const Configuration near_boundary = spec.boundary.annulus(spec.window, spec.confinement.r);

    EnergyBreakdown out;
    out.total = 0.0;
    const Configuration total_cfg = interior.merged(near_boundary);
    const auto add_structure = [&](const StructureId& s) {
        for (Hyperedge& e : affected(s, interior, near_boundary, spec.window)) {
            const ExtendedReal v = spec.potential.evaluate(e, total_cfg);
            if (v.is_finite() && v.value() < 0.0) {
                out.negative_part += -v.value();
                if (out.negative_part > kNegPartCap) throw NegativePartDivergent();
            }
            out.total += v;
            out.per_hyperedge.emplace_back(std::move(e), v);
        }
    };
    if (spec.potential.is_sum()) {
        for (const Potential& p : spec.potential.parts()) add_structure(p.structure());
    } else {
        add_structure(spec.structure);
    }
    return out;
}

ExtendedReal energy_delta(const GibbsSpec& spec, const Configuration& interior, const Move& move) {
    Configuration after;
    switch (move.kind) {
        case Move::Kind::Insert:
            if (!spec.window.contains(move.x)) throw IllegalMove("insert outside window");
            if (interior.contains(move.x)) throw IllegalMove("insert duplicates a point");
            after = interior.with_point(move.x);
            break;
        case Move::Kind::Delete:
            if (!interior.contains(move.x)) throw IllegalMove("delete of absent point");
            after = interior.without_point(move.x);
            break;
        case Move::Kind::Translate:
            if (!interior.contains(move.x)) throw IllegalMove("translate of absent point");
            if (!spec.window.contains(move.y)) throw IllegalMove("translate outside window");
            if (interior.contains(move.y)) throw IllegalMove("translate onto a point");
            after = interior.without_point(move.x).with_point(move.y);
            break;
    }
    const ExtendedReal hb = hamiltonian(spec, interior).total;
    const ExtendedReal ha = hamiltonian(spec, after).total;
    if (ha.is_infinite()) return ExtendedReal::infinity();
    if (hb.is_infinite()) return ExtendedReal::neg_infinity();
    return ha.value() - hb.value();
}

Configuration sample_poisson(double z, const Window& window, Rng& rng) {
    std::poisson_distribution<int> pois(z * window.volume());
    const int n = pois(rng);
    std::vector<Point> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) pts.push_back(window.sample(rng));
    // duplicate draws have probability zero; guard anyway
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return Configuration(std::move(pts));
}

AdmissibilityReport admissibility_audit(const GibbsSpec& spec, int mc_samples, Rng& rng) {
    AdmissibilityReport rep;
    int finite_neg = 0;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < mc_samples; ++i) {
        const Configuration zeta = sample_poisson(spec.z, spec.window, rng);
        double w = 0.0;
        try {
            const EnergyBreakdown b = hamiltonian(spec, zeta);
            ++finite_neg;
            w = b.total.exp_neg();
        } catch (const NegativePartDivergent&) {
        }
        sum += w;
        sum2 += w * w;
    }
    rep.neg_part_finite_fraction = static_cast<double>(finite_neg) / mc_samples;
    rep.z_estimate = sum / mc_samples;
    const double var = std::max(0.0, sum2 / mc_samples - rep.z_estimate * rep.z_estimate);
    const double se = std::sqrt(var / mc_samples);
    rep.z_low = std::max(0.0, rep.z_estimate - 3.0 * se);
    rep.z_high = rep.z_estimate + 3.0 * se;
    return rep;
}

double stability_audit(const std::vector<GibbsSpec>& specs, int samples_per_spec, Rng& rng) {
    double worst = 0.0;
    for (const GibbsSpec& spec : specs) {
        for (int i = 0; i < samples_per_spec; ++i) {
            const Configuration zeta = sample_poisson(spec.z, spec.window, rng);
            const EnergyBreakdown b = hamiltonian(spec, zeta);
            if (b.total.is_infinite()) continue;
            const std::size_t npts =
                zeta.size() + spec.boundary.annulus(spec.window, spec.confinement.r).size();
            if (npts == 0) continue;
            worst = std::max(worst, -b.total.value() / static_cast<double>(npts));
        }
    }
    return worst;
}

std::string breakdown_report(const EnergyBreakdown& b) {
    std::ostringstream os;
    os.precision(17);
    os << "total: " << b.total << "\n";
    os << "negative_part: " << b.negative_part << "\n";
    os << "hyperedges: " << b.per_hyperedge.size() << "\n";
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < b.per_hyperedge.size(); ++i) {
        const ExtendedReal& v = b.per_hyperedge[i].second;
        ranked.emplace_back(v.is_infinite() ? std::numeric_limits<double>::infinity()
                                            : std::fabs(v.value()),
                            i);
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& c) { return a.first > c.first; });
    const std::size_t top = std::min<std::size_t>(10, ranked.size());
    for (std::size_t r = 0; r < top; ++r) {
        const auto& [e, v] = b.per_hyperedge[ranked[r].second];
        os << "  " << structure_tag(e.structure) << " #" << e.eta.size() << " = " << v << "\n";
    }
    return os.str();
}

}  // namespace gibbspp
