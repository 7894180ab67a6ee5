#include "gibbspp/hypergraph.hpp"

#include <algorithm>
#include <cmath>

#include "gibbspp/errors.hpp"

namespace gibbspp {

bool operator==(const StructureId& a, const StructureId& b) {
    if (a.index() != b.index()) return false;
    if (const auto* lc = std::get_if<LCr>(&a)) return lc->r == std::get<LCr>(b).r;
    if (const auto* sk = std::get_if<SGk>(&a)) return sk->k == std::get<SGk>(b).k;
    return true;
}

std::string structure_tag(const StructureId& s) {
    struct V {
        std::string operator()(const LCr& x) const { return "lc_" + std::to_string(x.r); }
        std::string operator()(const Del2&) const { return "del2"; }
        std::string operator()(const Del3&) const { return "del3"; }
        std::string operator()(const Del2b&) const { return "del2b"; }
        std::string operator()(const Gab2&) const { return "gab2"; }
        std::string operator()(const SG&) const { return "sg"; }
        std::string operator()(const SGk& x) const { return "sg" + std::to_string(x.k); }
        std::string operator()(const SGb&) const { return "sgb"; }
    };
    return std::visit(V{}, s);
}

RangeConstants range_constants(const StructureId& s) {
    struct V {
        RangeConstants operator()(const LCr& x) const { return {1, -1, x.r}; }
        RangeConstants operator()(const Del2&) const { return {2, 0, 1.0}; }
        RangeConstants operator()(const Del3&) const { return {2, 0, 1.0}; }
        RangeConstants operator()(const Del2b&) const { return {2, 0, 1.0}; }
        RangeConstants operator()(const Gab2&) const { return {2, 0, 1.0}; }
        RangeConstants operator()(const SG&) const { return {0, -1, 0.0}; }
        RangeConstants operator()(const SGk& x) const { return {1, x.k, 1.0}; }
        RangeConstants operator()(const SGb&) const { return {2, 0, 1.0}; }
    };
    return std::visit(V{}, s);
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

void extend_cliques(const Configuration& config, const std::vector<std::vector<char>>& adj,
                    std::vector<int>& current, int from, const StructureId& s,
                    std::vector<Hyperedge>& out) {
    const int n = static_cast<int>(config.size());
    for (int i = from; i < n; ++i) {
        bool ok = true;
        for (int j : current)
            if (!adj[j][i]) {
                ok = false;
                break;
            }
        if (!ok) continue;
        current.push_back(i);
        Hyperedge e;
        e.structure = s;
        for (int j : current) e.eta.push_back(config[j]);
        out.push_back(std::move(e));
        extend_cliques(config, adj, current, i + 1, s, out);
        current.pop_back();
    }
}

Hyperedge make_edge(const Configuration& config, int i, int j, const StructureId& s) {
    Hyperedge e;
    e.structure = s;
    e.eta = {config[i], config[j]};
    std::sort(e.eta.begin(), e.eta.end(), lex_less);
    return e;
}

Hyperedge make_singleton(const Point& x, const StructureId& s) {
    Hyperedge e;
    e.structure = s;
    e.eta = {x};
    return e;
}

}  // namespace

std::vector<Hyperedge> enumerate_hyperedges(const StructureId& s, const Configuration& config) {
    const int n = static_cast<int>(config.size());
    std::vector<Hyperedge> out;

    if (const auto* lc = std::get_if<LCr>(&s)) {
        std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                adj[i][j] = adj[j][i] = dist(config[i], config[j]) <= lc->r;
        std::vector<int> current;
        extend_cliques(config, adj, current, 0, s, out);
        return out;
    }
    if (std::holds_alternative<Del2>(s)) {
        for (const auto& e : delaunay(config).edges) out.push_back(make_edge(config, e[0], e[1], s));
        return out;
    }
    if (std::holds_alternative<Del3>(s)) {
        for (const auto& t : delaunay(config).triangles) {
            Hyperedge e;
            e.structure = s;
            e.eta = {config[t[0]], config[t[1]], config[t[2]]};
            std::sort(e.eta.begin(), e.eta.end(), lex_less);
            out.push_back(std::move(e));
        }
        return out;
    }
    if (std::holds_alternative<Del2b>(s)) {
        const DelaunayResult del = delaunay(config);
        for (const auto& e : del.edges)
            if (!del.on_hull[e[0]] && !del.on_hull[e[1]])
                out.push_back(make_edge(config, e[0], e[1], s));
        return out;
    }
    if (std::holds_alternative<Gab2>(s)) {
        for (const auto& e : gabriel_edges(config)) out.push_back(make_edge(config, e[0], e[1], s));
        return out;
    }
    if (std::holds_alternative<SG>(s)) {
        for (int i = 0; i < n; ++i) out.push_back(make_singleton(config[i], s));
        return out;
    }
    if (const auto* sk = std::get_if<SGk>(&s)) {
        if (n >= sk->k + 1)
            for (int i = 0; i < n; ++i) out.push_back(make_singleton(config[i], s));
        return out;
    }
    // SGb
    if (n < 3) return out;
    const DelaunayResult del = delaunay(config);
    for (int i = 0; i < n; ++i)
        if (!del.on_hull[i]) out.push_back(make_singleton(config[i], s));
    return out;
}

// ---------------------------------------------------------------------------
// horizons

namespace {

Ball centroid_ball(const std::vector<Point>& pts) {
    const int d = static_cast<int>(pts.front().size());
    Point c(d, 0.0);
    for (const Point& p : pts)
        for (int i = 0; i < d; ++i) c[i] += p[i];
    for (int i = 0; i < d; ++i) c[i] /= static_cast<double>(pts.size());
    double r = 0.0;
    for (const Point& p : pts) r = std::max(r, dist(c, p));
    return {c, r};
}

Ball diametral_ball(const Point& x, const Point& y) {
    Point c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = 0.5 * (x[i] + y[i]);
    return {c, 0.5 * dist(x, y)};
}

Ball enclosing_ball(const std::vector<Ball>& balls) {
    const int d = static_cast<int>(balls.front().center.size());
    Point c(d, 0.0);
    for (const Ball& b : balls)
        for (int i = 0; i < d; ++i) c[i] += b.center[i];
    for (int i = 0; i < d; ++i) c[i] /= static_cast<double>(balls.size());
    double r = 0.0;
    for (const Ball& b : balls) r = std::max(r, dist(c, b.center) + b.radius);
    return {c, r};
}

Ball tri_circumball(const Configuration& config, const std::array<int, 3>& t) {
    const auto cb = circumball({config[t[0]], config[t[1]], config[t[2]]});
    if (!cb) throw GeometryDegenerate("degenerate triangle in flower");
    return *cb;
}

/// Circumballs of the Delaunay triangles containing x (the Voronoi flower).
std::vector<Ball> flower(const Configuration& config, const DelaunayResult& del, int idx) {
    std::vector<Ball> balls;
    for (int ti : del.point_triangles[idx]) balls.push_back(tri_circumball(config, del.triangles[ti]));
    return balls;
}

Horizon horizon_impl(const StructureId& s, const Hyperedge& eta, const Configuration& config,
                     const DelaunayResult* del) {
    Horizon h;
    if (std::holds_alternative<LCr>(s)) {
        h.region = {centroid_ball(eta.eta)};
    } else if (std::holds_alternative<Del3>(s)) {
        const auto cb = circumball(eta.eta);
        if (!cb) throw GeometryDegenerate("degenerate Delaunay triangle");
        h.region = {*cb};
    } else if (std::holds_alternative<Gab2>(s)) {
        h.region = {diametral_ball(eta.eta[0], eta.eta[1])};
    } else if (std::holds_alternative<SG>(s)) {
        h.region = {Ball{eta.eta[0], 0.0}};
    } else if (const auto* sk = std::get_if<SGk>(&s)) {
        const auto nb = knn_order(config, eta.eta[0], sk->k);
        h.region = {Ball{eta.eta[0], dist(eta.eta[0], nb.back())}};
    } else {
        // Delaunay-derived structures needing the triangulation
        const int i0 = config.index_of(eta.eta[0]);
        if (std::holds_alternative<Del2>(s)) {
            const int i1 = config.index_of(eta.eta[1]);
            std::array<int, 2> key = {std::min(i0, i1), std::max(i0, i1)};
            const auto it = std::lower_bound(del->edges.begin(), del->edges.end(), key);
            if (it == del->edges.end() || *it != key) throw NotAHyperedge();
            const auto& tris = del->edge_triangles[it - del->edges.begin()];
            if (tris.empty()) {
                h.region = {diametral_ball(eta.eta[0], eta.eta[1])};  // collinear config
            } else {
                for (int ti : tris) h.region.push_back(tri_circumball(config, del->triangles[ti]));
            }
        } else if (std::holds_alternative<Del2b>(s)) {
            const int i1 = config.index_of(eta.eta[1]);
            h.region = flower(config, *del, i0);
            for (Ball& b : flower(config, *del, i1)) h.region.push_back(std::move(b));
        } else {  // SGb
            h.region = flower(config, *del, i0);
        }
    }
    h.enclosing = enclosing_ball(h.region);
    return h;
}

}  // namespace

Horizon horizon(const StructureId& s, const Hyperedge& eta, const Configuration& config) {
    const auto all = enumerate_hyperedges(s, config);
    if (std::find(all.begin(), all.end(), eta) == all.end()) throw NotAHyperedge();
    std::optional<DelaunayResult> del;
    if (std::holds_alternative<Del2>(s) || std::holds_alternative<Del2b>(s) ||
        std::holds_alternative<SGb>(s))
        del = delaunay(config);
    return horizon_impl(s, eta, config, del ? &*del : nullptr);
}

std::vector<Hyperedge> affected(const StructureId& s, const Configuration& interior,
                                const Configuration& boundary, const Window& window) {
    const Configuration total = interior.merged(boundary);
    std::optional<DelaunayResult> del;
    if (std::holds_alternative<Del2>(s) || std::holds_alternative<Del2b>(s) ||
        std::holds_alternative<SGb>(s))
        del = delaunay(total);
    std::vector<Hyperedge> out;
    for (Hyperedge& e : enumerate_hyperedges(s, total)) {
        const Horizon h = horizon_impl(s, e, total, del ? &*del : nullptr);
        for (const Ball& b : h.region) {
            if (window.distance(b.center) <= b.radius) {
                out.push_back(std::move(e));
                break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// confinement

namespace {

double observed_reach(const StructureId& s, const Configuration& config, const Window& window) {
    double reach = 0.0;
    std::optional<DelaunayResult> del;
    if (std::holds_alternative<Del2>(s) || std::holds_alternative<Del2b>(s) ||
        std::holds_alternative<SGb>(s))
        del = delaunay(config);
    for (const Hyperedge& e : enumerate_hyperedges(s, config)) {
        const Horizon h = horizon_impl(s, e, config, del ? &*del : nullptr);
        bool hits = false;
        double far = 0.0;
        for (const Ball& b : h.region) {
            const double d0 = window.distance(b.center);
            if (d0 <= b.radius) hits = true;
            far = std::max(far, d0 + b.radius);
        }
        if (hits) reach = std::max(reach, far);
    }
    return reach;
}

}  // namespace

BoundaryCertificate confinement(const StructureId& s, const Configuration& config,
                                const Window& window, const LatticeSpec& lattice, int m, int n,
                                int n_cap) {
    BoundaryCertificate cert;
    const RangeConstants rc = range_constants(s);

    if (std::holds_alternative<SG>(s)) {
        cert.ok = true;
        cert.r = 0.0;
        cert.boundary_points = Configuration();
        return cert;
    }
    if (const auto* lc = std::get_if<LCr>(&s)) {
        cert.ok = true;
        cert.r = 2.0 * lc->r;  // hyperedges reaching the window lie within r; their
                               // horizon balls reach at most another r
        cert.boundary_points = config.annulus(window, cert.r);
        cert.r_observed = observed_reach(s, config, window);
        return cert;
    }

    const int d = window.dim();
    const double dplus = lattice.enclosing_diameter();
    const double dminus = lattice.inscribed_diameter();
    const int m_use = m > 0 ? m : static_cast<int>(std::ceil(6.0 * rc.ell_R * dplus / dminus));

    // lattice coordinates relative to the window center
    const Point wc = window.center();
    auto ucoord = [&](const Point& p) {
        Point rel(d);
        for (int i = 0; i < d; ++i) rel[i] = p[i] - wc[i];
        return lattice.M.solve(rel);
    };
    double umax = 0.0;
    for (const Point& c : window.corners()) {
        const Point u = ucoord(c);
        for (double ui : u) umax = std::max(umax, std::fabs(ui));
    }
    int n_min = std::max(1, static_cast<int>(std::ceil(umax - 0.5)));
    n_min = std::max(n_min, static_cast<int>(std::ceil(rc.delta_R / (6.0 * dplus))));
    if (n > 0) n_min = std::max(n_min, n);

    std::vector<Point> ucache;
    ucache.reserve(config.size());
    for (const Point& p : config.points()) ucache.push_back(ucoord(p));

    for (int nn = n_min; nn <= n_cap; ++nn) {
        bool all_ok = true;
        std::vector<int> k(d, -m_use);
        while (all_ok) {
            bool zero = true;
            for (int ki : k)
                if (ki != 0) zero = false;
            if (!zero) {
                int count = 0;
                for (const Point& u : ucache) {
                    bool inside = true;
                    for (int i = 0; i < d; ++i) {
                        const double v = u[i] - (2 * nn + 1) * k[i];
                        if (v < -nn - 0.5 || v >= nn + 0.5) {
                            inside = false;
                            break;
                        }
                    }
                    if (inside && ++count > rc.n_R) break;
                }
                if (count <= rc.n_R) all_ok = false;
            }
            int i = 0;
            for (; i < d; ++i) {
                if (++k[i] <= m_use) break;
                k[i] = -m_use;
            }
            if (i == d) break;
        }
        if (!all_ok) continue;

        // certified: r covers the enlarged box
        const int N = nn + (2 * nn + 1) * m_use;
        double r = 0.0;
        for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
            Point u(d);
            for (int i = 0; i < d; ++i) u[i] = (mask & (1u << i)) ? (N + 0.5) : -(N + 0.5);
            Point corner = lattice.M.mul(u);
            for (int i = 0; i < d; ++i) corner[i] += wc[i];
            r = std::max(r, window.distance(corner));
        }
        cert.ok = true;
        cert.r = r;
        cert.n = nn;
        cert.m = m_use;
        cert.boundary_points = config.annulus(window, r);
        cert.r_observed = observed_reach(s, config, window);
        return cert;
    }
    cert.ok = false;
    cert.n = n_cap;
    cert.m = m_use;
    return cert;
}

// ---------------------------------------------------------------------------
// perturbation harness

PerturbReport perturb_outside_test(
    const StructureId& s,
    const std::function<ExtendedReal(const Hyperedge&, const Configuration&)>& evaluate,
    const Configuration& config, const Window& window, double r, int trials, Rng& rng) {
    PerturbReport rep;
    rep.trials = trials;

    const Configuration interior = config.restrict_to(window);
    std::vector<Point> outside;
    for (const Point& p : config.points())
        if (!window.contains(p)) outside.push_back(p);
    const Configuration base_affected_boundary(outside);
    const auto base = affected(s, interior, base_affected_boundary, window);
    std::vector<ExtendedReal> base_vals;
    base_vals.reserve(base.size());
    for (const auto& e : base) base_vals.push_back(evaluate(e, config));

    const int d = window.dim();
    const Point wc = window.center();
    const double wr = window.diameter() / 2.0;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Point> far_points;
    for (const Point& p : config.points())
        if (window.distance(p) > r) far_points.push_back(p);

    for (int t = 0; t < trials; ++t) {
        Configuration perturbed = config;
        const int n_add = 1 + static_cast<int>(u01(rng) * 3.0);
        for (int a = 0; a < n_add; ++a) {
            // random direction, radius beyond the certificate
            for (int attempt = 0; attempt < 64; ++attempt) {
                Point dir(d);
                double nn = 0.0;
                for (int i = 0; i < d; ++i) {
                    dir[i] = gauss(rng);
                    nn += dir[i] * dir[i];
                }
                nn = std::sqrt(nn);
                const double rad = wr + r + 1e-6 + u01(rng) * (2.0 * wr + r);
                Point p(d);
                for (int i = 0; i < d; ++i) p[i] = wc[i] + dir[i] / nn * rad;
                if (window.distance(p) > r && !perturbed.contains(p)) {
                    perturbed = perturbed.with_point(p);
                    break;
                }
            }
        }
        if (!far_points.empty() && u01(rng) < 0.5) {
            const auto& victim =
                far_points[static_cast<std::size_t>(u01(rng) * far_points.size()) %
                           far_points.size()];
            if (perturbed.contains(victim)) perturbed = perturbed.without_point(victim);
        }

        bool fail = false;
        try {
            const auto pert_edges = enumerate_hyperedges(s, perturbed);
            for (std::size_t i = 0; i < base.size(); ++i) {
                const auto it = std::find_if(pert_edges.begin(), pert_edges.end(),
                                             [&](const Hyperedge& e) { return e.eta == base[i].eta; });
                if (it == pert_edges.end()) {
                    fail = true;
                    break;
                }
                if (evaluate(*it, perturbed) != base_vals[i]) {
                    fail = true;
                    break;
                }
            }
        } catch (const std::exception&) {
            fail = true;
        }
        if (fail) {
            ++rep.failures;
            rep.pass = false;
        }
    }
    return rep;
}

}  // namespace gibbspp
