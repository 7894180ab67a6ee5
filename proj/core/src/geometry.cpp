#include "gibbspp/geometry.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gibbspp/predicates.hpp"

namespace gibbspp {

double dist2(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dist(const Point& a, const Point& b) { return std::sqrt(dist2(a, b)); }

bool lex_less(const Point& a, const Point& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// ---------------------------------------------------------------------------
// Mat

Mat Mat::identity(int d) {
    Mat m;
    m.d = d;
    m.a.assign(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
}

Mat Mat::diag(const std::vector<double>& lengths) {
    Mat m = identity(static_cast<int>(lengths.size()));
    for (int i = 0; i < m.d; ++i) m.at(i, i) = lengths[i];
    return m;
}

Point Mat::col(int j) const {
    Point c(d);
    for (int i = 0; i < d; ++i) c[i] = at(i, j);
    return c;
}

double Mat::det() const {
    std::vector<double> m = a;
    const int n = d;
    double sign = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(m[i * n + k]) > std::fabs(m[piv * n + k])) piv = i;
        if (m[piv * n + k] == 0.0) return 0.0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m[piv * n + j], m[k * n + j]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = m[i * n + k] / m[k * n + k];
            for (int j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
        }
    }
    double p = sign;
    for (int k = 0; k < n; ++k) p *= m[k * n + k];
    return p;
}

Point Mat::solve(const Point& b) const {
    const int n = d;
    std::vector<double> m = a;
    Point x = b;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(m[i * n + k]) > std::fabs(m[piv * n + k])) piv = i;
        if (m[piv * n + k] == 0.0) throw GeometryDegenerate("singular matrix in solve");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m[piv * n + j], m[k * n + j]);
            std::swap(x[piv], x[k]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = m[i * n + k] / m[k * n + k];
            for (int j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
            x[i] -= f * x[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j < n; ++j) s -= m[i * n + j] * x[j];
        x[i] = s / m[i * n + i];
    }
    return x;
}

Point Mat::mul(const Point& v) const {
    Point r(d, 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r[i] += at(i, j) * v[j];
    return r;
}

// ---------------------------------------------------------------------------
// Window

Window Window::box(const Point& lo, const Point& hi) {
    const int d = static_cast<int>(lo.size());
    std::vector<double> lengths(d);
    for (int i = 0; i < d; ++i) {
        lengths[i] = hi[i] - lo[i];
        if (!(lengths[i] > 0.0)) throw GeometryDegenerate("window box with nonpositive side");
    }
    return parallelotope(lo, Mat::diag(lengths));
}

Window Window::parallelotope(const Point& origin, const Mat& spanning) {
    Window w;
    w.origin_ = origin;
    w.spanning_ = spanning;
    w.volume_ = std::fabs(spanning.det());
    if (!(w.volume_ > 0.0)) throw GeometryDegenerate("window with zero volume");
    return w;
}

bool Window::contains(const Point& p) const {
    Point rel(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) rel[i] = p[i] - origin_[i];
    const Point u = spanning_.solve(rel);
    for (double ui : u)
        if (ui < 0.0 || ui >= 1.0) return false;
    return true;
}

namespace {

bool is_diagonal(const Mat& m) {
    for (int i = 0; i < m.d; ++i)
        for (int j = 0; j < m.d; ++j)
            if (i != j && m.at(i, j) != 0.0) return false;
    return true;
}

double point_segment_dist(const Point& p, const Point& a, const Point& b) {
    const double abx = b[0] - a[0], aby = b[1] - a[1];
    const double apx = p[0] - a[0], apy = p[1] - a[1];
    const double len2 = abx * abx + aby * aby;
    double t = len2 > 0.0 ? (apx * abx + apy * aby) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double qx = a[0] + t * abx, qy = a[1] + t * aby;
    return std::hypot(p[0] - qx, p[1] - qy);
}

}  // namespace

double Window::distance(const Point& p) const {
    const int d = dim();
    if (is_diagonal(spanning_)) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double lo = origin_[i], hi = origin_[i] + spanning_.at(i, i);
            const double q = std::clamp(p[i], lo, hi);
            s += (p[i] - q) * (p[i] - q);
        }
        return std::sqrt(s);
    }
    if (d == 2) {
        // convex quad; inside test then min over edges
        Point rel = {p[0] - origin_[0], p[1] - origin_[1]};
        const Point u = spanning_.solve(rel);
        if (u[0] >= 0.0 && u[0] <= 1.0 && u[1] >= 0.0 && u[1] <= 1.0) return 0.0;
        const auto cs = corners();
        // ccw order of the 4 corners, with columns c1, c2: o, o+c1, o+c1+c2, o+c2
        const Point o = origin_;
        const Point c1 = spanning_.col(0), c2 = spanning_.col(1);
        const Point q0 = o;
        const Point q1 = {o[0] + c1[0], o[1] + c1[1]};
        const Point q2 = {o[0] + c1[0] + c2[0], o[1] + c1[1] + c2[1]};
        const Point q3 = {o[0] + c2[0], o[1] + c2[1]};
        double best = point_segment_dist(p, q0, q1);
        best = std::min(best, point_segment_dist(p, q1, q2));
        best = std::min(best, point_segment_dist(p, q2, q3));
        best = std::min(best, point_segment_dist(p, q3, q0));
        return best;
    }
    throw UnsupportedDimension("non-axis-aligned window distance for d > 2");
}

std::vector<Point> Window::corners() const {
    const int d = dim();
    std::vector<Point> out;
    out.reserve(std::size_t(1) << d);
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        Point c = origin_;
        for (int j = 0; j < d; ++j) {
            if (mask & (1u << j)) {
                const Point colj = spanning_.col(j);
                for (int i = 0; i < d; ++i) c[i] += colj[i];
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

Point Window::center() const {
    Point c = origin_;
    for (int j = 0; j < dim(); ++j) {
        const Point colj = spanning_.col(j);
        for (int i = 0; i < dim(); ++i) c[i] += 0.5 * colj[i];
    }
    return c;
}

double Window::diameter() const {
    const auto cs = corners();
    double best = 0.0;
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j) best = std::max(best, dist(cs[i], cs[j]));
    return best;
}

Point Window::sample(Rng& rng) const {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Point u(dim());
    for (int i = 0; i < dim(); ++i) u[i] = u01(rng);
    Point p = spanning_.mul(u);
    for (int i = 0; i < dim(); ++i) p[i] += origin_[i];
    return p;
}

Window Window::scaled(double r) const {
    Mat s = spanning_;
    for (double& v : s.a) v *= r;
    Point o = origin_;
    for (double& v : o) v *= r;
    return parallelotope(o, s);
}

Window Window::translated(const Point& shift) const {
    Point o = origin_;
    for (int i = 0; i < dim(); ++i) o[i] += shift[i];
    return parallelotope(o, spanning_);
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(std::vector<Point> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end(), lex_less);
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (points_[i] == points_[i - 1]) throw GeometryDegenerate("duplicate point");
    for (const Point& p : points_)
        for (double c : p)
            if (!std::isfinite(c)) throw GeometryDegenerate("non-finite coordinate");
}

bool Configuration::contains(const Point& p) const { return index_of(p) >= 0; }

int Configuration::index_of(const Point& p) const {
    const auto it = std::lower_bound(points_.begin(), points_.end(), p, lex_less);
    if (it != points_.end() && *it == p) return static_cast<int>(it - points_.begin());
    return -1;
}

Configuration Configuration::with_point(const Point& p) const {
    std::vector<Point> pts = points_;
    pts.push_back(p);
    return Configuration(std::move(pts));
}

Configuration Configuration::without_point(const Point& p) const {
    const int i = index_of(p);
    if (i < 0) throw PointNotInConfiguration();
    std::vector<Point> pts = points_;
    pts.erase(pts.begin() + i);
    return Configuration(std::move(pts));
}

Configuration Configuration::translated(const Point& shift) const {
    std::vector<Point> pts = points_;
    for (Point& p : pts)
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += shift[i];
    return Configuration(std::move(pts));
}

Configuration Configuration::scaled(double r) const {
    std::vector<Point> pts = points_;
    for (Point& p : pts)
        for (double& c : p) c *= r;
    return Configuration(std::move(pts));
}

Configuration Configuration::restrict_to(const Window& w) const {
    std::vector<Point> pts;
    for (const Point& p : points_)
        if (w.contains(p)) pts.push_back(p);
    return Configuration(std::move(pts));
}

Configuration Configuration::annulus(const Window& w, double r) const {
    std::vector<Point> pts;
    for (const Point& p : points_)
        if (!w.contains(p) && w.distance(p) <= r) pts.push_back(p);
    return Configuration(std::move(pts));
}

Configuration Configuration::merged(const Configuration& other) const {
    std::vector<Point> pts = points_;
    pts.insert(pts.end(), other.points_.begin(), other.points_.end());
    return Configuration(std::move(pts));
}

// ---------------------------------------------------------------------------
// circumball

std::optional<Ball> circumball(const std::vector<Point>& simplex) {
    const int d = static_cast<int>(simplex.front().size());
    if (static_cast<int>(simplex.size()) != d + 1)
        throw GeometryDegenerate("circumball wants d+1 points");
    if (d == 2) {
        if (pred::orient2d(simplex[0].data(), simplex[1].data(), simplex[2].data()) == 0)
            return std::nullopt;
    }
    // relative to p_0 (translation invariant): 2 (p_i - p_0) . y = |p_i - p_0|^2
    Mat A;
    A.d = d;
    A.a.assign(static_cast<std::size_t>(d) * d, 0.0);
    Point b(d, 0.0);
    const Point& p0 = simplex[0];
    for (int i = 1; i <= d; ++i) {
        const Point& pi = simplex[i];
        double n2 = 0.0;
        for (int j = 0; j < d; ++j) {
            const double dj = pi[j] - p0[j];
            A.at(i - 1, j) = 2.0 * dj;
            n2 += dj * dj;
        }
        b[i - 1] = n2;
    }
    Point y;
    try {
        y = A.solve(b);
    } catch (const GeometryDegenerate&) {
        // near-singular in doubles (sliver simplex) but not exactly flat:
        // solve the same system in rationals, where it is always regular
        std::vector<mpq_class> aq(static_cast<std::size_t>(d) * d);
        std::vector<mpq_class> bq(d);
        for (int i = 1; i <= d; ++i) {
            mpq_class n2 = 0;
            for (int j = 0; j < d; ++j) {
                const mpq_class dj = mpq_class(simplex[i][j]) - mpq_class(p0[j]);
                aq[static_cast<std::size_t>(i - 1) * d + j] = 2 * dj;
                n2 += dj * dj;
            }
            bq[i - 1] = n2;
        }
        // gaussian elimination with exact pivots
        std::vector<int> rows(d);
        for (int i = 0; i < d; ++i) rows[i] = i;
        for (int k = 0; k < d; ++k) {
            int piv = -1;
            for (int i = k; i < d; ++i)
                if (aq[static_cast<std::size_t>(rows[i]) * d + k] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return std::nullopt;
            std::swap(rows[k], rows[piv]);
            for (int i = k + 1; i < d; ++i) {
                const mpq_class f = aq[static_cast<std::size_t>(rows[i]) * d + k] /
                                    aq[static_cast<std::size_t>(rows[k]) * d + k];
                for (int j = k; j < d; ++j)
                    aq[static_cast<std::size_t>(rows[i]) * d + j] -=
                        f * aq[static_cast<std::size_t>(rows[k]) * d + j];
                bq[rows[i]] -= f * bq[rows[k]];
            }
        }
        std::vector<mpq_class> yq(d);
        for (int k = d - 1; k >= 0; --k) {
            mpq_class acc = bq[rows[k]];
            for (int j = k + 1; j < d; ++j)
                acc -= aq[static_cast<std::size_t>(rows[k]) * d + j] * yq[j];
            yq[k] = acc / aq[static_cast<std::size_t>(rows[k]) * d + k];
        }
        y.assign(d, 0.0);
        for (int j = 0; j < d; ++j) y[j] = yq[j].get_d();
    }
    const double radius = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
    Point c(d);
    for (int j = 0; j < d; ++j) c[j] = p0[j] + y[j];
    return Ball{c, radius};
}

// ---------------------------------------------------------------------------
// convex hull (monotone chain, collinear boundary points kept)

std::vector<int> convex_hull(const Configuration& config) {
    const int n = static_cast<int>(config.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);  // already lex-sorted
    if (n <= 2) return idx;

    auto build = [&](bool lower) {
        std::vector<int> h;
        for (int ii = 0; ii < n; ++ii) {
            const int i = lower ? ii : n - 1 - ii;
            while (h.size() >= 2) {
                const int o = pred::orient2d(config[h[h.size() - 2]].data(),
                                             config[h.back()].data(), config[i].data());
                if (o < 0)
                    h.pop_back();  // strict right turn only; collinear stays
                else
                    break;
            }
            h.push_back(i);
        }
        return h;
    };
    std::vector<int> lower = build(true);
    std::vector<int> upper = build(false);
    std::set<int> hull(lower.begin(), lower.end());
    hull.insert(upper.begin(), upper.end());
    return {hull.begin(), hull.end()};
}

// ---------------------------------------------------------------------------
// delaunay (gift wrapping with exact predicates)

namespace {

bool all_collinear(const Configuration& config) {
    const int n = static_cast<int>(config.size());
    if (n < 3) return true;
    for (int i = 2; i < n; ++i)
        if (pred::orient2d(config[0].data(), config[1].data(), config[i].data()) != 0)
            return false;
    return true;
}

}  // namespace

std::vector<int> DelaunayResult::delaunay_neighbors(int i) const {
    std::vector<int> nb;
    for (const auto& e : edges) {
        if (e[0] == i) nb.push_back(e[1]);
        if (e[1] == i) nb.push_back(e[0]);
    }
    std::sort(nb.begin(), nb.end());
    return nb;
}

DelaunayResult delaunay(const Configuration& config) {
    const int n = static_cast<int>(config.size());
    for (const Point& p : config.points())
        if (p.size() != 2) throw UnsupportedDimension("delaunay is d=2 only");

    DelaunayResult res;
    res.on_hull.assign(n, 0);
    res.point_triangles.assign(n, {});
    if (n == 0) return res;
    if (n == 1) {
        res.on_hull[0] = 1;
        return res;
    }
    if (all_collinear(config)) {
        // empty balls exist only between lexicographic neighbors along the line
        for (int i = 0; i + 1 < n; ++i) res.edges.push_back({i, i + 1});
        std::fill(res.on_hull.begin(), res.on_hull.end(), 1);
        res.edge_triangles.assign(res.edges.size(), {});
        return res;
    }

    // starting hull edge from the lexicographic minimum
    int a = 0;
    int b = (a == 0) ? 1 : 0;
    for (int i = 0; i < n; ++i) {
        if (i == a || i == b) continue;
        const int o = pred::orient2d(config[a].data(), config[b].data(), config[i].data());
        if (o < 0 || (o == 0 && dist2(config[a], config[i]) < dist2(config[a], config[b]))) b = i;
    }

    std::set<std::pair<int, int>> processed;
    std::vector<std::pair<int, int>> frontier;
    frontier.emplace_back(a, b);
    std::set<std::array<int, 3>> tris;

    while (!frontier.empty()) {
        auto [u, v] = frontier.back();
        frontier.pop_back();
        if (!processed.insert({u, v}).second) continue;

        int best = -1;
        for (int i = 0; i < n; ++i) {
            if (i == u || i == v) continue;
            if (pred::orient2d(config[u].data(), config[v].data(), config[i].data()) <= 0)
                continue;
            if (best < 0) {
                best = i;
                continue;
            }
            const int s = pred::incircle(config[u].data(), config[v].data(), config[best].data(),
                                         config[i].data());
            // ties (s == 0) keep the current candidate; only an empty
            // circumcircle carrying a fourth point is a real degeneracy,
            // which the verification below catches
            if (s > 0) best = i;
        }
        if (best < 0) continue;  // hull edge, nothing on the left
        for (int i = 0; i < n; ++i) {
            if (i == u || i == v || i == best) continue;
            if (pred::incircle(config[u].data(), config[v].data(), config[best].data(),
                               config[i].data()) == 0)
                throw GeneralPositionViolation("four cocircular points on an empty circle");
        }

        std::array<int, 3> t = {u, v, best};
        std::sort(t.begin(), t.end());
        tris.insert(t);
        frontier.emplace_back(best, v);
        frontier.emplace_back(u, best);
        // the reverse side of (u,v) still needs exploration unless seeded
        frontier.emplace_back(v, u);
    }

    res.triangles.assign(tris.begin(), tris.end());
    std::set<std::array<int, 2>> edges;
    for (const auto& t : res.triangles) {
        edges.insert({t[0], t[1]});
        edges.insert({t[0], t[2]});
        edges.insert({t[1], t[2]});
    }
    res.edges.assign(edges.begin(), edges.end());
    res.edge_triangles.assign(res.edges.size(), {});
    for (int ti = 0; ti < static_cast<int>(res.triangles.size()); ++ti) {
        const auto& t = res.triangles[ti];
        for (int v : t) res.point_triangles[v].push_back(ti);
        const std::array<std::array<int, 2>, 3> te = {
            {{t[0], t[1]}, {t[0], t[2]}, {t[1], t[2]}}};
        for (const auto& e : te) {
            const auto it = std::lower_bound(res.edges.begin(), res.edges.end(), e);
            res.edge_triangles[it - res.edges.begin()].push_back(ti);
        }
    }
    for (int i : convex_hull(config)) res.on_hull[i] = 1;
    return res;
}

// ---------------------------------------------------------------------------
// voronoi

double VoronoiCell::area() const {
    double s = 0.0;
    const int m = static_cast<int>(vertices.size());
    for (int i = 0; i < m; ++i) {
        const Point& p = vertices[i];
        const Point& q = vertices[(i + 1) % m];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::fabs(s);
}

double VoronoiCell::perimeter() const {
    double s = 0.0;
    const int m = static_cast<int>(vertices.size());
    for (int i = 0; i < m; ++i) s += dist(vertices[i], vertices[(i + 1) % m]);
    return s;
}

VoronoiCell voronoi_cell(const Configuration& config, const DelaunayResult& del, int index) {
    VoronoiCell cell;
    cell.face_count = static_cast<int>(del.delaunay_neighbors(index).size());
    if (del.on_hull[index]) {
        cell.bounded = false;
        return cell;
    }
    cell.bounded = true;
    const Point& x = config[index];
    std::vector<std::pair<double, Point>> verts;
    for (int ti : del.point_triangles[index]) {
        const auto& t = del.triangles[ti];
        const auto cb = circumball({config[t[0]], config[t[1]], config[t[2]]});
        if (!cb) throw GeometryDegenerate("degenerate Delaunay triangle");
        const double ang = std::atan2(cb->center[1] - x[1], cb->center[0] - x[0]);
        verts.emplace_back(ang, cb->center);
    }
    std::sort(verts.begin(), verts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [ang, v] : verts) cell.vertices.push_back(std::move(v));
    return cell;
}

VoronoiCell voronoi_cell(const Configuration& config, const Point& x) {
    const int idx = config.index_of(x);
    if (idx < 0) throw PointNotInConfiguration();
    if (config.size() <= 2) {
        VoronoiCell cell;
        cell.bounded = false;
        cell.face_count = static_cast<int>(config.size()) - 1;
        return cell;
    }
    return voronoi_cell(config, delaunay(config), idx);
}

SharedFacet voronoi_shared_facet(const Configuration& config, int i, int j, const Window& clip) {
    SharedFacet f;
    const Point& p = config[i];
    const Point& q = config[j];
    const Point m = {(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0};
    Point t = {-(q[1] - p[1]), q[0] - p[0]};
    const double tn = std::hypot(t[0], t[1]);
    t[0] /= tn;
    t[1] /= tn;

    // restrict the bisector line m + s t to the clip window
    double slo = -std::numeric_limits<double>::infinity();
    double shi = std::numeric_limits<double>::infinity();
    {
        // u(s) = S^-1 (m + s t - o) must stay in [0,1]^2
        Point rel = {m[0] - clip.origin()[0], m[1] - clip.origin()[1]};
        const Point u0 = clip.spanning().solve(rel);
        const Point du = clip.spanning().solve(t);
        for (int k = 0; k < 2; ++k) {
            if (du[k] == 0.0) {
                if (u0[k] < 0.0 || u0[k] > 1.0) return f;
                continue;
            }
            double s1 = (0.0 - u0[k]) / du[k];
            double s2 = (1.0 - u0[k]) / du[k];
            if (s1 > s2) std::swap(s1, s2);
            slo = std::max(slo, s1);
            shi = std::min(shi, s2);
        }
    }
    const double clip_lo = slo, clip_hi = shi;
    if (!(shi > slo)) return f;

    // Halfplane cuts in exact rational arithmetic: near-cocircular inputs
    // produce facets far shorter than double precision can resolve, and
    // adjacency must match the exact Delaunay predicate. Exact midpoint and
    // unnormalized direction; the exact parameter is s_exact = s / (2 tn).
    const mpq_class tx = -(mpq_class(q[1]) - mpq_class(p[1]));
    const mpq_class ty = mpq_class(q[0]) - mpq_class(p[0]);
    const mpq_class mx = (mpq_class(p[0]) + mpq_class(q[0])) / 2;
    const mpq_class my = (mpq_class(p[1]) + mpq_class(q[1])) / 2;
    bool has_lo = false, has_hi = false;
    mpq_class qlo, qhi;
    for (std::size_t k = 0; k < config.size(); ++k) {
        if (static_cast<int>(k) == i || static_cast<int>(k) == j) continue;
        const Point& r = config[k];
        // |y-p| <= |y-r|  <=>  (r-p).y <= (|r|^2-|p|^2)/2, linear in s
        const mpq_class nx = mpq_class(r[0]) - mpq_class(p[0]);
        const mpq_class ny = mpq_class(r[1]) - mpq_class(p[1]);
        const mpq_class c = (mpq_class(r[0]) * r[0] + mpq_class(r[1]) * r[1] -
                             mpq_class(p[0]) * p[0] - mpq_class(p[1]) * p[1]) /
                            2;
        const mpq_class g0 = nx * mx + ny * my - c;
        const mpq_class g1 = nx * tx + ny * ty;
        if (g1 == 0) {
            if (g0 > 0) return f;
            continue;
        }
        const mpq_class s = -g0 / g1;
        if (g1 > 0) {
            if (!has_hi || s < qhi) qhi = s;
            has_hi = true;
        } else {
            if (!has_lo || s > qlo) qlo = s;
            has_lo = true;
        }
        if (has_lo && has_hi && !(qhi > qlo)) return f;
    }
    f.adjacent = true;
    // back to the normalized parameter scale for clipping and length
    if (has_lo) slo = std::max(slo, qlo.get_d() * tn);
    if (has_hi) shi = std::min(shi, qhi.get_d() * tn);
    f.length = std::max(0.0, shi - slo);
    const double tol = 1e-9 * (std::fabs(clip_hi) + std::fabs(clip_lo) + 1.0);
    f.touches_clip = (slo <= clip_lo + tol) || (shi >= clip_hi - tol);
    return f;
}

// ---------------------------------------------------------------------------
// knn

std::vector<Point> knn_order(const Configuration& config, const Point& x, int k) {
    if (!config.contains(x)) throw PointNotInConfiguration();
    if (static_cast<int>(config.size()) < k + 1)
        throw TooFewPoints("knn_order needs #config >= k+1");
    std::vector<Point> others;
    for (const Point& p : config.points())
        if (p != x) others.push_back(p);
    std::sort(others.begin(), others.end(), [&](const Point& a, const Point& b) {
        const double da = dist2(a, x), db = dist2(b, x);
        if (da != db) return da < db;
        return lex_less(a, b);
    });
    others.resize(k);
    return others;
}

// ---------------------------------------------------------------------------
// gabriel

namespace {

/// Sign of (p-x).(p-y): negative iff p is strictly inside the open disc with
/// diameter xy. Filtered double with exact rational fallback.
int diametral_sign(const Point& x, const Point& y, const Point& p) {
    double dot = 0.0, mag = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double u = p[i] - x[i], v = p[i] - y[i];
        dot += u * v;
        mag += std::fabs(u * v);
    }
    const double err = 8.0 * 2.220446049250313e-16 * mag;
    if (dot > err) return 1;
    if (dot < -err) return -1;
    mpq_class q(0);
    for (int i = 0; i < 2; ++i)
        q += (mpq_class(p[i]) - mpq_class(x[i])) * (mpq_class(p[i]) - mpq_class(y[i]));
    return sgn(q);
}

}  // namespace

std::vector<std::array<int, 2>> gabriel_edges(const Configuration& config) {
    const DelaunayResult del = delaunay(config);
    std::vector<std::array<int, 2>> out;
    for (const auto& e : del.edges) {
        bool gabriel = true;
        for (std::size_t k = 0; k < config.size(); ++k) {
            if (static_cast<int>(k) == e[0] || static_cast<int>(k) == e[1]) continue;
            if (diametral_sign(config[e[0]], config[e[1]], config[k]) < 0) {
                gabriel = false;
                break;
            }
        }
        if (gabriel) out.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// lattice

double LatticeSpec::cell_volume() const { return std::fabs(M.det()); }

Window LatticeSpec::cell_window(const std::vector<int>& k) const {
    const int d = M.d;
    Point shifted(d);
    for (int i = 0; i < d; ++i) shifted[i] = k[i] - 0.5;
    return Window::parallelotope(M.mul(shifted), M);
}

std::vector<int> LatticeSpec::cell_of(const Point& p) const {
    const Point u = M.solve(p);
    std::vector<int> k(M.d);
    for (int i = 0; i < M.d; ++i) k[i] = static_cast<int>(std::floor(u[i] + 0.5));
    return k;
}

double LatticeSpec::inscribed_diameter() const {
    const int d = M.d;
    const double vol = cell_volume();
    double rmin = std::numeric_limits<double>::infinity();
    for (int skip = 0; skip < d; ++skip) {
        // Gram determinant of the facet spanned by the other columns
        std::vector<Point> cols;
        for (int j = 0; j < d; ++j)
            if (j != skip) cols.push_back(M.col(j));
        const int m = static_cast<int>(cols.size());
        Mat g;
        g.d = m;
        g.a.assign(static_cast<std::size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                g.at(i, j) = std::inner_product(cols[i].begin(), cols[i].end(), cols[j].begin(), 0.0);
        const double facet = std::sqrt(std::max(g.det(), 0.0));
        if (facet > 0.0) rmin = std::min(rmin, vol / (2.0 * facet));
    }
    return 2.0 * rmin;
}

double LatticeSpec::enclosing_diameter() const {
    const int d = M.d;
    double rmax = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        Point c(d, 0.0);
        for (int j = 0; j < d; ++j) {
            const double s = (mask & (1u << j)) ? 0.5 : -0.5;
            const Point colj = M.col(j);
            for (int i = 0; i < d; ++i) c[i] += s * colj[i];
        }
        rmax = std::max(rmax, std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0)));
    }
    return 2.0 * rmax;
}

LatticeSpec LatticeSpec::triangular(double a) {
    Mat m = Mat::identity(2);
    m.at(0, 0) = a;
    m.at(1, 0) = 0.0;
    m.at(0, 1) = a / 2.0;
    m.at(1, 1) = a * std::sqrt(3.0) / 2.0;
    return LatticeSpec{m};
}

LatticeSpec LatticeSpec::cubic(int d, double a) {
    Mat m = Mat::identity(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = a;
    return LatticeSpec{m};
}

// ---------------------------------------------------------------------------
// templates and pseudo-periodic fills

void validate_template(const LatticeSpec& lattice, const CellTemplate& tpl) {
    const double rin = lattice.inscribed_diameter() / 2.0;
    if (const auto* sb = std::get_if<SingletonBall>(&tpl)) {
        if (!(sb->b > 0.0)) throw TemplateDoesNotFitCell("singleton radius must be positive");
        if (sb->b > rin) throw TemplateDoesNotFitCell("B(0,b) exceeds the cell");
        return;
    }
    if (const auto* ct = std::get_if<ClusterTemplate>(&tpl)) {
        if (ct->k < 1 || !(ct->b > 0.0) || !(ct->delta > 0.0))
            throw TemplateDoesNotFitCell("cluster parameters out of range");
        if (ct->b + ct->delta / 2.0 > rin)
            throw TemplateDoesNotFitCell("cluster ball exceeds the cell");
        return;
    }
    const auto& ex = std::get<ExplicitTemplate>(tpl);
    if (ex.points.empty()) throw TemplateDoesNotFitCell("template excludes the empty configuration");
    std::vector<int> zero(lattice.dim(), 0);
    const Window cell = lattice.cell_window(zero);
    for (const Point& p : ex.points) {
        Point abs(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) abs[i] = p[i];
        if (!cell.contains(abs)) throw TemplateDoesNotFitCell("explicit point outside cell");
    }
}

namespace {

Point sample_in_ball(const Point& center, double radius, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int d = static_cast<int>(center.size());
    while (true) {
        Point p(d);
        double n2 = 0.0;
        for (int i = 0; i < d; ++i) {
            p[i] = u(rng);
            n2 += p[i] * p[i];
        }
        if (n2 < 1.0) {
            for (int i = 0; i < d; ++i) p[i] = center[i] + radius * p[i];
            return p;
        }
    }
}

std::vector<Point> template_content(const CellTemplate& tpl, const Point& cell_center, int d,
                                    Rng* rng) {
    std::vector<Point> pts;
    if (const auto* sb = std::get_if<SingletonBall>(&tpl)) {
        pts.push_back(rng ? sample_in_ball(cell_center, sb->b, *rng) : cell_center);
        return pts;
    }
    if (const auto* ct = std::get_if<ClusterTemplate>(&tpl)) {
        Point root = rng ? sample_in_ball(cell_center, ct->b, *rng) : cell_center;
        pts.push_back(root);
        for (int i = 0; i < ct->k; ++i) {
            if (rng) {
                pts.push_back(sample_in_ball(root, ct->delta / 2.0, *rng));
            } else {
                Point p = root;
                const double ang = 2.0 * M_PI * i / ct->k;
                p[0] += (ct->delta / 4.0) * std::cos(ang);
                if (d > 1) p[1] += (ct->delta / 4.0) * std::sin(ang);
                pts.push_back(std::move(p));
            }
        }
        return pts;
    }
    for (const Point& rel : std::get<ExplicitTemplate>(tpl).points) {
        Point p = cell_center;
        for (int i = 0; i < d; ++i) p[i] += rel[i];
        pts.push_back(std::move(p));
    }
    return pts;
}

/// Whether cell C(k) has a positive-measure overlap with `region` (d=2 SAT,
/// or interval overlap for aligned boxes).
bool cell_meets_region(const Window& cell, const Window& region) {
    const int d = cell.dim();
    auto aligned = [](const Window& w) {
        for (int i = 0; i < w.dim(); ++i)
            for (int j = 0; j < w.dim(); ++j)
                if (i != j && w.spanning().at(i, j) != 0.0) return false;
        return true;
    };
    if (aligned(cell) && aligned(region)) {
        for (int i = 0; i < d; ++i) {
            const double a0 = cell.origin()[i], a1 = a0 + cell.spanning().at(i, i);
            const double b0 = region.origin()[i], b1 = b0 + region.spanning().at(i, i);
            if (std::min(a1, b1) - std::max(a0, b0) <= 1e-12) return false;
        }
        return true;
    }
    if (d != 2) throw UnsupportedDimension("pseudo_periodic with skew lattice needs d=2");
    // separating axis test on both quads
    auto project = [](const std::vector<Point>& poly, const Point& ax) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const Point& p : poly) {
            const double v = p[0] * ax[0] + p[1] * ax[1];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return std::make_pair(lo, hi);
    };
    const std::vector<Point> pa = cell.corners();
    const std::vector<Point> pb = region.corners();
    std::vector<Point> axes;
    for (const Window* w : {&cell, &region}) {
        for (int j = 0; j < 2; ++j) {
            const Point c = w->spanning().col(j);
            axes.push_back({-c[1], c[0]});
        }
    }
    for (const Point& ax : axes) {
        const auto [alo, ahi] = project(pa, ax);
        const auto [blo, bhi] = project(pb, ax);
        const double scale = std::max({std::fabs(alo), std::fabs(ahi), std::fabs(blo),
                                       std::fabs(bhi), 1.0});
        if (std::min(ahi, bhi) - std::max(alo, blo) <= 1e-12 * scale) return false;
    }
    return true;
}

}  // namespace

Configuration pseudo_periodic(const LatticeSpec& lattice, const CellTemplate& tpl,
                              const Window& region, Rng* rng) {
    validate_template(lattice, tpl);
    const int d = lattice.dim();

    // lattice-coordinate bounding box of the region, padded by one cell
    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    for (const Point& c : region.corners()) {
        const Point u = lattice.M.solve(c);
        for (int i = 0; i < d; ++i) {
            lo[i] = std::min(lo[i], u[i]);
            hi[i] = std::max(hi[i], u[i]);
        }
    }
    std::vector<int> kmin(d), kmax(d);
    for (int i = 0; i < d; ++i) {
        kmin[i] = static_cast<int>(std::floor(lo[i])) - 1;
        kmax[i] = static_cast<int>(std::ceil(hi[i])) + 1;
    }

    std::vector<Point> pts;
    std::vector<int> k = kmin;
    while (true) {
        const Window cell = lattice.cell_window(k);
        if (cell_meets_region(cell, region)) {
            Point center(d);
            std::vector<double> kd(d);
            for (int i = 0; i < d; ++i) kd[i] = k[i];
            center = lattice.M.mul({kd.begin(), kd.end()});
            for (Point& p : template_content(tpl, center, d, rng)) pts.push_back(std::move(p));
        }
        int i = 0;
        for (; i < d; ++i) {
            if (++k[i] <= kmax[i]) break;
            k[i] = kmin[i];
        }
        if (i == d) break;
    }
    return Configuration(std::move(pts));
}

}  // namespace gibbspp
