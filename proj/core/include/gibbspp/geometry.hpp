#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "gibbspp/errors.hpp"

namespace gibbspp {

/// A point of R^d. d is the vector length; 2 in most of the library.
using Point = std::vector<double>;

using Rng = std::mt19937_64;

inline Point pt(double x, double y) { return {x, y}; }

double dist(const Point& a, const Point& b);
double dist2(const Point& a, const Point& b);

/// Lexicographic order on R^d.
bool lex_less(const Point& a, const Point& b);

/// Small dense d x d matrix, row-major.
struct Mat {
    int d = 0;
    std::vector<double> a;  // d*d entries

    static Mat identity(int d);
    static Mat diag(const std::vector<double>& lengths);

    double& at(int i, int j) { return a[i * d + j]; }
    double at(int i, int j) const { return a[i * d + j]; }

    Point col(int j) const;
    double det() const;
    /// Solves A x = b by Gaussian elimination with partial pivoting.
    Point solve(const Point& b) const;
    Point mul(const Point& x) const;
};

/// Parallelotope window {origin + S u : u in [0,1)^d} with positive volume.
class Window {
  public:
    Window() = default;
    /// Axis-aligned box [lo, hi).
    static Window box(const Point& lo, const Point& hi);
    /// General parallelotope from origin and spanning vectors (columns of S).
    static Window parallelotope(const Point& origin, const Mat& spanning);

    int dim() const { return static_cast<int>(origin_.size()); }
    double volume() const { return volume_; }
    const Point& origin() const { return origin_; }
    const Mat& spanning() const { return spanning_; }

    bool contains(const Point& p) const;
    /// Euclidean distance from p to the (closed) window; 0 inside.
    double distance(const Point& p) const;
    /// Corners, 2^d points.
    std::vector<Point> corners() const;
    /// Center of the parallelotope.
    Point center() const;
    /// Diameter (largest corner-to-corner distance).
    double diameter() const;
    Point sample(Rng& rng) const;
    Window scaled(double r) const;
    Window translated(const Point& shift) const;

  private:
    Point origin_;
    Mat spanning_;
    double volume_ = 0.0;
};

/// Finite point set, kept sorted lexicographically; no duplicates.
class Configuration {
  public:
    Configuration() = default;
    explicit Configuration(std::vector<Point> points);

    static Configuration empty() { return Configuration(); }

    std::size_t size() const { return points_.size(); }
    const std::vector<Point>& points() const { return points_; }
    const Point& operator[](std::size_t i) const { return points_[i]; }

    bool contains(const Point& p) const;
    /// Index of p, or -1.
    int index_of(const Point& p) const;

    Configuration with_point(const Point& p) const;
    Configuration without_point(const Point& p) const;
    Configuration translated(const Point& shift) const;
    Configuration scaled(double r) const;
    /// Points inside `w` (half-open containment).
    Configuration restrict_to(const Window& w) const;
    /// Points at distance <= r from `w` but not inside it.
    Configuration annulus(const Window& w, double r) const;
    Configuration merged(const Configuration& other) const;

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.points_ == b.points_;
    }

  private:
    std::vector<Point> points_;
};

struct Ball {
    Point center;
    double radius = 0.0;
};

/// Circumball of a (d+1)-point simplex; nullopt when affinely dependent
/// (collinear in d=2).
std::optional<Ball> circumball(const std::vector<Point>& simplex);

/// Planar Delaunay structure of a configuration in general position.
struct DelaunayResult {
    std::vector<std::array<int, 3>> triangles;      // sorted index triples
    std::vector<std::array<int, 2>> edges;          // sorted index pairs
    std::vector<char> on_hull;                      // per point: on hull boundary
    /// Triangles incident to each edge (1 for hull edges, else 2), aligned
    /// with `edges`.
    std::vector<std::vector<int>> edge_triangles;
    /// Triangles incident to each point, aligned with the configuration.
    std::vector<std::vector<int>> point_triangles;

    std::vector<int> delaunay_neighbors(int i) const;
};

/// Del_k enumeration for d=2, k = 1..3. Throws GeneralPositionViolation when
/// four cocircular points are detected by the exact predicate.
DelaunayResult delaunay(const Configuration& config);

struct VoronoiCell {
    bool bounded = false;
    /// Vertices in ccw order, only when bounded.
    std::vector<Point> vertices;
    /// Number of cell edges; equals the Delaunay degree of the generator.
    int face_count = 0;

    double area() const;
    double perimeter() const;
};

/// Voronoi cell of x in config (d=2). Unbounded iff x lies on the hull.
VoronoiCell voronoi_cell(const Configuration& config, const Point& x);
VoronoiCell voronoi_cell(const Configuration& config, const DelaunayResult& del, int index);

struct SharedFacet {
    bool adjacent = false;
    bool touches_clip = false;
    double length = 0.0;
};

/// Shared Voronoi facet of points i, j computed by clipping the bisector to
/// `clip` and cutting with all other bisectors. Adjacent iff the facet has
/// more than one point.
SharedFacet voronoi_shared_facet(const Configuration& config, int i, int j, const Window& clip);

/// The k nearest neighbors of x in config \ {x}, ordered by the total order
/// (distance, then lexicographic).
std::vector<Point> knn_order(const Configuration& config, const Point& x, int k);

/// Gabriel edges: pairs whose open diametral disc misses the configuration.
std::vector<std::array<int, 2>> gabriel_edges(const Configuration& config);

/// Lattice of cells C(k) = {M x : x - k in [-1/2,1/2)^d}.
struct LatticeSpec {
    Mat M;

    int dim() const { return M.d; }
    double cell_volume() const;
    Window cell_window(const std::vector<int>& k) const;
    /// Cell index containing p.
    std::vector<int> cell_of(const Point& p) const;
    /// Diameter of the largest open ball inside C.
    double inscribed_diameter() const;
    /// Diameter of the smallest closed ball containing C.
    double enclosing_diameter() const;

    /// Triangular lattice: |M_1| = |M_2| = a, angle pi/3 between them.
    static LatticeSpec triangular(double a);
    static LatticeSpec cubic(int d, double a);
};

struct SingletonBall {
    double b = 0.0;  // radius of B(0, b)
};
struct ClusterTemplate {
    int k = 1;
    double b = 0.0;      // radius for the cluster root
    double delta = 0.0;  // cluster diameter bound
};
struct ExplicitTemplate {
    std::vector<Point> points;  // relative to the cell center, inside C
};
using CellTemplate = std::variant<SingletonBall, ClusterTemplate, ExplicitTemplate>;

/// Validates that the template content always fits inside the cell.
void validate_template(const LatticeSpec& lattice, const CellTemplate& tpl);

/// Pseudo-periodic configuration covering every cell that meets `region`.
/// Canonical placement puts the template reference point at each cell center;
/// pass an Rng to draw i.i.d. template content per cell instead.
Configuration pseudo_periodic(const LatticeSpec& lattice, const CellTemplate& tpl,
                              const Window& region, Rng* rng = nullptr);

/// Convex hull indices including points interior to hull edges.
std::vector<int> convex_hull(const Configuration& config);

}  // namespace gibbspp
