#include "gibbspp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gibbspp/errors.hpp"

namespace gibbspp {

GibbsSpec oracle_spec(StructureId structure, Potential potential, double z, Window window,
                      Configuration boundary) {
    if (!(z > 0.0)) throw ConfigError("activity must be positive");
    GibbsSpec spec;
    spec.structure = structure;
    spec.potential = std::move(potential);
    spec.z = z;
    spec.window = window;
    double r = window.diameter();
    for (const Point& p : boundary.points()) r = std::max(r, window.distance(p) + 1.0);
    spec.confinement.ok = true;
    spec.confinement.r = r + 1.0;
    spec.confinement.boundary_points = boundary;
    spec.boundary = std::move(boundary);
    return spec;
}

namespace {

Configuration sample_uniform(int n, const Window& window, Rng& rng) {
    while (true) {
        std::vector<Point> pts;
        pts.reserve(n);
        for (int i = 0; i < n; ++i) pts.push_back(window.sample(rng));
        std::sort(pts.begin(), pts.end(), lex_less);
        if (std::adjacent_find(pts.begin(), pts.end()) == pts.end())
            return Configuration(std::move(pts));
    }
}

double stability_tail(double zv, int n_max, double c_s, int boundary_count) {
    // sum over n > n_max of e^{-zv} (zv)^n e^{c_s (n + B)} / n!
    double tail = 0.0;
    double log_term = -zv + c_s * boundary_count;
    for (int i = 1; i <= n_max; ++i) log_term += std::log(zv) + c_s - std::log(i);
    for (int n = n_max + 1; n <= n_max + 2000; ++n) {
        log_term += std::log(zv) + c_s - std::log(n);
        const double t = std::exp(log_term);
        tail += t;
        if (t < 1e-300 || (n > zv * std::exp(c_s) && t < tail * 1e-16)) break;
    }
    return tail;
}

struct SeriesAccum {
    std::vector<double> weights;                 // z^n |L|^n / n!
    std::vector<std::vector<double>> w_samples;  // e^{-H} per sample, per n
    double zv = 0.0;
};

SeriesAccum run_series(const GibbsSpec& spec, int n_max, int mc_per_n, Rng& rng,
                       const std::function<void(int, int, const Configuration&, double)>& hook) {
    SeriesAccum acc;
    const double V = spec.window.volume();
    acc.zv = spec.z * V;
    acc.weights.resize(n_max + 1);
    acc.w_samples.resize(n_max + 1);
    double logw = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) logw += std::log(spec.z * V) - std::log(n);
        acc.weights[n] = std::exp(logw);
        const int mc = n == 0 ? 1 : mc_per_n;
        acc.w_samples[n].reserve(mc);
        for (int i = 0; i < mc; ++i) {
            const Configuration zeta = n == 0 ? Configuration() : sample_uniform(n, spec.window, rng);
            const double w = hamiltonian(spec, zeta).total.exp_neg();
            acc.w_samples[n].push_back(w);
            if (hook) hook(n, i, zeta, w);
        }
    }
    return acc;
}

}  // namespace

SeriesEstimate partition_function(const GibbsSpec& spec, int n_max, int mc_per_n, Rng& rng,
                                  double c_s, double tail_tol) {
    const SeriesAccum acc = run_series(spec, n_max, mc_per_n, rng, nullptr);
    SeriesEstimate est;
    est.truncation_n = n_max;
    const double pref = std::exp(-acc.zv);
    double var = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        const auto& ws = acc.w_samples[n];
        const double mean = std::accumulate(ws.begin(), ws.end(), 0.0) / ws.size();
        double s2 = 0.0;
        for (double w : ws) s2 += (w - mean) * (w - mean);
        const double se = ws.size() > 1 ? std::sqrt(s2 / (ws.size() - 1) / ws.size()) : 0.0;
        const double term = pref * acc.weights[n] * mean;
        est.terms.push_back(term);
        est.value += term;
        var += (pref * acc.weights[n] * se) * (pref * acc.weights[n] * se);
    }
    est.mc_error = std::sqrt(var);
    est.tail_bound =
        stability_tail(acc.zv, n_max, c_s, static_cast<int>(spec.confinement.boundary_points.size()));
    if (est.tail_bound > tail_tol * std::max(est.value, 1e-12))
        throw TailNotConverged("tail bound " + std::to_string(est.tail_bound) +
                               " at n_max " + std::to_string(n_max));
    return est;
}

SeriesEstimate gibbs_expectation(const GibbsSpec& spec, const TestFunctional& f, int n_max,
                                 int mc_per_n, Rng& rng, double c_s, double tail_tol) {
    const Configuration nearb = spec.boundary.annulus(spec.window, spec.confinement.r);
    constexpr int kBatches = 10;
    std::vector<double> num_b(kBatches, 0.0), den_b(kBatches, 0.0);
    double num = 0.0, den = 0.0, fmax = 1.0;
    std::vector<double> tail_weights;

    const double V = spec.window.volume();
    const double zv = spec.z * V;
    double logw = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) logw += std::log(zv) - std::log(n);
        const double weight = std::exp(logw);
        const int mc = n == 0 ? 1 : mc_per_n;
        for (int i = 0; i < mc; ++i) {
            const Configuration zeta = n == 0 ? Configuration() : sample_uniform(n, spec.window, rng);
            const double w = hamiltonian(spec, zeta).total.exp_neg() * weight / mc;
            const double fv = f(zeta.merged(nearb));
            fmax = std::max(fmax, std::fabs(fv));
            num += w * fv;
            den += w;
            // n=0's deterministic term goes into every batch equally
            if (n == 0) {
                for (int b = 0; b < kBatches; ++b) {
                    num_b[b] += w * fv;
                    den_b[b] += w;
                }
            } else {
                const int b = i % kBatches;
                num_b[b] += w * fv * kBatches;
                den_b[b] += w * kBatches;
            }
        }
    }
    SeriesEstimate est;
    est.truncation_n = n_max;
    if (den <= 0.0) throw TailNotConverged("all series weights vanished");
    est.value = num / den;
    double mean = 0.0;
    std::vector<double> ratios;
    for (int b = 0; b < kBatches; ++b) {
        ratios.push_back(den_b[b] > 0.0 ? num_b[b] / den_b[b] : est.value);
        mean += ratios.back();
    }
    mean /= kBatches;
    double s2 = 0.0;
    for (double r : ratios) s2 += (r - mean) * (r - mean);
    est.mc_error = std::sqrt(s2 / (kBatches - 1) / kBatches);
    const double tail = stability_tail(zv, n_max, c_s,
                                       static_cast<int>(spec.confinement.boundary_points.size()));
    est.tail_bound = 2.0 * fmax * tail / std::max(den * std::exp(-zv), 1e-300) * std::exp(-zv);
    if (tail > tail_tol * std::max(den, 1e-12))
        throw TailNotConverged("expectation tail at n_max " + std::to_string(n_max));
    return est;
}

namespace {

/// Conditional expectations given the content outside the inner window,
/// computed twice from one shared sample set: once under the outer
/// Hamiltonian restricted to inner-window insertions and once under the
/// sub-window specification. Sharing the draws makes the two ratios cancel
/// exactly whenever the two Hamiltonians differ by a constant, so the
/// reported difference measures the consistency defect, not Monte Carlo
/// noise.
struct PairedExpectations {
    std::vector<double> outer;  // E[f | outside] under the outer spec
    std::vector<double> inner;  // E[f] under the sub-window spec
};

PairedExpectations paired_expectations(const GibbsSpec& outer, const Configuration& keep,
                                       const GibbsSpec& inner,
                                       const std::vector<TestFunctional>& fs, int n_max,
                                       int mc_base, Rng& rng) {
    const Configuration nearb = inner.boundary.annulus(inner.window, inner.confinement.r);
    std::vector<double> num_out(fs.size(), 0.0), num_in(fs.size(), 0.0);
    double den_out = 0.0, den_in = 0.0;
    const double zv = inner.z * inner.window.volume();
    double logw = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) logw += std::log(zv) - std::log(n);
        const double weight = std::exp(logw);
        const int mc = n == 0 ? 1 : std::max(6, mc_base >> n);
        for (int i = 0; i < mc; ++i) {
            const Configuration zeta =
                n == 0 ? Configuration() : sample_uniform(n, inner.window, rng);
            const double w_in = hamiltonian(inner, zeta).total.exp_neg() * weight / mc;
            const double w_out =
                hamiltonian(outer, zeta.merged(keep)).total.exp_neg() * weight / mc;
            if (w_in == 0.0 && w_out == 0.0) continue;
            den_in += w_in;
            den_out += w_out;
            const Configuration full = zeta.merged(nearb);
            for (std::size_t j = 0; j < fs.size(); ++j) {
                const double fv = fs[j](full);
                num_in[j] += w_in * fv;
                num_out[j] += w_out * fv;
            }
        }
    }
    if (den_in <= 0.0 || den_out <= 0.0) throw TailNotConverged("inner series vanished");
    PairedExpectations pe;
    for (std::size_t j = 0; j < fs.size(); ++j) {
        pe.outer.push_back(num_out[j] / den_out);
        pe.inner.push_back(num_in[j] / den_in);
    }
    return pe;
}

}  // namespace

ConsistencyResult consistency_check(const GibbsSpec& outer, const Window& inner_window,
                                    const std::vector<TestFunctional>& fs, int n_max,
                                    int mc_per_n, Rng& rng) {
    const Configuration nearb = outer.boundary.annulus(outer.window, outer.confinement.r);
    constexpr int kBatches = 10;
    const std::size_t J = fs.size();
    std::vector<std::vector<double>> diff_b(kBatches, std::vector<double>(J, 0.0));
    std::vector<double> den_b(kBatches, 0.0);
    std::vector<double> diff(J, 0.0);
    double den = 0.0;

    const double zv = outer.z * outer.window.volume();
    double logw = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) logw += std::log(zv) - std::log(n);
        const double weight = std::exp(logw);
        const int mc = n == 0 ? 1 : mc_per_n;
        for (int i = 0; i < mc; ++i) {
            const Configuration zeta =
                n == 0 ? Configuration() : sample_uniform(n, outer.window, rng);
            const double w = hamiltonian(outer, zeta).total.exp_neg() * weight / mc;
            if (w == 0.0) continue;
            // both conditional expectations given zeta outside the inner
            // window, from one shared sample set
            std::vector<Point> keep;
            for (const Point& p : zeta.points())
                if (!inner_window.contains(p)) keep.push_back(p);
            const Configuration keep_cfg(keep);
            const GibbsSpec inner = oracle_spec(outer.structure, outer.potential, outer.z,
                                                inner_window, keep_cfg.merged(nearb));
            const PairedExpectations pe =
                paired_expectations(outer, keep_cfg, inner, fs, n_max, 48, rng);

            den += w;
            for (std::size_t j = 0; j < J; ++j) diff[j] += w * (pe.outer[j] - pe.inner[j]);
            const int b = n == 0 ? 0 : i % kBatches;
            den_b[b] += w;
            for (std::size_t j = 0; j < J; ++j) diff_b[b][j] += w * (pe.outer[j] - pe.inner[j]);
        }
    }

    ConsistencyResult res;
    for (std::size_t j = 0; j < J; ++j) {
        const double dj = diff[j] / den;
        std::vector<double> ratios;
        double mean = 0.0;
        for (int b = 0; b < kBatches; ++b) {
            ratios.push_back(den_b[b] > 0.0 ? diff_b[b][j] / den_b[b] : dj);
            mean += ratios.back();
        }
        mean /= kBatches;
        double s2 = 0.0;
        for (double r : ratios) s2 += (r - mean) * (r - mean);
        const double se = std::sqrt(s2 / (kBatches - 1) / kBatches);
        res.deviations.push_back(std::fabs(dj));
        res.sigmas.push_back(se);
        if (std::fabs(dj) > res.max_deviation) res.max_deviation = std::fabs(dj);
        res.budget = std::max(res.budget, 3.0 * se);
    }
    return res;
}

EntropyDiagnostic entropy_diagnostic(const StructureId& s, const Potential& potential, double z,
                                     const LatticeSpec& lattice, const CellTemplate& tpl, int n,
                                     int mc_budget, Rng& rng) {
    EntropyDiagnostic diag;
    const int d = lattice.dim();
    const RangeConstants rc = range_constants(s);
    // boundary fill rings: enough to cover the hyperedge reach of near-lattice
    // configurations; the surplus term in the bound grows with the fill, so a
    // small fill keeps both sides comparable
    const int m = std::max(2, rc.ell_R);

    auto box = [&](int half) {
        Point u(d, -(half + 0.5));
        Mat span = lattice.M;
        for (double& v : span.a) v *= 2.0 * (half + 0.5);
        return Window::parallelotope(lattice.M.mul(u), span);
    };
    const Window window = box(n);
    const Window fill_region = box(n + m);
    const Configuration fill = pseudo_periodic(lattice, tpl, fill_region);
    std::vector<Point> outer;
    for (const Point& p : fill.points())
        if (!window.contains(p)) outer.push_back(p);
    const GibbsSpec spec = oracle_spec(s, potential, z, window, Configuration(outer));

    const double c_s = stability_constant(s, potential);
    const double vn = window.volume();
    const double zv = z * vn;
    const int n_max = std::max(10, static_cast<int>(std::ceil(3.0 * zv + 8.0)));
    const int mc = std::max(50, mc_budget / (n_max + 1));

    // one pass accumulating Z, <H>, <N> with batch errors
    constexpr int kBatches = 10;
    std::vector<double> zb(kBatches, 0.0), hb(kBatches, 0.0), nb(kBatches, 0.0);
    double zsum = 0.0, hsum = 0.0, nsum = 0.0;
    double logw = 0.0;
    for (int nn = 0; nn <= n_max; ++nn) {
        if (nn > 0) logw += std::log(zv) - std::log(nn);
        const double weight = std::exp(logw);
        const int mcn = nn == 0 ? 1 : mc;
        for (int i = 0; i < mcn; ++i) {
            const Configuration zeta =
                nn == 0 ? Configuration() : sample_uniform(nn, window, rng);
            const ExtendedReal H = hamiltonian(spec, zeta).total;
            const double w = H.exp_neg() * weight / mcn;
            if (w == 0.0) continue;
            zsum += w;
            hsum += w * H.value();
            nsum += w * nn;
            const int b = nn == 0 ? 0 : i % kBatches;
            zb[b] += w;
            hb[b] += w * H.value();
            nb[b] += w * nn;
        }
    }
    if (zsum <= 0.0) throw TailNotConverged("entropy diagnostic series vanished");
    const double lnZ = std::log(zsum) - zv;
    const double Hmean = hsum / zsum;
    const double Nmean = nsum / zsum;

    // batch spread of the lhs composite
    std::vector<double> lhs_b;
    double lmean = 0.0;
    for (int b = 0; b < kBatches; ++b) {
        if (zb[b] <= 0.0) continue;
        const double v = (-(hb[b] / zb[b]) - (std::log(zb[b] * kBatches) - zv)) / vn -
                         c_s * (nb[b] / zb[b]) / vn;
        lhs_b.push_back(v);
        lmean += v;
    }
    lmean /= lhs_b.size();
    double s2 = 0.0;
    for (double v : lhs_b) s2 += (v - lmean) * (v - lmean);
    diag.sigma = std::sqrt(s2 / (lhs_b.size() - 1) / lhs_b.size());

    diag.lhs = (-Hmean - lnZ) / vn - c_s * Nmean / vn;

    const double cg = c_gamma(s, potential, lattice, tpl, false);
    const double cgp = c_gamma(s, potential, lattice, tpl, true);
    const GammaWeight gw = gamma_weight(z, lattice, tpl, 20000, &rng);
    if (gw.value <= 0.0) throw TailNotConverged("template weight vanished");
    diag.c_gamma_val = cg;
    diag.log_weight = std::log(gw.value);
    const double cells_n = std::pow(2.0 * n + 1.0, d);
    const double cells_nm = std::pow(2.0 * (n + m) + 1.0, d);
    diag.rhs = (cg - diag.log_weight) / lattice.cell_volume() +
               (c_s * static_cast<double>(spec.boundary.size()) + cgp * (cells_nm - cells_n)) / vn;
    diag.holds = diag.lhs <= diag.rhs + 3.0 * diag.sigma;
    return diag;
}

std::string series_report(const SeriesEstimate& e) {
    std::ostringstream os;
    os.precision(12);
    os << "value: " << e.value << "\n";
    os << "truncation_n: " << e.truncation_n << "\n";
    os << "mc_error: " << e.mc_error << "\n";
    os << "tail_bound: " << e.tail_bound << "\n";
    for (std::size_t i = 0; i < e.terms.size(); ++i)
        os << "term_" << i << ": " << e.terms[i] << "\n";
    os << "bracket_low: " << e.value - e.mc_error - e.tail_bound << "\n";
    os << "bracket_high: " << e.value + e.mc_error + e.tail_bound << "\n";
    return os.str();
}

}  // namespace gibbspp
