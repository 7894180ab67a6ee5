#include "gibbspp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gibbspp/errors.hpp"

namespace gibbspp {

namespace {

constexpr long kCacheRecheckInterval = 10000;

/// Reflects a point back into the window, working in the parallelotope's
/// unit coordinates (triangle-wave fold of each coordinate onto [0,1)).
Point reflect_into(const Window& window, const Point& p) {
    Point diff(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) diff[i] = p[i] - window.origin()[i];
    Point u = window.spanning().solve(diff);
    for (double& v : u) {
        v = std::fmod(v, 2.0);
        if (v < 0.0) v += 2.0;
        if (v >= 1.0) v = 2.0 - v;
        if (v >= 1.0) v = 0.0;  // fold of exactly 2.0
    }
    Point q = window.spanning().mul(u);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += window.origin()[i];
    return q;
}

}  // namespace

ChainState init_feasible(const GibbsSpec& spec, const LatticeSpec& lattice,
                         const CellTemplate& tpl, std::uint64_t seed) {
    ChainState state;
    state.rng.seed(seed);

    // draw the template content with the chain rng: the exact-center fill
    // sits in degenerate position (collinear runs, cocircular trapezoids)
    const Configuration fill = pseudo_periodic(lattice, tpl, spec.window, &state.rng);
    std::vector<Point> inside;
    for (const Point& p : fill.points())
        if (spec.window.contains(p)) inside.push_back(p);

    for (const Configuration& candidate : {Configuration(inside), Configuration()}) {
        try {
            const ExtendedReal h = hamiltonian(spec, candidate).total;
            if (!h.is_pos_infinite()) {
                state.interior = candidate;
                state.cached_energy = h;
                return state;
            }
        } catch (const GeometryDegenerate&) {
        } catch (const GeneralPositionViolation&) {
        }
    }
    throw NoFeasibleStart();
}

bool step(ChainState& state, const GibbsSpec& spec, const SamplerConfig& cfg) {
    if (std::fabs(cfg.p_birth + cfg.p_death + cfg.p_translate - 1.0) > 1e-12)
        throw ConfigError("move probabilities must sum to 1");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double zv = spec.z * spec.window.volume();
    const long n = static_cast<long>(state.interior.size());

    ++state.step_count;
    if (state.step_count % kCacheRecheckInterval == 0) {
        const ExtendedReal h = hamiltonian(spec, state.interior).total;
        if (!(h == state.cached_energy))
            throw std::logic_error("energy cache drifted from full recomputation");
    }

    const double pick = unif(state.rng);
    Configuration proposal;
    double log_ratio = 0.0;  // log of the proposal-corrected target ratio
    MoveTally* tally = nullptr;

    if (pick < cfg.p_birth) {
        tally = &state.birth;
        ++tally->proposed;
        const Point x = spec.window.sample(state.rng);
        if (state.interior.index_of(x) >= 0) return false;
        proposal = state.interior.with_point(x);
        log_ratio = std::log(zv) - std::log(static_cast<double>(n + 1));
    } else if (pick < cfg.p_birth + cfg.p_death) {
        tally = &state.death;
        ++tally->proposed;
        if (n == 0) return false;
        std::uniform_int_distribution<long> idx(0, n - 1);
        proposal = state.interior.without_point(state.interior.points()[idx(state.rng)]);
        log_ratio = std::log(static_cast<double>(n)) - std::log(zv);
    } else {
        tally = &state.translate;
        ++tally->proposed;
        if (n == 0) return false;
        std::uniform_int_distribution<long> idx(0, n - 1);
        const Point& x = state.interior.points()[idx(state.rng)];
        std::normal_distribution<double> gauss(0.0, 0.1 * spec.window.diameter());
        Point y = x;
        for (double& v : y) v += gauss(state.rng);
        y = reflect_into(spec.window, y);
        if (state.interior.index_of(y) >= 0) return false;
        proposal = state.interior.without_point(x).with_point(y);
    }

    const ExtendedReal h_after = hamiltonian(spec, proposal).total;
    if (h_after.is_pos_infinite()) return false;
    const double log_accept = log_ratio - (h_after.value() - state.cached_energy.value());
    if (log_accept < 0.0 && std::log(unif(state.rng)) >= log_accept) return false;

    state.interior = std::move(proposal);
    state.cached_energy = h_after;
    ++tally->accepted;
    return true;
}

RunResult run_from(ChainState state, const GibbsSpec& spec, const SamplerConfig& cfg,
                   const std::vector<Collector>& collectors) {
    RunResult res;
    res.traces.resize(collectors.size());
    for (long s = 0; s < cfg.steps; ++s) {
        step(state, spec, cfg);
        if (s < cfg.burn_in) continue;
        if ((s - cfg.burn_in) % std::max<long>(1, cfg.thinning) != 0) continue;
        ++res.retained;
        for (std::size_t j = 0; j < collectors.size(); ++j)
            res.traces[j].push_back(collectors[j](state.interior));
        if (cfg.store_samples) res.samples.push_back(state.interior);
    }
    res.final_state = std::move(state);
    return res;
}

RunResult run(const GibbsSpec& spec, const SamplerConfig& cfg, const LatticeSpec& lattice,
              const CellTemplate& tpl, const std::vector<Collector>& collectors) {
    return run_from(init_feasible(spec, lattice, tpl, cfg.seed), spec, cfg, collectors);
}

}  // namespace gibbspp
