#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gibbspp/energy.hpp"

namespace gibbspp {

struct MoveTally {
    long proposed = 0;
    long accepted = 0;
};

/// Current state of one Metropolis-Hastings birth/death/translate chain.
/// cached_energy is always finite: moves into infinite-energy states are
/// rejected, so the chain lives on the finite-energy set even when that set
/// is not hereditary.
struct ChainState {
    Configuration interior;
    ExtendedReal cached_energy;
    long step_count = 0;
    Rng rng;
    MoveTally birth, death, translate;
};

struct SamplerConfig {
    double p_birth = 0.35;
    double p_death = 0.35;
    double p_translate = 0.30;
    long steps = 100000;
    long burn_in = 0;
    long thinning = 1;
    std::uint64_t seed = 1;
    bool store_samples = false;
};

using Collector = std::function<double(const Configuration&)>;

struct RunResult {
    std::vector<std::vector<double>> traces;  // one row per collector
    std::vector<Configuration> samples;       // retained states when requested
    ChainState final_state;
    long retained = 0;
};

/// Starts from the pseudo-periodic template fill restricted to the window,
/// falling back to the empty interior. Throws NoFeasibleStart when both have
/// infinite energy.
ChainState init_feasible(const GibbsSpec& spec, const LatticeSpec& lattice,
                         const CellTemplate& tpl, std::uint64_t seed = 1);

/// One MH step; returns true when the proposal was accepted. Energy caching
/// uses a full Hamiltonian recomputation of the proposed state, so the cache
/// stays bit-identical to hamiltonian(spec, interior).
bool step(ChainState& state, const GibbsSpec& spec, const SamplerConfig& cfg);

RunResult run(const GibbsSpec& spec, const SamplerConfig& cfg, const LatticeSpec& lattice,
              const CellTemplate& tpl, const std::vector<Collector>& collectors);

/// Same as run but starting from an already-built state.
RunResult run_from(ChainState state, const GibbsSpec& spec, const SamplerConfig& cfg,
                   const std::vector<Collector>& collectors);

}  // namespace gibbspp
