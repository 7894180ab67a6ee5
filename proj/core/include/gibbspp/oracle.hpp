#pragma once

#include "gibbspp/conditions.hpp"
#include "gibbspp/energy.hpp"

namespace gibbspp {

struct SeriesEstimate {
    double value = 0.0;
    int truncation_n = 0;
    double mc_error = 0.0;
    double tail_bound = 0.0;
    /// Per-n term values, for report output.
    std::vector<double> terms;
};

/// Spec whose certificate trivially covers every supplied boundary point.
/// Intended for tiny-window brute-force computations where truncating the
/// boundary is unnecessary.
GibbsSpec oracle_spec(StructureId structure, Potential potential, double z, Window window,
                      Configuration boundary);

/// Z = e^{-z|L|} sum_n z^n/n! Integral_{L^n} e^{-H} via Monte Carlo per
/// term. Throws TailNotConverged when the stability tail bound at n_max
/// exceeds tail_tol.
SeriesEstimate partition_function(const GibbsSpec& spec, int n_max, int mc_per_n, Rng& rng,
                                  double c_s = 0.0, double tail_tol = 1e-4);

using TestFunctional = std::function<double(const Configuration&)>;

/// E[f] under the finite-volume Gibbs distribution; f sees the interior
/// merged with the near boundary.
SeriesEstimate gibbs_expectation(const GibbsSpec& spec, const TestFunctional& f, int n_max,
                                 int mc_per_n, Rng& rng, double c_s = 0.0,
                                 double tail_tol = 1e-4);

struct ConsistencyResult {
    double max_deviation = 0.0;
    double budget = 0.0;  // 3 sigma over the worst test function
    std::vector<double> deviations;
    std::vector<double> sigmas;
};

/// Checks E_outer[f] = E_outer[ E_inner[f | outside inner_window] ] for each
/// test function; both sides share the outer sample set so the deviation is
/// a correlated difference.
ConsistencyResult consistency_check(const GibbsSpec& outer, const Window& inner_window,
                                    const std::vector<TestFunctional>& fs, int n_max,
                                    int mc_per_n, Rng& rng);

struct EntropyDiagnostic {
    double lhs = 0.0;
    double rhs = 0.0;
    double sigma = 0.0;
    bool holds = false;
    double c_gamma_val = 0.0;
    double log_weight = 0.0;
};

/// Finite-volume entropy bound: specific relative entropy minus the
/// stability correction against the per-cell template bound plus explicit
/// finite-size surplus terms.
EntropyDiagnostic entropy_diagnostic(const StructureId& s, const Potential& potential, double z,
                                     const LatticeSpec& lattice, const CellTemplate& tpl, int n,
                                     int mc_budget, Rng& rng);

std::string series_report(const SeriesEstimate& e);

}  // namespace gibbspp
