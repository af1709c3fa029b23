#pragma once

#include <cstdint>
#include <vector>

#include "isingms/recovery.hpp"
#include "isingms/sample_matrix.hpp"

namespace isingms {

// How the sparsity prior is chosen for one recovery run.
struct PriorMode {
    enum class Kind { flat, fixed, self_consistent, n_dependent };
    Kind kind = Kind::flat;
    double value = 1.0;  // fixed eps / eps0 / r_g depending on kind

    static PriorMode flat() { return {Kind::flat, 1.0}; }
    static PriorMode fixed(double eps) { return {Kind::fixed, eps}; }
    static PriorMode self_consistent(double eps0) { return {Kind::self_consistent, eps0}; }
    static PriorMode n_dependent(double r_g) { return {Kind::n_dependent, r_g}; }
};

// Recovery under the prior mode; self_consistent runs the fixed point, the
// other modes resolve to a fixed epsilon. The trace is filled only for
// self_consistent.
ConfidenceGraph recover_with_mode(const SampleMatrix& data, const PriorMode& mode,
                                  CacheRegistry* registry = nullptr, int jobs = 1,
                                  EpsilonTrace* trace = nullptr);

struct RollingRecovery {
    std::int64_t window = 0;
    std::int64_t stride = 0;
    std::vector<std::int64_t> starts;
    std::vector<ConfidenceGraph> graphs;
    std::vector<double> bond_ratio;  // r(t) per window
    std::vector<double> mean_eta;    // n x n average confidence across windows
};

// Windows start at 0, stride, 2*stride, ... and must fit entirely; the final
// partial window is dropped.
RollingRecovery rolling_windows(const SampleMatrix& data, std::int64_t window,
                                std::int64_t stride, const PriorMode& mode, int jobs = 1);

struct WindowedStats {
    std::int64_t window = 0;
    int n_nodes = 0;
    std::vector<std::int64_t> starts;
    std::vector<int> taus;
    // delayed[w * n_taus + t] holds the n x n matrix of
    //   c_ij(t_w, tau_t) = (1/N_w) sum_{t'} S_i(t') S_j(t' + tau)
    std::vector<std::vector<double>> delayed;
    // equal-time connected correlations C_ij(t_w) with mean subtraction
    std::vector<std::vector<double>> equal_time;
    // r.m.s. aggregates per (window, tau): diagonal and off-diagonal
    std::vector<double> c_diag;
    std::vector<double> c_off;
    // r.m.s. of the off-diagonal equal-time connected correlations per window
    std::vector<double> connected_off;
};

// Delayed and equal-time windowed correlations; requires
// window + max(tau) <= n_samples.
WindowedStats windowed_correlations(const SampleMatrix& data, std::int64_t window,
                                    const std::vector<int>& taus);

}  // namespace isingms
