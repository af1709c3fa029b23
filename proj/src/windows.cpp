#include "isingms/windows.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isingms {

ConfidenceGraph recover_with_mode(const SampleMatrix& data, const PriorMode& mode,
                                  CacheRegistry* registry, int jobs, EpsilonTrace* trace) {
    switch (mode.kind) {
        case PriorMode::Kind::flat:
            return recover(data, SparsityPrior{1.0}, registry, jobs);
        case PriorMode::Kind::fixed:
            return recover(data, SparsityPrior{mode.value}, registry, jobs);
        case PriorMode::Kind::n_dependent:
            return recover(data, SparsityPrior{n_dependent_epsilon(mode.value, data.n_samples)},
                           registry, jobs);
        case PriorMode::Kind::self_consistent: {
            SelfConsistentResult res =
                self_consistent_epsilon(data, mode.value, 100, -1.0, registry, jobs);
            if (trace) *trace = res.trace;
            return std::move(res.graph);
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

SampleMatrix slice_rows(const SampleMatrix& data, std::int64_t start, std::int64_t count) {
    SampleMatrix out = SampleMatrix::zeros(count, data.n_nodes);
    std::copy_n(data.values.begin() +
                    static_cast<std::ptrdiff_t>(start * data.n_nodes),
                static_cast<std::ptrdiff_t>(count * data.n_nodes), out.values.begin());
    return out;
}

}  // namespace

RollingRecovery rolling_windows(const SampleMatrix& data, std::int64_t window,
                                std::int64_t stride, const PriorMode& mode, int jobs) {
    if (window < 1 || stride < 1)
        throw std::invalid_argument("rolling_windows: window and stride must be >= 1");
    if (window > data.n_samples)
        throw std::invalid_argument("rolling_windows: window exceeds the sample length");
    RollingRecovery out;
    out.window = window;
    out.stride = stride;
    for (std::int64_t t = 0; t + window <= data.n_samples; t += stride) out.starts.push_back(t);

    CacheRegistry registry;
    const std::size_t cells =
        static_cast<std::size_t>(data.n_nodes) * static_cast<std::size_t>(data.n_nodes);
    out.mean_eta.assign(cells, 0.0);
    for (std::int64_t start : out.starts) {
        const SampleMatrix win = slice_rows(data, start, window);
        ConfidenceGraph g = recover_with_mode(win, mode, &registry, jobs);
        out.bond_ratio.push_back(g.bond_ratio());
        for (std::size_t k = 0; k < cells; ++k) out.mean_eta[k] += g.eta[k];
        out.graphs.push_back(std::move(g));
    }
    if (!out.starts.empty())
        for (double& v : out.mean_eta) v /= static_cast<double>(out.starts.size());
    return out;
}

WindowedStats windowed_correlations(const SampleMatrix& data, std::int64_t window,
                                    const std::vector<int>& taus) {
    if (window < 1) throw std::invalid_argument("windowed_correlations: window must be >= 1");
    int max_tau = 0;
    for (int t : taus) {
        if (t < 0) throw std::invalid_argument("windowed_correlations: tau must be >= 0");
        max_tau = std::max(max_tau, t);
    }
    if (window + max_tau > data.n_samples)
        throw std::invalid_argument("windowed_correlations: window + max tau overruns the data");

    WindowedStats out;
    out.window = window;
    out.n_nodes = data.n_nodes;
    out.taus = taus;
    for (std::int64_t t = 0; t + window + max_tau <= data.n_samples; t += window)
        out.starts.push_back(t);

    const int n = data.n_nodes;
    const std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    const double inv_w = 1.0 / static_cast<double>(window);

    for (std::int64_t start : out.starts) {
        // Delayed raw correlations per tau.
        for (int tau : taus) {
            std::vector<double> c(cells, 0.0);
            for (std::int64_t r = start; r < start + window; ++r)
                for (int i = 0; i < n; ++i) {
                    const double si = data.spin(r, i);
                    for (int j = 0; j < n; ++j)
                        c[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(j)] += si * data.spin(r + tau, j);
                }
            for (double& v : c) v *= inv_w;
            double diag = 0.0, off = 0.0;
            for (int i = 0; i < n; ++i) {
                diag += c[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(i)] *
                        c[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(i)];
                for (int j = i + 1; j < n; ++j) {
                    const double v =
                        c[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(j)];
                    off += v * v;
                }
            }
            out.c_diag.push_back(std::sqrt(diag / n));
            out.c_off.push_back(std::sqrt(2.0 * off / (static_cast<double>(n) * (n - 1))));
            out.delayed.push_back(std::move(c));
        }
        // Equal-time connected correlations.
        std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
        for (std::int64_t r = start; r < start + window; ++r)
            for (int i = 0; i < n; ++i) mean[static_cast<std::size_t>(i)] += data.spin(r, i);
        for (double& v : mean) v *= inv_w;
        std::vector<double> c(cells, 0.0);
        for (std::int64_t r = start; r < start + window; ++r)
            for (int i = 0; i < n; ++i) {
                const double si = data.spin(r, i);
                for (int j = 0; j < n; ++j)
                    c[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(j)] += si * data.spin(r, j);
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                c[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(j)] =
                    c[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(j)] *
                        inv_w -
                    mean[static_cast<std::size_t>(i)] * mean[static_cast<std::size_t>(j)];
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double v = c[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                   static_cast<std::size_t>(j)];
                off += v * v;
            }
        out.connected_off.push_back(std::sqrt(2.0 * off / (static_cast<double>(n) * (n - 1))));
        out.equal_time.push_back(std::move(c));
    }
    return out;
}

}  // namespace isingms
