#include "isingms/metrics.hpp"

#include <limits>
#include <stdexcept>

namespace isingms {

namespace {

std::vector<std::uint8_t> to_adjacency(const EdgeList& edges, int n) {
    std::vector<std::uint8_t> adj(
        static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (const auto& [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n || j >= n || i == j)
            throw std::invalid_argument("metrics: edge endpoint out of range");
        adj[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(j)] = 1;
        adj[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(i)] = 1;
    }
    return adj;
}

double rate(std::int64_t num, std::int64_t den) {
    if (den == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

RecoveryMetrics metrics(const EdgeList& true_edges, const EdgeList& predicted_edges, int n) {
    const auto truth = to_adjacency(true_edges, n);
    const auto pred = to_adjacency(predicted_edges, n);
    RecoveryMetrics m;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const std::size_t k =
                static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(j);
            const bool t = truth[k] != 0;
            const bool p = pred[k] != 0;
            if (t && p) ++m.tp;
            else if (t && !p) ++m.fn;
            else if (!t && p) ++m.fp;
            else ++m.tn;
        }
    m.tpr = rate(m.tp, m.tp + m.fn);
    m.fnr = rate(m.fn, m.tp + m.fn);
    m.tnr = rate(m.tn, m.tn + m.fp);
    m.fpr = rate(m.fp, m.tn + m.fp);
    return m;
}

std::vector<RocPoint> roc_sweep(const SampleMatrix& data, const EdgeList& true_edges,
                                RocMethod method, const std::vector<double>& grid, int jobs) {
    if (grid.empty()) throw std::invalid_argument("roc_sweep: empty parameter grid");
    std::vector<RocPoint> out;
    out.reserve(grid.size());
    if (method == RocMethod::ms_over_epsilon) {
        CacheRegistry registry;
        ConfidenceGraph g = recover(data, SparsityPrior{1.0}, &registry, jobs);
        for (double eps : grid) {
            const SparsityPrior prior{eps};
            for (int i = 0; i < g.n_nodes; ++i)
                for (int j = i + 1; j < g.n_nodes; ++j)
                    g.set_edge(i, j, decide(g.eta_at(i, j), prior));
            g.epsilon_used = eps;
            out.push_back({eps, metrics(true_edges, g.edge_list(), data.n_nodes)});
        }
        return out;
    }
    for (double lambda : grid) {
        const PlmFit fit = plm_l1_fit(data, lambda, 5000, 1e-9, jobs);
        out.push_back({lambda, metrics(true_edges, plm_graph(fit), data.n_nodes)});
    }
    return out;
}

}  // namespace isingms
