#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "isingms/classifier.hpp"
#include "isingms/sample_matrix.hpp"

namespace isingms {

using EdgeList = std::vector<std::pair<int, int>>;

// Symmetric confidence matrix plus the thresholded adjacency.
struct ConfidenceGraph {
    int n_nodes = 0;
    std::vector<double> eta;        // n x n, symmetric, diagonal unused
    std::vector<std::uint8_t> adj;  // n x n, symmetric
    double epsilon_used = 1.0;

    static ConfidenceGraph empty(int n) {
        ConfidenceGraph g;
        g.n_nodes = n;
        g.eta.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
        g.adj.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
        return g;
    }

    double eta_at(int i, int j) const {
        return eta[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_nodes) +
                   static_cast<std::size_t>(j)];
    }
    void set_eta(int i, int j, double v) {
        eta[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_nodes) +
            static_cast<std::size_t>(j)] = v;
        eta[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_nodes) +
            static_cast<std::size_t>(i)] = v;
    }
    bool edge(int i, int j) const {
        return adj[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_nodes) +
                   static_cast<std::size_t>(j)] != 0;
    }
    void set_edge(int i, int j, bool on) {
        adj[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_nodes) +
            static_cast<std::size_t>(j)] = on ? 1 : 0;
        adj[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_nodes) +
            static_cast<std::size_t>(i)] = on ? 1 : 0;
    }

    std::int64_t edge_count() const;
    // Bond-to-no-bond ratio r = n_b / n_nb (+inf for the complete graph).
    double bond_ratio() const;
    // Fraction of the n(n-1)/2 pairs carrying an edge.
    double density() const;
    EdgeList edge_list() const;
};

// Joint-state counts of columns i and j over all rows.
PairStats pair_stats(const SampleMatrix& data, int i, int j);

// Per-sample-size cache registry shared across recoveries and corrections.
class CacheRegistry {
public:
    DecisionCache& for_sample_size(std::int64_t n_obs);

private:
    std::mutex mutex_;
    std::map<std::int64_t, std::unique_ptr<DecisionCache>> caches_;
};

// Classifies every pair independently; eta from the cache, edges from the
// prior threshold. Deterministic and bit-identical for any job count.
ConfidenceGraph recover(const SampleMatrix& data, const SparsityPrior& prior,
                        CacheRegistry* registry = nullptr, int jobs = 1);

struct EpsilonTrace {
    std::vector<double> epsilons;  // eps_0, eps_1, ...
    std::vector<double> ratios;    // r_t for each eps_t
    bool converged = false;
    bool two_cycle = false;
};

struct SelfConsistentResult {
    double epsilon_star = 0.0;
    ConfidenceGraph graph;
    EpsilonTrace trace;
};

// Iterates eps_{t+1} = r_t until the recovered bond-to-no-bond ratio matches
// the prior odds. The confidence matrix is computed once; iterations only
// re-threshold. Two-cycles resolve toward the sparser iterate.
SelfConsistentResult self_consistent_epsilon(const SampleMatrix& data, double eps0,
                                             int max_iter = 100, double tol = -1.0,
                                             CacheRegistry* registry = nullptr, int jobs = 1);

// Small-sample prior schedule r_g + (1 - r_g) exp(-N / 50).
double n_dependent_epsilon(double r_g, std::int64_t n_obs);

// Minimum rows a conditional subsample needs to contribute to the weighted
// average; below it the branch is dropped.
inline constexpr std::int64_t kMinConditionalRows = 10;

// Posterior gap for pair (i, j) conditioned on spin k: the data is split by
// S_k = +-1 and the per-branch gaps are combined with weights nu(S_k = +-1),
// the fraction of rows in each branch. Returns nullopt when both branches
// are below the minimum size floor.
std::optional<double> conditioned_confidence(const SampleMatrix& data, int i, int j, int k,
                                             const SparsityPrior& prior,
                                             CacheRegistry* registry = nullptr);

// Posterior probability that k is a common neighbour of i and j, normalized
// over the common neighbourhood of (i, j) on the graph.
double neighbour_weight(const ConfidenceGraph& graph, const SparsityPrior& prior, int i, int j,
                        int k);

enum class CorrectionMethod { avg, min, prod };

// Re-examines every edge whose endpoints share neighbours by conditioning on
// each common neighbour; combines the conditioned gaps with the chosen
// method and keeps the edge iff the combined value is >= 0. Never adds edges.
ConfidenceGraph correct_graph(const SampleMatrix& data, const ConfidenceGraph& graph,
                              const SparsityPrior& prior, CorrectionMethod method,
                              CacheRegistry* registry = nullptr, int jobs = 1);

}  // namespace isingms
