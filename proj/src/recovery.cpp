#include "isingms/recovery.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "isingms/parallel.hpp"

namespace isingms {

std::int64_t ConfidenceGraph::edge_count() const {
    std::int64_t e = 0;
    for (int i = 0; i < n_nodes; ++i)
        for (int j = i + 1; j < n_nodes; ++j)
            if (edge(i, j)) ++e;
    return e;
}

double ConfidenceGraph::bond_ratio() const {
    const std::int64_t total =
        static_cast<std::int64_t>(n_nodes) * (n_nodes - 1) / 2;
    const std::int64_t e = edge_count();
    if (e == total) return std::numeric_limits<double>::infinity();
    return static_cast<double>(e) / static_cast<double>(total - e);
}

double ConfidenceGraph::density() const {
    const std::int64_t total =
        static_cast<std::int64_t>(n_nodes) * (n_nodes - 1) / 2;
    return static_cast<double>(edge_count()) / static_cast<double>(total);
}

EdgeList ConfidenceGraph::edge_list() const {
    EdgeList out;
    for (int i = 0; i < n_nodes; ++i)
        for (int j = i + 1; j < n_nodes; ++j)
            if (edge(i, j)) out.emplace_back(i, j);
    return out;
}

PairStats pair_stats(const SampleMatrix& data, int i, int j) {
    if (i == j) throw std::invalid_argument("pair_stats: i == j");
    PairStats c;
    for (std::int64_t r = 0; r < data.n_samples; ++r) {
        const int a = data.spin(r, i);
        const int b = data.spin(r, j);
        if (a > 0)
            (b > 0 ? c.n_pp : c.n_pm) += 1;
        else
            (b > 0 ? c.n_mp : c.n_mm) += 1;
    }
    return c;
}

DecisionCache& CacheRegistry::for_sample_size(std::int64_t n_obs) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = caches_.find(n_obs);
    if (it == caches_.end())
        it = caches_.emplace(n_obs, std::make_unique<DecisionCache>(n_obs)).first;
    return *it->second;
}

namespace {

// Confidence matrix of all pairs; the prior plays no role here.
void fill_eta(const SampleMatrix& data, ConfidenceGraph& g, CacheRegistry* registry, int jobs) {
    const int n = data.n_nodes;
    DecisionCache* cache = registry ? &registry->for_sample_size(data.n_samples) : nullptr;
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    parallel_for(pairs.size(), jobs, [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        const PairStats counts = pair_stats(data, i, j);
        double eta;
        try {
            eta = cache ? cache->eta(counts) : confidence(counts);
        } catch (const SaddleError& e) {
            throw SaddleError(e.model_id, "pair (" + std::to_string(i) + "," +
                                              std::to_string(j) + "): " + e.what());
        }
        g.set_eta(i, j, eta);
    });
}

void threshold_edges(ConfidenceGraph& g, const SparsityPrior& prior) {
    g.epsilon_used = prior.epsilon;
    for (int i = 0; i < g.n_nodes; ++i)
        for (int j = i + 1; j < g.n_nodes; ++j)
            g.set_edge(i, j, decide(g.eta_at(i, j), prior));
}

}  // namespace

ConfidenceGraph recover(const SampleMatrix& data, const SparsityPrior& prior,
                        CacheRegistry* registry, int jobs) {
    if (data.n_nodes < 2) throw std::invalid_argument("recover: need at least two nodes");
    ConfidenceGraph g = ConfidenceGraph::empty(data.n_nodes);
    fill_eta(data, g, registry, jobs);
    threshold_edges(g, prior);
    return g;
}

double n_dependent_epsilon(double r_g, std::int64_t n_obs) {
    return r_g + (1.0 - r_g) * std::exp(-static_cast<double>(n_obs) / 50.0);
}

SelfConsistentResult self_consistent_epsilon(const SampleMatrix& data, double eps0, int max_iter,
                                             double tol, CacheRegistry* registry, int jobs) {
    if (eps0 < 0.0) throw std::invalid_argument("self_consistent_epsilon: eps0 must be >= 0");
    const int n = data.n_nodes;
    if (tol < 0.0) tol = 1.0 / (static_cast<double>(n) * (n - 1));

    SelfConsistentResult res;
    res.graph = ConfidenceGraph::empty(n);
    fill_eta(data, res.graph, registry, jobs);

    auto ratio_at = [&](double eps) {
        threshold_edges(res.graph, SparsityPrior{eps});
        return res.graph.bond_ratio();
    };

    double eps = eps0;
    double best_eps = eps0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int t = 0; t < max_iter; ++t) {
        const double r = ratio_at(eps);
        res.trace.epsilons.push_back(eps);
        res.trace.ratios.push_back(r);
        const bool both_inf = std::isinf(eps) && std::isinf(r);
        if (both_inf || std::abs(r - eps) < tol) {
            res.trace.converged = true;
            res.epsilon_star = r;
            threshold_edges(res.graph, SparsityPrior{res.epsilon_star});
            return res;
        }
        if (std::abs(r - eps) < best_gap) {
            best_gap = std::abs(r - eps);
            best_eps = eps;
        }
        // 2-cycle: the new ratio equals the previous epsilon. Resolve toward
        // the sparser of the two iterates.
        if (res.trace.epsilons.size() >= 2 &&
            r == res.trace.epsilons[res.trace.epsilons.size() - 2]) {
            res.trace.two_cycle = true;
            res.epsilon_star = std::min(r, eps);
            threshold_edges(res.graph, SparsityPrior{res.epsilon_star});
            return res;
        }
        eps = r;
    }
    // Out of iterations: fall back to the iterate closest to self-consistency.
    res.trace.converged = false;
    res.epsilon_star = best_eps;
    threshold_edges(res.graph, SparsityPrior{res.epsilon_star});
    return res;
}

std::optional<double> conditioned_confidence(const SampleMatrix& data, int i, int j, int k,
                                             const SparsityPrior& prior,
                                             CacheRegistry* registry) {
    if (i == j || i == k || j == k)
        throw std::invalid_argument("conditioned_confidence: i, j, k must be distinct");
    PairStats counts[2];  // [0]: S_k = +1, [1]: S_k = -1
    for (std::int64_t r = 0; r < data.n_samples; ++r) {
        PairStats& c = counts[data.spin(r, k) > 0 ? 0 : 1];
        const int a = data.spin(r, i);
        const int b = data.spin(r, j);
        if (a > 0)
            (b > 0 ? c.n_pp : c.n_pm) += 1;
        else
            (b > 0 ? c.n_mp : c.n_mm) += 1;
    }
    const double total = static_cast<double>(data.n_samples);
    double value = 0.0;
    bool any = false;
    for (const PairStats& c : counts) {
        const std::int64_t rows = c.n_obs();
        if (rows < kMinConditionalRows) continue;
        const double eta =
            registry ? registry->for_sample_size(rows).eta(c) : confidence(c);
        value += posterior_gap_from_eta(eta, prior.epsilon) * (static_cast<double>(rows) / total);
        any = true;
    }
    if (!any) return std::nullopt;
    return value;
}

double neighbour_weight(const ConfidenceGraph& graph, const SparsityPrior& prior, int i, int j,
                        int k) {
    double denom = 0.0;
    double num = -1.0;
    for (int kk = 0; kk < graph.n_nodes; ++kk) {
        if (kk == i || kk == j) continue;
        if (!(graph.edge(i, kk) && graph.edge(j, kk))) continue;
        const double p = bond_probability_from_eta(graph.eta_at(i, kk), prior.epsilon) *
                         bond_probability_from_eta(graph.eta_at(j, kk), prior.epsilon);
        denom += p;
        if (kk == k) num = p;
    }
    if (num < 0.0)
        throw std::invalid_argument("neighbour_weight: k is not a common neighbour of i and j");
    if (denom <= 0.0) throw std::invalid_argument("neighbour_weight: empty neighbourhood mass");
    return num / denom;
}

ConfidenceGraph correct_graph(const SampleMatrix& data, const ConfidenceGraph& graph,
                              const SparsityPrior& prior, CorrectionMethod method,
                              CacheRegistry* registry, int jobs) {
    CacheRegistry local;
    if (!registry) registry = &local;
    ConfidenceGraph out = graph;
    const EdgeList edges = graph.edge_list();
    std::vector<std::uint8_t> keep(edges.size(), 1);
    parallel_for(edges.size(), jobs, [&](std::size_t e) {
        const auto [i, j] = edges[e];
        // Common neighbourhood on the input graph, with the conditioned gap
        // for each member; members whose both branches are undersized drop out.
        std::vector<int> common;
        std::vector<double> gaps;
        std::vector<double> probs;
        for (int k = 0; k < graph.n_nodes; ++k) {
            if (k == i || k == j) continue;
            if (!(graph.edge(i, k) && graph.edge(j, k))) continue;
            const auto gap = conditioned_confidence(data, i, j, k, prior, registry);
            if (!gap) continue;
            common.push_back(k);
            gaps.push_back(*gap);
            probs.push_back(bond_probability_from_eta(graph.eta_at(i, k), prior.epsilon) *
                            bond_probability_from_eta(graph.eta_at(j, k), prior.epsilon));
        }
        if (common.empty()) return;  // no triangle: edge untouched
        double combined = 0.0;
        switch (method) {
            case CorrectionMethod::avg: {
                double mass = 0.0;
                for (double p : probs) mass += p;
                for (std::size_t k = 0; k < gaps.size(); ++k)
                    combined += gaps[k] * (probs[k] / mass);
                break;
            }
            case CorrectionMethod::min: {
                combined = gaps[0];
                for (double g : gaps) combined = std::min(combined, g);
                break;
            }
            case CorrectionMethod::prod: {
                double prod = 1.0;
                for (double g : gaps) prod *= 0.5 * (1.0 + g);
                combined = 2.0 * prod - 1.0;
                break;
            }
        }
        if (combined < 0.0) keep[e] = 0;
    });
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (!keep[e]) out.set_edge(edges[e].first, edges[e].second, false);
    return out;
}

}  // namespace isingms
