#include "isingms/classifier.hpp"

#include <cmath>
#include <cstring>
#include <utility>
#include <mutex>
#include <ostream>
#include <vector>

#include "isingms/parallel.hpp"

namespace isingms {

namespace {

// eta is invariant under spin exchange (m1 <-> m2) and under the joint sign
// flip (m1, m2) -> (-m1, -m2); computing on a canonical representative makes
// those symmetries hold bit-exactly.
PairMoments canonical_stats(const PairMoments& s) {
    std::pair<double, double> best{s.m1, s.m2};
    const std::pair<double, double> cands[3] = {
        {s.m2, s.m1}, {-s.m1, -s.m2}, {-s.m2, -s.m1}};
    for (const auto& c : cands)
        if (c > best) best = c;
    return PairMoments{best.first, best.second, s.c12};
}

}  // namespace

double confidence(const PairMoments& raw_stats, std::int64_t n_obs) {
    const PairMoments stats = canonical_stats(raw_stats);
    const EvidenceResult ev = evidence_all(stats, n_obs);
    for (int i = 0; i < 10; ++i)
        if (!ev.converged[static_cast<std::size_t>(i)])
            throw SaddleError(i + 1, "confidence: saddle point failed for model M" +
                                         std::to_string(i + 1));
    const double big_n = static_cast<double>(n_obs);
    double mx = -1e300;
    double total_log[10];
    for (int i = 0; i < 10; ++i) {
        total_log[i] = big_n * ev.per_sample_log_evidence[static_cast<std::size_t>(i)];
        mx = std::max(mx, total_log[i]);
    }
    double nb = 0.0, b = 0.0;
    for (int i = 0; i < 5; ++i) nb += std::exp(total_log[i] - mx);
    for (int i = 5; i < 10; ++i) b += std::exp(total_log[i] - mx);
    return (b - nb) / (b + nb);
}

double confidence(const PairStats& counts) { return confidence(counts.moments(), counts.n_obs()); }

double posterior_gap_from_eta(double eta, double epsilon) {
    const double num = epsilon * (1.0 + eta) - (1.0 - eta);
    const double den = epsilon * (1.0 + eta) + (1.0 - eta);
    return num / den;
}

double posterior_gap(const PairMoments& stats, std::int64_t n_obs, const SparsityPrior& prior) {
    return posterior_gap_from_eta(confidence(stats, n_obs), prior.epsilon);
}

double bond_probability_from_eta(double eta, double epsilon) {
    return 0.5 * (1.0 + posterior_gap_from_eta(eta, epsilon));
}

namespace {

std::uint64_t pack_counts(const PairStats& c) {
    return (static_cast<std::uint64_t>(c.n_pp) << 42) |
           (static_cast<std::uint64_t>(c.n_pm) << 21) | static_cast<std::uint64_t>(c.n_mp);
}

}  // namespace

double DecisionCache::eta(const PairStats& counts) {
    if (counts.n_obs() != n_obs_)
        throw std::invalid_argument("DecisionCache: counts do not sum to the cache sample size");
    const std::uint64_t key = pack_counts(counts);
    {
        std::shared_lock lock(mutex_);
        auto it = map_.find(key);
        if (it != map_.end()) return it->second;
    }
    const double value = confidence(counts);
    std::unique_lock lock(mutex_);
    return map_.emplace(key, value).first->second;
}

std::size_t DecisionCache::size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
}

void export_decision_table(std::int64_t n_obs, std::ostream& os, int jobs) {
    os << "n_pp,n_pm,n_mp,n_mm,m1,m2,c12,eta\n";
    // Rows grouped by n_pp so blocks can be computed in parallel and written
    // in deterministic order.
    std::vector<std::string> blocks(static_cast<std::size_t>(n_obs + 1));
    parallel_for(static_cast<std::size_t>(n_obs + 1), jobs, [&](std::size_t a) {
        const std::int64_t n_pp = static_cast<std::int64_t>(a);
        std::string out;
        for (std::int64_t n_pm = 0; n_pm + n_pp <= n_obs; ++n_pm)
            for (std::int64_t n_mp = 0; n_pm + n_pp + n_mp <= n_obs; ++n_mp) {
                const PairStats c{n_pp, n_pm, n_mp, n_obs - n_pp - n_pm - n_mp};
                const PairMoments m = c.moments();
                const double eta = confidence(m, n_obs);
                char line[200];
                std::snprintf(line, sizeof line,
                              "%lld,%lld,%lld,%lld,%.17g,%.17g,%.17g,%.17g\n",
                              static_cast<long long>(c.n_pp), static_cast<long long>(c.n_pm),
                              static_cast<long long>(c.n_mp), static_cast<long long>(c.n_mm),
                              m.m1, m.m2, m.c12, eta);
                out += line;
            }
        blocks[a] = std::move(out);
    });
    for (const auto& blk : blocks) os << blk;
}

}  // namespace isingms
