#pragma once

#include <cstdint>
#include <iosfwd>
#include <shared_mutex>
#include <unordered_map>

#include "isingms/evidence.hpp"
#include "isingms/stats.hpp"

namespace isingms {

// Prior odds P0(bond) / P0(no-bond); 1 is the flat prior.
struct SparsityPrior {
    double epsilon = 1.0;
};

// Decision threshold (1 - eps) / (1 + eps) on the confidence eta.
inline double decision_threshold(double epsilon) { return 2.0 / (1.0 + epsilon) - 1.0; }

// Bond iff eta >= threshold; ties decide for the bond. eps = 0 puts zero
// prior mass on bonds, so nothing is ever accepted.
inline bool decide(double eta, const SparsityPrior& prior) {
    if (prior.epsilon <= 0.0) return false;
    return eta >= decision_threshold(prior.epsilon);
}

// Confidence eta = (sum of bond-model evidences - sum of no-bond evidences)
// over their total, combined in log space with max subtraction so any N is
// overflow-free. Throws SaddleError naming the failing model.
double confidence(const PairMoments& stats, std::int64_t n_obs);
double confidence(const PairStats& counts);

// Posterior gap P(b|data) - P(nb|data) under prior odds eps, expressed
// through eta alone: (eps(1+eta) - (1-eta)) / (eps(1+eta) + (1-eta)).
double posterior_gap_from_eta(double eta, double epsilon);
double posterior_gap(const PairMoments& stats, std::int64_t n_obs, const SparsityPrior& prior);

// Posterior bond probability P(b|data) = (1 + posterior_gap) / 2.
double bond_probability_from_eta(double eta, double epsilon);

// Memoized eta keyed by raw joint-state counts for one fixed sample size;
// concurrent reads, synchronized insertion.
class DecisionCache {
public:
    explicit DecisionCache(std::int64_t n_obs) : n_obs_(n_obs) {}

    std::int64_t sample_size() const { return n_obs_; }

    // Returns the memoized confidence, computing and inserting on miss.
    // Throws std::invalid_argument if the counts do not sum to sample_size.
    double eta(const PairStats& counts);

    std::size_t size() const;

private:
    std::int64_t n_obs_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::uint64_t, double> map_;
};

// Writes the full decision table for sample size n_obs as CSV with columns
// n_pp,n_pm,n_mp,n_mm,m1,m2,c12,eta (one row per count triple).
void export_decision_table(std::int64_t n_obs, std::ostream& os, int jobs = 1);

}  // namespace isingms
