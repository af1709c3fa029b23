#pragma once

#include <cstdint>
#include <vector>

#include "isingms/plm.hpp"
#include "isingms/recovery.hpp"
#include "isingms/sample_matrix.hpp"

namespace isingms {

// Confusion counts and rates over the n(n-1)/2 node pairs. Rates are NaN
// when the corresponding class is empty.
struct RecoveryMetrics {
    std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
    double tpr = 0.0, tnr = 0.0, fpr = 0.0, fnr = 0.0;
};

RecoveryMetrics metrics(const EdgeList& true_edges, const EdgeList& predicted_edges, int n);

enum class RocMethod { ms_over_epsilon, plm_over_lambda };

struct RocPoint {
    double parameter = 0.0;
    RecoveryMetrics m;
};

// One metrics row per grid value. The MS sweep computes the confidence
// matrix once and re-thresholds; the PLM sweep refits per lambda.
std::vector<RocPoint> roc_sweep(const SampleMatrix& data, const EdgeList& true_edges,
                                RocMethod method, const std::vector<double>& grid, int jobs = 1);

}  // namespace isingms
