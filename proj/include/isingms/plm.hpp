#pragma once

#include <cstdint>
#include <vector>

#include "isingms/recovery.hpp"
#include "isingms/sample_matrix.hpp"

namespace isingms {

// Node-wise l1-regularized logistic pseudo-likelihood fit. Row i of
// couplings is the regression of node i on the others (generally asymmetric).
struct PlmFit {
    int n_nodes = 0;
    std::vector<double> couplings;  // n x n, zero diagonal
    std::vector<double> intercepts;
    double lambda = 0.0;
    bool converged = true;

    double coupling(int i, int j) const {
        return couplings[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_nodes) +
                         static_cast<std::size_t>(j)];
    }
};

// Minimizes, per node i,
//   (1/N) sum_mu ln(1 + exp(-2 S_i (h_i + sum_j J_ij S_j))) + lambda sum_j |J_ij|
// by proximal gradient with backtracking; intercept unpenalized; stops when
// the objective change drops below tol.
PlmFit plm_l1_fit(const SampleMatrix& data, double lambda, int max_iter = 5000,
                  double tol = 1e-9, int jobs = 1);

// Smallest lambda for which the all-zero coupling solution (with optimal
// intercepts) satisfies the KKT conditions for every node:
//   max_{i, j != i} | (1/N) sum_mu S_j (S_i - tanh h_i*) |,  tanh h_i* = m_i.
// Nodes with |m_i| = 1 are excluded; their indices are appended to `dropped`
// when provided.
double lambda_max(const SampleMatrix& data, std::vector<int>* dropped = nullptr);

// Symmetrized adjacency: edge iff (J_ij + J_ji)/2 is nonzero (the proximal
// operator yields exact zeros, so no extra magnitude threshold is applied).
EdgeList plm_graph(const PlmFit& fit);

}  // namespace isingms
