#pragma once

#include <span>
#include <vector>

namespace isingms {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule with n points; results are cached per n (thread-safe).
const GaussLegendreRule& gauss_legendre(int n);

// Eigendecomposition of a symmetric dim x dim matrix (dim <= 3), row-major.
// On return eigvals[a] and the a-th eigenvector in columns of eigvecs
// (eigvecs[i*dim + a] = component i of eigenvector a).
void symmetric_eigen(std::span<const double> mat, int dim, std::span<double> eigvals,
                     std::span<double> eigvecs);

}  // namespace isingms
