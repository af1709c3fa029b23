#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "isingms/stats.hpp"

namespace isingms {

// Sufficient statistics a two-spin exponential-family model can couple to.
enum class Stat : int { s1, s2, s1_plus_s2, s1_s2 };

// Parameter vector of a two-spin model (at most three components).
struct ThetaVec {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    int dim = 0;

    double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
    int size() const { return dim; }

    static ThetaVec zeros(int d) {
        ThetaVec t;
        t.dim = d;
        return t;
    }
};

// Static description of one of the ten two-spin models: parameter count,
// sufficient statistics, Jeffreys normalization, and the decomposition
// (1/2) ln det J(theta) = -delta ln Z(theta) + eps(theta) with eps at most
// linear in the coupling.
struct ModelSpec {
    int id = 0;                    // 1..10
    int theta_dim = 0;             // Theta
    double delta = 0.0;            // exponent relating det J to Z
    double eps_const = 0.0;        // constant part of eps(theta), nats
    double eps_coupling_coeff = 0.0;  // coefficient of J in eps (only M9)
    double norm_const = 1.0;       // Jeffreys normalization N_i (1 for M1)
    bool has_bond = false;         // true iff the model contains J
    std::array<Stat, 3> stats{};   // the first theta_dim entries are used
    std::string_view name;
};

const std::array<ModelSpec, 10>& model_table();
const ModelSpec& model(int id);

// Moment of one sufficient statistic under empirical pair moments.
double stat_moment(Stat s, const PairMoments& m);

// Value of one sufficient statistic at a joint spin state (s1, s2 = +-1).
double stat_value(Stat s, int s1, int s2);

// Fills out[0..theta_dim) with the model's phi vector for the given moments.
void sufficient_moments(const ModelSpec& m, const PairMoments& pm, std::span<double> out);

// ln Z(theta) from the closed forms of the model table, stable for large |theta|.
double log_partition(const ModelSpec& m, const ThetaVec& theta);

// Analytic gradient of ln Z (tanh expressions).
ThetaVec grad_log_partition(const ModelSpec& m, const ThetaVec& theta);

// ln det of the Fisher information, via the identity with ln Z (exact).
double fisher_logdet(const ModelSpec& m, const ThetaVec& theta);

// eps(theta) = eps_const + eps_coupling_coeff * J.
double epsilon_term(const ModelSpec& m, const ThetaVec& theta);

// Fisher information matrix (covariance of the sufficient statistics under
// the model distribution), row-major theta_dim x theta_dim in out.
void fisher_matrix(const ModelSpec& m, const ThetaVec& theta, std::span<double> out);

// Numerically stable ln cosh.
double ln_cosh(double x);

}  // namespace isingms
