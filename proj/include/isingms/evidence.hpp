#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "isingms/models.hpp"
#include "isingms/stats.hpp"

namespace isingms {

// Thrown when a saddle-point solve fails to converge; carries the model id.
struct SaddleError : std::runtime_error {
    int model_id;
    SaddleError(int id, const std::string& what) : std::runtime_error(what), model_id(id) {}
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SaddleResult {
    ThetaVec theta;
    bool converged = true;
    int iterations = 0;
    double residual = 0.0;  // max-norm of the stationarity equations
};

// Solves phi_i - (1 + delta/N) d_i ln Z + (d_i eps)/N = 0 for theta.
// Closed form for the separable models M2..M8; damped Newton from zero for
// M9 and M10. M1 has no parameters.
SaddleResult saddle_point(const ModelSpec& m, const PairMoments& stats, std::int64_t n_obs);

// Per-sample log evidence (1/N) ln P(data | model) in the saddle-point
// approximation:
//   phi . theta* - ln Z(theta*)
//   + (Theta/2N) ln[ 2 pi / (N (1 + delta/N)) ] - (1/N) ln N_i .
// Throws SaddleError on non-convergence.
double log_evidence(const ModelSpec& m, const PairMoments& stats, std::int64_t n_obs);

struct EvidenceResult {
    std::array<double, 10> per_sample_log_evidence{};
    std::array<ThetaVec, 10> saddle_points{};
    std::array<bool, 10> converged{};
    bool all_converged() const {
        for (bool c : converged)
            if (!c) return false;
        return true;
    }
};

// Evidence of all ten models at once (entries for unconverged saddles are NaN).
EvidenceResult evidence_all(const PairMoments& stats, std::int64_t n_obs);

struct QuadratureSpec {
    double half_width = 15.0;  // box [-L, L] per dimension (fixed-box mode)
    int nodes_per_dim = 200;
    // When true, the box is centered on the integrand peak, rotated to the
    // principal axes of the Fisher information and scaled to peak_sigmas
    // posterior standard deviations per axis. Needed to resolve the sharply
    // peaked integrand at large N with modest node counts.
    bool center_on_peak = false;
    double peak_sigmas = 12.0;
    // If > 0, re-evaluate with doubled nodes and require agreement.
    double doubling_check_tol = 0.0;
};

// Per-sample log of the exact evidence integral
//   (1/N) ln [ N_i^{-1} Integral dtheta e^{N phi.theta} Z^{-N} sqrt(det J) ]
// by tensor-product Gauss-Legendre quadrature, evaluated in log space.
// Serves as the independent oracle for log_evidence. Theta_dim <= 3.
double exact_log_evidence(const ModelSpec& m, const PairMoments& stats, std::int64_t n_obs,
                          const QuadratureSpec& spec);

}  // namespace isingms
