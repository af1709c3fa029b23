#include "isingms/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "isingms/quadrature.hpp"

namespace isingms {

namespace {

constexpr double kLn2Pi = 1.8378770664093454835606594728112353;
constexpr double kLn4 = 2.0 * 0.6931471805599453094172321214581766;
constexpr double kNewtonTol = 1e-10;
constexpr int kNewtonMaxIter = 200;

// Residual of the stationarity equations at theta.
ThetaVec saddle_residual(const ModelSpec& m, const ThetaVec& theta, std::span<const double> phi,
                         double big_n) {
    const ThetaVec g = grad_log_partition(m, theta);
    const double b = 1.0 + m.delta / big_n;
    ThetaVec r = ThetaVec::zeros(m.theta_dim);
    for (int i = 0; i < m.theta_dim; ++i) r[i] = phi[static_cast<std::size_t>(i)] - b * g[i];
    if (m.eps_coupling_coeff != 0.0) r[m.theta_dim - 1] += m.eps_coupling_coeff / big_n;
    return r;
}

double max_abs(const ThetaVec& r) {
    double v = 0.0;
    for (int i = 0; i < r.size(); ++i) v = std::max(v, std::abs(r[i]));
    return v;
}

// Solves (b * Fisher) d = r for d; dim <= 3, Fisher symmetric positive definite.
ThetaVec solve_newton_step(const ModelSpec& m, const ThetaVec& theta, const ThetaVec& r,
                           double b) {
    const int d = m.theta_dim;
    double a[9];
    fisher_matrix(m, theta, std::span<double>(a, static_cast<std::size_t>(d * d)));
    for (int i = 0; i < d * d; ++i) a[i] *= b;
    double rhs[3];
    for (int i = 0; i < d; ++i) rhs[i] = r[i];
    // Gaussian elimination with partial pivoting.
    int piv[3] = {0, 1, 2};
    for (int c = 0; c < d; ++c) {
        int best = c;
        for (int k = c + 1; k < d; ++k)
            if (std::abs(a[piv[k] * d + c]) > std::abs(a[piv[best] * d + c])) best = k;
        std::swap(piv[c], piv[best]);
        const double diag = a[piv[c] * d + c];
        for (int k = c + 1; k < d; ++k) {
            const double f = a[piv[k] * d + c] / diag;
            for (int j = c; j < d; ++j) a[piv[k] * d + j] -= f * a[piv[c] * d + j];
            rhs[piv[k]] -= f * rhs[piv[c]];
        }
    }
    ThetaVec x = ThetaVec::zeros(d);
    for (int c = d - 1; c >= 0; --c) {
        double s = rhs[piv[c]];
        for (int j = c + 1; j < d; ++j) s -= a[piv[c] * d + j] * x[j];
        x[c] = s / a[piv[c] * d + c];
    }
    return x;
}

SaddleResult newton_saddle(const ModelSpec& m, std::span<const double> phi, double big_n) {
    SaddleResult res;
    res.theta = ThetaVec::zeros(m.theta_dim);
    const double b = 1.0 + m.delta / big_n;
    ThetaVec r = saddle_residual(m, res.theta, phi, big_n);
    double rn = max_abs(r);
    for (int it = 0; it < kNewtonMaxIter; ++it) {
        if (rn < kNewtonTol) {
            res.converged = true;
            res.iterations = it;
            res.residual = rn;
            return res;
        }
        const ThetaVec d = solve_newton_step(m, res.theta, r, b);
        double step = 1.0;
        while (step > 1e-14) {
            ThetaVec cand = res.theta;
            for (int i = 0; i < m.theta_dim; ++i) cand[i] += step * d[i];
            const ThetaVec rc = saddle_residual(m, cand, phi, big_n);
            const double rcn = max_abs(rc);
            if (rcn < rn) {
                res.theta = cand;
                r = rc;
                rn = rcn;
                break;
            }
            step *= 0.5;
        }
        if (step <= 1e-14) break;  // stalled
    }
    res.converged = rn < kNewtonTol;
    res.iterations = kNewtonMaxIter;
    res.residual = rn;
    return res;
}

}  // namespace

SaddleResult saddle_point(const ModelSpec& m, const PairMoments& stats, std::int64_t n_obs) {
    if (n_obs < 1) throw std::invalid_argument("saddle_point: n_obs must be >= 1");
    if (m.id == 1) throw std::invalid_argument("saddle_point: M1 has no parameters");
    const double big_n = static_cast<double>(n_obs);
    double phi[3];
    sufficient_moments(m, stats, std::span<double>(phi, static_cast<std::size_t>(m.theta_dim)));

    SaddleResult res;
    if (m.id == 9 || m.id == 10) {
        res = newton_saddle(m, std::span<const double>(phi, static_cast<std::size_t>(m.theta_dim)),
                            big_n);
        return res;
    }
    // Separable models: phi_i = (1 + delta/N) * s_i * tanh(theta_i), where the
    // slope s_i is 2 for the shared-field statistic of M4 and 1 otherwise. The
    // (1 + delta/N) factor keeps the atanh argument strictly inside (-1, 1)
    // even at boundary statistics.
    const double b = 1.0 + m.delta / big_n;
    res.theta = ThetaVec::zeros(m.theta_dim);
    for (int i = 0; i < m.theta_dim; ++i) {
        const double slope = (m.stats[static_cast<std::size_t>(i)] == Stat::s1_plus_s2) ? 2.0 : 1.0;
        res.theta[i] = std::atanh(phi[i] / (slope * b));
    }
    res.converged = true;
    res.residual = max_abs(saddle_residual(
        m, res.theta, std::span<const double>(phi, static_cast<std::size_t>(m.theta_dim)), big_n));
    return res;
}

double log_evidence(const ModelSpec& m, const PairMoments& stats, std::int64_t n_obs) {
    const double big_n = static_cast<double>(n_obs);
    if (m.id == 1) return -kLn4;
    const SaddleResult sr = saddle_point(m, stats, n_obs);
    if (!sr.converged)
        throw SaddleError(m.id, "saddle point did not converge for model M" +
                                    std::to_string(m.id));
    double phi[3];
    sufficient_moments(m, stats, std::span<double>(phi, static_cast<std::size_t>(m.theta_dim)));
    double lik = -log_partition(m, sr.theta);
    for (int i = 0; i < m.theta_dim; ++i) lik += phi[static_cast<std::size_t>(i)] * sr.theta[i];
    const double b = 1.0 + m.delta / big_n;
    const double complexity =
        (m.theta_dim / (2.0 * big_n)) * (kLn2Pi - std::log(big_n * b)) -
        std::log(m.norm_const) / big_n;
    return lik + complexity;
}

EvidenceResult evidence_all(const PairMoments& stats, std::int64_t n_obs) {
    EvidenceResult out;
    for (const ModelSpec& m : model_table()) {
        const std::size_t k = static_cast<std::size_t>(m.id - 1);
        if (m.id == 1) {
            out.per_sample_log_evidence[k] = -kLn4;
            out.saddle_points[k] = ThetaVec::zeros(0);
            out.converged[k] = true;
            continue;
        }
        const SaddleResult sr = saddle_point(m, stats, n_obs);
        out.saddle_points[k] = sr.theta;
        out.converged[k] = sr.converged;
        if (!sr.converged) {
            out.per_sample_log_evidence[k] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        double phi[3];
        sufficient_moments(m, stats,
                           std::span<double>(phi, static_cast<std::size_t>(m.theta_dim)));
        double lik = -log_partition(m, sr.theta);
        for (int i = 0; i < m.theta_dim; ++i)
            lik += phi[static_cast<std::size_t>(i)] * sr.theta[i];
        const double big_n = static_cast<double>(n_obs);
        const double b = 1.0 + m.delta / big_n;
        out.per_sample_log_evidence[k] =
            lik + (m.theta_dim / (2.0 * big_n)) * (kLn2Pi - std::log(big_n * b)) -
            std::log(m.norm_const) / big_n;
    }
    return out;
}

namespace {

// Exponent of the evidence integrand (before the 1/N_i prefactor):
//   G(theta) = N (phi.theta - ln Z) + (1/2) ln det J
//            = N (phi.theta - ln Z) + eps(theta) - delta ln Z(theta).
double integrand_exponent(const ModelSpec& m, const ThetaVec& theta,
                          std::span<const double> phi, double big_n) {
    const double lz = log_partition(m, theta);
    double dot = 0.0;
    for (int i = 0; i < m.theta_dim; ++i) dot += phi[static_cast<std::size_t>(i)] * theta[i];
    return big_n * (dot - lz) + epsilon_term(m, theta) - m.delta * lz;
}

struct Box {
    ThetaVec center;
    // axes[a] = unit direction of axis a scaled by its half-width
    std::array<ThetaVec, 3> axes;
    std::array<int, 3> nodes{0, 0, 0};
    double log_jacobian = 0.0;  // ln prod(half-widths); rotation has det 1
};

Box fixed_box(const ModelSpec& m, double half_width, int nodes_per_dim) {
    Box box;
    box.center = ThetaVec::zeros(m.theta_dim);
    for (int a = 0; a < m.theta_dim; ++a) {
        box.axes[static_cast<std::size_t>(a)] = ThetaVec::zeros(m.theta_dim);
        box.axes[static_cast<std::size_t>(a)][a] = half_width;
        box.nodes[static_cast<std::size_t>(a)] = nodes_per_dim;
        box.log_jacobian += std::log(half_width);
    }
    return box;
}

// Box centered on the integrand peak, aligned with the principal axes of the
// Fisher information. The exponent G is concave, so each half-width can be
// grown along its axis until G has dropped by a fixed budget; this covers
// both the Gaussian core and the linear tails near the moment-polytope
// boundary. Node counts scale with width over peak scale so the core stays
// resolved.
Box peak_box(const ModelSpec& m, const PairMoments& stats, std::int64_t n_obs, double sigmas,
             int min_nodes, std::span<const double> phi, double big_n) {
    const SaddleResult sr = saddle_point(m, stats, n_obs);
    if (!sr.converged) return fixed_box(m, 15.0, std::max(min_nodes, 200));
    const int d = m.theta_dim;
    double f[9], evals[3], evecs[9];
    fisher_matrix(m, sr.theta, std::span<double>(f, static_cast<std::size_t>(d * d)));
    symmetric_eigen(std::span<const double>(f, static_cast<std::size_t>(d * d)), d,
                    std::span<double>(evals, static_cast<std::size_t>(d)),
                    std::span<double>(evecs, static_cast<std::size_t>(d * d)));
    Box box;
    box.center = sr.theta;
    const double g_peak = integrand_exponent(m, sr.theta, phi, big_n);
    constexpr double kDropBudget = 45.0;  // e^-45 of the peak at the faces
    constexpr double kMaxHalfWidth = 60.0;
    for (int a = 0; a < d; ++a) {
        const double lam = std::max(evals[a], 1e-12);
        const double sigma = 1.0 / std::sqrt(static_cast<double>(n_obs) * lam);
        double w = sigmas * sigma;
        auto drop = [&](double width, double sign) {
            ThetaVec t = sr.theta;
            for (int i = 0; i < d; ++i) t[i] += sign * width * evecs[i * d + a];
            return g_peak - integrand_exponent(m, t, phi, big_n);
        };
        while (w < kMaxHalfWidth &&
               (drop(w, +1.0) < kDropBudget || drop(w, -1.0) < kDropBudget))
            w *= 1.3;
        box.axes[static_cast<std::size_t>(a)] = ThetaVec::zeros(d);
        for (int i = 0; i < d; ++i)
            box.axes[static_cast<std::size_t>(a)][i] = w * evecs[i * d + a];
        // Central Gauss-Legendre spacing is ~ pi w / n; keep it below sigma/2.
        const int needed = static_cast<int>(std::ceil(2.0 * M_PI * w / sigma));
        box.nodes[static_cast<std::size_t>(a)] = std::clamp(needed, min_nodes, 2000);
        box.log_jacobian += std::log(w);
    }
    return box;
}

double quadrature_log_integral(const ModelSpec& m, std::span<const double> phi, double big_n,
                               const Box& box) {
    const int d = m.theta_dim;
    std::array<const GaussLegendreRule*, 3> rules{};
    std::int64_t total = 1;
    for (int a = 0; a < d; ++a) {
        rules[static_cast<std::size_t>(a)] = &gauss_legendre(box.nodes[static_cast<std::size_t>(a)]);
        total *= box.nodes[static_cast<std::size_t>(a)];
    }

    auto node_exponent = [&](std::int64_t flat, bool& on_boundary) {
        ThetaVec theta = box.center;
        double lw = 0.0;
        std::int64_t rem = flat;
        on_boundary = false;
        for (int a = 0; a < d; ++a) {
            const int n_a = box.nodes[static_cast<std::size_t>(a)];
            const int idx = static_cast<int>(rem % n_a);
            rem /= n_a;
            if (idx == 0 || idx == n_a - 1) on_boundary = true;
            const double u = rules[static_cast<std::size_t>(a)]->nodes[static_cast<std::size_t>(idx)];
            for (int i = 0; i < d; ++i) theta[i] += u * box.axes[static_cast<std::size_t>(a)][i];
            lw += std::log(
                rules[static_cast<std::size_t>(a)]->weights[static_cast<std::size_t>(idx)]);
        }
        return integrand_exponent(m, theta, phi, big_n) + lw;
    };

    // Log-sum-exp over all tensor nodes, tracking the share carried by the
    // outermost node shell as a truncation guard.
    double g_max = -std::numeric_limits<double>::infinity();
    std::vector<double> exponents(static_cast<std::size_t>(total));
    std::vector<std::uint8_t> boundary(static_cast<std::size_t>(total));
    for (std::int64_t k = 0; k < total; ++k) {
        bool on_boundary = false;
        const double g = node_exponent(k, on_boundary);
        exponents[static_cast<std::size_t>(k)] = g;
        boundary[static_cast<std::size_t>(k)] = on_boundary ? 1 : 0;
        if (g > g_max) g_max = g;
    }
    double s = 0.0, s_boundary = 0.0;
    for (std::size_t k = 0; k < exponents.size(); ++k) {
        const double e = std::exp(exponents[k] - g_max);
        s += e;
        if (boundary[k]) s_boundary += e;
    }
    if (s_boundary > 1e-9 * s)
        throw QuadratureError("quadrature box truncates the integrand (boundary mass too large)");
    return g_max + std::log(s) + box.log_jacobian;
}

}  // namespace

double exact_log_evidence(const ModelSpec& m, const PairMoments& stats, std::int64_t n_obs,
                          const QuadratureSpec& spec) {
    if (m.theta_dim == 0) return -kLn4;
    if (m.theta_dim > 3) throw std::invalid_argument("exact_log_evidence: theta_dim > 3");
    const double big_n = static_cast<double>(n_obs);
    double phi[3];
    sufficient_moments(m, stats, std::span<double>(phi, static_cast<std::size_t>(m.theta_dim)));
    const std::span<const double> phis(phi, static_cast<std::size_t>(m.theta_dim));
    const Box box = spec.center_on_peak
                        ? peak_box(m, stats, n_obs, spec.peak_sigmas, spec.nodes_per_dim, phis,
                                   big_n)
                        : fixed_box(m, spec.half_width, spec.nodes_per_dim);
    const double log_i = quadrature_log_integral(m, phis, big_n, box);
    if (spec.doubling_check_tol > 0.0) {
        Box doubled = box;
        for (int a = 0; a < m.theta_dim; ++a)
            doubled.nodes[static_cast<std::size_t>(a)] *= 2;
        const double log_i2 = quadrature_log_integral(m, phis, big_n, doubled);
        if (std::abs(log_i2 - log_i) > spec.doubling_check_tol * big_n)
            throw QuadratureError("quadrature did not converge under node doubling");
    }
    return (log_i - std::log(m.norm_const)) / big_n;
}

}  // namespace isingms
