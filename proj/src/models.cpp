#include "isingms/models.hpp"

#include <cmath>
#include <stdexcept>

namespace isingms {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr double kPi = 3.1415926535897932384626433832795029;

constexpr std::array<Stat, 3> kNoStats{Stat::s1, Stat::s1, Stat::s1};

ModelSpec make(int id, int dim, double delta, double eps_c, double eps_j, double norm,
               bool bond, std::array<Stat, 3> st, std::string_view name) {
    ModelSpec m;
    m.id = id;
    m.theta_dim = dim;
    m.delta = delta;
    m.eps_const = eps_c;
    m.eps_coupling_coeff = eps_j;
    m.norm_const = norm;
    m.has_bond = bond;
    m.stats = st;
    m.name = name;
    return m;
}

}  // namespace

double ln_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - kLn2;
}

const std::array<ModelSpec, 10>& model_table() {
    static const std::array<ModelSpec, 10> table = {
        make(1, 0, 1.0, 2.0 * kLn2, 0.0, 1.0, false, kNoStats, "independent"),
        make(2, 1, 1.0, 2.0 * kLn2, 0.0, kPi, false, {Stat::s1, Stat::s1, Stat::s1}, "h1"),
        make(3, 1, 1.0, 2.0 * kLn2, 0.0, kPi, false, {Stat::s2, Stat::s1, Stat::s1}, "h2"),
        make(4, 1, 0.5, 1.5 * kLn2, 0.0, std::sqrt(2.0) * kPi, false,
             {Stat::s1_plus_s2, Stat::s1, Stat::s1}, "h"),
        make(5, 2, 1.0, 2.0 * kLn2, 0.0, kPi * kPi, false, {Stat::s1, Stat::s2, Stat::s1},
             "h1 h2"),
        make(6, 1, 1.0, 2.0 * kLn2, 0.0, kPi, true, {Stat::s1_s2, Stat::s1, Stat::s1}, "J"),
        make(7, 2, 1.0, 2.0 * kLn2, 0.0, kPi * kPi, true, {Stat::s1, Stat::s1_s2, Stat::s1},
             "h1 J"),
        make(8, 2, 1.0, 2.0 * kLn2, 0.0, kPi * kPi, true, {Stat::s2, Stat::s1_s2, Stat::s1},
             "h2 J"),
        make(9, 2, 1.5, 3.5 * kLn2, 0.5, 2.0 * kPi, true,
             {Stat::s1_plus_s2, Stat::s1_s2, Stat::s1}, "h J"),
        make(10, 3, 2.0, 4.0 * kLn2, 0.0, kPi * kPi, true,
             {Stat::s1, Stat::s2, Stat::s1_s2}, "h1 h2 J"),
    };
    return table;
}

const ModelSpec& model(int id) {
    if (id < 1 || id > 10) throw std::invalid_argument("model id must be in 1..10");
    return model_table()[static_cast<std::size_t>(id - 1)];
}

double stat_moment(Stat s, const PairMoments& m) {
    switch (s) {
        case Stat::s1: return m.m1;
        case Stat::s2: return m.m2;
        case Stat::s1_plus_s2: return m.m1 + m.m2;
        case Stat::s1_s2: return m.c12;
    }
    throw std::logic_error("unreachable");
}

double stat_value(Stat s, int s1, int s2) {
    switch (s) {
        case Stat::s1: return s1;
        case Stat::s2: return s2;
        case Stat::s1_plus_s2: return s1 + s2;
        case Stat::s1_s2: return s1 * s2;
    }
    throw std::logic_error("unreachable");
}

void sufficient_moments(const ModelSpec& m, const PairMoments& pm, std::span<double> out) {
    for (int i = 0; i < m.theta_dim; ++i)
        out[static_cast<std::size_t>(i)] = stat_moment(m.stats[static_cast<std::size_t>(i)], pm);
}

namespace {

void check_dim(const ModelSpec& m, const ThetaVec& theta) {
    if (theta.size() != m.theta_dim)
        throw std::invalid_argument("theta dimension mismatch for model");
}

constexpr int kS1[4] = {+1, +1, -1, -1};
constexpr int kS2[4] = {+1, -1, +1, -1};

// ln Z by log-sum-exp over the four joint states; stable for any theta.
// Used where the sigma-factor closed forms of M9/M10 cancel catastrophically
// (tanh products saturating to -1 at very large arguments).
double four_state_log_z(const ModelSpec& m, const ThetaVec& theta) {
    double e[4];
    double mx = -1e300;
    for (int s = 0; s < 4; ++s) {
        double v = 0.0;
        for (int i = 0; i < m.theta_dim; ++i)
            v += theta[i] * stat_value(m.stats[static_cast<std::size_t>(i)], kS1[s], kS2[s]);
        e[s] = v;
        mx = std::max(mx, v);
    }
    double sum = 0.0;
    for (int s = 0; s < 4; ++s) sum += std::exp(e[s] - mx);
    return mx + std::log(sum);
}

// Gradient of ln Z as the model expectation of the sufficient statistics.
ThetaVec four_state_grad(const ModelSpec& m, const ThetaVec& theta) {
    double e[4];
    double mx = -1e300;
    for (int s = 0; s < 4; ++s) {
        double v = 0.0;
        for (int i = 0; i < m.theta_dim; ++i)
            v += theta[i] * stat_value(m.stats[static_cast<std::size_t>(i)], kS1[s], kS2[s]);
        e[s] = v;
        mx = std::max(mx, v);
    }
    double z = 0.0;
    double p[4];
    for (int s = 0; s < 4; ++s) {
        p[s] = std::exp(e[s] - mx);
        z += p[s];
    }
    ThetaVec g = ThetaVec::zeros(m.theta_dim);
    for (int s = 0; s < 4; ++s)
        for (int i = 0; i < m.theta_dim; ++i)
            g[i] += (p[s] / z) * stat_value(m.stats[static_cast<std::size_t>(i)], kS1[s], kS2[s]);
    return g;
}

constexpr double kSigmaFallback = -0.9;

}  // namespace

double log_partition(const ModelSpec& m, const ThetaVec& theta) {
    check_dim(m, theta);
    switch (m.id) {
        case 1:
            return 2.0 * kLn2;
        case 2:
        case 3:
        case 6:
            return 2.0 * kLn2 + ln_cosh(theta[0]);
        case 4:
            return 2.0 * kLn2 + 2.0 * ln_cosh(theta[0]);
        case 5:
        case 7:
        case 8:
            return 2.0 * kLn2 + ln_cosh(theta[0]) + ln_cosh(theta[1]);
        case 9: {
            // Z = 4 cosh^2(h) cosh(J) (1 + tanh(J) tanh^2(h))
            const double th = std::tanh(theta[0]);
            const double tj = std::tanh(theta[1]);
            const double p = tj * th * th;
            if (p < kSigmaFallback) return four_state_log_z(m, theta);
            return 2.0 * kLn2 + 2.0 * ln_cosh(theta[0]) + ln_cosh(theta[1]) + std::log1p(p);
        }
        case 10: {
            const double t1 = std::tanh(theta[0]);
            const double t2 = std::tanh(theta[1]);
            const double tj = std::tanh(theta[2]);
            const double p = t1 * t2 * tj;
            if (p < kSigmaFallback) return four_state_log_z(m, theta);
            return 2.0 * kLn2 + ln_cosh(theta[0]) + ln_cosh(theta[1]) + ln_cosh(theta[2]) +
                   std::log1p(p);
        }
        default:
            throw std::logic_error("unreachable");
    }
}

ThetaVec grad_log_partition(const ModelSpec& m, const ThetaVec& theta) {
    check_dim(m, theta);
    ThetaVec g = ThetaVec::zeros(m.theta_dim);
    switch (m.id) {
        case 1:
            break;
        case 2:
        case 3:
        case 6:
            g[0] = std::tanh(theta[0]);
            break;
        case 4:
            g[0] = 2.0 * std::tanh(theta[0]);
            break;
        case 5:
        case 7:
        case 8:
            g[0] = std::tanh(theta[0]);
            g[1] = std::tanh(theta[1]);
            break;
        case 9: {
            const double th = std::tanh(theta[0]);
            const double tj = std::tanh(theta[1]);
            const double den = 1.0 + tj * th * th;
            if (den < 1.0 + kSigmaFallback) return four_state_grad(m, theta);
            g[0] = 2.0 * th + 2.0 * th * (1.0 - th * th) * tj / den;
            g[1] = tj + th * th * (1.0 - tj * tj) / den;
            break;
        }
        case 10: {
            const double t1 = std::tanh(theta[0]);
            const double t2 = std::tanh(theta[1]);
            const double tj = std::tanh(theta[2]);
            const double den = 1.0 + t1 * t2 * tj;
            if (den < 1.0 + kSigmaFallback) return four_state_grad(m, theta);
            g[0] = t1 + (1.0 - t1 * t1) * t2 * tj / den;
            g[1] = t2 + (1.0 - t2 * t2) * t1 * tj / den;
            g[2] = tj + (1.0 - tj * tj) * t1 * t2 / den;
            break;
        }
        default:
            throw std::logic_error("unreachable");
    }
    return g;
}

double epsilon_term(const ModelSpec& m, const ThetaVec& theta) {
    double e = m.eps_const;
    if (m.eps_coupling_coeff != 0.0) e += m.eps_coupling_coeff * theta[m.theta_dim - 1];
    return e;
}

double fisher_logdet(const ModelSpec& m, const ThetaVec& theta) {
    check_dim(m, theta);
    return 2.0 * (epsilon_term(m, theta) - m.delta * log_partition(m, theta));
}

void fisher_matrix(const ModelSpec& m, const ThetaVec& theta, std::span<double> out) {
    check_dim(m, theta);
    const int d = m.theta_dim;
    // Probabilities of the four joint states under theta, max-subtracted.
    const int s1v[4] = {+1, +1, -1, -1};
    const int s2v[4] = {+1, -1, +1, -1};
    double logw[4];
    double mx = -1e300;
    for (int s = 0; s < 4; ++s) {
        double e = 0.0;
        for (int i = 0; i < d; ++i)
            e += theta[i] * stat_value(m.stats[static_cast<std::size_t>(i)], s1v[s], s2v[s]);
        logw[s] = e;
        mx = std::max(mx, e);
    }
    double z = 0.0;
    double p[4];
    for (int s = 0; s < 4; ++s) {
        p[s] = std::exp(logw[s] - mx);
        z += p[s];
    }
    for (int s = 0; s < 4; ++s) p[s] /= z;

    double mean[3] = {0.0, 0.0, 0.0};
    double f[4][3];
    for (int s = 0; s < 4; ++s)
        for (int i = 0; i < d; ++i) {
            f[s][i] = stat_value(m.stats[static_cast<std::size_t>(i)], s1v[s], s2v[s]);
            mean[i] += p[s] * f[s][i];
        }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double c = 0.0;
            for (int s = 0; s < 4; ++s) c += p[s] * (f[s][i] - mean[i]) * (f[s][j] - mean[j]);
            out[static_cast<std::size_t>(i * d + j)] = c;
        }
}

}  // namespace isingms
