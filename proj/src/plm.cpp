#include "isingms/plm.hpp"

#include <algorithm>
#include <cmath>

#include "isingms/parallel.hpp"

namespace isingms {

namespace {

// ln(1 + exp(u)) without overflow.
double log1p_exp(double u) { return u > 30.0 ? u : std::log1p(std::exp(u)); }

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

struct NodeProblem {
    const SampleMatrix& data;
    int node;
    double lambda;

    // Smooth part of the objective and its gradient at (intercept, w).
    double value(double h, const std::vector<double>& w) const {
        const std::int64_t big_n = data.n_samples;
        double f = 0.0;
        for (std::int64_t r = 0; r < big_n; ++r) {
            double z = h;
            for (int j = 0; j < data.n_nodes; ++j)
                if (j != node) z += w[static_cast<std::size_t>(j)] * data.spin(r, j);
            f += log1p_exp(-2.0 * data.spin(r, node) * z);
        }
        return f / static_cast<double>(big_n);
    }

    double value_and_grad(double h, const std::vector<double>& w, double& gh,
                          std::vector<double>& gw) const {
        const std::int64_t big_n = data.n_samples;
        double f = 0.0;
        gh = 0.0;
        std::fill(gw.begin(), gw.end(), 0.0);
        for (std::int64_t r = 0; r < big_n; ++r) {
            double z = h;
            for (int j = 0; j < data.n_nodes; ++j)
                if (j != node) z += w[static_cast<std::size_t>(j)] * data.spin(r, j);
            const double y = data.spin(r, node);
            const double u = -2.0 * y * z;
            f += log1p_exp(u);
            // d/dz ln(1+e^u) = -2 y sigma(u)
            const double sig = 1.0 / (1.0 + std::exp(-u));
            const double dz = -2.0 * y * sig;
            gh += dz;
            for (int j = 0; j < data.n_nodes; ++j)
                if (j != node) gw[static_cast<std::size_t>(j)] += dz * data.spin(r, j);
        }
        const double inv = 1.0 / static_cast<double>(big_n);
        f *= inv;
        gh *= inv;
        for (double& g : gw) g *= inv;
        return f;
    }
};

}  // namespace

PlmFit plm_l1_fit(const SampleMatrix& data, double lambda, int max_iter, double tol, int jobs) {
    if (lambda < 0.0) throw std::invalid_argument("plm_l1_fit: lambda must be >= 0");
    const int n = data.n_nodes;
    PlmFit fit;
    fit.n_nodes = n;
    fit.lambda = lambda;
    fit.couplings.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    fit.intercepts.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<std::uint8_t> ok(static_cast<std::size_t>(n), 1);

    parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t node) {
        const NodeProblem prob{data, static_cast<int>(node), lambda};
        const std::int64_t big_n = data.n_samples;
        double mean = 0.0;
        for (std::int64_t r = 0; r < big_n; ++r) mean += data.spin(r, static_cast<int>(node));
        mean /= static_cast<double>(big_n);
        const double clamp = 1.0 - 1.0 / static_cast<double>(big_n);
        double h = std::atanh(std::clamp(mean, -clamp, clamp));
        std::vector<double> w(static_cast<std::size_t>(n), 0.0);
        std::vector<double> gw(static_cast<std::size_t>(n), 0.0);
        std::vector<double> w_next(static_cast<std::size_t>(n), 0.0);

        auto l1 = [&](const std::vector<double>& v) {
            double s = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != static_cast<int>(node)) s += std::abs(v[static_cast<std::size_t>(j)]);
            return s;
        };

        double gh = 0.0;
        double g = prob.value_and_grad(h, w, gh, gw);
        double objective = g + lambda * l1(w);
        double step = 1.0;
        bool converged = false;
        for (int it = 0; it < max_iter; ++it) {
            // Backtracking proximal gradient step on (h, w).
            double g_next = 0.0, h_next = 0.0;
            bool stalled = false;
            for (;;) {
                h_next = h - step * gh;
                double sq = (h_next - h) * (h_next - h);
                double lin = gh * (h_next - h);
                for (int j = 0; j < n; ++j) {
                    if (j == static_cast<int>(node)) continue;
                    const std::size_t k = static_cast<std::size_t>(j);
                    w_next[k] = soft_threshold(w[k] - step * gw[k], lambda * step);
                    const double d = w_next[k] - w[k];
                    sq += d * d;
                    lin += gw[k] * d;
                }
                g_next = prob.value(h_next, w_next);
                if (g_next <= g + lin + sq / (2.0 * step) + 1e-15) break;
                step *= 0.5;
                if (step < 1e-12) {
                    stalled = true;
                    break;
                }
            }
            if (stalled) {
                converged = true;  // no further progress possible at fp resolution
                break;
            }
            h = h_next;
            std::swap(w, w_next);
            const double objective_next = g_next + lambda * l1(w);
            const double change = objective - objective_next;
            objective = objective_next;
            if (change >= 0.0 && change < tol) {
                converged = true;
                break;
            }
            g = prob.value_and_grad(h, w, gh, gw);
        }
        if (!converged) ok[node] = 0;
        fit.intercepts[node] = h;
        for (int j = 0; j < n; ++j)
            fit.couplings[node * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
                (j == static_cast<int>(node)) ? 0.0 : w[static_cast<std::size_t>(j)];
    });
    for (std::uint8_t o : ok)
        if (!o) fit.converged = false;
    return fit;
}

double lambda_max(const SampleMatrix& data, std::vector<int>* dropped) {
    const int n = data.n_nodes;
    const std::int64_t big_n = data.n_samples;
    std::vector<double> m(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t r = 0; r < big_n; ++r)
        for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] += data.spin(r, i);
    for (double& v : m) v /= static_cast<double>(big_n);

    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(m[static_cast<std::size_t>(i)]) >= 1.0) {
            if (dropped) dropped->push_back(i);
            continue;
        }
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double s = 0.0;
            for (std::int64_t r = 0; r < big_n; ++r)
                s += data.spin(r, j) * (data.spin(r, i) - m[static_cast<std::size_t>(i)]);
            best = std::max(best, std::abs(s / static_cast<double>(big_n)));
        }
    }
    return best;
}

EdgeList plm_graph(const PlmFit& fit) {
    EdgeList out;
    for (int i = 0; i < fit.n_nodes; ++i)
        for (int j = i + 1; j < fit.n_nodes; ++j)
            if (0.5 * (fit.coupling(i, j) + fit.coupling(j, i)) != 0.0) out.emplace_back(i, j);
    return out;
}

}  // namespace isingms
