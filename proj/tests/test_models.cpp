#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "isingms/models.hpp"
#include "isingms/quadrature.hpp"

using namespace isingms;

namespace {

// Brute-force ln Z by direct summation of exp(theta . f(s)) over the four
// joint states. Kept independent of the library's closed forms.
double brute_log_partition(const ModelSpec& m, const ThetaVec& theta) {
    const int s1v[4] = {+1, +1, -1, -1};
    const int s2v[4] = {+1, -1, +1, -1};
    double z = 0.0;
    for (int s = 0; s < 4; ++s) {
        double e = 0.0;
        for (int i = 0; i < m.theta_dim; ++i)
            e += theta[i] * stat_value(m.stats[static_cast<std::size_t>(i)], s1v[s], s2v[s]);
        z += std::exp(e);
    }
    return std::log(z);
}

ThetaVec random_theta(const ModelSpec& m, std::mt19937& gen, double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    ThetaVec t = ThetaVec::zeros(m.theta_dim);
    for (int i = 0; i < m.theta_dim; ++i) t[i] = u(gen);
    return t;
}

// Central-difference Hessian of ln Z.
void fd_hessian(const ModelSpec& m, const ThetaVec& theta, double h, double* out) {
    const int d = m.theta_dim;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            ThetaVec tpp = theta, tpm = theta, tmp = theta, tmm = theta;
            tpp[i] += h; tpp[j] += h;
            tpm[i] += h; tpm[j] -= h;
            tmp[i] -= h; tmp[j] += h;
            tmm[i] -= h; tmm[j] -= h;
            out[i * d + j] = (log_partition(m, tpp) - log_partition(m, tpm) -
                              log_partition(m, tmp) + log_partition(m, tmm)) /
                             (4.0 * h * h);
        }
}

double det_small(const double* a, int d) {
    if (d == 1) return a[0];
    if (d == 2) return a[0] * a[3] - a[1] * a[2];
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
}

}  // namespace

TEST_CASE("table matches the ten-model layout") {
    const auto& tab = model_table();
    REQUIRE(tab.size() == 10);
    const int dims[10] = {0, 1, 1, 1, 2, 1, 2, 2, 2, 3};
    const double deltas[10] = {1, 1, 1, 0.5, 1, 1, 1, 1, 1.5, 2};
    for (int i = 0; i < 10; ++i) {
        CHECK(tab[i].id == i + 1);
        CHECK(tab[i].theta_dim == dims[i]);
        CHECK(tab[i].delta == doctest::Approx(deltas[i]));
        CHECK(tab[i].has_bond == (i + 1 >= 6));
    }
    const double pi = M_PI;
    CHECK(model(2).norm_const == doctest::Approx(pi));
    CHECK(model(4).norm_const == doctest::Approx(std::sqrt(2.0) * pi));
    CHECK(model(5).norm_const == doctest::Approx(pi * pi));
    CHECK(model(9).norm_const == doctest::Approx(2.0 * pi));
    CHECK(model(10).norm_const == doctest::Approx(pi * pi));
    CHECK(model(9).eps_coupling_coeff == doctest::Approx(0.5));
    for (int id = 1; id <= 10; ++id)
        if (id != 9) CHECK(model(id).eps_coupling_coeff == 0.0);
    // M9 statistics per the table: (m1 + m2, c12)
    CHECK(model(9).stats[0] == Stat::s1_plus_s2);
    CHECK(model(9).stats[1] == Stat::s1_s2);
}

TEST_CASE("log_partition closed forms") {
    CHECK(log_partition(model(1), ThetaVec::zeros(0)) == doctest::Approx(std::log(4.0)));

    ThetaVec j0 = ThetaVec::zeros(1);
    CHECK(log_partition(model(6), j0) == doctest::Approx(std::log(4.0)));

    ThetaVec t10 = ThetaVec::zeros(3);
    t10[0] = 0.3; t10[1] = -0.2; t10[2] = 0.5;
    CHECK(log_partition(model(10), t10) ==
          doctest::Approx(brute_log_partition(model(10), t10)).epsilon(1e-12));

    std::mt19937 gen(7);
    for (const ModelSpec& m : model_table())
        for (int rep = 0; rep < 50; ++rep) {
            const ThetaVec t = random_theta(m, gen, -3.0, 3.0);
            CHECK(log_partition(m, t) ==
                  doctest::Approx(brute_log_partition(m, t)).epsilon(1e-12));
        }

    // Log-stable for large arguments where direct cosh would overflow.
    ThetaVec big = ThetaVec::zeros(1);
    big[0] = 800.0;
    CHECK(log_partition(model(2), big) ==
          doctest::Approx(std::log(2.0) + 800.0).epsilon(1e-12));
}

TEST_CASE("gradients match central finite differences") {
    std::mt19937 gen(11);
    ThetaVec t4 = ThetaVec::zeros(1);
    t4[0] = 0.7;
    CHECK(grad_log_partition(model(4), t4)[0] == doctest::Approx(2.0 * std::tanh(0.7)));
    ThetaVec z1 = ThetaVec::zeros(1);
    CHECK(grad_log_partition(model(2), z1)[0] == 0.0);

    const double h = 1e-5;
    for (const ModelSpec& m : model_table())
        for (int rep = 0; rep < 100; ++rep) {
            const ThetaVec t = random_theta(m, gen);
            const ThetaVec g = grad_log_partition(m, t);
            for (int i = 0; i < m.theta_dim; ++i) {
                ThetaVec tp = t, tm = t;
                tp[i] += h;
                tm[i] -= h;
                const double fd = (log_partition(m, tp) - log_partition(m, tm)) / (2.0 * h);
                CHECK(std::abs(g[i] - fd) < 1e-6);
            }
        }

    ThetaVec t9 = ThetaVec::zeros(2);
    t9[0] = 0.4; t9[1] = 0.6;
    const ThetaVec g9 = grad_log_partition(model(9), t9);
    for (int i = 0; i < 2; ++i) {
        ThetaVec tp = t9, tm = t9;
        tp[i] += h;
        tm[i] -= h;
        const double fd = (log_partition(model(9), tp) - log_partition(model(9), tm)) / (2.0 * h);
        CHECK(std::abs(g9[i] - fd) < 1e-6);
    }
}

TEST_CASE("fisher_logdet closed forms and finite-difference Hessian") {
    CHECK(fisher_logdet(model(1), ThetaVec::zeros(0)) == 0.0);
    ThetaVec h0 = ThetaVec::zeros(1);
    CHECK(fisher_logdet(model(2), h0) == doctest::Approx(0.0));

    std::mt19937 gen(13);
    for (const ModelSpec& m : model_table()) {
        if (m.theta_dim == 0) continue;
        for (int rep = 0; rep < 20; ++rep) {
            const ThetaVec t = random_theta(m, gen, -1.5, 1.5);
            double hess[9];
            fd_hessian(m, t, 1e-4, hess);
            const double logdet_fd = std::log(det_small(hess, m.theta_dim));
            CHECK(std::abs(fisher_logdet(m, t) - logdet_fd) < 1e-5);
        }
    }
}

TEST_CASE("fisher relation is exact") {
    std::mt19937 gen(17);
    for (const ModelSpec& m : model_table())
        for (int rep = 0; rep < 200; ++rep) {
            const ThetaVec t = random_theta(m, gen);
            const double lhs = 0.5 * fisher_logdet(m, t) + m.delta * log_partition(m, t) -
                               epsilon_term(m, t);
            CHECK(std::abs(lhs) < 1e-9);
        }
}

TEST_CASE("fisher_matrix agrees with the finite-difference Hessian") {
    std::mt19937 gen(19);
    for (const ModelSpec& m : model_table()) {
        if (m.theta_dim == 0) continue;
        for (int rep = 0; rep < 10; ++rep) {
            const ThetaVec t = random_theta(m, gen, -1.5, 1.5);
            double exact[9], fd[9];
            fisher_matrix(m, t, std::span<double>(exact, 9));
            fd_hessian(m, t, 1e-4, fd);
            for (int k = 0; k < m.theta_dim * m.theta_dim; ++k)
                CHECK(std::abs(exact[k] - fd[k]) < 1e-6);
        }
    }
}

TEST_CASE("field-sign and spin-exchange symmetries") {
    std::mt19937 gen(23);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        // Joint sign flip of all field components (J unchanged) leaves the
        // symmetric models invariant.
        ThetaVec t5 = ThetaVec::zeros(2), t5f = ThetaVec::zeros(2);
        t5[0] = u(gen); t5[1] = u(gen);
        t5f[0] = -t5[0]; t5f[1] = -t5[1];
        CHECK(log_partition(model(5), t5) ==
              doctest::Approx(log_partition(model(5), t5f)).epsilon(1e-15));

        ThetaVec t10 = ThetaVec::zeros(3), t10f = ThetaVec::zeros(3);
        t10[0] = u(gen); t10[1] = u(gen); t10[2] = u(gen);
        t10f[0] = -t10[0]; t10f[1] = -t10[1]; t10f[2] = t10[2];
        CHECK(log_partition(model(10), t10) ==
              doctest::Approx(log_partition(model(10), t10f)).epsilon(1e-15));

        ThetaVec t7 = ThetaVec::zeros(2);
        t7[0] = u(gen); t7[1] = u(gen);
        ThetaVec t7f = t7;
        t7f[0] = -t7[0];
        CHECK(log_partition(model(7), t7) ==
              doctest::Approx(log_partition(model(7), t7f)).epsilon(1e-15));
        // M7 and M8 are images of each other under exchanging the spins.
        CHECK(log_partition(model(7), t7) ==
              doctest::Approx(log_partition(model(8), t7)).epsilon(1e-15));
        ThetaVec t2 = ThetaVec::zeros(1);
        t2[0] = u(gen);
        CHECK(log_partition(model(2), t2) ==
              doctest::Approx(log_partition(model(3), t2)).epsilon(1e-15));
    }
}

TEST_CASE("normalization constants match the Jeffreys integral") {
    // Integrate sqrt(det J) numerically over theta space and compare with the
    // tabulated constants to 1e-3 relative.
    auto integrate = [](const ModelSpec& m, double half_width, int nodes) {
        const GaussLegendreRule& rule = gauss_legendre(nodes);
        const int d = m.theta_dim;
        std::int64_t total = 1;
        for (int a = 0; a < d; ++a) total *= nodes;
        double sum = 0.0;
        for (std::int64_t flat = 0; flat < total; ++flat) {
            ThetaVec t = ThetaVec::zeros(d);
            double w = 1.0;
            std::int64_t rem = flat;
            for (int a = 0; a < d; ++a) {
                const int idx = static_cast<int>(rem % nodes);
                rem /= nodes;
                t[a] = half_width * rule.nodes[static_cast<std::size_t>(idx)];
                w *= half_width * rule.weights[static_cast<std::size_t>(idx)];
            }
            sum += w * std::exp(0.5 * fisher_logdet(m, t));
        }
        return sum;
    };
    CHECK(integrate(model(2), 30.0, 300) == doctest::Approx(M_PI).epsilon(1e-3));
    CHECK(integrate(model(4), 30.0, 300) == doctest::Approx(std::sqrt(2.0) * M_PI).epsilon(1e-3));
    CHECK(integrate(model(6), 30.0, 300) == doctest::Approx(M_PI).epsilon(1e-3));
    CHECK(integrate(model(5), 30.0, 200) == doctest::Approx(M_PI * M_PI).epsilon(1e-3));
    CHECK(integrate(model(7), 30.0, 200) == doctest::Approx(M_PI * M_PI).epsilon(1e-3));
    CHECK(integrate(model(9), 30.0, 200) == doctest::Approx(2.0 * M_PI).epsilon(1e-3));
    CHECK(integrate(model(10), 15.0, 120) == doctest::Approx(M_PI * M_PI).epsilon(1e-3));
}
