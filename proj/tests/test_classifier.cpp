#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "isingms/classifier.hpp"

using namespace isingms;

namespace {

// Confidence recomputed from the quadrature oracle instead of the Laplace
// formula; used to cross-check signs on reference points.
double oracle_confidence(const PairMoments& stats, std::int64_t n_obs) {
    QuadratureSpec q;
    q.center_on_peak = true;
    q.nodes_per_dim = 48;
    double total_log[10];
    double mx = -1e300;
    for (const ModelSpec& m : model_table()) {
        const double v = exact_log_evidence(m, stats, n_obs, q) * static_cast<double>(n_obs);
        total_log[m.id - 1] = v;
        mx = std::max(mx, v);
    }
    double nb = 0.0, b = 0.0;
    for (int i = 0; i < 5; ++i) nb += std::exp(total_log[i] - mx);
    for (int i = 5; i < 10; ++i) b += std::exp(total_log[i] - mx);
    return (b - nb) / (b + nb);
}

}  // namespace

TEST_CASE("physical tetrahedron") {
    CHECK(physical(PairMoments{0.0, 0.0, 0.0}));
    CHECK_FALSE(physical(PairMoments{1.0, -1.0, 0.5}));  // upper bound is -1
    CHECK(physical(PairMoments{1.0, 1.0, 1.0}));
    CHECK_FALSE(physical(PairMoments{0.0, 0.0, 1.1}));
    // Counts always land inside.
    CHECK(physical(PairStats{3, 5, 7, 11}));
    CHECK(physical(PairStats{50, 0, 0, 0}));
}

TEST_CASE("confidence signs at reference points") {
    CHECK(confidence(PairMoments{0.0, 0.0, 0.0}, 50) < 0.0);
    CHECK(confidence(PairMoments{0.0, 0.0, 0.9}, 500) > 0.0);
    // Point on the independence surface c12 = m1 m2.
    CHECK(confidence(PairMoments{0.5, 0.5, 0.25}, 500) < 0.0);

    // Quadrature-oracle cross-check of the same signs.
    CHECK(oracle_confidence(PairMoments{0.0, 0.0, 0.9}, 500) > 0.0);
    CHECK(oracle_confidence(PairMoments{0.5, 0.5, 0.25}, 500) < 0.0);
    CHECK(oracle_confidence(PairMoments{0.0, 0.0, 0.0}, 50) < 0.0);
}

TEST_CASE("confidence bounds and symmetries") {
    for (double m1 : {-0.6, -0.2, 0.0, 0.4})
        for (double m2 : {-0.4, 0.0, 0.5})
            for (double c : {-0.3, 0.0, 0.2, 0.6}) {
                const PairMoments s{m1, m2, c};
                if (!physical(s)) continue;
                const double eta = confidence(s, 50);
                CHECK(std::abs(eta) <= 1.0);
                // Exact exchange and joint-flip symmetries.
                CHECK(eta == confidence(PairMoments{m2, m1, c}, 50));
                CHECK(eta == confidence(PairMoments{-m1, -m2, c}, 50));
            }
}

TEST_CASE("no-bond region encloses the independence surface (spot)") {
    for (double m : {-0.8, -0.4, 0.0, 0.4, 0.8})
        for (double m2 : {-0.6, 0.0, 0.6}) {
            const PairMoments s{m, m2, m * m2};
            REQUIRE(physical(s));
            CHECK(confidence(s, 50) < 0.0);
            CHECK(confidence(s, 500) < 0.0);
        }
}

TEST_CASE("no-bond region shrinks with N") {
    // Achievable (0, 0, c) stats shared by N = 50 and N = 500: c multiple of
    // 0.08. If the larger sample keeps the pair disconnected, so does the
    // smaller one.
    for (int k = 0; k <= 10; ++k) {
        const double c = 0.08 * k;
        const double eta500 = confidence(PairMoments{0.0, 0.0, c}, 500);
        const double eta50 = confidence(PairMoments{0.0, 0.0, c}, 50);
        if (eta500 < 0.0) CHECK(eta50 < 0.0);
    }
}

TEST_CASE("posterior gap and decision threshold") {
    CHECK(posterior_gap_from_eta(0.1, 1.0) > 0.0);   // flat prior: sign of eta
    CHECK(posterior_gap_from_eta(0.5, 0.1) < 0.0);   // threshold ~ 0.818
    CHECK(decision_threshold(1.0) == 0.0);
    CHECK(decision_threshold(0.1) == doctest::Approx(0.9 / 1.1));
    // eps -> infinity: threshold -> -1, any eta > -1 gives a bond.
    CHECK(decision_threshold(std::numeric_limits<double>::infinity()) == -1.0);
    CHECK(decide(-0.999, SparsityPrior{std::numeric_limits<double>::infinity()}));

    CHECK(decide(0.0, SparsityPrior{1.0}));       // tie goes to the bond
    CHECK_FALSE(decide(0.9, SparsityPrior{0.01}));  // threshold ~ 0.980
    CHECK(decide(1.0, SparsityPrior{0.01}));
    CHECK_FALSE(decide(1.0, SparsityPrior{0.0}));  // zero prior mass on bonds

    // decide(eta, eps) is equivalent to posterior_gap >= 0, and increasing
    // eps never turns a bond into a no-bond.
    for (double eta : {-0.9, -0.3, 0.0, 0.4, 0.95})
        for (double eps : {0.05, 0.3, 1.0, 4.0}) {
            CHECK(decide(eta, SparsityPrior{eps}) == (posterior_gap_from_eta(eta, eps) >= 0.0));
            if (decide(eta, SparsityPrior{eps})) CHECK(decide(eta, SparsityPrior{2.0 * eps}));
        }
}

TEST_CASE("decision cache") {
    DecisionCache cache(50);
    const PairStats counts{25, 0, 0, 25};
    const double first = cache.eta(counts);
    const double second = cache.eta(counts);
    CHECK(std::memcmp(&first, &second, sizeof first) == 0);  // identical bits
    CHECK(first == confidence(PairMoments{0.0, 0.0, 1.0}, 50));
    CHECK(cache.size() == 1);

    PairStats wrong{10, 0, 0, 40};
    CHECK(cache.eta(wrong) == confidence(wrong));
    CHECK_THROWS_AS((void)cache.eta(PairStats{1, 1, 1, 1}), std::invalid_argument);
}

TEST_CASE("decision table export") {
    std::stringstream ss;
    export_decision_table(6, ss, 2);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "n_pp,n_pm,n_mp,n_mm,m1,m2,c12,eta");
    int rows = 0;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == 9 * 8 * 7 / 6);  // C(6 + 3, 3)
}

TEST_CASE("full decision table for N = 50 enumerates every count triple") {
    std::stringstream ss;
    export_decision_table(50, ss, 2);
    std::string line;
    std::getline(ss, line);
    std::int64_t rows = 0;
    bool all_finite = true;
    while (std::getline(ss, line)) {
        ++rows;
        const double eta = std::stod(line.substr(line.rfind(',') + 1));
        all_finite = all_finite && std::isfinite(eta) && std::abs(eta) <= 1.0;
    }
    CHECK(rows == 53 * 52 * 51 / 6);  // C(53, 3)
    CHECK(all_finite);
}
