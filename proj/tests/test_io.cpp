#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "isingms/io.hpp"
#include "isingms/sample_matrix.hpp"
#include "isingms/synth.hpp"

using namespace isingms;

TEST_CASE("ingest: pm1 and zero_one encodings") {
    std::stringstream pm("1,-1\n-1,1\n");
    const SampleMatrix a = ingest_csv(pm, Encoding::pm1);
    CHECK(a.n_samples == 2);
    CHECK(a.n_nodes == 2);
    CHECK(a.spin(0, 0) == 1);
    CHECK(a.spin(0, 1) == -1);

    std::stringstream zo("1,0\n0,1\n");
    const SampleMatrix b = ingest_csv(zo, Encoding::zero_one);
    CHECK(b.spin(0, 0) == 1);
    CHECK(b.spin(0, 1) == -1);
    CHECK(b.spin(1, 0) == -1);
    CHECK(b.spin(1, 1) == 1);
}

TEST_CASE("ingest: precise error locations") {
    std::stringstream bad("2,1\n");
    try {
        (void)ingest_csv(bad, Encoding::pm1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row == 1);
        CHECK(e.col == 1);
    }

    std::stringstream ragged("1,-1\n1,-1,1\n");
    try {
        (void)ingest_csv(ragged, Encoding::pm1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.row == 2);
    }

    std::stringstream zero_in_pm1("1,0\n");
    CHECK_THROWS_AS((void)ingest_csv(zero_in_pm1, Encoding::pm1), ParseError);
    std::stringstream empty("");
    CHECK_THROWS_AS((void)ingest_csv(empty, Encoding::pm1), ParseError);
}

TEST_CASE("sample matrix CSV round trip") {
    IsingInstance inst = IsingInstance::zeros(5);
    inst.set_coupling(0, 4, 1.0);
    const SampleMatrix m = gibbs_sample(inst, 64, 100, 2, 9);
    std::stringstream ss;
    write_csv(m, ss);
    const SampleMatrix back = ingest_csv(ss, Encoding::pm1);
    CHECK(back.values == m.values);
}

TEST_CASE("eta matrix CSV round trips doubles exactly") {
    std::vector<double> m{0.0, 0.12345678901234567, -1.0, 1e-17};
    std::stringstream ss;
    write_matrix_csv(m, 2, ss);
    int n = 0;
    const std::vector<double> back = read_matrix_csv(ss, n);
    CHECK(n == 2);
    CHECK(back == m);
}

TEST_CASE("graph JSON export") {
    ConfidenceGraph g = ConfidenceGraph::empty(3);
    g.epsilon_used = 0.25;
    g.set_eta(0, 1, 0.75);
    g.set_eta(0, 2, -0.5);
    g.set_eta(1, 2, 0.1);
    g.set_edge(0, 1, true);
    const auto j = nlohmann::json::parse(graph_to_json(g));
    CHECK(j["n"] == 3);
    CHECK(j["epsilon"] == 0.25);
    CHECK(j["n_edges"] == 1);
    REQUIRE(j["edges"].size() == 1);
    CHECK(j["edges"][0]["i"] == 0);
    CHECK(j["edges"][0]["j"] == 1);
    CHECK(j["edges"][0]["eta"] == 0.75);
    CHECK(j["edges"][0]["bond"] == true);

    const auto all = nlohmann::json::parse(graph_to_json(g, true));
    CHECK(all["edges"].size() == 3);
}

TEST_CASE("trace JSON handles infinities") {
    EpsilonTrace t;
    t.epsilons = {1.0, std::numeric_limits<double>::infinity()};
    t.ratios = {std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
    t.converged = true;
    const auto j = nlohmann::json::parse(
        trace_to_json(t, std::numeric_limits<double>::infinity()));
    CHECK(j["epsilon_star"] == "inf");
    CHECK(j["trace"][1]["epsilon"] == "inf");
}
