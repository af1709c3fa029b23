#include "isingms/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace isingms {

void write_matrix_csv(const std::vector<double>& m, int n, std::ostream& os) {
    char buf[64];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g",
                          m[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                            static_cast<std::size_t>(j)]);
            if (j) os << ',';
            os << buf;
        }
        os << '\n';
    }
}

std::vector<double> read_matrix_csv(std::istream& is, int& n) {
    std::vector<double> out;
    std::string line;
    n = 0;
    int rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int cols = 0;
        while (std::getline(ss, cell, ',')) {
            out.push_back(std::stod(cell));
            ++cols;
        }
        if (n == 0) n = cols;
        else if (cols != n) throw std::runtime_error("read_matrix_csv: ragged row");
        ++rows;
    }
    if (rows != n) throw std::runtime_error("read_matrix_csv: matrix is not square");
    return out;
}

std::string graph_to_json(const ConfidenceGraph& g, bool include_all) {
    nlohmann::json j;
    j["n"] = g.n_nodes;
    j["epsilon"] = g.epsilon_used;
    j["n_edges"] = g.edge_count();
    nlohmann::json edges = nlohmann::json::array();
    for (int i = 0; i < g.n_nodes; ++i)
        for (int jj = i + 1; jj < g.n_nodes; ++jj) {
            if (!include_all && !g.edge(i, jj)) continue;
            edges.push_back({{"i", i}, {"j", jj}, {"eta", g.eta_at(i, jj)},
                             {"bond", g.edge(i, jj)}});
        }
    j["edges"] = edges;
    return j.dump(2);
}

void write_metrics_csv(const std::vector<std::pair<std::string, RecoveryMetrics>>& rows,
                       std::ostream& os) {
    os << "label,tp,fp,tn,fn,tpr,tnr,fpr,fnr\n";
    char buf[256];
    for (const auto& [label, m] : rows) {
        std::snprintf(buf, sizeof buf, "%s,%lld,%lld,%lld,%lld,%.17g,%.17g,%.17g,%.17g\n",
                      label.c_str(), static_cast<long long>(m.tp), static_cast<long long>(m.fp),
                      static_cast<long long>(m.tn), static_cast<long long>(m.fn), m.tpr, m.tnr,
                      m.fpr, m.fnr);
        os << buf;
    }
}

void write_roc_csv(const std::vector<RocPoint>& points, std::ostream& os) {
    os << "parameter,tpr,tnr,fpr,fnr\n";
    char buf[192];
    for (const RocPoint& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.parameter, p.m.tpr,
                      p.m.tnr, p.m.fpr, p.m.fnr);
        os << buf;
    }
}

std::string trace_to_json(const EpsilonTrace& trace, double epsilon_star) {
    nlohmann::json j;
    j["epsilon_star"] = std::isinf(epsilon_star) ? nlohmann::json("inf")
                                                 : nlohmann::json(epsilon_star);
    j["converged"] = trace.converged;
    j["two_cycle"] = trace.two_cycle;
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t t = 0; t < trace.epsilons.size(); ++t) {
        const double e = trace.epsilons[t];
        const double r = trace.ratios[t];
        steps.push_back({{"epsilon", std::isinf(e) ? nlohmann::json("inf") : nlohmann::json(e)},
                         {"ratio", std::isinf(r) ? nlohmann::json("inf") : nlohmann::json(r)}});
    }
    j["trace"] = steps;
    return j.dump(2);
}

}  // namespace isingms
