#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "isingms/metrics.hpp"
#include "isingms/recovery.hpp"
#include "isingms/windows.hpp"

namespace isingms {

// n x n matrix as CSV with 17 significant digits (round-trip exact).
void write_matrix_csv(const std::vector<double>& m, int n, std::ostream& os);
std::vector<double> read_matrix_csv(std::istream& is, int& n);

// Edge list as JSON: [{"i":, "j":, "eta":, "bond":}, ...] for all pairs with
// a bond plus, when include_all is set, the remaining pairs.
std::string graph_to_json(const ConfidenceGraph& g, bool include_all = false);

// Metrics rows as CSV with a header.
void write_metrics_csv(const std::vector<std::pair<std::string, RecoveryMetrics>>& rows,
                       std::ostream& os);
void write_roc_csv(const std::vector<RocPoint>& points, std::ostream& os);

// Epsilon fixed-point trace plus run parameters as JSON.
std::string trace_to_json(const EpsilonTrace& trace, double epsilon_star);

}  // namespace isingms
