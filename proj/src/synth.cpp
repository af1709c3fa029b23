#include "isingms/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "isingms/rng.hpp"

namespace isingms {

const char* topology_name(TopologySpec::Kind k) {
    switch (k) {
        case TopologySpec::Kind::dimers: return "dimers";
        case TopologySpec::Kind::star: return "star";
        case TopologySpec::Kind::erdos_renyi: return "erdos_renyi";
        case TopologySpec::Kind::grid2d: return "grid2d";
        case TopologySpec::Kind::diluted_grid: return "diluted_grid";
        case TopologySpec::Kind::custom: return "custom";
    }
    return "custom";
}

TopologySpec::Kind topology_from_name(const std::string& name) {
    if (name == "dimers") return TopologySpec::Kind::dimers;
    if (name == "star") return TopologySpec::Kind::star;
    if (name == "erdos_renyi" || name == "er") return TopologySpec::Kind::erdos_renyi;
    if (name == "grid2d" || name == "grid") return TopologySpec::Kind::grid2d;
    if (name == "diluted_grid" || name == "dilgrid") return TopologySpec::Kind::diluted_grid;
    if (name == "custom") return TopologySpec::Kind::custom;
    throw std::invalid_argument("unknown topology '" + name + "'");
}

namespace {

EdgeList grid_edges(int n) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (side * side != n)
        throw std::invalid_argument("grid2d: n must be a perfect square");
    EdgeList edges;
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            const int v = r * side + c;
            if (c + 1 < side) edges.emplace_back(v, v + 1);
            if (r + 1 < side) edges.emplace_back(v, v + side);
        }
    return edges;
}

}  // namespace

EdgeList generate_topology(const TopologySpec& spec, int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_topology: n must be >= 2");
    Rng rng(seed);
    switch (spec.kind) {
        case TopologySpec::Kind::dimers: {
            if (n % 2 != 0) throw std::invalid_argument("dimers: n must be even");
            std::vector<int> perm(static_cast<std::size_t>(n));
            std::iota(perm.begin(), perm.end(), 0);
            for (int i = n - 1; i > 0; --i)
                std::swap(perm[static_cast<std::size_t>(i)],
                          perm[rng.uniform_int(static_cast<std::uint64_t>(i + 1))]);
            EdgeList edges;
            for (int t = 0; t < n / 2; ++t) {
                int a = perm[static_cast<std::size_t>(2 * t)];
                int b = perm[static_cast<std::size_t>(2 * t + 1)];
                edges.emplace_back(std::min(a, b), std::max(a, b));
            }
            return edges;
        }
        case TopologySpec::Kind::star: {
            EdgeList edges;
            for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
            return edges;
        }
        case TopologySpec::Kind::erdos_renyi: {
            const double p = spec.avg_degree / static_cast<double>(n - 1);
            EdgeList edges;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (rng.uniform() < p) edges.emplace_back(i, j);
            return edges;
        }
        case TopologySpec::Kind::grid2d:
            return grid_edges(n);
        case TopologySpec::Kind::diluted_grid: {
            EdgeList edges;
            for (const auto& e : grid_edges(n))
                if (rng.uniform() >= spec.dilution) edges.push_back(e);
            return edges;
        }
        case TopologySpec::Kind::custom:
            throw std::invalid_argument("custom topologies are built directly, not generated");
    }
    throw std::logic_error("unreachable");
}

IsingInstance IsingInstance::zeros(int n) {
    IsingInstance inst;
    inst.n_nodes = n;
    inst.couplings.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    inst.fields.assign(static_cast<std::size_t>(n), 0.0);
    return inst;
}

EdgeList IsingInstance::edge_list() const {
    EdgeList out;
    for (int i = 0; i < n_nodes; ++i)
        for (int j = i + 1; j < n_nodes; ++j)
            if (coupling(i, j) != 0.0) out.emplace_back(i, j);
    return out;
}

IsingInstance assign_couplings(int n, const EdgeList& edges, CouplingMode mode, double beta,
                               std::uint64_t seed, const std::string& topology_tag) {
    if (beta <= 0.0) throw std::invalid_argument("assign_couplings: beta must be > 0");
    IsingInstance inst = IsingInstance::zeros(n);
    inst.topology_tag = topology_tag;
    inst.seed = seed;
    Rng rng(mix_seed(seed, 1));
    for (const auto& [i, j] : edges) {
        double w = beta;
        if (mode == CouplingMode::bimodal && rng.uniform() < 0.5) w = -beta;
        inst.set_coupling(i, j, w);
    }
    return inst;
}

SampleMatrix gibbs_sample(const IsingInstance& inst, std::int64_t n_keep, int burn_in, int thin,
                          std::uint64_t seed) {
    if (n_keep < 1) throw std::invalid_argument("gibbs_sample: n_keep must be >= 1");
    if (thin < 1) thin = 1;
    const int n = inst.n_nodes;
    // Neighbour lists; most benchmark graphs are sparse.
    std::vector<std::vector<std::pair<int, double>>> nbr(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i && inst.coupling(i, j) != 0.0)
                nbr[static_cast<std::size_t>(i)].emplace_back(j, inst.coupling(i, j));

    Rng rng(mix_seed(seed, 2));
    std::vector<int> s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = rng.coin() ? 1 : -1;

    auto sweep = [&] {
        for (int i = 0; i < n; ++i) {
            double field = inst.fields[static_cast<std::size_t>(i)];
            for (const auto& [j, w] : nbr[static_cast<std::size_t>(i)])
                field += w * s[static_cast<std::size_t>(j)];
            // P(S_i = +1 | rest) = 1 / (1 + exp(-2 field))
            const double p = 1.0 / (1.0 + std::exp(-2.0 * field));
            s[static_cast<std::size_t>(i)] = rng.uniform() < p ? 1 : -1;
        }
    };

    for (int t = 0; t < burn_in; ++t) sweep();
    SampleMatrix out = SampleMatrix::zeros(n_keep, n);
    for (std::int64_t r = 0; r < n_keep; ++r) {
        for (int t = 0; t < thin; ++t) sweep();
        for (int i = 0; i < n; ++i) out.set_spin(r, i, s[static_cast<std::size_t>(i)]);
    }
    return out;
}

SampleMatrix gibbs_sample(const IsingInstance& inst, std::int64_t n_keep, std::uint64_t seed) {
    return gibbs_sample(inst, n_keep, 1000, 10, seed);
}

SampleMatrix exact_sample_small(const IsingInstance& inst, std::int64_t n_draws,
                                std::uint64_t seed) {
    const int n = inst.n_nodes;
    if (n > 20) throw std::invalid_argument("exact_sample_small: n must be <= 20");
    const std::size_t n_states = std::size_t{1} << n;
    const EdgeList edges = inst.edge_list();

    std::vector<double> logw(n_states);
    double mx = -1e300;
    for (std::size_t st = 0; st < n_states; ++st) {
        auto spin = [&](int i) { return (st >> i) & 1u ? 1.0 : -1.0; };
        double e = 0.0;
        for (const auto& [i, j] : edges) e += inst.coupling(i, j) * spin(i) * spin(j);
        for (int i = 0; i < n; ++i) e += inst.fields[static_cast<std::size_t>(i)] * spin(i);
        logw[st] = e;
        mx = std::max(mx, e);
    }
    std::vector<double> cdf(n_states);
    double acc = 0.0;
    for (std::size_t st = 0; st < n_states; ++st) {
        acc += std::exp(logw[st] - mx);
        cdf[st] = acc;
    }

    Rng rng(mix_seed(seed, 3));
    SampleMatrix out = SampleMatrix::zeros(n_draws, n);
    for (std::int64_t r = 0; r < n_draws; ++r) {
        const double u = rng.uniform() * acc;
        const std::size_t st = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        for (int i = 0; i < n; ++i) out.set_spin(r, i, (st >> i) & 1u ? 1 : -1);
    }
    return out;
}

SampleMatrix hide_nodes(const SampleMatrix& data, const std::vector<int>& visible) {
    if (visible.empty()) throw std::invalid_argument("hide_nodes: visible set must be non-empty");
    for (int v : visible)
        if (v < 0 || v >= data.n_nodes)
            throw std::invalid_argument("hide_nodes: index out of range");
    SampleMatrix out = SampleMatrix::zeros(data.n_samples, static_cast<int>(visible.size()));
    for (std::int64_t r = 0; r < data.n_samples; ++r)
        for (std::size_t c = 0; c < visible.size(); ++c)
            out.set_spin(r, static_cast<int>(c), data.spin(r, visible[c]));
    return out;
}

std::string instance_to_json(const IsingInstance& inst) {
    nlohmann::json j;
    j["n"] = inst.n_nodes;
    j["topology"] = inst.topology_tag;
    j["seed"] = inst.seed;
    j["fields"] = inst.fields;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : inst.edge_list())
        edges.push_back({{"i", a}, {"j", b}, {"w", inst.coupling(a, b)}});
    j["edges"] = edges;
    return j.dump(2);
}

IsingInstance instance_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    IsingInstance inst = IsingInstance::zeros(j.at("n").get<int>());
    inst.topology_tag = j.value("topology", "custom");
    inst.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("fields")) inst.fields = j.at("fields").get<std::vector<double>>();
    if (static_cast<int>(inst.fields.size()) != inst.n_nodes)
        throw std::invalid_argument("instance_from_json: fields length mismatch");
    for (const auto& e : j.at("edges"))
        inst.set_coupling(e.at("i").get<int>(), e.at("j").get<int>(), e.at("w").get<double>());
    return inst;
}

}  // namespace isingms
