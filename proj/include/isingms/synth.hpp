#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isingms/recovery.hpp"
#include "isingms/sample_matrix.hpp"

namespace isingms {

struct TopologySpec {
    enum class Kind { dimers, star, erdos_renyi, grid2d, diluted_grid, custom };
    Kind kind = Kind::dimers;
    double avg_degree = 3.0;  // Erdos-Renyi mean degree c
    double dilution = 0.3;    // fraction of grid edges removed
};

const char* topology_name(TopologySpec::Kind k);
TopologySpec::Kind topology_from_name(const std::string& name);

// Deterministic edge set for the requested topology on n nodes.
//  dimers:       a random perfect matching (n even)
//  star:         node 0 connected to all others
//  erdos_renyi:  each pair included independently with probability c/(n-1)
//  grid2d:       L x L nearest-neighbour grid (n = L^2), open boundaries
//  diluted_grid: grid2d with each edge removed independently w.p. dilution
EdgeList generate_topology(const TopologySpec& spec, int n, std::uint64_t seed);

// Ising system used to generate benchmark data.
struct IsingInstance {
    int n_nodes = 0;
    std::vector<double> couplings;  // n x n symmetric, zero diagonal
    std::vector<double> fields;     // length n
    std::string topology_tag = "custom";
    std::uint64_t seed = 0;

    double coupling(int i, int j) const {
        return couplings[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_nodes) +
                         static_cast<std::size_t>(j)];
    }
    void set_coupling(int i, int j, double v) {
        couplings[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_nodes) +
                  static_cast<std::size_t>(j)] = v;
        couplings[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_nodes) +
                  static_cast<std::size_t>(i)] = v;
    }
    EdgeList edge_list() const;

    static IsingInstance zeros(int n);
};

enum class CouplingMode { bimodal, ferromagnetic };

// bimodal: each edge +-beta with probability 1/2; ferromagnetic: all +beta.
// Fields default to zero and can be overwritten on the returned instance.
IsingInstance assign_couplings(int n, const EdgeList& edges, CouplingMode mode, double beta,
                               std::uint64_t seed, const std::string& topology_tag = "custom");

// Equilibrium samples by single-site Gibbs sweeps: burn_in sweeps discarded,
// then every thin-th sweep kept until n_keep rows are collected.
SampleMatrix gibbs_sample(const IsingInstance& inst, std::int64_t n_keep, int burn_in, int thin,
                          std::uint64_t seed);
SampleMatrix gibbs_sample(const IsingInstance& inst, std::int64_t n_keep, std::uint64_t seed);

// I.i.d. draws from the exactly enumerated Boltzmann distribution (n <= 20).
SampleMatrix exact_sample_small(const IsingInstance& inst, std::int64_t n_draws,
                                std::uint64_t seed);

// Column projection onto the visible nodes, in the given order.
SampleMatrix hide_nodes(const SampleMatrix& data, const std::vector<int>& visible);

// JSON round trip for instances: n, topology, seed, fields, weighted edges.
std::string instance_to_json(const IsingInstance& inst);
IsingInstance instance_from_json(const std::string& text);

}  // namespace isingms
