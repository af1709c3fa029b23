// Command-line front end: pairwise Bayesian recovery of sparse Ising
// interaction graphs, synthetic benchmarks, rolling-window recovery and
// windowed correlation statistics.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isingms/io.hpp"
#include "isingms/metrics.hpp"
#include "isingms/parallel.hpp"
#include "isingms/plm.hpp"
#include "isingms/recovery.hpp"
#include "isingms/rng.hpp"
#include "isingms/sample_matrix.hpp"
#include "isingms/synth.hpp"
#include "isingms/windows.hpp"

namespace fs = std::filesystem;
using namespace isingms;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

Encoding parse_encoding(const std::string& s) {
    if (s == "pm1") return Encoding::pm1;
    if (s == "01" || s == "zero_one") return Encoding::zero_one;
    throw CLI::ValidationError("--encoding", "must be pm1 or 01");
}

// --prior accepts: flat | fixed=E | selfcon=E0 | ndep=RG
PriorMode parse_prior(const std::string& s) {
    if (s == "flat") return PriorMode::flat();
    const auto eq = s.find('=');
    const std::string head = s.substr(0, eq);
    double value = 0.0;
    if (eq != std::string::npos) value = std::stod(s.substr(eq + 1));
    if (head == "fixed" && eq != std::string::npos) return PriorMode::fixed(value);
    if (head == "selfcon") return PriorMode::self_consistent(eq == std::string::npos ? 1.0 : value);
    if (head == "ndep" && eq != std::string::npos) return PriorMode::n_dependent(value);
    throw CLI::ValidationError("--prior", "must be flat, fixed=E, selfcon=E0 or ndep=RG");
}

std::optional<CorrectionMethod> parse_correction(const std::string& s) {
    if (s == "none") return std::nullopt;
    if (s == "avg") return CorrectionMethod::avg;
    if (s == "min") return CorrectionMethod::min;
    if (s == "prod") return CorrectionMethod::prod;
    throw CLI::ValidationError("--correct", "must be none, avg, min or prod");
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

std::vector<std::int64_t> parse_int64_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    return out;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    os << text;
}

double lambda_max_warning(const SampleMatrix& data) {
    std::vector<int> dropped;
    const double lmax = lambda_max(data, &dropped);
    for (int node : dropped)
        std::fprintf(stderr, "warning: node %d is frozen (|m| = 1), dropped from lambda_max\n",
                     node);
    return lmax;
}

std::string prior_label(const PriorMode& mode) {
    switch (mode.kind) {
        case PriorMode::Kind::flat: return "flat";
        case PriorMode::Kind::fixed: return "fixed=" + std::to_string(mode.value);
        case PriorMode::Kind::self_consistent: return "selfcon=" + std::to_string(mode.value);
        case PriorMode::Kind::n_dependent: return "ndep=" + std::to_string(mode.value);
    }
    return "?";
}

struct RecoverArgs {
    std::string input;
    std::string encoding = "pm1";
    std::string prior = "flat";
    std::string correct = "none";
    std::string out_dir = ".";
    int jobs = 0;
};

int run_recover(const RecoverArgs& args) {
    const int jobs = args.jobs > 0 ? args.jobs : default_jobs();
    const SampleMatrix data = ingest_csv_file(args.input, parse_encoding(args.encoding));
    const PriorMode mode = parse_prior(args.prior);
    const auto correction = parse_correction(args.correct);

    CacheRegistry registry;
    EpsilonTrace trace;
    ConfidenceGraph g = recover_with_mode(data, mode, &registry, jobs, &trace);
    if (correction)
        g = correct_graph(data, g, SparsityPrior{g.epsilon_used}, *correction, &registry, jobs);

    fs::create_directories(args.out_dir);
    {
        std::ofstream os(fs::path(args.out_dir) / "eta.csv");
        write_matrix_csv(g.eta, g.n_nodes, os);
    }
    write_text_file(fs::path(args.out_dir) / "edges.json", graph_to_json(g));
    nlohmann::json meta;
    meta["input"] = args.input;
    meta["n_samples"] = data.n_samples;
    meta["n_nodes"] = data.n_nodes;
    meta["prior"] = prior_label(mode);
    meta["correction"] = args.correct;
    meta["n_edges"] = g.edge_count();
    meta["epsilon_used"] = std::isinf(g.epsilon_used) ? nlohmann::json("inf")
                                                      : nlohmann::json(g.epsilon_used);
    if (mode.kind == PriorMode::Kind::self_consistent)
        meta["epsilon_trace"] = nlohmann::json::parse(trace_to_json(trace, g.epsilon_used));
    write_text_file(fs::path(args.out_dir) / "run.json", meta.dump(2));
    std::fprintf(stderr, "recovered %lld edges over %d nodes (N=%lld)\n",
                 static_cast<long long>(g.edge_count()), g.n_nodes,
                 static_cast<long long>(data.n_samples));
    return kExitOk;
}

struct BenchArgs {
    std::string topology = "dimers";
    int nodes = 64;
    double beta = 0.5;
    double avg_degree = 3.0;
    double dilution = 0.3;
    std::string coupling = "bimodal";
    std::string nsamples = "1000";
    int seeds = 20;
    std::uint64_t seed0 = 1;
    std::string methods = "ms:selfcon,plm:half";
    double hidden = 0.0;
    std::string correct = "none";
    std::string out_dir = ".";
    bool dump_data = false;
    std::string roc_ms;   // epsilon grid
    std::string roc_plm;  // lambda grid as fractions of lambda_max
    int jobs = 0;
};

int run_bench(const BenchArgs& args) {
    const int jobs = args.jobs > 0 ? args.jobs : default_jobs();
    TopologySpec spec;
    spec.kind = topology_from_name(args.topology);
    spec.avg_degree = args.avg_degree;
    spec.dilution = args.dilution;
    const CouplingMode mode =
        args.coupling == "ferro" ? CouplingMode::ferromagnetic : CouplingMode::bimodal;
    const auto n_list = parse_int64_list(args.nsamples);
    const auto correction = parse_correction(args.correct);

    std::vector<std::string> methods;
    {
        std::stringstream ss(args.methods);
        std::string tok;
        while (std::getline(ss, tok, ',')) methods.push_back(tok);
    }

    fs::create_directories(args.out_dir);
    std::ofstream os(fs::path(args.out_dir) / "metrics.csv");
    os << "topology,n,n_visible,N,seed,method,parameter,tp,fp,tn,fn,tpr,tnr,fpr,fnr,density\n";
    char buf[512];

    for (std::int64_t n_obs : n_list)
        for (int s = 0; s < args.seeds; ++s) {
            const std::uint64_t seed = mix_seed(args.seed0, static_cast<std::uint64_t>(s));
            const EdgeList edges = generate_topology(spec, args.nodes, seed);
            const IsingInstance inst =
                assign_couplings(args.nodes, edges, mode, args.beta, seed, args.topology);
            SampleMatrix data = gibbs_sample(inst, n_obs, seed);
            if (args.dump_data) {
                const std::string tag =
                    "N" + std::to_string(n_obs) + "_seed" + std::to_string(s);
                write_text_file(fs::path(args.out_dir) / ("instance_" + tag + ".json"),
                                instance_to_json(inst));
                write_csv_file(data, (fs::path(args.out_dir) / ("data_" + tag + ".csv")).string());
            }

            std::vector<int> visible(static_cast<std::size_t>(args.nodes));
            for (int i = 0; i < args.nodes; ++i) visible[static_cast<std::size_t>(i)] = i;
            EdgeList truth = edges;
            if (args.hidden > 0.0) {
                // Keep a random subset of nodes; the ground truth restricts to
                // edges between visible nodes, relabeled to the projection.
                Rng rng(mix_seed(seed, 77));
                const int keep = std::max(
                    2, static_cast<int>(std::lround(args.nodes * (1.0 - args.hidden))));
                for (int i = args.nodes - 1; i > 0; --i)
                    std::swap(visible[static_cast<std::size_t>(i)],
                              visible[rng.uniform_int(static_cast<std::uint64_t>(i + 1))]);
                visible.resize(static_cast<std::size_t>(keep));
                std::sort(visible.begin(), visible.end());
                std::vector<int> inv(static_cast<std::size_t>(args.nodes), -1);
                for (int i = 0; i < keep; ++i) inv[static_cast<std::size_t>(visible[i])] = i;
                truth.clear();
                for (const auto& [a, b] : edges)
                    if (inv[static_cast<std::size_t>(a)] >= 0 &&
                        inv[static_cast<std::size_t>(b)] >= 0)
                        truth.emplace_back(inv[static_cast<std::size_t>(a)],
                                           inv[static_cast<std::size_t>(b)]);
                data = hide_nodes(data, visible);
            }

            // Optional ROC sweeps alongside the point methods.
            auto dump_roc = [&](const char* kind, const std::vector<RocPoint>& points) {
                const fs::path path = fs::path(args.out_dir) /
                                      ("roc_" + std::string(kind) + "_N" + std::to_string(n_obs) +
                                       "_seed" + std::to_string(s) + ".csv");
                std::ofstream ros(path);
                write_roc_csv(points, ros);
            };
            if (!args.roc_ms.empty()) {
                std::vector<double> grid;
                std::stringstream ss(args.roc_ms);
                std::string tok;
                while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
                dump_roc("ms", roc_sweep(data, truth, RocMethod::ms_over_epsilon, grid, jobs));
            }
            if (!args.roc_plm.empty()) {
                std::vector<double> grid;
                std::stringstream ss(args.roc_plm);
                std::string tok;
                const double lmax = lambda_max_warning(data);
                while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok) * lmax);
                dump_roc("plm", roc_sweep(data, truth, RocMethod::plm_over_lambda, grid, jobs));
            }

            for (const std::string& method : methods) {
                EdgeList predicted;
                double parameter = 0.0;
                if (method.rfind("ms", 0) == 0) {
                    const PriorMode pm =
                        method == "ms" ? PriorMode::flat() : parse_prior(method.substr(3));
                    CacheRegistry registry;
                    ConfidenceGraph g = recover_with_mode(data, pm, &registry, jobs);
                    if (correction)
                        g = correct_graph(data, g, SparsityPrior{g.epsilon_used}, *correction,
                                          &registry, jobs);
                    parameter = g.epsilon_used;
                    predicted = g.edge_list();
                } else if (method.rfind("plm", 0) == 0) {
                    double lambda;
                    if (method == "plm" || method == "plm:half")
                        lambda = 0.5 * lambda_max_warning(data);
                    else
                        lambda = std::stod(method.substr(method.find('=') + 1));
                    const PlmFit fit = plm_l1_fit(data, lambda, 5000, 1e-9, jobs);
                    parameter = lambda;
                    predicted = fit.converged ? plm_graph(fit) : plm_graph(fit);
                } else {
                    throw CLI::ValidationError("--methods", "unknown method '" + method + "'");
                }
                const RecoveryMetrics m =
                    metrics(truth, predicted, static_cast<int>(visible.size()));
                const double total_pairs =
                    0.5 * static_cast<double>(visible.size()) *
                    static_cast<double>(visible.size() - 1);
                std::snprintf(buf, sizeof buf,
                              "%s,%d,%zu,%lld,%d,%s,%.17g,%lld,%lld,%lld,%lld,%.17g,%.17g,%.17g,"
                              "%.17g,%.17g\n",
                              args.topology.c_str(), args.nodes, visible.size(),
                              static_cast<long long>(n_obs), s, method.c_str(), parameter,
                              static_cast<long long>(m.tp), static_cast<long long>(m.fp),
                              static_cast<long long>(m.tn), static_cast<long long>(m.fn), m.tpr,
                              m.tnr, m.fpr, m.fnr,
                              static_cast<double>(predicted.size()) / total_pairs);
                os << buf;
            }
        }
    return kExitOk;
}

struct WindowsArgs {
    std::string input;
    std::string encoding = "pm1";
    std::string prior = "flat";
    std::int64_t window = 0;
    std::int64_t stride = 0;
    std::string out_dir = ".";
    bool dump_graphs = false;
    int jobs = 0;
};

int run_windows(const WindowsArgs& args) {
    const int jobs = args.jobs > 0 ? args.jobs : default_jobs();
    const SampleMatrix data = ingest_csv_file(args.input, parse_encoding(args.encoding));
    const std::int64_t stride = args.stride > 0 ? args.stride : args.window;
    const RollingRecovery roll =
        rolling_windows(data, args.window, stride, parse_prior(args.prior), jobs);

    fs::create_directories(args.out_dir);
    {
        std::ofstream os(fs::path(args.out_dir) / "sparsity.csv");
        os << "t_start,n_edges,bond_ratio\n";
        char buf[128];
        for (std::size_t w = 0; w < roll.starts.size(); ++w) {
            std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g\n",
                          static_cast<long long>(roll.starts[w]),
                          static_cast<long long>(roll.graphs[w].edge_count()),
                          roll.bond_ratio[w]);
            os << buf;
        }
    }
    {
        std::ofstream os(fs::path(args.out_dir) / "mean_eta.csv");
        write_matrix_csv(roll.mean_eta, data.n_nodes, os);
    }
    if (args.dump_graphs)
        for (std::size_t w = 0; w < roll.starts.size(); ++w)
            write_text_file(fs::path(args.out_dir) /
                                ("edges_" + std::to_string(roll.starts[w]) + ".json"),
                            graph_to_json(roll.graphs[w]));
    return kExitOk;
}

struct CorrArgs {
    std::string input;
    std::string encoding = "pm1";
    std::int64_t window = 0;
    std::string taus = "0,1";
    std::string out_dir = ".";
    bool dump_equal_time = false;
};

int run_corr(const CorrArgs& args) {
    const SampleMatrix data = ingest_csv_file(args.input, parse_encoding(args.encoding));
    const std::vector<int> taus = parse_int_list(args.taus);
    const WindowedStats stats = windowed_correlations(data, args.window, taus);

    fs::create_directories(args.out_dir);
    {
        std::ofstream os(fs::path(args.out_dir) / "delayed_rms.csv");
        os << "t_start,tau,c_diag,c_off\n";
        char buf[128];
        std::size_t k = 0;
        for (std::int64_t start : stats.starts)
            for (int tau : taus) {
                std::snprintf(buf, sizeof buf, "%lld,%d,%.17g,%.17g\n",
                              static_cast<long long>(start), tau, stats.c_diag[k],
                              stats.c_off[k]);
                os << buf;
                ++k;
            }
    }
    {
        std::ofstream os(fs::path(args.out_dir) / "equal_time_rms.csv");
        os << "t_start,connected_off\n";
        char buf[96];
        for (std::size_t w = 0; w < stats.starts.size(); ++w) {
            std::snprintf(buf, sizeof buf, "%lld,%.17g\n",
                          static_cast<long long>(stats.starts[w]), stats.connected_off[w]);
            os << buf;
        }
    }
    if (args.dump_equal_time)
        for (std::size_t w = 0; w < stats.starts.size(); ++w) {
            std::ofstream os(fs::path(args.out_dir) /
                             ("connected_" + std::to_string(stats.starts[w]) + ".csv"));
            write_matrix_csv(stats.equal_time[w], data.n_nodes, os);
        }
    return kExitOk;
}

struct TableArgs {
    std::int64_t samples = 0;
    std::string out_path = "table.csv";
    int jobs = 0;
};

int run_table(const TableArgs& args) {
    const int jobs = args.jobs > 0 ? args.jobs : default_jobs();
    std::ofstream os(args.out_path);
    if (!os) throw std::runtime_error("cannot write '" + args.out_path + "'");
    export_decision_table(args.samples, os, jobs);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse Ising graph recovery by pairwise Bayesian model selection"};
    app.require_subcommand(1);

    RecoverArgs rec;
    CLI::App* c_rec = app.add_subcommand("recover", "recover a graph from a sample CSV");
    c_rec->add_option("--input", rec.input, "CSV of binary observations")->required();
    c_rec->add_option("--encoding", rec.encoding, "pm1 or 01");
    c_rec->add_option("--prior", rec.prior, "flat | fixed=E | selfcon=E0 | ndep=RG");
    c_rec->add_option("--correct", rec.correct, "none | avg | min | prod");
    c_rec->add_option("--out", rec.out_dir, "output directory");
    c_rec->add_option("--jobs", rec.jobs, "worker threads (default: ISINGMS_JOBS or hardware)");

    BenchArgs bench;
    CLI::App* c_bench = app.add_subcommand("bench", "synthetic recovery benchmark");
    c_bench->add_option("--topology", bench.topology, "dimers|star|er|grid|dilgrid");
    c_bench->add_option("--nodes", bench.nodes, "number of nodes");
    c_bench->add_option("--beta", bench.beta, "coupling strength");
    c_bench->add_option("--avg-degree", bench.avg_degree, "Erdos-Renyi mean degree");
    c_bench->add_option("--dilution", bench.dilution, "diluted grid removal fraction");
    c_bench->add_option("--coupling", bench.coupling, "bimodal or ferro");
    c_bench->add_option("--nsamples", bench.nsamples, "comma-separated sample sizes");
    c_bench->add_option("--seeds", bench.seeds, "number of realisations");
    c_bench->add_option("--seed", bench.seed0, "base RNG seed");
    c_bench->add_option("--methods", bench.methods,
                        "comma list: ms:flat ms:selfcon=E0 ms:fixed=E ms:ndep=RG plm:half "
                        "plm:lambda=L");
    c_bench->add_option("--hidden", bench.hidden, "fraction of hidden nodes");
    c_bench->add_option("--correct", bench.correct, "correction applied to MS methods");
    c_bench->add_option("--out", bench.out_dir, "output directory");
    c_bench->add_flag("--dump-data", bench.dump_data,
                      "also write each instance JSON and sample CSV");
    c_bench->add_option("--roc-ms", bench.roc_ms,
                        "epsilon grid; writes a per-run MS ROC sweep CSV");
    c_bench->add_option("--roc-plm", bench.roc_plm,
                        "lambda grid as fractions of lambda_max; writes a PLM ROC sweep CSV");
    c_bench->add_option("--jobs", bench.jobs, "worker threads");

    WindowsArgs win;
    CLI::App* c_win = app.add_subcommand("windows", "rolling-window recovery");
    c_win->add_option("--input", win.input, "CSV of binary observations")->required();
    c_win->add_option("--encoding", win.encoding, "pm1 or 01");
    c_win->add_option("--prior", win.prior, "prior mode per window");
    c_win->add_option("--window", win.window, "window length")->required();
    c_win->add_option("--stride", win.stride, "window stride (default: window)");
    c_win->add_option("--out", win.out_dir, "output directory");
    c_win->add_flag("--dump-graphs", win.dump_graphs, "write per-window edge lists");
    c_win->add_option("--jobs", win.jobs, "worker threads");

    CorrArgs corr;
    CLI::App* c_corr = app.add_subcommand("corr", "windowed correlation statistics");
    c_corr->add_option("--input", corr.input, "CSV of binary observations")->required();
    c_corr->add_option("--encoding", corr.encoding, "pm1 or 01");
    c_corr->add_option("--window", corr.window, "window length")->required();
    c_corr->add_option("--tau", corr.taus, "comma-separated delays");
    c_corr->add_option("--out", corr.out_dir, "output directory");
    c_corr->add_flag("--dump-c", corr.dump_equal_time, "write per-window connected matrices");

    TableArgs table;
    CLI::App* c_table = app.add_subcommand("table", "export the decision table for one N");
    c_table->add_option("--samples", table.samples, "sample size N")->required();
    c_table->add_option("--out", table.out_path, "output CSV path");
    c_table->add_option("--jobs", table.jobs, "worker threads");

    try {
        app.parse(argc, argv);
        if (*c_rec) return run_recover(rec);
        if (*c_bench) return run_bench(bench);
        if (*c_win) return run_windows(win);
        if (*c_corr) return run_corr(corr);
        if (*c_table) return run_table(table);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const SaddleError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const QuadratureError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    }
    return kExitOk;
}
