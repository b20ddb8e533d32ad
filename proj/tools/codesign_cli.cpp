// Command-line front end. Talks to the library only through codesign.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "codesign/codesign.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

struct CliError {
    int exit_code;
    std::string message;
};

int exit_code_for(cds_status s) {
    switch (s) {
    case CDS_OK:
        return kExitOk;
    case CDS_CONFIG:
        return kExitConfig;
    case CDS_PARTIAL:
        return kExitPartial;
    default:
        return kExitFailure;
    }
}

void check(cds_status s) {
    if (s != CDS_OK)
        throw CliError{exit_code_for(s), cds_last_error_message()};
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw CliError{kExitConfig, "cannot read " + path};
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text))
        throw CliError{kExitFailure, "cannot write " + path};
}

std::string take(char* s) {
    std::string out = s ? s : "";
    cds_free_string(s);
    return out;
}

struct TopologyArgs {
    std::string spec;
    std::string file;

    void add_to(CLI::App* app) {
        app->add_option("--topology", spec, "Topology spec, e.g. heavy-hex:84, hypercube:7:84, square:4,4");
        app->add_option("--topology-file", file, "Edge-list file ('n <count>' then 'u v' lines)");
    }

    cds_topology* open() const {
        if (spec.empty() == file.empty())
            throw CliError{kExitConfig, "exactly one of --topology or --topology-file is required"};
        cds_topology* t = nullptr;
        if (!file.empty())
            check(cds_topology_from_edge_list(read_file(file).c_str(), &t));
        else
            check(cds_topology_create(spec.c_str(), &t));
        return t;
    }
};

void print_metrics(const cds_metrics& m) {
    std::printf("total_2q %d\ncritical_2q %d\ntotal_swaps %d\ncritical_swaps %d\n", m.total_2q, m.critical_2q,
                m.total_swaps, m.critical_swaps);
    std::printf("weighted_duration %.17g\ntotal_duration %.17g\n", m.weighted_duration, m.total_duration);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topology and basis-gate co-design toolkit"};
    app.require_subcommand(1);

    // topo stats
    auto* topo = app.add_subcommand("topo", "Topology utilities");
    topo->require_subcommand(1);
    auto* topo_stats = topo->add_subcommand("stats", "Print diameter, average distance and connectivity");
    TopologyArgs topo_args;
    std::string topo_edges_out;
    topo_args.add_to(topo_stats);
    topo_stats->add_option("--out", topo_edges_out, "Also write the edge list to this file");

    // bench emit
    auto* bench = app.add_subcommand("bench", "Benchmark circuits");
    bench->require_subcommand(1);
    auto* bench_emit = bench->add_subcommand("emit", "Write a benchmark circuit in text form");
    std::string family;
    int width = 0;
    std::uint64_t seed = 0;
    int trotter_steps = 1, qaoa_layers = 1;
    std::string out_path;
    bench_emit->add_option("--family", family, "qv, qft, cdkm, qaoa, hamsim, ghz")->required();
    bench_emit->add_option("--width", width, "Number of qubits")->required();
    bench_emit->add_option("--seed", seed, "Generator seed");
    bench_emit->add_option("--trotter-steps", trotter_steps, "HAMSIM Trotter steps");
    bench_emit->add_option("--qaoa-layers", qaoa_layers, "QAOA layers");
    bench_emit->add_option("--out", out_path, "Output file (default stdout)");

    // transpile
    auto* tr = app.add_subcommand("transpile", "Layout, route and translate one circuit");
    TopologyArgs tr_topo;
    tr_topo.add_to(tr);
    std::string basis = "cnot", circuit_file, duration_table, tr_family;
    int tr_width = 0, trials = 20;
    std::uint64_t tr_seed = 0;
    double f_iswap = 0.99;
    bool counts_only = false, peephole = false;
    std::string tr_out;
    tr->add_option("--basis", basis, "cnot, sqiswap, iswap, syc, root:N");
    tr->add_option("--circuit", circuit_file, "Circuit text file");
    tr->add_option("--family", tr_family, "Generate a benchmark instead of reading --circuit");
    tr->add_option("--width", tr_width, "Benchmark width (with --family)");
    tr->add_option("--seed", tr_seed, "Benchmark and routing seed");
    tr->add_option("--trials", trials, "Routing trials");
    tr->add_option("--duration-table", duration_table, "JSON file with gate durations");
    tr->add_option("--f-iswap", f_iswap, "iSWAP fidelity for the fidelity model");
    tr->add_flag("--counts-only", counts_only, "Count basis gates without synthesizing local gates");
    tr->add_flag("--peephole", peephole, "Cancel back-to-back routing SWAPs");
    tr->add_option("--out", tr_out, "Write the translated circuit to this file");

    // suite
    auto* suite = app.add_subcommand("suite", "Experiment sweeps");
    suite->require_subcommand(1);
    auto* suite_run = suite->add_subcommand("run", "Run a sweep from a JSON config");
    std::string config_path, suite_out;
    suite_run->add_option("config", config_path, "Config JSON file")->required();
    suite_run->add_option("--out", suite_out, "Output prefix (overrides config)");
    auto* suite_report = suite->add_subcommand("report", "Print tables and write plot CSVs");
    std::string report_in, report_out;
    suite_report->add_option("results", report_in, "Results .jsonl file")->required();
    suite_report->add_option("--out", report_out, "Directory for plot-data CSVs");

    // fig9
    auto* fig9 = app.add_subcommand("fig9", "Fidelity study over fractional iSWAP roots");
    int samples = 50, k_max = 6, restarts = 8;
    std::vector<double> f_list{0.99};
    std::vector<int> roots{2, 3, 4, 5};
    std::uint64_t fig_seed = 0;
    std::string fig_out;
    fig9->add_option("--samples", samples, "Number of Haar samples");
    fig9->add_option("--f-iswap", f_list, "iSWAP fidelities")->delimiter(',');
    fig9->add_option("--roots", roots, "Roots n of iSWAP")->delimiter(',');
    fig9->add_option("--k-max", k_max, "Largest gate count");
    fig9->add_option("--restarts", restarts, "Optimizer restarts");
    fig9->add_option("--seed", fig_seed, "Sample seed");
    fig9->add_option("--out", fig_out, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (topo_stats->parsed()) {
            cds_topology* t = topo_args.open();
            cds_topology_stats s{};
            cds_status st = cds_topology_stats_get(t, &s);
            char* edges = nullptr;
            if (st == CDS_OK && !topo_edges_out.empty())
                st = cds_topology_edge_list(t, &edges);
            cds_topology_free(t);
            check(st);
            std::printf("qubits %d\nedges %d\ndiameter %d\navg_distance %.6f\navg_connectivity %.6f\n"
                        "avg_distance_distinct %.6f\n",
                        s.num_qubits, s.num_edges, s.diameter, s.avg_distance, s.avg_connectivity,
                        s.avg_distance_distinct);
            if (edges)
                write_output(topo_edges_out, take(edges));
        } else if (bench_emit->parsed()) {
            cds_circuit* c = nullptr;
            check(cds_benchmark_generate(family.c_str(), width, seed, trotter_steps, qaoa_layers, &c));
            char* text = nullptr;
            cds_status st = cds_circuit_to_text(c, &text);
            cds_circuit_free(c);
            check(st);
            write_output(out_path, take(text));
        } else if (tr->parsed()) {
            if (circuit_file.empty() == tr_family.empty())
                throw CliError{kExitConfig, "exactly one of --circuit or --family is required"};
            cds_circuit* c = nullptr;
            if (!circuit_file.empty())
                check(cds_circuit_from_text(read_file(circuit_file).c_str(), &c));
            else
                check(cds_benchmark_generate(tr_family.c_str(), tr_width, tr_seed, 1, 1, &c));
            cds_topology* t = nullptr;
            try {
                t = tr_topo.open();
            } catch (...) {
                cds_circuit_free(c);
                throw;
            }
            std::string durations = duration_table.empty() ? "" : read_file(duration_table);
            cds_transpile_options opt;
            cds_transpile_options_init(&opt);
            opt.basis = basis.c_str();
            opt.seed = tr_seed;
            opt.trials = trials;
            opt.f_iswap = f_iswap;
            opt.synthesize = counts_only ? 0 : 1;
            opt.peephole = peephole ? 1 : 0;
            opt.durations_json = duration_table.empty() ? nullptr : durations.c_str();
            cds_transpile_result res{};
            cds_circuit* out = nullptr;
            cds_status st = cds_transpile(c, t, &opt, &res, tr_out.empty() ? nullptr : &out);
            cds_circuit_free(c);
            cds_topology_free(t);
            check(st);
            print_metrics(res.metrics);
            std::printf("decomp_fidelity %.17g\nmodeled_fidelity %.17g\nblocks %d\n", res.decomp_fidelity,
                        res.modeled_fidelity, res.num_blocks);
            if (out) {
                char* text = nullptr;
                st = cds_circuit_to_text(out, &text);
                cds_circuit_free(out);
                check(st);
                write_output(tr_out, take(text));
            }
        } else if (suite_run->parsed()) {
            std::string cfg = read_file(config_path);
            cds_suite_summary sum{};
            cds_status st = cds_suite_run(cfg.c_str(), suite_out.empty() ? nullptr : suite_out.c_str(), &sum);
            if (st == CDS_OK || st == CDS_PARTIAL)
                std::printf("executed %d\nskipped %d\nfailed %d\n", sum.executed, sum.skipped, sum.failed);
            check(st);
        } else if (suite_report->parsed()) {
            char* tables = nullptr;
            check(cds_suite_report(report_in.c_str(), report_out.empty() ? nullptr : report_out.c_str(), &tables));
            std::cout << take(tables);
        } else if (fig9->parsed()) {
            cds_fig9_options opt;
            cds_fig9_options_init(&opt);
            opt.n_samples = samples;
            opt.f_iswap = f_list.data();
            opt.num_f_iswap = static_cast<int>(f_list.size());
            opt.roots = roots.data();
            opt.num_roots = static_cast<int>(roots.size());
            opt.k_max = k_max;
            opt.seed = fig_seed;
            opt.restarts = restarts;
            char* csv = nullptr;
            check(cds_fig9(&opt, &csv));
            write_output(fig_out, take(csv));
        }
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.exit_code;
    }
    return kExitOk;
}
