#include "codesign/codesign.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "codesign/harness.hpp"

struct cds_topology {
    codesign::CouplingGraph graph;
};

struct cds_circuit {
    codesign::Circuit circuit;
};

namespace {

thread_local std::string g_last_error;

cds_status status_of(codesign::ErrorCode c) {
    using codesign::ErrorCode;
    switch (c) {
    case ErrorCode::Config:
        return CDS_CONFIG;
    case ErrorCode::SynthesisFailure:
        return CDS_SYNTHESIS;
    case ErrorCode::NumericalInstability:
    case ErrorCode::NotUnitary:
        return CDS_NUMERICAL;
    case ErrorCode::Io:
        return CDS_IO;
    default:
        return CDS_INVALID_ARGUMENT;
    }
}

template <class F>
cds_status guarded(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const codesign::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return CDS_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CDS_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return CDS_INTERNAL;
    }
}

cds_status null_arg(const char* what) {
    g_last_error = std::string("null argument: ") + what;
    return CDS_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

codesign::DurationTable durations_or_default(const char* json) {
    return json ? codesign::durations_from_json(json) : codesign::DurationTable{};
}

void fill_metrics(const codesign::CircuitMetrics& m, cds_metrics* out) {
    out->total_2q = m.total_2q;
    out->critical_2q = m.critical_2q;
    out->total_swaps = m.total_swaps;
    out->critical_swaps = m.critical_swaps;
    out->weighted_duration = m.weighted_duration;
    out->total_duration = m.total_duration;
}

} // namespace

extern "C" {

const char* cds_version(void) { return "0.1.0"; }

const char* cds_last_error_message(void) { return g_last_error.c_str(); }

void cds_free_string(char* s) { std::free(s); }

cds_status cds_topology_create(const char* spec, cds_topology** out) {
    if (!spec || !out)
        return null_arg("spec/out");
    return guarded([&] {
        *out = new cds_topology{codesign::make_topology(spec)};
        return CDS_OK;
    });
}

cds_status cds_topology_from_edge_list(const char* text, cds_topology** out) {
    if (!text || !out)
        return null_arg("text/out");
    return guarded([&] {
        *out = new cds_topology{codesign::from_edge_list(text)};
        return CDS_OK;
    });
}

void cds_topology_free(cds_topology* t) { delete t; }

cds_status cds_topology_stats_get(const cds_topology* t, cds_topology_stats* out) {
    if (!t || !out)
        return null_arg("topology/out");
    return guarded([&] {
        auto s = codesign::stats(t->graph);
        out->num_qubits = t->graph.size();
        out->num_edges = static_cast<int>(t->graph.edges().size());
        out->diameter = s.diameter;
        out->avg_distance = s.avg_distance;
        out->avg_connectivity = s.avg_connectivity;
        out->avg_distance_distinct = s.avg_distance_distinct;
        return CDS_OK;
    });
}

cds_status cds_topology_edge_list(const cds_topology* t, char** out) {
    if (!t || !out)
        return null_arg("topology/out");
    return guarded([&] {
        *out = dup_string(codesign::to_edge_list(t->graph));
        return CDS_OK;
    });
}

cds_status cds_benchmark_generate(const char* family, int width, uint64_t seed, int trotter_steps, int qaoa_layers,
                                  cds_circuit** out) {
    if (!family || !out)
        return null_arg("family/out");
    return guarded([&] {
        codesign::BenchmarkSpec spec{codesign::parse_family(family), width, seed, trotter_steps, qaoa_layers};
        *out = new cds_circuit{codesign::generate(spec)};
        return CDS_OK;
    });
}

cds_status cds_circuit_from_text(const char* text, cds_circuit** out) {
    if (!text || !out)
        return null_arg("text/out");
    return guarded([&] {
        *out = new cds_circuit{codesign::from_text(text)};
        return CDS_OK;
    });
}

cds_status cds_circuit_to_text(const cds_circuit* c, char** out) {
    if (!c || !out)
        return null_arg("circuit/out");
    return guarded([&] {
        *out = dup_string(codesign::to_text(c->circuit));
        return CDS_OK;
    });
}

void cds_circuit_free(cds_circuit* c) { delete c; }

cds_status cds_circuit_width(const cds_circuit* c, int* out) {
    if (!c || !out)
        return null_arg("circuit/out");
    *out = c->circuit.width();
    return CDS_OK;
}

cds_status cds_circuit_metrics(const cds_circuit* c, const char* durations_json, cds_metrics* out) {
    if (!c || !out)
        return null_arg("circuit/out");
    return guarded([&] {
        fill_metrics(codesign::metrics(c->circuit, durations_or_default(durations_json)), out);
        return CDS_OK;
    });
}

void cds_transpile_options_init(cds_transpile_options* opt) {
    if (!opt)
        return;
    opt->basis = "cnot";
    opt->seed = 0;
    opt->trials = 20;
    opt->durations_json = nullptr;
    opt->f_iswap = 0.99;
    opt->synthesize = 1;
    opt->peephole = 0;
    opt->swap_mode = CDS_SWAP_WEIGHTED;
}

cds_status cds_transpile(const cds_circuit* c, const cds_topology* t, const cds_transpile_options* opt,
                         cds_transpile_result* out, cds_circuit** out_circuit) {
    if (!c || !t || !opt || !out || !opt->basis)
        return null_arg("circuit/topology/options/out/basis");
    return guarded([&] {
        if (opt->trials < 1)
            throw codesign::Error(codesign::ErrorCode::InvalidArgument, "trials must be >= 1");
        if (!(opt->f_iswap > 0.0 && opt->f_iswap <= 1.0))
            throw codesign::Error(codesign::ErrorCode::InvalidArgument, "f_iswap must be in (0, 1]");
        codesign::PipelineOptions po;
        po.routing.trials = opt->trials;
        po.translate.synthesize = opt->synthesize != 0;
        po.translate.peephole = opt->peephole != 0;
        po.translate.swap_mode = opt->swap_mode == CDS_SWAP_ON_2Q_CRITICAL ? codesign::SwapCriticalMode::OnTwoQubitCritical
                                                                           : codesign::SwapCriticalMode::SwapWeighted;
        po.translate.optimizer.seed = opt->seed;
        po.f_iswap = opt->f_iswap;
        codesign::Circuit translated(0);
        auto r = codesign::run_pipeline(c->circuit, t->graph, codesign::parse_basis(opt->basis),
                                        durations_or_default(opt->durations_json), opt->seed, po,
                                        out_circuit ? &translated : nullptr);
        fill_metrics(r.metrics, &out->metrics);
        out->decomp_fidelity = r.decomp_fidelity;
        out->modeled_fidelity = r.modeled_fidelity;
        out->num_blocks = r.num_blocks;
        if (out_circuit)
            *out_circuit = new cds_circuit{std::move(translated)};
        return CDS_OK;
    });
}

cds_status cds_suite_run(const char* config_json, const char* output_prefix, cds_suite_summary* out) {
    if (!config_json)
        return null_arg("config_json");
    return guarded([&] {
        auto cfg = codesign::ExperimentConfig::from_json(config_json);
        if (output_prefix)
            cfg.output = output_prefix;
        auto s = codesign::run_suite(cfg);
        if (out) {
            out->executed = s.executed;
            out->skipped = s.skipped;
            out->failed = 0;
            for (const auto& r : s.records)
                if (!r.error.empty())
                    ++out->failed;
        }
        for (const auto& r : s.records)
            if (!r.error.empty()) {
                g_last_error = r.key() + ": " + r.error;
                return CDS_PARTIAL;
            }
        return CDS_OK;
    });
}

cds_status cds_suite_report(const char* jsonl_path, const char* plot_dir, char** tables_out) {
    if (!jsonl_path)
        return null_arg("jsonl_path");
    return guarded([&] {
        auto records = codesign::load_jsonl(jsonl_path);
        std::string tables = codesign::report_tables(records);
        if (plot_dir)
            codesign::report_plotdata(records, plot_dir);
        if (tables_out)
            *tables_out = dup_string(tables);
        return CDS_OK;
    });
}

void cds_fig9_options_init(cds_fig9_options* opt) {
    if (!opt)
        return;
    static const double kF[] = {0.99};
    static const int kRoots[] = {2, 3, 4, 5};
    opt->n_samples = 50;
    opt->f_iswap = kF;
    opt->num_f_iswap = 1;
    opt->roots = kRoots;
    opt->num_roots = 4;
    opt->k_max = 6;
    opt->seed = 0;
    opt->restarts = 8;
    opt->threads = 0;
}

cds_status cds_fig9(const cds_fig9_options* opt, char** csv_out) {
    if (!opt || !csv_out || !opt->f_iswap || !opt->roots)
        return null_arg("options/csv_out");
    return guarded([&] {
        if (opt->num_f_iswap < 1 || opt->num_roots < 1 || opt->restarts < 1)
            throw codesign::Error(codesign::ErrorCode::InvalidArgument, "empty f_iswap/roots or restarts < 1");
        codesign::Fig9Config cfg;
        cfg.n_samples = opt->n_samples;
        cfg.f_iswap.assign(opt->f_iswap, opt->f_iswap + opt->num_f_iswap);
        cfg.roots.assign(opt->roots, opt->roots + opt->num_roots);
        for (int n : cfg.roots)
            if (n < 1)
                throw codesign::Error(codesign::ErrorCode::InvalidArgument, "roots must be >= 1");
        cfg.k_max = opt->k_max;
        cfg.seed = opt->seed;
        cfg.optimizer.restarts = opt->restarts;
        cfg.optimizer.seed = opt->seed;
        cfg.threads = opt->threads;
        *csv_out = dup_string(codesign::fig9_study(cfg).to_csv());
        return CDS_OK;
    });
}

} // extern "C"
