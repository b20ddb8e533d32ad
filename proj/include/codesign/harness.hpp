#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codesign/transpile.hpp"

namespace codesign {

enum class SuiteMode { Transpile, Stats };

struct BenchmarkTemplate {
    Family family = Family::QV;
    int trotter_steps = 1;
    int qaoa_layers = 1;
};

struct ExperimentConfig {
    SuiteMode mode = SuiteMode::Transpile;
    std::vector<std::string> topologies;      // make_topology specs
    std::vector<BenchmarkTemplate> benchmarks;
    std::vector<int> widths;
    std::vector<std::string> bases;           // parse_basis names
    std::vector<std::uint64_t> seeds;
    DurationTable durations;
    double f_iswap = 0.99;
    int trials = 20;
    bool synthesize = false;                  // full local synthesis vs basis-gate counts only
    SwapCriticalMode swap_mode = SwapCriticalMode::SwapWeighted;
    bool peephole = false;
    std::string output;                       // prefix; writes <output>.csv and <output>.jsonl
    int threads = 0;                          // 0: CODESIGN_THREADS or hardware concurrency

    static ExperimentConfig from_json(const std::string& text); // throws Config errors
    void validate() const;
};

DurationTable durations_from_json(const std::string& text);
std::string durations_to_string(const DurationTable& d);

struct MetricsRecord {
    std::string topology;
    int topology_n = 0;
    std::string benchmark;
    int width = 0;
    std::string basis;
    std::uint64_t seed = 0;
    CircuitMetrics metrics;
    TopologyStats stats;
    double decomp_fidelity = 1.0;
    double modeled_fidelity = 1.0;
    double f_iswap = 0.0;
    std::string durations;
    std::string error;
    double wall_ms = 0.0; // excluded from determinism comparisons

    std::string key() const;
};

const std::vector<std::string>& csv_columns();
std::string to_csv_row(const MetricsRecord& r);
std::string to_json_line(const MetricsRecord& r);
MetricsRecord from_json_line(const std::string& line);
std::vector<MetricsRecord> load_jsonl(const std::string& path);

struct SuiteSummary {
    std::vector<MetricsRecord> records; // sorted by key, including resumed rows
    int executed = 0;
    int skipped = 0;
    int failed = 0;
};

int worker_count(int requested);
SuiteSummary run_suite(const ExperimentConfig& cfg);

std::string report_tables(const std::vector<MetricsRecord>& records);
// Writes one CSV per (benchmark, metric) plus ratios.csv into dir; returns file names.
std::vector<std::string> report_plotdata(const std::vector<MetricsRecord>& records, const std::string& dir);

struct Fig9Config {
    int n_samples = 50;
    std::vector<double> f_iswap{0.99};
    std::vector<int> roots{2, 3, 4, 5};
    int k_max = 6;
    std::uint64_t seed = 0;
    OptimizerConfig optimizer{};
    int threads = 0;
};

struct Fig9Result {
    std::vector<int> roots;
    std::vector<double> f_iswap;
    // mean decomposition infidelity, [root][k]
    std::vector<std::vector<double>> mean_decomp_infidelity;
    // mean best total infidelity, [f][root]
    std::vector<std::vector<double>> mean_total_infidelity;
    // (I_2 - I_n) / I_2 per [f][root]; NaN when n = 2 is not among the roots
    std::vector<std::vector<double>> improvement_vs_2;

    std::string to_csv() const;
};

Fig9Result fig9_study(const Fig9Config& cfg);

} // namespace codesign
