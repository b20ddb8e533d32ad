// Exercises the shared library through the C header only.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "codesign/codesign.h"

namespace fs = std::filesystem;

TEST(CApi, TopologyStats) {
    cds_topology* t = nullptr;
    ASSERT_EQ(cds_topology_create("square:4,4", &t), CDS_OK);
    cds_topology_stats s{};
    ASSERT_EQ(cds_topology_stats_get(t, &s), CDS_OK);
    EXPECT_EQ(s.num_qubits, 16);
    EXPECT_EQ(s.num_edges, 24);
    EXPECT_EQ(s.diameter, 6);
    EXPECT_DOUBLE_EQ(s.avg_distance, 2.5);
    EXPECT_DOUBLE_EQ(s.avg_connectivity, 3.0);

    char* edges = nullptr;
    ASSERT_EQ(cds_topology_edge_list(t, &edges), CDS_OK);
    cds_topology* u = nullptr;
    ASSERT_EQ(cds_topology_from_edge_list(edges, &u), CDS_OK);
    cds_topology_stats s2{};
    ASSERT_EQ(cds_topology_stats_get(u, &s2), CDS_OK);
    EXPECT_EQ(s2.num_edges, 24);
    cds_free_string(edges);
    cds_topology_free(u);
    cds_topology_free(t);
}

TEST(CApi, ErrorsSetMessage) {
    cds_topology* t = nullptr;
    EXPECT_EQ(cds_topology_create("corral:8,1,4", &t), CDS_INVALID_ARGUMENT);
    EXPECT_EQ(t, nullptr);
    EXPECT_NE(std::strstr(cds_last_error_message(), "InvalidStride"), nullptr);
    EXPECT_EQ(cds_topology_create(nullptr, &t), CDS_INVALID_ARGUMENT);
    cds_circuit* c = nullptr;
    EXPECT_EQ(cds_circuit_from_text("qubits 2\nCNOT 0 7\n", &c), CDS_INVALID_ARGUMENT);
    EXPECT_EQ(cds_suite_run("{", nullptr, nullptr), CDS_CONFIG);
}

TEST(CApi, CircuitTextAndMetrics) {
    cds_circuit* c = nullptr;
    ASSERT_EQ(cds_benchmark_generate("ghz", 5, 0, 1, 1, &c), CDS_OK);
    int w = 0;
    ASSERT_EQ(cds_circuit_width(c, &w), CDS_OK);
    EXPECT_EQ(w, 5);
    cds_metrics m{};
    ASSERT_EQ(cds_circuit_metrics(c, nullptr, &m), CDS_OK);
    EXPECT_EQ(m.total_2q, 4);
    EXPECT_EQ(m.critical_2q, 4);
    char* text = nullptr;
    ASSERT_EQ(cds_circuit_to_text(c, &text), CDS_OK);
    cds_circuit* d = nullptr;
    ASSERT_EQ(cds_circuit_from_text(text, &d), CDS_OK);
    char* again = nullptr;
    ASSERT_EQ(cds_circuit_to_text(d, &again), CDS_OK);
    EXPECT_STREQ(text, again);
    cds_free_string(text);
    cds_free_string(again);
    cds_circuit_free(c);
    cds_circuit_free(d);
}

TEST(CApi, Transpile) {
    cds_topology* t = nullptr;
    ASSERT_EQ(cds_topology_create("path:3", &t), CDS_OK);
    cds_circuit* c = nullptr;
    ASSERT_EQ(cds_circuit_from_text("qubits 3\nCNOT 0 1\nCNOT 1 2\nCNOT 0 2\n", &c), CDS_OK);
    cds_transpile_options opt;
    cds_transpile_options_init(&opt);
    opt.basis = "cnot";
    cds_transpile_result r{};
    cds_circuit* out = nullptr;
    ASSERT_EQ(cds_transpile(c, t, &opt, &r, &out), CDS_OK) << cds_last_error_message();
    // A triangle of interactions on a path needs at least one SWAP.
    EXPECT_GE(r.metrics.total_swaps, 1);
    EXPECT_GE(r.metrics.total_2q, 3);
    EXPECT_NEAR(r.decomp_fidelity, 1.0, 1e-9);
    ASSERT_NE(out, nullptr);
    cds_circuit_free(out);

    opt.basis = "warp";
    EXPECT_EQ(cds_transpile(c, t, &opt, &r, nullptr), CDS_CONFIG);
    opt.basis = "cnot";
    opt.durations_json = "{\"iswap\": -2}";
    EXPECT_EQ(cds_transpile(c, t, &opt, &r, nullptr), CDS_CONFIG);
    cds_circuit_free(c);
    cds_topology_free(t);
}

TEST(CApi, SuiteRunAndReport) {
    fs::path dir = fs::temp_directory_path() / "codesign_capi_suite";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const char* cfg = R"({"topologies": ["square:3,3"], "benchmarks": ["ghz", "cdkm"], "widths": [5],
                          "bases": ["cnot"], "seeds": [0]})";
    std::string prefix = (dir / "r").string();
    cds_suite_summary s{};
    EXPECT_EQ(cds_suite_run(cfg, prefix.c_str(), &s), CDS_PARTIAL);
    EXPECT_EQ(s.executed, 2);
    EXPECT_EQ(s.failed, 1);
    char* tables = nullptr;
    ASSERT_EQ(cds_suite_report((prefix + ".jsonl").c_str(), (dir / "plots").string().c_str(), &tables), CDS_OK);
    EXPECT_NE(std::strstr(tables, "ghz"), nullptr);
    cds_free_string(tables);
    EXPECT_TRUE(fs::exists(dir / "plots" / "ratios.csv"));
    EXPECT_EQ(cds_suite_report((dir / "missing.jsonl").string().c_str(), nullptr, nullptr), CDS_IO);
}

TEST(CApi, Fig9) {
    cds_fig9_options opt;
    cds_fig9_options_init(&opt);
    opt.n_samples = 2;
    opt.k_max = 3;
    char* csv = nullptr;
    ASSERT_EQ(cds_fig9(&opt, &csv), CDS_OK);
    EXPECT_EQ(std::strncmp(csv, "kind,f_iswap,root,k,value", 25), 0);
    cds_free_string(csv);
    opt.n_samples = 0;
    EXPECT_EQ(cds_fig9(&opt, &csv), CDS_INVALID_ARGUMENT);
}
