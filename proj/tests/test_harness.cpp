#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "codesign/harness.hpp"

using namespace codesign;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("codesign_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Drops the trailing wall_ms field from CSV rows.
std::string strip_timing_csv(const std::string& text) {
    std::stringstream in(text), out;
    std::string line;
    while (std::getline(in, line))
        out << line.substr(0, line.rfind(',')) << '\n';
    return out.str();
}

std::string strip_timing_jsonl(const std::string& text) {
    std::stringstream in(text), out;
    std::string line;
    while (std::getline(in, line))
        out << line.substr(0, line.find("\"wall_ms\"")) << '\n';
    return out.str();
}

ExperimentConfig small_config(const fs::path& dir) {
    ExperimentConfig c;
    c.topologies = {"square:3,3", "hypercube:3"};
    c.benchmarks = {{Family::QV}, {Family::GHZ}};
    c.widths = {4, 6};
    c.bases = {"cnot", "sqiswap"};
    c.seeds = {0, 1};
    c.output = (dir / "run").string();
    return c;
}

ErrorCode config_code(const std::string& json) {
    try {
        ExperimentConfig::from_json(json);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "accepted: " << json;
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST(Config, ParsesFullDocument) {
    auto c = ExperimentConfig::from_json(R"({
        "topologies": ["heavy-hex:20", "hypercube:4"],
        "benchmarks": ["qv", {"family": "hamsim", "trotter_steps": 2}],
        "widths": [8, 16], "bases": ["cnot", "sqiswap"], "seeds": [0, 1, 2],
        "durations": {"iswap": 1.0, "cnot": 1.0}, "f_iswap": 0.99, "trials": 5,
        "output": "x"})");
    EXPECT_EQ(c.topologies.size(), 2u);
    EXPECT_EQ(c.benchmarks[1].family, Family::HAMSIM);
    EXPECT_EQ(c.benchmarks[1].trotter_steps, 2);
    EXPECT_EQ(c.seeds.size(), 3u);
    EXPECT_EQ(c.trials, 5);
}

TEST(Config, Rejections) {
    EXPECT_EQ(config_code("not json"), ErrorCode::Config);
    EXPECT_EQ(config_code(R"({"topologies": []})"), ErrorCode::Config);
    EXPECT_EQ(config_code(R"({"topologies": ["square:2,2"], "benchmarks": ["qv"], "widths": [8],
                              "bases": ["cnot"], "seeds": [0]})"),
              ErrorCode::Config);
    EXPECT_EQ(config_code(R"({"topologies": ["square:4,4"], "bogus": 1})"), ErrorCode::Config);
    EXPECT_EQ(config_code(R"({"topologies": ["square:4,4"], "benchmarks": ["qv"], "widths": [4],
                              "bases": ["nope"], "seeds": [0]})"),
              ErrorCode::Config);
    EXPECT_EQ(config_code(R"({"topologies": ["square:4,4"], "benchmarks": ["qv"], "widths": [4],
                              "bases": ["cnot"], "seeds": []})"),
              ErrorCode::Config);
    EXPECT_NO_THROW(ExperimentConfig::from_json(R"({"mode": "stats", "topologies": ["tree:2"]})"));
}

TEST(Durations, JsonTable) {
    auto d = durations_from_json(R"({"iswap": 2, "cnot": 1.5})");
    EXPECT_DOUBLE_EQ(d.iswap, 2.0);
    EXPECT_DOUBLE_EQ(d.cnot, 1.5);
    EXPECT_THROW(durations_from_json(R"({"iswap": -1})"), Error);
    EXPECT_THROW(durations_from_json(R"({"warp": 1})"), Error);
}

TEST(Records, JsonLineRoundTrip) {
    MetricsRecord r;
    r.topology = "heavy-hex:84";
    r.topology_n = 84;
    r.benchmark = "qv";
    r.width = 32;
    r.basis = "sqiswap";
    r.seed = 18446744073709551615ull;
    r.metrics = {123, 45, 67, 8, 0.1 + 0.2, 1.0 / 3.0};
    r.stats = {20, 8.456912, 2.2619047619047619, 0};
    r.decomp_fidelity = 0.99999999999912;
    r.modeled_fidelity = 0.1234567890123456789;
    r.f_iswap = 0.99;
    r.durations = "iswap=1;cnot=1";
    r.error = "quote \" and, comma";
    r.wall_ms = 12.5;
    auto back = from_json_line(to_json_line(r));
    EXPECT_EQ(to_json_line(back), to_json_line(r));
    EXPECT_EQ(back.seed, r.seed);
    EXPECT_EQ(back.metrics.weighted_duration, r.metrics.weighted_duration);
    EXPECT_EQ(back.modeled_fidelity, r.modeled_fidelity);
    EXPECT_EQ(back.error, r.error);
    EXPECT_EQ(to_csv_row(back), to_csv_row(r));
    EXPECT_THROW(from_json_line("{}"), Error);
}

TEST(Suite, SingleRow) {
    auto dir = scratch("single");
    ExperimentConfig c;
    c.topologies = {"square:3,3"};
    c.benchmarks = {{Family::GHZ}};
    c.widths = {5};
    c.bases = {"cnot"};
    c.seeds = {0};
    c.output = (dir / "r").string();
    auto s = run_suite(c);
    ASSERT_EQ(s.records.size(), 1u);
    EXPECT_EQ(s.records[0].metrics.total_2q, 4 + 3 * s.records[0].metrics.total_swaps);
    EXPECT_TRUE(fs::exists(dir / "r.csv"));
    EXPECT_TRUE(fs::exists(dir / "r.jsonl"));
}

TEST(Suite, CrossProductRowCount) {
    auto dir = scratch("product");
    auto c = small_config(dir);
    auto s = run_suite(c);
    EXPECT_EQ(s.records.size(), 2u * 2 * 2 * 2 * 2);
    EXPECT_EQ(s.executed, 32);
    EXPECT_EQ(s.failed, 0);
    for (std::size_t i = 1; i < s.records.size(); ++i)
        EXPECT_LT(s.records[i - 1].key(), s.records[i].key());
    // Header plus one line per row.
    auto csv = slurp(dir / "run.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 33);
}

TEST(Suite, ResumesFromExistingRows) {
    auto dir = scratch("resume");
    auto c = small_config(dir);
    c.seeds = {0};
    run_suite(c);
    c.seeds = {0, 1};
    auto s = run_suite(c);
    EXPECT_EQ(s.skipped, 16);
    EXPECT_EQ(s.executed, 16);
    EXPECT_EQ(s.records.size(), 32u);
    EXPECT_EQ(load_jsonl((dir / "run.jsonl").string()).size(), 32u);
}

TEST(Suite, ParallelMatchesSequential) {
    auto d1 = scratch("seq"), d2 = scratch("par");
    auto a = small_config(d1);
    a.threads = 1;
    auto b = small_config(d2);
    b.threads = 3;
    run_suite(a);
    run_suite(b);
    EXPECT_EQ(strip_timing_csv(slurp(d1 / "run.csv")), strip_timing_csv(slurp(d2 / "run.csv")));
    EXPECT_EQ(strip_timing_jsonl(slurp(d1 / "run.jsonl")), strip_timing_jsonl(slurp(d2 / "run.jsonl")));
}

TEST(Suite, RowErrorsAreRecorded) {
    auto dir = scratch("errors");
    ExperimentConfig c;
    c.topologies = {"square:3,3"};
    c.benchmarks = {{Family::CDKM_ADDER}, {Family::GHZ}};
    c.widths = {5};
    c.bases = {"cnot"};
    c.seeds = {0};
    c.output = (dir / "r").string();
    auto s = run_suite(c);
    ASSERT_EQ(s.records.size(), 2u);
    EXPECT_EQ(s.failed, 1);
    EXPECT_NE(s.records[0].error.find("InvalidWidth"), std::string::npos);
    EXPECT_TRUE(s.records[1].error.empty());
}

TEST(Suite, StatsModeReproducesTableColumns) {
    ExperimentConfig c;
    c.mode = SuiteMode::Stats;
    c.topologies = {"square:4,4", "hypercube:4", "tree:2", "tree-rr:2", "corral:8,1,1", "corral:8,1,2",
                    "heavy-hex:20", "hex:20"};
    auto s = run_suite(c);
    ASSERT_EQ(s.records.size(), 8u);
    for (const auto& r : s.records)
        if (r.topology == "corral:8,1,2") {
            EXPECT_EQ(r.stats.diameter, 2);
            EXPECT_DOUBLE_EQ(r.stats.avg_distance, 1.5);
            EXPECT_DOUBLE_EQ(r.stats.avg_connectivity, 6.0);
        }
    auto table = report_tables(s.records);
    EXPECT_NE(table.find("Avg_D"), std::string::npos);
    EXPECT_NE(table.find("corral:8,1,2"), std::string::npos);
}

TEST(Report, PlotDataSeries) {
    auto dir = scratch("plot");
    ExperimentConfig c;
    c.topologies = {"heavy-hex:20", "hypercube:4"};
    c.benchmarks = {{Family::QV}};
    c.widths = {4, 8, 12, 16};
    c.bases = {"cnot"};
    c.seeds = {0, 1};
    auto s = run_suite(c);
    auto files = report_plotdata(s.records, dir.string());
    ASSERT_FALSE(files.empty());
    EXPECT_TRUE(fs::exists(dir / "ratios.csv"));
    // Totals grow with width in every series.
    std::ifstream f(dir / "qv_total_2q.csv");
    std::string line;
    std::getline(f, line);
    EXPECT_EQ(line, "width,series,mean,min,max,n");
    std::map<std::string, std::vector<std::pair<int, double>>> series;
    while (std::getline(f, line)) {
        std::stringstream ss(line);
        std::string w, name, mean;
        std::getline(ss, w, ',');
        std::getline(ss, name, ',');
        std::getline(ss, mean, ',');
        series[name].push_back({std::stoi(w), std::stod(mean)});
    }
    ASSERT_EQ(series.size(), 2u);
    for (auto& [name, pts] : series) {
        std::sort(pts.begin(), pts.end());
        for (std::size_t i = 1; i < pts.size(); ++i)
            EXPECT_GT(pts[i].second, pts[i - 1].second) << name;
    }
}

TEST(Report, EmptySelection) {
    try {
        report_tables({});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptySelection);
    }
    EXPECT_THROW(report_plotdata({}, scratch("empty").string()), Error);
}

TEST(Fig9, PerfectGatesTie) {
    Fig9Config cfg;
    cfg.n_samples = 3;
    cfg.f_iswap = {1.0};
    cfg.roots = {2, 3};
    cfg.k_max = 6;
    auto r = fig9_study(cfg);
    for (double inf : r.mean_total_infidelity[0])
        EXPECT_NEAR(inf, 0.0, 1e-9);
}

TEST(Fig9, InfidelityNonIncreasingInK) {
    Fig9Config cfg;
    cfg.n_samples = 1;
    cfg.roots = {2, 3, 4};
    cfg.k_max = 6;
    auto r = fig9_study(cfg);
    for (const auto& row : r.mean_decomp_infidelity)
        for (std::size_t k = 1; k < row.size(); ++k)
            EXPECT_LE(row[k], row[k - 1] + 1e-12);
    EXPECT_NE(r.to_csv().find("improvement_vs_2"), std::string::npos);
}

TEST(Fig9, Deterministic) {
    Fig9Config cfg;
    cfg.n_samples = 3;
    cfg.roots = {2, 3};
    cfg.k_max = 4;
    cfg.threads = 1;
    auto a = fig9_study(cfg).to_csv();
    cfg.threads = 2;
    EXPECT_EQ(fig9_study(cfg).to_csv(), a);
}

TEST(Workers, EnvironmentCap) {
    setenv("CODESIGN_THREADS", "2", 1);
    EXPECT_EQ(worker_count(8), 2);
    EXPECT_EQ(worker_count(1), 1);
    unsetenv("CODESIGN_THREADS");
    EXPECT_EQ(worker_count(3), 3);
}
