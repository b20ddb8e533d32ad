// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any unexpected FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "codesign/harness.hpp"

using namespace codesign;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        if (!ok)
            pass = false;
        notes.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", what));
    }
    void note(const std::string& what) { notes.push_back("     " + what); }
};

double round2(double v) { return std::round(v * 100) / 100; }

Outcome topology_exact() {
    struct Row {
        const char* name;
        CouplingGraph g;
        double dia, avg_d, avg_c;
    };
    std::vector<Row> rows = {
        {"square-lattice 4x4", build_square_lattice(4, 4), 6.0, 2.5, 3.0},
        {"hypercube 4", build_hypercube(4), 4.0, 2.0, 4.0},
        {"tree 2", build_tree(2), 3.0, 2.15, 4.6},
        {"tree-rr 2", build_tree_rr(2), 3.0, 2.03, 4.6},
        {"corral 8,1,1", build_corral(8, 1, 1), 4.0, 2.06, 5.0},
        {"corral 8,1,2", build_corral(8, 1, 2), 2.0, 1.5, 6.0},
    };
    Outcome o;
    for (const auto& r : rows) {
        auto s = stats(r.g);
        bool ok = s.diameter == r.dia && round2(s.avg_distance) == r.avg_d && round2(s.avg_connectivity) == r.avg_c;
        o.check(ok, fmt::format("{:<20} ({}, {:.2f}, {:.2f}) want ({}, {}, {})", r.name, s.diameter, s.avg_distance,
                                s.avg_connectivity, r.dia, r.avg_d, r.avg_c));
    }
    return o;
}

Outcome topology_tolerant() {
    struct Row {
        const char* spec;
        double dia, avg_d, avg_c;
    };
    std::vector<Row> rows = {
        {"heavy-hex:20", 8.0, 3.77, 2.1},   {"heavy-hex:84", 21.0, 8.47, 2.26}, {"hex:84", 17.0, 6.95, 2.71},
        {"square:7,12", 17.0, 6.26, 3.55},  {"alt-diag:7,12", 11.0, 4.62, 5.12}, {"tree:3", 5.0, 3.91, 4.71},
        {"tree-rr:3", 5.0, 3.65, 4.71},     {"hypercube:7:84", 7.0, 3.32, 6.0},
    };
    Outcome o;
    for (const auto& r : rows) {
        auto s = stats(make_topology(r.spec));
        double got[3] = {double(s.diameter), s.avg_distance, s.avg_connectivity};
        double want[3] = {r.dia, r.avg_d, r.avg_c};
        bool ok = true;
        std::string dev;
        for (int i = 0; i < 3; ++i) {
            double rel = (got[i] - want[i]) / want[i];
            ok = ok && std::abs(rel) <= 0.10;
            dev += fmt::format(" {:+.1f}%", 100 * rel);
        }
        o.check(ok, fmt::format("{:<15} ({}, {:.2f}, {:.2f}) want ({}, {}, {}) dev{}", r.spec, s.diameter,
                                s.avg_distance, s.avg_connectivity, r.dia, r.avg_d, r.avg_c, dev));
    }
    o.check(stats(build_square_lattice(7, 12)).diameter == 17, "square-lattice 7x12 diameter exactly 17");
    return o;
}

Outcome decomposition() {
    Outcome o;
    Rng rng(2022);
    std::vector<Unitary4> samples;
    for (int i = 0; i < 1000; ++i)
        samples.push_back(haar_random_2q(rng));
    for (const auto& basis : {GateKind::cnot(), GateKind::sqrt_iswap()}) {
        int bad = 0, max_count = 0;
        double worst = 1.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            OptimizerConfig cfg;
            cfg.seed = i;
            auto r = decompose_exact(samples[i], basis, cfg);
            double f = hs_fidelity(r.reconstruct(), samples[i].matrix());
            worst = std::min(worst, f);
            max_count = std::max(max_count, r.count);
            if (f < kExactFidelity || r.count > 3)
                ++bad;
        }
        o.check(bad == 0, fmt::format("{}: 1000 Haar samples, failures {}, max gates {}, worst fidelity 1-{:.1e}",
                                      basis.label(), bad, max_count, 1 - worst));
        auto sw = decompose_exact(gate_matrix_2q(GateKind::swap()), basis);
        o.check(sw.count == 3 && sw.decomp_fidelity >= kExactFidelity,
                fmt::format("{}: SWAP uses {} gates", basis.label(), sw.count));
    }
    int bad = 0, max_count = 0;
    double worst = 1.0;
    Rng syc_rng(4);
    for (int i = 0; i < 200; ++i) {
        auto u = haar_random_2q(syc_rng);
        OptimizerConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(i);
        auto r = decompose_syc(u, cfg);
        double f = hs_fidelity(r.reconstruct(), u.matrix());
        worst = std::min(worst, f);
        max_count = std::max(max_count, r.count);
        if (f < 1 - 1e-8 || r.count > 4)
            ++bad;
    }
    o.check(bad == 0, fmt::format("SYC: 200 Haar samples, failures {}, max gates {}, worst fidelity 1-{:.1e}", bad,
                                  max_count, 1 - worst));
    return o;
}

Outcome two_use_advantage() {
    Outcome o;
    Rng rng(2022);
    int sq = 0, cx = 0;
    for (int i = 0; i < 1000; ++i) {
        auto c = weyl_coordinates(haar_random_2q(rng));
        sq += sqiswap_count(c) <= 2;
        cx += cnot_count(c) <= 2;
    }
    o.check(sq > cx, fmt::format("<= 2 sqrt-iSWAP: {} of 1000, <= 2 CNOT: {} of 1000", sq, cx));
    return o;
}

Outcome fidelity_arithmetic() {
    Outcome o;
    double f = gate_fidelity(0.90, 2);
    o.check(f == 0.95, fmt::format("f_iswap 0.90, n 2 -> {:.17g}", f));
    return o;
}

Outcome root_study() {
    Fig9Config cfg;
    cfg.n_samples = 50;
    cfg.f_iswap = {0.99};
    cfg.roots = {2, 3, 4, 5};
    cfg.k_max = 6;
    auto r = fig9_study(cfg);
    Outcome o;
    const auto& inf = r.mean_total_infidelity[0];
    const auto& imp = r.improvement_vs_2[0];
    for (std::size_t i = 0; i < r.roots.size(); ++i)
        o.note(fmt::format("n={} mean total infidelity {:.5f} improvement {:+.1f}%", r.roots[i], inf[i],
                           100 * imp[i]));
    o.check(inf[1] < inf[0] && inf[2] < inf[0], "n=3 and n=4 below n=2");
    o.check(imp[2] > imp[1] && imp[2] > imp[3], "n=4 improvement largest of {3,4,5}");
    const double target[3] = {0.14, 0.25, 0.11};
    for (int i = 0; i < 3; ++i)
        o.check(std::abs(imp[static_cast<std::size_t>(i + 1)] - target[i]) <= 0.10,
                fmt::format("n={} improvement within 10 pp of {:.0f}%", i + 3, 100 * target[i]));
    return o;
}

Outcome end_to_end() {
    auto hc = trim_hypercube(7, 84);
    auto hh = build_heavy_hex(84);
    PipelineOptions po;
    po.translate.synthesize = false;
    double q_hc = 0, q_hh = 0, d_hc = 0, d_hh = 0, s_hc = 0, s_hh = 0, cs_hc = 0, cs_hh = 0;
    Outcome o;
    for (int w : {16, 32, 48, 64, 80}) {
        double wq_hc = 0, wq_hh = 0, ws_hc = 0, ws_hh = 0;
        for (std::uint64_t s = 0; s < 10; ++s) {
            BenchmarkSpec spec{Family::QV, w, s};
            auto a = run_pipeline(spec, hc, GateKind::sqrt_iswap(), {}, s, po).metrics;
            auto b = run_pipeline(spec, hh, GateKind::cnot(), {}, s, po).metrics;
            q_hc += a.total_2q;
            q_hh += b.total_2q;
            d_hc += a.total_duration;
            d_hh += b.total_duration;
            s_hc += a.total_swaps;
            s_hh += b.total_swaps;
            cs_hc += a.critical_swaps;
            cs_hh += b.critical_swaps;
            wq_hc += a.total_2q;
            wq_hh += b.total_2q;
            ws_hc += a.total_swaps;
            ws_hh += b.total_swaps;
        }
        o.note(fmt::format("width {}: 2Q {:.1f} vs {:.1f}, SWAPs {:.1f} vs {:.1f}", w, wq_hh / 10, wq_hc / 10,
                           ws_hh / 10, ws_hc / 10));
    }
    o.check(q_hh / q_hc >= 2.0, fmt::format("total 2Q ratio {:.2f} (floor 2.0)", q_hh / q_hc));
    o.check(d_hh / d_hc >= 4.0, fmt::format("duration ratio {:.2f} (floor 4.0)", d_hh / d_hc));
    o.check(s_hh / s_hc >= 1.8, fmt::format("total SWAP ratio {:.2f} (floor 1.8)", s_hh / s_hc));
    o.check(cs_hh / cs_hc >= 3.5, fmt::format("critical SWAP ratio {:.2f} (floor 3.5)", cs_hh / cs_hc));
    return o;
}

Circuit random_circuit(int width, int gates, Rng& rng) {
    Circuit c(width);
    for (int i = 0; i < gates; ++i) {
        int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(width)));
        int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(width - 1)));
        if (b >= a)
            ++b;
        switch (rng.below(4)) {
        case 0:
            c.cx(a, b);
            break;
        case 1:
            c.add(GateKind::unitary(haar_random_2q(rng)), {a, b});
            break;
        case 2:
            c.add(GateKind::unitary(haar_random_1q(rng)), {a});
            break;
        default:
            c.add(GateKind::cp(rng.uniform(-kPi, kPi)), {a, b});
        }
    }
    return c;
}

Outcome semantics() {
    auto g = build_path(3);
    Rng rng(1234);
    BasisDecomposer cnot(GateKind::cnot()), sq(GateKind::sqrt_iswap());
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto c = random_circuit(3, 10, rng);
        auto rc = stochastic_route(c, g, dense_layout(c, g), static_cast<std::uint64_t>(trial));
        auto* dec = trial % 2 ? &sq : &cnot;
        auto tr = basis_translate(rc, dec->basis(), {}, std::nullopt, {}, dec);
        MatX expect =
            layout_permutation(rc.final_layout) * circuit_unitary(c) * layout_permutation(rc.initial_layout).adjoint();
        if (!equal_up_to_phase(circuit_unitary(tr.circuit), expect, 1e-6))
            ++bad;
    }
    Outcome o;
    o.check(bad == 0, fmt::format("100 random width-3 circuits on path(3), mismatches {}", bad));
    return o;
}

std::string strip_timing(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string s = ss.str();
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv")
        return std::regex_replace(s, std::regex(",[^,\n]*\n"), "\n");
    return std::regex_replace(s, std::regex("\"wall_ms\":[^,}]*"), "");
}

Outcome determinism() {
    fs::path dir = fs::temp_directory_path() / "codesign_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto base = ExperimentConfig::from_json(R"({
        "topologies": ["square:4,4", "hypercube:4", "corral:8,1,2"],
        "benchmarks": ["qv", "qft", "ghz", "cdkm"],
        "widths": [6, 10],
        "bases": ["cnot", "sqiswap"],
        "seeds": [0, 1]
    })");
    std::vector<std::string> csv, jsonl;
    int idx = 0;
    for (int threads : {1, 1, 4}) {
        auto cfg = base;
        cfg.threads = threads;
        cfg.output = (dir / fmt::format("run{}", idx++)).string();
        run_suite(cfg);
        csv.push_back(strip_timing(cfg.output + ".csv"));
        jsonl.push_back(strip_timing(cfg.output + ".jsonl"));
    }
    Outcome o;
    o.check(csv[0] == csv[1] && jsonl[0] == jsonl[1], "repeated sequential runs identical");
    o.check(csv[0] == csv[2] && jsonl[0] == jsonl[2], "4-thread run identical to sequential");
    o.note(fmt::format("{} rows compared", std::count(csv[0].begin(), csv[0].end(), '\n') - 1));
    return o;
}

} // namespace

// Criteria listed with --known-fail still print FAIL but do not fail the exit code.
int main(int argc, char** argv) {
    std::vector<int> known;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--known-fail")
            known.push_back(std::atoi(argv[++i]));
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all = {
        {1, "topology statistics, exact", topology_exact},
        {2, "topology statistics, tolerant", topology_tolerant},
        {3, "decomposition correctness", decomposition},
        {4, "two-use advantage", two_use_advantage},
        {5, "root gate fidelity arithmetic", fidelity_arithmetic},
        {6, "fractional root study", root_study},
        {7, "end-to-end QV trends", end_to_end},
        {8, "semantics oracle", semantics},
        {9, "suite determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (const auto& n : o.notes)
            std::printf("    %s\n", n.c_str());
        bool expected = std::find(known.begin(), known.end(), c.id) != known.end();
        std::printf("%s criterion %d: %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    !o.pass && expected ? " [known]" : "");
        std::fflush(stdout);
        failed += !o.pass && !expected;
    }
    return failed == 0 ? 0 : 1;
}
