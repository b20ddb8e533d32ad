#include "codesign/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"

namespace codesign {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

template <class T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        config_error(fmt::format("field '{}': {}", key, e.what()));
    }
}

std::string benchmark_label(const BenchmarkTemplate& b) {
    std::string s = family_name(b.family);
    if (b.family == Family::HAMSIM && b.trotter_steps != 1)
        s += fmt::format("-t{}", b.trotter_steps);
    if (b.family == Family::QAOA_PROXY && b.qaoa_layers != 1)
        s += fmt::format("-p{}", b.qaoa_layers);
    return s;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string num(double v) { return fmt::format("{}", v); }

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    const int k = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (k <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < k; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
                body(i);
        });
    for (auto& th : pool)
        th.join();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw Error(ErrorCode::Io, "cannot write " + tmp);
        f << content;
        if (!f)
            throw Error(ErrorCode::Io, "write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw Error(ErrorCode::Io, "cannot rename " + tmp + ": " + ec.message());
}

} // namespace

// ---- config ----

DurationTable durations_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        config_error(std::string("duration table: ") + e.what());
    }
    if (!j.is_object())
        config_error("duration table must be a JSON object");
    DurationTable d;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_number())
            config_error("duration '" + it.key() + "' must be a number");
        double v = it.value().get<double>();
        if (!(v >= 0.0))
            config_error("duration '" + it.key() + "' must be non-negative");
        if (it.key() == "iswap")
            d.iswap = v;
        else if (it.key() == "cnot" || it.key() == "cx")
            d.cnot = v;
        else if (it.key() == "cz")
            d.cz = v;
        else if (it.key() == "syc")
            d.syc = v;
        else if (it.key() == "default_2q")
            d.default_2q = v;
        else
            config_error("unknown duration key '" + it.key() + "'");
    }
    if (d.iswap <= 0.0)
        config_error("iswap duration must be positive");
    return d;
}

std::string durations_to_string(const DurationTable& d) {
    return fmt::format("iswap={};cnot={};cz={};syc={};default_2q={}", num(d.iswap), num(d.cnot), num(d.cz), num(d.syc),
                       num(d.default_2q));
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        config_error("config must be a JSON object");
    static const std::set<std::string> known = {"mode", "topologies", "benchmarks", "widths", "bases", "seeds",
                                                "durations", "f_iswap", "trials", "synthesize", "swap_mode",
                                                "peephole", "output", "threads"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            config_error("unknown config key '" + it.key() + "'");

    ExperimentConfig c;
    if (j.contains("mode")) {
        auto m = get_as<std::string>(j, "mode");
        if (m == "stats")
            c.mode = SuiteMode::Stats;
        else if (m == "transpile")
            c.mode = SuiteMode::Transpile;
        else
            config_error("mode must be 'transpile' or 'stats'");
    }
    if (j.contains("topologies"))
        c.topologies = get_as<std::vector<std::string>>(j, "topologies");
    if (j.contains("benchmarks")) {
        if (!j["benchmarks"].is_array())
            config_error("benchmarks must be an array");
        for (const auto& b : j["benchmarks"]) {
            BenchmarkTemplate t;
            if (b.is_string()) {
                t.family = parse_family(b.get<std::string>());
            } else if (b.is_object()) {
                t.family = parse_family(get_as<std::string>(b, "family"));
                if (b.contains("trotter_steps"))
                    t.trotter_steps = get_as<int>(b, "trotter_steps");
                if (b.contains("qaoa_layers"))
                    t.qaoa_layers = get_as<int>(b, "qaoa_layers");
            } else {
                config_error("benchmark entries must be strings or objects");
            }
            c.benchmarks.push_back(t);
        }
    }
    if (j.contains("widths"))
        c.widths = get_as<std::vector<int>>(j, "widths");
    if (j.contains("bases"))
        c.bases = get_as<std::vector<std::string>>(j, "bases");
    if (j.contains("seeds"))
        c.seeds = get_as<std::vector<std::uint64_t>>(j, "seeds");
    if (j.contains("durations"))
        c.durations = durations_from_json(j["durations"].dump());
    if (j.contains("f_iswap"))
        c.f_iswap = get_as<double>(j, "f_iswap");
    if (j.contains("trials"))
        c.trials = get_as<int>(j, "trials");
    if (j.contains("synthesize"))
        c.synthesize = get_as<bool>(j, "synthesize");
    if (j.contains("peephole"))
        c.peephole = get_as<bool>(j, "peephole");
    if (j.contains("swap_mode")) {
        auto m = get_as<std::string>(j, "swap_mode");
        if (m == "swap-weighted")
            c.swap_mode = SwapCriticalMode::SwapWeighted;
        else if (m == "on-2q-critical")
            c.swap_mode = SwapCriticalMode::OnTwoQubitCritical;
        else
            config_error("swap_mode must be 'swap-weighted' or 'on-2q-critical'");
    }
    if (j.contains("output"))
        c.output = get_as<std::string>(j, "output");
    if (j.contains("threads"))
        c.threads = get_as<int>(j, "threads");
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    if (topologies.empty())
        config_error("topologies must be non-empty");
    int min_n = std::numeric_limits<int>::max();
    for (const auto& t : topologies) {
        try {
            min_n = std::min(min_n, make_topology(t).size());
        } catch (const Error& e) {
            config_error("topology '" + t + "': " + e.what());
        }
    }
    if (!(f_iswap > 0.0 && f_iswap <= 1.0))
        config_error("f_iswap must be in (0, 1]");
    if (threads < 0)
        config_error("threads must be >= 0");
    if (mode == SuiteMode::Stats)
        return;
    if (benchmarks.empty() || widths.empty() || bases.empty() || seeds.empty())
        config_error("benchmarks, widths, bases and seeds must be non-empty");
    for (int w : widths) {
        if (w < 2)
            config_error("widths must be >= 2");
        if (w > min_n)
            config_error(fmt::format("width {} exceeds the smallest topology ({} qubits)", w, min_n));
    }
    for (const auto& b : bases)
        parse_basis(b);
    if (trials < 1)
        config_error("trials must be >= 1");
}

// ---- records ----

std::string MetricsRecord::key() const {
    return fmt::format("{}|{}|{:04d}|{}|{:020d}", topology, benchmark, width, basis, seed);
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {
        "key", "topology", "topology_n", "benchmark", "width", "basis", "seed", "total_2q", "critical_2q",
        "total_swaps", "critical_swaps", "weighted_duration", "total_duration", "diameter", "avg_distance",
        "avg_connectivity", "decomp_fidelity", "modeled_fidelity", "f_iswap", "durations", "error", "wall_ms"};
    return cols;
}

std::string to_csv_row(const MetricsRecord& r) {
    const auto& m = r.metrics;
    std::vector<std::string> f = {
        r.key(), r.topology, std::to_string(r.topology_n), r.benchmark, std::to_string(r.width), r.basis,
        std::to_string(r.seed), std::to_string(m.total_2q), std::to_string(m.critical_2q),
        std::to_string(m.total_swaps), std::to_string(m.critical_swaps), num(m.weighted_duration),
        num(m.total_duration), std::to_string(r.stats.diameter), num(r.stats.avg_distance),
        num(r.stats.avg_connectivity), num(r.decomp_fidelity), num(r.modeled_fidelity), num(r.f_iswap), r.durations,
        r.error, num(r.wall_ms)};
    std::string out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i)
            out += ',';
        out += csv_escape(f[i]);
    }
    return out;
}

std::string to_json_line(const MetricsRecord& r) {
    ordered_json j;
    j["key"] = r.key();
    j["topology"] = r.topology;
    j["topology_n"] = r.topology_n;
    j["benchmark"] = r.benchmark;
    j["width"] = r.width;
    j["basis"] = r.basis;
    j["seed"] = r.seed;
    j["total_2q"] = r.metrics.total_2q;
    j["critical_2q"] = r.metrics.critical_2q;
    j["total_swaps"] = r.metrics.total_swaps;
    j["critical_swaps"] = r.metrics.critical_swaps;
    j["weighted_duration"] = r.metrics.weighted_duration;
    j["total_duration"] = r.metrics.total_duration;
    j["diameter"] = r.stats.diameter;
    j["avg_distance"] = r.stats.avg_distance;
    j["avg_connectivity"] = r.stats.avg_connectivity;
    j["decomp_fidelity"] = r.decomp_fidelity;
    j["modeled_fidelity"] = r.modeled_fidelity;
    j["f_iswap"] = r.f_iswap;
    j["durations"] = r.durations;
    j["error"] = r.error;
    j["wall_ms"] = r.wall_ms;
    return j.dump();
}

MetricsRecord from_json_line(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
        MetricsRecord r;
        r.topology = j.at("topology").get<std::string>();
        r.topology_n = j.at("topology_n").get<int>();
        r.benchmark = j.at("benchmark").get<std::string>();
        r.width = j.at("width").get<int>();
        r.basis = j.at("basis").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.metrics.total_2q = j.at("total_2q").get<int>();
        r.metrics.critical_2q = j.at("critical_2q").get<int>();
        r.metrics.total_swaps = j.at("total_swaps").get<int>();
        r.metrics.critical_swaps = j.at("critical_swaps").get<int>();
        r.metrics.weighted_duration = j.at("weighted_duration").get<double>();
        r.metrics.total_duration = j.at("total_duration").get<double>();
        r.stats.diameter = j.at("diameter").get<int>();
        r.stats.avg_distance = j.at("avg_distance").get<double>();
        r.stats.avg_connectivity = j.at("avg_connectivity").get<double>();
        r.decomp_fidelity = j.at("decomp_fidelity").get<double>();
        r.modeled_fidelity = j.at("modeled_fidelity").get<double>();
        r.f_iswap = j.at("f_iswap").get<double>();
        r.durations = j.at("durations").get<std::string>();
        r.error = j.at("error").get<std::string>();
        r.wall_ms = j.at("wall_ms").get<double>();
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("bad record line: ") + e.what());
    }
}

std::vector<MetricsRecord> load_jsonl(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw Error(ErrorCode::Io, "cannot open " + path);
    std::vector<MetricsRecord> out;
    std::string line;
    while (std::getline(f, line))
        if (!line.empty())
            out.push_back(from_json_line(line));
    return out;
}

// ---- suite ----

int worker_count(int requested) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    int n = requested > 0 ? requested : std::max(1, hw);
    if (const char* env = std::getenv("CODESIGN_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1)
            n = std::min(n, cap);
    }
    return std::max(1, n);
}

SuiteSummary run_suite(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<std::shared_ptr<const CouplingGraph>> graphs;
    std::vector<TopologyStats> gstats;
    for (const auto& t : cfg.topologies) {
        graphs.push_back(std::make_shared<const CouplingGraph>(make_topology(t)));
        gstats.push_back(stats(*graphs.back()));
    }

    // Task list in canonical order.
    struct Task {
        std::size_t topo;
        BenchmarkTemplate bench;
        int width;
        std::string basis;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    std::vector<MetricsRecord> proto;
    const std::string dur = durations_to_string(cfg.durations);
    for (std::size_t ti = 0; ti < graphs.size(); ++ti) {
        auto base = [&] {
            MetricsRecord r;
            r.topology = cfg.topologies[ti];
            r.topology_n = graphs[ti]->size();
            r.stats = gstats[ti];
            r.f_iswap = cfg.f_iswap;
            r.durations = dur;
            return r;
        };
        if (cfg.mode == SuiteMode::Stats) {
            MetricsRecord r = base();
            r.benchmark = "-";
            r.basis = "-";
            tasks.push_back({ti, {}, 0, "-", 0});
            proto.push_back(r);
            continue;
        }
        for (const auto& b : cfg.benchmarks)
            for (int w : cfg.widths)
                for (const auto& basis : cfg.bases)
                    for (auto seed : cfg.seeds) {
                        MetricsRecord r = base();
                        r.benchmark = benchmark_label(b);
                        r.width = w;
                        r.basis = basis_name(parse_basis(basis));
                        r.seed = seed;
                        tasks.push_back({ti, b, w, basis, seed});
                        proto.push_back(r);
                    }
    }

    // Resume from an existing JSON-lines file.
    std::map<std::string, MetricsRecord> existing;
    const std::string jsonl = cfg.output.empty() ? "" : cfg.output + ".jsonl";
    const std::string csv = cfg.output.empty() ? "" : cfg.output + ".csv";
    if (!jsonl.empty() && std::filesystem::exists(jsonl))
        for (auto& r : load_jsonl(jsonl))
            existing[r.key()] = r;

    std::vector<std::size_t> todo;
    std::set<std::string> seen;
    SuiteSummary summary;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        std::string k = proto[i].key();
        if (!seen.insert(k).second)
            config_error("duplicate row key " + k);
        if (existing.count(k))
            ++summary.skipped;
        else
            todo.push_back(i);
    }

    std::mutex write_mu;
    std::ofstream append;
    if (!jsonl.empty()) {
        auto parent = std::filesystem::path(jsonl).parent_path();
        if (!parent.empty())
            std::filesystem::create_directories(parent);
        append.open(jsonl, std::ios::app | std::ios::binary);
        if (!append)
            throw Error(ErrorCode::Io, "cannot open " + jsonl);
    }

    std::vector<MetricsRecord> fresh(todo.size());
    parallel_for(todo.size(), worker_count(cfg.threads), [&](std::size_t ix) {
        const Task& t = tasks[todo[ix]];
        MetricsRecord r = proto[todo[ix]];
        auto t0 = std::chrono::steady_clock::now();
        if (cfg.mode == SuiteMode::Transpile) {
            try {
                BenchmarkSpec spec{t.bench.family, t.width, t.seed, t.bench.trotter_steps, t.bench.qaoa_layers};
                PipelineOptions po;
                po.routing.trials = cfg.trials;
                po.translate.synthesize = cfg.synthesize;
                po.translate.peephole = cfg.peephole;
                po.translate.swap_mode = cfg.swap_mode;
                po.translate.optimizer.seed = t.seed;
                po.f_iswap = cfg.f_iswap;
                PipelineResult pr = run_pipeline(spec, *graphs[t.topo], parse_basis(t.basis), cfg.durations, t.seed, po);
                r.metrics = pr.metrics;
                r.decomp_fidelity = pr.decomp_fidelity;
                r.modeled_fidelity = pr.modeled_fidelity;
            } catch (const std::exception& e) {
                r.error = e.what();
            }
        }
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (append.is_open()) {
            std::lock_guard<std::mutex> lk(write_mu);
            append << to_json_line(r) << '\n';
            append.flush();
        }
        fresh[ix] = std::move(r);
    });
    if (append.is_open())
        append.close();

    for (auto& r : fresh) {
        if (!r.error.empty())
            ++summary.failed;
        existing[r.key()] = std::move(r);
    }
    summary.executed = static_cast<int>(fresh.size());
    for (auto& [k, r] : existing)
        summary.records.push_back(r);

    if (!cfg.output.empty()) {
        std::string c, jl;
        for (std::size_t i = 0; i < csv_columns().size(); ++i)
            c += (i ? "," : "") + csv_columns()[i];
        c += '\n';
        for (const auto& r : summary.records) {
            c += to_csv_row(r) + '\n';
            jl += to_json_line(r) + '\n';
        }
        write_file_atomic(csv, c);
        write_file_atomic(jsonl, jl);
    }
    return summary;
}

// ---- reports ----

namespace {

struct MetricDef {
    const char* name;
    std::function<double(const MetricsRecord&)> get;
};

const std::vector<MetricDef>& metric_defs() {
    static const std::vector<MetricDef> defs = {
        {"total_2q", [](const MetricsRecord& r) { return static_cast<double>(r.metrics.total_2q); }},
        {"critical_2q", [](const MetricsRecord& r) { return static_cast<double>(r.metrics.critical_2q); }},
        {"total_swaps", [](const MetricsRecord& r) { return static_cast<double>(r.metrics.total_swaps); }},
        {"critical_swaps", [](const MetricsRecord& r) { return static_cast<double>(r.metrics.critical_swaps); }},
        {"weighted_duration", [](const MetricsRecord& r) { return r.metrics.weighted_duration; }},
        {"total_duration", [](const MetricsRecord& r) { return r.metrics.total_duration; }},
    };
    return defs;
}

std::string series_of(const MetricsRecord& r) { return r.topology + "/" + r.basis; }

struct Agg {
    double sum = 0, lo = std::numeric_limits<double>::infinity(), hi = -std::numeric_limits<double>::infinity();
    int n = 0;
    void add(double v) {
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ++n;
    }
    double mean() const { return n ? sum / n : 0.0; }
};

std::vector<const MetricsRecord*> usable(const std::vector<MetricsRecord>& records) {
    std::vector<const MetricsRecord*> out;
    for (const auto& r : records)
        if (r.error.empty())
            out.push_back(&r);
    if (out.empty())
        throw Error(ErrorCode::EmptySelection, "no successful records to report");
    return out;
}

bool stats_only(const std::vector<const MetricsRecord*>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const MetricsRecord* r) { return r->benchmark == "-"; });
}

// benchmark -> metric -> series -> width -> Agg
using Cube = std::map<std::string, std::map<std::string, std::map<std::string, std::map<int, Agg>>>>;

Cube build_cube(const std::vector<const MetricsRecord*>& rs) {
    Cube cube;
    for (const auto* r : rs) {
        if (r->benchmark == "-")
            continue;
        for (const auto& m : metric_defs())
            cube[r->benchmark][m.name][series_of(*r)][r->width].add(m.get(*r));
    }
    return cube;
}

} // namespace

std::string report_tables(const std::vector<MetricsRecord>& records) {
    auto rs = usable(records);
    std::string out;
    if (stats_only(rs)) {
        out += fmt::format("{:<20} {:>6} {:>6} {:>8} {:>8}\n", "topology", "n", "Dia.", "Avg_D", "Avg_C");
        for (const auto* r : rs)
            out += fmt::format("{:<20} {:>6} {:>6} {:>8.3f} {:>8.3f}\n", r->topology, r->topology_n, r->stats.diameter,
                               r->stats.avg_distance, r->stats.avg_connectivity);
        return out;
    }
    Cube cube = build_cube(rs);
    for (const auto& [bench, metrics] : cube) {
        for (const auto& [metric, series] : metrics) {
            std::set<int> widths;
            for (const auto& [s, byw] : series)
                for (const auto& [w, a] : byw)
                    widths.insert(w);
            out += fmt::format("== {} / {} (mean over seeds)\n", bench, metric);
            out += fmt::format("{:<28}", "series");
            for (int w : widths)
                out += fmt::format(" {:>10}", fmt::format("w={}", w));
            out += '\n';
            for (const auto& [s, byw] : series) {
                out += fmt::format("{:<28}", s);
                for (int w : widths) {
                    auto it = byw.find(w);
                    out += it == byw.end() ? fmt::format(" {:>10}", "-") : fmt::format(" {:>10.2f}", it->second.mean());
                }
                out += '\n';
            }
            // Ratios against the series with the smallest overall mean.
            std::string best;
            double best_v = std::numeric_limits<double>::infinity();
            std::map<std::string, double> overall;
            for (const auto& [s, byw] : series) {
                double acc = 0;
                for (const auto& [w, a] : byw)
                    acc += a.mean();
                overall[s] = acc;
                if (acc < best_v) {
                    best_v = acc;
                    best = s;
                }
            }
            if (series.size() > 1 && best_v > 0)
                for (const auto& [s, v] : overall)
                    if (s != best)
                        out += fmt::format("  ratio {} / {} = {:.3f}\n", s, best, v / best_v);
            out += '\n';
        }
    }
    return out;
}

std::vector<std::string> report_plotdata(const std::vector<MetricsRecord>& records, const std::string& dir) {
    auto rs = usable(records);
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;
    auto path = [&](const std::string& name) { return (std::filesystem::path(dir) / name).string(); };
    if (stats_only(rs)) {
        std::string s = "topology,n,diameter,avg_distance,avg_connectivity\n";
        for (const auto* r : rs)
            s += fmt::format("{},{},{},{},{}\n", csv_escape(r->topology), r->topology_n, r->stats.diameter,
                             num(r->stats.avg_distance), num(r->stats.avg_connectivity));
        write_file_atomic(path("topology_stats.csv"), s);
        return {"topology_stats.csv"};
    }
    Cube cube = build_cube(rs);
    std::string ratios = "benchmark,metric,numerator,denominator,ratio\n";
    for (const auto& [bench, metrics] : cube) {
        for (const auto& [metric, series] : metrics) {
            std::string s = "width,series,mean,min,max,n\n";
            std::map<std::string, double> overall;
            for (const auto& [name, byw] : series) {
                double acc = 0;
                for (const auto& [w, a] : byw) {
                    s += fmt::format("{},{},{},{},{},{}\n", w, csv_escape(name), num(a.mean()), num(a.lo), num(a.hi), a.n);
                    acc += a.mean();
                }
                overall[name] = acc;
            }
            std::string fname = fmt::format("{}_{}.csv", bench, metric);
            write_file_atomic(path(fname), s);
            files.push_back(fname);
            for (const auto& [a, va] : overall)
                for (const auto& [b, vb] : overall)
                    if (a != b && vb > 0)
                        ratios += fmt::format("{},{},{},{},{}\n", bench, metric, csv_escape(a), csv_escape(b), num(va / vb));
        }
    }
    write_file_atomic(path("ratios.csv"), ratios);
    files.push_back("ratios.csv");
    return files;
}

// ---- fidelity study ----

Fig9Result fig9_study(const Fig9Config& cfg) {
    if (cfg.n_samples < 1)
        throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1");
    if (cfg.roots.empty() || cfg.f_iswap.empty())
        throw Error(ErrorCode::InvalidArgument, "roots and f_iswap must be non-empty");
    if (cfg.k_max < 0 || cfg.k_max > 8)
        throw Error(ErrorCode::InvalidArgument, "k_max must be in 0..8");
    for (double f : cfg.f_iswap)
        if (!(f > 0.0 && f <= 1.0))
            throw Error(ErrorCode::InvalidArgument, "f_iswap must be in (0, 1]");

    Rng rng(derive_seed(cfg.seed, 0x46394));
    std::vector<Unitary4> targets;
    for (int i = 0; i < cfg.n_samples; ++i)
        targets.push_back(Unitary4::checked(canonical_gate(weyl_coordinates(haar_random_2q(rng)))));

    const std::size_t nr = cfg.roots.size();
    const std::size_t nk = static_cast<std::size_t>(cfg.k_max + 1);
    // fid[sample][root][k]
    std::vector<std::vector<std::vector<double>>> fid(targets.size());
    parallel_for(targets.size(), worker_count(cfg.threads), [&](std::size_t i) {
        fid[i].resize(nr);
        for (std::size_t r = 0; r < nr; ++r) {
            OptimizerConfig oc = cfg.optimizer;
            oc.seed = derive_seed(cfg.optimizer.seed, i);
            auto sweep = template_sweep(targets[i], GateKind::nth_root_iswap(cfg.roots[r]), cfg.k_max, oc);
            for (const auto& d : sweep)
                fid[i][r].push_back(d.decomp_fidelity);
        }
    });

    Fig9Result out;
    out.roots = cfg.roots;
    out.f_iswap = cfg.f_iswap;
    out.mean_decomp_infidelity.assign(nr, std::vector<double>(nk, 0.0));
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t k = 0; k < nk; ++k)
                out.mean_decomp_infidelity[r][k] += (1.0 - fid[i][r][k]) / static_cast<double>(targets.size());

    auto two = std::find(cfg.roots.begin(), cfg.roots.end(), 2);
    for (double f : cfg.f_iswap) {
        std::vector<double> inf(nr, 0.0);
        for (std::size_t i = 0; i < targets.size(); ++i)
            for (std::size_t r = 0; r < nr; ++r) {
                double best = 0.0;
                for (std::size_t k = 0; k < nk; ++k)
                    best = std::max(best, total_fidelity(fid[i][r][k], {f, cfg.roots[r]}, static_cast<int>(k)));
                inf[r] += (1.0 - best) / static_cast<double>(targets.size());
            }
        std::vector<double> imp(nr, std::numeric_limits<double>::quiet_NaN());
        if (two != cfg.roots.end()) {
            double base = inf[static_cast<std::size_t>(two - cfg.roots.begin())];
            for (std::size_t r = 0; r < nr; ++r)
                imp[r] = base > 0 ? (base - inf[r]) / base : 0.0;
        }
        out.mean_total_infidelity.push_back(inf);
        out.improvement_vs_2.push_back(imp);
    }
    return out;
}

std::string Fig9Result::to_csv() const {
    std::string s = "kind,f_iswap,root,k,value\n";
    for (std::size_t r = 0; r < roots.size(); ++r)
        for (std::size_t k = 0; k < mean_decomp_infidelity[r].size(); ++k)
            s += fmt::format("decomp_infidelity,,{},{},{}\n", roots[r], k, num(mean_decomp_infidelity[r][k]));
    for (std::size_t f = 0; f < f_iswap.size(); ++f)
        for (std::size_t r = 0; r < roots.size(); ++r) {
            s += fmt::format("total_infidelity,{},{},,{}\n", num(f_iswap[f]), roots[r], num(mean_total_infidelity[f][r]));
            if (!std::isnan(improvement_vs_2[f][r]))
                s += fmt::format("improvement_vs_2,{},{},,{}\n", num(f_iswap[f]), roots[r], num(improvement_vs_2[f][r]));
        }
    return s;
}

} // namespace codesign
