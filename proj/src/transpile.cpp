#include "codesign/transpile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

namespace codesign {

// ---- layout ----

std::vector<int> Layout::p2l() const {
    std::vector<int> out(static_cast<std::size_t>(num_physical), -1);
    for (std::size_t i = 0; i < l2p.size(); ++i)
        out[static_cast<std::size_t>(l2p[i])] = static_cast<int>(i);
    return out;
}

void Layout::validate(const CouplingGraph& g) const {
    if (num_physical != g.size())
        throw Error(ErrorCode::InvalidArgument, "layout size does not match graph");
    std::vector<char> used(static_cast<std::size_t>(num_physical), 0);
    for (int p : l2p) {
        if (p < 0 || p >= num_physical)
            throw Error(ErrorCode::InvalidArgument, "layout maps outside the graph");
        if (used[static_cast<std::size_t>(p)]++)
            throw Error(ErrorCode::InvalidArgument, "layout is not injective");
    }
}

Layout dense_layout(const Circuit& c, const CouplingGraph& g) {
    const int w = c.width();
    const int n = g.size();
    if (w > n)
        throw Error(ErrorCode::TooManyQubits, fmt::format("circuit width {} exceeds {} physical qubits", w, n));
    Layout l;
    l.num_physical = n;
    if (w == 0)
        return l;

    int start = 0;
    for (int v = 1; v < n; ++v)
        if (g.degree(v) > g.degree(start))
            start = v;
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    std::vector<int> inside(static_cast<std::size_t>(n), 0); // edges into the chosen set
    std::vector<int> chosen{start};
    in[static_cast<std::size_t>(start)] = 1;
    for (int nb : g.neighbors(start))
        ++inside[static_cast<std::size_t>(nb)];
    while (static_cast<int>(chosen.size()) < w) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (in[static_cast<std::size_t>(v)] || inside[static_cast<std::size_t>(v)] == 0)
                continue;
            if (best < 0 || inside[static_cast<std::size_t>(v)] > inside[static_cast<std::size_t>(best)])
                best = v;
        }
        chosen.push_back(best);
        in[static_cast<std::size_t>(best)] = 1;
        for (int nb : g.neighbors(best))
            ++inside[static_cast<std::size_t>(nb)];
    }

    std::vector<int> interactions(static_cast<std::size_t>(w), 0);
    for (const auto& ins : c.instructions())
        if (ins.gate.arity() == 2)
            for (int q : ins.qubits)
                ++interactions[static_cast<std::size_t>(q)];
    std::vector<int> logical(static_cast<std::size_t>(w));
    std::iota(logical.begin(), logical.end(), 0);
    std::stable_sort(logical.begin(), logical.end(), [&](int a, int b) {
        return interactions[static_cast<std::size_t>(a)] > interactions[static_cast<std::size_t>(b)];
    });
    std::sort(chosen.begin(), chosen.end());
    std::stable_sort(chosen.begin(), chosen.end(), [&](int a, int b) {
        return inside[static_cast<std::size_t>(a)] > inside[static_cast<std::size_t>(b)];
    });
    l.l2p.assign(static_cast<std::size_t>(w), -1);
    for (int i = 0; i < w; ++i)
        l.l2p[static_cast<std::size_t>(logical[static_cast<std::size_t>(i)])] = chosen[static_cast<std::size_t>(i)];
    return l;
}

// ---- routing ----

namespace {

struct Term {
    int a, b;    // logical qubits
    double w;
    bool front;
};

struct RouteState {
    std::vector<int> l2p, p2l;

    void swap_physical(int p, int q) {
        int a = p2l[static_cast<std::size_t>(p)], b = p2l[static_cast<std::size_t>(q)];
        std::swap(p2l[static_cast<std::size_t>(p)], p2l[static_cast<std::size_t>(q)]);
        if (a >= 0)
            l2p[static_cast<std::size_t>(a)] = q;
        if (b >= 0)
            l2p[static_cast<std::size_t>(b)] = p;
    }
};

class Router {
public:
    Router(const Circuit& c, const CouplingGraph& g, const Layout& l, std::uint64_t seed, const RoutingOptions& opt)
        : c_(c), g_(g), seed_(seed), opt_(opt), dag_(build_dag(c)) {
        st_.l2p = l.l2p;
        st_.p2l = l.p2l();
        out_.circuit = Circuit(g.size());
        out_.initial_layout = l;
        pending_.resize(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            pending_[i] = static_cast<int>(dag_.preds[i].size());
            if (pending_[i] == 0)
                front_.insert(static_cast<int>(i));
        }
        done_.assign(c.size(), 0);
    }

    RoutedCircuit run() {
        std::uint64_t step = 0;
        while (true) {
            execute_ready();
            if (front_.empty())
                break;
            collect_terms();
            std::vector<std::pair<int, int>> best_swaps;
            std::tuple<int, std::size_t, double> best_score{0, 0, 0.0};
            bool have = false;
            for (int t = 0; t < opt_.trials; ++t) {
                Rng rng(derive_seed(derive_seed(seed_, step), static_cast<std::uint64_t>(t)));
                auto [swaps, score] = trial(rng);
                if (!have || score < best_score) {
                    best_score = score;
                    best_swaps = std::move(swaps);
                    have = true;
                }
            }
            if (best_swaps.empty()) {
                // Forced progress: walk the oldest pending gate's endpoints together.
                const Instruction& in = c_.instructions()[static_cast<std::size_t>(*front_.begin())];
                int pa = st_.l2p[static_cast<std::size_t>(in.qubits[0])];
                int pb = st_.l2p[static_cast<std::size_t>(in.qubits[1])];
                auto path = g_.shortest_path(pa, pb);
                for (std::size_t i = 0; i + 2 < path.size(); ++i)
                    best_swaps.push_back({path[i], path[i + 1]});
            }
            for (auto [p, q] : best_swaps)
                emit_swap(p, q);
            ++step;
        }
        out_.final_layout.l2p = st_.l2p;
        out_.final_layout.num_physical = g_.size();
        return std::move(out_);
    }

private:
    int dist_l(const RouteState& s, int a, int b) const {
        return g_.distance(s.l2p[static_cast<std::size_t>(a)], s.l2p[static_cast<std::size_t>(b)]);
    }

    void emit_swap(int p, int q) {
        out_.swap_log.push_back({out_.circuit.size(), p, q});
        out_.circuit.add(GateKind::swap(), {p, q}, Origin::RoutingSwap);
        st_.swap_physical(p, q);
    }

    void complete(int i) {
        done_[static_cast<std::size_t>(i)] = 1;
        front_.erase(i);
        for (int s : dag_.succs[static_cast<std::size_t>(i)])
            if (--pending_[static_cast<std::size_t>(s)] == 0)
                front_.insert(s);
    }

    void execute_ready() {
        bool progress = true;
        while (progress) {
            progress = false;
            std::vector<int> snapshot(front_.begin(), front_.end());
            for (int i : snapshot) {
                const Instruction& in = c_.instructions()[static_cast<std::size_t>(i)];
                std::vector<int> phys;
                for (int q : in.qubits)
                    phys.push_back(st_.l2p[static_cast<std::size_t>(q)]);
                if (in.gate.arity() == 2 && !g_.adjacent(phys[0], phys[1]))
                    continue;
                out_.circuit.add(in.gate, phys, in.origin);
                complete(i);
                progress = true;
            }
        }
    }

    // Front gates at layer 0, then later 2Q gates by dependency layer up to the lookahead depth.
    void collect_terms() {
        terms_.clear();
        by_logical_.assign(static_cast<std::size_t>(c_.width()), {});
        std::vector<int> layer(static_cast<std::size_t>(c_.width()), 0);
        const std::size_t cap = static_cast<std::size_t>(opt_.lookahead_layers + 1) * static_cast<std::size_t>(std::max(c_.width(), 1)) * 2;
        std::size_t scanned = 0;
        for (std::size_t i = static_cast<std::size_t>(*front_.begin()); i < c_.size() && scanned < cap; ++i) {
            if (done_[i])
                continue;
            ++scanned;
            const Instruction& in = c_.instructions()[i];
            if (front_.count(static_cast<int>(i))) {
                add_term(in.qubits[0], in.qubits[1], 1.0, true);
                continue;
            }
            int l = 0;
            for (int q : in.qubits)
                l = std::max(l, layer[static_cast<std::size_t>(q)]);
            if (in.gate.arity() == 2) {
                ++l;
                if (l <= opt_.lookahead_layers)
                    add_term(in.qubits[0], in.qubits[1], std::pow(opt_.decay, l), false);
            }
            for (int q : in.qubits)
                layer[static_cast<std::size_t>(q)] = l;
        }
        front_logical_.clear();
        for (const auto& t : terms_)
            if (t.front) {
                front_logical_.push_back(t.a);
                front_logical_.push_back(t.b);
            }
    }

    void add_term(int a, int b, double w, bool front) {
        by_logical_[static_cast<std::size_t>(a)].push_back(terms_.size());
        by_logical_[static_cast<std::size_t>(b)].push_back(terms_.size());
        terms_.push_back({a, b, w, front});
    }

    double delta(const RouteState& s, int p, int q) const {
        double d = 0.0;
        const int lp = s.p2l[static_cast<std::size_t>(p)], lq = s.p2l[static_cast<std::size_t>(q)];
        auto side = [&](int l, int from, int to, int other) {
            if (l < 0)
                return;
            for (std::size_t ti : by_logical_[static_cast<std::size_t>(l)]) {
                const Term& t = terms_[ti];
                int x = t.a == l ? t.b : t.a;
                if (x == other)
                    continue;
                int px = s.l2p[static_cast<std::size_t>(x)];
                d += t.w * (g_.distance(to, px) - g_.distance(from, px));
            }
        };
        side(lp, p, q, lq);
        side(lq, q, p, lp);
        return d;
    }

    std::pair<std::vector<std::pair<int, int>>, std::tuple<int, std::size_t, double>> trial(Rng& rng) const {
        RouteState s = st_;
        std::vector<std::pair<int, int>> swaps;
        auto front_cost = [&] {
            int fc = 0;
            for (const auto& t : terms_)
                if (t.front)
                    fc += dist_l(s, t.a, t.b) - 1;
            return fc;
        };
        double cost = 0.0;
        for (const auto& t : terms_)
            cost += t.w * (dist_l(s, t.a, t.b) - 1);
        int fc = front_cost();
        const int max_swaps = 2 * g_.size();
        std::vector<std::pair<int, int>> cand;
        std::vector<double> gain;
        while (fc > 0 && static_cast<int>(swaps.size()) < max_swaps) {
            cand.clear();
            for (int l : front_logical_) {
                int p = s.l2p[static_cast<std::size_t>(l)];
                for (int nb : g_.neighbors(p))
                    cand.push_back({std::min(p, nb), std::max(p, nb)});
            }
            std::sort(cand.begin(), cand.end());
            cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
            gain.clear();
            double total = 0.0;
            for (auto [p, q] : cand) {
                double d = delta(s, p, q);
                double gv = d < -1e-12 ? -d : 0.0;
                gain.push_back(gv);
                total += gv;
            }
            if (total <= 0.0)
                break;
            double r = rng.uniform() * total;
            std::size_t pick = 0;
            for (; pick + 1 < cand.size(); ++pick) {
                if (r < gain[pick])
                    break;
                r -= gain[pick];
            }
            while (gain[pick] == 0.0)
                --pick; // rounding at the tail of the roulette
            auto [p, q] = cand[pick];
            cost -= gain[pick];
            s.swap_physical(p, q);
            swaps.push_back({p, q});
            fc = front_cost();
        }
        return {swaps, {fc, swaps.size(), cost}};
    }

    const Circuit& c_;
    const CouplingGraph& g_;
    std::uint64_t seed_;
    RoutingOptions opt_;
    Dag dag_;
    RouteState st_;
    RoutedCircuit out_;
    std::vector<int> pending_;
    std::vector<char> done_;
    std::set<int> front_;
    std::vector<Term> terms_;
    std::vector<std::vector<std::size_t>> by_logical_;
    std::vector<int> front_logical_; // endpoints of front gates
};

} // namespace

RoutedCircuit stochastic_route(const Circuit& c, const CouplingGraph& g, const Layout& l, std::uint64_t seed,
                               const RoutingOptions& opt) {
    l.validate(g);
    if (static_cast<int>(l.l2p.size()) != c.width())
        throw Error(ErrorCode::InvalidArgument, "layout does not cover the circuit width");
    if (opt.trials < 1)
        throw Error(ErrorCode::InvalidArgument, "routing needs at least one trial");
    Router r(c, g, l, seed, opt);
    return r.run();
}

// ---- basis translation ----

namespace {

Circuit cancel_swap_pairs(const Circuit& c) {
    std::vector<char> drop(c.size(), 0);
    std::vector<int> last(static_cast<std::size_t>(c.width()), -1);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto& in = c.instructions()[i];
        bool cancelled = false;
        if (in.origin == Origin::RoutingSwap && in.gate.tag() == GateTag::SWAP) {
            int j0 = last[static_cast<std::size_t>(in.qubits[0])], j1 = last[static_cast<std::size_t>(in.qubits[1])];
            if (j0 >= 0 && j0 == j1) {
                const auto& prev = c.instructions()[static_cast<std::size_t>(j0)];
                if (prev.origin == Origin::RoutingSwap && prev.gate.tag() == GateTag::SWAP) {
                    drop[static_cast<std::size_t>(j0)] = drop[i] = 1;
                    cancelled = true;
                }
            }
        }
        for (int q : in.qubits)
            last[static_cast<std::size_t>(q)] = cancelled ? -1 : static_cast<int>(i);
    }
    Circuit out(c.width());
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!drop[i])
            out.add(c.instructions()[i]);
    return out;
}

bool is_identity_up_to_phase(const Mat2& m) {
    return std::abs(std::abs(m.trace()) - 2.0) < 1e-12;
}

} // namespace

double modeled_gate_fidelity(const GateKind& g, const DurationTable& d, double f_iswap) {
    if (g.arity() == 1)
        return 1.0;
    return 1.0 - (1.0 - f_iswap) * d.duration(g) / d.iswap;
}

TranslationResult basis_translate(const RoutedCircuit& rc, const GateKind& basis, const DurationTable& d,
                                  std::optional<FidelityModel> fidelity, const TranslateOptions& opt,
                                  BasisDecomposer* decomposer) {
    std::optional<BasisDecomposer> own;
    if (!decomposer) {
        own.emplace(basis, opt.optimizer);
        decomposer = &*own;
    }
    const Circuit src = opt.peephole ? cancel_swap_pairs(rc.circuit) : rc.circuit;
    auto blocks = consolidate_2q_blocks(src);
    TranslationResult res;
    res.circuit = Circuit(src.width());
    for (const auto& b : blocks) {
        if (!b.two_qubit) {
            if (opt.synthesize)
                res.circuit.add(b.remnant.gate, b.remnant.qubits, b.remnant.origin);
            continue;
        }
        Unitary4 u = Unitary4::checked(b.matrix, 1e-8);
        if (!opt.synthesize) {
            int k = decomposer->count(weyl_coordinates(u));
            for (int j = 0; j < k; ++j)
                res.circuit.add(basis, {b.q0, b.q1}, Origin::BasisTranslation);
            continue;
        }
        DecompResult r = decomposer->decompose(u);
        res.decomp_fidelity *= r.decomp_fidelity;
        for (std::size_t j = 0; j < r.locals.size(); ++j) {
            if (j > 0)
                res.circuit.add(basis, {b.q0, b.q1}, Origin::BasisTranslation);
            const LocalPair& lp = r.locals[j];
            if (!is_identity_up_to_phase(lp.a.matrix()))
                res.circuit.add(GateKind::unitary(lp.a), {b.q0}, Origin::BasisTranslation);
            if (!is_identity_up_to_phase(lp.b.matrix()))
                res.circuit.add(GateKind::unitary(lp.b), {b.q1}, Origin::BasisTranslation);
        }
    }
    res.metrics = metrics(res.circuit, d, opt.swap_mode);
    CircuitMetrics routed = metrics(src, d, opt.swap_mode);
    res.metrics.total_swaps = routed.total_swaps;
    res.metrics.critical_swaps = routed.critical_swaps;
    res.modeled_fidelity = res.decomp_fidelity;
    if (fidelity)
        for (const auto& in : res.circuit.instructions())
            res.modeled_fidelity *= modeled_gate_fidelity(in.gate, d, fidelity->f_iswap);
    return res;
}

GateKind parse_basis(const std::string& s) {
    std::string k = s;
    for (auto& ch : k)
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (k == "cnot" || k == "cx")
        return GateKind::cnot();
    if (k == "sqiswap" || k == "sqrt_iswap" || k == "sqrt-iswap")
        return GateKind::sqrt_iswap();
    if (k == "iswap")
        return GateKind::iswap();
    if (k == "syc")
        return GateKind::syc();
    for (const char* prefix : {"root:", "nth_root_iswap:"}) {
        std::string p = prefix;
        if (k.rfind(p, 0) == 0) {
            try {
                int n = std::stoi(k.substr(p.size()));
                if (n >= 1 && n <= 8)
                    return GateKind::nth_root_iswap(n);
            } catch (const std::exception&) {
            }
            break;
        }
    }
    throw Error(ErrorCode::Config, "unknown basis '" + s + "'");
}

std::string basis_name(const GateKind& g) {
    switch (g.tag()) {
    case GateTag::CNOT: return "cnot";
    case GateTag::ISWAP: return "iswap";
    case GateTag::SYC: return "syc";
    case GateTag::NthRootIswap: return g.root() == 2 ? "sqiswap" : fmt::format("root:{}", g.root());
    default: return g.label();
    }
}

PipelineResult run_pipeline(const Circuit& c, const CouplingGraph& g, const GateKind& basis, const DurationTable& d,
                            std::uint64_t routing_seed, const PipelineOptions& opt, Circuit* translated) {
    if (c.width() > g.size())
        throw Error(ErrorCode::TooManyQubits, fmt::format("width {} exceeds {} physical qubits", c.width(), g.size()));
    Layout l = dense_layout(c, g);
    RoutedCircuit rc = stochastic_route(c, g, l, routing_seed, opt.routing);
    TranslationResult tr = basis_translate(rc, basis, d, FidelityModel{opt.f_iswap, 1}, opt.translate);
    PipelineResult out;
    out.metrics = tr.metrics;
    out.decomp_fidelity = tr.decomp_fidelity;
    out.modeled_fidelity = tr.modeled_fidelity;
    auto blocks = consolidate_2q_blocks(rc.circuit);
    out.num_blocks = static_cast<int>(std::count_if(blocks.begin(), blocks.end(), [](const Block& b) { return b.two_qubit; }));
    if (translated)
        *translated = std::move(tr.circuit);
    return out;
}

PipelineResult run_pipeline(const BenchmarkSpec& spec, const CouplingGraph& g, const GateKind& basis,
                            const DurationTable& d, std::uint64_t routing_seed, const PipelineOptions& opt) {
    if (spec.width > g.size())
        throw Error(ErrorCode::TooManyQubits, fmt::format("width {} exceeds {} physical qubits", spec.width, g.size()));
    return run_pipeline(generate(spec), g, basis, d, routing_seed, opt);
}

MatX layout_permutation(const Layout& l) {
    const int w = static_cast<int>(l.l2p.size());
    if (w != l.num_physical)
        throw Error(ErrorCode::InvalidArgument, "layout permutation needs a full layout");
    const Eigen::Index dim = Eigen::Index(1) << w;
    MatX p = MatX::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        Eigen::Index y = 0;
        for (int i = 0; i < w; ++i)
            if (x & (Eigen::Index(1) << (w - 1 - i)))
                y |= Eigen::Index(1) << (w - 1 - l.l2p[static_cast<std::size_t>(i)]);
        p(y, x) = 1;
    }
    return p;
}

} // namespace codesign
