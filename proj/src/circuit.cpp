#include "codesign/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <fmt/format.h>

namespace codesign {

const char* origin_name(Origin o) {
    switch (o) {
    case Origin::Algorithm: return "algorithm";
    case Origin::RoutingSwap: return "routing";
    case Origin::BasisTranslation: return "basis";
    }
    return "?";
}

Circuit::Circuit(int width) : width_(width) {
    if (width < 0)
        throw Error(ErrorCode::InvalidWidth, "negative circuit width");
}

void Circuit::add(const GateKind& g, std::vector<int> qubits, Origin origin) {
    if (static_cast<int>(qubits.size()) != g.arity())
        throw Error(ErrorCode::InvalidArgument, fmt::format("{} expects {} qubit(s)", g.mnemonic(), g.arity()));
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] < 0 || qubits[i] >= width_)
            throw Error(ErrorCode::InvalidArgument, fmt::format("qubit {} outside width {}", qubits[i], width_));
        for (std::size_t j = 0; j < i; ++j)
            if (qubits[i] == qubits[j])
                throw Error(ErrorCode::InvalidArgument, "repeated qubit in instruction");
    }
    ins_.push_back({g, std::move(qubits), origin});
}

Dag build_dag(const Circuit& c) {
    Dag d;
    const auto n = c.size();
    d.preds.assign(n, {});
    d.succs.assign(n, {});
    std::vector<int> last(static_cast<std::size_t>(c.width()), -1);
    for (std::size_t v = 0; v < n; ++v) {
        for (int q : c.instructions()[v].qubits) {
            int u = last[static_cast<std::size_t>(q)];
            if (u >= 0 && std::find(d.preds[v].begin(), d.preds[v].end(), u) == d.preds[v].end()) {
                d.preds[v].push_back(u);
                d.succs[static_cast<std::size_t>(u)].push_back(static_cast<int>(v));
            }
            last[static_cast<std::size_t>(q)] = static_cast<int>(v);
        }
    }
    return d;
}

double DurationTable::duration(const GateKind& g) const {
    if (g.arity() == 1)
        return 0.0;
    switch (g.tag()) {
    case GateTag::CNOT: return cnot;
    case GateTag::CZ: return cz;
    case GateTag::SYC: return syc;
    case GateTag::ISWAP: return iswap;
    case GateTag::NthRootIswap: return iswap / g.root();
    case GateTag::ZX: return std::max(g.param(0), 0.0) / (kPi / 2);
    default: return default_2q;
    }
}

CircuitMetrics metrics(const Circuit& c, const DurationTable& d, SwapCriticalMode mode) {
    CircuitMetrics m;
    const auto w = static_cast<std::size_t>(c.width());
    // Longest paths through the DAG, tracked as per-qubit frontier values.
    std::vector<int> c2(w, 0), cs(w, 0), path_swaps(w, 0);
    std::vector<double> cd(w, 0.0);
    for (const auto& in : c.instructions()) {
        const bool two = in.gate.arity() == 2;
        const bool swap = in.origin == Origin::RoutingSwap && in.gate.tag() == GateTag::SWAP;
        const double dur = d.duration(in.gate);
        if (two) {
            ++m.total_2q;
            m.total_duration += dur;
        }
        if (swap)
            ++m.total_swaps;
        int b2 = 0, bs = 0, bp = 0;
        double bd = 0.0;
        bool first = true;
        for (int q : in.qubits) {
            auto k = static_cast<std::size_t>(q);
            bs = std::max(bs, cs[k]);
            bd = std::max(bd, cd[k]);
            if (first || c2[k] > b2) {
                b2 = c2[k];
                bp = path_swaps[k];
            }
            first = false;
        }
        for (int q : in.qubits) {
            auto k = static_cast<std::size_t>(q);
            c2[k] = b2 + (two ? 1 : 0);
            cs[k] = bs + (swap ? 1 : 0);
            cd[k] = bd + dur;
            path_swaps[k] = bp + (swap ? 1 : 0);
        }
    }
    int best_c2 = -1;
    for (std::size_t k = 0; k < w; ++k) {
        m.critical_2q = std::max(m.critical_2q, c2[k]);
        m.weighted_duration = std::max(m.weighted_duration, cd[k]);
        if (mode == SwapCriticalMode::SwapWeighted) {
            m.critical_swaps = std::max(m.critical_swaps, cs[k]);
        } else if (c2[k] > best_c2) {
            best_c2 = c2[k];
            m.critical_swaps = path_swaps[k];
        }
    }
    return m;
}

// ---- consolidation ----

namespace {

const Mat4& swap_matrix() {
    static const Mat4 s = gate_matrix_2q(GateKind::swap()).matrix();
    return s;
}

Mat4 oriented(const Instruction& in, int q0) {
    Mat4 m = gate_matrix_2q(in.gate).matrix();
    if (in.qubits[0] != q0)
        m = swap_matrix() * m * swap_matrix();
    return m;
}

} // namespace

std::vector<Block> consolidate_2q_blocks(const Circuit& c) {
    std::vector<Block> out;
    std::vector<Block> open; // blocks not yet emitted
    std::vector<int> owner(static_cast<std::size_t>(c.width()), -1); // index into open
    auto close = [&](int idx) {
        if (idx < 0)
            return;
        Block& b = open[static_cast<std::size_t>(idx)];
        owner[static_cast<std::size_t>(b.q0)] = -1;
        owner[static_cast<std::size_t>(b.q1)] = -1;
        out.push_back(b);
    };
    for (const auto& in : c.instructions()) {
        if (in.gate.arity() == 1) {
            int q = in.qubits[0];
            int idx = owner[static_cast<std::size_t>(q)];
            if (idx < 0) {
                Block r;
                r.remnant = in;
                out.push_back(r);
                continue;
            }
            Block& b = open[static_cast<std::size_t>(idx)];
            Mat2 u = gate_matrix_1q(in.gate).matrix();
            Mat4 k = q == b.q0 ? kron(u, Mat2::Identity()) : kron(Mat2::Identity(), u);
            b.matrix = k * b.matrix;
            continue;
        }
        int a = in.qubits[0], bq = in.qubits[1];
        int ia = owner[static_cast<std::size_t>(a)], ib = owner[static_cast<std::size_t>(bq)];
        if (ia >= 0 && ia == ib) {
            Block& b = open[static_cast<std::size_t>(ia)];
            b.matrix = oriented(in, b.q0) * b.matrix;
            ++b.num_2q;
            if (in.origin == Origin::RoutingSwap)
                ++b.num_routing_swaps;
            continue;
        }
        // Close whichever block opened first so emission follows program order.
        if (ia >= 0 && ib >= 0 && ib < ia)
            std::swap(ia, ib);
        close(ia);
        close(ib);
        Block nb;
        nb.two_qubit = true;
        nb.q0 = a;
        nb.q1 = bq;
        nb.matrix = gate_matrix_2q(in.gate).matrix();
        nb.num_2q = 1;
        nb.num_routing_swaps = in.origin == Origin::RoutingSwap ? 1 : 0;
        open.push_back(nb);
        owner[static_cast<std::size_t>(a)] = owner[static_cast<std::size_t>(bq)] = static_cast<int>(open.size() - 1);
    }
    // Flush in opening order.
    std::vector<int> pending;
    for (int q = 0; q < c.width(); ++q) {
        int idx = owner[static_cast<std::size_t>(q)];
        if (idx >= 0 && std::find(pending.begin(), pending.end(), idx) == pending.end())
            pending.push_back(idx);
    }
    std::sort(pending.begin(), pending.end());
    for (int idx : pending)
        close(idx);
    return out;
}

Circuit blocks_to_circuit(int width, const std::vector<Block>& blocks) {
    Circuit c(width);
    for (const auto& b : blocks) {
        if (b.two_qubit)
            c.add(GateKind::unitary(Unitary4::checked(b.matrix, 1e-8)), {b.q0, b.q1});
        else
            c.add(b.remnant);
    }
    return c;
}

// ---- text format ----

namespace {

std::string fmt_real(double v) { return fmt::format("{:.17g}", v); }

std::vector<double> matrix_params(const GateKind& g) {
    std::vector<double> p;
    if (const Mat4* m = g.matrix4_payload()) {
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                p.push_back((*m)(r, c).real());
                p.push_back((*m)(r, c).imag());
            }
    } else if (const Mat2* m2 = g.matrix2_payload()) {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                p.push_back((*m2)(r, c).real());
                p.push_back((*m2)(r, c).imag());
            }
    }
    return p;
}

GateKind parse_gate(const std::string& name, const std::vector<double>& p, int lineno) {
    auto need = [&](std::size_t k) {
        if (p.size() != k)
            throw Error(ErrorCode::Parse, fmt::format("line {}: {} takes {} parameter(s)", lineno, name, k));
    };
    static const std::map<std::string, GateTag> simple1 = {
        {"I", GateTag::I}, {"H", GateTag::H}, {"X", GateTag::X}, {"Y", GateTag::Y}, {"Z", GateTag::Z},
        {"S", GateTag::S}, {"SDG", GateTag::SDG}, {"T", GateTag::T}, {"TDG", GateTag::TDG}, {"SX", GateTag::SX}};
    if (auto it = simple1.find(name); it != simple1.end()) {
        need(0);
        return GateKind::single(it->second);
    }
    if (name == "CNOT" || name == "CX") { need(0); return GateKind::cnot(); }
    if (name == "CZ") { need(0); return GateKind::cz(); }
    if (name == "SWAP") { need(0); return GateKind::swap(); }
    if (name == "ISWAP") { need(0); return GateKind::iswap(); }
    if (name == "SYC") { need(0); return GateKind::syc(); }
    if (name == "NTH_ROOT_ISWAP") {
        need(1);
        if (p[0] != std::floor(p[0]) || p[0] < 1)
            throw Error(ErrorCode::Parse, fmt::format("line {}: root must be a positive integer", lineno));
        return GateKind::nth_root_iswap(static_cast<int>(p[0]));
    }
    if (name == "FSIM") { need(2); return GateKind::fsim(p[0], p[1]); }
    if (name == "ZX") { need(1); return GateKind::zx(p[0]); }
    if (name == "CP") { need(1); return GateKind::cp(p[0]); }
    if (name == "RZZ") { need(1); return GateKind::rzz(p[0]); }
    if (name == "RX") { need(1); return GateKind::rotation(GateTag::RX, p[0]); }
    if (name == "RY") { need(1); return GateKind::rotation(GateTag::RY, p[0]); }
    if (name == "RZ") { need(1); return GateKind::rotation(GateTag::RZ, p[0]); }
    if (name == "U3") { need(3); return GateKind::u3(p[0], p[1], p[2]); }
    if (name == "UNITARY") {
        need(32);
        Mat4 m;
        for (int i = 0; i < 16; ++i)
            m(i / 4, i % 4) = cplx(p[static_cast<std::size_t>(2 * i)], p[static_cast<std::size_t>(2 * i + 1)]);
        return GateKind::unitary(Unitary4::checked(m, 1e-8));
    }
    if (name == "UNITARY1") {
        need(8);
        Mat2 m;
        for (int i = 0; i < 4; ++i)
            m(i / 2, i % 2) = cplx(p[static_cast<std::size_t>(2 * i)], p[static_cast<std::size_t>(2 * i + 1)]);
        return GateKind::unitary(Unitary2::checked(m, 1e-8));
    }
    throw Error(ErrorCode::Parse, fmt::format("line {}: unknown gate '{}'", lineno, name));
}

} // namespace

std::string to_text(const Circuit& c) {
    std::string out = fmt::format("qubits {}\n", c.width());
    for (const auto& in : c.instructions()) {
        std::string head;
        auto mp = matrix_params(in.gate);
        if (!mp.empty()) {
            head = in.gate.mnemonic();
            head += '(';
            for (std::size_t i = 0; i < mp.size(); ++i) {
                if (i)
                    head += ',';
                head += fmt_real(mp[i]);
            }
            head += ')';
        } else {
            head = in.gate.label();
        }
        out += head;
        for (int q : in.qubits)
            out += fmt::format(" {}", q);
        if (in.origin != Origin::Algorithm)
            out += fmt::format(" {}", origin_name(in.origin));
        out += '\n';
    }
    return out;
}

Circuit from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_header = false;
    Circuit c(0);
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok))
            continue;
        if (!have_header) {
            int w = -1;
            if (tok != "qubits" || !(ls >> w) || w < 0)
                throw Error(ErrorCode::Parse, fmt::format("line {}: expected 'qubits N' header", lineno));
            c = Circuit(w);
            have_header = true;
            continue;
        }
        // Gate token may contain parentheses; parameters have no spaces.
        std::string name = tok;
        std::vector<double> params;
        auto lp = tok.find('(');
        if (lp != std::string::npos) {
            auto rp = tok.rfind(')');
            if (rp == std::string::npos || rp < lp)
                throw Error(ErrorCode::Parse, fmt::format("line {}: unbalanced parentheses", lineno));
            name = tok.substr(0, lp);
            std::string inner = tok.substr(lp + 1, rp - lp - 1);
            std::size_t pos = 0;
            while (pos <= inner.size() && !inner.empty()) {
                auto comma = inner.find(',', pos);
                std::string num = inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
                char* end = nullptr;
                double v = std::strtod(num.c_str(), &end);
                if (num.empty() || end != num.c_str() + num.size())
                    throw Error(ErrorCode::Parse, fmt::format("line {}: bad number '{}'", lineno, num));
                params.push_back(v);
                if (comma == std::string::npos)
                    break;
                pos = comma + 1;
            }
        }
        for (auto& ch : name)
            ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        GateKind g = parse_gate(name, params, lineno);
        std::vector<int> qs;
        Origin origin = Origin::Algorithm;
        while (ls >> tok) {
            if (tok == "routing") {
                origin = Origin::RoutingSwap;
            } else if (tok == "basis") {
                origin = Origin::BasisTranslation;
            } else if (tok == "algorithm") {
                origin = Origin::Algorithm;
            } else {
                char* end = nullptr;
                long q = std::strtol(tok.c_str(), &end, 10);
                if (end != tok.c_str() + tok.size())
                    throw Error(ErrorCode::Parse, fmt::format("line {}: bad qubit '{}'", lineno, tok));
                qs.push_back(static_cast<int>(q));
            }
        }
        try {
            c.add(g, qs, origin);
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, fmt::format("line {}: {}", lineno, e.what()));
        }
    }
    if (!have_header)
        throw Error(ErrorCode::Parse, "missing 'qubits N' header");
    return c;
}

// ---- simulation ----

void apply_instruction(Eigen::VectorXcd& s, int width, const Instruction& in) {
    const Eigen::Index dim = s.size();
    if (in.gate.arity() == 1) {
        const Mat2 u = gate_matrix_1q(in.gate).matrix();
        const Eigen::Index m = Eigen::Index(1) << (width - 1 - in.qubits[0]);
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (i & m)
                continue;
            cplx a0 = s(i), a1 = s(i | m);
            s(i) = u(0, 0) * a0 + u(0, 1) * a1;
            s(i | m) = u(1, 0) * a0 + u(1, 1) * a1;
        }
        return;
    }
    const Mat4 u = gate_matrix_2q(in.gate).matrix();
    const Eigen::Index m0 = Eigen::Index(1) << (width - 1 - in.qubits[0]);
    const Eigen::Index m1 = Eigen::Index(1) << (width - 1 - in.qubits[1]);
    for (Eigen::Index i = 0; i < dim; ++i) {
        if ((i & m0) || (i & m1))
            continue;
        const Eigen::Index idx[4] = {i, i | m1, i | m0, i | m0 | m1};
        cplx a[4];
        for (int k = 0; k < 4; ++k)
            a[k] = s(idx[k]);
        for (int r = 0; r < 4; ++r) {
            cplx acc = 0;
            for (int k = 0; k < 4; ++k)
                acc += u(r, k) * a[k];
            s(idx[r]) = acc;
        }
    }
}

Eigen::VectorXcd simulate(const Circuit& c, const Eigen::VectorXcd& initial) {
    if (initial.size() != (Eigen::Index(1) << c.width()))
        throw Error(ErrorCode::InvalidDimensions, "state size does not match circuit width");
    Eigen::VectorXcd s = initial;
    for (const auto& in : c.instructions())
        apply_instruction(s, c.width(), in);
    return s;
}

MatX circuit_unitary(const Circuit& c) {
    if (c.width() > 12)
        throw Error(ErrorCode::TooManyQubits, "dense unitary limited to 12 qubits");
    const Eigen::Index dim = Eigen::Index(1) << c.width();
    MatX u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
        e(col) = 1;
        u.col(col) = simulate(c, e);
    }
    return u;
}

} // namespace codesign
