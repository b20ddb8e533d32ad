#include "codesign/benchmarks.hpp"

#include <numeric>

#include <fmt/format.h>

namespace codesign {

namespace {

void require_width(bool ok, const char* what) {
    if (!ok)
        throw Error(ErrorCode::InvalidWidth, what);
}

// Toffoli via the textbook 6-CX network; T = RZ(pi/4) up to global phase.
void ccx(Circuit& c, int a, int b, int t) {
    const double q = kPi / 4;
    c.h(t);
    c.cx(b, t);
    c.rz(t, -q);
    c.cx(a, t);
    c.rz(t, q);
    c.cx(b, t);
    c.rz(t, -q);
    c.cx(a, t);
    c.rz(b, q);
    c.rz(t, q);
    c.h(t);
    c.cx(a, b);
    c.rz(a, q);
    c.rz(b, -q);
    c.cx(a, b);
}

void maj(Circuit& c, int a, int b, int x) {
    c.cx(x, b);
    c.cx(x, a);
    ccx(c, a, b, x);
}

void uma(Circuit& c, int a, int b, int x) {
    ccx(c, a, b, x);
    c.cx(x, a);
    c.cx(a, b);
}

Circuit qv(const BenchmarkSpec& s) {
    Circuit c(s.width);
    Rng rng(derive_seed(s.seed, 0x5156));
    std::vector<int> perm(static_cast<std::size_t>(s.width));
    for (int layer = 0; layer < s.width; ++layer) {
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        for (int i = 0; i + 1 < s.width; i += 2)
            c.add(GateKind::unitary(haar_random_2q(rng)), {perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(i + 1)]});
    }
    return c;
}

Circuit qft(const BenchmarkSpec& s) {
    Circuit c(s.width);
    for (int j = 0; j < s.width; ++j) {
        c.h(j);
        for (int k = j + 1; k < s.width; ++k)
            c.add(GateKind::cp(kPi / static_cast<double>(1ULL << (k - j))), {k, j});
    }
    return c;
}

// Qubit order: cin, a0, b0, a1, b1, ..., a_{m-1}, b_{m-1}, cout.
Circuit cdkm(const BenchmarkSpec& s) {
    require_width(s.width >= 4 && s.width % 2 == 0, "CDKM adder needs width 2m+2 with m >= 1");
    const int m = (s.width - 2) / 2;
    Circuit c(s.width);
    auto a = [](int i) { return 1 + 2 * i; };
    auto b = [](int i) { return 2 + 2 * i; };
    const int cin = 0, cout = s.width - 1;
    maj(c, cin, b(0), a(0));
    for (int i = 1; i < m; ++i)
        maj(c, a(i - 1), b(i), a(i));
    c.cx(a(m - 1), cout);
    for (int i = m - 1; i >= 1; --i)
        uma(c, a(i - 1), b(i), a(i));
    uma(c, cin, b(0), a(0));
    return c;
}

Circuit qaoa(const BenchmarkSpec& s) {
    require_width(s.qaoa_layers >= 1, "QAOA needs at least one layer");
    Circuit c(s.width);
    Rng rng(derive_seed(s.seed, 0x514141));
    std::vector<double> w;
    for (int i = 0; i < s.width; ++i)
        for (int j = i + 1; j < s.width; ++j)
            w.push_back(static_cast<double>(rng.sign()));
    const double gamma = 1.0, beta = 1.0;
    for (int q = 0; q < s.width; ++q)
        c.h(q);
    for (int layer = 0; layer < s.qaoa_layers; ++layer) {
        std::size_t e = 0;
        for (int i = 0; i < s.width; ++i)
            for (int j = i + 1; j < s.width; ++j)
                c.add(GateKind::rzz(gamma * w[e++]), {i, j});
        for (int q = 0; q < s.width; ++q)
            c.rx(q, beta);
    }
    return c;
}

Circuit hamsim(const BenchmarkSpec& s) {
    require_width(s.trotter_steps >= 1, "HAMSIM needs at least one Trotter step");
    const double j_dt = 0.3, h_dt = 0.2;
    Circuit c(s.width);
    for (int step = 0; step < s.trotter_steps; ++step) {
        for (int q = 0; q + 1 < s.width; ++q)
            c.add(GateKind::rzz(2.0 * j_dt), {q, q + 1});
        for (int q = 0; q < s.width; ++q)
            c.rx(q, 2.0 * h_dt);
    }
    return c;
}

Circuit ghz(const BenchmarkSpec& s) {
    Circuit c(s.width);
    c.h(0);
    for (int q = 0; q + 1 < s.width; ++q)
        c.cx(q, q + 1);
    return c;
}

} // namespace

const char* family_name(Family f) {
    switch (f) {
    case Family::QV: return "qv";
    case Family::QFT: return "qft";
    case Family::CDKM_ADDER: return "cdkm";
    case Family::QAOA_PROXY: return "qaoa";
    case Family::HAMSIM: return "hamsim";
    case Family::GHZ: return "ghz";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    if (s == "qv" || s == "QV")
        return Family::QV;
    if (s == "qft" || s == "QFT")
        return Family::QFT;
    if (s == "cdkm" || s == "adder" || s == "CDKM_ADDER")
        return Family::CDKM_ADDER;
    if (s == "qaoa" || s == "QAOA_PROXY")
        return Family::QAOA_PROXY;
    if (s == "hamsim" || s == "HAMSIM")
        return Family::HAMSIM;
    if (s == "ghz" || s == "GHZ")
        return Family::GHZ;
    throw Error(ErrorCode::Config, "unknown benchmark family '" + s + "'");
}

Circuit generate(const BenchmarkSpec& spec) {
    require_width(spec.width >= 2, "benchmark width must be >= 2");
    switch (spec.family) {
    case Family::QV: return qv(spec);
    case Family::QFT: return qft(spec);
    case Family::CDKM_ADDER: return cdkm(spec);
    case Family::QAOA_PROXY: return qaoa(spec);
    case Family::HAMSIM: return hamsim(spec);
    case Family::GHZ: return ghz(spec);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown family");
}

} // namespace codesign
