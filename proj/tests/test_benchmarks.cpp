#include <gtest/gtest.h>

#include "codesign/benchmarks.hpp"

using namespace codesign;

namespace {

int count_tag(const Circuit& c, GateTag t) {
    int n = 0;
    for (const auto& in : c.instructions())
        if (in.gate.tag() == t)
            ++n;
    return n;
}

int count_2q(const Circuit& c) {
    int n = 0;
    for (const auto& in : c.instructions())
        if (in.qubits.size() == 2)
            ++n;
    return n;
}

// Basis-state index with qubit q at bit (w - 1 - q).
std::size_t set_bit(std::size_t idx, int w, int q) { return idx | (std::size_t(1) << (w - 1 - q)); }
bool get_bit(std::size_t idx, int w, int q) { return (idx >> (w - 1 - q)) & 1u; }

} // namespace

TEST(Ghz, ChainStructure) {
    for (int n : {2, 5, 9}) {
        auto c = generate({Family::GHZ, n, 0});
        EXPECT_EQ(count_tag(c, GateTag::H), 1);
        EXPECT_EQ(count_tag(c, GateTag::CNOT), n - 1);
        EXPECT_EQ(metrics(c).critical_2q, n - 1);
    }
}

TEST(Qft, ControlledPhaseCount) {
    for (int n : {2, 5, 8}) {
        auto c = generate({Family::QFT, n, 0});
        EXPECT_EQ(count_tag(c, GateTag::CP), n * (n - 1) / 2);
        EXPECT_EQ(count_tag(c, GateTag::H), n);
        EXPECT_EQ(count_tag(c, GateTag::SWAP), 0);
    }
}

// Without the final reversal, QFT|0...0> is the uniform superposition and
// QFT|x> has amplitudes exp(2 pi i x y / N) / sqrt(N) on the bit-reversed output.
TEST(Qft, MatchesDftUpToBitReversal) {
    const int n = 3, dim = 8;
    auto u = circuit_unitary(generate({Family::QFT, n, 0}));
    auto rev = [](int y) { return ((y & 1) << 2) | (y & 2) | ((y >> 2) & 1); };
    for (int x = 0; x < dim; ++x)
        for (int y = 0; y < dim; ++y) {
            cplx expect = std::exp(cplx(0, 2 * kPi * x * y / dim)) / std::sqrt(double(dim));
            EXPECT_NEAR(std::abs(u(rev(y), x) - expect), 0.0, 1e-12) << x << "," << y;
        }
}

TEST(Qv, LayersAndBlocks) {
    for (int n : {4, 5, 8}) {
        auto c = generate({Family::QV, n, 3});
        EXPECT_EQ(count_tag(c, GateTag::Unitary2Q), n * (n / 2));
        EXPECT_EQ(count_2q(c), n * (n / 2));
        // Each layer touches every qubit at most once.
        for (int layer = 0; layer < n; ++layer) {
            std::vector<int> seen(static_cast<std::size_t>(n), 0);
            for (int j = 0; j < n / 2; ++j) {
                const auto& in = c.instructions()[static_cast<std::size_t>(layer * (n / 2) + j)];
                for (int q : in.qubits)
                    EXPECT_EQ(seen[static_cast<std::size_t>(q)]++, 0);
            }
        }
    }
}

TEST(Qv, DeterministicPerSeed) {
    auto a = generate({Family::QV, 6, 11});
    auto b = generate({Family::QV, 6, 11});
    auto c = generate({Family::QV, 6, 12});
    EXPECT_EQ(to_text(a), to_text(b));
    EXPECT_NE(to_text(a), to_text(c));
}

// Classical oracle: the adder maps (cin, a, b, 0) to (cin, a, a + b + cin mod 2^m, carry).
TEST(Cdkm, AddsOnBasisStates) {
    for (int m = 1; m <= 3; ++m) {
        const int w = 2 * m + 2;
        auto c = generate({Family::CDKM_ADDER, w, 0});
        auto u = circuit_unitary(c);
        for (int cin = 0; cin <= 1; ++cin)
            for (int a = 0; a < (1 << m); ++a)
                for (int b = 0; b < (1 << m); ++b) {
                    std::size_t in = 0;
                    if (cin)
                        in = set_bit(in, w, 0);
                    for (int i = 0; i < m; ++i) {
                        if ((a >> i) & 1)
                            in = set_bit(in, w, 1 + 2 * i);
                        if ((b >> i) & 1)
                            in = set_bit(in, w, 2 + 2 * i);
                    }
                    Eigen::Index out = 0;
                    u.col(static_cast<Eigen::Index>(in)).cwiseAbs().maxCoeff(&out);
                    ASSERT_NEAR(std::abs(u(out, static_cast<Eigen::Index>(in))), 1.0, 1e-9);
                    std::size_t o = static_cast<std::size_t>(out);
                    int sum = a + b + cin;
                    int got_a = 0, got_b = 0;
                    for (int i = 0; i < m; ++i) {
                        got_a |= int(get_bit(o, w, 1 + 2 * i)) << i;
                        got_b |= int(get_bit(o, w, 2 + 2 * i)) << i;
                    }
                    EXPECT_EQ(int(get_bit(o, w, 0)), cin);
                    EXPECT_EQ(got_a, a);
                    EXPECT_EQ(got_b, sum & ((1 << m) - 1));
                    EXPECT_EQ(int(get_bit(o, w, w - 1)), sum >> m);
                }
    }
}

TEST(QaoaHamsim, Structure) {
    auto q = generate({Family::QAOA_PROXY, 6, 2, 1, 2});
    EXPECT_EQ(count_tag(q, GateTag::RZZ), 2 * 6 * 5 / 2);
    EXPECT_EQ(count_tag(q, GateTag::RX), 2 * 6);
    auto h = generate({Family::HAMSIM, 6, 0, 3, 1});
    EXPECT_EQ(count_tag(h, GateTag::RZZ), 3 * 5);
    EXPECT_EQ(count_tag(h, GateTag::RX), 3 * 6);
}

TEST(Generate, InvalidWidths) {
    EXPECT_THROW(generate({Family::QV, 1, 0}), Error);
    EXPECT_THROW(generate({Family::CDKM_ADDER, 5, 0}), Error);
    EXPECT_THROW(generate({Family::CDKM_ADDER, 2, 0}), Error);
    try {
        generate({Family::GHZ, 0, 0});
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidWidth);
    }
}

TEST(Family, Names) {
    for (auto f : {Family::QV, Family::QFT, Family::CDKM_ADDER, Family::QAOA_PROXY, Family::HAMSIM, Family::GHZ})
        EXPECT_EQ(parse_family(family_name(f)), f);
    EXPECT_THROW(parse_family("bogus"), Error);
}
