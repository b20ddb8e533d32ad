#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "codesign/topology.hpp"
#include "codesign/errors.hpp"

using namespace codesign;

namespace {

void expect_stats(const CouplingGraph& g, int dia, double avg_d, double avg_c, double tol = 0.005) {
    auto s = stats(g);
    EXPECT_EQ(s.diameter, dia) << g.name();
    EXPECT_NEAR(s.avg_distance, avg_d, tol) << g.name();
    EXPECT_NEAR(s.avg_connectivity, avg_c, tol) << g.name();
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

int count_4_cliques(const CouplingGraph& g) {
    int n = g.size(), cnt = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d)
                    if (g.adjacent(a, b) && g.adjacent(a, c) && g.adjacent(a, d) && g.adjacent(b, c) &&
                        g.adjacent(b, d) && g.adjacent(c, d))
                        ++cnt;
    return cnt;
}

} // namespace

// Hand enumeration: distances 0,1,2 / 1,0,1 / 2,1,0.
TEST(Stats, PathOfThree) {
    auto s = stats(build_path(3));
    EXPECT_EQ(s.diameter, 2);
    EXPECT_DOUBLE_EQ(s.avg_distance, 8.0 / 9.0);
    EXPECT_DOUBLE_EQ(s.avg_distance_distinct, 4.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.avg_connectivity, 4.0 / 3.0);
}

TEST(Stats, CompleteGraph) {
    auto s = stats(build_complete(4));
    EXPECT_EQ(s.diameter, 1);
    EXPECT_DOUBLE_EQ(s.avg_distance_distinct, 1.0);
    EXPECT_DOUBLE_EQ(s.avg_connectivity, 3.0);
}

TEST(Stats, DistanceBounds) {
    for (const char* spec : {"square:5,3", "heavy-hex:20", "tree:2", "corral:8,1,2", "hypercube:5", "hex:20"}) {
        auto s = stats(make_topology(spec));
        EXPECT_GE(s.diameter, s.avg_distance_distinct) << spec;
        EXPECT_GE(s.avg_distance_distinct, 1.0) << spec;
    }
}

TEST(Square, Table) {
    expect_stats(build_square_lattice(4, 4), 6, 2.5, 3.0, 1e-12);
    auto one = build_square_lattice(1, 2);
    EXPECT_EQ(one.edges().size(), 1u);
    EXPECT_EQ(stats(one).diameter, 1);
    auto big = build_square_lattice(7, 12);
    EXPECT_EQ(big.size(), 84);
    EXPECT_EQ(stats(big).diameter, 17);
    EXPECT_EQ(code_of([] { build_square_lattice(0, 3); }), ErrorCode::InvalidDimensions);
}

TEST(HeavyHex, ApproximateTableValues) {
    auto g20 = build_heavy_hex(20);
    EXPECT_EQ(g20.size(), 20);
    auto s = stats(g20);
    EXPECT_NEAR(s.diameter, 8.0, 0.8);
    EXPECT_NEAR(s.avg_distance, 3.77, 0.377);
    EXPECT_NEAR(s.avg_connectivity, 2.1, 0.21);
    auto g84 = build_heavy_hex(84);
    EXPECT_EQ(g84.size(), 84);
    EXPECT_NEAR(stats(g84).avg_connectivity, 2.26, 0.03);
    for (int v = 0; v < g84.size(); ++v)
        EXPECT_LE(g84.degree(v), 3);
}

TEST(AltDiag, TwoByTwoTile) {
    auto g = build_lattice_alt_diag(2, 2);
    EXPECT_EQ(g.edges().size(), 5u); // 4 grid edges + 1 diagonal
}

TEST(Tree, TwoLevels) {
    auto g = build_tree(2);
    EXPECT_EQ(g.size(), 20);
    expect_stats(g, 3, 2.15, 4.6);
    int w7 = 0, m4 = 0;
    for (int v = 0; v < g.size(); ++v) {
        if (g.degree(v) == 7)
            ++w7;
        if (g.degree(v) == 4)
            ++m4;
    }
    EXPECT_EQ(w7, 4);
    EXPECT_EQ(m4, 16);
    auto g3 = build_tree(3);
    EXPECT_EQ(g3.size(), 84);
    EXPECT_EQ(stats(g3).diameter, 5);
    EXPECT_EQ(code_of([] { build_tree(4); }), ErrorCode::UnsupportedDepth);
}

TEST(TreeRR, TwoLevels) {
    auto g = build_tree_rr(2);
    expect_stats(g, 3, 2.03, 4.6);
    auto s3 = stats(build_tree_rr(3));
    EXPECT_EQ(s3.diameter, 5);
    EXPECT_NEAR(s3.avg_distance, 3.65, 0.01);
}

TEST(Corral, TableRowsAndCliques) {
    auto c11 = build_corral(8, 1, 1);
    expect_stats(c11, 4, 2.06, 5.0);
    EXPECT_EQ(count_4_cliques(c11), 8);
    for (int v = 0; v < c11.size(); ++v)
        EXPECT_EQ(c11.degree(v), 5);
    expect_stats(build_corral(8, 1, 2), 2, 1.5, 6.0, 1e-12);
    EXPECT_EQ(code_of([] { build_corral(8, 1, 4); }), ErrorCode::InvalidStride);
    EXPECT_EQ(code_of([] { build_corral(3, 1, 1); }), ErrorCode::InvalidStride);
}

TEST(Hypercube, Dim4) {
    auto g = build_hypercube(4);
    expect_stats(g, 4, 2.0, 4.0, 1e-12);
    auto t = trim_hypercube(7, 84);
    EXPECT_EQ(t.size(), 84);
    auto s = stats(t);
    EXPECT_EQ(s.diameter, 7);
    EXPECT_NEAR(s.avg_distance, 3.32, 0.332);
    EXPECT_NEAR(s.avg_connectivity, 6.0, 0.6);
}

TEST(Graph, ValidationErrors) {
    EXPECT_EQ(code_of([] { CouplingGraph("x", 3, {{0, 1}}); }), ErrorCode::Disconnected);
    EXPECT_EQ(code_of([] { CouplingGraph("x", 2, {{0, 0}}); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { CouplingGraph("x", 2, {{0, 5}}); }), ErrorCode::InvalidArgument);
}

TEST(Graph, ShortestPath) {
    auto g = build_square_lattice(3, 3);
    auto p = g.shortest_path(0, 8);
    ASSERT_EQ(p.size(), 5u);
    EXPECT_EQ(p.front(), 0);
    EXPECT_EQ(p.back(), 8);
    for (std::size_t i = 1; i < p.size(); ++i)
        EXPECT_TRUE(g.adjacent(p[i - 1], p[i]));
}

TEST(EdgeList, RoundTrip) {
    auto g = build_tree_rr(2);
    auto h = from_edge_list(to_edge_list(g));
    EXPECT_EQ(h.size(), g.size());
    EXPECT_EQ(h.edges(), g.edges());
    EXPECT_THROW(from_edge_list("n 3\n0 1\n"), Error);
    EXPECT_THROW(from_edge_list("garbage"), Error);
}

TEST(Spec, NamedConstructors) {
    EXPECT_EQ(make_topology("square:4,4").size(), 16);
    EXPECT_EQ(make_topology("hypercube:7:84").size(), 84);
    EXPECT_EQ(make_topology("corral:8,1,2").size(), 16);
    EXPECT_EQ(make_topology("heavy-hex:84").size(), 84);
    EXPECT_THROW(make_topology("nope:3"), Error);
}
