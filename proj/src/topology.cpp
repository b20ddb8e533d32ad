#include "codesign/topology.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "codesign/errors.hpp"

namespace codesign {

namespace {

std::vector<int> bfs(const std::vector<std::vector<int>>& adj, int src, const std::vector<char>* alive = nullptr) {
    std::vector<int> d(adj.size(), -1);
    std::deque<int> q{src};
    d[static_cast<std::size_t>(src)] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int w : adj[static_cast<std::size_t>(u)]) {
            if (alive && !(*alive)[static_cast<std::size_t>(w)])
                continue;
            if (d[static_cast<std::size_t>(w)] < 0) {
                d[static_cast<std::size_t>(w)] = d[static_cast<std::size_t>(u)] + 1;
                q.push_back(w);
            }
        }
    }
    return d;
}

// Mutable scratch graph used by constructors before freezing into a CouplingGraph.
struct Builder {
    int n = 0;
    std::set<Edge> edges;

    int add_vertex() { return n++; }
    void add_edge(int u, int v) {
        if (u == v)
            return;
        edges.insert({std::min(u, v), std::max(u, v)});
    }
    void add_clique(const std::vector<int>& vs) {
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                add_edge(vs[i], vs[j]);
    }
    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
        for (auto [u, v] : edges) {
            adj[static_cast<std::size_t>(u)].push_back(v);
            adj[static_cast<std::size_t>(v)].push_back(u);
        }
        return adj;
    }
    CouplingGraph freeze(std::string name, std::map<std::string, std::string> meta) const {
        return CouplingGraph(std::move(name), n, std::vector<Edge>(edges.begin(), edges.end()), std::move(meta));
    }
};

bool connected_without(const std::vector<std::vector<int>>& adj, std::vector<char>& alive, int removed) {
    alive[static_cast<std::size_t>(removed)] = 0;
    int start = -1, count = 0;
    for (std::size_t v = 0; v < alive.size(); ++v)
        if (alive[v]) {
            ++count;
            if (start < 0)
                start = static_cast<int>(v);
        }
    bool ok = true;
    if (count > 0) {
        auto d = bfs(adj, start, &alive);
        int reached = 0;
        for (std::size_t v = 0; v < alive.size(); ++v)
            if (alive[v] && d[v] >= 0)
                ++reached;
        ok = reached == count;
    }
    alive[static_cast<std::size_t>(removed)] = 1;
    return ok;
}

// Single pass over vertices in descending key order, deleting each one whose
// removal keeps the graph connected, until target_n remain. Survivors are
// relabelled in ascending original index.
template <class Key>
Builder trim_by_key(const Builder& b, const std::vector<Key>& key, int target_n) {
    auto adj = b.adjacency();
    std::vector<int> order(static_cast<std::size_t>(b.n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return key[static_cast<std::size_t>(x)] > key[static_cast<std::size_t>(y)]; });
    std::vector<char> alive(static_cast<std::size_t>(b.n), 1);
    int remaining = b.n;
    for (int v : order) {
        if (remaining <= target_n)
            break;
        if (connected_without(adj, alive, v)) {
            alive[static_cast<std::size_t>(v)] = 0;
            --remaining;
        }
    }
    if (remaining != target_n)
        throw Error(ErrorCode::Disconnected, "trim could not reach the requested size");
    std::vector<int> relabel(static_cast<std::size_t>(b.n), -1);
    Builder out;
    for (int v = 0; v < b.n; ++v)
        if (alive[static_cast<std::size_t>(v)])
            relabel[static_cast<std::size_t>(v)] = out.add_vertex();
    for (auto [u, v] : b.edges)
        if (alive[static_cast<std::size_t>(u)] && alive[static_cast<std::size_t>(v)])
            out.add_edge(relabel[static_cast<std::size_t>(u)], relabel[static_cast<std::size_t>(v)]);
    return out;
}

std::vector<int> eccentricities(const Builder& b) {
    auto adj = b.adjacency();
    std::vector<int> ecc(static_cast<std::size_t>(b.n));
    for (int v = 0; v < b.n; ++v) {
        auto d = bfs(adj, v);
        ecc[static_cast<std::size_t>(v)] = *std::max_element(d.begin(), d.end());
    }
    return ecc;
}

int min_eccentricity_vertex(const Builder& b) {
    auto ecc = eccentricities(b);
    return static_cast<int>(std::min_element(ecc.begin(), ecc.end()) - ecc.begin());
}

// Heavy-hex code lattice: `rows` paths of L = 2*rows-1 qubits; between rows g and
// g+1 bridge qubits sit at columns c % 4 == (g even ? 3 : 1) plus one boundary
// bridge at column 0 (g even) or L-1 (g odd).
Builder heavy_hex_lattice(int rows) {
    Builder b;
    const int len = 2 * rows - 1;
    std::vector<std::vector<int>> q(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < len; ++c) {
            q[static_cast<std::size_t>(r)].push_back(b.add_vertex());
            if (c)
                b.add_edge(q[static_cast<std::size_t>(r)][static_cast<std::size_t>(c - 1)], q[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        }
    for (int g = 0; g + 1 < rows; ++g) {
        std::set<int> cols;
        for (int c = 0; c < len; ++c)
            if (c % 4 == (g % 2 == 0 ? 3 : 1))
                cols.insert(c);
        cols.insert(g % 2 == 0 ? 0 : len - 1);
        for (int c : cols) {
            int br = b.add_vertex();
            b.add_edge(q[static_cast<std::size_t>(g)][static_cast<std::size_t>(c)], br);
            b.add_edge(br, q[static_cast<std::size_t>(g + 1)][static_cast<std::size_t>(c)]);
        }
    }
    return b;
}

} // namespace

// ---- CouplingGraph ----

CouplingGraph::CouplingGraph(std::string name, int n, std::vector<Edge> edges, std::map<std::string, std::string> metadata)
    : name_(std::move(name)), n_(n), metadata_(std::move(metadata)) {
    if (n < 1)
        throw Error(ErrorCode::InvalidDimensions, "graph needs at least one vertex");
    std::set<Edge> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw Error(ErrorCode::InvalidArgument, fmt::format("edge ({}, {}) out of range", u, v));
        if (u == v)
            throw Error(ErrorCode::InvalidArgument, "self-loop");
        Edge e{std::min(u, v), std::max(u, v)};
        if (!seen.insert(e).second)
            throw Error(ErrorCode::InvalidArgument, fmt::format("duplicate edge ({}, {})", e.first, e.second));
    }
    edges_.assign(seen.begin(), seen.end());
    adj_.assign(static_cast<std::size_t>(n), {});
    for (auto [u, v] : edges_) {
        adj_[static_cast<std::size_t>(u)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& a : adj_)
        std::sort(a.begin(), a.end());
    dist_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    for (int s = 0; s < n; ++s) {
        auto d = bfs(adj_, s);
        for (int t = 0; t < n; ++t) {
            if (d[static_cast<std::size_t>(t)] < 0)
                throw Error(ErrorCode::Disconnected, "graph '" + name_ + "' is not connected");
            dist_[static_cast<std::size_t>(s) * static_cast<std::size_t>(n) + static_cast<std::size_t>(t)] = d[static_cast<std::size_t>(t)];
        }
    }
}

bool CouplingGraph::adjacent(int u, int v) const {
    if (u < 0 || u >= n_)
        return false;
    const auto& a = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(a.begin(), a.end(), v);
}

std::vector<int> CouplingGraph::shortest_path(int u, int v) const {
    std::vector<int> path{u};
    while (u != v) {
        for (int w : neighbors(u))
            if (distance(w, v) == distance(u, v) - 1) {
                u = w;
                break;
            }
        path.push_back(u);
    }
    return path;
}

TopologyStats stats(const CouplingGraph& g) {
    TopologyStats s;
    const int n = g.size();
    long long total = 0;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            int d = g.distance(u, v);
            total += d;
            s.diameter = std::max(s.diameter, d);
        }
    s.avg_distance = static_cast<double>(total) / (static_cast<double>(n) * n);
    s.avg_distance_distinct = n > 1 ? static_cast<double>(total) / (static_cast<double>(n) * (n - 1)) : 0.0;
    s.avg_connectivity = 2.0 * static_cast<double>(g.edges().size()) / n;
    return s;
}

std::vector<std::vector<int>> all_pairs_distances(const CouplingGraph& g) {
    std::vector<std::vector<int>> d(static_cast<std::size_t>(g.size()), std::vector<int>(static_cast<std::size_t>(g.size())));
    for (int u = 0; u < g.size(); ++u)
        for (int v = 0; v < g.size(); ++v)
            d[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = g.distance(u, v);
    return d;
}

// ---- constructors ----

CouplingGraph build_square_lattice(int rows, int cols) {
    if (rows < 1 || cols < 1 || rows * cols < 2)
        throw Error(ErrorCode::InvalidDimensions, "square lattice needs rows*cols >= 2");
    Builder b;
    b.n = rows * cols;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            int v = r * cols + c;
            if (c + 1 < cols)
                b.add_edge(v, v + 1);
            if (r + 1 < rows)
                b.add_edge(v, v + cols);
        }
    return b.freeze(fmt::format("square-{}x{}", rows, cols), {{"rows", std::to_string(rows)}, {"cols", std::to_string(cols)}});
}

CouplingGraph build_lattice_alt_diag(int rows, int cols) {
    if (rows < 2 || cols < 2)
        throw Error(ErrorCode::InvalidDimensions, "alt-diag lattice needs at least one 2x2 tile");
    Builder b;
    b.n = rows * cols;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols)
                b.add_edge(id(r, c), id(r, c + 1));
            if (r + 1 < rows)
                b.add_edge(id(r, c), id(r + 1, c));
        }
    for (int r = 0; r + 1 < rows; ++r)
        for (int c = 0; c + 1 < cols; ++c) {
            if ((r + c) % 2 == 0)
                b.add_edge(id(r, c), id(r + 1, c + 1));
            else
                b.add_edge(id(r, c + 1), id(r + 1, c));
        }
    return b.freeze(fmt::format("alt-diag-{}x{}", rows, cols), {{"rows", std::to_string(rows)}, {"cols", std::to_string(cols)}});
}

CouplingGraph build_hex_lattice(int target_n) {
    if (target_n < 6)
        throw Error(ErrorCode::InvalidDimensions, "hex lattice needs at least one hexagon (6 qubits)");
    // Brick-wall honeycomb, R rows by C columns; vertical link between rows
    // r-1 and r at column c when (r + c) is even.
    int rows = 1;
    while ((rows + 1) * (rows + 1) <= target_n)
        ++rows;
    int cols = (target_n + rows - 1) / rows;
    Builder b;
    b.n = rows * cols;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            int v = r * cols + c;
            if (c)
                b.add_edge(v - 1, v);
            if (r && (r + c) % 2 == 0)
                b.add_edge(v - cols, v);
        }
    std::vector<int> key(static_cast<std::size_t>(b.n));
    std::iota(key.begin(), key.end(), 0);
    Builder t = trim_by_key(b, key, target_n);
    return t.freeze(fmt::format("hex-{}", target_n), {{"target_n", std::to_string(target_n)}});
}

CouplingGraph build_heavy_hex(int target_n) {
    if (target_n < 7)
        throw Error(ErrorCode::InvalidDimensions, "heavy-hex needs at least 7 qubits");
    int below = 0; // largest lattice size <= target_n
    int rows_below = 0;
    int rows_above = 0;
    for (int r = 3;; r += 2) { // code distances are odd
        int n = heavy_hex_lattice(r).n;
        if (n <= target_n) {
            below = n;
            rows_below = r;
        }
        if (n >= target_n) {
            rows_above = r;
            break;
        }
    }
    Builder b;
    if (rows_below && 20 * (target_n - below) <= target_n) {
        // Near miss from below: hang the missing qubits off the centre.
        b = heavy_hex_lattice(rows_below);
        while (b.n < target_n) {
            int c = min_eccentricity_vertex(b);
            int v = b.add_vertex();
            b.add_edge(c, v);
        }
    } else {
        Builder full = heavy_hex_lattice(rows_above);
        int c = min_eccentricity_vertex(full);
        auto d = bfs(full.adjacency(), c);
        std::vector<std::pair<int, int>> key(static_cast<std::size_t>(full.n));
        for (int v = 0; v < full.n; ++v)
            key[static_cast<std::size_t>(v)] = {d[static_cast<std::size_t>(v)], v};
        b = trim_by_key(full, key, target_n);
    }
    return b.freeze(fmt::format("heavy-hex-{}", target_n), {{"target_n", std::to_string(target_n)}});
}

namespace {

CouplingGraph tree_impl(int levels, bool round_robin) {
    if (levels != 2 && levels != 3)
        throw Error(ErrorCode::UnsupportedDepth, "tree depth must be 2 or 3");
    Builder b;
    std::vector<int> top;
    for (int k = 0; k < 4; ++k)
        top.push_back(b.add_vertex());
    b.add_clique(top);
    auto attach = [&](const std::vector<int>& routers) {
        std::vector<std::vector<int>> mods;
        for (int k = 0; k < 4; ++k) {
            std::vector<int> mod;
            for (int j = 0; j < 4; ++j)
                mod.push_back(b.add_vertex());
            b.add_clique(mod);
            for (int j = 0; j < 4; ++j)
                b.add_edge(mod[static_cast<std::size_t>(j)], routers[static_cast<std::size_t>(round_robin ? j : k)]);
            mods.push_back(mod);
        }
        return mods;
    };
    auto mods = attach(top);
    if (levels == 3)
        for (const auto& m : mods)
            attach(m);
    std::string name = fmt::format("{}-{}", round_robin ? "tree-rr" : "tree", levels);
    return b.freeze(name, {{"levels", std::to_string(levels)}});
}

} // namespace

CouplingGraph build_tree(int levels) { return tree_impl(levels, false); }
CouplingGraph build_tree_rr(int levels) { return tree_impl(levels, true); }

CouplingGraph build_corral(int n_snails, int stride_a, int stride_b) {
    if (n_snails < 4)
        throw Error(ErrorCode::InvalidStride, "corral needs at least 4 SNAILs");
    for (int s : {stride_a, stride_b})
        if (s < 1 || 2 * s >= n_snails)
            throw Error(ErrorCode::InvalidStride, fmt::format("stride {} out of range for {} SNAILs", s, n_snails));
    // Stride s reaches the s-th nearest SNAIL on the other side of the fence,
    // i.e. a ring offset of 2s - 1.
    std::vector<std::vector<int>> at(static_cast<std::size_t>(n_snails));
    Builder b;
    for (int stride : {stride_a, stride_b}) {
        int span = 2 * stride - 1;
        if (span >= n_snails)
            throw Error(ErrorCode::InvalidStride, "stride wraps the whole ring");
        for (int i = 0; i < n_snails; ++i) {
            int q = b.add_vertex();
            at[static_cast<std::size_t>(i)].push_back(q);
            at[static_cast<std::size_t>((i + span) % n_snails)].push_back(q);
        }
    }
    for (const auto& qs : at)
        b.add_clique(qs);
    return b.freeze(fmt::format("corral-{}-{}-{}", n_snails, stride_a, stride_b),
                    {{"n_snails", std::to_string(n_snails)}, {"stride_a", std::to_string(stride_a)}, {"stride_b", std::to_string(stride_b)}});
}

CouplingGraph build_hypercube(int dim) {
    if (dim < 1 || dim > 12)
        throw Error(ErrorCode::InvalidDimensions, "hypercube dimension must be in 1..12");
    Builder b;
    b.n = 1 << dim;
    for (int v = 0; v < b.n; ++v)
        for (int k = 0; k < dim; ++k)
            b.add_edge(v, v ^ (1 << k));
    return b.freeze(fmt::format("hypercube-{}", dim), {{"dim", std::to_string(dim)}});
}

CouplingGraph trim_hypercube(int dim, int target_n) {
    if (dim < 1 || dim > 12)
        throw Error(ErrorCode::InvalidDimensions, "hypercube dimension must be in 1..12");
    const int full = 1 << dim;
    if (target_n < 1 || target_n > full)
        throw Error(ErrorCode::InvalidDimensions, "target size exceeds 2^dim");
    std::vector<int> order(static_cast<std::size_t>(full));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [](int x, int y) {
        int px = std::popcount(static_cast<unsigned>(x)), py = std::popcount(static_cast<unsigned>(y));
        return px != py ? px > py : x > y;
    });
    std::vector<char> keep(static_cast<std::size_t>(full), 1);
    for (int i = 0; i < full - target_n; ++i)
        keep[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 0;
    std::vector<int> relabel(static_cast<std::size_t>(full), -1);
    Builder b;
    for (int v = 0; v < full; ++v)
        if (keep[static_cast<std::size_t>(v)])
            relabel[static_cast<std::size_t>(v)] = b.add_vertex();
    for (int v = 0; v < full; ++v)
        for (int k = 0; k < dim; ++k) {
            int w = v ^ (1 << k);
            if (keep[static_cast<std::size_t>(v)] && keep[static_cast<std::size_t>(w)])
                b.add_edge(relabel[static_cast<std::size_t>(v)], relabel[static_cast<std::size_t>(w)]);
        }
    return b.freeze(target_n == full ? fmt::format("hypercube-{}", dim) : fmt::format("hypercube-{}-{}", dim, target_n),
                    {{"dim", std::to_string(dim)}, {"target_n", std::to_string(target_n)}});
}

CouplingGraph build_complete(int n) {
    if (n < 1)
        throw Error(ErrorCode::InvalidDimensions, "complete graph needs n >= 1");
    Builder b;
    b.n = n;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            b.add_edge(u, v);
    return b.freeze(fmt::format("complete-{}", n), {{"n", std::to_string(n)}});
}

CouplingGraph build_path(int n) {
    if (n < 1)
        throw Error(ErrorCode::InvalidDimensions, "path needs n >= 1");
    Builder b;
    b.n = n;
    for (int v = 0; v + 1 < n; ++v)
        b.add_edge(v, v + 1);
    return b.freeze(fmt::format("path-{}", n), {{"n", std::to_string(n)}});
}

// ---- edge-list IO ----

std::string to_edge_list(const CouplingGraph& g) {
    std::string out = fmt::format("n {}\n", g.size());
    for (auto [u, v] : g.edges())
        out += fmt::format("{} {}\n", u, v);
    return out;
}

CouplingGraph from_edge_list(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    std::string line;
    int n = -1;
    int lineno = 0;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first))
            continue;
        if (n < 0) {
            if (first != "n" || !(ls >> n) || n < 1)
                throw Error(ErrorCode::Parse, fmt::format("line {}: expected 'n <count>' header", lineno));
            continue;
        }
        int u, v;
        try {
            std::size_t pos = 0;
            u = std::stoi(first, &pos);
            if (pos != first.size())
                throw std::invalid_argument(first);
        } catch (const std::exception&) {
            throw Error(ErrorCode::Parse, fmt::format("line {}: bad vertex '{}'", lineno, first));
        }
        std::string extra;
        if (!(ls >> v) || (ls >> extra))
            throw Error(ErrorCode::Parse, fmt::format("line {}: expected 'u v'", lineno));
        edges.push_back({u, v});
    }
    if (n < 0)
        throw Error(ErrorCode::Parse, "missing 'n <count>' header");
    return CouplingGraph(name, n, std::move(edges), {{"source", name}});
}

CouplingGraph load_edge_list_file(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw Error(ErrorCode::Io, "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_edge_list(ss.str(), path);
}

CouplingGraph make_topology(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "file")
        return load_edge_list_file(rest);
    std::vector<int> args;
    {
        std::string tok;
        for (char ch : rest + ",") {
            if (ch == ',' || ch == ':' || ch == 'x') {
                if (!tok.empty()) {
                    try {
                        args.push_back(std::stoi(tok));
                    } catch (const std::exception&) {
                        throw Error(ErrorCode::Config, "bad number in topology spec '" + spec + "'");
                    }
                }
                tok.clear();
            } else if (ch != ' ') {
                tok += ch;
            }
        }
    }
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi)
            throw Error(ErrorCode::Config, "wrong number of arguments in topology spec '" + spec + "'");
    };
    if (kind == "square" || kind == "grid") {
        need(2, 2);
        return build_square_lattice(args[0], args[1]);
    }
    if (kind == "heavy-hex") {
        need(1, 1);
        return build_heavy_hex(args[0]);
    }
    if (kind == "hex") {
        need(1, 1);
        return build_hex_lattice(args[0]);
    }
    if (kind == "alt-diag") {
        need(2, 2);
        return build_lattice_alt_diag(args[0], args[1]);
    }
    if (kind == "tree") {
        need(1, 1);
        return build_tree(args[0]);
    }
    if (kind == "tree-rr") {
        need(1, 1);
        return build_tree_rr(args[0]);
    }
    if (kind == "corral") {
        need(3, 3);
        return build_corral(args[0], args[1], args[2]);
    }
    if (kind == "hypercube") {
        need(1, 2);
        return args.size() == 1 ? build_hypercube(args[0]) : trim_hypercube(args[0], args[1]);
    }
    if (kind == "complete") {
        need(1, 1);
        return build_complete(args[0]);
    }
    if (kind == "path") {
        need(1, 1);
        return build_path(args[0]);
    }
    throw Error(ErrorCode::Config, "unknown topology '" + kind + "'");
}

} // namespace codesign
