#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace codesign {

using Edge = std::pair<int, int>; // u < v

struct TopologyStats {
    int diameter = 0;
    double avg_distance = 0.0;          // sum of the n x n distance matrix / n^2
    double avg_connectivity = 0.0;      // 2|E| / n
    double avg_distance_distinct = 0.0; // mean over unordered pairs u != v
};

// Immutable, simple, connected. All-pairs distances are computed at construction.
class CouplingGraph {
public:
    CouplingGraph(std::string name, int n, std::vector<Edge> edges, std::map<std::string, std::string> metadata = {});

    const std::string& name() const { return name_; }
    int size() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::map<std::string, std::string>& metadata() const { return metadata_; }
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
    bool adjacent(int u, int v) const;
    int distance(int u, int v) const { return dist_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)]; }
    // One shortest path u -> v (inclusive), smallest-index neighbour first.
    std::vector<int> shortest_path(int u, int v) const;

private:
    std::string name_;
    int n_;
    std::vector<Edge> edges_;
    std::map<std::string, std::string> metadata_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> dist_;
};

using TopologyPtr = std::shared_ptr<const CouplingGraph>;

TopologyStats stats(const CouplingGraph& g);
std::vector<std::vector<int>> all_pairs_distances(const CouplingGraph& g);

CouplingGraph build_square_lattice(int rows, int cols);
CouplingGraph build_heavy_hex(int target_n);
CouplingGraph build_hex_lattice(int target_n);
CouplingGraph build_lattice_alt_diag(int rows, int cols);
CouplingGraph build_tree(int levels);
CouplingGraph build_tree_rr(int levels);
CouplingGraph build_corral(int n_snails, int stride_a, int stride_b);
CouplingGraph build_hypercube(int dim);
CouplingGraph trim_hypercube(int dim, int target_n);
CouplingGraph build_complete(int n);
CouplingGraph build_path(int n);

// "n <count>" then one "u v" pair per line.
std::string to_edge_list(const CouplingGraph& g);
CouplingGraph from_edge_list(const std::string& text, const std::string& name = "file");
CouplingGraph load_edge_list_file(const std::string& path);

// Named specs: "square:R,C", "heavy-hex:N", "hex:N", "alt-diag:R,C", "tree:L",
// "tree-rr:L", "corral:S,A,B", "hypercube:D", "hypercube:D:N", "complete:N",
// "path:N", "file:PATH".
CouplingGraph make_topology(const std::string& spec);

} // namespace codesign
