/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef METEMB_GUARD_GRAPH_HH
#define METEMB_GUARD_GRAPH_HH 1

#include <cstdint>
#include <istream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace metemb
{
    /// Raised for malformed user input (edge lists, host specs, decomposition files).
    class InputError : public std::runtime_error
    {
        public:
            explicit InputError(const std::string & what) :
                std::runtime_error(what)
            {
            }
    };

    /// Sentinel distance between vertices in different components.
    inline constexpr std::int32_t infinite_distance = std::numeric_limits<std::int32_t>::max();

    struct WeightedEdge
    {
        int u, v, w;
    };

    /// Immutable undirected simple graph on vertices 0..n-1, optionally with
    /// positive integer edge weights.
    class Graph
    {
        private:
            int _n = 0;
            std::vector<std::vector<int>> _adj;
            std::vector<std::vector<int>> _adj_weight;
            bool _weighted = false;

        public:
            Graph() = default;

            /// Unweighted graph from an edge list; rejects loops, parallel edges
            /// and out-of-range endpoints.
            static auto from_edges(int n, const std::vector<std::pair<int, int>> & edges) -> Graph;

            /// Weighted graph; every weight must be at least 1.
            static auto from_weighted_edges(int n, const std::vector<WeightedEdge> & edges) -> Graph;

            auto n() const -> int { return _n; }
            auto m() const -> int;
            auto weighted() const -> bool { return _weighted; }

            /// Sorted neighbour list.
            auto neighbours(int v) const -> const std::vector<int> & { return _adj[v]; }
            auto degree(int v) const -> int { return int(_adj[v].size()); }
            auto max_degree() const -> int;
            auto has_edge(int u, int v) const -> bool;

            /// Weight of an existing edge; 1 for unweighted graphs.
            auto weight(int u, int v) const -> int;
            auto max_weight() const -> int;

            /// Edges with u < v, sorted.
            auto edges() const -> std::vector<std::pair<int, int>>;
            auto weighted_edges() const -> std::vector<WeightedEdge>;

            auto connected() const -> bool;
    };

    /// All-pairs shortest path table.
    class DistanceMatrix
    {
        private:
            int _n = 0;
            std::vector<std::int32_t> _d;

        public:
            DistanceMatrix() = default;
            explicit DistanceMatrix(int n, std::int32_t fill = infinite_distance);

            auto n() const -> int { return _n; }
            auto operator() (int u, int v) const -> std::int32_t { return _d[std::size_t(u) * _n + v]; }
            auto at(int u, int v) -> std::int32_t & { return _d[std::size_t(u) * _n + v]; }

            /// Largest finite entry.
            auto diameter() const -> std::int32_t;

            /// Multiplies every finite entry by factor.
            auto scaled(int factor) const -> DistanceMatrix;
    };

    /// BFS from every source (Dijkstra when the graph is weighted).
    auto all_pairs_distances(const Graph & g) -> DistanceMatrix;

    /// Connected components of g minus the removed vertices, each sorted, and
    /// ordered by their smallest vertex.
    auto components_after_removal(const Graph & g, const std::vector<int> & removed) -> std::vector<std::vector<int>>;

    /// Same, with removal given as a membership flag per vertex.
    auto components_after_removal(const Graph & g, const std::vector<bool> & removed) -> std::vector<std::vector<int>>;

    /// Size bound on a radius-d ball in a graph of maximum degree host_delta,
    /// i.e. the sum over 0 <= i < d of host_delta * (host_delta - 1)^i,
    /// saturating at INT64_MAX.
    auto ball_size_bound(int host_delta, int d) -> std::int64_t;

    /// False (reject) iff guest_delta exceeds ball_size_bound(host_delta, d):
    /// a vertex's neighbours would not fit injectively within distance d.
    auto degree_gate(int guest_delta, int host_delta, int d) -> bool;

    enum class HostFamily
    {
        Path,
        Cycle,
        Theta,
        General
    };

    struct HostSpec
    {
        HostFamily family = HostFamily::General;
        int size = 0;                 // N for paths and cycles
        std::vector<int> arms;        // arm lengths for theta hosts
        Graph graph;                  // explicit graph for General
    };

    /// Parses "cycle:N", "path:N" or "theta:l1,l2,...". File hosts are handled
    /// by the caller.
    auto parse_host_spec(const std::string & text) -> HostSpec;

    /// Throws InputError unless the spec satisfies the family invariants.
    auto validate_host_spec(const HostSpec & spec) -> void;

    /// Realizes a host. Theta vertex order: 0 = s, 1 = t, then the interior
    /// vertices of each arm in arm order, walking from s towards t.
    auto generate(const HostSpec & spec) -> Graph;

    auto path_graph(int n) -> Graph;
    auto cycle_graph(int n) -> Graph;
    auto star_graph(int leaves) -> Graph;
    auto complete_graph(int n) -> Graph;
    auto theta_graph(const std::vector<int> & arms) -> Graph;

    /// Result of parsing an edge list: vertex ids are compacted to 0..n-1 in
    /// increasing order of their original labels.
    struct ParsedGraph
    {
        Graph graph;
        std::vector<long long> original_label;
    };

    /// Parses "u v" or "u v w" lines; '#' starts a comment. Throws InputError
    /// (with the line number) on malformed lines, loops, or parallel edges;
    /// weights are only accepted when allow_weights is set.
    auto parse_edge_list(std::istream & in, bool allow_weights) -> ParsedGraph;
    auto parse_edge_list_file(const std::string & path, bool allow_weights) -> ParsedGraph;

    /// Parses a guest: like parse_edge_list but also rejects disconnected graphs.
    auto parse_guest_file(const std::string & path, bool allow_weights) -> ParsedGraph;
}

#endif
