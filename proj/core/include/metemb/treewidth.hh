/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef METEMB_GUARD_TREEWIDTH_HH
#define METEMB_GUARD_TREEWIDTH_HH 1

#include <metemb/embedding.hh>
#include <metemb/graph.hh>
#include <metemb/oracle.hh>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace metemb
{
    /// A tree decomposition: bags of host vertices joined by tree edges.
    struct TreeDecomposition
    {
        std::vector<std::vector<int>> bags;          // sorted
        std::vector<std::pair<int, int>> edges;

        auto width() const -> int;

        /// Throws InputError naming the first violated axiom.
        auto validate(const Graph & h) const -> void;
    };

    enum class NiceKind
    {
        Leaf,
        Introduce,
        Forget,
        Join
    };

    auto to_string(NiceKind k) -> std::string;

    struct NiceNode
    {
        NiceKind kind = NiceKind::Leaf;
        std::vector<int> bag;                        // sorted
        std::vector<int> children;
        int parent = -1;
        int vertex = -1;                             // introduced or forgotten host vertex
    };

    /// Rooted nice decomposition with empty root and leaf bags.
    struct NiceTreeDecomposition
    {
        std::vector<NiceNode> nodes;
        int root = -1;

        auto width() const -> int;
        auto as_tree_decomposition() const -> TreeDecomposition;

        /// Decomposition axioms plus the node-kind rules; throws InputError.
        auto validate(const Graph & h) const -> void;

        /// Nodes ordered children before parents.
        auto post_order() const -> std::vector<int>;
    };

    /// PACE-style decomposition: "s td <bags> <width+1> <N>", "b <id> <v...>"
    /// and tree edges "a b"; bag ids and vertices are 1-based (vertex i is
    /// host vertex i-1); lines starting with 'c' are comments.
    auto parse_pace_td(std::istream & in) -> TreeDecomposition;
    auto parse_pace_td_file(const std::string & path) -> TreeDecomposition;
    auto write_pace_td(const TreeDecomposition & td, int host_size) -> std::string;

    /// Decomposition from an elimination ordering.
    auto decomposition_from_ordering(const Graph & h, const std::vector<int> & order) -> TreeDecomposition;

    /// Minimum-width decomposition by dynamic programming over vertex subsets.
    auto exact_tree_decomposition(const Graph & h) -> TreeDecomposition;

    /// Minimum-degree elimination heuristic.
    auto heuristic_tree_decomposition(const Graph & h) -> TreeDecomposition;

    /// Exact when the host has at most 12 vertices, heuristic otherwise.
    auto default_tree_decomposition(const Graph & h) -> TreeDecomposition;

    auto make_nice(const TreeDecomposition & td, const Graph & h) -> NiceTreeDecomposition;

    /// Union of the radius-r balls around the bag members, sorted.
    auto ball_union(const Graph & h, const DistanceMatrix & dh, const std::vector<int> & bag, int r) -> std::vector<int>;

    /// A u-partial embedding for node u: preimage[i] is the guest vertex
    /// mapped onto the i-th host vertex of B(u, d+1) (intersected with the
    /// red set). When that ball is empty, side names the neighbouring node
    /// on whose side the whole guest lies.
    struct TwPartialEmbedding
    {
        int node = -1;
        std::vector<int> preimage;
        int side = -1;

        auto operator<=> (const TwPartialEmbedding &) const = default;
    };

    struct TwStats
    {
        std::uint64_t candidates = 0;
        std::uint64_t feasible = 0;
        std::uint64_t good = 0;
        std::uint64_t subtree_claim_violations = 0;
        bool gate_rejected = false;
    };

    struct TwResult
    {
        Verdict verdict = Verdict::Infeasible;
        Embedding embedding;
        TwStats stats;
    };

    /// The constraint system of one bijective instance over a nice decomposition.
    class TwContext
    {
        public:
            /// Precomputed balls, sides and guest adjacency; shared with the solver.
            struct Impl;

        private:
            std::shared_ptr<Impl> _imp;

        public:
            TwContext(const Graph & g, const DistanceMatrix & dg, const Graph & h, const DistanceMatrix & dh,
                    const NiceTreeDecomposition & ntd, int d, const std::vector<bool> * red = nullptr);

            /// Host vertices B(u, d+1) (intersected with the red set), sorted.
            auto ball(int node) const -> const std::vector<int> &;

            /// Neighbouring nodes of u: the parent (if any) first, then the children.
            auto neighbours(int node) const -> const std::vector<int> &;

            /// Union of the guest components of G - U adjacent to Dom(v) \ Dom^0.
            auto component_set(const TwPartialEmbedding & f, int neighbour) const -> std::uint64_t;

            auto domain(const TwPartialEmbedding & f) const -> std::uint64_t;

            /// Non-contraction and expansion within the domain, disjoint
            /// component sets, neighbours of Dom^0 placed, and every guest vertex
            /// accounted for.
            auto feasible(const TwPartialEmbedding & f) const -> bool;

            /// Succession of f_v (v a child of u) under f_u.
            auto succeeds(const TwPartialEmbedding & f_u, const TwPartialEmbedding & f_v) const -> bool;
    };

    auto tw_feasible(const TwContext & context, const TwPartialEmbedding & f) -> bool;
    auto tw_succeeds(const TwContext & context, const TwPartialEmbedding & f_u, const TwPartialEmbedding & f_v) -> bool;

    /// Bijective non-contracting distortion-d embedding of G onto H (or onto
    /// the red vertices of H when red is given).
    auto bijective_embed_tw(const Graph & g, const DistanceMatrix & dg, const Graph & h, const DistanceMatrix & dh,
            const NiceTreeDecomposition & ntd, int d, const std::vector<bool> * red = nullptr) -> TwResult;
}

#endif
