/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef METEMB_GUARD_CTW_HH
#define METEMB_GUARD_CTW_HH 1

#include <metemb/embedding.hh>
#include <metemb/graph.hh>
#include <metemb/oracle.hh>
#include <metemb/treewidth.hh>

#include <cstdint>
#include <memory>
#include <set>
#include <vector>

namespace metemb
{
    /// Stored value for "at least the truncation threshold".
    inline constexpr int type_infinity = 1 << 28;

    /// k below 2*gamma + 3d + 3, infinity otherwise; infinity is absorbing.
    auto beta(int k, int gamma, int d) -> int;

    /// A nice decomposition whose bags all induce connected host subgraphs,
    /// with its measured width and gamma (largest host distance inside a bag).
    struct ConnectedNiceDecomposition
    {
        NiceTreeDecomposition ntd;
        int width = -1;
        int gamma = 0;
    };

    /// Grows every bag along host geodesics (ties towards lower vertex ids)
    /// until it induces a connected subgraph, then repairs the
    /// running-intersection property; repeats until both hold.
    auto connect_bags(TreeDecomposition td, const Graph & h, const DistanceMatrix & dh) -> TreeDecomposition;

    /// Greedily grows every bag along host geodesics (ties towards lower
    /// vertex ids) until it induces a connected subgraph, repairs the
    /// running-intersection property, and rebuilds a nice decomposition whose
    /// intermediate bags stay connected. Width may grow; it is measured.
    auto connectify(const NiceTreeDecomposition & ntd, const Graph & h, const DistanceMatrix & dh) -> ConnectedNiceDecomposition;

    /// True when every bag induces a connected subgraph of h.
    auto bags_connected(const NiceTreeDecomposition & ntd, const Graph & h) -> bool;

    /// Length of the longest isometric cycle of h (0 for forests), or -1 once
    /// more than `budget` simple paths have been explored.
    auto longest_geodesic_cycle(const Graph & h, const DistanceMatrix & dh, std::uint64_t budget = 1'000'000) -> int;

    /// An injective u-partial embedding: preimage[i] is the guest vertex on
    /// the i-th host vertex of B(u, d+1), or -1 when that host is unused.
    /// When nothing is placed, side names the neighbouring node on whose
    /// side the whole guest lies.
    struct CtwPartialEmbedding
    {
        int node = -1;
        std::vector<int> preimage;
        int side = -1;

        auto operator<=> (const CtwPartialEmbedding &) const = default;
    };

    /// values[i][j]: the value for the i-th bag vertex at the j-th vertex of
    /// Dom(v) (in increasing guest order).
    struct CtwType
    {
        std::vector<std::vector<int>> values;

        auto operator<=> (const CtwType &) const = default;
    };

    using CtwTypeList = std::set<CtwType>;

    /// A partial embedding plus one type-list per neighbouring node, in the
    /// order of CtwContext::neighbours.
    struct CtwState
    {
        CtwPartialEmbedding f;
        std::vector<CtwTypeList> lists;
    };

    class CtwContext
    {
        public:
            struct Impl;

        private:
            std::shared_ptr<Impl> _imp;

        public:
            CtwContext(const Graph & g, const DistanceMatrix & dg, const Graph & h, const DistanceMatrix & dh,
                    const ConnectedNiceDecomposition & cnd, int d);

            auto gamma() const -> int;
            auto ball(int node) const -> const std::vector<int> &;
            auto bag(int node) const -> const std::vector<int> &;

            /// Parent first, then children.
            auto neighbours(int node) const -> const std::vector<int> &;

            /// Guests placed on the side of neighbour v (bag vertices count on every side), sorted.
            auto domain_towards(const CtwPartialEmbedding & f, int v) const -> std::vector<int>;
            auto component_set(const CtwPartialEmbedding & f, int v) const -> std::uint64_t;

            /// Non-contraction and expansion inside the ball, disjoint component
            /// sets, neighbours of guests on the bag placed.
            auto feasible(const CtwPartialEmbedding & f) const -> bool;

            /// Pointwise agreement and both component-set identities.
            auto succeeds(const CtwPartialEmbedding & f_u, const CtwPartialEmbedding & f_v) const -> bool;

            auto compatible(const CtwPartialEmbedding & f, int v, const CtwTypeList & list) const -> bool;
            auto agree(const CtwPartialEmbedding & f, int v, const CtwTypeList & first, int w, const CtwTypeList & second) const -> bool;
            auto state_feasible(const CtwState & s) const -> bool;

            /// Partial-embedding succession plus both type-transfer directions.
            auto state_succeeds(const CtwState & s_u, const CtwState & s_v) const -> bool;

            /// The restriction of a global embedding to the ball of a node.
            auto restrict(const Embedding & f, int node) const -> CtwPartialEmbedding;

            /// The state built from a global embedding: one type per guest in
            /// Dom(v) plus the component set towards v.
            auto state_from_embedding(const Embedding & f, int node) const -> CtwState;

            /// For every ordered pair of distinct nodes u..v, checks that every
            /// guest in Dom(v) but not in the domain of v's predecessor on the
            /// path either has its truncated profile in the list at u towards
            /// the path, or a far-enough witness at some node of the path.
            /// Returns the number of violations.
            auto dichotomy_violations(const Embedding & f) const -> std::uint64_t;
    };

    struct CtwStats
    {
        std::uint64_t states = 0;
        std::uint64_t max_states_per_node = 0;
        bool gate_rejected = false;
    };

    struct CtwResult
    {
        Verdict verdict = Verdict::Infeasible;
        Embedding embedding;
        CtwStats stats;
    };

    struct CtwOptions
    {
        SearchBudget budget;
    };

    /// Injective non-contracting distortion-d embedding of a connected guest
    /// into h, by dynamic programming over the decomposition. A state records
    /// which guest sits on each bag vertex and, for every guest already placed
    /// below, its identity and its host distances to the current bag.
    auto embed_ctw(const Graph & g, const DistanceMatrix & dg, const Graph & h, const DistanceMatrix & dh,
            const ConnectedNiceDecomposition & cnd, int d, const CtwOptions & options = { }) -> CtwResult;
}

#endif
