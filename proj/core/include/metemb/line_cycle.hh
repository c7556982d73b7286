/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef METEMB_GUARD_LINE_CYCLE_HH
#define METEMB_GUARD_LINE_CYCLE_HH 1

#include <metemb/embedding.hh>
#include <metemb/graph.hh>
#include <metemb/oracle.hh>

#include <cstdint>
#include <utility>
#include <vector>

namespace metemb
{
    /// A fixed placement of some guest vertices. For cycles, positions are
    /// offsets in [-r, r] around cycle position 0 (r = d*M + 1); for lines,
    /// positions are 1-based line coordinates. zone is the extent of the zone
    /// the anchor owns on a line (0 = up to its furthest position).
    struct Anchor
    {
        std::vector<std::pair<int, int>> map;    // (guest vertex, position), sorted by position
        int zone = 0;

        auto domain_mask() const -> std::uint64_t;
    };

    /// A window partial embedding: the exact occupancy of the 2r+1 positions
    /// mid-r .. mid+r (slot[i] is the guest vertex at mid-r+i, or -1).
    struct WindowPartialEmbedding
    {
        int mid = 0;
        std::vector<int> slot;

        auto radius() const -> int { return int(slot.size()) / 2; }
        auto domain_mask() const -> std::uint64_t;

        /// Vertices in position order together with the offsets x_0..x_{p-1}:
        /// x_0 = (position of the first vertex) - (mid - r), and
        /// x_i = gap between consecutive vertices minus their guest distance.
        auto sequence(const DistanceMatrix & dg) const -> std::pair<std::vector<int>, std::vector<int>>;
    };

    /// Counters collected during a sweep.
    struct SweepStats
    {
        std::uint64_t anchors = 0;
        std::uint64_t windows = 0;
        std::uint64_t successions = 0;
        std::uint64_t identity_checks = 0;
        std::uint64_t identity_violations = 0;
        std::uint64_t oracle_fallbacks = 0;
        std::uint64_t gate_rejections = 0;
        std::uint64_t free_line_delegations = 0;
        std::uint64_t scan_nodes = 0;

        auto operator+= (const SweepStats & o) -> SweepStats &;
    };

    struct LineCycleOptions
    {
        bool check_identities = false;     // verify both succession identities on every accepted succession
        SearchBudget budget;               // for oracle fallbacks
        SweepStats * stats = nullptr;
    };

    struct LineCycleResult
    {
        Verdict verdict = Verdict::Infeasible;
        Embedding embedding;              // cycle vertex ids 0..N-1, or 1-based line positions
    };

    /// The constraint system a window sweep works in. Host positions are
    /// 0..N-1 on a cycle (position p < 0 is written as p + N) or 1..N on a line.
    class SweepProblem
    {
        public:
            const Graph * g = nullptr;
            const DistanceMatrix * dg = nullptr;
            int d = 1;
            int radius = 2;                 // r = d*M + 1
            bool cyclic = false;
            int host_size = 0;              // N
            int chain_lo = 0, chain_hi = -1;  // region where non-anchored vertices may go
            std::vector<int> anchor_position;  // per guest vertex, or unmapped
            std::uint64_t anchored = 0, anchored_low = 0, anchored_high = 0;
            int last_vertex = -1;           // prefix-last variant: vertex forced to the maximum position
            bool floating_source = false;   // the first window may start anywhere (no low anchor on a line)
            std::vector<std::uint64_t> adjacency;

            /// Builds the cycle problem for an anchor with offsets in [-r, r].
            static auto for_cycle(const Graph & g, const DistanceMatrix & dg, int host_size, int d, const Anchor & psi) -> SweepProblem;

            /// Builds a line problem with a prefix anchor (zone [1..a1]) and an
            /// optional suffix anchor (zone [N-a2+1..N]).
            static auto for_line(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
                    const Anchor & prefix, const Anchor & suffix) -> SweepProblem;

            auto host_distance(int p, int q) const -> int;
            auto full_mask() const -> std::uint64_t;

            /// Union of components of G - (W u U) touching Dom^L u W_low (resp. Dom^R u W_high).
            auto left_set(const WindowPartialEmbedding & f) const -> std::uint64_t;
            auto right_set(const WindowPartialEmbedding & f) const -> std::uint64_t;

            /// The five feasibility conditions.
            auto is_feasible(const WindowPartialEmbedding & f) const -> bool;

            /// Succession of f_b (mid + 1) after f_a.
            auto succeeds(const WindowPartialEmbedding & f_a, const WindowPartialEmbedding & f_b) const -> bool;

            auto is_source(const WindowPartialEmbedding & f) const -> bool;
            auto is_sink(const WindowPartialEmbedding & f) const -> bool;

            /// Verifies the anchor itself (pairwise bounds among anchored vertices).
            auto anchor_valid() const -> bool;
    };

    /// Every nonempty valid placement of guest vertices into the 2r+1 window
    /// positions -r..r (r = d*M + 1), enumerated by depth-first search over
    /// positions; when centre_vertex >= 0 only placements putting that vertex at 0.
    auto enumerate_anchors(const Graph & g, const DistanceMatrix & dg, int d, int centre_vertex = -1) -> std::vector<Anchor>;

    auto is_feasible(const WindowPartialEmbedding & f, const Anchor & psi, const Graph & g, const DistanceMatrix & dg, int d, int host_size) -> bool;
    auto succeeds(const WindowPartialEmbedding & f_a, const WindowPartialEmbedding & f_b, const Anchor & psi,
            const Graph & g, const DistanceMatrix & dg, int d, int host_size) -> bool;

    /// Non-contracting distortion-d embedding into the cycle C_N.
    auto embed_into_cycle(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
            const LineCycleOptions & options = { }) -> LineCycleResult;

    /// Weighted guest into C_N (distances from a weighted dg); same engine
    /// with window radius d*M + 1.
    auto embed_weighted_into_cycle(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
            const LineCycleOptions & options = { }) -> LineCycleResult;

    /// Embedding into the line 1..N with no anchors.
    auto embed_into_line(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
            const LineCycleOptions & options = { }) -> LineCycleResult;

    /// Extension of prefix (zone [1..a1]) and suffix (zone [N-a2+1..N]) anchors:
    /// zones hold exactly the anchored vertices, everything else goes strictly between.
    auto embed_line_fixed_ends(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
            const Anchor & prefix, const Anchor & suffix, const LineCycleOptions & options = { }) -> LineCycleResult;

    /// Extension of a prefix anchor in which last receives the maximum position.
    auto embed_line_prefix_last(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
            const Anchor & prefix, int last, const LineCycleOptions & options = { }) -> LineCycleResult;

    /// Number of placements of guest vertices at positions 0..x with start at 0,
    /// some vertex at x, pairwise non-contracting with expansion at most d.
    auto window_sequence_count(const Graph & g, const DistanceMatrix & dg, int d, int start, int x) -> std::uint64_t;

    /// Lengths of the maximal empty arcs of an embedding into C_N.
    auto empty_arcs(const Embedding & f, int host_size) -> std::vector<int>;
}

#endif
