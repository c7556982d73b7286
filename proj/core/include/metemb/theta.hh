/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef METEMB_GUARD_THETA_HH
#define METEMB_GUARD_THETA_HH 1

#include <metemb/embedding.hh>
#include <metemb/graph.hh>
#include <metemb/oracle.hh>

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace metemb
{
    /// A generalised theta host: k internally disjoint s-t paths, plus the
    /// ball data derived for one distortion by compute_balls.
    struct ThetaHost
    {
        Graph graph;
        DistanceMatrix dh;
        int s = 0, t = 1;
        std::vector<std::vector<int>> arms;      // vertex sequences, s first and t last

        int d = 0;                               // the distortion the balls below were computed for
        std::vector<bool> ball_s, ball_t;        // radius d around s and t
        std::vector<bool> wide_s, wide_t;        // radius 2d^2 around s and t
        std::vector<std::vector<int>> truncated; // per arm: arm vertices outside ball_s and ball_t
        std::vector<std::vector<int>> inner;     // per arm: arm vertices outside wide_s and wide_t, in arm order
        std::vector<bool> short_arm;             // arm length below 4d^2 + 2d; inner is left empty
        std::vector<int> s_end, t_end;           // first and last vertex of inner, or -1

        auto k() const -> int { return int(arms.size()); }
        auto arm_length(int i) const -> int { return int(arms[i].size()) - 1; }
    };

    /// The host theta(l_1, ..., l_k) in the vertex order of generate().
    /// Throws InputError for an invalid arm list.
    auto make_theta_host(const std::vector<int> & arm_lengths) -> ThetaHost;

    /// Fills the ball fields for distortion d.
    auto compute_balls(ThetaHost & h, int d) -> void;

    /// True when the two wide balls share a vertex (the host is too short for
    /// the ball decomposition).
    auto wide_balls_overlap(const ThetaHost & h) -> bool;

    /// Host vertices whose preimages are guessed outright: both wide balls
    /// and every vertex of a short arm.
    auto anchored_region(const ThetaHost & h) -> std::vector<bool>;

    /// An anchor map: image[x] is a host vertex of the anchored region, or
    /// unmapped for guests that lie beyond it. domain is U' (every mapped
    /// guest) and core is U (guests mapped into ball_s or ball_t).
    struct ThetaAnchor
    {
        std::vector<int> image;
        std::uint64_t domain = 0;
        std::uint64_t core = 0;

        auto operator== (const ThetaAnchor &) const -> bool = default;
    };

    /// Visits every anchor map that could be the restriction of an embedding:
    /// injective into the anchored region, non-contracting with expansion at
    /// most d on every mapped pair, and for every unmapped x and mapped y the
    /// host distance from the image of y to the nearest vertex beyond the
    /// anchored region is at most d * D_G(x, y). The empty map is visited only
    /// when vertices beyond the anchored region exist; if none exist, only
    /// total maps are visited. Stops early when visit returns false.
    auto enumerate_psi(const Graph & g, const DistanceMatrix & dg, const ThetaHost & h, int d,
            const std::function<auto (const ThetaAnchor &) -> bool> & visit) -> void;

    enum class ComponentRole
    {
        S,
        T,
        Full
    };

    /// A residual component of G - U: one containing a guest beyond the
    /// anchored region. arm is the long arm carrying its anchored vertices.
    struct ResidualComponent
    {
        std::uint64_t vertices = 0;
        ComponentRole role = ComponentRole::S;
        int arm = -1;
    };

    /// Tags each residual component by the wide balls its vertices and their
    /// neighbours are mapped into. Returns nullopt when the anchor map cannot
    /// be extended: a residual component touching neither side, or whose
    /// anchored vertices are not all on one long arm.
    auto classify_components(const Graph & g, const ThetaHost & h, const ThetaAnchor & psi)
        -> std::optional<std::vector<ResidualComponent>>;

    /// One long arm that receives components: form 1 (one s-component),
    /// 2 (one t-component), 3 (one of each) or 4 (one full component).
    struct ArmPlan
    {
        int arm = -1;
        int form = 5;
        std::vector<int> components;    // indices into ThetaConfiguration::components
    };

    /// An anchor map, the long arms declared empty beyond the wide balls, and
    /// a plan for every other long arm. Short arms are wholly anchored and
    /// appear in neither list.
    struct ThetaConfiguration
    {
        ThetaAnchor psi;
        std::vector<ResidualComponent> components;
        std::vector<int> empty_arms;
        std::vector<ArmPlan> plans;
    };

    /// Every assignment of the residual components to long arms consistent
    /// with their roles and forced arms. Empty when classification fails or
    /// there are more than 2k residual components.
    auto enumerate_configurations(const Graph & g, const ThetaAnchor & psi, const ThetaHost & h, int d)
        -> std::vector<ThetaConfiguration>;

    /// Vertices v of the component with D_G(a, v) >= max_{x in C} D_G(a, x) - d^2,
    /// sorted.
    auto last_vertex_candidates(std::uint64_t component, int a, const DistanceMatrix & dg, int d) -> std::vector<int>;

    /// Placement of some guests onto one arm: (guest, host vertex) pairs and
    /// the arm position (counted from the component's own end) of the last vertex.
    struct ArmPlacement
    {
        std::vector<std::pair<int, int>> map;
        int length = 0;
    };

    struct ArmSearch
    {
        Verdict verdict = Verdict::Infeasible;
        ArmPlacement placement;
        std::uint64_t line_calls = 0;
    };

    /// The shortest placement of C u S_i (C u T_i for a t-component) on the
    /// arm: anchored guests keep their anchor positions, the others go beyond
    /// the wide ball, last sits furthest from the component's end, its
    /// distance to every anchored guest is non-contracting with expansion at
    /// most d, and that distance from the end is minimal. Each candidate
    /// length is one prefix-last line query.
    auto shortest_component_embedding(const Graph & g, const DistanceMatrix & dg, const ThetaHost & h,
            const ThetaAnchor & psi, const ResidualComponent & c, int last, int d,
            const SearchBudget & budget = { }) -> ArmSearch;

    /// Placement of a full component with S_i and T_i on its arm by one
    /// fixed-ends line query over the whole arm.
    auto full_component_embedding(const Graph & g, const DistanceMatrix & dg, const ThetaHost & h,
            const ThetaAnchor & psi, const ResidualComponent & c, int d,
            const SearchBudget & budget = { }) -> ArmSearch;

    struct ThetaStats
    {
        std::uint64_t anchors = 0;
        std::uint64_t configurations = 0;
        std::uint64_t max_configurations_per_anchor = 0;
        std::uint64_t line_calls = 0;
        std::uint64_t assemblies = 0;
        std::uint64_t rejected_assemblies = 0;
        bool gate_rejected = false;
        bool oracle_fallback = false;
        bool cycle_cross_checked = false;
    };

    struct ThetaOptions
    {
        SearchBudget budget;            // for the oracle and line-solver fallbacks
        bool cross_check_cycle = false; // with two arms, also run the cycle solver and insist on the same verdict
    };

    struct ThetaResult
    {
        Verdict verdict = Verdict::Infeasible;
        Embedding embedding;            // host vertex ids of h.graph
        ThetaStats stats;
    };

    /// Non-contracting distortion-d embedding of a connected unweighted guest
    /// into the theta host. Every accepted assembly passes verify_nc_distortion.
    auto embed_into_theta(const Graph & g, const DistanceMatrix & dg, const ThetaHost & h, int d,
            const ThetaOptions & options = { }) -> ThetaResult;
}

#endif
