/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef METEMB_GUARD_EMBEDDING_HH
#define METEMB_GUARD_EMBEDDING_HH 1

#include <metemb/graph.hh>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace metemb
{
    /// Exact non-negative rational in lowest terms.
    class Rational
    {
        private:
            std::int64_t _num = 0, _den = 1;

        public:
            Rational() = default;
            Rational(std::int64_t num, std::int64_t den = 1);

            auto num() const -> std::int64_t { return _num; }
            auto den() const -> std::int64_t { return _den; }

            auto operator* (const Rational & other) const -> Rational;
            auto operator<=> (const Rational & other) const -> std::strong_ordering;
            auto operator== (const Rational & other) const -> bool = default;

            /// "a/b", always with an explicit denominator.
            auto str() const -> std::string;

            /// Parses "a/b" or "a".
            static auto parse(const std::string & text) -> Rational;
    };

    /// Raised when an embedding is not injective, not total, or two partial
    /// maps disagree.
    class EmbeddingError : public std::runtime_error
    {
        public:
            explicit EmbeddingError(const std::string & what) :
                std::runtime_error(what)
            {
            }
    };

    inline constexpr int unmapped = -1;

    /// Partial map from guest vertices to host vertices; image[x] == unmapped
    /// when x is outside the domain.
    struct Embedding
    {
        std::vector<int> image;

        Embedding() = default;
        explicit Embedding(int guest_size) :
            image(guest_size, unmapped)
        {
        }

        auto size() const -> int { return int(image.size()); }
        auto mapped(int x) const -> bool { return image[x] != unmapped; }
        auto total() const -> bool;
        auto injective() const -> bool;
        auto domain() const -> std::vector<int>;

        auto operator== (const Embedding &) const -> bool = default;
    };

    struct DistortionReport
    {
        Rational expansion, contraction, distortion;
        std::pair<int, int> expansion_witness{ -1, -1 }, contraction_witness{ -1, -1 };

        auto non_contracting() const -> bool { return contraction <= Rational(1); }
    };

    /// Exact expansion, contraction and distortion over all unordered pairs.
    /// Throws EmbeddingError when f is not total or not injective.
    auto distortion_report(const Graph & g, const Graph & h, const DistanceMatrix & dg, const DistanceMatrix & dh,
            const Embedding & f) -> DistortionReport;

    enum class ViolationKind
    {
        NotTotal,
        NotInjective,
        OutsideCodomain,
        Contracting,
        Expanding
    };

    struct Violation
    {
        ViolationKind kind;
        int u = -1, v = -1;
        std::int32_t guest_distance = 0, host_distance = 0;

        auto describe() const -> std::string;
    };

    /// Checks D_G(u,v) <= D_H(F(u),F(v)) <= d * D_G(u,v) for every pair and
    /// reports the lexicographically first violation.
    auto verify_nc_distortion(const Graph & g, const Graph & h, const DistanceMatrix & dg, const DistanceMatrix & dh,
            const Embedding & f, int d) -> std::optional<Violation>;

    /// Generalised check used by the reduction pipeline and the solvers'
    /// internal self-checks: scale * D_G <= D_H <= (d_num/d_den) * scale * D_G,
    /// optionally with every image inside the codomain.
    auto verify_scaled(const DistanceMatrix & dg, const DistanceMatrix & dh, const Embedding & f,
            int guest_scale, std::int64_t d_num, std::int64_t d_den,
            const std::vector<bool> * codomain = nullptr) -> std::optional<Violation>;

    /// Host with original (red) and subdivision (blue) vertices.
    struct RedBlueHost
    {
        Graph graph;
        std::vector<bool> red;
        int subdivisions = 0;               // blue vertices inserted on each original edge
        std::vector<int> red_vertex;        // original vertex -> vertex of graph
        std::vector<int> original_of;       // vertex of graph -> original vertex, or -1 for blue

        auto red_vertices() const -> std::vector<int>;
    };

    /// Replaces every edge by a path with p internal blue vertices. Red
    /// vertices keep their original ids 0..N-1; blue vertices follow.
    auto subdivide_red_blue(const Graph & h, int p) -> RedBlueHost;

    /// One instance of the scaled problem: find F into the red vertices with
    /// guest_scale * D_G <= D_H' <= (d_num/d_den) * guest_scale * D_G.
    struct ReductionInstance
    {
        RedBlueHost host;
        int guest_scale = 1;
        std::int64_t d_num = 1, d_den = 1;
        Rational contraction;                // the guessed contraction of the original map
    };

    /// Enumerates the scaled instances for a rational distortion d = d_num/d_den:
    /// one per candidate contraction ratio c = p/q (1 <= p <= diam(G),
    /// 1 <= q <= diam(H), lowest terms, q <= N*n), the ratio 1/1 first.
    /// The original instance has an embedding of distortion at most d iff
    /// some instance is feasible. Throws InputError beyond budget instances.
    auto gen_reduction_instances(const Graph & g, const Graph & h, std::int64_t d_num, std::int64_t d_den,
            std::size_t budget = 4096) -> std::vector<ReductionInstance>;

    /// Union of partial maps given as (guest, host) pairs. Throws EmbeddingError
    /// naming the vertex when two parts disagree.
    auto union_embedding(int guest_size, const std::vector<std::vector<std::pair<int, int>>> & parts) -> Embedding;

    /// Longest run of consecutive blue vertices on any path.
    auto longest_blue_run(const RedBlueHost & h) -> int;

    /// Structural precondition for the bijective variant: blue runs of length
    /// at most d (so every original edge was subdivided at most d times).
    auto bijective_reduction_gate(const Graph & g, const RedBlueHost & h, int d) -> bool;

    /// Embedding JSON with sorted keys: {"contraction","distortion","expansion","map"}.
    /// Labels translate internal ids to user-facing labels (identity if empty).
    auto embedding_to_json(const Embedding & f, const DistortionReport * report,
            const std::vector<long long> & guest_labels = { }, const std::vector<long long> & host_labels = { }) -> std::string;

    /// Parses the "map" object of an embedding JSON document into internal ids.
    auto embedding_from_json(const std::string & text, int guest_size,
            const std::vector<long long> & guest_labels = { }, const std::vector<long long> & host_labels = { }) -> Embedding;

    /// DOT rendering of the host: vertices with a preimage are filled and
    /// labelled by it; red/blue colouring when red is given.
    auto embedding_to_dot(const Graph & h, const Embedding & f, const std::vector<bool> * red = nullptr) -> std::string;
}

#endif
