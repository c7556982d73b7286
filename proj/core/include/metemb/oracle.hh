/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef METEMB_GUARD_ORACLE_HH
#define METEMB_GUARD_ORACLE_HH 1

#include <metemb/embedding.hh>
#include <metemb/graph.hh>

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace metemb
{
    /// Limits on an exhaustive search; zero means unlimited.
    struct SearchBudget
    {
        std::uint64_t max_nodes = 0;
        std::chrono::milliseconds max_time{ 0 };

        static auto unlimited() -> SearchBudget { return SearchBudget{ }; }
    };

    enum class Verdict
    {
        Found,
        Infeasible,
        BudgetExceeded
    };

    auto to_string(Verdict v) -> std::string;

    struct SearchResult
    {
        Verdict verdict = Verdict::Infeasible;
        Embedding witness;
        std::uint64_t nodes = 0;

        auto found() const -> bool { return verdict == Verdict::Found; }
    };

    /// A general brute-force query: find an injective total F with
    /// guest_scale * D_G(x,y) <= D_H(F x, F y) <= (d_num/d_den) * guest_scale * D_G(x,y),
    /// images inside codomain (when given), extending the fixed pre-assignment
    /// (when given). In bijective mode the codomain must be exactly covered.
    struct OracleProblem
    {
        const DistanceMatrix * dg = nullptr;
        const DistanceMatrix * dh = nullptr;
        int guest_scale = 1;
        std::int64_t d_num = 1, d_den = 1;
        std::vector<bool> codomain;          // empty: every host vertex allowed
        std::vector<int> fixed;              // empty, or one entry per guest vertex (unmapped = free)
        bool bijective = false;
    };

    /// Backtracking with forward checking; the unassigned guest vertex with the
    /// fewest remaining candidates is branched on first (ties: lowest id), and
    /// host candidates are tried in increasing id.
    auto solve_oracle(const OracleProblem & problem, const SearchBudget & budget = { }) -> SearchResult;

    auto brute_force_embed(const Graph & g, const DistanceMatrix & dg, const Graph & h, const DistanceMatrix & dh,
            int d, bool bijective = false, const std::vector<bool> * codomain = nullptr,
            const SearchBudget & budget = { }) -> SearchResult;

    struct MinDistortionResult
    {
        std::optional<int> d;              // least feasible integer distortion, if any up to d_max
        bool budget_exceeded = false;
        Embedding witness;
    };

    /// Least integer d <= d_max admitting a non-contracting distortion-d
    /// embedding, by incremental oracle calls.
    auto min_distortion_integer(const Graph & g, const DistanceMatrix & dg, const Graph & h, const DistanceMatrix & dh,
            int d_max, const SearchBudget & budget = { }) -> MinDistortionResult;

    struct ReductionResult
    {
        Verdict verdict = Verdict::Infeasible;
        Embedding witness;                   // original host vertex ids
        Rational contraction;                // ratio of the instance that succeeded
        std::size_t instances_tried = 0;
        std::uint64_t nodes = 0;
    };

    /// Embedding of distortion at most d_num/d_den (any contraction), by
    /// solving the scaled red-blue instances in order with the oracle. In
    /// bijective mode the red vertices must be covered exactly. Witnesses are
    /// translated back to the original host.
    auto reduction_embed(const Graph & g, const Graph & h, std::int64_t d_num, std::int64_t d_den,
            bool bijective = false, const SearchBudget & budget = { }, std::size_t instance_budget = 4096) -> ReductionResult;
}

#endif
