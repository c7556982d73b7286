/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <metemb/oracle.hh>

#include <algorithm>
#include <bit>

using std::int64_t;
using std::optional;
using std::string;
using std::uint64_t;
using std::vector;

using std::chrono::steady_clock;

namespace metemb
{
    auto to_string(Verdict v) -> string
    {
        switch (v) {
            case Verdict::Found: return "found";
            case Verdict::Infeasible: return "infeasible";
            case Verdict::BudgetExceeded: return "budget";
        }
        return "unknown";
    }

    namespace
    {
        struct Aborted
        {
        };

        class Search
        {
            private:
                const OracleProblem & _p;
                const SearchBudget & _budget;
                int _n, _big_n, _words;
                steady_clock::time_point _start;
                uint64_t _nodes = 0;

                // _domains[depth] holds _n rows of _words words each.
                vector<vector<uint64_t>> _domains;
                vector<int> _assignment;
                vector<int> _lo, _hi;   // per guest pair bounds on the host distance

                auto row(int depth, int x) -> uint64_t *
                {
                    return _domains[depth].data() + std::size_t(x) * _words;
                }

                auto count(const uint64_t * r) const -> int
                {
                    int c = 0;
                    for (int w = 0 ; w < _words ; ++w)
                        c += std::popcount(r[w]);
                    return c;
                }

                auto tick() -> void
                {
                    ++_nodes;
                    if (_budget.max_nodes != 0 && _nodes > _budget.max_nodes)
                        throw Aborted{ };
                    if (_budget.max_time.count() != 0 && (_nodes & 1023) == 0
                            && steady_clock::now() - _start > _budget.max_time)
                        throw Aborted{ };
                }

                auto recurse(int depth) -> bool
                {
                    tick();
                    if (depth == _n)
                        return true;

                    int best = -1, best_count = 0;
                    for (int x = 0 ; x < _n ; ++x)
                        if (_assignment[x] == unmapped) {
                            int c = count(row(depth, x));
                            if (best == -1 || c < best_count) {
                                best = x;
                                best_count = c;
                            }
                        }
                    if (best_count == 0)
                        return false;

                    const uint64_t * dom = row(depth, best);
                    vector<uint64_t> candidates(dom, dom + _words);
                    for (int w = 0 ; w < _words ; ++w)
                        for (uint64_t bits = candidates[w] ; bits ; bits &= bits - 1) {
                            int a = w * 64 + std::countr_zero(bits);
                            _assignment[best] = a;
                            if (propagate(depth, best, a) && recurse(depth + 1))
                                return true;
                            _assignment[best] = unmapped;
                        }
                    return false;
                }

                auto propagate(int depth, int x, int a) -> bool
                {
                    auto & next = _domains[depth + 1];
                    std::copy(_domains[depth].begin(), _domains[depth].end(), next.begin());
                    const auto & dh = *_p.dh;
                    for (int y = 0 ; y < _n ; ++y) {
                        if (_assignment[y] != unmapped)
                            continue;
                        int lo = _lo[x * _n + y], hi = _hi[x * _n + y];
                        uint64_t * r = row(depth + 1, y);
                        bool any = false;
                        for (int w = 0 ; w < _words ; ++w) {
                            uint64_t keep = 0;
                            for (uint64_t bits = r[w] ; bits ; bits &= bits - 1) {
                                int b = w * 64 + std::countr_zero(bits);
                                int dist = dh(a, b);
                                if (b != a && dist >= lo && dist <= hi && dist != infinite_distance)
                                    keep |= uint64_t(1) << (b & 63);
                            }
                            r[w] = keep;
                            any = any || keep;
                        }
                        if (! any)
                            return false;
                    }
                    return true;
                }

            public:
                Search(const OracleProblem & p, const SearchBudget & budget) :
                    _p(p),
                    _budget(budget),
                    _n(p.dg->n()),
                    _big_n(p.dh->n()),
                    _words((_big_n + 63) / 64),
                    _start(steady_clock::now())
                {
                    _domains.assign(_n + 1, vector<uint64_t>(std::size_t(_n) * _words, 0));
                    _assignment.assign(_n, unmapped);
                    _lo.assign(std::size_t(_n) * _n, 0);
                    _hi.assign(std::size_t(_n) * _n, 0);
                    for (int x = 0 ; x < _n ; ++x)
                        for (int y = 0 ; y < _n ; ++y) {
                            int64_t base = int64_t((*p.dg)(x, y)) * p.guest_scale;
                            _lo[x * _n + y] = int(std::min<int64_t>(base, infinite_distance - 1));
                            _hi[x * _n + y] = int(std::min<int64_t>(base * p.d_num / p.d_den, infinite_distance - 1));
                        }
                }

                auto nodes() const -> uint64_t { return _nodes; }

                auto run() -> optional<Embedding>
                {
                    for (int x = 0 ; x < _n ; ++x) {
                        uint64_t * r = row(0, x);
                        for (int b = 0 ; b < _big_n ; ++b)
                            if (_p.codomain.empty() || _p.codomain[b])
                                r[b / 64] |= uint64_t(1) << (b & 63);
                        if (! _p.fixed.empty() && _p.fixed[x] != unmapped) {
                            int a = _p.fixed[x];
                            bool allowed = a >= 0 && a < _big_n && (r[a / 64] >> (a & 63)) & 1;
                            std::fill(r, r + _words, 0);
                            if (allowed)
                                r[a / 64] |= uint64_t(1) << (a & 63);
                        }
                    }
                    if (_n == 0)
                        return Embedding(0);
                    if (! recurse(0))
                        return std::nullopt;
                    Embedding f(_n);
                    f.image = _assignment;
                    return f;
                }
        };
    }

    auto solve_oracle(const OracleProblem & problem, const SearchBudget & budget) -> SearchResult
    {
        SearchResult result;
        if (problem.bijective) {
            int allowed = 0;
            for (int b = 0 ; b < problem.dh->n() ; ++b)
                if (problem.codomain.empty() || problem.codomain[b])
                    ++allowed;
            if (allowed != problem.dg->n()) {
                result.verdict = Verdict::Infeasible;
                return result;
            }
        }

        Search search(problem, budget);
        try {
            auto f = search.run();
            result.nodes = search.nodes();
            if (f) {
                result.verdict = Verdict::Found;
                result.witness = *f;
            }
            else
                result.verdict = Verdict::Infeasible;
        }
        catch (const Aborted &) {
            result.nodes = search.nodes();
            result.verdict = Verdict::BudgetExceeded;
        }
        return result;
    }

    auto brute_force_embed(const Graph &, const DistanceMatrix & dg, const Graph &, const DistanceMatrix & dh,
            int d, bool bijective, const vector<bool> * codomain, const SearchBudget & budget) -> SearchResult
    {
        OracleProblem p;
        p.dg = &dg;
        p.dh = &dh;
        p.d_num = d;
        p.bijective = bijective;
        if (codomain)
            p.codomain = *codomain;
        return solve_oracle(p, budget);
    }

    auto min_distortion_integer(const Graph & g, const DistanceMatrix & dg, const Graph & h, const DistanceMatrix & dh,
            int d_max, const SearchBudget & budget) -> MinDistortionResult
    {
        MinDistortionResult result;
        for (int d = 1 ; d <= d_max ; ++d) {
            auto r = brute_force_embed(g, dg, h, dh, d, false, nullptr, budget);
            if (r.verdict == Verdict::BudgetExceeded) {
                result.budget_exceeded = true;
                return result;
            }
            if (r.found()) {
                result.d = d;
                result.witness = r.witness;
                return result;
            }
        }
        return result;
    }

    auto reduction_embed(const Graph & g, const Graph & h, int64_t d_num, int64_t d_den,
            bool bijective, const SearchBudget & budget, std::size_t instance_budget) -> ReductionResult
    {
        auto dg = all_pairs_distances(g);
        ReductionResult result;
        bool unknown = false;
        for (auto & inst : gen_reduction_instances(g, h, d_num, d_den, instance_budget)) {
            ++result.instances_tried;
            auto dh = all_pairs_distances(inst.host.graph);
            OracleProblem p;
            p.dg = &dg;
            p.dh = &dh;
            p.guest_scale = inst.guest_scale;
            p.d_num = d_num;
            p.d_den = d_den;
            p.codomain = inst.host.red;
            p.bijective = bijective;
            auto r = solve_oracle(p, budget);
            result.nodes += r.nodes;
            if (r.verdict == Verdict::BudgetExceeded)
                unknown = true;
            else if (r.found()) {
                result.verdict = Verdict::Found;
                result.contraction = inst.contraction;
                result.witness = Embedding(g.n());
                for (int x = 0 ; x < g.n() ; ++x)
                    result.witness.image[x] = inst.host.original_of[r.witness.image[x]];
                return result;
            }
        }
        result.verdict = unknown ? Verdict::BudgetExceeded : Verdict::Infeasible;
        return result;
    }
}
