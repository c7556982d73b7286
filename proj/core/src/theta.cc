/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <metemb/line_cycle.hh>
#include <metemb/theta.hh>

#include <algorithm>
#include <bit>
#include <chrono>
#include <limits>
#include <stdexcept>
#include <string>

using std::function;
using std::optional;
using std::pair;
using std::string;
using std::uint64_t;
using std::vector;

using std::chrono::steady_clock;

namespace metemb
{
    namespace
    {
        auto bit(int v) -> uint64_t
        {
            return uint64_t(1) << v;
        }

        auto members(uint64_t set) -> vector<int>
        {
            vector<int> r;
            for ( ; set ; set &= set - 1)
                r.push_back(std::countr_zero(set));
            return r;
        }

        auto pair_ok(const DistanceMatrix & dg, int d, int x, int y, int host) -> bool
        {
            auto guest = dg(x, y);
            return guest <= host && std::int64_t(host) <= std::int64_t(d) * guest;
        }

        auto require_balls(const ThetaHost & h, int d) -> void
        {
            if (h.d != d)
                throw std::invalid_argument("theta host balls were computed for a different distortion");
        }

        /// For every host vertex, its arm and position on the arm (s and t
        /// report arm -1).
        struct ArmIndex
        {
            vector<int> arm, position;

            explicit ArmIndex(const ThetaHost & h) :
                arm(h.graph.n(), -1),
                position(h.graph.n(), -1)
            {
                for (int i = 0 ; i < h.k() ; ++i)
                    for (int p = 1 ; p < h.arm_length(i) ; ++p) {
                        arm[h.arms[i][p]] = i;
                        position[h.arms[i][p]] = p;
                    }
            }
        };

        /// The arm seen from the end a component hangs off: s first for
        /// s-components, t first for t-components.
        auto oriented_arm(const ThetaHost & h, int i, ComponentRole role) -> vector<int>
        {
            auto seq = h.arms[i];
            if (role == ComponentRole::T)
                std::reverse(seq.begin(), seq.end());
            return seq;
        }

        /// The subproblem on a set of guests: induced subgraph and restricted
        /// guest metric, with local ids in increasing global order.
        struct Restriction
        {
            vector<int> global;
            vector<int> local;
            Graph g;
            DistanceMatrix dg;

            Restriction(const Graph & whole, const DistanceMatrix & whole_dg, uint64_t set) :
                global(members(set)),
                local(whole.n(), -1)
            {
                int m = int(global.size());
                for (int i = 0 ; i < m ; ++i)
                    local[global[i]] = i;
                vector<pair<int, int>> edges;
                for (auto [u, v] : whole.edges())
                    if (local[u] != -1 && local[v] != -1)
                        edges.emplace_back(local[u], local[v]);
                g = Graph::from_edges(m, edges);
                dg = DistanceMatrix(m);
                for (int i = 0 ; i < m ; ++i)
                    for (int j = 0 ; j < m ; ++j)
                        dg.at(i, j) = whole_dg(global[i], global[j]);
            }
        };

        /// Anchored guests sitting on the given arm positions [lo, hi].
        auto anchored_on(const ThetaAnchor & psi, const vector<int> & seq, int lo, int hi) -> vector<pair<int, int>>
        {
            vector<pair<int, int>> result;
            for (int p = lo ; p <= hi ; ++p)
                for (int x = 0 ; x < int(psi.image.size()) ; ++x)
                    if (psi.image[x] == seq[p])
                        result.emplace_back(x, p);
            return result;
        }

        auto index_in(const vector<int> & seq, int v) -> int
        {
            auto it = std::find(seq.begin(), seq.end(), v);
            return it == seq.end() ? -1 : int(it - seq.begin());
        }

        auto out_of_time(const SearchBudget & budget, steady_clock::time_point start) -> bool
        {
            return budget.max_time.count() != 0 && steady_clock::now() - start > budget.max_time;
        }
    }

    auto make_theta_host(const vector<int> & arm_lengths) -> ThetaHost
    {
        HostSpec spec;
        spec.family = HostFamily::Theta;
        spec.arms = arm_lengths;
        validate_host_spec(spec);

        ThetaHost h;
        h.graph = generate(spec);
        h.dh = all_pairs_distances(h.graph);
        int next = 2;
        for (int l : arm_lengths) {
            vector<int> seq{ h.s };
            for (int p = 1 ; p < l ; ++p)
                seq.push_back(next++);
            seq.push_back(h.t);
            h.arms.push_back(std::move(seq));
        }
        return h;
    }

    auto compute_balls(ThetaHost & h, int d) -> void
    {
        if (d < 1)
            throw InputError("distortion must be at least 1");
        int n = h.graph.n(), wide = 2 * d * d;
        h.d = d;
        h.ball_s.assign(n, false);
        h.ball_t.assign(n, false);
        h.wide_s.assign(n, false);
        h.wide_t.assign(n, false);
        for (int v = 0 ; v < n ; ++v) {
            h.ball_s[v] = h.dh(v, h.s) <= d;
            h.ball_t[v] = h.dh(v, h.t) <= d;
            h.wide_s[v] = h.dh(v, h.s) <= wide;
            h.wide_t[v] = h.dh(v, h.t) <= wide;
        }
        h.truncated.assign(h.k(), { });
        h.inner.assign(h.k(), { });
        h.short_arm.assign(h.k(), false);
        h.s_end.assign(h.k(), -1);
        h.t_end.assign(h.k(), -1);
        for (int i = 0 ; i < h.k() ; ++i) {
            for (int v : h.arms[i])
                if (! h.ball_s[v] && ! h.ball_t[v])
                    h.truncated[i].push_back(v);
            h.short_arm[i] = h.arm_length(i) < 4 * d * d + 2 * d;
            if (h.short_arm[i])
                continue;
            for (int v : h.arms[i])
                if (! h.wide_s[v] && ! h.wide_t[v])
                    h.inner[i].push_back(v);
            if (! h.inner[i].empty()) {
                h.s_end[i] = h.inner[i].front();
                h.t_end[i] = h.inner[i].back();
            }
        }
    }

    auto wide_balls_overlap(const ThetaHost & h) -> bool
    {
        for (int v = 0 ; v < h.graph.n() ; ++v)
            if (h.wide_s[v] && h.wide_t[v])
                return true;
        return false;
    }

    auto anchored_region(const ThetaHost & h) -> vector<bool>
    {
        vector<bool> region(h.graph.n(), false);
        for (int v = 0 ; v < h.graph.n() ; ++v)
            region[v] = h.wide_s[v] || h.wide_t[v];
        for (int i = 0 ; i < h.k() ; ++i)
            if (h.short_arm[i])
                for (int v : h.arms[i])
                    region[v] = true;
        return region;
    }

    auto enumerate_psi(const Graph & g, const DistanceMatrix & dg, const ThetaHost & h, int d,
            const function<auto (const ThetaAnchor &) -> bool> & visit) -> void
    {
        require_balls(h, d);
        int n = g.n(), hn = h.graph.n();
        if (n > 64)
            throw InputError("the theta solver supports guests with at most 64 vertices");
        auto region = anchored_region(h);
        vector<int> targets;
        for (int v = 0 ; v < hn ; ++v)
            if (region[v])
                targets.push_back(v);

        // distance from each anchored host vertex to the nearest vertex beyond the region
        constexpr int unreachable = std::numeric_limits<int>::max();
        vector<int> reach(hn, unreachable);
        bool has_free = false;
        for (int f = 0 ; f < hn ; ++f)
            if (! region[f]) {
                has_free = true;
                for (int v = 0 ; v < hn ; ++v)
                    reach[v] = std::min<int>(reach[v], h.dh(v, f));
            }

        // breadth-first guest order so neighbours constrain each other early
        vector<int> order;
        {
            vector<bool> seen(n, false);
            for (int r = 0 ; r < n ; ++r) {
                if (seen[r])
                    continue;
                seen[r] = true;
                order.push_back(r);
                for (std::size_t i = order.size() - 1 ; i < order.size() ; ++i)
                    for (int w : g.neighbours(order[i]))
                        if (! seen[w]) {
                            seen[w] = true;
                            order.push_back(w);
                        }
            }
        }

        ThetaAnchor psi;
        psi.image.assign(n, unmapped);
        vector<bool> used(hn, false);
        bool stop = false;

        auto mapped_ok = [&] (int depth, int x, int a) -> bool {
            for (int i = 0 ; i < depth ; ++i) {
                int y = order[i];
                if (psi.image[y] != unmapped) {
                    if (! pair_ok(dg, d, x, y, h.dh(a, psi.image[y])))
                        return false;
                }
                else if (std::int64_t(reach[a]) > std::int64_t(d) * dg(x, y))
                    return false;
            }
            return true;
        };
        auto unmapped_ok = [&] (int depth, int x) -> bool {
            for (int i = 0 ; i < depth ; ++i) {
                int y = order[i];
                if (psi.image[y] != unmapped && std::int64_t(reach[psi.image[y]]) > std::int64_t(d) * dg(x, y))
                    return false;
            }
            return true;
        };

        function<auto (int) -> void> extend = [&] (int depth) {
            if (stop)
                return;
            if (depth == n) {
                psi.domain = psi.core = 0;
                for (int x = 0 ; x < n ; ++x)
                    if (psi.image[x] != unmapped) {
                        psi.domain |= bit(x);
                        if (h.ball_s[psi.image[x]] || h.ball_t[psi.image[x]])
                            psi.core |= bit(x);
                    }
                if (! visit(psi))
                    stop = true;
                return;
            }
            int x = order[depth];
            for (int a : targets) {
                if (used[a] || ! mapped_ok(depth, x, a))
                    continue;
                used[a] = true;
                psi.image[x] = a;
                extend(depth + 1);
                psi.image[x] = unmapped;
                used[a] = false;
                if (stop)
                    return;
            }
            if (has_free && unmapped_ok(depth, x))
                extend(depth + 1);
        };
        extend(0);
    }

    auto classify_components(const Graph & g, const ThetaHost & h, const ThetaAnchor & psi)
        -> optional<vector<ResidualComponent>>
    {
        int n = g.n();
        ArmIndex index(h);
        vector<bool> removed(n, false);
        for (int x = 0 ; x < n ; ++x)
            removed[x] = (psi.core & bit(x)) != 0;

        vector<ResidualComponent> result;
        for (auto & comp : components_after_removal(g, removed)) {
            uint64_t set = 0;
            bool residual = false;
            for (int x : comp) {
                set |= bit(x);
                residual = residual || psi.image[x] == unmapped;
            }
            if (! residual)
                continue;

            bool touches_s = false, touches_t = false;
            auto touch = [&] (int y) {
                if (psi.image[y] == unmapped)
                    return;
                touches_s = touches_s || h.wide_s[psi.image[y]];
                touches_t = touches_t || h.wide_t[psi.image[y]];
            };
            int arm = -1;
            for (int x : comp) {
                touch(x);
                for (int y : g.neighbours(x))
                    touch(y);
                if (psi.image[x] != unmapped) {
                    int a = index.arm[psi.image[x]];
                    if (a == -1 || h.short_arm[a] || (arm != -1 && arm != a))
                        return std::nullopt;
                    arm = a;
                }
            }
            if (arm == -1 || (! touches_s && ! touches_t))
                return std::nullopt;

            ResidualComponent c;
            c.vertices = set;
            c.arm = arm;
            c.role = touches_s && touches_t ? ComponentRole::Full : touches_s ? ComponentRole::S : ComponentRole::T;
            result.push_back(c);
        }
        return result;
    }

    auto enumerate_configurations(const Graph & g, const ThetaAnchor & psi, const ThetaHost & h, int d)
        -> vector<ThetaConfiguration>
    {
        require_balls(h, d);
        auto classified = classify_components(g, h, psi);
        if (! classified || int(classified->size()) > 2 * h.k())
            return { };
        auto & comps = *classified;

        vector<int> long_arms;
        for (int i = 0 ; i < h.k() ; ++i)
            if (! h.short_arm[i])
                long_arms.push_back(i);

        // candidate arms per component: the long arms holding all its anchored guests
        vector<vector<int>> candidates(comps.size());
        for (std::size_t c = 0 ; c < comps.size() ; ++c)
            for (int i : long_arms)
                if (comps[c].arm == -1 || comps[c].arm == i)
                    candidates[c].push_back(i);

        vector<ThetaConfiguration> result;
        vector<int> choice(comps.size(), -1);
        function<auto (std::size_t) -> void> assign = [&] (std::size_t c) {
            if (c == comps.size()) {
                ThetaConfiguration conf;
                conf.psi = psi;
                conf.components = comps;
                for (int i : long_arms) {
                    ArmPlan plan;
                    plan.arm = i;
                    int s_count = 0, t_count = 0, full_count = 0;
                    for (std::size_t j = 0 ; j < comps.size() ; ++j)
                        if (choice[j] == i) {
                            plan.components.push_back(int(j));
                            comps[j].role == ComponentRole::S ? ++s_count
                                : comps[j].role == ComponentRole::T ? ++t_count : ++full_count;
                        }
                    if (plan.components.empty()) {
                        conf.empty_arms.push_back(i);
                        continue;
                    }
                    if (full_count == 1 && s_count + t_count == 0)
                        plan.form = 4;
                    else if (full_count == 0 && s_count == 1 && t_count == 1)
                        plan.form = 3;
                    else if (full_count == 0 && s_count == 1 && t_count == 0)
                        plan.form = 1;
                    else if (full_count == 0 && s_count == 0 && t_count == 1)
                        plan.form = 2;
                    else
                        return;
                    for (std::size_t j = 0 ; j < conf.components.size() ; ++j)
                        if (choice[j] == i)
                            conf.components[j].arm = i;
                    conf.plans.push_back(std::move(plan));
                }
                result.push_back(std::move(conf));
                return;
            }
            for (int i : candidates[c]) {
                choice[c] = i;
                assign(c + 1);
            }
            choice[c] = -1;
        };
        assign(0);

        double bound = 1;
        for (int i = 0 ; i < 2 * h.k() ; ++i)
            bound *= h.k();
        if (double(result.size()) > bound)
            throw std::logic_error("more theta configurations than k^(2k)");
        return result;
    }

    auto last_vertex_candidates(uint64_t component, int a, const DistanceMatrix & dg, int d) -> vector<int>
    {
        int far = 0;
        for (int x : members(component))
            far = std::max<int>(far, dg(a, x));
        vector<int> result;
        for (int x : members(component))
            if (dg(a, x) >= far - d * d)
                result.push_back(x);
        return result;
    }

    auto shortest_component_embedding(const Graph & g, const DistanceMatrix & dg, const ThetaHost & h,
            const ThetaAnchor & psi, const ResidualComponent & c, int last, int d,
            const SearchBudget & budget) -> ArmSearch
    {
        require_balls(h, d);
        if (c.role == ComponentRole::Full)
            throw std::invalid_argument("shortest_component_embedding needs an s- or t-component");
        ArmSearch search;
        if (! (c.vertices & bit(last)) || psi.image[last] != unmapped || c.arm < 0 || h.inner[c.arm].empty())
            return search;

        auto seq = oriented_arm(h, c.arm, c.role);
        auto inner = h.inner[c.arm];
        if (c.role == ComponentRole::T)
            std::reverse(inner.begin(), inner.end());
        int zone = index_in(seq, inner.front()), far = index_in(seq, inner.back());

        // C together with every anchored guest in this end's part of the arm
        auto prefix_guests = anchored_on(psi, seq, 0, zone - 1);
        uint64_t set = c.vertices;
        for (auto & [x, p] : prefix_guests)
            set |= bit(x);
        Restriction sub(g, dg, set);
        Anchor prefix;
        for (auto & [x, p] : prefix_guests)
            prefix.map.emplace_back(sub.local[x], p + 1);
        prefix.zone = zone;

        LineCycleOptions line_options;
        line_options.budget = budget;
        for (int length = zone + 1 ; length <= far + 1 ; ++length) {
            // the last vertex against every anchored guest, on the real host
            int spot = seq[length - 1];
            bool ok = true;
            for (int y : members(psi.domain))
                if (! pair_ok(dg, d, last, y, h.dh(spot, psi.image[y]))) {
                    ok = false;
                    break;
                }
            if (! ok)
                continue;
            ++search.line_calls;
            auto res = embed_line_prefix_last(sub.g, sub.dg, length, d, prefix, sub.local[last], line_options);
            if (res.verdict == Verdict::BudgetExceeded) {
                search.verdict = Verdict::BudgetExceeded;
                return search;
            }
            if (res.verdict != Verdict::Found)
                continue;
            int top = res.embedding.image[sub.local[last]];
            bool last_ok = true;
            for (int y : members(psi.domain))
                if (! pair_ok(dg, d, last, y, h.dh(seq[top - 1], psi.image[y])))
                    last_ok = false;
            if (! last_ok)
                continue;
            search.verdict = Verdict::Found;
            search.placement.length = top - 1;
            for (int i = 0 ; i < int(sub.global.size()) ; ++i)
                if (psi.image[sub.global[i]] == unmapped)
                    search.placement.map.emplace_back(sub.global[i], seq[res.embedding.image[i] - 1]);
            return search;
        }
        return search;
    }

    auto full_component_embedding(const Graph & g, const DistanceMatrix & dg, const ThetaHost & h,
            const ThetaAnchor & psi, const ResidualComponent & c, int d,
            const SearchBudget & budget) -> ArmSearch
    {
        require_balls(h, d);
        ArmSearch search;
        if (c.arm < 0 || h.inner[c.arm].empty())
            return search;
        auto & seq = h.arms[c.arm];
        int length = h.arm_length(c.arm);
        int lo = index_in(seq, h.s_end[c.arm]), hi = index_in(seq, h.t_end[c.arm]);

        auto s_guests = anchored_on(psi, seq, 0, lo - 1);
        auto t_guests = anchored_on(psi, seq, hi + 1, length);
        uint64_t set = c.vertices;
        for (auto & [x, p] : s_guests)
            set |= bit(x);
        for (auto & [x, p] : t_guests)
            set |= bit(x);
        Restriction sub(g, dg, set);
        Anchor prefix, suffix;
        for (auto & [x, p] : s_guests)
            prefix.map.emplace_back(sub.local[x], p + 1);
        for (auto & [x, p] : t_guests)
            suffix.map.emplace_back(sub.local[x], p + 1);
        // Anchored pairs were already checked on the real host, where the
        // two ends may be closer through another arm than along this one;
        // the line only needs to accept their fixed positions.
        auto ends = s_guests;
        ends.insert(ends.end(), t_guests.begin(), t_guests.end());
        for (auto & [x, p] : ends)
            for (auto & [y, q] : ends)
                if (x != y)
                    sub.dg.at(sub.local[x], sub.local[y]) = std::abs(p - q);
        prefix.zone = lo;
        suffix.zone = length - hi;

        LineCycleOptions line_options;
        line_options.budget = budget;
        ++search.line_calls;
        auto res = embed_line_fixed_ends(sub.g, sub.dg, length + 1, d, prefix, suffix, line_options);
        search.verdict = res.verdict;
        if (res.verdict == Verdict::Found) {
            search.placement.length = length;
            for (int i = 0 ; i < int(sub.global.size()) ; ++i)
                if (psi.image[sub.global[i]] == unmapped)
                    search.placement.map.emplace_back(sub.global[i], seq[res.embedding.image[i] - 1]);
        }
        return search;
    }

    namespace
    {
        /// Exact ball bound on guest degrees: the largest radius-d ball of the host.
        auto theta_degree_bound(const ThetaHost & h, int d) -> int
        {
            if (h.dh(h.s, h.t) > 2 * d)
                return (h.k() + 1) * d;
            int best = 0;
            for (int v = 0 ; v < h.graph.n() ; ++v) {
                int size = 0;
                for (int w = 0 ; w < h.graph.n() ; ++w)
                    if (w != v && h.dh(v, w) <= d)
                        ++size;
                best = std::max(best, size);
            }
            return best;
        }

        struct ThetaSearch
        {
            const Graph & g;
            const DistanceMatrix & dg;
            const ThetaHost & h;
            int d;
            const ThetaOptions & options;
            ThetaResult & result;

            auto accept(const Embedding & f) -> bool
            {
                ++result.stats.assemblies;
                if (! f.total() || ! f.injective() || verify_nc_distortion(g, h.graph, dg, h.dh, f, d)) {
                    ++result.stats.rejected_assemblies;
                    return false;
                }
                result.verdict = Verdict::Found;
                result.embedding = f;
                return true;
            }

            /// The whole guest beyond the anchored region: a line embedding
            /// into the inner part of one long arm.
            auto inside_one_arm() -> Verdict
            {
                LineCycleOptions line_options;
                line_options.budget = options.budget;
                for (int i = 0 ; i < h.k() ; ++i) {
                    if (h.inner[i].empty())
                        continue;
                    ++result.stats.line_calls;
                    auto res = embed_into_line(g, dg, int(h.inner[i].size()), d, line_options);
                    if (res.verdict == Verdict::BudgetExceeded)
                        return Verdict::BudgetExceeded;
                    if (res.verdict != Verdict::Found)
                        continue;
                    Embedding f(g.n());
                    for (int x = 0 ; x < g.n() ; ++x)
                        f.image[x] = h.inner[i][res.embedding.image[x] - 1];
                    if (accept(f))
                        return Verdict::Found;
                }
                return Verdict::Infeasible;
            }

            /// One configuration: solve each arm, then try every combination
            /// of last-vertex guesses.
            auto assemble(const ThetaConfiguration & conf) -> Verdict
            {
                const auto & psi = conf.psi;
                // per component: the candidate placements (one per successful last vertex)
                vector<vector<ArmPlacement>> options_per_component;
                for (auto & plan : conf.plans)
                    for (int j : plan.components) {
                        auto & c = conf.components[j];
                        vector<ArmPlacement> found;
                        if (c.role == ComponentRole::Full) {
                            auto r = full_component_embedding(g, dg, h, psi, c, d, options.budget);
                            result.stats.line_calls += r.line_calls;
                            if (r.verdict == Verdict::BudgetExceeded)
                                return Verdict::BudgetExceeded;
                            if (r.verdict == Verdict::Found)
                                found.push_back(r.placement);
                        }
                        else {
                            auto seq = oriented_arm(h, c.arm, c.role);
                            int end_zone = index_in(seq, c.role == ComponentRole::S ? h.s_end[c.arm] : h.t_end[c.arm]);
                            int a = -1;
                            for (auto & [x, p] : anchored_on(psi, seq, 0, end_zone - 1))
                                if (a == -1 || x < a)
                                    a = x;
                            if (a == -1)
                                return Verdict::Infeasible;
                            for (int last : last_vertex_candidates(c.vertices & ~psi.domain, a, dg, d)) {
                                auto r = shortest_component_embedding(g, dg, h, psi, c, last, d, options.budget);
                                result.stats.line_calls += r.line_calls;
                                if (r.verdict == Verdict::BudgetExceeded)
                                    return Verdict::BudgetExceeded;
                                if (r.verdict == Verdict::Found)
                                    found.push_back(r.placement);
                            }
                        }
                        if (found.empty())
                            return Verdict::Infeasible;
                        options_per_component.push_back(std::move(found));
                    }

                vector<std::size_t> pick(options_per_component.size(), 0);
                while (true) {
                    Embedding f(g.n());
                    f.image = psi.image;
                    for (std::size_t c = 0 ; c < pick.size() ; ++c)
                        for (auto & [x, v] : options_per_component[c][pick[c]].map)
                            f.image[x] = v;
                    if (accept(f))
                        return Verdict::Found;
                    std::size_t c = 0;
                    while (c < pick.size() && ++pick[c] == options_per_component[c].size())
                        pick[c++] = 0;
                    if (c == pick.size())
                        return Verdict::Infeasible;
                }
            }
        };
    }

    auto embed_into_theta(const Graph & g, const DistanceMatrix & dg, const ThetaHost & host, int d,
            const ThetaOptions & options) -> ThetaResult
    {
        if (g.n() == 0 || ! g.connected())
            throw InputError("the guest graph must be connected and nonempty");
        if (g.n() > 64)
            throw InputError("the theta solver supports guests with at most 64 vertices");
        if (g.weighted())
            throw InputError("the theta solver supports unweighted guests only");
        if (d < 1)
            throw InputError("distortion must be at least 1");

        ThetaHost h = host;
        if (h.d != d)
            compute_balls(h, d);

        ThetaResult result;
        auto finish = [&] () -> ThetaResult {
            if (options.cross_check_cycle && h.k() == 2 && result.verdict != Verdict::BudgetExceeded) {
                int size = h.arm_length(0) + h.arm_length(1);
                LineCycleOptions line_options;
                line_options.budget = options.budget;
                auto cycle = embed_into_cycle(g, dg, size, d, line_options);
                if (cycle.verdict != Verdict::BudgetExceeded) {
                    result.stats.cycle_cross_checked = true;
                    if ((cycle.verdict == Verdict::Found) != (result.verdict == Verdict::Found))
                        throw std::logic_error("theta and cycle solvers disagree on a two-arm host");
                }
            }
            return result;
        };

        if (g.max_degree() > theta_degree_bound(h, d)) {
            result.stats.gate_rejected = true;
            return finish();
        }

        if (g.n() > h.graph.n())
            return finish();

        if (wide_balls_overlap(h)) {
            result.stats.oracle_fallback = true;
            auto res = brute_force_embed(g, dg, h.graph, h.dh, d, false, nullptr, options.budget);
            result.verdict = res.verdict;
            if (res.found()) {
                if (auto v = verify_nc_distortion(g, h.graph, dg, h.dh, res.witness, d))
                    throw EmbeddingError("oracle produced an invalid theta embedding: " + v->describe());
                result.embedding = res.witness;
            }
            return finish();
        }

        ThetaSearch search{ g, dg, h, d, options, result };
        auto start = steady_clock::now();
        Verdict outcome = Verdict::Infeasible;
        uint64_t full = g.n() == 64 ? ~uint64_t(0) : bit(g.n()) - 1;
        enumerate_psi(g, dg, h, d, [&] (const ThetaAnchor & psi) -> bool {
            ++result.stats.anchors;
            if (out_of_time(options.budget, start)) {
                outcome = Verdict::BudgetExceeded;
                return false;
            }
            if (psi.domain == full) {
                Embedding f(g.n());
                f.image = psi.image;
                if (search.accept(f))
                    outcome = Verdict::Found;
                return outcome != Verdict::Found;
            }
            if (psi.domain == 0) {
                auto v = search.inside_one_arm();
                if (v != Verdict::Infeasible)
                    outcome = v;
                return v == Verdict::Infeasible;
            }
            for (int x = 0 ; x < g.n() ; ++x)
                if (! (psi.core & bit(x)) && g.degree(x) > 2 * d)
                    return true;
            auto confs = enumerate_configurations(g, psi, h, d);
            result.stats.configurations += confs.size();
            result.stats.max_configurations_per_anchor = std::max<uint64_t>(result.stats.max_configurations_per_anchor, confs.size());
            for (auto & conf : confs) {
                auto v = search.assemble(conf);
                if (v != Verdict::Infeasible) {
                    outcome = v;
                    return false;
                }
            }
            return true;
        });
        result.verdict = outcome;
        if (outcome != Verdict::Found)
            result.embedding = Embedding{ };
        return finish();
    }
}
