/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <metemb/line_cycle.hh>

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <string>
#include <unordered_map>

using std::function;
using std::pair;
using std::string;
using std::uint64_t;
using std::unordered_map;
using std::vector;

namespace metemb
{
    namespace
    {
        auto bit(int v) -> uint64_t
        {
            return uint64_t(1) << v;
        }

        auto weight_bound(const Graph & g) -> int
        {
            return std::max(1, g.max_weight());
        }

        auto window_radius(const Graph & g, int d) -> int
        {
            return d * weight_bound(g) + 1;
        }

        auto adjacency_masks(const Graph & g) -> vector<uint64_t>
        {
            if (g.n() > 64)
                throw InputError("the line and cycle solvers support guests with at most 64 vertices");
            vector<uint64_t> adj(g.n(), 0);
            for (int v = 0 ; v < g.n() ; ++v)
                for (int w : g.neighbours(v))
                    adj[v] |= bit(w);
            return adj;
        }

        auto neighbourhood(const vector<uint64_t> & adj, uint64_t set) -> uint64_t
        {
            uint64_t result = 0;
            for (uint64_t bits = set ; bits ; bits &= bits - 1)
                result |= adj[std::countr_zero(bits)];
            return result;
        }

        /// Vertices of allowed reachable from seeds (seeds intersected with allowed) inside allowed.
        auto closure(const vector<uint64_t> & adj, uint64_t seeds, uint64_t allowed) -> uint64_t
        {
            uint64_t reached = seeds & allowed, frontier = reached;
            while (frontier) {
                uint64_t next = neighbourhood(adj, frontier) & allowed & ~reached;
                reached |= next;
                frontier = next;
            }
            return reached;
        }

        auto pair_ok(const DistanceMatrix & dg, int d, int u, int v, int host) -> bool
        {
            std::int64_t base = dg(u, v);
            return base <= host && host <= std::int64_t(d) * base;
        }

        auto line_distances(int size) -> DistanceMatrix
        {
            DistanceMatrix m(size, 0);
            for (int p = 0 ; p < size ; ++p)
                for (int q = 0 ; q < size ; ++q)
                    m.at(p, q) = std::abs(p - q);
            return m;
        }

        auto cycle_distances(int size) -> DistanceMatrix
        {
            DistanceMatrix m(size, 0);
            for (int p = 0 ; p < size ; ++p)
                for (int q = 0 ; q < size ; ++q)
                    m.at(p, q) = std::min(std::abs(p - q), size - std::abs(p - q));
            return m;
        }

        auto record_fallback(const LineCycleOptions & options) -> void
        {
            if (options.stats)
                ++options.stats->oracle_fallbacks;
        }

        auto from_search(const SearchResult & r) -> LineCycleResult
        {
            LineCycleResult result;
            result.verdict = r.verdict;
            if (r.found())
                result.embedding = r.witness;
            return result;
        }

        /// Short cycles, where the anchor window and a sweep window do not fit
        /// side by side: guest vertex 0 is pinned at position 0 (the cycle is
        /// vertex transitive) and positions 1..N-1 are scanned in order, each
        /// left empty or given an unused vertex consistent with everything
        /// placed so far.
        auto scan_short_cycle(const DistanceMatrix & dg, const DistanceMatrix & dh, int n, int d,
                const LineCycleOptions & options) -> LineCycleResult
        {
            int size = dh.n();
            auto start = std::chrono::steady_clock::now();
            const auto & budget = options.budget;
            vector<int> image(n, unmapped);
            vector<int> placed_at;
            uint64_t nodes = 0;
            bool out_of_budget = false;
            image[0] = 0;
            placed_at.push_back(0);

            function<bool (int, int)> fill = [&] (int pos, int remaining) -> bool {
                if (remaining == 0)
                    return true;
                if (size - pos < remaining)
                    return false;
                ++nodes;
                if (budget.max_nodes && nodes > budget.max_nodes) {
                    out_of_budget = true;
                    return false;
                }
                if (budget.max_time.count() && (nodes & 1023) == 0
                        && std::chrono::steady_clock::now() - start > budget.max_time) {
                    out_of_budget = true;
                    return false;
                }
                for (int v = 1 ; v < n && ! out_of_budget ; ++v) {
                    if (image[v] != unmapped)
                        continue;
                    bool ok = true;
                    for (int u = 0 ; u < n && ok ; ++u)
                        if (image[u] != unmapped)
                            ok = pair_ok(dg, d, u, v, dh(image[u], pos));
                    if (! ok)
                        continue;
                    image[v] = pos;
                    if (fill(pos + 1, remaining - 1))
                        return true;
                    image[v] = unmapped;
                }
                if (out_of_budget)
                    return false;
                return fill(pos + 1, remaining);
            };

            LineCycleResult result;
            bool found = fill(1, n - 1);
            if (options.stats)
                options.stats->scan_nodes += nodes;
            if (found) {
                result.verdict = Verdict::Found;
                result.embedding = Embedding(n);
                result.embedding.image = image;
            }
            else if (out_of_budget)
                result.verdict = Verdict::BudgetExceeded;
            return result;
        }

        struct State
        {
            string key;                 // slot + 1 per window position
            int parent = -1;
            uint64_t domain = 0, left = 0, right = 0;
        };

        auto key_of(const WindowPartialEmbedding & f) -> string
        {
            string k(f.slot.size(), '\0');
            for (std::size_t i = 0 ; i < f.slot.size() ; ++i)
                k[i] = char(f.slot[i] + 1);
            return k;
        }

        auto window_of(const string & key, int mid) -> WindowPartialEmbedding
        {
            WindowPartialEmbedding f;
            f.mid = mid;
            f.slot.resize(key.size());
            for (std::size_t i = 0 ; i < key.size() ; ++i)
                f.slot[i] = int(key[i]) - 1;
            return f;
        }

        /// The layered succession-graph search for one sweep problem.
        class Sweep
        {
            private:
                const SweepProblem & _p;
                const LineCycleOptions & _options;
                int _r, _width;
                vector<vector<State>> _layers;     // indexed by mid - first_mid
                int _first_mid, _last_mid;

                auto stats() -> SweepStats *
                {
                    return _options.stats;
                }

                /// Depth-first generation of every feasible source window at mid.
                auto sources(int mid, vector<State> & out, unordered_map<string, int> & index) -> void
                {
                    const auto & dg = *_p.dg;
                    WindowPartialEmbedding f;
                    f.mid = mid;
                    f.slot.assign(_width, -1);
                    uint64_t used = 0;
                    function<void (int)> fill = [&] (int i) {
                        if (i == _width) {
                            if (used == 0)
                                return;
                            if (stats())
                                ++stats()->windows;
                            if (! _p.is_feasible(f) || ! _p.is_source(f))
                                return;
                            auto k = key_of(f);
                            if (index.count(k))
                                return;
                            State s;
                            s.key = k;
                            s.domain = used;
                            s.left = _p.left_set(f);
                            s.right = _p.right_set(f);
                            index.emplace(k, int(out.size()));
                            out.push_back(std::move(s));
                            return;
                        }
                        f.slot[i] = -1;
                        fill(i + 1);
                        int pos = mid - _r + i;
                        for (int v = 0 ; v < _p.g->n() ; ++v) {
                            if ((used | _p.anchored) & bit(v))
                                continue;
                            bool ok = true;
                            for (int j = 0 ; j < i && ok ; ++j)
                                if (f.slot[j] != -1)
                                    ok = pair_ok(dg, _p.d, v, f.slot[j], i - j);
                            for (uint64_t bits = _p.anchored ; bits && ok ; bits &= bits - 1) {
                                int w = std::countr_zero(bits);
                                ok = pair_ok(dg, _p.d, v, w, _p.host_distance(pos, _p.anchor_position[w]));
                            }
                            if (! ok)
                                continue;
                            f.slot[i] = v;
                            used |= bit(v);
                            fill(i + 1);
                            used &= ~bit(v);
                            f.slot[i] = -1;
                        }
                    };
                    fill(0);
                }

                auto extend(const State & a, int a_index, int mid_a, vector<State> & out, unordered_map<string, int> & index) -> void
                {
                    const auto & dg = *_p.dg;
                    int mid_b = mid_a + 1;
                    bool overlap = false;
                    for (int i = 1 ; i < _width ; ++i)
                        overlap = overlap || a.key[i] != 0;
                    if (! overlap)
                        return;

                    int dropped = int(a.key[0]) - 1;
                    int new_pos = mid_b + _r;
                    vector<int> candidates{ -1 };
                    for (uint64_t bits = a.right ; bits ; bits &= bits - 1)
                        candidates.push_back(std::countr_zero(bits));

                    for (int y : candidates) {
                        if (y != -1) {
                            bool ok = true;
                            for (int i = 1 ; i < _width && ok ; ++i) {
                                int w = int(a.key[i]) - 1;
                                if (w != -1)
                                    ok = pair_ok(dg, _p.d, y, w, _width - i);
                            }
                            for (uint64_t bits = _p.anchored ; bits && ok ; bits &= bits - 1) {
                                int w = std::countr_zero(bits);
                                ok = pair_ok(dg, _p.d, y, w, _p.host_distance(new_pos, _p.anchor_position[w]));
                            }
                            if (! ok)
                                continue;
                        }
                        string k = a.key.substr(1);
                        k.push_back(char(y + 1));
                        if (stats())
                            ++stats()->windows;
                        auto f_b = window_of(k, mid_b);
                        if (! _p.is_feasible(f_b))
                            continue;
                        uint64_t left_b = _p.left_set(f_b);
                        if (dropped != -1 && ! (left_b & bit(dropped)))
                            continue;
                        if (stats())
                            ++stats()->successions;
                        uint64_t right_b = _p.right_set(f_b);
                        if (_options.check_identities && stats()) {
                            stats()->identity_checks += 2;
                            uint64_t new_bit = y == -1 ? 0 : bit(y), old_bit = dropped == -1 ? 0 : bit(dropped);
                            if (a.right != (right_b | new_bit))
                                ++stats()->identity_violations;
                            if (left_b != (a.left | old_bit))
                                ++stats()->identity_violations;
                        }
                        if (index.count(k))
                            continue;
                        State s;
                        s.key = std::move(k);
                        s.parent = a_index;
                        s.domain = (a.domain & ~(dropped == -1 ? 0 : bit(dropped))) | (y == -1 ? 0 : bit(y));
                        s.left = left_b;
                        s.right = right_b;
                        index.emplace(s.key, int(out.size()));
                        out.push_back(std::move(s));
                    }
                }

                auto build(int layer, int index) -> Embedding
                {
                    Embedding f(_p.g->n());
                    for (int v = 0 ; v < _p.g->n() ; ++v)
                        if (_p.anchored & bit(v))
                            f.image[v] = _p.anchor_position[v];
                    while (layer >= 0 && index >= 0) {
                        const State & s = _layers[layer][index];
                        int mid = _first_mid + layer;
                        for (int i = 0 ; i < _width ; ++i) {
                            int v = int(s.key[i]) - 1;
                            if (v == -1)
                                continue;
                            int pos = mid - _r + i;
                            if (f.image[v] != unmapped && f.image[v] != pos)
                                throw EmbeddingError("window sweep produced disagreeing windows at guest vertex " + std::to_string(v));
                            f.image[v] = pos;
                        }
                        index = s.parent;
                        --layer;
                    }
                    return f;
                }

            public:
                Sweep(const SweepProblem & p, const LineCycleOptions & options) :
                    _p(p),
                    _options(options),
                    _r(p.radius),
                    _width(2 * p.radius + 1),
                    _first_mid(p.chain_lo + p.radius),
                    _last_mid(p.chain_hi - p.radius)
                {
                }

                auto run() -> std::optional<Embedding>
                {
                    if (_first_mid > _last_mid)
                        return std::nullopt;
                    for (int mid = _first_mid ; mid <= _last_mid ; ++mid) {
                        _layers.emplace_back();
                        auto & layer = _layers.back();
                        unordered_map<string, int> index;
                        if (mid == _first_mid || _p.floating_source)
                            sources(mid, layer, index);
                        if (mid > _first_mid) {
                            auto & previous = _layers[_layers.size() - 2];
                            for (int i = 0 ; i < int(previous.size()) ; ++i)
                                extend(previous[i], i, mid - 1, layer, index);
                        }
                        for (int i = 0 ; i < int(layer.size()) ; ++i)
                            if (_p.is_sink(window_of(layer[i].key, mid)))
                                return build(int(_layers.size()) - 1, i);
                        if (layer.empty() && ! _p.floating_source)
                            return std::nullopt;
                    }
                    return std::nullopt;
                }
        };

        auto sweep(const SweepProblem & p, const LineCycleOptions & options) -> std::optional<Embedding>
        {
            Sweep s(p, options);
            return s.run();
        }

        /// Every valid placement into window positions lo..hi with some
        /// positions possibly pre-assigned; calls back with (vertex, position) maps.
        auto enumerate_window_maps(const DistanceMatrix & dg, int n, int d, int lo, int hi,
                const function<bool (int pos, int v)> & allowed,
                const function<void (const vector<pair<int, int>> &)> & emit) -> void
        {
            vector<pair<int, int>> placed;
            uint64_t used = 0;
            function<void (int)> fill = [&] (int pos) {
                if (pos > hi) {
                    emit(placed);
                    return;
                }
                if (allowed(pos, -1))
                    fill(pos + 1);
                for (int v = 0 ; v < n ; ++v) {
                    if (used & bit(v) || ! allowed(pos, v))
                        continue;
                    bool ok = true;
                    for (auto & [w, q] : placed)
                        if (! pair_ok(dg, d, v, w, pos - q)) {
                            ok = false;
                            break;
                        }
                    if (! ok)
                        continue;
                    placed.emplace_back(v, pos);
                    used |= bit(v);
                    fill(pos + 1);
                    used &= ~bit(v);
                    placed.pop_back();
                }
            };
            fill(lo);
        }

        auto anchor_pairs_valid(const SweepProblem & p) -> bool
        {
            for (uint64_t a = p.anchored ; a ; a &= a - 1) {
                int u = std::countr_zero(a);
                for (uint64_t b = a & (a - 1) ; b ; b &= b - 1) {
                    int v = std::countr_zero(b);
                    if (! pair_ok(*p.dg, p.d, u, v, p.host_distance(p.anchor_position[u], p.anchor_position[v])))
                        return false;
                }
            }
            return true;
        }

        auto gate(const Graph & g, int d, const LineCycleOptions & options) -> bool
        {
            if (! degree_gate(g.max_degree(), 2, d * weight_bound(g))) {
                if (options.stats)
                    ++options.stats->gate_rejections;
                return false;
            }
            return true;
        }

        /// Places everything by the oracle on the line 1..N, with anchored
        /// vertices fixed and every other vertex restricted to [lo, hi].
        auto line_oracle(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
                const vector<int> & anchor_position, int lo, int hi, const SearchBudget & budget) -> SearchResult
        {
            auto dh = line_distances(host_size);
            OracleProblem problem;
            problem.dg = &dg;
            problem.dh = &dh;
            problem.d_num = d;
            problem.codomain.assign(host_size, false);
            for (int p = std::max(lo, 1) ; p <= std::min(hi, host_size) ; ++p)
                problem.codomain[p - 1] = true;
            problem.fixed.assign(g.n(), unmapped);
            for (int v = 0 ; v < g.n() ; ++v)
                if (anchor_position[v] != unmapped) {
                    problem.fixed[v] = anchor_position[v] - 1;
                    problem.codomain[anchor_position[v] - 1] = true;
                }
            auto r = solve_oracle(problem, budget);
            if (r.found())
                for (auto & x : r.witness.image)
                    x += 1;
            return r;
        }

        auto verified(const DistanceMatrix & dg, const DistanceMatrix & dh, Embedding f, int d, int offset) -> Embedding
        {
            Embedding shifted = f;
            for (auto & x : shifted.image)
                x -= offset;
            if (auto v = verify_scaled(dg, dh, shifted, 1, d, 1))
                throw EmbeddingError("line/cycle solver produced an invalid embedding: " + v->describe());
            return f;
        }

        auto check_line_anchor(const Anchor & a, int lo, int hi, uint64_t & seen) -> bool
        {
            for (auto & [v, p] : a.map) {
                if (p < lo || p > hi || (seen & bit(v)))
                    return false;
                seen |= bit(v);
            }
            return true;
        }

        /// The shared line engine: prefix zone [1..a1], suffix zone [N-a2+1..N],
        /// optional last vertex.
        auto solve_line(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
                const Anchor & prefix, const Anchor & suffix, int last, const LineCycleOptions & options) -> LineCycleResult
        {
            LineCycleResult infeasible;
            int n = g.n();
            if (n > 64)
                throw InputError("the line and cycle solvers support guests with at most 64 vertices");
            if (last != -1 && (last < 0 || last >= n))
                throw InputError("last vertex out of range");
            if (n == 0 || host_size < n || ! gate(g, d, options))
                return infeasible;

            auto problem = SweepProblem::for_line(g, dg, host_size, d, prefix, suffix);
            int a1 = problem.chain_lo - 1, a2 = host_size - problem.chain_hi;
            uint64_t seen = 0;
            if (a1 + a2 > host_size)
                return infeasible;
            if (! check_line_anchor(prefix, 1, a1, seen) || ! check_line_anchor(suffix, host_size - a2 + 1, host_size, seen))
                return infeasible;
            for (auto & [v, p1] : prefix.map)
                for (auto & [w, p2] : prefix.map)
                    if (v != w && p1 == p2)
                        return infeasible;
            for (auto & [v, p1] : suffix.map)
                for (auto & [w, p2] : suffix.map)
                    if (v != w && p1 == p2)
                        return infeasible;
            if (! anchor_pairs_valid(problem))
                return infeasible;
            problem.last_vertex = last;

            auto line_dh = [&] (int size) { return line_distances(size); };

            if (problem.anchored == problem.full_mask()) {
                if (last != -1) {
                    int top = problem.anchor_position[last];
                    for (int v = 0 ; v < n ; ++v)
                        if (problem.anchor_position[v] > top)
                            return infeasible;
                }
                LineCycleResult result;
                result.verdict = Verdict::Found;
                result.embedding = Embedding(n);
                result.embedding.image = problem.anchor_position;
                return result;
            }
            if (last != -1 && (problem.anchored & bit(last)))
                return infeasible;

            int r = problem.radius;
            if (problem.chain_hi - problem.chain_lo + 1 < 2 * r + 1) {
                record_fallback(options);
                if (last == -1)
                    return from_search(line_oracle(g, dg, host_size, d, problem.anchor_position,
                                problem.chain_lo, problem.chain_hi, options.budget));
                for (int top = problem.chain_lo ; top <= problem.chain_hi ; ++top) {
                    auto fixed = problem.anchor_position;
                    fixed[last] = top;
                    auto res = line_oracle(g, dg, host_size, d, fixed, problem.chain_lo, top - 1, options.budget);
                    if (res.verdict != Verdict::Infeasible)
                        return from_search(res);
                }
                return infeasible;
            }

            auto f = sweep(problem, options);
            if (! f)
                return infeasible;
            LineCycleResult result;
            result.verdict = Verdict::Found;
            result.embedding = verified(dg, line_dh(host_size), *f, d, 1);
            if (last != -1)
                for (int v = 0 ; v < n ; ++v)
                    if (result.embedding.image[v] > result.embedding.image[last])
                        throw EmbeddingError("prefix-last sweep placed a vertex after the last vertex");
            return result;
        }
    }

    auto Anchor::domain_mask() const -> uint64_t
    {
        uint64_t m = 0;
        for (auto & [v, p] : map)
            m |= bit(v);
        return m;
    }

    auto WindowPartialEmbedding::domain_mask() const -> uint64_t
    {
        uint64_t m = 0;
        for (int v : slot)
            if (v != -1)
                m |= bit(v);
        return m;
    }

    auto WindowPartialEmbedding::sequence(const DistanceMatrix & dg) const -> pair<vector<int>, vector<int>>
    {
        vector<int> vertices, offsets;
        int previous = -1;
        for (int i = 0 ; i < int(slot.size()) ; ++i) {
            if (slot[i] == -1)
                continue;
            if (previous == -1)
                offsets.push_back(i);
            else
                offsets.push_back(i - previous - dg(vertices.back(), slot[i]));
            vertices.push_back(slot[i]);
            previous = i;
        }
        return { vertices, offsets };
    }

    auto SweepStats::operator+= (const SweepStats & o) -> SweepStats &
    {
        anchors += o.anchors;
        windows += o.windows;
        successions += o.successions;
        identity_checks += o.identity_checks;
        identity_violations += o.identity_violations;
        oracle_fallbacks += o.oracle_fallbacks;
        gate_rejections += o.gate_rejections;
        free_line_delegations += o.free_line_delegations;
        scan_nodes += o.scan_nodes;
        return *this;
    }

    auto SweepProblem::for_cycle(const Graph & g, const DistanceMatrix & dg, int host_size, int d, const Anchor & psi) -> SweepProblem
    {
        SweepProblem p;
        p.g = &g;
        p.dg = &dg;
        p.d = d;
        p.radius = window_radius(g, d);
        p.cyclic = true;
        p.host_size = host_size;
        p.chain_lo = p.radius + 1;
        p.chain_hi = host_size - p.radius - 1;
        p.adjacency = adjacency_masks(g);
        p.anchor_position.assign(g.n(), unmapped);
        for (auto & [v, pos] : psi.map) {
            if (pos < -p.radius || pos > p.radius)
                throw InputError("cycle anchor position outside the anchor window");
            p.anchor_position[v] = pos < 0 ? pos + host_size : pos;
            p.anchored |= bit(v);
            if (pos > 0)
                p.anchored_low |= bit(v);
            else if (pos < 0)
                p.anchored_high |= bit(v);
        }
        return p;
    }

    auto SweepProblem::for_line(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
            const Anchor & prefix, const Anchor & suffix) -> SweepProblem
    {
        SweepProblem p;
        p.g = &g;
        p.dg = &dg;
        p.d = d;
        p.radius = window_radius(g, d);
        p.cyclic = false;
        p.host_size = host_size;
        int a1 = prefix.zone, a2 = suffix.zone;
        for (auto & [v, pos] : prefix.map)
            if (prefix.zone == 0)
                a1 = std::max(a1, pos);
        for (auto & [v, pos] : suffix.map)
            if (suffix.zone == 0)
                a2 = std::max(a2, host_size - pos + 1);
        p.chain_lo = a1 + 1;
        p.chain_hi = host_size - a2;
        p.adjacency = adjacency_masks(g);
        p.anchor_position.assign(g.n(), unmapped);
        for (auto & [v, pos] : prefix.map) {
            p.anchor_position[v] = pos;
            p.anchored |= bit(v);
            p.anchored_low |= bit(v);
        }
        for (auto & [v, pos] : suffix.map) {
            p.anchor_position[v] = pos;
            p.anchored |= bit(v);
            p.anchored_high |= bit(v);
        }
        p.floating_source = p.anchored_low == 0;
        return p;
    }

    auto SweepProblem::host_distance(int p, int q) const -> int
    {
        int diff = std::abs(p - q);
        return cyclic ? std::min(diff, host_size - diff) : diff;
    }

    auto SweepProblem::full_mask() const -> uint64_t
    {
        return g->n() == 64 ? ~uint64_t(0) : bit(g->n()) - 1;
    }

    auto SweepProblem::left_set(const WindowPartialEmbedding & f) const -> uint64_t
    {
        uint64_t dom_left = 0;
        for (int i = 0 ; i < radius ; ++i)
            if (f.slot[i] != -1)
                dom_left |= bit(f.slot[i]);
        uint64_t rest = full_mask() & ~anchored & ~f.domain_mask();
        return closure(adjacency, neighbourhood(adjacency, dom_left | anchored_low), rest);
    }

    auto SweepProblem::right_set(const WindowPartialEmbedding & f) const -> uint64_t
    {
        uint64_t dom_right = 0;
        for (int i = radius + 1 ; i < int(f.slot.size()) ; ++i)
            if (f.slot[i] != -1)
                dom_right |= bit(f.slot[i]);
        uint64_t rest = full_mask() & ~anchored & ~f.domain_mask();
        return closure(adjacency, neighbourhood(adjacency, dom_right | anchored_high), rest);
    }

    auto SweepProblem::is_feasible(const WindowPartialEmbedding & f) const -> bool
    {
        int width = 2 * radius + 1;
        if (int(f.slot.size()) != width)
            return false;
        // (i) a nonempty injective domain disjoint from W, window inside the chain region
        if (f.mid - radius < chain_lo || f.mid + radius > chain_hi)
            return false;
        uint64_t domain = 0;
        for (int v : f.slot)
            if (v != -1) {
                if (v < 0 || v >= g->n() || (domain & bit(v)) || (anchored & bit(v)))
                    return false;
                domain |= bit(v);
            }
        if (domain == 0)
            return false;
        // (ii) within the window
        for (int i = 0 ; i < width ; ++i)
            for (int j = i + 1 ; j < width ; ++j)
                if (f.slot[i] != -1 && f.slot[j] != -1 && ! pair_ok(*dg, d, f.slot[i], f.slot[j], j - i))
                    return false;
        // (iii) against the anchor
        for (int i = 0 ; i < width ; ++i)
            if (f.slot[i] != -1)
                for (uint64_t bits = anchored ; bits ; bits &= bits - 1) {
                    int w = std::countr_zero(bits);
                    if (! pair_ok(*dg, d, f.slot[i], w, host_distance(f.mid - radius + i, anchor_position[w])))
                        return false;
                }
        // (iv) neighbours of the centre are placed
        if (f.slot[radius] != -1 && (adjacency[f.slot[radius]] & ~(domain | anchored)))
            return false;
        // (v) left and right sides disjoint
        return (left_set(f) & right_set(f)) == 0;
    }

    auto SweepProblem::succeeds(const WindowPartialEmbedding & f_a, const WindowPartialEmbedding & f_b) const -> bool
    {
        int width = 2 * radius + 1;
        if (f_b.mid != f_a.mid + 1 || int(f_a.slot.size()) != width || int(f_b.slot.size()) != width)
            return false;
        bool overlap = false;
        for (int i = 1 ; i < width ; ++i) {
            if (f_a.slot[i] != f_b.slot[i - 1])
                return false;
            overlap = overlap || f_a.slot[i] != -1;
        }
        if (! overlap)
            return false;
        int dropped = f_a.slot[0], added = f_b.slot[width - 1];
        if (dropped != -1 && ! (left_set(f_b) & bit(dropped)))
            return false;
        if (added != -1 && ! (right_set(f_a) & bit(added)))
            return false;
        return true;
    }

    auto SweepProblem::is_source(const WindowPartialEmbedding & f) const -> bool
    {
        if (! floating_source && f.mid != chain_lo + radius)
            return false;
        return left_set(f) == 0;
    }

    auto SweepProblem::is_sink(const WindowPartialEmbedding & f) const -> bool
    {
        if (right_set(f) != 0)
            return false;
        if (left_set(f) != (full_mask() & ~anchored & ~f.domain_mask()))
            return false;
        if (last_vertex != -1) {
            int top = -1;
            for (int i = 0 ; i < int(f.slot.size()) ; ++i)
                if (f.slot[i] != -1)
                    top = i;
            if (top == -1 || f.slot[top] != last_vertex)
                return false;
        }
        return true;
    }

    auto SweepProblem::anchor_valid() const -> bool
    {
        return anchor_pairs_valid(*this);
    }

    auto enumerate_anchors(const Graph & g, const DistanceMatrix & dg, int d, int centre_vertex) -> vector<Anchor>
    {
        int r = window_radius(g, d);
        vector<Anchor> result;
        enumerate_window_maps(dg, g.n(), d, -r, r,
                [&] (int pos, int v) {
                    if (centre_vertex == -1)
                        return true;
                    if (pos == 0)
                        return v == centre_vertex;
                    return v != centre_vertex;
                },
                [&] (const vector<pair<int, int>> & placed) {
                    if (placed.empty())
                        return;
                    Anchor a;
                    a.map = placed;
                    a.zone = r;
                    result.push_back(std::move(a));
                });
        return result;
    }

    auto is_feasible(const WindowPartialEmbedding & f, const Anchor & psi, const Graph & g, const DistanceMatrix & dg, int d, int host_size) -> bool
    {
        return SweepProblem::for_cycle(g, dg, host_size, d, psi).is_feasible(f);
    }

    auto succeeds(const WindowPartialEmbedding & f_a, const WindowPartialEmbedding & f_b, const Anchor & psi,
            const Graph & g, const DistanceMatrix & dg, int d, int host_size) -> bool
    {
        auto p = SweepProblem::for_cycle(g, dg, host_size, d, psi);
        return p.is_feasible(f_a) && p.is_feasible(f_b) && p.succeeds(f_a, f_b);
    }

    auto embed_into_line(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
            const LineCycleOptions & options) -> LineCycleResult
    {
        LineCycleResult infeasible;
        int n = g.n();
        if (n == 0 || host_size < n || ! gate(g, d, options))
            return infeasible;
        if (n == 1) {
            infeasible.verdict = Verdict::Found;
            infeasible.embedding = Embedding(1);
            infeasible.embedding.image[0] = 1;
            return infeasible;
        }
        // Normalise so the leftmost vertex sits at 1; the whole image then
        // fits in 1 + d*M*(n-1) positions.
        int r = window_radius(g, d);
        int length = std::min<std::int64_t>(host_size, 1 + std::int64_t(d) * weight_bound(g) * (n - 1));
        if (length - r < 2 * r + 1) {
            record_fallback(options);
            auto dh = line_distances(length);
            auto res = brute_force_embed(g, dg, path_graph(length), dh, d, false, nullptr, options.budget);
            if (res.found())
                for (auto & x : res.witness.image)
                    x += 1;
            return from_search(res);
        }
        for (int z = 0 ; z < n ; ++z) {
            vector<Anchor> prefixes;
            enumerate_window_maps(dg, n, d, 1, r,
                    [&] (int pos, int v) { return pos == 1 ? v == z : v != z; },
                    [&] (const vector<pair<int, int>> & placed) {
                        Anchor a;
                        a.map = placed;
                        a.zone = r;
                        prefixes.push_back(std::move(a));
                    });
            for (auto & a : prefixes) {
                if (options.stats)
                    ++options.stats->anchors;
                auto res = solve_line(g, dg, length, d, a, Anchor{ }, -1, options);
                if (res.verdict != Verdict::Infeasible)
                    return res;
            }
        }
        return infeasible;
    }

    namespace
    {
        auto solve_cycle(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
                const LineCycleOptions & options) -> LineCycleResult
        {
            LineCycleResult infeasible;
            int n = g.n();
            if (n > 64)
                throw InputError("the line and cycle solvers support guests with at most 64 vertices");
            if (host_size < 3)
                throw InputError("a cycle needs at least 3 vertices");
            if (n == 0 || n > host_size || ! gate(g, d, options))
                return infeasible;
            auto dh = cycle_distances(host_size);
            if (n == 1) {
                LineCycleResult r;
                r.verdict = Verdict::Found;
                r.embedding = Embedding(1);
                r.embedding.image[0] = 0;
                return r;
            }

            int m = weight_bound(g);
            if (std::int64_t(host_size) > 4 * std::int64_t(d) * m * n) {
                // With that much room some empty arc is longer than the whole
                // image, so embedding into the cycle is embedding into a line.
                if (options.stats)
                    ++options.stats->free_line_delegations;
                auto line = embed_into_line(g, dg, 2 * d * m * n, d, options);
                if (line.verdict == Verdict::Found)
                    for (auto & x : line.embedding.image)
                        x -= 1;
                if (line.verdict == Verdict::Found)
                    line.embedding = verified(dg, dh, line.embedding, d, 0);
                return line;
            }

            int r = window_radius(g, d);
            if (host_size < 4 * r + 2) {
                auto res = scan_short_cycle(dg, dh, n, d, options);
                if (res.verdict == Verdict::Found)
                    res.embedding = verified(dg, dh, res.embedding, d, 0);
                return res;
            }

            for (int z = 0 ; z < n ; ++z) {
                auto anchors = enumerate_anchors(g, dg, d, z);
                for (auto & psi : anchors) {
                    if (options.stats)
                        ++options.stats->anchors;
                    auto p = SweepProblem::for_cycle(g, dg, host_size, d, psi);
                    if (! p.anchor_valid())
                        continue;
                    if (p.anchored == p.full_mask()) {
                        LineCycleResult res;
                        res.verdict = Verdict::Found;
                        res.embedding = Embedding(n);
                        res.embedding.image = p.anchor_position;
                        res.embedding = verified(dg, dh, res.embedding, d, 0);
                        return res;
                    }
                    if (auto f = sweep(p, options)) {
                        LineCycleResult res;
                        res.verdict = Verdict::Found;
                        res.embedding = verified(dg, dh, *f, d, 0);
                        return res;
                    }
                }
            }
            return infeasible;
        }
    }

    auto embed_into_cycle(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
            const LineCycleOptions & options) -> LineCycleResult
    {
        return solve_cycle(g, dg, host_size, d, options);
    }

    auto embed_weighted_into_cycle(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
            const LineCycleOptions & options) -> LineCycleResult
    {
        return solve_cycle(g, dg, host_size, d, options);
    }

    auto embed_line_fixed_ends(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
            const Anchor & prefix, const Anchor & suffix, const LineCycleOptions & options) -> LineCycleResult
    {
        // Both extreme positions anchored: a connected image spans the whole line.
        bool first = false, last = false;
        for (auto & [v, p] : prefix.map)
            first = first || p == 1;
        for (auto & [v, p] : suffix.map)
            last = last || p == host_size;
        if (first && last && g.connected() && std::int64_t(host_size) > 2 * std::int64_t(d) * weight_bound(g) * g.n())
            return LineCycleResult{ };
        return solve_line(g, dg, host_size, d, prefix, suffix, -1, options);
    }

    auto embed_line_prefix_last(const Graph & g, const DistanceMatrix & dg, int host_size, int d,
            const Anchor & prefix, int last, const LineCycleOptions & options) -> LineCycleResult
    {
        // Every vertex lies within d*M*(n-1) of an anchored one, so the tail
        // of a long line is never used.
        int a1 = prefix.zone;
        for (auto & [v, p] : prefix.map)
            a1 = std::max(a1, p);
        std::int64_t reach = a1 + 2 * std::int64_t(d) * weight_bound(g) * g.n();
        int length = int(std::min<std::int64_t>(host_size, reach));
        Anchor zone = prefix;
        zone.zone = a1;
        return solve_line(g, dg, length, d, zone, Anchor{ }, last, options);
    }

    auto window_sequence_count(const Graph & g, const DistanceMatrix & dg, int d, int start, int x) -> uint64_t
    {
        uint64_t count = 0;
        enumerate_window_maps(dg, g.n(), d, 0, x,
                [&] (int pos, int v) {
                    if (pos == 0)
                        return v == start;
                    return v != start;
                },
                [&] (const vector<pair<int, int>> & placed) {
                    if (! placed.empty() && placed.back().second == x)
                        ++count;
                });
        return count;
    }

    auto empty_arcs(const Embedding & f, int host_size) -> vector<int>
    {
        vector<bool> used(host_size, false);
        for (int p : f.image)
            if (p != unmapped)
                used[p] = true;
        vector<int> arcs;
        int start = -1;
        for (int p = 0 ; p < host_size ; ++p)
            if (used[p]) {
                start = p;
                break;
            }
        if (start == -1)
            return { host_size };
        int run = 0;
        for (int i = 1 ; i <= host_size ; ++i) {
            int p = (start + i) % host_size;
            if (used[p]) {
                if (run > 0)
                    arcs.push_back(run);
                run = 0;
            }
            else
                ++run;
        }
        return arcs;
    }
}
