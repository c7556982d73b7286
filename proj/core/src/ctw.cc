/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <metemb/ctw.hh>

#include <algorithm>
#include <bit>
#include <chrono>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <ranges>
#include <set>
#include <string>
#include <unordered_map>

using std::function;
using std::map;
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

        auto sorted_neighbours(const Graph & h, int v) -> vector<int>
        {
            auto r = h.neighbours(v);
            std::sort(r.begin(), r.end());
            return r;
        }

        /// Components of the subgraph induced by a vertex set, each sorted,
        /// ordered by smallest vertex.
        auto induced_components(const Graph & h, const vector<int> & set) -> vector<vector<int>>
        {
            vector<char> inside(h.n(), 0), seen(h.n(), 0);
            for (int v : set)
                inside[v] = 1;
            vector<int> order = set;
            std::sort(order.begin(), order.end());
            vector<vector<int>> result;
            for (int s : order) {
                if (seen[s])
                    continue;
                vector<int> comp{ s }, stack{ s };
                seen[s] = 1;
                while (! stack.empty()) {
                    int v = stack.back();
                    stack.pop_back();
                    for (int w : h.neighbours(v))
                        if (inside[w] && ! seen[w]) {
                            seen[w] = 1;
                            comp.push_back(w);
                            stack.push_back(w);
                        }
                }
                std::sort(comp.begin(), comp.end());
                result.push_back(std::move(comp));
            }
            return result;
        }

        /// Shortest path from a to b; the parent of every vertex is its first
        /// discoverer when neighbours are scanned in increasing order.
        auto geodesic(const Graph & h, int a, int b) -> vector<int>
        {
            vector<int> parent(h.n(), -2);
            std::deque<int> queue{ a };
            parent[a] = -1;
            while (! queue.empty() && parent[b] == -2) {
                int v = queue.front();
                queue.pop_front();
                for (int w : sorted_neighbours(h, v))
                    if (parent[w] == -2) {
                        parent[w] = v;
                        queue.push_back(w);
                    }
            }
            vector<int> path;
            if (parent[b] == -2)
                return path;
            for (int v = b ; v != -1 ; v = parent[v])
                path.push_back(v);
            std::reverse(path.begin(), path.end());
            return path;
        }

        /// Order in which `targets` can be added to `start` keeping the set
        /// connected, by breadth-first search inside start + targets.
        auto connected_order(const Graph & h, const vector<int> & start, const vector<int> & targets) -> vector<int>
        {
            vector<char> allowed(h.n(), 0), seen(h.n(), 0);
            for (int v : targets)
                allowed[v] = 1;
            std::deque<int> queue;
            vector<int> order;
            for (int v : start) {
                seen[v] = 1;
                queue.push_back(v);
            }
            if (queue.empty() && ! targets.empty()) {
                int s = *std::min_element(targets.begin(), targets.end());
                seen[s] = 1;
                queue.push_back(s);
                order.push_back(s);
            }
            while (true) {
                while (! queue.empty()) {
                    int v = queue.front();
                    queue.pop_front();
                    for (int w : sorted_neighbours(h, v))
                        if (allowed[w] && ! seen[w]) {
                            seen[w] = 1;
                            order.push_back(w);
                            queue.push_back(w);
                        }
                }
                // a disconnected remainder continues from its smallest vertex
                int next = -1;
                for (int v : targets)
                    if (! seen[v] && (next == -1 || v < next))
                        next = v;
                if (next == -1)
                    break;
                seen[next] = 1;
                order.push_back(next);
                queue.push_back(next);
            }
            return order;
        }

        auto add_infinite(int a, int b) -> int
        {
            return (a >= type_infinity || b >= type_infinity) ? type_infinity : a + b;
        }

        /// Contracts every tree edge whose one bag lies inside the other.
        auto compress(const TreeDecomposition & td) -> TreeDecomposition
        {
            int count = int(td.bags.size());
            vector<vector<int>> bags = td.bags;
            vector<std::set<int>> adj(count);
            for (auto [a, b] : td.edges) {
                adj[a].insert(b);
                adj[b].insert(a);
            }
            vector<char> alive(count, 1);
            bool changed = true;
            while (changed) {
                changed = false;
                for (int a = 0 ; a < count && ! changed ; ++a) {
                    if (! alive[a])
                        continue;
                    for (int b : adj[a])
                        if (std::includes(bags[b].begin(), bags[b].end(), bags[a].begin(), bags[a].end())) {
                            for (int c : adj[a])
                                if (c != b) {
                                    adj[c].erase(a);
                                    adj[c].insert(b);
                                    adj[b].insert(c);
                                }
                            adj[b].erase(a);
                            adj[a].clear();
                            alive[a] = 0;
                            changed = true;
                            break;
                        }
                }
            }
            TreeDecomposition result;
            vector<int> id(count, -1);
            for (int a = 0 ; a < count ; ++a)
                if (alive[a]) {
                    id[a] = int(result.bags.size());
                    result.bags.push_back(bags[a]);
                }
            for (int a = 0 ; a < count ; ++a)
                for (int b : adj[a])
                    if (a < b)
                        result.edges.emplace_back(id[a], id[b]);
            return result;
        }

        /// Nice decomposition from a general one, keeping intermediate bags
        /// connected whenever consecutive bags are connected and overlap.
        auto connected_nice(const TreeDecomposition & td, const Graph & h) -> NiceTreeDecomposition
        {
            int count = int(td.bags.size());
            vector<vector<int>> adj(count);
            for (auto [a, b] : td.edges) {
                adj[a].push_back(b);
                adj[b].push_back(a);
            }

            NiceTreeDecomposition ntd;
            auto add = [&] (NiceKind kind, vector<int> bag, vector<int> children, int vertex) -> int {
                int id = int(ntd.nodes.size());
                NiceNode node;
                node.kind = kind;
                std::sort(bag.begin(), bag.end());
                node.bag = std::move(bag);
                node.children = children;
                node.vertex = vertex;
                ntd.nodes.push_back(std::move(node));
                for (int c : children)
                    ntd.nodes[c].parent = id;
                return id;
            };

            function<int (int, vector<int>, const vector<int> &)> chain = [&] (int node, vector<int> from, const vector<int> & to) -> int {
                vector<int> common, gained, lost;
                for (int v : from)
                    (std::count(to.begin(), to.end(), v) ? common : lost).push_back(v);
                for (int v : to)
                    if (! std::count(from.begin(), from.end(), v))
                        gained.push_back(v);
                if (common.empty() && ! from.empty() && ! to.empty())
                    return chain(chain(node, from, { }), { }, to);
                auto introduce = [&] () {
                    for (int v : connected_order(h, from, gained)) {
                        from.push_back(v);
                        node = add(NiceKind::Introduce, from, { node }, v);
                    }
                };
                auto forget = [&] (const vector<int> & keep) {
                    auto order = connected_order(h, keep, lost);
                    for (auto it = order.rbegin() ; it != order.rend() ; ++it) {
                        from.erase(std::find(from.begin(), from.end(), *it));
                        node = add(NiceKind::Forget, from, { node }, *it);
                    }
                };
                // shrink first when the overlap is itself connected, keeping the width
                if (! common.empty() && induced_components(h, common).size() == 1) {
                    forget(common);
                    introduce();
                }
                else {
                    introduce();
                    forget(to);
                }
                return node;
            };

            function<int (int, int)> build = [&] (int t, int parent) -> int {
                vector<int> tops;
                for (int c : adj[t])
                    if (c != parent)
                        tops.push_back(chain(build(c, t), td.bags[c], td.bags[t]));
                if (tops.empty())
                    return chain(add(NiceKind::Leaf, { }, { }, -1), { }, td.bags[t]);
                while (tops.size() > 1) {
                    vector<int> next;
                    for (std::size_t i = 0 ; i + 1 < tops.size() ; i += 2)
                        next.push_back(add(NiceKind::Join, td.bags[t], { tops[i], tops[i + 1] }, -1));
                    if (tops.size() % 2)
                        next.push_back(tops.back());
                    tops = std::move(next);
                }
                return tops.front();
            };

            int top = build(0, -1);
            ntd.root = chain(top, td.bags[0], { });
            return ntd;
        }
    }

    auto beta(int k, int gamma, int d) -> int
    {
        return k < 2 * gamma + 3 * d + 3 ? k : type_infinity;
    }

    auto bags_connected(const NiceTreeDecomposition & ntd, const Graph & h) -> bool
    {
        for (auto & node : ntd.nodes)
            if (induced_components(h, node.bag).size() > 1)
                return false;
        return true;
    }

    auto connect_bags(TreeDecomposition td, const Graph & h, const DistanceMatrix & dh) -> TreeDecomposition
    {
        td.validate(h);
        if (! h.connected())
            throw InputError("connected decompositions need a connected host");
        int count = int(td.bags.size());
        vector<vector<int>> adj(count);
        for (auto [a, b] : td.edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        // root the decomposition at bag 0 for the running-intersection repair
        vector<int> order, parent(count, -1);
        vector<char> seen(count, 0);
        vector<int> stack{ 0 };
        seen[0] = 1;
        while (! stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            order.push_back(t);
            for (int c : adj[t])
                if (! seen[c]) {
                    seen[c] = 1;
                    parent[c] = t;
                    stack.push_back(c);
                }
        }

        bool changed = true;
        while (changed) {
            changed = false;
            for (auto & bag : td.bags) {
                while (true) {
                    auto comps = induced_components(h, bag);
                    if (comps.size() <= 1)
                        break;
                    // join the component of the smallest vertex to its nearest other component
                    int best_a = -1, best_b = -1;
                    for (int a : comps[0])
                        for (std::size_t k = 1 ; k < comps.size() ; ++k)
                            for (int b : comps[k])
                                if (best_a == -1 || dh(a, b) < dh(best_a, best_b)
                                        || (dh(a, b) == dh(best_a, best_b) && pair{ a, b } < pair{ best_a, best_b })) {
                                    best_a = a;
                                    best_b = b;
                                }
                    for (int v : geodesic(h, best_a, best_b))
                        if (! std::count(bag.begin(), bag.end(), v))
                            bag.push_back(v);
                    std::sort(bag.begin(), bag.end());
                    changed = true;
                }
            }
            for (int v = 0 ; v < h.n() ; ++v) {
                vector<int> below(count, 0);
                for (auto it = order.rbegin() ; it != order.rend() ; ++it) {
                    int t = *it;
                    below[t] += std::binary_search(td.bags[t].begin(), td.bags[t].end(), v);
                    if (parent[t] != -1)
                        below[parent[t]] += below[t];
                }
                int total = below[0];
                for (int t = 0 ; t < count ; ++t) {
                    if (std::binary_search(td.bags[t].begin(), td.bags[t].end(), v))
                        continue;
                    int directions = (total - below[t] > 0) ? 1 : 0;
                    for (int c : adj[t])
                        if (c != parent[t] && below[c] > 0)
                            ++directions;
                    if (directions >= 2) {
                        td.bags[t].insert(std::upper_bound(td.bags[t].begin(), td.bags[t].end(), v), v);
                        changed = true;
                    }
                }
            }
        }
        td.validate(h);
        return td;
    }

    auto connectify(const NiceTreeDecomposition & ntd, const Graph & h, const DistanceMatrix & dh) -> ConnectedNiceDecomposition
    {
        ntd.validate(h);
        auto td = compress(connect_bags(compress(ntd.as_tree_decomposition()), h, dh));
        ConnectedNiceDecomposition result;
        result.ntd = connected_nice(td, h);
        result.ntd.validate(h);
        result.width = result.ntd.width();
        for (auto & node : result.ntd.nodes)
            for (int a : node.bag)
                for (int b : node.bag)
                    result.gamma = std::max(result.gamma, int(dh(a, b)));
        return result;
    }

    auto longest_geodesic_cycle(const Graph & h, const DistanceMatrix & dh, uint64_t budget) -> int
    {
        int best = 0;
        uint64_t steps = 0;
        bool exhausted = false;
        vector<int> path;
        vector<char> on_path(h.n(), 0);

        auto isometric = [&] () -> bool {
            int len = int(path.size());
            for (int i = 0 ; i < len ; ++i)
                for (int j = i + 1 ; j < len ; ++j)
                    if (dh(path[i], path[j]) != std::min(j - i, len - (j - i)))
                        return false;
            return true;
        };

        // every simple cycle, from its smallest vertex
        function<void (int)> extend = [&] (int start) {
            if (exhausted || (budget != 0 && ++steps > budget)) {
                exhausted = true;
                return;
            }
            int v = path.back();
            for (int w : h.neighbours(v)) {
                if (w == start && path.size() >= 3 && int(path.size()) > best && isometric())
                    best = int(path.size());
                if (w <= start || on_path[w])
                    continue;
                path.push_back(w);
                on_path[w] = 1;
                extend(start);
                on_path[w] = 0;
                path.pop_back();
            }
        };

        for (int s = 0 ; s < h.n() && ! exhausted ; ++s) {
            path = { s };
            on_path[s] = 1;
            extend(s);
            on_path[s] = 0;
        }
        return exhausted ? -1 : best;
    }

    struct CtwContext::Impl
    {
        const Graph & g;
        const DistanceMatrix & dg;
        const Graph & h;
        const DistanceMatrix & dh;
        const NiceTreeDecomposition & ntd;
        int d, gamma;
        int n, big_n;
        uint64_t full;
        vector<uint64_t> adjacency;
        vector<vector<int>> balls;
        vector<vector<int>> ball_index;
        vector<vector<char>> in_bag;
        vector<vector<int>> neighbours;
        vector<vector<vector<char>>> side_hosts;

        Impl(const Graph & g_, const DistanceMatrix & dg_, const Graph & h_, const DistanceMatrix & dh_,
                const ConnectedNiceDecomposition & cnd, int d_) :
            g(g_), dg(dg_), h(h_), dh(dh_), ntd(cnd.ntd), d(d_), gamma(cnd.gamma), n(g_.n()), big_n(h_.n())
        {
            if (n > 64)
                throw InputError("the connected-treewidth solver supports guests with at most 64 vertices");
            full = n == 64 ? ~uint64_t(0) : bit(n) - 1;
            adjacency.assign(n, 0);
            for (int v = 0 ; v < n ; ++v)
                for (int w : g.neighbours(v))
                    adjacency[v] |= bit(w);
            int nodes = int(ntd.nodes.size());
            balls.resize(nodes);
            ball_index.assign(nodes, vector<int>(big_n, -1));
            in_bag.assign(nodes, vector<char>(big_n, 0));
            neighbours.resize(nodes);
            for (int u = 0 ; u < nodes ; ++u) {
                balls[u] = ball_union(h, dh, ntd.nodes[u].bag, d + 1);
                for (std::size_t i = 0 ; i < balls[u].size() ; ++i)
                    ball_index[u][balls[u][i]] = int(i);
                for (int v : ntd.nodes[u].bag)
                    in_bag[u][v] = 1;
                if (ntd.nodes[u].parent != -1)
                    neighbours[u].push_back(ntd.nodes[u].parent);
                for (int c : ntd.nodes[u].children)
                    neighbours[u].push_back(c);
            }
            vector<vector<int>> below(nodes, vector<int>(big_n, 0));
            for (int u : ntd.post_order()) {
                for (int v = 0 ; v < big_n ; ++v)
                    below[u][v] = in_bag[u][v];
                for (int c : ntd.nodes[u].children)
                    for (int v = 0 ; v < big_n ; ++v)
                        below[u][v] += below[c][v];
            }
            const auto & total = below[ntd.root];
            side_hosts.resize(nodes);
            for (int u = 0 ; u < nodes ; ++u)
                for (int w : neighbours[u]) {
                    vector<char> side(big_n, 0);
                    for (int v = 0 ; v < big_n ; ++v)
                        side[v] = w == ntd.nodes[u].parent ? (total[v] - below[u][v] > 0) : (below[w][v] > 0);
                    side_hosts[u].push_back(std::move(side));
                }
        }

        auto neighbour_index(int u, int w) const -> int
        {
            auto & ns = neighbours[u];
            auto it = std::find(ns.begin(), ns.end(), w);
            return it == ns.end() ? -1 : int(it - ns.begin());
        }

        auto closure(uint64_t seeds, uint64_t allowed) const -> uint64_t
        {
            uint64_t reached = seeds & allowed, frontier = reached;
            while (frontier) {
                uint64_t next = 0;
                for (uint64_t bits = frontier ; bits ; bits &= bits - 1)
                    next |= adjacency[std::countr_zero(bits)];
                next &= allowed & ~reached;
                reached |= next;
                frontier = next;
            }
            return reached;
        }

        auto neighbourhood(uint64_t set) const -> uint64_t
        {
            uint64_t result = 0;
            for (uint64_t bits = set ; bits ; bits &= bits - 1)
                result |= adjacency[std::countr_zero(bits)];
            return result;
        }

        struct Derived
        {
            bool well_formed = false;
            uint64_t domain = 0, centre = 0;
            vector<uint64_t> dom;                   // per neighbour index
            vector<uint64_t> m;                     // per neighbour index
            vector<int> host_of;
        };

        auto derive(const CtwPartialEmbedding & f) const -> Derived
        {
            Derived r;
            int u = f.node;
            if (u < 0 || u >= int(ntd.nodes.size()) || f.preimage.size() != balls[u].size())
                return r;
            r.host_of.assign(n, -1);
            for (std::size_t i = 0 ; i < f.preimage.size() ; ++i) {
                int x = f.preimage[i];
                if (x == -1)
                    continue;
                if (x < 0 || x >= n || (r.domain & bit(x)))
                    return r;
                r.domain |= bit(x);
                r.host_of[x] = balls[u][i];
                if (in_bag[u][balls[u][i]])
                    r.centre |= bit(x);
            }
            int k = int(neighbours[u].size());
            r.dom.assign(k, 0);
            r.m.assign(k, 0);
            for (int j = 0 ; j < k ; ++j)
                for (std::size_t i = 0 ; i < f.preimage.size() ; ++i)
                    if (f.preimage[i] != -1 && side_hosts[u][j][balls[u][i]])
                        r.dom[j] |= bit(f.preimage[i]);
            if (r.domain == 0) {
                int j = neighbour_index(u, f.side);
                if (j == -1)
                    return r;
                r.m[j] = full;
            }
            else {
                if (f.side != -1)
                    return r;
                uint64_t rest = full & ~r.domain;
                for (int j = 0 ; j < k ; ++j)
                    r.m[j] = closure(neighbourhood(r.dom[j] & ~r.centre), rest);
            }
            r.well_formed = true;
            return r;
        }

        auto feasible(const CtwPartialEmbedding & f, const Derived & r) const -> bool
        {
            if (! r.well_formed)
                return false;
            int u = f.node;
            for (std::size_t i = 0 ; i < f.preimage.size() ; ++i)
                for (std::size_t j = i + 1 ; j < f.preimage.size() ; ++j) {
                    if (f.preimage[i] == -1 || f.preimage[j] == -1)
                        continue;
                    std::int64_t base = dg(f.preimage[i], f.preimage[j]);
                    std::int64_t host = dh(balls[u][i], balls[u][j]);
                    if (host < base || host > d * base)
                        return false;
                }
            uint64_t seen = 0;
            for (uint64_t m : r.m) {
                if (seen & m)
                    return false;
                seen |= m;
            }
            return (neighbourhood(r.centre) & ~r.domain) == 0;
        }

        auto succeeds(const CtwPartialEmbedding & f_u, const Derived & ru, const CtwPartialEmbedding & f_v, const Derived & rv) const -> bool
        {
            if (! ru.well_formed || ! rv.well_formed)
                return false;
            int u = f_u.node, v = f_v.node;
            if (ntd.nodes[v].parent != u)
                return false;
            for (int x = 0 ; x < n ; ++x)
                if (ru.host_of[x] != -1 && rv.host_of[x] != -1 && ru.host_of[x] != rv.host_of[x])
                    return false;
            for (std::size_t i = 0 ; i < balls[u].size() ; ++i) {
                int j = ball_index[v][balls[u][i]];
                if (j != -1 && f_v.preimage[j] != f_u.preimage[i])
                    return false;
            }
            int v_at_u = neighbour_index(u, v), u_at_v = neighbour_index(v, u);
            uint64_t expect_u = rv.domain & ~ru.domain;
            for (int j = 0 ; j < int(neighbours[v].size()) ; ++j)
                if (j != u_at_v)
                    expect_u |= rv.m[j];
            if (ru.m[v_at_u] != expect_u)
                return false;
            uint64_t expect_v = ru.domain & ~rv.domain;
            for (int j = 0 ; j < int(neighbours[u].size()) ; ++j)
                if (j != v_at_u)
                    expect_v |= ru.m[j];
            return rv.m[u_at_v] == expect_v;
        }

        auto members(uint64_t set) const -> vector<int>
        {
            vector<int> r;
            for (uint64_t bits = set ; bits ; bits &= bits - 1)
                r.push_back(std::countr_zero(bits));
            return r;
        }

        /// The type of guest x (placed on host) towards the given domain.
        auto profile(int u, int x, int host, const vector<int> & dom) const -> CtwType
        {
            CtwType t;
            for (int a : ntd.nodes[u].bag) {
                vector<int> row;
                for (int y : dom)
                    row.push_back(beta(dh(host, a) - dg(x, y), gamma, d));
                t.values.push_back(std::move(row));
            }
            return t;
        }

        auto beta_of(int k) const -> int
        {
            return k >= type_infinity ? type_infinity : beta(k, gamma, d);
        }

        /// min over b in `via` of D_H(a, b) + t^b(column), infinity when `via` is empty.
        auto through(int a, const vector<int> & via, const CtwType & t, int column) const -> int
        {
            int best = type_infinity;
            for (std::size_t i = 0 ; i < via.size() ; ++i)
                best = std::min(best, add_infinite(dh(a, via[i]), t.values[i][column]));
            return best;
        }

        /// One direction of the type transfer. `from` is the node whose list
        /// holds t1 (over domain `from_dom`), `to` the node whose list must
        /// hold the image (over `to_dom`). When `keep_outside` is set, the
        /// shared-bag entries outside the source domain are left free.
        auto transfer_exists(int from, const vector<int> & from_dom, const CtwType & t1, int to, const vector<int> & to_dom,
                const CtwTypeList & targets, bool keep_outside) const -> bool
        {
            const auto & x_from = ntd.nodes[from].bag;
            const auto & x_to = ntd.nodes[to].bag;
            // expected[i][k], with -infinity-like marker for free entries
            constexpr int free_entry = std::numeric_limits<int>::min();
            vector<vector<int>> expected(x_to.size(), vector<int>(to_dom.size(), free_entry));
            for (std::size_t i = 0 ; i < x_to.size() ; ++i) {
                int a = x_to[i];
                auto shared = std::find(x_from.begin(), x_from.end(), a);
                int ia = shared == x_from.end() ? -1 : int(shared - x_from.begin());
                for (std::size_t k = 0 ; k < to_dom.size() ; ++k) {
                    int x = to_dom[k];
                    auto inside = std::find(from_dom.begin(), from_dom.end(), x);
                    if (inside != from_dom.end()) {
                        int px = int(inside - from_dom.begin());
                        expected[i][k] = ia != -1 ? t1.values[ia][px] : beta_of(through(a, x_from, t1, px));
                    }
                    else {
                        if (from_dom.empty() || (ia != -1 && keep_outside))
                            continue;
                        int best = std::numeric_limits<int>::min();
                        for (std::size_t py = 0 ; py < from_dom.size() ; ++py) {
                            int base = ia != -1 ? t1.values[ia][py] : through(a, x_from, t1, int(py));
                            int value = base >= type_infinity ? type_infinity : base - dg(x, from_dom[py]);
                            best = std::max(best, value);
                        }
                        expected[i][k] = beta_of(best);
                    }
                }
            }
            for (auto & t2 : targets) {
                bool ok = true;
                for (std::size_t i = 0 ; i < x_to.size() && ok ; ++i)
                    for (std::size_t k = 0 ; k < to_dom.size() && ok ; ++k)
                        if (expected[i][k] != free_entry && t2.values[i][k] != expected[i][k])
                            ok = false;
                if (ok)
                    return true;
            }
            return false;
        }
    };

    CtwContext::CtwContext(const Graph & g, const DistanceMatrix & dg, const Graph & h, const DistanceMatrix & dh,
            const ConnectedNiceDecomposition & cnd, int d) :
        _imp(std::make_shared<Impl>(g, dg, h, dh, cnd, d))
    {
    }

    auto CtwContext::gamma() const -> int
    {
        return _imp->gamma;
    }

    auto CtwContext::ball(int node) const -> const vector<int> &
    {
        return _imp->balls.at(node);
    }

    auto CtwContext::bag(int node) const -> const vector<int> &
    {
        return _imp->ntd.nodes.at(node).bag;
    }

    auto CtwContext::neighbours(int node) const -> const vector<int> &
    {
        return _imp->neighbours.at(node);
    }

    auto CtwContext::domain_towards(const CtwPartialEmbedding & f, int v) const -> vector<int>
    {
        auto r = _imp->derive(f);
        int j = _imp->neighbour_index(f.node, v);
        if (! r.well_formed || j == -1)
            return { };
        return _imp->members(r.dom[j]);
    }

    auto CtwContext::component_set(const CtwPartialEmbedding & f, int v) const -> uint64_t
    {
        auto r = _imp->derive(f);
        int j = _imp->neighbour_index(f.node, v);
        return r.well_formed && j != -1 ? r.m[j] : 0;
    }

    auto CtwContext::feasible(const CtwPartialEmbedding & f) const -> bool
    {
        return _imp->feasible(f, _imp->derive(f));
    }

    auto CtwContext::succeeds(const CtwPartialEmbedding & f_u, const CtwPartialEmbedding & f_v) const -> bool
    {
        return _imp->succeeds(f_u, _imp->derive(f_u), f_v, _imp->derive(f_v));
    }

    auto CtwContext::compatible(const CtwPartialEmbedding & f, int v, const CtwTypeList & list) const -> bool
    {
        auto r = _imp->derive(f);
        int j = _imp->neighbour_index(f.node, v);
        if (! r.well_formed || j == -1)
            return false;
        auto dom = _imp->members(r.dom[j]);
        for (int x : dom)
            if (! list.count(_imp->profile(f.node, x, r.host_of[x], dom)))
                return false;
        return true;
    }

    auto CtwContext::agree(const CtwPartialEmbedding & f, int v, const CtwTypeList & first, int w, const CtwTypeList & second) const -> bool
    {
        auto dom_v = domain_towards(f, v), dom_w = domain_towards(f, w);
        std::size_t bag_size = _imp->ntd.nodes[f.node].bag.size();
        for (auto & t1 : first)
            for (auto & t2 : second) {
                bool witnessed = false;
                for (std::size_t a = 0 ; a < dom_v.size() && ! witnessed ; ++a)
                    for (std::size_t b = 0 ; b < dom_w.size() && ! witnessed ; ++b) {
                        bool all = true;
                        for (std::size_t i = 0 ; i < bag_size && all ; ++i)
                            if (add_infinite(t1.values[i][a], t2.values[i][b]) < _imp->dg(dom_v[a], dom_w[b]))
                                all = false;
                        witnessed = all;
                    }
                if (! witnessed)
                    return false;
            }
        return true;
    }

    auto CtwContext::state_feasible(const CtwState & s) const -> bool
    {
        if (! feasible(s.f))
            return false;
        auto & ns = neighbours(s.f.node);
        if (s.lists.size() != ns.size())
            return false;
        for (std::size_t j = 0 ; j < ns.size() ; ++j)
            if (! compatible(s.f, ns[j], s.lists[j]))
                return false;
        for (std::size_t j = 0 ; j < ns.size() ; ++j)
            for (std::size_t k = j + 1 ; k < ns.size() ; ++k)
                if (! agree(s.f, ns[j], s.lists[j], ns[k], s.lists[k]))
                    return false;
        return true;
    }

    auto CtwContext::state_succeeds(const CtwState & s_u, const CtwState & s_v) const -> bool
    {
        if (! succeeds(s_u.f, s_v.f))
            return false;
        int u = s_u.f.node, v = s_v.f.node;
        auto & nu = neighbours(u);
        auto & nv = neighbours(v);
        int v_at_u = _imp->neighbour_index(u, v), u_at_v = _imp->neighbour_index(v, u);
        // child-side types move up into the list towards v
        auto dom_u_v = domain_towards(s_u.f, v);
        for (std::size_t j = 0 ; j < nv.size() ; ++j) {
            if (int(j) == u_at_v)
                continue;
            auto dom_v_w = domain_towards(s_v.f, nv[j]);
            for (auto & t1 : s_v.lists[j])
                if (! _imp->transfer_exists(v, dom_v_w, t1, u, dom_u_v, s_u.lists[v_at_u], false))
                    return false;
        }
        // parent-side types move down into the list towards u
        auto dom_v_u = domain_towards(s_v.f, u);
        for (std::size_t j = 0 ; j < nu.size() ; ++j) {
            if (int(j) == v_at_u)
                continue;
            auto dom_u_w = domain_towards(s_u.f, nu[j]);
            for (auto & t1 : s_u.lists[j])
                if (! _imp->transfer_exists(u, dom_u_w, t1, v, dom_v_u, s_v.lists[u_at_v], true))
                    return false;
        }
        return true;
    }

    auto CtwContext::restrict(const Embedding & f, int node) const -> CtwPartialEmbedding
    {
        CtwPartialEmbedding p{ node, { }, -1 };
        vector<int> guest_at(_imp->big_n, -1);
        for (int x = 0 ; x < int(f.image.size()) ; ++x)
            if (f.image[x] != unmapped)
                guest_at[f.image[x]] = x;
        bool any = false;
        for (int host : _imp->balls.at(node)) {
            p.preimage.push_back(guest_at[host]);
            any = any || guest_at[host] != -1;
        }
        if (! any && ! f.image.empty())
            for (std::size_t j = 0 ; j < _imp->neighbours[node].size() ; ++j)
                if (_imp->side_hosts[node][j][f.image[0]]) {
                    p.side = _imp->neighbours[node][j];
                    break;
                }
        return p;
    }

    auto CtwContext::state_from_embedding(const Embedding & f, int node) const -> CtwState
    {
        CtwState s;
        s.f = restrict(f, node);
        auto r = _imp->derive(s.f);
        for (std::size_t j = 0 ; j < _imp->neighbours[node].size() ; ++j) {
            auto dom = _imp->members(r.dom[j]);
            CtwTypeList list;
            for (int x : _imp->members(r.dom[j] | r.m[j]))
                list.insert(_imp->profile(node, x, f.image[x], dom));
            s.lists.push_back(std::move(list));
        }
        return s;
    }

    auto CtwContext::dichotomy_violations(const Embedding & f) const -> uint64_t
    {
        const auto & nodes = _imp->ntd.nodes;
        int count = int(nodes.size());
        vector<CtwState> states;
        vector<Impl::Derived> derived;
        for (int u = 0 ; u < count ; ++u) {
            states.push_back(state_from_embedding(f, u));
            derived.push_back(_imp->derive(states.back().f));
        }
        vector<int> depth(count, 0);
        auto order = _imp->ntd.post_order();
        for (int u : order | std::views::reverse)
            if (nodes[u].parent != -1)
                depth[u] = depth[nodes[u].parent] + 1;
        auto path = [&] (int a, int b) -> vector<int> {
            vector<int> front, back;
            while (a != b) {
                if (depth[a] >= depth[b]) {
                    front.push_back(a);
                    a = nodes[a].parent;
                }
                else {
                    back.push_back(b);
                    b = nodes[b].parent;
                }
            }
            front.push_back(a);
            front.insert(front.end(), back.rbegin(), back.rend());
            return front;
        };
        int threshold = 2 * _imp->gamma + 3 * _imp->d + 3;
        uint64_t violations = 0;
        for (int u = 0 ; u < count ; ++u)
            for (int v = 0 ; v < count ; ++v) {
                if (u == v)
                    continue;
                auto p = path(u, v);
                int j = _imp->neighbour_index(u, p[1]);
                auto dom = _imp->members(derived[u].dom[j]);
                // as used by the non-contraction argument: guests first seen at the far end
                uint64_t fresh = derived[v].domain & ~derived[p[p.size() - 2]].domain;
                for (int x : _imp->members(fresh)) {
                    bool prop1 = false;
                    for (int w : p) {
                        for (int y : _imp->members(derived[w].domain)) {
                            bool all = true;
                            for (int a : nodes[w].bag)
                                if (_imp->dh(f.image[x], a) - _imp->dg(x, y) < threshold)
                                    all = false;
                            if (all) {
                                prop1 = true;
                                break;
                            }
                        }
                        if (prop1)
                            break;
                    }
                    bool prop2 = states[u].lists[j].count(_imp->profile(u, x, f.image[x], dom)) > 0;
                    if (! prop1 && ! prop2)
                        ++violations;
                }
            }
        return violations;
    }

    namespace
    {
        /// A dynamic-programming state: the guest on each bag vertex (or -1),
        /// and every guest placed strictly below with its capped host
        /// distances to the bag vertices.
        struct DpState
        {
            vector<int> bag_guest;
            vector<pair<int, vector<int>>> below;    // sorted by guest
            vector<int> host_of;                     // one witness

            auto key() const -> string
            {
                string k;
                for (int x : bag_guest)
                    k.push_back(char(x + 1));
                k.push_back('|');
                for (auto & [x, dist] : below) {
                    k.push_back(char(x + 1));
                    for (int v : dist)
                        k.push_back(char(v + 1));
                }
                return k;
            }

            auto used() const -> uint64_t
            {
                uint64_t r = 0;
                for (int x : bag_guest)
                    if (x != -1)
                        r |= bit(x);
                for (auto & [x, dist] : below)
                    r |= bit(x);
                return r;
            }
        };
    }

    auto embed_ctw(const Graph & g, const DistanceMatrix & dg, const Graph & h, const DistanceMatrix & dh,
            const ConnectedNiceDecomposition & cnd, int d, const CtwOptions & options) -> CtwResult
    {
        CtwResult result;
        int n = g.n();
        if (n > 64)
            throw InputError("the connected-treewidth solver supports guests with at most 64 vertices");
        if (n == 0 || ! g.connected())
            throw InputError("the guest graph must be connected and nonempty");
        if (d < 1)
            throw InputError("distortion must be at least 1");
        const auto & ntd = cnd.ntd;
        if (n > h.n())
            return result;
        if (! degree_gate(g.max_degree(), h.max_degree(), d)) {
            result.stats.gate_rejected = true;
            return result;
        }

        int cap = std::max(int(dg.diameter()), d) + 1;
        auto capped = [&] (std::int64_t v) -> int { return int(std::min<std::int64_t>(v, cap)); };
        auto fits = [&] (int x, int y, int distance) -> bool {
            if (distance < dg(x, y))
                return false;
            return ! g.has_edge(x, y) || distance <= d;
        };
        vector<uint64_t> adjacency(n, 0);
        for (int v = 0 ; v < n ; ++v)
            for (int w : g.neighbours(v))
                adjacency[v] |= bit(w);

        auto start = steady_clock::now();
        bool out_of_budget = false;
        auto charge = [&] () {
            ++result.stats.states;
            if (options.budget.max_nodes != 0 && result.stats.states > options.budget.max_nodes)
                out_of_budget = true;
            if (options.budget.max_time.count() != 0 && (result.stats.states & 255) == 0
                    && steady_clock::now() - start > options.budget.max_time)
                out_of_budget = true;
        };

        vector<vector<DpState>> table(ntd.nodes.size());
        for (int u : ntd.post_order()) {
            const auto & node = ntd.nodes[u];
            const auto & bag = node.bag;
            std::unordered_map<string, DpState> out;
            auto emit = [&] (DpState s) {
                // a guest below with an unplaced neighbour needs a host within d outside
                uint64_t used = s.used();
                for (auto & [x, dist] : s.below)
                    if (adjacency[x] & ~used) {
                        int nearest = cap;
                        for (int v : dist)
                            nearest = std::min(nearest, v);
                        if (nearest + 1 > d)
                            return;
                    }
                auto k = s.key();
                if (! out.count(k)) {
                    charge();
                    out.emplace(std::move(k), std::move(s));
                }
            };

            switch (node.kind) {
                case NiceKind::Leaf: {
                    DpState s;
                    s.host_of.assign(n, -1);
                    emit(std::move(s));
                    break;
                }
                case NiceKind::Introduce: {
                    int c = node.children[0];
                    const auto & child_bag = ntd.nodes[c].bag;
                    int pos = int(std::find(bag.begin(), bag.end(), node.vertex) - bag.begin());
                    int hv = node.vertex;
                    for (auto & s : table[c]) {
                        if (out_of_budget)
                            break;
                        vector<int> through(s.below.size(), cap);
                        for (std::size_t k = 0 ; k < s.below.size() ; ++k)
                            for (std::size_t i = 0 ; i < child_bag.size() ; ++i)
                                through[k] = std::min(through[k], capped(std::int64_t(s.below[k].second[i]) + dh(child_bag[i], hv)));
                        DpState base = s;
                        base.bag_guest.insert(base.bag_guest.begin() + pos, -1);
                        for (std::size_t k = 0 ; k < base.below.size() ; ++k)
                            base.below[k].second.insert(base.below[k].second.begin() + pos, through[k]);
                        uint64_t used = s.used();
                        emit(base);
                        for (int x = 0 ; x < n ; ++x) {
                            if (used & bit(x))
                                continue;
                            bool ok = true;
                            for (std::size_t i = 0 ; i < child_bag.size() && ok ; ++i)
                                if (s.bag_guest[i] != -1)
                                    ok = fits(x, s.bag_guest[i], capped(dh(child_bag[i], hv)));
                            for (std::size_t k = 0 ; k < s.below.size() && ok ; ++k)
                                ok = fits(x, s.below[k].first, through[k]);
                            if (! ok)
                                continue;
                            DpState next = base;
                            next.bag_guest[pos] = x;
                            next.host_of[x] = hv;
                            emit(std::move(next));
                        }
                    }
                    break;
                }
                case NiceKind::Forget: {
                    int c = node.children[0];
                    const auto & child_bag = ntd.nodes[c].bag;
                    int pos = int(std::find(child_bag.begin(), child_bag.end(), node.vertex) - child_bag.begin());
                    for (auto & s : table[c]) {
                        if (out_of_budget)
                            break;
                        DpState next = s;
                        int x = next.bag_guest[pos];
                        next.bag_guest.erase(next.bag_guest.begin() + pos);
                        for (auto & [y, dist] : next.below)
                            dist.erase(dist.begin() + pos);
                        if (x != -1) {
                            vector<int> dist;
                            for (int a : bag)
                                dist.push_back(capped(dh(node.vertex, a)));
                            auto at = std::lower_bound(next.below.begin(), next.below.end(), pair{ x, vector<int>{ } });
                            next.below.insert(at, { x, std::move(dist) });
                        }
                        emit(std::move(next));
                    }
                    break;
                }
                case NiceKind::Join: {
                    int c1 = node.children[0], c2 = node.children[1];
                    map<vector<int>, vector<const DpState *>> by_bag;
                    for (auto & s : table[c2])
                        by_bag[s.bag_guest].push_back(&s);
                    for (auto & s1 : table[c1]) {
                        if (out_of_budget)
                            break;
                        auto it = by_bag.find(s1.bag_guest);
                        if (it == by_bag.end())
                            continue;
                        uint64_t below1 = 0;
                        for (auto & [x, dist] : s1.below)
                            below1 |= bit(x);
                        for (auto * s2 : it->second) {
                            bool ok = true;
                            for (auto & [y, dist] : s2->below)
                                if (below1 & bit(y))
                                    ok = false;
                            for (std::size_t a = 0 ; a < s1.below.size() && ok ; ++a)
                                for (std::size_t b = 0 ; b < s2->below.size() && ok ; ++b) {
                                    int best = cap;
                                    for (std::size_t i = 0 ; i < bag.size() ; ++i)
                                        best = std::min(best, capped(std::int64_t(s1.below[a].second[i]) + s2->below[b].second[i]));
                                    ok = fits(s1.below[a].first, s2->below[b].first, best);
                                }
                            if (! ok)
                                continue;
                            DpState next = s1;
                            next.below.insert(next.below.end(), s2->below.begin(), s2->below.end());
                            std::sort(next.below.begin(), next.below.end());
                            for (int x = 0 ; x < n ; ++x)
                                if (s2->host_of[x] != -1)
                                    next.host_of[x] = s2->host_of[x];
                            emit(std::move(next));
                        }
                    }
                    break;
                }
            }
            for (int c : node.children)
                vector<DpState>().swap(table[c]);
            if (out_of_budget) {
                result.verdict = Verdict::BudgetExceeded;
                return result;
            }
            table[u].reserve(out.size());
            for (auto & [k, s] : out)
                table[u].push_back(std::move(s));
            result.stats.max_states_per_node = std::max<uint64_t>(result.stats.max_states_per_node, table[u].size());
            if (table[u].empty())
                return result;
        }

        for (auto & s : table[ntd.root])
            if (int(s.below.size()) == n) {
                result.embedding.image = s.host_of;
                if (auto bad = verify_nc_distortion(g, h, dg, dh, result.embedding, d))
                    throw EmbeddingError("connected-treewidth solver produced an invalid embedding: " + bad->describe());
                result.verdict = Verdict::Found;
                return result;
            }
        return result;
    }
}
