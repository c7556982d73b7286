/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <metemb/treewidth.hh>

#include <algorithm>
#include <bit>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

using std::function;
using std::istream;
using std::map;
using std::pair;
using std::set;
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

        auto tree_connected(int nodes, const vector<pair<int, int>> & edges, const vector<bool> & keep) -> bool
        {
            vector<vector<int>> adj(nodes);
            for (auto [a, b] : edges)
                if (keep[a] && keep[b]) {
                    adj[a].push_back(b);
                    adj[b].push_back(a);
                }
            int start = -1, count = 0;
            for (int v = 0 ; v < nodes ; ++v)
                if (keep[v]) {
                    ++count;
                    if (start == -1)
                        start = v;
                }
            if (count == 0)
                return true;
            vector<bool> seen(nodes, false);
            vector<int> stack{ start };
            seen[start] = true;
            int reached = 0;
            while (! stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                ++reached;
                for (int w : adj[v])
                    if (! seen[w]) {
                        seen[w] = true;
                        stack.push_back(w);
                    }
            }
            return reached == count;
        }
    }

    auto TreeDecomposition::width() const -> int
    {
        int w = -1;
        for (auto & b : bags)
            w = std::max(w, int(b.size()) - 1);
        return w;
    }

    auto TreeDecomposition::validate(const Graph & h) const -> void
    {
        int nodes = int(bags.size());
        if (nodes == 0)
            throw InputError("tree decomposition: no bags");
        for (auto & b : bags)
            for (int v : b)
                if (v < 0 || v >= h.n())
                    throw InputError("tree decomposition: bag vertex " + std::to_string(v) + " out of range");
        if (int(edges.size()) != nodes - 1)
            throw InputError("tree decomposition: not a tree (" + std::to_string(edges.size()) + " edges for " + std::to_string(nodes) + " bags)");
        for (auto [a, b] : edges)
            if (a < 0 || a >= nodes || b < 0 || b >= nodes || a == b)
                throw InputError("tree decomposition: bad tree edge");
        if (! tree_connected(nodes, edges, vector<bool>(nodes, true)))
            throw InputError("tree decomposition: not a tree (disconnected)");

        vector<vector<bool>> contains(nodes, vector<bool>(h.n(), false));
        for (int i = 0 ; i < nodes ; ++i)
            for (int v : bags[i])
                contains[i][v] = true;
        for (int v = 0 ; v < h.n() ; ++v) {
            vector<bool> keep(nodes);
            bool any = false;
            for (int i = 0 ; i < nodes ; ++i) {
                keep[i] = contains[i][v];
                any = any || keep[i];
            }
            if (! any)
                throw InputError("tree decomposition: vertex coverage violated (vertex " + std::to_string(v) + " in no bag)");
            if (! tree_connected(nodes, edges, keep))
                throw InputError("tree decomposition: running intersection violated (vertex " + std::to_string(v) + ")");
        }
        for (auto [u, v] : h.edges()) {
            bool covered = false;
            for (int i = 0 ; i < nodes && ! covered ; ++i)
                covered = contains[i][u] && contains[i][v];
            if (! covered)
                throw InputError("tree decomposition: edge coverage violated (edge " + std::to_string(u) + "-" + std::to_string(v) + ")");
        }
    }

    auto to_string(NiceKind k) -> string
    {
        switch (k) {
            case NiceKind::Leaf: return "leaf";
            case NiceKind::Introduce: return "introduce";
            case NiceKind::Forget: return "forget";
            case NiceKind::Join: return "join";
        }
        return "unknown";
    }

    auto NiceTreeDecomposition::width() const -> int
    {
        int w = -1;
        for (auto & n : nodes)
            w = std::max(w, int(n.bag.size()) - 1);
        return w;
    }

    auto NiceTreeDecomposition::as_tree_decomposition() const -> TreeDecomposition
    {
        TreeDecomposition td;
        for (auto & n : nodes)
            td.bags.push_back(n.bag);
        for (int i = 0 ; i < int(nodes.size()) ; ++i)
            if (nodes[i].parent != -1)
                td.edges.emplace_back(nodes[i].parent, i);
        return td;
    }

    auto NiceTreeDecomposition::validate(const Graph & h) const -> void
    {
        if (root < 0 || root >= int(nodes.size()))
            throw InputError("nice decomposition: no root");
        if (! nodes[root].bag.empty() || nodes[root].parent != -1)
            throw InputError("nice decomposition: root bag must be empty");
        for (int i = 0 ; i < int(nodes.size()) ; ++i) {
            auto & n = nodes[i];
            for (int c : n.children)
                if (nodes[c].parent != i)
                    throw InputError("nice decomposition: parent pointers inconsistent at node " + std::to_string(i));
            auto child_bag = [&] (int k) -> const vector<int> & { return nodes[n.children[k]].bag; };
            auto with = [] (vector<int> b, int v) { b.push_back(v); std::sort(b.begin(), b.end()); return b; };
            switch (n.kind) {
                case NiceKind::Leaf:
                    if (! n.children.empty() || ! n.bag.empty())
                        throw InputError("nice decomposition: leaf " + std::to_string(i) + " must have an empty bag and no children");
                    break;
                case NiceKind::Introduce:
                    if (n.children.size() != 1 || std::binary_search(child_bag(0).begin(), child_bag(0).end(), n.vertex)
                            || with(child_bag(0), n.vertex) != n.bag)
                        throw InputError("nice decomposition: bad introduce node " + std::to_string(i));
                    break;
                case NiceKind::Forget:
                    if (n.children.size() != 1 || std::binary_search(n.bag.begin(), n.bag.end(), n.vertex)
                            || with(n.bag, n.vertex) != child_bag(0))
                        throw InputError("nice decomposition: bad forget node " + std::to_string(i));
                    break;
                case NiceKind::Join:
                    if (n.children.size() != 2 || child_bag(0) != n.bag || child_bag(1) != n.bag)
                        throw InputError("nice decomposition: bad join node " + std::to_string(i));
                    break;
            }
        }
        as_tree_decomposition().validate(h);
    }

    auto NiceTreeDecomposition::post_order() const -> vector<int>
    {
        vector<int> order;
        vector<pair<int, std::size_t>> stack{ { root, 0 } };
        while (! stack.empty()) {
            auto & [v, next] = stack.back();
            if (next < nodes[v].children.size()) {
                int c = nodes[v].children[next++];
                stack.emplace_back(c, 0);
            }
            else {
                order.push_back(v);
                stack.pop_back();
            }
        }
        return order;
    }

    auto parse_pace_td(istream & in) -> TreeDecomposition
    {
        TreeDecomposition td;
        string line;
        int line_number = 0, expected_bags = -1, host_size = -1;
        vector<bool> seen;
        auto fail = [&] (const string & why) -> void {
            throw InputError("tree decomposition line " + std::to_string(line_number) + ": " + why);
        };
        while (std::getline(in, line)) {
            ++line_number;
            std::istringstream tokens(line);
            string first;
            if (! (tokens >> first) || first == "c")
                continue;
            if (first == "s") {
                string td_word;
                int width_plus_one;
                if (expected_bags != -1 || ! (tokens >> td_word >> expected_bags >> width_plus_one >> host_size) || td_word != "td"
                        || expected_bags < 1 || host_size < 0)
                    fail("malformed header");
                td.bags.assign(expected_bags, { });
                seen.assign(expected_bags, false);
            }
            else if (first == "b") {
                if (expected_bags == -1)
                    fail("bag before header");
                int id;
                if (! (tokens >> id) || id < 1 || id > expected_bags || seen[id - 1])
                    fail("bad bag id");
                seen[id - 1] = true;
                long long v;
                while (tokens >> v) {
                    if (v < 1 || v > host_size)
                        fail("vertex " + std::to_string(v) + " out of range");
                    td.bags[id - 1].push_back(int(v - 1));
                }
                if (! tokens.eof())
                    fail("unexpected token");
                auto & b = td.bags[id - 1];
                std::sort(b.begin(), b.end());
                b.erase(std::unique(b.begin(), b.end()), b.end());
            }
            else {
                if (expected_bags == -1)
                    fail("edge before header");
                int a, b;
                std::istringstream edge(line);
                string extra;
                if (! (edge >> a >> b) || (edge >> extra) || a < 1 || b < 1 || a > expected_bags || b > expected_bags)
                    fail("malformed tree edge");
                td.edges.emplace_back(a - 1, b - 1);
            }
        }
        if (expected_bags == -1)
            throw InputError("tree decomposition: missing header");
        return td;
    }

    auto parse_pace_td_file(const string & path) -> TreeDecomposition
    {
        std::ifstream in(path);
        if (! in)
            throw InputError("cannot open tree decomposition file '" + path + "'");
        return parse_pace_td(in);
    }

    auto write_pace_td(const TreeDecomposition & td, int host_size) -> string
    {
        std::ostringstream out;
        out << "s td " << td.bags.size() << " " << td.width() + 1 << " " << host_size << "\n";
        for (std::size_t i = 0 ; i < td.bags.size() ; ++i) {
            out << "b " << i + 1;
            for (int v : td.bags[i])
                out << " " << v + 1;
            out << "\n";
        }
        for (auto [a, b] : td.edges)
            out << a + 1 << " " << b + 1 << "\n";
        return out.str();
    }

    auto decomposition_from_ordering(const Graph & h, const vector<int> & order) -> TreeDecomposition
    {
        int n = h.n();
        vector<set<int>> fill(n);
        for (int v = 0 ; v < n ; ++v)
            fill[v].insert(h.neighbours(v).begin(), h.neighbours(v).end());
        vector<int> position(n, -1);
        for (int i = 0 ; i < int(order.size()) ; ++i)
            position[order[i]] = i;
        for (int v = 0 ; v < n ; ++v)
            if (position[v] == -1)
                throw InputError("elimination ordering does not cover every vertex");

        TreeDecomposition td;
        vector<int> bag_of(n, -1);
        vector<int> parent_vertex(n, -1);
        for (int v : order) {
            vector<int> later;
            for (int w : fill[v])
                if (position[w] > position[v])
                    later.push_back(w);
            for (int a : later)
                for (int b : later)
                    if (a != b)
                        fill[a].insert(b);
            vector<int> bag = later;
            bag.push_back(v);
            std::sort(bag.begin(), bag.end());
            bag_of[v] = int(td.bags.size());
            td.bags.push_back(bag);
            int first = -1;
            for (int w : later)
                if (first == -1 || position[w] < position[first])
                    first = w;
            parent_vertex[v] = first;
        }
        int previous_root = -1;
        for (int v : order) {
            if (parent_vertex[v] != -1)
                td.edges.emplace_back(bag_of[parent_vertex[v]], bag_of[v]);
            else {
                if (previous_root != -1)
                    td.edges.emplace_back(previous_root, bag_of[v]);
                previous_root = bag_of[v];
            }
        }
        if (td.bags.empty())
            td.bags.push_back({ });
        return td;
    }

    auto exact_tree_decomposition(const Graph & h) -> TreeDecomposition
    {
        int n = h.n();
        if (n > 20)
            throw InputError("exact tree decomposition is limited to 20 vertices");
        if (n == 0)
            return decomposition_from_ordering(h, { });
        vector<uint64_t> adj(n, 0);
        for (int v = 0 ; v < n ; ++v)
            for (int w : h.neighbours(v))
                adj[v] |= bit(w);

        // q(s, v): vertices outside s + v reachable from v through s
        auto q = [&] (uint64_t s, int v) -> int {
            uint64_t reached = bit(v), frontier = bit(v), outside = 0;
            while (frontier) {
                uint64_t next = 0;
                for (uint64_t bits = frontier ; bits ; bits &= bits - 1)
                    next |= adj[std::countr_zero(bits)];
                next &= ~reached;
                reached |= next;
                outside |= next & ~s;
                frontier = next & s;
            }
            return std::popcount(outside & ~bit(v));
        };

        std::size_t total = std::size_t(1) << n;
        vector<int> best(total, std::numeric_limits<int>::max());
        vector<signed char> choice(total, -1);
        best[0] = -1;
        for (std::size_t s = 1 ; s < total ; ++s)
            for (uint64_t bits = s ; bits ; bits &= bits - 1) {
                int v = std::countr_zero(bits);
                uint64_t rest = s & ~bit(v);
                int value = std::max(best[rest], q(rest, v));
                if (value < best[s]) {
                    best[s] = value;
                    choice[s] = static_cast<signed char>(v);
                }
            }
        vector<int> order;
        for (uint64_t s = total - 1 ; s ; s &= ~bit(choice[s]))
            order.push_back(choice[s]);
        std::reverse(order.begin(), order.end());
        return decomposition_from_ordering(h, order);
    }

    auto heuristic_tree_decomposition(const Graph & h) -> TreeDecomposition
    {
        int n = h.n();
        vector<set<int>> fill(n);
        for (int v = 0 ; v < n ; ++v)
            fill[v].insert(h.neighbours(v).begin(), h.neighbours(v).end());
        vector<bool> done(n, false);
        vector<int> order;
        for (int step = 0 ; step < n ; ++step) {
            int pick = -1;
            for (int v = 0 ; v < n ; ++v)
                if (! done[v] && (pick == -1 || fill[v].size() < fill[pick].size()))
                    pick = v;
            for (int a : fill[pick])
                for (int b : fill[pick])
                    if (a != b)
                        fill[a].insert(b);
            for (int a : fill[pick])
                fill[a].erase(pick);
            done[pick] = true;
            order.push_back(pick);
        }
        return decomposition_from_ordering(h, order);
    }

    auto default_tree_decomposition(const Graph & h) -> TreeDecomposition
    {
        return h.n() <= 12 ? exact_tree_decomposition(h) : heuristic_tree_decomposition(h);
    }

    auto make_nice(const TreeDecomposition & td, const Graph & h) -> NiceTreeDecomposition
    {
        td.validate(h);
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
            node.bag = std::move(bag);
            node.children = children;
            node.vertex = vertex;
            ntd.nodes.push_back(std::move(node));
            for (int c : children)
                ntd.nodes[c].parent = id;
            return id;
        };

        // from a node with bag `from`, forget then introduce until the bag is `to`
        auto chain = [&] (int node, vector<int> from, const vector<int> & to) -> int {
            for (int v : vector<int>(from))
                if (! std::binary_search(to.begin(), to.end(), v)) {
                    from.erase(std::find(from.begin(), from.end(), v));
                    node = add(NiceKind::Forget, from, { node }, v);
                }
            for (int v : to)
                if (! std::binary_search(from.begin(), from.end(), v)) {
                    from.insert(std::upper_bound(from.begin(), from.end(), v), v);
                    node = add(NiceKind::Introduce, from, { node }, v);
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
        if (! ntd.nodes[ntd.root].bag.empty() || ntd.nodes[ntd.root].kind == NiceKind::Join)
            ntd.root = add(NiceKind::Forget, { }, { ntd.root }, -1);
        ntd.validate(h);
        return ntd;
    }

    auto ball_union(const Graph &, const DistanceMatrix & dh, const vector<int> & bag, int r) -> vector<int>
    {
        vector<int> result;
        for (int v = 0 ; v < dh.n() ; ++v)
            for (int b : bag)
                if (dh(v, b) <= r) {
                    result.push_back(v);
                    break;
                }
        return result;
    }

    struct TwContext::Impl
    {
        const Graph & g;
        const DistanceMatrix & dg;
        const Graph & h;
        const DistanceMatrix & dh;
        const NiceTreeDecomposition & ntd;
        int d;
        int n, big_n;
        uint64_t full;
        vector<bool> red;
        vector<uint64_t> adjacency;
        vector<vector<int>> balls;                  // per node, sorted hosts
        vector<vector<int>> ball_index;             // per node, host -> index or -1
        vector<vector<char>> in_bag;
        vector<vector<int>> neighbours;             // parent first, then children
        vector<vector<vector<char>>> side_hosts;    // per node, per neighbour index

        Impl(const Graph & g_, const DistanceMatrix & dg_, const Graph & h_, const DistanceMatrix & dh_,
                const NiceTreeDecomposition & ntd_, int d_, const vector<bool> * red_) :
            g(g_), dg(dg_), h(h_), dh(dh_), ntd(ntd_), d(d_), n(g_.n()), big_n(h_.n())
        {
            if (n > 64)
                throw InputError("the treewidth solver supports guests with at most 64 vertices");
            full = n == 64 ? ~uint64_t(0) : bit(n) - 1;
            red = red_ ? *red_ : vector<bool>(big_n, true);
            if (int(red.size()) != big_n)
                throw InputError("red set size does not match the host");
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
                for (int v : ball_union(h, dh, ntd.nodes[u].bag, d + 1))
                    if (red[v]) {
                        ball_index[u][v] = int(balls[u].size());
                        balls[u].push_back(v);
                    }
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
            vector<uint64_t> m;                     // per neighbour index
            vector<int> host_of;                    // per guest vertex, or -1
        };

        auto derive(const TwPartialEmbedding & f) const -> Derived
        {
            Derived r;
            int u = f.node;
            if (u < 0 || u >= int(ntd.nodes.size()) || f.preimage.size() != balls[u].size())
                return r;
            r.host_of.assign(n, -1);
            for (std::size_t i = 0 ; i < f.preimage.size() ; ++i) {
                int x = f.preimage[i];
                if (x < 0 || x >= n || (r.domain & bit(x)))
                    return r;
                r.domain |= bit(x);
                r.host_of[x] = balls[u][i];
                if (in_bag[u][balls[u][i]])
                    r.centre |= bit(x);
            }
            int k = int(neighbours[u].size());
            r.m.assign(k, 0);
            if (balls[u].empty()) {
                int j = neighbour_index(u, f.side);
                if (j == -1)
                    return r;
                r.m[j] = full;
            }
            else {
                if (f.side != -1)
                    return r;
                uint64_t rest = full & ~r.domain;
                for (int j = 0 ; j < k ; ++j) {
                    uint64_t dom = 0;
                    for (std::size_t i = 0 ; i < f.preimage.size() ; ++i)
                        if (side_hosts[u][j][balls[u][i]])
                            dom |= bit(f.preimage[i]);
                    r.m[j] = closure(neighbourhood(dom & ~r.centre), rest);
                }
            }
            r.well_formed = true;
            return r;
        }

        auto feasible(const TwPartialEmbedding & f, const Derived & r) const -> bool
        {
            if (! r.well_formed)
                return false;
            int u = f.node;
            // (i) pairwise bounds inside the domain
            for (std::size_t i = 0 ; i < f.preimage.size() ; ++i)
                for (std::size_t j = i + 1 ; j < f.preimage.size() ; ++j) {
                    std::int64_t base = dg(f.preimage[i], f.preimage[j]);
                    std::int64_t host = dh(balls[u][i], balls[u][j]);
                    if (host < base || host > d * base)
                        return false;
                }
            // (ii) disjoint component sets, and everything accounted for
            uint64_t seen = r.domain;
            for (uint64_t m : r.m) {
                if (seen & m)
                    return false;
                seen |= m;
            }
            if (seen != full)
                return false;
            // (iii) neighbours of the centre are placed
            return (neighbourhood(r.centre) & ~r.domain) == 0;
        }

        auto succeeds(const TwPartialEmbedding & f_u, const Derived & ru, const TwPartialEmbedding & f_v, const Derived & rv) const -> bool
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
    };

    TwContext::TwContext(const Graph & g, const DistanceMatrix & dg, const Graph & h, const DistanceMatrix & dh,
            const NiceTreeDecomposition & ntd, int d, const vector<bool> * red) :
        _imp(std::make_shared<Impl>(g, dg, h, dh, ntd, d, red))
    {
    }

    auto TwContext::ball(int node) const -> const vector<int> &
    {
        return _imp->balls.at(node);
    }

    auto TwContext::neighbours(int node) const -> const vector<int> &
    {
        return _imp->neighbours.at(node);
    }

    auto TwContext::component_set(const TwPartialEmbedding & f, int neighbour) const -> uint64_t
    {
        auto r = _imp->derive(f);
        int j = _imp->neighbour_index(f.node, neighbour);
        if (! r.well_formed || j == -1)
            return 0;
        return r.m[j];
    }

    auto TwContext::domain(const TwPartialEmbedding & f) const -> uint64_t
    {
        return _imp->derive(f).domain;
    }

    auto TwContext::feasible(const TwPartialEmbedding & f) const -> bool
    {
        return _imp->feasible(f, _imp->derive(f));
    }

    auto TwContext::succeeds(const TwPartialEmbedding & f_u, const TwPartialEmbedding & f_v) const -> bool
    {
        return _imp->succeeds(f_u, _imp->derive(f_u), f_v, _imp->derive(f_v));
    }

    auto tw_feasible(const TwContext & context, const TwPartialEmbedding & f) -> bool
    {
        return context.feasible(f);
    }

    auto tw_succeeds(const TwContext & context, const TwPartialEmbedding & f_u, const TwPartialEmbedding & f_v) -> bool
    {
        return context.succeeds(f_u, f_v);
    }

    namespace
    {
        struct Entry
        {
            TwPartialEmbedding f;
            TwContext::Impl::Derived derived;
        };

        auto shared_key(const TwContext::Impl & c, int u, const TwPartialEmbedding & f_child) -> string
        {
            // preimages of the hosts the child's ball shares with its parent's, in host order
            string key;
            int v = f_child.node;
            for (std::size_t i = 0 ; i < c.balls[v].size() ; ++i)
                if (c.ball_index[u][c.balls[v][i]] != -1)
                    key.push_back(char(f_child.preimage[i]));
            return key;
        }

        auto parent_key(const TwContext::Impl & c, const TwPartialEmbedding & f_u, int v) -> string
        {
            string key;
            int u = f_u.node;
            for (std::size_t i = 0 ; i < c.balls[v].size() ; ++i) {
                int j = c.ball_index[u][c.balls[v][i]];
                if (j != -1)
                    key.push_back(char(f_u.preimage[j]));
            }
            return key;
        }
    }

    auto bijective_embed_tw(const Graph & g, const DistanceMatrix & dg, const Graph & h, const DistanceMatrix & dh,
            const NiceTreeDecomposition & ntd, int d, const vector<bool> * red) -> TwResult
    {
        TwResult result;
        int n = g.n();
        int codomain = red ? int(std::count(red->begin(), red->end(), true)) : h.n();
        if (n != codomain)
            throw InputError("bijective embedding needs |V(G)| = " + std::to_string(n) + " to equal the codomain size " + std::to_string(codomain));
        if (n == 0)
            return result;
        if (! g.connected())
            throw InputError("guest graph must be connected");
        if (red) {
            vector<bool> removed(h.n());
            for (int v = 0 ; v < h.n() ; ++v)
                removed[v] = (*red)[v];
            for (auto & c : components_after_removal(h, removed))
                if (int(c.size()) > d)
                    throw InputError("red-blue host has a blue run longer than the distortion");
        }
        if (! degree_gate(g.max_degree(), h.max_degree(), d)) {
            result.stats.gate_rejected = true;
            return result;
        }
        ntd.validate(h);

        TwContext::Impl c(g, dg, h, dh, ntd, d, red);
        int nodes = int(ntd.nodes.size());
        vector<vector<Entry>> good(nodes);
        vector<unordered_map<string, vector<int>>> by_key(nodes);

        auto has_successor = [&] (const Entry & e, int v) -> int {
            auto it = by_key[v].find(parent_key(c, e.f, v));
            if (it == by_key[v].end())
                return -1;
            for (int k : it->second)
                if (c.succeeds(e.f, e.derived, good[v][k].f, good[v][k].derived))
                    return k;
            return -1;
        };

        for (int u : ntd.post_order()) {
            const auto & node = ntd.nodes[u];
            const auto & ball = c.balls[u];
            set<vector<int>> maps;

            if (node.kind == NiceKind::Leaf)
                maps.insert(vector<int>(ball.size(), -1));
            else if (node.kind == NiceKind::Join) {
                set<vector<int>> left;
                for (auto & e : good[node.children[0]])
                    left.insert(e.f.preimage);
                for (auto & e : good[node.children[1]])
                    if (left.count(e.f.preimage))
                        maps.insert(e.f.preimage);
            }
            else {
                int v = node.children[0];
                set<vector<int>> child_maps;
                for (auto & e : good[v])
                    child_maps.insert(e.f.preimage);
                for (auto & pm : child_maps) {
                    vector<int> pre(ball.size(), -1);
                    uint64_t used = 0;
                    for (std::size_t i = 0 ; i < c.balls[v].size() ; ++i) {
                        int j = c.ball_index[u][c.balls[v][i]];
                        if (j != -1) {
                            pre[j] = pm[i];
                            used |= bit(pm[i]);
                        }
                    }
                    // fill the hosts that entered the ball, checking pairwise bounds as we go
                    function<void (std::size_t)> extend = [&] (std::size_t i) {
                        if (i == ball.size()) {
                            maps.insert(pre);
                            return;
                        }
                        if (pre[i] != -1) {
                            extend(i + 1);
                            return;
                        }
                        for (int x = 0 ; x < n ; ++x) {
                            if (used & bit(x))
                                continue;
                            bool ok = true;
                            for (std::size_t j = 0 ; j < ball.size() && ok ; ++j)
                                if (pre[j] != -1) {
                                    std::int64_t base = dg(x, pre[j]), host = dh(ball[i], ball[j]);
                                    ok = host >= base && host <= d * base;
                                }
                            if (! ok)
                                continue;
                            pre[i] = x;
                            used |= bit(x);
                            extend(i + 1);
                            used &= ~bit(x);
                            pre[i] = -1;
                        }
                    };
                    extend(0);
                }
            }

            for (auto & pm : maps) {
                if (std::find(pm.begin(), pm.end(), -1) != pm.end())
                    continue;
                vector<int> sides = ball.empty() ? c.neighbours[u] : vector<int>{ -1 };
                for (int s : sides) {
                    Entry e;
                    e.f = TwPartialEmbedding{ u, pm, s };
                    e.derived = c.derive(e.f);
                    ++result.stats.candidates;
                    if (! c.feasible(e.f, e.derived))
                        continue;
                    ++result.stats.feasible;
                    bool ok = true;
                    for (int v : node.children)
                        if (has_successor(e, v) == -1) {
                            ok = false;
                            break;
                        }
                    if (ok)
                        good[u].push_back(std::move(e));
                }
            }

            std::sort(good[u].begin(), good[u].end(), [] (const Entry & a, const Entry & b) { return a.f < b.f; });
            result.stats.good += good[u].size();
            if (good[u].empty())
                return result;
            if (node.parent != -1)
                for (int k = 0 ; k < int(good[u].size()) ; ++k)
                    by_key[u][shared_key(c, node.parent, good[u][k].f)].push_back(k);
        }

        // top-down selection of the least succeeding entry at every child
        vector<int> chosen(nodes, -1);
        chosen[ntd.root] = 0;
        auto order = ntd.post_order();
        std::reverse(order.begin(), order.end());
        vector<vector<pair<int, int>>> parts;
        for (int u : order) {
            const auto & e = good[u][chosen[u]];
            for (int v : ntd.nodes[u].children) {
                chosen[v] = has_successor(e, v);
                if (chosen[v] == -1)
                    throw EmbeddingError("treewidth solver lost a succeeding entry during reconstruction");
            }
            vector<pair<int, int>> part;
            for (std::size_t i = 0 ; i < e.f.preimage.size() ; ++i)
                part.emplace_back(e.f.preimage[i], c.balls[u][i]);
            parts.push_back(std::move(part));
        }
        auto f = union_embedding(n, parts);

        // each guest vertex is covered by a connected set of nodes
        for (int x = 0 ; x < n ; ++x) {
            int covering = 0, links = 0;
            for (int u = 0 ; u < nodes ; ++u) {
                bool here = good[u][chosen[u]].derived.domain & bit(x);
                if (! here)
                    continue;
                ++covering;
                int p = ntd.nodes[u].parent;
                if (p != -1 && (good[p][chosen[p]].derived.domain & bit(x)))
                    ++links;
            }
            if (covering == 0 || links != covering - 1)
                ++result.stats.subtree_claim_violations;
        }

        if (! f.total() || ! f.injective())
            throw EmbeddingError("treewidth solver produced a map that is not a bijection");
        for (int x = 0 ; x < n ; ++x)
            if (! c.red[f.image[x]])
                throw EmbeddingError("treewidth solver mapped onto a blue vertex");
        if (auto v = verify_scaled(dg, dh, f, 1, d, 1, &c.red))
            throw EmbeddingError("treewidth solver produced an invalid embedding: " + v->describe());
        result.verdict = Verdict::Found;
        result.embedding = f;
        return result;
    }
}
