/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <metemb/graph.hh>

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

using std::deque;
using std::greater;
using std::int32_t;
using std::int64_t;
using std::map;
using std::pair;
using std::priority_queue;
using std::set;
using std::string;
using std::to_string;
using std::vector;

namespace metemb
{
    namespace
    {
        auto check_vertex(int n, int v) -> void
        {
            if (v < 0 || v >= n)
                throw InputError("vertex " + to_string(v) + " out of range 0.." + to_string(n - 1));
        }
    }

    auto Graph::from_edges(int n, const vector<pair<int, int>> & edges) -> Graph
    {
        vector<WeightedEdge> w;
        w.reserve(edges.size());
        for (auto & [u, v] : edges)
            w.push_back(WeightedEdge{ u, v, 1 });
        auto g = from_weighted_edges(n, w);
        g._weighted = false;
        return g;
    }

    auto Graph::from_weighted_edges(int n, const vector<WeightedEdge> & edges) -> Graph
    {
        if (n < 0)
            throw InputError("negative vertex count");

        Graph g;
        g._n = n;
        g._weighted = true;
        vector<vector<pair<int, int>>> adj(n);
        for (auto & e : edges) {
            check_vertex(n, e.u);
            check_vertex(n, e.v);
            if (e.u == e.v)
                throw InputError("self-loop on vertex " + to_string(e.u));
            if (e.w < 1)
                throw InputError("edge " + to_string(e.u) + " " + to_string(e.v) + " has non-positive weight");
            adj[e.u].emplace_back(e.v, e.w);
            adj[e.v].emplace_back(e.u, e.w);
        }

        g._adj.resize(n);
        g._adj_weight.resize(n);
        for (int v = 0 ; v < n ; ++v) {
            sort(adj[v].begin(), adj[v].end());
            for (std::size_t i = 0 ; i < adj[v].size() ; ++i) {
                if (i > 0 && adj[v][i].first == adj[v][i - 1].first)
                    throw InputError("parallel edge between " + to_string(v) + " and " + to_string(adj[v][i].first));
                g._adj[v].push_back(adj[v][i].first);
                g._adj_weight[v].push_back(adj[v][i].second);
            }
        }
        return g;
    }

    auto Graph::m() const -> int
    {
        int total = 0;
        for (auto & a : _adj)
            total += int(a.size());
        return total / 2;
    }

    auto Graph::max_degree() const -> int
    {
        int best = 0;
        for (auto & a : _adj)
            best = std::max(best, int(a.size()));
        return best;
    }

    auto Graph::has_edge(int u, int v) const -> bool
    {
        return std::binary_search(_adj[u].begin(), _adj[u].end(), v);
    }

    auto Graph::weight(int u, int v) const -> int
    {
        auto it = std::lower_bound(_adj[u].begin(), _adj[u].end(), v);
        if (it == _adj[u].end() || *it != v)
            throw std::logic_error("weight() of a non-edge");
        return _weighted ? _adj_weight[u][it - _adj[u].begin()] : 1;
    }

    auto Graph::max_weight() const -> int
    {
        int best = _n > 1 ? 1 : 0;
        if (_weighted)
            for (auto & ws : _adj_weight)
                for (int w : ws)
                    best = std::max(best, w);
        return best;
    }

    auto Graph::edges() const -> vector<pair<int, int>>
    {
        vector<pair<int, int>> result;
        for (int u = 0 ; u < _n ; ++u)
            for (int v : _adj[u])
                if (u < v)
                    result.emplace_back(u, v);
        return result;
    }

    auto Graph::weighted_edges() const -> vector<WeightedEdge>
    {
        vector<WeightedEdge> result;
        for (int u = 0 ; u < _n ; ++u)
            for (std::size_t i = 0 ; i < _adj[u].size() ; ++i)
                if (u < _adj[u][i])
                    result.push_back(WeightedEdge{ u, _adj[u][i], _weighted ? _adj_weight[u][i] : 1 });
        return result;
    }

    auto Graph::connected() const -> bool
    {
        if (_n == 0)
            return true;
        return components_after_removal(*this, vector<bool>(_n, false)).size() == 1;
    }

    DistanceMatrix::DistanceMatrix(int n, int32_t fill) :
        _n(n),
        _d(std::size_t(n) * n, fill)
    {
    }

    auto DistanceMatrix::diameter() const -> int32_t
    {
        int32_t best = 0;
        for (auto x : _d)
            if (x != infinite_distance)
                best = std::max(best, x);
        return best;
    }

    auto DistanceMatrix::scaled(int factor) const -> DistanceMatrix
    {
        DistanceMatrix result = *this;
        for (auto & x : result._d)
            if (x != infinite_distance)
                x *= factor;
        return result;
    }

    auto all_pairs_distances(const Graph & g) -> DistanceMatrix
    {
        int n = g.n();
        DistanceMatrix result(n);
        if (! g.weighted()) {
            vector<int> queue(n);
            for (int s = 0 ; s < n ; ++s) {
                result.at(s, s) = 0;
                int head = 0, tail = 0;
                queue[tail++] = s;
                while (head < tail) {
                    int u = queue[head++];
                    int32_t du = result(s, u);
                    for (int v : g.neighbours(u))
                        if (result(s, v) == infinite_distance) {
                            result.at(s, v) = du + 1;
                            queue[tail++] = v;
                        }
                }
            }
        }
        else {
            for (int s = 0 ; s < n ; ++s) {
                priority_queue<pair<int64_t, int>, vector<pair<int64_t, int>>, greater<>> pq;
                result.at(s, s) = 0;
                pq.emplace(0, s);
                while (! pq.empty()) {
                    auto [du, u] = pq.top();
                    pq.pop();
                    if (du > result(s, u))
                        continue;
                    for (int v : g.neighbours(u)) {
                        int64_t alt = du + g.weight(u, v);
                        if (alt < result(s, v)) {
                            result.at(s, v) = int32_t(alt);
                            pq.emplace(alt, v);
                        }
                    }
                }
            }
        }
        return result;
    }

    auto components_after_removal(const Graph & g, const vector<bool> & removed) -> vector<vector<int>>
    {
        vector<vector<int>> result;
        vector<bool> seen(removed);
        seen.resize(g.n(), false);
        vector<int> stack;
        for (int s = 0 ; s < g.n() ; ++s) {
            if (seen[s])
                continue;
            vector<int> comp;
            seen[s] = true;
            stack.push_back(s);
            while (! stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                comp.push_back(u);
                for (int v : g.neighbours(u))
                    if (! seen[v]) {
                        seen[v] = true;
                        stack.push_back(v);
                    }
            }
            sort(comp.begin(), comp.end());
            result.push_back(std::move(comp));
        }
        return result;
    }

    auto components_after_removal(const Graph & g, const vector<int> & removed) -> vector<vector<int>>
    {
        vector<bool> flags(g.n(), false);
        for (int v : removed) {
            check_vertex(g.n(), v);
            flags[v] = true;
        }
        return components_after_removal(g, flags);
    }

    auto ball_size_bound(int host_delta, int d) -> int64_t
    {
        const int64_t cap = std::numeric_limits<int64_t>::max();
        int64_t total = 0, term = host_delta;
        for (int i = 0 ; i < d ; ++i) {
            if (total > cap - term)
                return cap;
            total += term;
            if (host_delta > 1 && term > cap / (host_delta - 1))
                term = cap;
            else
                term *= (host_delta - 1);
        }
        return total;
    }

    auto degree_gate(int guest_delta, int host_delta, int d) -> bool
    {
        return int64_t(guest_delta) <= ball_size_bound(host_delta, d);
    }

    auto path_graph(int n) -> Graph
    {
        vector<pair<int, int>> e;
        for (int i = 0 ; i + 1 < n ; ++i)
            e.emplace_back(i, i + 1);
        return Graph::from_edges(n, e);
    }

    auto cycle_graph(int n) -> Graph
    {
        if (n < 3)
            throw InputError("a cycle needs at least 3 vertices");
        vector<pair<int, int>> e;
        for (int i = 0 ; i < n ; ++i)
            e.emplace_back(i, (i + 1) % n);
        return Graph::from_edges(n, e);
    }

    auto star_graph(int leaves) -> Graph
    {
        vector<pair<int, int>> e;
        for (int i = 1 ; i <= leaves ; ++i)
            e.emplace_back(0, i);
        return Graph::from_edges(leaves + 1, e);
    }

    auto complete_graph(int n) -> Graph
    {
        vector<pair<int, int>> e;
        for (int i = 0 ; i < n ; ++i)
            for (int j = i + 1 ; j < n ; ++j)
                e.emplace_back(i, j);
        return Graph::from_edges(n, e);
    }

    auto theta_graph(const vector<int> & arms) -> Graph
    {
        HostSpec spec;
        spec.family = HostFamily::Theta;
        spec.arms = arms;
        return generate(spec);
    }

    auto validate_host_spec(const HostSpec & spec) -> void
    {
        switch (spec.family) {
            case HostFamily::Path:
                if (spec.size < 1)
                    throw InputError("path host needs at least one vertex");
                break;
            case HostFamily::Cycle:
                if (spec.size < 3)
                    throw InputError("cycle host needs at least three vertices");
                break;
            case HostFamily::Theta: {
                if (spec.arms.size() < 2)
                    throw InputError("theta host needs at least two arms");
                int unit_arms = 0;
                for (int l : spec.arms) {
                    if (l < 1)
                        throw InputError("theta arm lengths must be at least 1");
                    if (l == 1)
                        ++unit_arms;
                }
                if (unit_arms > 1)
                    throw InputError("theta host has more than one arm of length 1 (parallel edges)");
                break;
            }
            case HostFamily::General:
                break;
        }
    }

    auto generate(const HostSpec & spec) -> Graph
    {
        validate_host_spec(spec);
        switch (spec.family) {
            case HostFamily::Path: return path_graph(spec.size);
            case HostFamily::Cycle: return cycle_graph(spec.size);
            case HostFamily::General: return spec.graph;
            case HostFamily::Theta: {
                vector<pair<int, int>> e;
                int next = 2;
                for (int l : spec.arms) {
                    int prev = 0;
                    for (int i = 1 ; i < l ; ++i) {
                        e.emplace_back(prev, next);
                        prev = next++;
                    }
                    e.emplace_back(prev, 1);
                }
                return Graph::from_edges(next, e);
            }
        }
        throw std::logic_error("unknown host family");
    }

    namespace
    {
        auto parse_positive(const string & text, const string & what) -> int
        {
            std::size_t used = 0;
            int value = 0;
            try {
                value = std::stoi(text, &used);
            }
            catch (const std::exception &) {
                throw InputError("cannot parse " + what + " '" + text + "'");
            }
            if (used != text.size())
                throw InputError("cannot parse " + what + " '" + text + "'");
            return value;
        }
    }

    auto parse_host_spec(const string & text) -> HostSpec
    {
        auto colon = text.find(':');
        if (colon == string::npos)
            throw InputError("host spec '" + text + "' must look like cycle:N, path:N, theta:l1,l2,... or file:PATH");
        string kind = text.substr(0, colon), rest = text.substr(colon + 1);
        HostSpec spec;
        if (kind == "cycle") {
            spec.family = HostFamily::Cycle;
            spec.size = parse_positive(rest, "cycle length");
        }
        else if (kind == "path") {
            spec.family = HostFamily::Path;
            spec.size = parse_positive(rest, "path length");
        }
        else if (kind == "theta") {
            spec.family = HostFamily::Theta;
            std::stringstream ss(rest);
            string part;
            while (std::getline(ss, part, ','))
                spec.arms.push_back(parse_positive(part, "theta arm length"));
        }
        else if (kind == "file") {
            spec.family = HostFamily::General;
            spec.graph = parse_edge_list_file(rest, false).graph;
        }
        else
            throw InputError("unknown host family '" + kind + "'");
        validate_host_spec(spec);
        return spec;
    }

    auto parse_edge_list(std::istream & in, bool allow_weights) -> ParsedGraph
    {
        struct RawEdge
        {
            long long u, v;
            int w;
        };

        vector<RawEdge> raw;
        set<long long> labels;
        string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#') ; hash != string::npos)
                line.erase(hash);
            std::stringstream ss(line);
            vector<string> tokens;
            string tok;
            while (ss >> tok)
                tokens.push_back(tok);
            if (tokens.empty())
                continue;
            auto fail = [&] (const string & why) {
                throw InputError("line " + to_string(line_no) + ": " + why);
            };
            if (tokens.size() != 2 && tokens.size() != 3)
                fail("expected 'u v' or 'u v w'");
            if (tokens.size() == 3 && ! allow_weights)
                fail("weights are not accepted here (use --weighted for weighted guests)");
            long long vals[3] = { 0, 0, 1 };
            for (std::size_t i = 0 ; i < tokens.size() ; ++i) {
                std::size_t used = 0;
                try {
                    vals[i] = std::stoll(tokens[i], &used);
                }
                catch (const std::exception &) {
                    fail("not an integer: '" + tokens[i] + "'");
                }
                if (used != tokens[i].size())
                    fail("not an integer: '" + tokens[i] + "'");
            }
            if (vals[0] < 0 || vals[1] < 0)
                fail("negative vertex label");
            if (vals[0] == vals[1])
                fail("self-loop");
            if (vals[2] < 1 || vals[2] > (1 << 20))
                fail("weight must be a positive integer");
            raw.push_back(RawEdge{ vals[0], vals[1], int(vals[2]) });
            labels.insert(vals[0]);
            labels.insert(vals[1]);
        }

        ParsedGraph result;
        map<long long, int> index;
        for (auto l : labels) {
            index.emplace(l, int(result.original_label.size()));
            result.original_label.push_back(l);
        }
        vector<WeightedEdge> edges;
        set<pair<int, int>> seen;
        bool any_weight = false;
        for (auto & e : raw) {
            int u = index[e.u], v = index[e.v];
            if (! seen.emplace(std::min(u, v), std::max(u, v)).second)
                throw InputError("parallel edge between " + to_string(e.u) + " and " + to_string(e.v));
            any_weight = any_weight || e.w != 1;
            edges.push_back(WeightedEdge{ u, v, e.w });
        }
        int n = int(result.original_label.size());
        if (any_weight)
            result.graph = Graph::from_weighted_edges(n, edges);
        else {
            vector<pair<int, int>> plain;
            for (auto & e : edges)
                plain.emplace_back(e.u, e.v);
            result.graph = Graph::from_edges(n, plain);
        }
        return result;
    }

    auto parse_edge_list_file(const string & path, bool allow_weights) -> ParsedGraph
    {
        std::ifstream in(path);
        if (! in)
            throw InputError("cannot open '" + path + "'");
        try {
            return parse_edge_list(in, allow_weights);
        }
        catch (const InputError & e) {
            throw InputError(path + ": " + e.what());
        }
    }

    auto parse_guest_file(const string & path, bool allow_weights) -> ParsedGraph
    {
        auto result = parse_edge_list_file(path, allow_weights);
        if (result.graph.n() == 0)
            throw InputError(path + ": empty guest graph");
        if (! result.graph.connected())
            throw InputError(path + ": guest graph is disconnected");
        return result;
    }
}
