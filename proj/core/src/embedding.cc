/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <metemb/embedding.hh>

#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

using std::int32_t;
using std::int64_t;
using std::map;
using std::optional;
using std::pair;
using std::string;
using std::to_string;
using std::vector;

namespace metemb
{
    Rational::Rational(int64_t num, int64_t den)
    {
        if (den == 0)
            throw std::invalid_argument("zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        auto g = std::gcd(num < 0 ? -num : num, den);
        if (g == 0)
            g = 1;
        _num = num / g;
        _den = den / g;
    }

    auto Rational::operator* (const Rational & other) const -> Rational
    {
        return Rational(_num * other._num, _den * other._den);
    }

    auto Rational::operator<=> (const Rational & other) const -> std::strong_ordering
    {
        __int128 lhs = __int128(_num) * other._den, rhs = __int128(other._num) * _den;
        return lhs < rhs ? std::strong_ordering::less : lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    auto Rational::str() const -> string
    {
        return to_string(_num) + "/" + to_string(_den);
    }

    auto Rational::parse(const string & text) -> Rational
    {
        auto slash = text.find('/');
        auto parse_int = [&] (const string & part) -> int64_t {
            std::size_t used = 0;
            int64_t v = 0;
            try {
                v = std::stoll(part, &used);
            }
            catch (const std::exception &) {
                throw InputError("cannot parse rational '" + text + "'");
            }
            if (used != part.size() || v <= 0)
                throw InputError("cannot parse rational '" + text + "' (expected positive a or a/b)");
            return v;
        };
        if (slash == string::npos)
            return Rational(parse_int(text));
        return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }

    auto Embedding::total() const -> bool
    {
        return std::none_of(image.begin(), image.end(), [] (int a) { return a == unmapped; });
    }

    auto Embedding::injective() const -> bool
    {
        vector<int> seen;
        for (int a : image)
            if (a != unmapped)
                seen.push_back(a);
        sort(seen.begin(), seen.end());
        return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
    }

    auto Embedding::domain() const -> vector<int>
    {
        vector<int> result;
        for (int x = 0 ; x < size() ; ++x)
            if (mapped(x))
                result.push_back(x);
        return result;
    }

    namespace
    {
        auto require_total_injective(const DistanceMatrix & dh, const Embedding & f, int guest_size) -> void
        {
            if (f.size() != guest_size)
                throw EmbeddingError("embedding covers " + to_string(f.size()) + " guest vertices, expected " + to_string(guest_size));
            for (int x = 0 ; x < f.size() ; ++x) {
                if (! f.mapped(x))
                    throw EmbeddingError("embedding is not total: guest vertex " + to_string(x) + " is unmapped");
                if (f.image[x] < 0 || f.image[x] >= dh.n())
                    throw EmbeddingError("guest vertex " + to_string(x) + " maps outside the host");
            }
        }
    }

    auto distortion_report(const Graph & g, const Graph &, const DistanceMatrix & dg, const DistanceMatrix & dh,
            const Embedding & f) -> DistortionReport
    {
        require_total_injective(dh, f, g.n());
        if (! f.injective())
            throw EmbeddingError("embedding is not injective");

        DistortionReport r;
        r.expansion = Rational(1);
        r.contraction = Rational(1);
        bool first = true;
        for (int u = 0 ; u < g.n() ; ++u)
            for (int v = u + 1 ; v < g.n() ; ++v) {
                int32_t a = dg(u, v), b = dh(f.image[u], f.image[v]);
                if (a == infinite_distance || b == infinite_distance)
                    throw EmbeddingError("pair " + to_string(u) + "," + to_string(v) + " is at infinite distance");
                Rational e(b, a), c(a, b);
                if (first || e > r.expansion) {
                    r.expansion = e;
                    r.expansion_witness = { u, v };
                }
                if (first || c > r.contraction) {
                    r.contraction = c;
                    r.contraction_witness = { u, v };
                }
                first = false;
            }
        r.distortion = r.expansion * r.contraction;
        return r;
    }

    auto Violation::describe() const -> string
    {
        switch (kind) {
            case ViolationKind::NotTotal:
                return "guest vertex " + to_string(u) + " is unmapped";
            case ViolationKind::NotInjective:
                return "guest vertices " + to_string(u) + " and " + to_string(v) + " share an image";
            case ViolationKind::OutsideCodomain:
                return "guest vertex " + to_string(u) + " maps to " + to_string(host_distance) + ", outside the allowed host vertices";
            case ViolationKind::Contracting:
                return "pair (" + to_string(u) + "," + to_string(v) + ") contracts: guest distance " + to_string(guest_distance)
                    + " > host distance " + to_string(host_distance);
            case ViolationKind::Expanding:
                return "pair (" + to_string(u) + "," + to_string(v) + ") expands too much: host distance " + to_string(host_distance)
                    + " for guest distance " + to_string(guest_distance);
        }
        return "unknown violation";
    }

    auto verify_scaled(const DistanceMatrix & dg, const DistanceMatrix & dh, const Embedding & f,
            int guest_scale, int64_t d_num, int64_t d_den, const vector<bool> * codomain) -> optional<Violation>
    {
        int n = dg.n();
        for (int x = 0 ; x < n ; ++x)
            if (x >= f.size() || ! f.mapped(x))
                return Violation{ ViolationKind::NotTotal, x, -1, 0, 0 };
            else if (f.image[x] < 0 || f.image[x] >= dh.n())
                throw EmbeddingError("guest vertex " + to_string(x) + " maps outside the host");
            else if (codomain && ! (*codomain)[f.image[x]])
                return Violation{ ViolationKind::OutsideCodomain, x, -1, 0, f.image[x] };

        for (int u = 0 ; u < n ; ++u)
            for (int v = u + 1 ; v < n ; ++v) {
                int64_t a = int64_t(dg(u, v)) * guest_scale;
                int32_t b = dh(f.image[u], f.image[v]);
                if (b == 0)
                    return Violation{ ViolationKind::NotInjective, u, v, int32_t(a), b };
                if (b < a)
                    return Violation{ ViolationKind::Contracting, u, v, int32_t(a), b };
                if (int64_t(b) * d_den > a * d_num)
                    return Violation{ ViolationKind::Expanding, u, v, int32_t(a), b };
            }
        return std::nullopt;
    }

    auto verify_nc_distortion(const Graph & g, const Graph &, const DistanceMatrix & dg, const DistanceMatrix & dh,
            const Embedding & f, int d) -> optional<Violation>
    {
        require_total_injective(dh, f, g.n());
        return verify_scaled(dg, dh, f, 1, d, 1);
    }

    auto RedBlueHost::red_vertices() const -> vector<int>
    {
        vector<int> result;
        for (int v = 0 ; v < graph.n() ; ++v)
            if (red[v])
                result.push_back(v);
        return result;
    }

    auto subdivide_red_blue(const Graph & h, int p) -> RedBlueHost
    {
        if (p < 0)
            throw InputError("negative subdivision factor");
        RedBlueHost result;
        result.subdivisions = p;
        int n = h.n();
        vector<pair<int, int>> edges;
        int next = n;
        for (auto [u, v] : h.edges()) {
            int prev = u;
            for (int i = 0 ; i < p ; ++i) {
                edges.emplace_back(prev, next);
                prev = next++;
            }
            edges.emplace_back(prev, v);
        }
        result.graph = Graph::from_edges(next, edges);
        result.red.assign(next, false);
        result.original_of.assign(next, -1);
        result.red_vertex.resize(n);
        for (int v = 0 ; v < n ; ++v) {
            result.red[v] = true;
            result.original_of[v] = v;
            result.red_vertex[v] = v;
        }
        return result;
    }

    auto gen_reduction_instances(const Graph & g, const Graph & h, int64_t d_num, int64_t d_den, std::size_t budget)
        -> vector<ReductionInstance>
    {
        if (d_num < d_den)
            throw InputError("distortion must be at least 1");
        auto dg = all_pairs_distances(g);
        auto dh = all_pairs_distances(h);
        int64_t max_p = std::max<int64_t>(1, dg.diameter());
        int64_t max_q = std::max<int64_t>(1, std::min<int64_t>(dh.diameter(), int64_t(h.n()) * g.n()));

        vector<pair<int64_t, int64_t>> ratios{ { 1, 1 } };
        for (int64_t q = 1 ; q <= max_q ; ++q)
            for (int64_t p = 1 ; p <= max_p ; ++p)
                if (std::gcd(p, q) == 1 && ! (p == 1 && q == 1))
                    ratios.emplace_back(p, q);

        if (ratios.size() > budget)
            throw InputError("reduction would yield " + to_string(ratios.size()) + " instances, over the budget of " + to_string(budget));

        vector<ReductionInstance> result;
        for (auto [p, q] : ratios) {
            ReductionInstance inst;
            inst.host = subdivide_red_blue(h, int(p - 1));
            inst.guest_scale = int(q);
            inst.d_num = d_num;
            inst.d_den = d_den;
            inst.contraction = Rational(p, q);
            result.push_back(std::move(inst));
        }
        return result;
    }

    auto union_embedding(int guest_size, const vector<vector<pair<int, int>>> & parts) -> Embedding
    {
        Embedding f(guest_size);
        for (auto & part : parts)
            for (auto [x, a] : part) {
                if (x < 0 || x >= guest_size)
                    throw EmbeddingError("guest vertex " + to_string(x) + " out of range");
                if (f.image[x] != unmapped && f.image[x] != a)
                    throw EmbeddingError("conflict on guest vertex " + to_string(x) + ": mapped to both "
                            + to_string(f.image[x]) + " and " + to_string(a));
                f.image[x] = a;
            }
        return f;
    }

    auto longest_blue_run(const RedBlueHost & h) -> int
    {
        vector<bool> removed(h.graph.n());
        for (int v = 0 ; v < h.graph.n() ; ++v)
            removed[v] = h.red[v];
        int best = 0;
        for (auto & c : components_after_removal(h.graph, removed))
            best = std::max(best, int(c.size()));
        return best;
    }

    auto bijective_reduction_gate(const Graph &, const RedBlueHost & h, int d) -> bool
    {
        return longest_blue_run(h) <= d;
    }

    namespace
    {
        auto label(const vector<long long> & labels, int v) -> long long
        {
            return labels.empty() ? v : labels[v];
        }
    }

    auto embedding_to_json(const Embedding & f, const DistortionReport * report,
            const vector<long long> & guest_labels, const vector<long long> & host_labels) -> string
    {
        nlohmann::ordered_json doc;
        if (report) {
            doc["contraction"] = report->contraction.str();
            doc["distortion"] = report->distortion.str();
            doc["expansion"] = report->expansion.str();
        }
        vector<pair<long long, long long>> entries;
        for (int x = 0 ; x < f.size() ; ++x)
            if (f.mapped(x))
                entries.emplace_back(label(guest_labels, x), label(host_labels, f.image[x]));
        sort(entries.begin(), entries.end());
        nlohmann::ordered_json m = nlohmann::ordered_json::object();
        for (auto [x, a] : entries)
            m[to_string(x)] = a;
        doc["map"] = m;
        return doc.dump(2);
    }

    auto embedding_from_json(const string & text, int guest_size,
            const vector<long long> & guest_labels, const vector<long long> & host_labels) -> Embedding
    {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        }
        catch (const std::exception & e) {
            throw InputError(string("malformed embedding JSON: ") + e.what());
        }
        if (! doc.is_object() || ! doc.contains("map") || ! doc["map"].is_object())
            throw InputError("embedding JSON must contain a \"map\" object");

        auto lookup = [] (const vector<long long> & labels, long long l, const string & what) -> int {
            if (labels.empty())
                return int(l);
            auto it = std::find(labels.begin(), labels.end(), l);
            if (it == labels.end())
                throw InputError("unknown " + what + " label " + to_string(l));
            return int(it - labels.begin());
        };

        Embedding f(guest_size);
        for (auto & [key, value] : doc["map"].items()) {
            long long gl = 0;
            try {
                gl = std::stoll(key);
            }
            catch (const std::exception &) {
                throw InputError("non-numeric guest key '" + key + "'");
            }
            if (! value.is_number_integer())
                throw InputError("host image of guest " + key + " is not an integer");
            int x = lookup(guest_labels, gl, "guest");
            if (x < 0 || x >= guest_size)
                throw InputError("guest vertex " + key + " out of range");
            f.image[x] = lookup(host_labels, value.get<long long>(), "host");
        }
        return f;
    }

    auto embedding_to_dot(const Graph & h, const Embedding & f, const vector<bool> * red) -> string
    {
        vector<int> preimage(h.n(), -1);
        for (int x = 0 ; x < f.size() ; ++x)
            if (f.mapped(x) && f.image[x] >= 0 && f.image[x] < h.n())
                preimage[f.image[x]] = x;

        std::ostringstream out;
        out << "graph host {\n  node [shape=circle];\n";
        for (int v = 0 ; v < h.n() ; ++v) {
            out << "  " << v << " [";
            string colour = red ? ((*red)[v] ? "red" : "blue") : "black";
            out << "color=" << colour;
            if (preimage[v] >= 0)
                out << ", style=filled, fillcolor=lightgrey, label=\"" << v << "\\n<" << preimage[v] << ">\"";
            out << "];\n";
        }
        for (auto [u, v] : h.edges())
            out << "  " << u << " -- " << v << ";\n";
        out << "}\n";
        return out.str();
    }
}
