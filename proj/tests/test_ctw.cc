/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include "corpus.hh"

#include <metemb/ctw.hh>

#include <gtest/gtest.h>

#include <algorithm>

using namespace metemb;

using std::vector;

namespace
{
    auto connected_for(const Graph & h) -> ConnectedNiceDecomposition
    {
        auto dh = all_pairs_distances(h);
        return connectify(make_nice(default_tree_decomposition(h), h), h, dh);
    }

    auto as_embedding(const vector<int> & image) -> Embedding
    {
        Embedding f;
        f.image = image;
        return f;
    }

    struct Instance
    {
        Graph g, h;
        int d;
    };

    /// Instances with a known embedding, from the reference search.
    auto embedded_instances() -> vector<std::pair<Instance, Embedding>>
    {
        vector<std::pair<Instance, Embedding>> out;
        for (auto inst : { Instance{ path_graph(4), cycle_graph(6), 1 }, Instance{ path_graph(3), path_graph(6), 2 },
                Instance{ star_graph(3), star_graph(4), 2 }, Instance{ cycle_graph(4), cycle_graph(8), 2 },
                Instance{ path_graph(5), theta_graph({ 3, 3, 2 }), 2 }, Instance{ star_graph(3), path_graph(7), 2 } }) {
            auto dg = all_pairs_distances(inst.g), dh = all_pairs_distances(inst.h);
            auto image = metemb::test::reference_embed(dg, dh, inst.d);
            if (image)
                out.emplace_back(inst, as_embedding(*image));
        }
        return out;
    }
}

TEST(Beta, ThresholdAndIdempotence)
{
    EXPECT_EQ(beta(0, 2, 1), 0);
    EXPECT_EQ(beta(9, 2, 1), 9);
    EXPECT_EQ(beta(10, 2, 1), type_infinity);
    EXPECT_EQ(beta(2 * 3 + 3 * 2 + 3, 3, 2), type_infinity);
    EXPECT_EQ(beta(-4, 3, 2), -4);
    for (int k = -10 ; k < 30 ; ++k)
        EXPECT_EQ(beta(beta(k, 2, 2), 2, 2), beta(k, 2, 2));
    EXPECT_EQ(beta(type_infinity, 0, 1), type_infinity);
}

TEST(Connectify, TreesStayNarrowAndConnected)
{
    for (auto & t : metemb::test::all_trees(7)) {
        if (t.graph.n() < 2)
            continue;
        auto cnd = connected_for(t.graph);
        EXPECT_TRUE(bags_connected(cnd.ntd, t.graph));
        EXPECT_EQ(cnd.width, 1);
        EXPECT_LE(cnd.gamma, cnd.width);
    }
}

TEST(Connectify, GeodesicJoinsASplitBag)
{
    auto h = cycle_graph(6);
    auto dh = all_pairs_distances(h);
    TreeDecomposition td{ { { 0, 1, 2, 3 }, { 0, 3 }, { 0, 3, 4, 5 } }, { { 0, 1 }, { 1, 2 } } };
    td.validate(h);
    auto grown = connect_bags(td, h, dh);
    // the split bag grows along 0-1-2-3 (towards lower ids), not 0-5-4-3
    EXPECT_EQ(grown.bags[1], (vector<int>{ 0, 1, 2, 3 }));
    EXPECT_EQ(grown.bags[0], td.bags[0]);
    EXPECT_EQ(grown.bags[2], td.bags[2]);
    auto cnd = connectify(make_nice(td, h), h, dh);
    EXPECT_TRUE(bags_connected(cnd.ntd, h));
    cnd.ntd.validate(h);
    // 0 and 3 sit on both sides, so some intermediate bag holds a whole side plus a vertex
    EXPECT_GE(cnd.width, 4);
    EXPECT_LE(cnd.gamma, cnd.width);
}

TEST(Connectify, CyclesAndThetas)
{
    for (int n = 3 ; n <= 10 ; ++n) {
        auto h = cycle_graph(n);
        auto cnd = connected_for(h);
        EXPECT_TRUE(bags_connected(cnd.ntd, h)) << n;
        EXPECT_LE(cnd.gamma, cnd.width);
    }
    auto h = theta_graph({ 2, 3, 4 });
    auto cnd = connected_for(h);
    EXPECT_TRUE(bags_connected(cnd.ntd, h));
}

TEST(GeodesicCycle, SmallHosts)
{
    auto check = [] (const Graph & h) { return longest_geodesic_cycle(h, all_pairs_distances(h)); };
    EXPECT_EQ(check(cycle_graph(6)), 6);
    EXPECT_EQ(check(path_graph(5)), 0);
    EXPECT_EQ(check(complete_graph(4)), 3);
    EXPECT_EQ(check(theta_graph({ 2, 2, 2 })), 4);
    EXPECT_EQ(check(theta_graph({ 2, 5 })), 7);
}

TEST(States, CompatibilityExamples)
{
    for (auto & [inst, f] : embedded_instances()) {
        auto dg = all_pairs_distances(inst.g), dh = all_pairs_distances(inst.h);
        auto cnd = connected_for(inst.h);
        CtwContext c(inst.g, dg, inst.h, dh, cnd, inst.d);
        int perturbed = 0;
        for (int u = 0 ; u < int(cnd.ntd.nodes.size()) ; ++u) {
            auto s = c.state_from_embedding(f, u);
            auto & ns = c.neighbours(u);
            for (std::size_t j = 0 ; j < ns.size() ; ++j) {
                EXPECT_TRUE(c.compatible(s.f, ns[j], s.lists[j]));
                auto dom = c.domain_towards(s.f, ns[j]);
                if (dom.empty() || c.bag(u).empty())
                    continue;
                EXPECT_FALSE(c.compatible(s.f, ns[j], { }));
                // perturb one entry of every type: some domain vertex loses its profile
                CtwTypeList changed;
                for (auto t : s.lists[j]) {
                    t.values[0][0] += 1;
                    changed.insert(t);
                }
                EXPECT_FALSE(c.compatible(s.f, ns[j], changed));
                ++perturbed;
            }
        }
        EXPECT_GT(perturbed, 0);
    }
}

TEST(States, AgreementExamples)
{
    for (auto & [inst, f] : embedded_instances()) {
        auto dg = all_pairs_distances(inst.g), dh = all_pairs_distances(inst.h);
        auto cnd = connected_for(inst.h);
        CtwContext c(inst.g, dg, inst.h, dh, cnd, inst.d);
        for (int u = 0 ; u < int(cnd.ntd.nodes.size()) ; ++u) {
            auto s = c.state_from_embedding(f, u);
            EXPECT_TRUE(c.state_feasible(s)) << u;
            auto & ns = c.neighbours(u);
            for (std::size_t j = 0 ; j < ns.size() ; ++j)
                for (std::size_t k = j + 1 ; k < ns.size() ; ++k) {
                    EXPECT_TRUE(c.agree(s.f, ns[j], s.lists[j], ns[k], s.lists[k]));
                    EXPECT_TRUE(c.agree(s.f, ns[j], { }, ns[k], s.lists[k]));
                }
        }
    }
}

TEST(States, AgreementFailsForVeryNegativeTypes)
{
    // two far-apart guests on either side of a bag, both claiming the most negative value
    auto g = path_graph(5);
    auto h = path_graph(5);
    auto dg = all_pairs_distances(g), dh = all_pairs_distances(h);
    auto cnd = connected_for(h);
    CtwContext c(g, dg, h, dh, cnd, 1);
    Embedding f;
    f.image = { 0, 1, 2, 3, 4 };
    bool tested = false;
    for (int u = 0 ; u < int(cnd.ntd.nodes.size()) && ! tested ; ++u) {
        auto & ns = c.neighbours(u);
        if (ns.size() < 2 || c.bag(u).empty())
            continue;
        auto s = c.state_from_embedding(f, u);
        auto dv = c.domain_towards(s.f, ns[0]), dw = c.domain_towards(s.f, ns[1]);
        if (dv.empty() || dw.empty())
            continue;
        int low = -(c.gamma() + 1 + 1);
        CtwType t1{ vector<vector<int>>(c.bag(u).size(), vector<int>(dv.size(), low)) };
        CtwType t2{ vector<vector<int>>(c.bag(u).size(), vector<int>(dw.size(), low)) };
        bool separated = false;
        for (int x : dv)
            for (int y : dw)
                separated = separated || dg(x, y) > 2 * low;
        EXPECT_TRUE(separated);
        EXPECT_FALSE(c.agree(s.f, ns[0], { t1 }, ns[1], { t2 }));
        tested = true;
    }
    EXPECT_TRUE(tested);
}

TEST(States, SuccessionOfRestrictions)
{
    // states built from one embedding, and the effect of deleting a type
    std::uint64_t deletions_rejected = 0, deletions = 0, successions = 0, failures = 0;
    for (auto & [inst, f] : embedded_instances()) {
        auto dg = all_pairs_distances(inst.g), dh = all_pairs_distances(inst.h);
        auto cnd = connected_for(inst.h);
        CtwContext c(inst.g, dg, inst.h, dh, cnd, inst.d);
        for (int u = 0 ; u < int(cnd.ntd.nodes.size()) ; ++u)
            for (int v : cnd.ntd.nodes[u].children) {
                auto su = c.state_from_embedding(f, u), sv = c.state_from_embedding(f, v);
                EXPECT_TRUE(c.succeeds(su.f, sv.f));
                ++successions;
                if (! c.state_succeeds(su, sv)) {
                    ++failures;
                    continue;
                }
                // drop each type of the parent's list towards v in turn
                auto & ns = c.neighbours(u);
                int j = int(std::find(ns.begin(), ns.end(), v) - ns.begin());
                for (auto & t : su.lists[j]) {
                    auto reduced = su;
                    reduced.lists[j].erase(t);
                    ++deletions;
                    deletions_rejected += ! c.state_succeeds(reduced, sv);
                }
            }
    }
    EXPECT_GT(successions, 0u);
    EXPECT_EQ(failures, 0u);
    EXPECT_GT(deletions_rejected, 0u);
    EXPECT_LE(deletions_rejected, deletions);
}

TEST(States, DichotomyHoldsForReferenceEmbeddings)
{
    for (auto & [inst, f] : embedded_instances()) {
        auto dg = all_pairs_distances(inst.g), dh = all_pairs_distances(inst.h);
        auto cnd = connected_for(inst.h);
        CtwContext c(inst.g, dg, inst.h, dh, cnd, inst.d);
        EXPECT_EQ(c.dichotomy_violations(f), 0u);
    }
}

TEST(EmbedCtw, Examples)
{
    auto run = [] (const Graph & g, const Graph & h, int d) {
        auto dg = all_pairs_distances(g), dh = all_pairs_distances(h);
        return embed_ctw(g, dg, h, dh, connected_for(h), d);
    };
    EXPECT_EQ(run(path_graph(3), star_graph(3), 1).verdict, Verdict::Found);
    EXPECT_EQ(run(complete_graph(3), star_graph(3), 1).verdict, Verdict::Infeasible);
    EXPECT_EQ(run(path_graph(3), path_graph(5), 1).verdict, Verdict::Found);
    EXPECT_EQ(run(path_graph(4), cycle_graph(6), 1).verdict, Verdict::Found);
    EXPECT_EQ(run(cycle_graph(4), cycle_graph(4), 1).verdict, Verdict::Found);
    auto gated = run(star_graph(5), path_graph(8), 1);
    EXPECT_TRUE(gated.stats.gate_rejected);
    EXPECT_EQ(gated.verdict, Verdict::Infeasible);
}

TEST(EmbedCtw, CyclesIntoTreesMatchReference)
{
    auto g = cycle_graph(4);
    auto dg = all_pairs_distances(g);
    for (auto & t : metemb::test::all_trees(8)) {
        if (t.graph.n() < 4)
            continue;
        auto dh = all_pairs_distances(t.graph);
        auto cnd = connected_for(t.graph);
        for (int d = 1 ; d <= 3 ; ++d) {
            bool expected = metemb::test::reference_embed(dg, dh, d).has_value();
            EXPECT_EQ(embed_ctw(g, dg, t.graph, dh, cnd, d).verdict == Verdict::Found, expected) << t.name << " d=" << d;
        }
    }
}

TEST(EmbedCtw, MatchesReferenceOnSmallHosts)
{
    vector<Graph> hosts;
    for (auto & t : metemb::test::all_trees(7))
        if (t.graph.n() >= 2)
            hosts.push_back(t.graph);
    for (int n = 3 ; n <= 8 ; ++n)
        hosts.push_back(cycle_graph(n));
    hosts.push_back(theta_graph({ 2, 2, 2 }));
    hosts.push_back(theta_graph({ 2, 3, 3 }));
    int mismatches = 0, found = 0, total = 0;
    for (auto & h : hosts) {
        auto dh = all_pairs_distances(h);
        auto cnd = connected_for(h);
        for (int n = 1 ; n <= 5 ; ++n)
            for (auto & g : metemb::test::all_connected(n)) {
                auto dg = all_pairs_distances(g);
                for (int d = 1 ; d <= 2 ; ++d) {
                    bool expected = metemb::test::reference_embed(dg, dh, d).has_value();
                    auto r = embed_ctw(g, dg, h, dh, cnd, d);
                    mismatches += (r.verdict == Verdict::Found) != expected;
                    found += expected;
                    ++total;
                }
            }
    }
    EXPECT_EQ(mismatches, 0);
    EXPECT_GT(found, 0);
    EXPECT_GT(total, found);
}
