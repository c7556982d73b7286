/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include "corpus.hh"

#include <metemb/line_cycle.hh>
#include <metemb/theta.hh>

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>

using namespace metemb;

using std::optional;
using std::uint64_t;
using std::vector;

namespace
{
    auto bit(int v) -> uint64_t
    {
        return uint64_t(1) << v;
    }

    auto host_for(const vector<int> & arms, int d) -> ThetaHost
    {
        auto h = make_theta_host(arms);
        compute_balls(h, d);
        return h;
    }

    auto count(const vector<bool> & flags) -> int
    {
        return int(std::count(flags.begin(), flags.end(), true));
    }

    /// Every arm list with k arms of length 1..max_length, nondecreasing, at
    /// most one arm of length 1.
    auto theta_shapes(int k, int max_length) -> vector<vector<int>>
    {
        vector<vector<int>> out;
        vector<int> arms(k, 1);
        std::function<void (int, int)> rec = [&] (int i, int lo) {
            if (i == k) {
                if (std::count(arms.begin(), arms.end(), 1) <= 1)
                    out.push_back(arms);
                return;
            }
            for (int l = lo ; l <= max_length ; ++l) {
                arms[i] = l;
                rec(i + 1, l);
            }
        };
        rec(0, 1);
        return out;
    }

    /// Hosts long enough for the ball decomposition at the given distortion.
    auto long_hosts(int d) -> vector<vector<int>>
    {
        if (d == 1)
            return { { 6, 6 }, { 6, 7 }, { 5, 8 }, { 6, 6, 6 }, { 6, 7, 9 }, { 9, 9 }, { 5, 5, 6 } };
        return { { 20, 20 }, { 9, 20 }, { 20, 22 } };
    }

    auto guests_up_to(int max_n) -> vector<Graph>
    {
        vector<Graph> out;
        for (int n = 1 ; n <= max_n ; ++n)
            for (auto & g : metemb::test::all_connected(n))
                out.push_back(g);
        return out;
    }

    /// Arm positions along the arm as seen from the given end.
    auto oriented(const ThetaHost & h, int arm, ComponentRole role) -> vector<int>
    {
        auto seq = h.arms[arm];
        if (role == ComponentRole::T)
            std::reverse(seq.begin(), seq.end());
        return seq;
    }

    auto position(const vector<int> & seq, int v) -> int
    {
        return int(std::find(seq.begin(), seq.end(), v) - seq.begin());
    }

    /// The anchor map induced by an embedding.
    auto restriction(const ThetaHost & h, const Embedding & f) -> ThetaAnchor
    {
        auto region = anchored_region(h);
        ThetaAnchor psi;
        psi.image.assign(f.size(), unmapped);
        for (int x = 0 ; x < f.size() ; ++x)
            if (region[f.image[x]]) {
                psi.image[x] = f.image[x];
                psi.domain |= bit(x);
                if (h.ball_s[f.image[x]] || h.ball_t[f.image[x]])
                    psi.core |= bit(x);
            }
        return psi;
    }

    /// Lowest-id anchored guest in the component's end zone of its arm.
    auto zone_anchor(const ThetaHost & h, const ThetaAnchor & psi, const ResidualComponent & c) -> int
    {
        auto seq = oriented(h, c.arm, c.role);
        int zone = position(seq, c.role == ComponentRole::S ? h.s_end[c.arm] : h.t_end[c.arm]);
        int a = -1;
        for (int x = 0 ; x < int(psi.image.size()) ; ++x)
            if (psi.image[x] != unmapped && position(seq, psi.image[x]) < zone && (a == -1 || x < a))
                a = x;
        return a;
    }

    auto pair_fits(const DistanceMatrix & dg, int d, int x, int y, int host) -> bool
    {
        return dg(x, y) <= host && host <= d * dg(x, y);
    }

    /// Brute-force shortest placement: the least arm position of `last`
    /// (counted from the component's end) such that the component's free
    /// guests fit injectively on the inner part of the arm no further out,
    /// every pair of C u S_i holds along the arm, and `last` holds against
    /// every anchored guest on the host.
    auto reference_shortest(const DistanceMatrix & dg, const ThetaHost & h, const ThetaAnchor & psi,
            const ResidualComponent & c, int last, int d) -> optional<int>
    {
        auto seq = oriented(h, c.arm, c.role);
        int zone = position(seq, c.role == ComponentRole::S ? h.s_end[c.arm] : h.t_end[c.arm]);
        int far = position(seq, c.role == ComponentRole::S ? h.t_end[c.arm] : h.s_end[c.arm]);
        vector<std::pair<int, int>> placed;    // guest, arm position
        for (int x = 0 ; x < int(psi.image.size()) ; ++x)
            if (psi.image[x] != unmapped && position(seq, psi.image[x]) < zone)
                placed.emplace_back(x, position(seq, psi.image[x]));
        vector<int> free;
        for (int x = 0 ; x < int(psi.image.size()) ; ++x)
            if ((c.vertices & bit(x)) && psi.image[x] == unmapped && x != last)
                free.push_back(x);

        auto fits = [&] (int x, int p) {
            for (auto & [y, q] : placed)
                if (q == p || ! pair_fits(dg, d, x, y, std::abs(p - q)))
                    return false;
            return true;
        };
        for (int top = zone ; top <= far ; ++top) {
            bool ok = fits(last, top);
            for (int y = 0 ; y < int(psi.image.size()) && ok ; ++y)
                if (psi.image[y] != unmapped && ! pair_fits(dg, d, last, y, h.dh(seq[top], psi.image[y])))
                    ok = false;
            if (! ok)
                continue;
            placed.emplace_back(last, top);
            std::function<bool (std::size_t)> place = [&] (std::size_t i) {
                if (i == free.size())
                    return true;
                for (int p = zone ; p < top ; ++p)
                    if (fits(free[i], p)) {
                        placed.emplace_back(free[i], p);
                        if (place(i + 1))
                            return true;
                        placed.pop_back();
                    }
                return false;
            };
            if (place(0))
                return top;
            placed.pop_back();
        }
        return std::nullopt;
    }
}

TEST(Balls, SizesAndContainment)
{
    auto h = host_for({ 10, 10 }, 1);
    EXPECT_EQ(count(h.ball_s), 3);
    EXPECT_EQ(count(h.ball_t), 3);
    for (int d = 1 ; d <= 3 ; ++d) {
        auto g = host_for({ 4, 7, 30 }, d);
        for (int v = 0 ; v < g.graph.n() ; ++v) {
            EXPECT_TRUE(! g.ball_s[v] || g.wide_s[v]);
            EXPECT_TRUE(! g.ball_t[v] || g.wide_t[v]);
        }
    }
}

TEST(Balls, ShortArmsAreFlaggedAndLeftWithoutInnerPart)
{
    auto h = host_for({ 5, 6, 9 }, 1);
    EXPECT_TRUE(h.short_arm[0]);
    EXPECT_TRUE(h.inner[0].empty());
    EXPECT_EQ(h.s_end[0], -1);
    EXPECT_FALSE(h.short_arm[1]);
    ASSERT_EQ(h.inner[1].size(), 1u);
    EXPECT_EQ(h.s_end[1], h.arms[1][3]);
    EXPECT_EQ(h.t_end[1], h.arms[1][3]);
    EXPECT_EQ(h.inner[2].size(), 4u);
    EXPECT_FALSE(wide_balls_overlap(h));
    EXPECT_TRUE(wide_balls_overlap(host_for({ 4, 9 }, 1)));

    auto h2 = host_for({ 19, 20 }, 2);
    EXPECT_TRUE(h2.short_arm[0]);
    EXPECT_FALSE(h2.short_arm[1]);
    EXPECT_EQ(h2.truncated[1].size(), 15u);
}

TEST(Psi, IdentityAppearsForTheHostItself)
{
    auto h = host_for({ 3, 3 }, 1);
    auto dg = h.dh;
    bool seen = false;
    enumerate_psi(h.graph, dg, h, 1, [&] (const ThetaAnchor & psi) {
        bool identity = true;
        for (int x = 0 ; x < h.graph.n() ; ++x)
            identity = identity && psi.image[x] == x;
        seen = seen || identity;
        return ! seen;
    });
    EXPECT_TRUE(seen);
}

TEST(Psi, CountsMatchDirectFilter)
{
    struct Case
    {
        Graph g;
        vector<int> arms;
        int d;
    };
    for (auto & c : { Case{ cycle_graph(6), { 3, 3 }, 1 }, Case{ path_graph(4), { 6, 7 }, 1 },
            Case{ star_graph(3), { 6, 6 }, 1 }, Case{ cycle_graph(4), { 5, 8 }, 1 } }) {
        auto h = host_for(c.arms, c.d);
        auto dg = all_pairs_distances(c.g);
        int n = c.g.n(), hn = h.graph.n();
        auto region = anchored_region(h);
        bool has_free = count(region) < hn;

        uint64_t yielded = 0;
        enumerate_psi(c.g, dg, h, c.d, [&] (const ThetaAnchor &) { ++yielded; return true; });

        // every map from guests to (region + "beyond"), filtered by the stated conditions
        uint64_t expected = 0;
        vector<int> image(n, unmapped);
        std::function<void (int)> rec = [&] (int x) {
            if (x == n) {
                for (int a = 0 ; a < n ; ++a)
                    for (int b = a + 1 ; b < n ; ++b) {
                        if (image[a] != unmapped && image[a] == image[b])
                            return;
                        if (image[a] != unmapped && image[b] != unmapped
                                && ! pair_fits(dg, c.d, a, b, h.dh(image[a], image[b])))
                            return;
                    }
                for (int a = 0 ; a < n ; ++a)
                    for (int b = 0 ; b < n ; ++b)
                        if (image[a] == unmapped && image[b] != unmapped) {
                            int reach = 1 << 29;
                            for (int v = 0 ; v < hn ; ++v)
                                if (! region[v])
                                    reach = std::min<int>(reach, h.dh(image[b], v));
                            if (reach > c.d * dg(a, b))
                                return;
                        }
                ++expected;
                return;
            }
            for (int v = 0 ; v < hn ; ++v)
                if (region[v]) {
                    image[x] = v;
                    rec(x + 1);
                }
            if (has_free) {
                image[x] = unmapped;
                rec(x + 1);
            }
        };
        rec(0);
        EXPECT_EQ(yielded, expected);
        EXPECT_GT(yielded, 0u);
    }
}

TEST(Configurations, NoResidualComponents)
{
    auto h = host_for({ 6, 7, 9 }, 1);
    auto g = path_graph(3);
    ThetaAnchor psi;
    psi.image = { h.arms[1][1], h.s, h.arms[0][1] };
    psi.domain = 7;
    psi.core = 7;
    auto confs = enumerate_configurations(g, psi, h, 1);
    ASSERT_EQ(confs.size(), 1u);
    EXPECT_TRUE(confs[0].plans.empty());
    EXPECT_EQ(confs[0].empty_arms, (vector<int>{ 0, 1, 2 }));
}

TEST(Configurations, OneSComponentOnTwoArms)
{
    auto h = host_for({ 20, 20 }, 2);
    auto g = path_graph(10);
    ThetaAnchor psi;
    psi.image.assign(10, unmapped);
    psi.image[0] = h.s;
    for (int x = 1 ; x <= 4 ; ++x)
        psi.image[x] = h.arms[0][2 * x];
    psi.domain = 0b11111;
    psi.core = 0b11;
    auto comps = classify_components(g, h, psi);
    ASSERT_TRUE(comps.has_value());
    ASSERT_EQ(comps->size(), 1u);
    EXPECT_EQ((*comps)[0].role, ComponentRole::S);
    EXPECT_EQ((*comps)[0].vertices, uint64_t(0b1111111100));

    auto confs = enumerate_configurations(g, psi, h, 2);
    ASSERT_GE(confs.size(), 1u);
    EXPECT_LE(confs.size(), 2u);
    ASSERT_EQ(confs[0].plans.size(), 1u);
    EXPECT_EQ(confs[0].plans[0].arm, 0);
    EXPECT_EQ(confs[0].plans[0].form, 1);
    EXPECT_EQ(confs[0].empty_arms, vector<int>{ 1 });
}

TEST(Configurations, RoleTags)
{
    auto h = host_for({ 6, 7 }, 1);
    // a path anchored near s on arm 0 and near t on the same arm: one full component
    auto g = path_graph(7);
    ThetaAnchor psi;
    psi.image = { h.s, h.arms[0][1], h.arms[0][2], unmapped, unmapped, h.arms[0][4], h.arms[0][5] };
    psi.domain = 0b1100111;
    psi.core = 0b1000011;
    auto comps = classify_components(g, h, psi);
    ASSERT_TRUE(comps.has_value());
    ASSERT_EQ(comps->size(), 1u);
    EXPECT_EQ((*comps)[0].role, ComponentRole::Full);
    auto confs = enumerate_configurations(g, psi, h, 1);
    ASSERT_EQ(confs.size(), 1u);
    EXPECT_EQ(confs[0].plans[0].form, 4);

    // a tail hanging off t only
    auto g2 = path_graph(4);
    ThetaAnchor psi2;
    psi2.image = { h.t, h.arms[1][5], unmapped, unmapped };
    psi2.domain = 0b11;
    psi2.core = 0b01;
    auto comps2 = classify_components(g2, h, psi2);
    ASSERT_TRUE(comps2.has_value());
    ASSERT_EQ(comps2->size(), 1u);
    EXPECT_EQ((*comps2)[0].role, ComponentRole::T);
    EXPECT_EQ((*comps2)[0].arm, 1);

    // an unanchored component next to the core cannot be placed
    ThetaAnchor psi3;
    psi3.image = { h.t, unmapped, unmapped, unmapped };
    psi3.domain = 0b1;
    psi3.core = 0b1;
    EXPECT_FALSE(classify_components(g2, h, psi3).has_value());
}

TEST(Configurations, TooManyResidualComponents)
{
    // hub on s with five legs; every leg continues beyond the wide ball
    auto h = host_for({ 20, 20 }, 2);
    vector<std::pair<int, int>> edges;
    for (int j = 0 ; j < 5 ; ++j) {
        int a = 1 + 3 * j;
        edges.emplace_back(0, a);
        edges.emplace_back(a, a + 1);
        edges.emplace_back(a + 1, a + 2);
    }
    auto g = Graph::from_edges(16, edges);
    ThetaAnchor psi;
    psi.image.assign(16, unmapped);
    psi.image[0] = h.s;
    int firsts[] = { h.arms[0][1], h.arms[0][2], h.arms[1][1], h.arms[1][2], h.t };
    int seconds[] = { h.arms[0][3], h.arms[0][4], h.arms[1][3], h.arms[1][4], h.arms[0][17] };
    for (int j = 0 ; j < 5 ; ++j) {
        psi.image[1 + 3 * j] = firsts[j];
        psi.image[2 + 3 * j] = seconds[j];
    }
    for (int x = 0 ; x < 16 ; ++x)
        if (psi.image[x] != unmapped) {
            psi.domain |= bit(x);
            if (h.ball_s[psi.image[x]] || h.ball_t[psi.image[x]])
                psi.core |= bit(x);
        }
    auto comps = classify_components(g, h, psi);
    ASSERT_TRUE(comps.has_value());
    EXPECT_EQ(comps->size(), 5u);
    EXPECT_TRUE(enumerate_configurations(g, psi, h, 2).empty());
}

TEST(LastVertex, ThresholdExamples)
{
    auto p = path_graph(6);
    auto dp = all_pairs_distances(p);
    EXPECT_EQ(last_vertex_candidates(bit(3), 0, dp, 1), vector<int>{ 3 });
    EXPECT_EQ(last_vertex_candidates(0b111110, 0, dp, 1), (vector<int>{ 4, 5 }));
    EXPECT_EQ(last_vertex_candidates(0b111110, 0, dp, 2), (vector<int>{ 1, 2, 3, 4, 5 }));
}

TEST(LastVertex, ContainsEveryTrueLastVertex)
{
    uint64_t checked = 0;
    for (int d = 1 ; d <= 2 ; ++d)
        for (auto & arms : long_hosts(d)) {
            auto h = host_for(arms, d);
            auto guests = guests_up_to(d == 1 ? 6 : 5);
            for (int n = 6 ; n <= 12 ; ++n) {
                guests.push_back(path_graph(n));
                guests.push_back(cycle_graph(n));
            }
            for (auto & g : guests) {
                auto dg = all_pairs_distances(g);
                auto image = metemb::test::reference_embed(dg, h.dh, d);
                if (! image)
                    continue;
                Embedding f;
                f.image = *image;
                auto psi = restriction(h, f);
                auto comps = classify_components(g, h, psi);
                ASSERT_TRUE(comps.has_value());
                for (auto & c : *comps) {
                    if (c.role == ComponentRole::Full)
                        continue;
                    int end = c.role == ComponentRole::S ? h.s : h.t;
                    int far = 0;
                    for (int x = 0 ; x < g.n() ; ++x)
                        if (c.vertices & bit(x))
                            far = std::max<int>(far, h.dh(end, f.image[x]));
                    int a = zone_anchor(h, psi, c);
                    ASSERT_NE(a, -1);
                    auto cands = last_vertex_candidates(c.vertices & ~psi.domain, a, dg, d);
                    EXPECT_FALSE(cands.empty());
                    for (int x = 0 ; x < g.n() ; ++x)
                        if ((c.vertices & bit(x)) && h.dh(end, f.image[x]) == far) {
                            EXPECT_NE(std::find(cands.begin(), cands.end(), x), cands.end());
                            ++checked;
                        }
                }
            }
        }
    EXPECT_GT(checked, 10u);
}

TEST(Shortest, ForcedSingleStep)
{
    auto h = host_for({ 8, 8 }, 1);
    auto g = path_graph(4);
    auto dg = all_pairs_distances(g);
    ThetaAnchor psi;
    psi.image = { h.s, h.arms[0][1], h.arms[0][2], unmapped };
    psi.domain = 0b111;
    psi.core = 0b011;
    auto comps = classify_components(g, h, psi);
    ASSERT_TRUE(comps.has_value());
    ASSERT_EQ(comps->size(), 1u);
    auto r = shortest_component_embedding(g, dg, h, psi, (*comps)[0], 3, 1);
    ASSERT_EQ(r.verdict, Verdict::Found);
    EXPECT_EQ(r.placement.length, 3);
    ASSERT_EQ(r.placement.map.size(), 1u);
    EXPECT_EQ(r.placement.map[0], std::make_pair(3, h.arms[0][3]));
}

TEST(Shortest, MatchesBruteForceMinimum)
{
    uint64_t compared = 0, found = 0;
    for (int d = 1 ; d <= 2 ; ++d)
        for (auto & arms : long_hosts(d)) {
            auto h = host_for(arms, d);
            for (auto & g : guests_up_to(5)) {
                auto dg = all_pairs_distances(g);
                int budget = 40;
                enumerate_psi(g, dg, h, d, [&] (const ThetaAnchor & psi) {
                    for (auto & conf : enumerate_configurations(g, psi, h, d))
                        for (auto & c : conf.components) {
                            if (c.role == ComponentRole::Full)
                                continue;
                            int a = zone_anchor(h, psi, c);
                            for (int last : last_vertex_candidates(c.vertices & ~psi.domain, a, dg, d)) {
                                auto r = shortest_component_embedding(g, dg, h, psi, c, last, d);
                                auto expected = reference_shortest(dg, h, psi, c, last, d);
                                EXPECT_EQ(r.verdict == Verdict::Found, expected.has_value());
                                if (expected && r.verdict == Verdict::Found) {
                                    EXPECT_EQ(r.placement.length, *expected);
                                    EXPECT_GE(r.placement.length + 1, std::popcount(c.vertices));
                                    ++found;
                                }
                                ++compared;
                            }
                        }
                    return --budget > 0;
                });
            }
        }
    EXPECT_GT(compared, 100u);
    EXPECT_GT(found, 20u);
}

TEST(EmbedTheta, Examples)
{
    auto h = host_for({ 3, 3 }, 1);
    auto r = embed_into_theta(h.graph, h.dh, h, 1);
    EXPECT_EQ(r.verdict, Verdict::Found);

    auto h3 = make_theta_host({ 3, 3, 3 });
    auto c6 = cycle_graph(6);
    auto dc6 = all_pairs_distances(c6);
    auto r6 = embed_into_theta(c6, dc6, h3, 1);
    ASSERT_EQ(r6.verdict, Verdict::Found);
    EXPECT_FALSE(verify_nc_distortion(c6, h3.graph, dc6, h3.dh, r6.embedding, 1).has_value());
    EXPECT_TRUE(metemb::test::reference_embed(dc6, h3.dh, 1).has_value());

    auto star = star_graph(4);
    auto ds = all_pairs_distances(star);
    auto h5 = make_theta_host({ 5, 5, 5 });
    for (int d = 1 ; d <= 3 ; ++d) {
        auto rs = embed_into_theta(star, ds, h5, d);
        EXPECT_EQ(rs.verdict == Verdict::Found, metemb::test::reference_embed(ds, h5.dh, d).has_value()) << "d=" << d;
    }
}

TEST(EmbedTheta, InputErrorsAndGate)
{
    auto h = make_theta_host({ 6, 6 });
    auto two = Graph::from_edges(3, { { 0, 1 } });
    EXPECT_THROW(embed_into_theta(two, all_pairs_distances(two), h, 1), InputError);
    auto p = path_graph(3);
    EXPECT_THROW(embed_into_theta(p, all_pairs_distances(p), h, 0), InputError);
    EXPECT_THROW(make_theta_host({ 1, 1, 4 }), InputError);

    auto star = star_graph(4);
    auto r = embed_into_theta(star, all_pairs_distances(star), host_for({ 30, 30 }, 1), 1);
    EXPECT_EQ(r.verdict, Verdict::Infeasible);
    EXPECT_TRUE(r.stats.gate_rejected);
    EXPECT_EQ(r.stats.anchors, 0u);
}

TEST(EmbedTheta, TwoArmsAgreeWithCycleSolver)
{
    for (auto & arms : { vector<int>{ 3, 4 }, vector<int>{ 6, 7 }, vector<int>{ 2, 5 } })
        for (auto & g : guests_up_to(5))
            for (int d = 1 ; d <= 2 ; ++d) {
                auto dg = all_pairs_distances(g);
                ThetaOptions options;
                options.cross_check_cycle = true;
                auto r = embed_into_theta(g, dg, make_theta_host(arms), d, options);
                EXPECT_TRUE(r.stats.cycle_cross_checked || r.stats.gate_rejected);
            }
}

TEST(EmbedTheta, MatchesReferenceOnShortArms)
{
    auto guests = guests_up_to(6);
    uint64_t instances = 0, found = 0;
    for (int k = 2 ; k <= 3 ; ++k)
        for (auto & arms : theta_shapes(k, 5))
            for (int d = 1 ; d <= 2 ; ++d) {
                auto h = host_for(arms, d);
                for (auto & g : guests) {
                    auto dg = all_pairs_distances(g);
                    auto r = embed_into_theta(g, dg, h, d);
                    auto expected = metemb::test::reference_embed(dg, h.dh, d);
                    ASSERT_EQ(r.verdict == Verdict::Found, expected.has_value());
                    if (r.verdict == Verdict::Found) {
                        EXPECT_FALSE(verify_nc_distortion(g, h.graph, dg, h.dh, r.embedding, d).has_value());
                        ++found;
                    }
                    ++instances;
                }
            }
    EXPECT_GT(found, 1000u);
    EXPECT_GT(instances, 5000u);
}

TEST(EmbedTheta, MatchesReferenceOnLongArms)
{
    uint64_t instances = 0, assembled = 0;
    for (int d = 1 ; d <= 2 ; ++d)
        for (auto & arms : long_hosts(d)) {
            auto h = host_for(arms, d);
            vector<Graph> guests = guests_up_to(d == 1 ? 6 : 5);
            for (int n = 6 ; n <= 13 ; ++n) {
                guests.push_back(path_graph(n));
                guests.push_back(cycle_graph(n));
            }
            for (auto & g : guests) {
                auto dg = all_pairs_distances(g);
                auto r = embed_into_theta(g, dg, h, d);
                auto expected = metemb::test::reference_embed(dg, h.dh, d);
                ASSERT_EQ(r.verdict == Verdict::Found, expected.has_value());
                ++instances;
                if (r.verdict != Verdict::Found)
                    continue;
                EXPECT_FALSE(verify_nc_distortion(g, h.graph, dg, h.dh, r.embedding, d).has_value());
                if (r.stats.line_calls > 0)
                    ++assembled;

                // every residual component lies on one arm
                auto psi = restriction(h, r.embedding);
                if (auto comps = classify_components(g, h, psi))
                    for (auto & c : *comps)
                        for (int x = 0 ; x < g.n() ; ++x)
                            if (c.vertices & bit(x))
                                EXPECT_NE(std::find(h.arms[c.arm].begin(), h.arms[c.arm].end(), r.embedding.image[x]),
                                        h.arms[c.arm].end());
            }
        }
    EXPECT_GT(instances, 500u);
    EXPECT_GT(assembled, 20u);
}
