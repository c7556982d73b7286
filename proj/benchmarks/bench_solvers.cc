/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <metemb/ctw.hh>
#include <metemb/graph.hh>
#include <metemb/line_cycle.hh>
#include <metemb/oracle.hh>
#include <metemb/theta.hh>
#include <metemb/treewidth.hh>

#include <benchmark/benchmark.h>

using namespace metemb;

namespace
{
    /// A caterpillar: a spine of length n / 2 with one leaf on each spine vertex.
    auto caterpillar(int n) -> Graph
    {
        int spine = n / 2;
        std::vector<std::pair<int, int>> edges;
        for (int i = 0 ; i + 1 < spine ; ++i)
            edges.emplace_back(i, i + 1);
        for (int i = 0 ; i < n - spine ; ++i)
            edges.emplace_back(i % spine, spine + i);
        return Graph::from_edges(n, edges);
    }

    auto cycle_sweep(benchmark::State & state)
    {
        int n = int(state.range(0)), size = int(state.range(1));
        auto g = path_graph(n);
        auto dg = all_pairs_distances(g);
        SweepStats stats;
        LineCycleOptions options;
        options.stats = &stats;
        for (auto _ : state)
            benchmark::DoNotOptimize(embed_into_cycle(g, dg, size, 2, options));
        state.counters["anchors"] = benchmark::Counter(double(stats.anchors), benchmark::Counter::kAvgIterations);
    }

    auto cycle_infeasible(benchmark::State & state)
    {
        // the caterpillar needs distortion 3 on a cycle; d = 2 forces a full search
        auto g = caterpillar(int(state.range(0)));
        auto dg = all_pairs_distances(g);
        for (auto _ : state)
            benchmark::DoNotOptimize(embed_into_cycle(g, dg, int(state.range(1)), 2));
    }

    auto theta_long_arms(benchmark::State & state)
    {
        int n = int(state.range(0));
        auto g = cycle_graph(n);
        auto dg = all_pairs_distances(g);
        auto h = make_theta_host({ 6, 7, 9 });
        for (auto _ : state)
            benchmark::DoNotOptimize(embed_into_theta(g, dg, h, 1));
    }

    auto treewidth_bijective(benchmark::State & state)
    {
        int n = int(state.range(0));
        auto g = cycle_graph(n);
        auto h = cycle_graph(n);
        auto dg = all_pairs_distances(g), dh = all_pairs_distances(h);
        auto ntd = make_nice(default_tree_decomposition(h), h);
        for (auto _ : state)
            benchmark::DoNotOptimize(bijective_embed_tw(g, dg, h, dh, ntd, 2));
    }

    auto ctw_tree_host(benchmark::State & state)
    {
        int n = int(state.range(0));
        auto g = path_graph(n);
        auto h = caterpillar(2 * n);
        auto dg = all_pairs_distances(g), dh = all_pairs_distances(h);
        auto cnd = connectify(make_nice(default_tree_decomposition(h), h), h, dh);
        for (auto _ : state)
            benchmark::DoNotOptimize(embed_ctw(g, dg, h, dh, cnd, 2));
    }

    auto oracle_cycle(benchmark::State & state)
    {
        int n = int(state.range(0)), size = int(state.range(1));
        auto g = path_graph(n);
        auto h = cycle_graph(size);
        auto dg = all_pairs_distances(g), dh = all_pairs_distances(h);
        for (auto _ : state)
            benchmark::DoNotOptimize(brute_force_embed(g, dg, h, dh, 2));
    }
}

BENCHMARK(cycle_sweep)->Args({ 6, 20 })->Args({ 8, 24 })->Args({ 10, 30 })->Unit(benchmark::kMillisecond);
BENCHMARK(cycle_infeasible)->Args({ 6, 14 })->Args({ 8, 18 })->Unit(benchmark::kMillisecond);
BENCHMARK(theta_long_arms)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK(treewidth_bijective)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK(ctw_tree_host)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(oracle_cycle)->Args({ 6, 20 })->Args({ 8, 24 })->Args({ 10, 30 })->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
