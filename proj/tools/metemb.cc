/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <metemb/ctw.hh>
#include <metemb/embedding.hh>
#include <metemb/graph.hh>
#include <metemb/line_cycle.hh>
#include <metemb/oracle.hh>
#include <metemb/theta.hh>
#include <metemb/treewidth.hh>

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace metemb;

using std::cerr;
using std::cout;
using std::int64_t;
using std::optional;
using std::string;
using std::uint64_t;
using std::vector;

using std::chrono::duration_cast;
using std::chrono::milliseconds;
using std::chrono::steady_clock;

namespace
{
    enum ExitCode
    {
        exit_found = 0,
        exit_infeasible = 1,
        exit_input_error = 2,
        exit_budget = 3,
        exit_internal_error = 4
    };

    /// Raised when a solver's witness fails the independent check.
    class InternalError : public std::runtime_error
    {
        public:
            explicit InternalError(const string & what) :
                std::runtime_error(what)
            {
            }
    };

    struct Host
    {
        string spec;
        HostSpec parsed;
        Graph graph;
        DistanceMatrix dh;
        vector<long long> labels;       // empty for generated hosts
    };

    struct Guest
    {
        string path;
        Graph graph;
        DistanceMatrix dg;
        vector<long long> labels;
    };

    struct Distortion
    {
        bool rational = false;
        int d = 1;                      // when not rational
        Rational value;
    };

    struct Outcome
    {
        string solver;
        Verdict verdict = Verdict::Infeasible;
        Embedding embedding;            // host vertex ids of Host::graph
        uint64_t nodes = 0;
        optional<Rational> contraction; // for the reduction pipeline
    };

    struct Settings
    {
        string solver = "auto";
        bool bijective = false;
        bool weighted = false;
        string td_path;
        SearchBudget budget;
    };

    auto load_host(const string & text) -> Host
    {
        Host host;
        host.spec = text;
        if (text.rfind("file:", 0) == 0) {
            auto parsed = parse_edge_list_file(text.substr(5), false);
            host.parsed.family = HostFamily::General;
            host.parsed.graph = parsed.graph;
            host.graph = parsed.graph;
            host.labels = parsed.original_label;
        }
        else {
            host.parsed = parse_host_spec(text);
            validate_host_spec(host.parsed);
            host.graph = generate(host.parsed);
        }
        host.dh = all_pairs_distances(host.graph);
        return host;
    }

    auto load_guest(const string & path, bool weighted) -> Guest
    {
        Guest guest;
        guest.path = path;
        auto parsed = parse_guest_file(path, weighted);
        guest.graph = parsed.graph;
        guest.labels = parsed.original_label;
        guest.dg = all_pairs_distances(guest.graph);
        return guest;
    }

    auto parse_distortion(const string & text) -> Distortion
    {
        Distortion d;
        if (text.find('/') != string::npos) {
            d.rational = true;
            d.value = Rational::parse(text);
            if (d.value < Rational(1))
                throw InputError("distortion must be at least 1");
            return d;
        }
        d.value = Rational::parse(text);
        if (d.value.den() != 1 || d.value < Rational(1) || d.value.num() > 1'000'000)
            throw InputError("distortion '" + text + "' must be an integer between 1 and 1000000");
        d.d = int(d.value.num());
        return d;
    }

    /// The solver --solver auto picks: by flags first, then by host family.
    auto choose_solver(const Settings & s, const Host & host, const Distortion & d) -> string
    {
        if (s.solver != "auto")
            return s.solver;
        if (d.rational)
            return "reduction";
        if (s.bijective)
            return "tw";
        switch (host.parsed.family) {
            case HostFamily::Cycle: return "cycle";
            case HostFamily::Path: return "line";
            case HostFamily::Theta: return "theta";
            case HostFamily::General: return "ctw";
        }
        return "oracle";
    }

    auto check_compatible(const string & solver, const Settings & s, const Host & host, const Guest & guest, const Distortion & d) -> void
    {
        static const std::set<string> known{ "cycle", "line", "tw", "ctw", "theta", "oracle", "reduction" };
        if (! known.contains(solver))
            throw InputError("unknown solver '" + solver + "'");
        if (d.rational && solver != "reduction" && solver != "oracle")
            throw InputError("a rational distortion is solved by the reduction pipeline; use --solver auto or oracle");
        if (! d.rational && solver == "reduction")
            throw InputError("the reduction solver needs a rational distortion a/b");
        if (guest.graph.weighted() && solver != "cycle" && solver != "oracle")
            throw InputError("weighted guests are supported by the cycle and oracle solvers only");
        if (guest.graph.weighted() && d.rational)
            throw InputError("weighted guests need an integer distortion");
        if (s.bijective && solver != "tw" && solver != "oracle" && solver != "reduction")
            throw InputError("--bijective is supported by the tw and oracle solvers only");
        if (solver == "tw" && ! s.bijective)
            throw InputError("the tw solver decides bijective embeddings; pass --bijective");
        if (solver == "cycle" && host.parsed.family != HostFamily::Cycle)
            throw InputError("the cycle solver needs a cycle:N host");
        if (solver == "line" && host.parsed.family != HostFamily::Path)
            throw InputError("the line solver needs a path:N host");
        if (solver == "theta" && host.parsed.family != HostFamily::Theta)
            throw InputError("the theta solver needs a theta:l1,...,lk host");
        if ((solver == "tw" || solver == "ctw") && ! host.graph.connected())
            throw InputError("decomposition solvers need a connected host");
    }

    auto host_decomposition(const Settings & s, const Host & host) -> NiceTreeDecomposition
    {
        TreeDecomposition td;
        if (s.td_path.empty())
            td = default_tree_decomposition(host.graph);
        else {
            td = parse_pace_td_file(s.td_path);
            td.validate(host.graph);
        }
        return make_nice(td, host.graph);
    }

    auto from_line(const LineCycleResult & r, Outcome & out) -> void
    {
        out.verdict = r.verdict;
        if (r.verdict == Verdict::Found) {
            out.embedding = r.embedding;
            for (auto & p : out.embedding.image)
                p -= 1;
        }
    }

    auto run_solver(const string & solver, const Settings & s, const Host & host, const Guest & guest, const Distortion & d) -> Outcome
    {
        check_compatible(solver, s, host, guest, d);
        Outcome out;
        out.solver = solver;
        auto & g = guest.graph;
        auto & dg = guest.dg;

        if (solver == "reduction") {
            auto r = reduction_embed(g, host.graph, d.value.num(), d.value.den(), s.bijective, s.budget);
            out.verdict = r.verdict;
            out.embedding = r.witness;
            out.nodes = r.nodes;
            if (r.verdict == Verdict::Found)
                out.contraction = r.contraction;
        }
        else if (solver == "oracle") {
            if (d.rational) {
                OracleProblem p;
                p.dg = &dg;
                p.dh = &host.dh;
                p.d_num = d.value.num();
                p.d_den = d.value.den();
                p.bijective = s.bijective;
                auto r = solve_oracle(p, s.budget);
                out.verdict = r.verdict;
                out.embedding = r.witness;
                out.nodes = r.nodes;
            }
            else {
                auto r = brute_force_embed(g, dg, host.graph, host.dh, d.d, s.bijective, nullptr, s.budget);
                out.verdict = r.verdict;
                out.embedding = r.witness;
                out.nodes = r.nodes;
            }
        }
        else if (solver == "cycle" || solver == "line") {
            SweepStats stats;
            LineCycleOptions options;
            options.budget = s.budget;
            options.stats = &stats;
            if (solver == "cycle") {
                auto r = g.weighted()
                    ? embed_weighted_into_cycle(g, dg, host.parsed.size, d.d, options)
                    : embed_into_cycle(g, dg, host.parsed.size, d.d, options);
                out.verdict = r.verdict;
                out.embedding = r.embedding;
            }
            else
                from_line(embed_into_line(g, dg, host.parsed.size, d.d, options), out);
            out.nodes = stats.anchors + stats.windows + stats.scan_nodes;
        }
        else if (solver == "theta") {
            ThetaOptions options;
            options.budget = s.budget;
            auto r = embed_into_theta(g, dg, make_theta_host(host.parsed.arms), d.d, options);
            out.verdict = r.verdict;
            out.embedding = r.embedding;
            out.nodes = r.stats.anchors + r.stats.configurations + r.stats.line_calls;
        }
        else if (solver == "tw") {
            auto ntd = host_decomposition(s, host);
            auto r = bijective_embed_tw(g, dg, host.graph, host.dh, ntd, d.d);
            out.verdict = r.verdict;
            out.embedding = r.embedding;
            out.nodes = r.stats.candidates;
        }
        else if (solver == "ctw") {
            auto cnd = connectify(host_decomposition(s, host), host.graph, host.dh);
            CtwOptions options;
            options.budget = s.budget;
            auto r = embed_ctw(g, dg, host.graph, host.dh, cnd, d.d, options);
            out.verdict = r.verdict;
            out.embedding = r.embedding;
            out.nodes = r.stats.states;
        }

        if (out.verdict == Verdict::Found) {
            if (d.rational) {
                auto report = distortion_report(g, host.graph, dg, host.dh, out.embedding);
                if (report.distortion > d.value)
                    throw InternalError(solver + " returned a witness of distortion " + report.distortion.str());
            }
            else if (auto v = verify_nc_distortion(g, host.graph, dg, host.dh, out.embedding, d.d))
                throw InternalError(solver + " returned an invalid witness: " + v->describe());
            if (s.bijective && ! (g.n() == host.graph.n() && out.embedding.injective()))
                throw InternalError(solver + " returned a witness that is not bijective");
        }
        return out;
    }

    auto write_file(const string & path, const string & text) -> void
    {
        std::ofstream out(path);
        if (! out)
            throw InputError("cannot write '" + path + "'");
        out << text;
    }

    auto read_file(const string & path) -> string
    {
        std::ifstream in(path);
        if (! in)
            throw InputError("cannot read '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    auto report_outcome(const Outcome & out, const Host & host, const Guest & guest, const string & dot_path) -> int
    {
        switch (out.verdict) {
            case Verdict::Found: {
                auto report = distortion_report(guest.graph, host.graph, guest.dg, host.dh, out.embedding);
                cout << embedding_to_json(out.embedding, &report, guest.labels, host.labels) << "\n";
                if (! dot_path.empty())
                    write_file(dot_path, embedding_to_dot(host.graph, out.embedding));
                return exit_found;
            }
            case Verdict::Infeasible:
                cout << "infeasible\n";
                return exit_infeasible;
            case Verdict::BudgetExceeded:
                cout << "budget exceeded\n";
                return exit_budget;
        }
        return exit_internal_error;
    }

    auto budget_from(uint64_t max_nodes, int64_t time_limit_ms) -> SearchBudget
    {
        SearchBudget b;
        b.max_nodes = max_nodes;
        b.max_time = milliseconds(time_limit_ms);
        return b;
    }

    auto thread_count() -> unsigned
    {
        unsigned n = std::max(1u, std::thread::hardware_concurrency());
        if (auto env = std::getenv("EMBED_THREADS")) {
            try {
                int requested = std::stoi(env);
                if (requested >= 1)
                    n = unsigned(requested);
            }
            catch (const std::exception &) {
                throw InputError(string("EMBED_THREADS must be a positive integer, not '") + env + "'");
            }
        }
        return n;
    }

    /// Random connected graph: a random spanning tree plus extra edges, with
    /// maximum degree at most max_degree (when at least 2).
    auto random_connected_graph(int n, int extra, int max_degree, uint64_t seed) -> Graph
    {
        std::mt19937_64 rng(seed);
        vector<std::pair<int, int>> edges;
        vector<int> degree(n);
        auto room = [&] (int v) { return max_degree < 2 || degree[v] < max_degree; };
        for (int v = 1 ; v < n ; ++v) {
            vector<int> options;
            for (int u = 0 ; u < v ; ++u)
                if (room(u))
                    options.push_back(u);
            int u = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
            edges.emplace_back(u, v);
            ++degree[u];
            ++degree[v];
        }
        std::set<std::pair<int, int>> have(edges.begin(), edges.end());
        for (int tries = 0 ; extra > 0 && tries < 100 * (extra + 1) && n >= 2 ; ++tries) {
            std::uniform_int_distribution<int> pick(0, n - 1);
            int a = pick(rng), b = pick(rng);
            if (a == b)
                continue;
            auto e = std::minmax(a, b);
            if (have.contains(e) || ! room(a) || ! room(b))
                continue;
            have.insert(e);
            edges.push_back(e);
            ++degree[a];
            ++degree[b];
            --extra;
        }
        return Graph::from_edges(n, edges);
    }

    auto edge_list(const Graph & g) -> string
    {
        std::ostringstream out;
        out << "# " << g.n() << " vertices, " << g.m() << " edges\n";
        if (g.n() == 1 && g.m() == 0)
            out << "# isolated vertex 0\n";
        for (auto & e : g.weighted_edges()) {
            out << e.u << " " << e.v;
            if (g.weighted())
                out << " " << e.w;
            out << "\n";
        }
        return out.str();
    }

    auto csv_field(const string & s) -> string
    {
        if (s.find_first_of(",\"\n") == string::npos)
            return s;
        string out = "\"";
        for (char c : s) {
            if (c == '"')
                out += '"';
            out += c;
        }
        return out + "\"";
    }
}

auto main(int argc, char * argv[]) -> int
{
    CLI::App app{ "Non-contracting low-distortion embeddings of graphs into structured hosts" };
    app.require_subcommand(1);

    Settings settings;
    string graph_path, host_text, distortion_text, dot_path, embedding_path;
    uint64_t max_nodes = 0;
    int64_t time_limit_ms = 0;

    auto add_budget = [&] (CLI::App * cmd) {
        cmd->add_option("--max-nodes", max_nodes, "Node budget for exhaustive searches (0 = unlimited)");
        cmd->add_option("--time-limit", time_limit_ms, "Time budget in milliseconds (0 = unlimited)");
    };

    auto solve = app.add_subcommand("solve", "Decide an instance and print an embedding as JSON");
    solve->add_option("--graph", graph_path, "Guest edge list")->required();
    solve->add_option("--host", host_text, "cycle:N, path:N, theta:l1,...,lk or file:PATH")->required();
    solve->add_option("--distortion", distortion_text, "Integer d, or a/b for the reduction pipeline")->required();
    solve->add_option("--td", settings.td_path, "PACE tree decomposition of the host");
    solve->add_flag("--bijective", settings.bijective, "Require a bijection onto the host");
    solve->add_flag("--weighted", settings.weighted, "Accept edge weights in the guest");
    solve->add_option("--solver", settings.solver, "auto, cycle, line, tw, ctw, theta or oracle")
        ->check(CLI::IsMember({ "auto", "cycle", "line", "tw", "ctw", "theta", "oracle" }));
    solve->add_option("--dot", dot_path, "Write the host with the embedding as DOT");
    add_budget(solve);

    auto verify = app.add_subcommand("verify", "Check an embedding JSON against the distortion bound");
    verify->add_option("--graph", graph_path, "Guest edge list")->required();
    verify->add_option("--host", host_text, "Host spec")->required();
    verify->add_option("--embedding", embedding_path, "Embedding JSON")->required();
    verify->add_option("--distortion", distortion_text, "Integer d (non-contracting) or a/b (any scale)")->required();
    verify->add_flag("--weighted", settings.weighted, "Accept edge weights in the guest");

    int max_distortion = 0;
    auto oracle = app.add_subcommand("oracle", "Decide an instance by exhaustive search");
    oracle->add_option("--graph", graph_path, "Guest edge list")->required();
    oracle->add_option("--host", host_text, "Host spec")->required();
    auto oracle_d = oracle->add_option("--distortion", distortion_text, "Integer d or a/b");
    auto oracle_min = oracle->add_option("--min-distortion", max_distortion, "Find the least integer d up to this bound");
    oracle_d->excludes(oracle_min);
    oracle->add_flag("--bijective", settings.bijective, "Require a bijection onto the host");
    oracle->add_flag("--weighted", settings.weighted, "Accept edge weights in the guest");
    oracle->add_option("--dot", dot_path, "Write the host with the embedding as DOT");
    add_budget(oracle);

    string gen_host, td_out, out_path;
    int gen_random = 0, gen_extra = 0, gen_max_degree = 0;
    uint64_t gen_seed = 1;
    auto gen = app.add_subcommand("gen", "Write a host or a random connected guest as an edge list");
    auto gen_h = gen->add_option("--host", gen_host, "Host spec to realize");
    auto gen_r = gen->add_option("--random", gen_random, "Random connected guest on this many vertices")->check(CLI::Range(1, 64));
    gen_h->excludes(gen_r);
    gen->add_option("--extra-edges", gen_extra, "Edges beyond a spanning tree (random guests)");
    gen->add_option("--max-degree", gen_max_degree, "Degree cap (random guests; 0 = none)");
    gen->add_option("--seed", gen_seed, "Seed (random guests)");
    gen->add_option("--td-out", td_out, "Also write a PACE tree decomposition of the graph");
    gen->add_option("--out", out_path, "Output file (default: standard output)");

    vector<string> bench_graphs, bench_hosts, bench_solvers{ "auto", "oracle" };
    vector<int> bench_ds{ 1, 2 };
    auto bench = app.add_subcommand("bench", "Run every combination and print CSV timings");
    bench->add_option("--graph", bench_graphs, "Guest edge lists")->required();
    bench->add_option("--host", bench_hosts, "Host specs")->required();
    bench->add_option("--distortion", bench_ds, "Integer distortions")->check(CLI::PositiveNumber);
    bench->add_option("--solver", bench_solvers, "Solvers to compare")
        ->check(CLI::IsMember({ "auto", "cycle", "line", "tw", "ctw", "theta", "oracle" }));
    bench->add_flag("--bijective", settings.bijective, "Bijective instances");
    add_budget(bench);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_input_error;
    }

    settings.budget = budget_from(max_nodes, time_limit_ms);

    try {
        if (solve->parsed()) {
            auto host = load_host(host_text);
            auto guest = load_guest(graph_path, settings.weighted);
            auto d = parse_distortion(distortion_text);
            auto out = run_solver(choose_solver(settings, host, d), settings, host, guest, d);
            return report_outcome(out, host, guest, dot_path);
        }

        if (verify->parsed()) {
            auto host = load_host(host_text);
            auto guest = load_guest(graph_path, settings.weighted);
            auto d = parse_distortion(distortion_text);
            auto f = embedding_from_json(read_file(embedding_path), guest.graph.n(), guest.labels, host.labels);
            // a rational bound allows any scale, so only structural faults count
            auto v = verify_nc_distortion(guest.graph, host.graph, guest.dg, host.dh, f, d.rational ? 1 : d.d);
            bool structural = v && (v->kind == ViolationKind::NotTotal || v->kind == ViolationKind::NotInjective
                    || v->kind == ViolationKind::OutsideCodomain);
            if (d.rational && ! structural)
                v.reset();
            if (! structural) {
                auto report = distortion_report(guest.graph, host.graph, guest.dg, host.dh, f);
                cout << "expansion " << report.expansion.str() << "\n";
                cout << "contraction " << report.contraction.str() << "\n";
                cout << "distortion " << report.distortion.str() << "\n";
                if (d.rational && report.distortion > d.value) {
                    cout << "violation: distortion " << report.distortion.str() << " exceeds " << d.value.str() << "\n";
                    return exit_infeasible;
                }
            }
            if (v) {
                auto label = [&] (int x) { return guest.labels.empty() ? (long long) x : guest.labels[x]; };
                auto text = v->describe();
                cout << "violation: " << text;
                if (v->u >= 0 && v->v >= 0)
                    cout << " (guest labels " << label(v->u) << ", " << label(v->v) << ")";
                cout << "\n";
                return exit_infeasible;
            }
            cout << "ok\n";
            return exit_found;
        }

        if (oracle->parsed()) {
            auto host = load_host(host_text);
            auto guest = load_guest(graph_path, settings.weighted);
            if (max_distortion > 0) {
                if (settings.bijective)
                    throw InputError("--min-distortion searches injective embeddings only");
                auto r = min_distortion_integer(guest.graph, guest.dg, host.graph, host.dh, max_distortion, settings.budget);
                if (r.budget_exceeded) {
                    cout << "budget exceeded\n";
                    return exit_budget;
                }
                if (! r.d) {
                    cout << "infeasible up to distortion " << max_distortion << "\n";
                    return exit_infeasible;
                }
                cerr << "least distortion " << *r.d << "\n";
                Outcome out;
                out.verdict = Verdict::Found;
                out.embedding = r.witness;
                return report_outcome(out, host, guest, dot_path);
            }
            if (distortion_text.empty())
                throw InputError("oracle needs --distortion or --min-distortion");
            auto d = parse_distortion(distortion_text);
            settings.solver = "oracle";
            auto out = run_solver("oracle", settings, host, guest, d);
            return report_outcome(out, host, guest, dot_path);
        }

        if (gen->parsed()) {
            Graph g;
            if (! gen_host.empty())
                g = load_host(gen_host).graph;
            else if (gen_random > 0)
                g = random_connected_graph(gen_random, gen_extra, gen_max_degree, gen_seed);
            else
                throw InputError("gen needs --host or --random");
            auto text = edge_list(g);
            if (out_path.empty())
                cout << text;
            else
                write_file(out_path, text);
            if (! td_out.empty())
                write_file(td_out, write_pace_td(default_tree_decomposition(g), g.n()));
            return 0;
        }

        if (bench->parsed()) {
            struct Job
            {
                string graph, host, solver;
                int d;
            };
            vector<Job> jobs;
            for (auto & gp : bench_graphs)
                for (auto & hs : bench_hosts)
                    for (int d : bench_ds)
                        for (auto & s : bench_solvers)
                            jobs.push_back(Job{ gp, hs, s, d });

            // load everything up front so that input errors stop the run
            std::map<string, Guest> guests;
            std::map<string, Host> hosts;
            for (auto & gp : bench_graphs)
                guests.emplace(gp, load_guest(gp, false));
            for (auto & hs : bench_hosts)
                hosts.emplace(hs, load_host(hs));

            vector<string> rows(jobs.size());
            std::atomic<std::size_t> next{ 0 };
            auto worker = [&] {
                for (std::size_t i ; (i = next++) < jobs.size() ; ) {
                    auto & job = jobs[i];
                    auto & host = hosts.at(job.host);
                    auto & guest = guests.at(job.graph);
                    Distortion d;
                    d.d = job.d;
                    d.value = Rational(job.d);
                    string solver = job.solver, verdict;
                    uint64_t nodes = 0;
                    auto start = steady_clock::now();
                    try {
                        solver = choose_solver(Settings{ job.solver, settings.bijective, false, "", settings.budget }, host, d);
                        auto out = run_solver(solver, settings, host, guest, d);
                        verdict = to_string(out.verdict);
                        nodes = out.nodes;
                    }
                    catch (const InputError &) {
                        verdict = "unsupported";
                    }
                    catch (const std::exception &) {
                        verdict = "error";
                    }
                    auto millis = duration_cast<milliseconds>(steady_clock::now() - start).count();
                    string instance = job.graph + "|" + job.host + "|d=" + std::to_string(job.d) + (settings.bijective ? "|bijective" : "");
                    rows[i] = csv_field(instance) + "," + csv_field(job.solver == "auto" ? "auto:" + solver : solver) + ","
                        + verdict + "," + std::to_string(nodes) + "," + std::to_string(millis);
                }
            };
            unsigned threads = std::min<unsigned>(thread_count(), std::max<std::size_t>(1, jobs.size()));
            vector<std::thread> pool;
            for (unsigned t = 1 ; t < threads ; ++t)
                pool.emplace_back(worker);
            worker();
            for (auto & t : pool)
                t.join();

            cout << "instance,solver,verdict,nodes,millis\n";
            for (auto & r : rows)
                cout << r << "\n";
            return 0;
        }
    }
    catch (const InputError & e) {
        cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    catch (const EmbeddingError & e) {
        cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    catch (const InternalError & e) {
        cerr << "internal error: " << e.what() << "\n";
        return exit_internal_error;
    }
    catch (const std::logic_error & e) {
        cerr << "internal error: " << e.what() << "\n";
        return exit_internal_error;
    }
    catch (const std::exception & e) {
        cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return 0;
}
