/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <nsd/cli.hh>
#include <nsd/colouring.hh>
#include <nsd/construct.hh>
#include <nsd/exact.hh>
#include <nsd/experiment.hh>
#include <nsd/graph.hh>
#include <nsd/lemma.hh>
#include <nsd/rng.hh>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

using std::string;
using std::vector;

namespace nsd
{
    namespace
    {
        using Json = nlohmann::ordered_json;

        auto write_file(const string & filename, const string & text) -> void
        {
            std::ofstream out{ filename, std::ios::binary };
            if (! out)
                throw ColouringError{ "cannot write '" + filename + "'" };
            out << text;
        }

        // pads by displayed characters, not bytes
        auto padded(const string & s, std::size_t width) -> string
        {
            std::size_t shown = std::count_if(s.begin(), s.end(), [] (char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; });
            return s + string(shown < width ? width - shown : 0, ' ');
        }

        struct Options
        {
            bool json = false;
            string graph, colouring, out, spec, mode = "permissive";
            vector<string> descriptor;
            std::uint64_t seed = 0;
            bool seed_given = false;
            double slack = 2.0;
            int rounds = 1000, retries = 3, k_max = 0;
            bool timing = false;
        };

        auto cmd_verify(const Options & o, std::ostream & out) -> int
        {
            auto g = read_graph_file(o.graph);
            auto c = read_colouring_file(o.colouring, g);
            auto proper = check_proper(g, c);
            auto sums = check_nsd(g, c);
            bool valid = proper.empty() && sums.empty();

            if (o.json) {
                Json j;
                j["valid"] = valid;
                j["span"] = c.span();
                j["proper_violations"] = proper.size();
                j["sum_violations"] = sums.size();
                Json list = Json::array();
                for (auto & v : proper)
                    list.push_back(Json::parse(violation_to_json(g, v)));
                for (auto & v : sums)
                    list.push_back(Json::parse(violation_to_json(g, v)));
                j["violations"] = list;
                out << j.dump() << "\n";
            }
            else {
                for (auto & v : proper)
                    out << violation_to_json(g, v) << "\n";
                for (auto & v : sums)
                    out << violation_to_json(g, v) << "\n";
                out << (valid ? "valid" : "invalid") << " span " << c.span() << "\n";
            }
            return valid ? exit_success : exit_failure;
        }

        auto cmd_exact(const Options & o, std::ostream & out) -> int
        {
            auto g = read_graph_file(o.graph);
            Colour k_max = o.k_max > 0 ? o.k_max : g.max_degree() + 5;
            auto r = solve_exact(g, k_max);
            if (r && ! o.out.empty())
                write_file(o.out, colouring_to_string(g, r->witness));

            if (o.json) {
                Json j;
                j["n"] = g.vertex_count();
                j["m"] = g.edge_count();
                j["delta"] = g.max_degree();
                j["k_max"] = k_max;
                j["chi_sum_total"] = r ? Json(r->chi_sum_total) : Json(nullptr);
                j["nodes_explored"] = r ? r->nodes_explored : 0;
                j["delta_plus_3"] = g.max_degree() + 3;
                j["within_delta_plus_3"] = r && r->chi_sum_total <= g.max_degree() + 3;
                out << j.dump() << "\n";
            }
            else if (r)
                out << "chi_sum_total " << r->chi_sum_total << " (delta " << g.max_degree() << ", nodes " << r->nodes_explored << ")\n";
            else
                out << "no colouring with at most " << k_max << " colours\n";
            return r ? exit_success : exit_failure;
        }

        auto cmd_sweep(const Options & o, const string & family, std::ostream & out) -> int
        {
            auto graphs = parse_family(family);
            Colour k_max = o.k_max > 0 ? o.k_max : 0;
            if (k_max == 0)
                for (auto & g : graphs)
                    k_max = std::max(k_max, g.graph.max_degree() + 5);
            auto rows = conjecture_sweep(graphs, k_max);
            auto csv = sweep_csv(rows);
            if (! o.out.empty())
                write_file(o.out, csv);

            int violations = 0, errors = 0;
            for (auto & r : rows) {
                if (! r.error.empty())
                    ++errors;
                else if (! r.holds())
                    ++violations;
            }
            if (o.json) {
                Json j;
                j["graphs"] = rows.size();
                j["k_max"] = k_max;
                j["violations"] = violations;
                j["errors"] = errors;
                Json list = Json::array();
                for (auto & r : rows)
                    if (! r.error.empty() || ! r.holds())
                        list.push_back({ { "graph_id", r.graph_id }, { "error", r.error }, { "graph", graph_to_string(r.witness_graph) } });
                j["failures"] = list;
                out << j.dump() << "\n";
            }
            else if (o.out.empty())
                out << csv;
            else
                out << rows.size() << " graphs, " << violations << " violations, " << errors << " errors\n";
            return violations == 0 && errors == 0 ? exit_success : exit_failure;
        }

        auto cmd_lemma(const Options & o, std::ostream & out) -> int
        {
            auto g = read_graph_file(o.graph);
            auto requested = parse_mode(o.mode);
            auto used = requested;
            bool downgraded = false;
            if (requested == Mode::Strict && ! strict_feasibility(g.max_degree()).all()) {
                used = Mode::Permissive;
                downgraded = true;
            }
            auto p = LemmaParams::for_delta(g.max_degree(), used, o.slack);
            SParams sp{ p };
            auto one = resample_until_valid(g, p, sp, derive_seed(o.seed, 0), o.rounds);
            auto two = stage_two(g, one.state, p, derive_seed(o.seed, 1), o.rounds);

            if (o.json) {
                Json j;
                j["delta"] = p.delta;
                j["r1"] = p.r1;
                j["r2"] = p.r2;
                j["r3"] = p.r3;
                j["mode_requested"] = to_string(requested);
                j["mode_used"] = to_string(used);
                j["downgraded"] = downgraded;
                j["slack"] = o.slack;
                j["rounds"] = one.rounds + two.rounds;
                j["stage_one"] = { { "rounds", one.rounds }, { "exhausted", one.exhausted } };
                Json second;
                second["rounds"] = two.rounds;
                second["exhausted"] = two.exhausted;
                second["e1"] = two.stats.e1;
                second["e2"] = two.stats.e2;
                second["h3"] = two.stats.h3;
                second["max_degree_h3"] = two.stats.max_degree_h3;
                j["stage_two"] = second;
                j["report"] = Json::parse(report_to_json_string(two.report));
                out << j.dump() << "\n";
            }
            else {
                out << "delta " << p.delta << "  r1 " << p.r1 << "  r2 " << p.r2 << "  r3 " << p.r3
                    << "  mode " << to_string(used) << (downgraded ? " (downgraded)" : "") << "\n";
                for (auto & v : two.report.verdicts)
                    out << padded(to_string(v.id), 5) << (v.passed() ? "pass" : "FAIL")
                        << "  cap " << std::fixed << std::setprecision(3) << v.cap << "  violators " << v.violators.size() << "\n";
                out << "rounds " << one.rounds << " + " << two.rounds << "\n";
            }
            return two.report.all_pass() ? exit_success : exit_failure;
        }

        auto cmd_construct(const Options & o, std::ostream & out) -> int
        {
            auto g = read_graph_file(o.graph);
            ConstructConfig config{ o.seed, parse_mode(o.mode), o.slack, o.rounds, o.retries };
            auto r = construct(g, config);
            if (! o.out.empty())
                write_file(o.out, colouring_to_string(g, r.colouring));

            if (o.json)
                out << report_to_json_string(r.report) << "\n";
            else {
                out << (r.report.valid() ? "valid" : "invalid") << " span " << r.report.span << "  delta " << r.report.delta
                    << "  delta+3 " << r.report.delta + 3 << "  theorem bound " << std::fixed << std::setprecision(1) << r.report.theorem
                    << (r.report.fallback ? "  (fallback)" : "") << (r.report.downgraded ? "  (downgraded to permissive)" : "") << "\n";
                if (o.out.empty())
                    write_colouring(out, g, r.colouring);
            }
            return r.report.valid() ? exit_success : exit_failure;
        }

        auto cmd_experiment(const Options & o, std::ostream & out) -> int
        {
            auto spec = ExperimentSpec::from_file(o.spec);
            if (o.seed_given) {
                spec.base_seed = o.seed;
                spec.seeds.clear();
            }
            auto r = run_experiment(spec);
            if (! o.out.empty())
                write_experiment(r, o.out, o.timing);

            if (o.json)
                out << experiment_summary_json(r, o.timing) << "\n";
            else if (o.out.empty())
                out << experiment_csv(r, o.timing);
            else
                out << (spec.solver == "exact" ? r.sweep.size() : r.records.size()) << " runs, success rate "
                    << std::fixed << std::setprecision(4) << r.success_rate() << "\n";
            return r.success_rate() == 1.0 ? exit_success : exit_failure;
        }

        auto cmd_gen(const Options & o, std::ostream & out) -> int
        {
            string descriptor;
            for (auto & w : o.descriptor)
                descriptor += (descriptor.empty() ? "" : " ") + w;
            auto g = generate(descriptor);
            if (! o.out.empty())
                write_file(o.out, graph_to_string(g));
            if (o.json)
                out << Json{ { "descriptor", descriptor }, { "n", g.vertex_count() }, { "m", g.edge_count() }, { "delta", g.max_degree() } }.dump() << "\n";
            else if (o.out.empty())
                write_graph(out, g);
            return exit_success;
        }
    }

    auto run_cli(const vector<string> & args, std::ostream & out, std::ostream & err) -> int
    {
        CLI::App app{ "Neighbour sum distinguishing total colourings", "nsd" };
        app.require_subcommand(1);
        Options o;
        string family;

        auto json_flag = [&] (CLI::App * sub) { sub->add_flag("--json", o.json, "Machine-readable output"); };
        auto lemma_opts = [&] (CLI::App * sub) {
            sub->add_option("--seed", o.seed, "Random seed");
            sub->add_option("--mode", o.mode, "strict or permissive")->check(CLI::IsMember({ "strict", "permissive" }));
            sub->add_option("--slack", o.slack, "Cap multiplier in permissive mode")->check(CLI::Range(1.0, 1e9));
            sub->add_option("--rounds", o.rounds, "Resampling round budget")->check(CLI::Range(1, 1 << 30));
        };

        auto verify = app.add_subcommand("verify", "Check a colouring file against a graph");
        verify->add_option("--graph", o.graph, "Graph file")->required();
        verify->add_option("--colouring", o.colouring, "Colouring file")->required();
        json_flag(verify);

        auto exact = app.add_subcommand("exact", "Exact NSD total chromatic number of a small graph");
        exact->add_option("--graph", o.graph, "Graph file")->required();
        exact->add_option("--k-max", o.k_max, "Largest palette to try (default delta + 5)")->check(CLI::Range(1, 1000));
        exact->add_option("--out", o.out, "Write a witness colouring here");
        json_flag(exact);

        auto sweep = app.add_subcommand("sweep", "Check chi <= delta + 3 over a graph family");
        sweep->add_option("--family", family, "e.g. connected:5 or gen:cycle 7;labelled:3")->required();
        sweep->add_option("--k-max", o.k_max, "Largest palette to try")->check(CLI::Range(1, 1000));
        sweep->add_option("--out", o.out, "Write the CSV here");
        json_flag(sweep);

        auto lemma = app.add_subcommand("lemma", "Run the two-stage lemma sampler and report its properties");
        lemma->add_option("--graph", o.graph, "Graph file")->required();
        lemma_opts(lemma);
        json_flag(lemma);

        auto construct_cmd = app.add_subcommand("construct", "Build an NSD proper total colouring");
        construct_cmd->add_option("--graph", o.graph, "Graph file")->required();
        lemma_opts(construct_cmd);
        construct_cmd->add_option("--retries", o.retries, "Retries with doubled slack before the greedy fallback")->check(CLI::Range(0, 64));
        construct_cmd->add_option("--out", o.out, "Write the colouring here");
        json_flag(construct_cmd);

        auto experiment = app.add_subcommand("experiment", "Run a sweep described by a JSON spec");
        experiment->add_option("--spec", o.spec, "Experiment spec (JSON)")->required();
        experiment->add_option("--out", o.out, "Output directory");
        experiment->add_option("--seed", o.seed, "Base seed; per-run seeds are derived from it");
        experiment->add_flag("--timing", o.timing, "Include wall times (output is then not reproducible)");
        json_flag(experiment);

        auto gen = app.add_subcommand("gen", "Generate a graph");
        gen->add_option("descriptor", o.descriptor, "complete N | cycle N | path N | star N | random N P SEED | regular N D SEED")->required()->expected(1, 4);
        gen->add_option("--out", o.out, "Write the graph here");
        json_flag(gen);

        vector<string> reversed{ args.rbegin(), args.rend() };
        try {
            app.parse(std::move(reversed));
        }
        catch (const CLI::ParseError & e) {
            int code = app.exit(e, out, err);
            return code == 0 ? exit_success : exit_usage;
        }
        o.seed_given = experiment->count("--seed") > 0;

        try {
            if (*verify)
                return cmd_verify(o, out);
            if (*exact)
                return cmd_exact(o, out);
            if (*sweep)
                return cmd_sweep(o, family, out);
            if (*lemma)
                return cmd_lemma(o, out);
            if (*construct_cmd)
                return cmd_construct(o, out);
            if (*experiment)
                return cmd_experiment(o, out);
            if (*gen)
                return cmd_gen(o, out);
        }
        catch (const GraphError & e) {
            err << "error: " << e.what() << "\n";
            return exit_usage;
        }
        catch (const ColouringError & e) {
            err << "error: " << e.what() << "\n";
            return exit_usage;
        }
        catch (const ExperimentError & e) {
            err << "error: " << e.what() << "\n";
            return exit_usage;
        }
        catch (const LemmaError & e) {
            err << "error: " << e.what() << "\n";
            return exit_usage;
        }
        catch (const std::filesystem::filesystem_error & e) {
            err << "error: " << e.what() << "\n";
            return exit_usage;
        }
        catch (const std::exception & e) {
            err << "failed: " << e.what() << "\n";
            return exit_failure;
        }
        return exit_usage;
    }
}
