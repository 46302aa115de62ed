/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <nsd/experiment.hh>
#include <nsd/rng.hh>

#include <json.hpp>

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

using std::string;
using std::vector;

namespace nsd
{
    namespace
    {
        template <typename T_>
        auto take(const nlohmann::json & j, const char * key, T_ & into) -> void
        {
            if (! j.contains(key))
                return;
            try {
                into = j.at(key).get<T_>();
            }
            catch (const nlohmann::json::exception &) {
                throw ExperimentError{ string{ "bad value for '" } + key + "'" };
            }
        }
    }

    auto ExperimentSpec::from_json(const string & text) -> ExperimentSpec
    {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::parse_error & e) {
            throw ExperimentError{ string{ "experiment spec is not valid JSON: " } + e.what() };
        }
        if (! j.is_object())
            throw ExperimentError{ "experiment spec must be a JSON object" };

        static const std::set<string> known{ "name", "solver", "family", "grid", "seeds", "base_seed", "runs_per_graph",
            "mode", "slack", "rounds", "retries", "k_max", "time_budget", "workers" };
        for (auto & [key, value] : j.items())
            if (! known.count(key))
                throw ExperimentError{ "unknown key '" + key + "' in experiment spec" };

        ExperimentSpec s;
        take(j, "name", s.name);
        take(j, "solver", s.solver);
        take(j, "family", s.family);
        if (j.contains("grid")) {
            auto & grid = j.at("grid");
            if (! grid.is_object())
                throw ExperimentError{ "'grid' must be an object" };
            take(grid, "n", s.grid_n);
            take(grid, "delta", s.grid_delta);
            take(grid, "graph_seed", s.graph_seed);
            if (s.grid_n.empty() || s.grid_delta.empty())
                throw ExperimentError{ "'grid' needs non-empty 'n' and 'delta' lists" };
        }
        take(j, "seeds", s.seeds);
        take(j, "base_seed", s.base_seed);
        take(j, "runs_per_graph", s.runs_per_graph);
        string mode = to_string(s.mode);
        take(j, "mode", mode);
        try {
            s.mode = parse_mode(mode);
        }
        catch (const LemmaError & e) {
            throw ExperimentError{ e.what() };
        }
        take(j, "slack", s.slack);
        take(j, "rounds", s.rounds);
        take(j, "retries", s.retries);
        take(j, "k_max", s.k_max);
        take(j, "time_budget", s.time_budget);
        take(j, "workers", s.workers);

        if (s.solver != "construct" && s.solver != "exact")
            throw ExperimentError{ "solver must be 'construct' or 'exact'" };
        if (s.family.empty() && s.grid_n.empty())
            throw ExperimentError{ "experiment spec has no graphs" };
        if (j.contains("seeds") && s.seeds.empty())
            throw ExperimentError{ "'seeds' must not be empty" };
        if (s.runs_per_graph < 1)
            throw ExperimentError{ "'runs_per_graph' must be at least 1" };
        if (! (s.slack >= 1.0))
            throw ExperimentError{ "'slack' must be at least 1" };
        if (s.rounds < 1 || s.retries < 0 || s.workers < 0 || s.k_max < 1)
            throw ExperimentError{ "'rounds', 'retries', 'workers' or 'k_max' out of range" };
        return s;
    }

    auto ExperimentSpec::from_file(const string & filename) -> ExperimentSpec
    {
        std::ifstream in{ filename };
        if (! in)
            throw ExperimentError{ "cannot open experiment spec '" + filename + "'" };
        std::stringstream text;
        text << in.rdbuf();
        return from_json(text.str());
    }

    auto grid_probability(int n, int delta) -> double
    {
        // mean degree mu with mu + 3 sqrt(mu) = delta
        double root = (-3.0 + std::sqrt(9.0 + 4.0 * delta)) / 2.0;
        return root * root / (n - 1);
    }

    auto experiment_graphs(const ExperimentSpec & spec) -> vector<NamedGraph>
    {
        vector<NamedGraph> result;
        for (auto & f : spec.family) {
            vector<NamedGraph> more;
            try {
                more = parse_family(f);
            }
            catch (const GraphError & e) {
                throw ExperimentError{ e.what() };
            }
            result.insert(result.end(), more.begin(), more.end());
        }

        std::uint64_t index = 0;
        for (int n : spec.grid_n)
            for (int delta : spec.grid_delta) {
                if (n < 2 || delta < 1 || delta >= n)
                    continue;
                auto seed = derive_seed(spec.graph_seed, index++);
                result.push_back({ "G" + std::to_string(n) + "-D" + std::to_string(delta),
                        random_graph(n, grid_probability(n, delta), seed) });
            }
        if (result.empty())
            throw ExperimentError{ "experiment grid produced no graphs" };
        return result;
    }

    auto ExperimentResult::success_rate() const -> double
    {
        if (spec.solver == "exact") {
            if (sweep.empty())
                return 0.0;
            return static_cast<double>(std::count_if(sweep.begin(), sweep.end(), [] (auto & r) { return r.holds(); })) / sweep.size();
        }
        if (records.empty())
            return 0.0;
        return static_cast<double>(std::count_if(records.begin(), records.end(), [] (auto & r) { return r.ok(); })) / records.size();
    }

    auto run_experiment(const ExperimentSpec & spec) -> ExperimentResult
    {
        ExperimentResult result;
        result.spec = spec;
        result.graphs = experiment_graphs(spec);

        if (spec.solver == "exact") {
            result.sweep = conjecture_sweep(result.graphs, spec.k_max);
            return result;
        }

        int per_graph = spec.seeds.empty() ? spec.runs_per_graph : static_cast<int>(spec.seeds.size());
        int runs = static_cast<int>(result.graphs.size()) * per_graph;
        result.records.resize(runs);
        int workers = spec.workers > 0 ? spec.workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
        for (int i = 0; i < runs; ++i) {
            auto & record = result.records[i];
            auto & graph = result.graphs[i / per_graph];
            record.run = i;
            record.graph_index = i / per_graph;
            record.graph_id = graph.id;
            record.seed = spec.seeds.empty() ? derive_seed(spec.base_seed, i) : spec.seeds[i % per_graph];

            ConstructConfig config{ record.seed, spec.mode, spec.slack, spec.rounds, spec.retries };
            auto start = std::chrono::steady_clock::now();
            try {
                auto c = construct(graph.graph, config);
                record.report = std::move(c.report);
                record.colouring = std::move(c.colouring);
            }
            catch (const std::exception & e) {
                record.error = e.what();
                record.report.n = graph.graph.vertex_count();
                record.report.m = graph.graph.edge_count();
                record.report.delta = graph.graph.max_degree();
            }
            record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
        return result;
    }

    namespace
    {
        auto fixed(double value, int digits = 6) -> string
        {
            std::ostringstream out;
            out.setf(std::ios::fixed);
            out.precision(digits);
            out << value;
            return out.str();
        }

        auto verdict(const RunRecord & r) -> string
        {
            if (! r.error.empty())
                return "error";
            return r.report.valid() ? "valid" : "INVALID";
        }

        auto file_stem(const string & id) -> string
        {
            string s = id;
            for (auto & c : s)
                if (! std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.')
                    c = '_';
            return s;
        }

        auto colouring_file(const RunRecord & r) -> string
        {
            return "colourings/run-" + std::to_string(r.run) + ".col";
        }

        auto graph_file(const string & id) -> string
        {
            return "graphs/" + file_stem(id) + ".graph";
        }
    }

    auto experiment_csv(const ExperimentResult & r, bool timing) -> string
    {
        if (r.spec.solver == "exact")
            return sweep_csv(r.sweep);

        std::ostringstream out;
        out << "run,graph-id,n,m,delta,seed,mode,slack,span,delta_plus_3,theorem_bound,span_over_delta,"
            "lemma_pass,fallback,proper_violations,sum_violations,verdict";
        if (timing)
            out << ",wall_seconds,within_budget";
        out << "\n";
        for (auto & rec : r.records) {
            auto & rep = rec.report;
            double ratio = rep.delta > 0 ? static_cast<double>(rep.span) / rep.delta : 0.0;
            out << rec.run << "," << rec.graph_id << "," << rep.n << "," << rep.m << "," << rep.delta << "," << rec.seed << ","
                << to_string(rep.mode_used) << "," << fixed(rep.slack_used, 3) << "," << rep.span << "," << rep.delta + 3 << ","
                << fixed(theorem_bound(rep.delta), 3) << "," << fixed(ratio, 4) << ","
                << (rep.lemma_properties_pass ? "yes" : "no") << "," << (rep.fallback ? "yes" : "no") << ","
                << rep.proper_violations << "," << rep.sum_violations << "," << verdict(rec);
            if (timing)
                out << "," << fixed(rec.wall_seconds, 3) << "," << (rec.wall_seconds <= r.spec.time_budget ? "yes" : "no");
            out << "\n";
        }
        return out.str();
    }

    auto experiment_summary_json(const ExperimentResult & r, bool timing) -> string
    {
        nlohmann::ordered_json j;
        j["schema_version"] = summary_schema_version;
        j["name"] = r.spec.name;
        j["solver"] = r.spec.solver;
        j["graphs"] = r.graphs.size();

        if (r.spec.solver == "exact") {
            int violations = 0, errors = 0;
            for (auto & row : r.sweep) {
                if (! row.error.empty())
                    ++errors;
                else if (! row.holds())
                    ++violations;
            }
            j["runs"] = r.sweep.size();
            j["violations"] = violations;
            j["errors"] = errors;
            j["success_rate"] = r.success_rate();
            return j.dump(2);
        }

        double max_ratio = 0.0;
        int fallbacks = 0, errors = 0, downgraded = 0;
        std::map<string, int> over_cap;
        vector<string> order;
        int with_caps = 0;
        for (auto & rec : r.records) {
            auto & rep = rec.report;
            if (! rec.error.empty())
                ++errors;
            fallbacks += rep.fallback;
            downgraded += rep.downgraded;
            if (rep.delta > 0 && rec.error.empty())
                max_ratio = std::max(max_ratio, static_cast<double>(rep.span) / rep.delta);
            if (! rep.caps.empty())
                ++with_caps;
            for (auto & c : rep.caps) {
                if (! over_cap.count(c.property)) {
                    over_cap[c.property] = 0;
                    order.push_back(c.property);
                }
                if (c.observed > c.cap)
                    ++over_cap[c.property];
            }
        }

        j["runs"] = r.records.size();
        j["success_rate"] = r.success_rate();
        j["errors"] = errors;
        j["fallbacks"] = fallbacks;
        j["downgraded"] = downgraded;
        j["max_span_over_delta"] = max_ratio;
        nlohmann::ordered_json freq = nlohmann::ordered_json::object();
        for (auto & p : order)
            freq[p] = with_caps ? static_cast<double>(over_cap[p]) / with_caps : 0.0;
        j["cap_violation_frequency"] = freq;

        nlohmann::ordered_json records = nlohmann::ordered_json::array();
        for (auto & rec : r.records) {
            nlohmann::ordered_json e;
            e["run"] = rec.run;
            e["graph_id"] = rec.graph_id;
            e["graph_file"] = graph_file(rec.graph_id);
            e["seed"] = rec.seed;
            e["colouring_file"] = rec.colouring ? nlohmann::ordered_json(colouring_file(rec)) : nlohmann::ordered_json(nullptr);
            e["error"] = rec.error;
            e["report"] = nlohmann::ordered_json::parse(report_to_json_string(rec.report));
            if (timing)
                e["wall_seconds"] = rec.wall_seconds;
            records.push_back(e);
        }
        j["records"] = records;
        return j.dump(2);
    }

    auto write_experiment(const ExperimentResult & r, const string & dir, bool timing) -> void
    {
        namespace fs = std::filesystem;
        fs::create_directories(fs::path{ dir } / "graphs");
        auto write = [&] (const fs::path & p, const string & text) {
            std::ofstream out{ p, std::ios::binary };
            if (! out)
                throw ExperimentError{ "cannot write '" + p.string() + "'" };
            out << text;
        };

        write(fs::path{ dir } / "results.csv", experiment_csv(r, timing));
        write(fs::path{ dir } / "summary.json", experiment_summary_json(r, timing) + "\n");

        std::set<string> written;
        for (auto & g : r.graphs)
            if (written.insert(graph_file(g.id)).second)
                write(fs::path{ dir } / graph_file(g.id), graph_to_string(g.graph));

        if (! r.records.empty())
            fs::create_directories(fs::path{ dir } / "colourings");
        for (auto & rec : r.records)
            if (rec.colouring)
                write(fs::path{ dir } / colouring_file(rec), colouring_to_string(r.graphs[rec.graph_index].graph, *rec.colouring));
    }
}
