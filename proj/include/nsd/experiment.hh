/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef NSD_EXPERIMENT_HH
#define NSD_EXPERIMENT_HH

#include <nsd/construct.hh>
#include <nsd/exact.hh>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nsd
{
    class ExperimentError : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    /**
     * A sweep description, read from JSON:
     *
     *   {
     *     "name": "grid",
     *     "solver": "construct" | "exact",
     *     "family": ["gen:random 100 0.1 3", "connected:5", ...],
     *     "grid": { "n": [100, 300], "delta": [10, 20], "graph_seed": 1 },
     *     "seeds": [1, 2]   or   "base_seed": 7, "runs_per_graph": 2,
     *     "mode": "permissive", "slack": 2.0, "rounds": 1000, "retries": 3,
     *     "k_max": 8, "time_budget": 60, "workers": 0
     *   }
     *
     * "family" and "grid" may both be present; grid graphs are G(n, p) with
     * p = (delta - 3 sqrt(delta)) / (n - 1), skipped when delta >= n.
     * Without "seeds", run i uses derive_seed(base_seed, i).
     */
    struct ExperimentSpec
    {
        std::string name = "experiment";
        std::string solver = "construct";
        std::vector<std::string> family;
        std::vector<int> grid_n;
        std::vector<int> grid_delta;
        std::uint64_t graph_seed = 1;
        std::vector<std::uint64_t> seeds;
        std::uint64_t base_seed = 0;
        int runs_per_graph = 1;
        Mode mode = Mode::Permissive;
        double slack = 2.0;
        int rounds = 1000;
        int retries = 3;
        Colour k_max = 8;
        double time_budget = 60.0;
        int workers = 0;

        /// Throws ExperimentError on unknown keys, bad values, or an empty grid or seed list.
        static auto from_json(const std::string & text) -> ExperimentSpec;
        static auto from_file(const std::string & filename) -> ExperimentSpec;
    };

    /// Edge probability hitting an expected maximum degree near delta.
    auto grid_probability(int n, int delta) -> double;

    /// The graphs named by the spec, in order (family entries, then the grid).
    auto experiment_graphs(const ExperimentSpec & spec) -> std::vector<NamedGraph>;

    struct RunRecord
    {
        int run = 0;
        int graph_index = 0;
        std::string graph_id;
        std::uint64_t seed = 0;
        RunReport report;
        std::optional<TotalColouring> colouring;
        std::string error;
        double wall_seconds = 0.0;

        auto ok() const -> bool { return error.empty() && report.valid(); }
    };

    struct ExperimentResult
    {
        ExperimentSpec spec;
        std::vector<NamedGraph> graphs;
        std::vector<RunRecord> records;       // construct solver
        std::vector<SweepRow> sweep;          // exact solver

        auto success_rate() const -> double;
    };

    /// Runs every (graph, seed) pair, concurrently up to spec.workers, and
    /// orders the records by run index.
    auto run_experiment(const ExperimentSpec & spec) -> ExperimentResult;

    /// Fixed columns; wall time columns only when timing is set.
    auto experiment_csv(const ExperimentResult & r, bool timing) -> std::string;

    /// Versioned summary; records carry their colouring file names when given.
    auto experiment_summary_json(const ExperimentResult & r, bool timing) -> std::string;

    inline constexpr int summary_schema_version = 1;

    /// Writes results.csv, summary.json, and graphs/ and colourings/ files into dir.
    auto write_experiment(const ExperimentResult & r, const std::string & dir, bool timing) -> void;
}

#endif
