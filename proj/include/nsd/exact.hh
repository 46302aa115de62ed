/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef NSD_EXACT_HH
#define NSD_EXACT_HH

#include <nsd/colouring.hh>
#include <nsd/graph.hh>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nsd
{
    /// Thrown when brute force enumeration would be too large.
    class GuardExceeded : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    struct SolveResult
    {
        Colour chi_sum_total = 0;
        TotalColouring witness;
        std::uint64_t nodes_explored = 0;
    };

    /// Maximum (n + m) * log2(k_max) that brute_force_chi accepts.
    inline constexpr double brute_force_guard = 40.0;

    /**
     * Enumerates every assignment of {1..k} to the n + m objects for
     * k = Delta+1, ..., k_max and returns the first k admitting an NSD proper
     * total colouring, or nullopt if none up to k_max. Throws GuardExceeded
     * when (n + m) log2(k_max) exceeds brute_force_guard.
     */
    auto brute_force_chi(const Graph & g, Colour k_max) -> std::optional<SolveResult>;

    /// Backtracking search, per connected component. nullopt when some
    /// component needs more than k_max colours.
    auto solve_exact(const Graph & g, Colour k_max) -> std::optional<SolveResult>;

    /// Does g admit an NSD proper total colouring with palette {1..k}?
    /// Fills witness if so. nodes is incremented per search node.
    auto nsd_colourable(const Graph & g, Colour k, TotalColouring * witness, std::uint64_t & nodes) -> bool;

    struct SweepRow
    {
        std::string graph_id;
        int n = 0;
        int m = 0;
        int max_degree = 0;
        std::optional<Colour> chi;
        std::string error;
        Graph witness_graph;

        /// chi <= Delta + 3; false when the solve failed.
        auto holds() const -> bool { return chi && *chi <= max_degree + 3; }
    };

    struct NamedGraph
    {
        std::string id;
        Graph graph;
    };

    /// Solves every graph (concurrently), one row per graph in input order.
    /// Solver failures are recorded in the row and the sweep continues.
    auto conjecture_sweep(const std::vector<NamedGraph> & family, Colour k_max) -> std::vector<SweepRow>;

    /// CSV with header graph-id,n,m,delta,chi,delta_plus_3,verdict.
    auto sweep_csv(const std::vector<SweepRow> & rows) -> std::string;

    /// All labelled graphs on exactly n vertices (2^(n choose 2) of them), id "L<n>-<mask>".
    auto all_labelled_graphs(int n) -> std::vector<NamedGraph>;

    /// Connected graphs on 1..max_n vertices, one per isomorphism class
    /// (canonical form by trying every permutation), id "C<n>-<mask>".
    auto connected_graphs_up_to_iso(int max_n) -> std::vector<NamedGraph>;

    /**
     * Sweep family descriptors:
     *   connected:<N>       connected graphs on <= N vertices up to isomorphism
     *   labelled:<N>        every labelled graph on exactly N vertices
     *   gen:<descriptor>    one generated graph, e.g. "gen:cycle 5"
     *   file:<path>         one DIMACS graph file
     * Several descriptors may be joined with ';'.
     */
    auto parse_family(const std::string & spec) -> std::vector<NamedGraph>;
}

#endif
