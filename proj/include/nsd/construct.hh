/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef NSD_CONSTRUCT_HH
#define NSD_CONSTRUCT_HH

#include <nsd/colouring.hh>
#include <nsd/graph.hh>
#include <nsd/lemma.hh>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nsd
{
    class ConstructionError : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    /**
     * Temporary colours c_t during construction. An object of class beta
     * (its c3 value) starts at beta B and, until recolour_H runs, stays in
     * {(beta-1) B + 1, ..., beta B}.
     */
    struct ConstructionState
    {
        Colour width = 1;
        std::vector<int> class_v;
        std::vector<int> class_e;
        std::vector<Colour> ct_v;
        std::vector<Colour> ct_e;

        auto addition_v(Vertex v) const -> Colour { return ct_v[v] - class_v[v] * width; }
        auto addition_e(EdgeId e) const -> Colour { return ct_e[e] - class_e[e] * width; }

        auto span() const -> Colour;
        auto colouring() const -> TotalColouring;
    };

    /// c_t = B c3 on every object. Throws ConstructionError on an uncoloured edge.
    auto lift(const LemmaState & st, Colour width) -> ConstructionState;

    struct ProperizeResult
    {
        ConstructionState state;
        bool fits = true;             // every class fitted in its width
        Colour width_needed = 0;      // largest per-class palette used
        int classes = 0;
        int max_class_degree = 0;
        int misra_gries_classes = 0;  // classes where the edge colouring fallback was used
    };

    /**
     * Chooses additions class by class (increasing beta) so the temporary
     * total colouring is proper. Each class is coloured greedily; if that
     * needs more than the width, the class edges are coloured with
     * Misra-Gries and the vertices placed greedily. When neither fits, the
     * state holds the narrower attempt and fits is false.
     */
    auto properize(const Graph & g, const ConstructionState & cs) -> ProperizeResult;

    struct RiskParams
    {
        double fault_cap = 0.0;
        double repair_slack = 0.0;
        double window = 0.0;
        std::int64_t covered_intervals = 1;

        static auto for_params(const LemmaParams & p, const SParams & sp) -> RiskParams;
    };

    /// R_v for every v, neighbours in increasing order.
    auto compute_risky(const Graph & g, const LemmaState & st, const LemmaParams & p, const SParams & sp,
            const RiskParams & rp) -> std::vector<std::vector<Vertex>>;

    struct HSelection
    {
        std::vector<EdgeId> edges;   // sorted, no repeats
        std::vector<int> degree;     // d_H
        double cap = 0.0;
        int rounds = 0;
        bool exhausted = false;

        auto max_degree() const -> int;
    };

    /// The W_v cap on d_H: 15 lnD, scaled by the slack in permissive mode.
    auto h_degree_cap(const LemmaParams & p) -> double;

    auto select_H(const Graph & g, const LemmaParams & p, std::uint64_t seed, int max_rounds) -> HSelection;

    struct RecolourStats
    {
        Colour a_first = 0;
        Colour a_bound = 0;
        Colour a_last_used = 0;
        bool a_grown = false;
        int recoloured = 0;
    };

    /**
     * Gives each H edge, in lexicographic order, the smallest reserve colour
     * above the current span that is not on an edge at either endpoint and
     * keeps s(u) off R_u \ {v} and s(v) off R_v \ {u}. a_bound caps the
     * reserve; going past it throws in strict mode and is reported otherwise.
     */
    auto recolour_H(const Graph & g, ConstructionState & cs, const HSelection & h,
            const std::vector<std::vector<Vertex>> & risky, Colour a_bound, Mode mode) -> RecolourStats;

    struct RepairStats
    {
        int repaired = 0;
        Colour pool = 0;
        bool pool_extended = false;
    };

    /// Recolours the vertices selected by `which`, in index order, with the
    /// first colour keeping properness and a weighted degree distinct from
    /// every neighbour's.
    auto repair_vertices(const Graph & g, ConstructionState & cs, const std::vector<char> & which, Colour pool) -> RepairStats;

    /// repair_vertices on the vertices of degree below ceil(Delta / 3), pool = span.
    auto repair_small_degree(const Graph & g, ConstructionState & cs, const LemmaParams & p) -> RepairStats;

    /// Greedy proper total colouring followed by a repair of every vertex.
    auto greedy_nsd(const Graph & g) -> TotalColouring;

    /// Delta + 139 Delta^{5/6} lnD^{1/6}.
    auto theorem_bound(int delta) -> double;

    struct ConstructConfig
    {
        std::uint64_t seed = 0;
        Mode mode = Mode::Permissive;
        double slack = 2.0;
        int rounds = 1000;
        int retries = 3;
    };

    struct CapObservation
    {
        std::string property;
        double cap = 0.0;
        double observed = 0.0;
    };

    struct RunReport
    {
        int n = 0, m = 0, delta = 0;
        Mode mode_requested = Mode::Permissive;
        Mode mode_used = Mode::Permissive;
        bool downgraded = false;
        double slack_used = 1.0;
        int attempts = 0;
        bool fallback = false;
        std::vector<std::string> attempt_failures;

        int r1 = 0, r2 = 0, r3 = 0;
        Colour width_initial = 0, width_used = 0;
        bool width_widened = false;
        int stage_one_rounds = 0, stage_two_rounds = 0;
        bool stage_one_exhausted = false, stage_two_exhausted = false;
        bool lemma_properties_pass = false;
        std::vector<CapObservation> caps;
        StageTwoStats stage_two;

        RiskParams risk;
        std::size_t max_risky = 0;
        double risky_audit_cap = 0.0;
        double max_fault = 0.0;

        int h_edges = 0, h_max_degree = 0, h_rounds = 0;
        double h_cap = 0.0;
        bool h_exhausted = false;
        RecolourStats recolour;
        RepairStats repair;

        Colour lift_span = 0;
        Colour span = 0;
        double theorem = 0.0;
        bool within_theorem = false;
        bool within_delta_plus_3 = false;
        std::size_t proper_violations = 0;
        std::size_t sum_violations = 0;

        auto valid() const -> bool { return proper_violations == 0 && sum_violations == 0; }
    };

    struct ConstructResult
    {
        TotalColouring colouring;
        RunReport report;
    };

    /**
     * The full pipeline. On a failed or unverifiable attempt the slack is
     * doubled and the run retried, up to config.retries times, after which
     * greedy_nsd is used and the report is flagged as a fallback. Strict
     * requests for a Delta where strict_feasibility fails run permissive and
     * are reported as downgraded.
     */
    auto construct(const Graph & g, const ConstructConfig & config) -> ConstructResult;

    auto report_to_json_string(const RunReport & r) -> std::string;
}

#endif
