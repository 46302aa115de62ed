/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef NSD_LEMMA_HH
#define NSD_LEMMA_HH

#include <nsd/graph.hh>

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nsd
{
    using Rational = boost::multiprecision::cpp_rational;

    enum class Mode
    {
        Strict,
        Permissive
    };

    auto to_string(Mode) -> std::string;
    auto parse_mode(const std::string &) -> Mode;

    class LemmaError : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    /**
     * Palette sizes and cap scaling derived from the maximum degree.
     *
     * With lnD = max(ln Delta, 1): r1 = ceil((Delta/lnD)^{1/6}) is the
     * attractor palette, r2 = ceil((Delta/lnD)^{1/3}) the palette of c2 and of
     * vertex c3, and r3 = 2 r1 + r2 the palette of edge c3. All three are at
     * least 1.
     */
    struct LemmaParams
    {
        int delta = 0;
        int r1 = 1;
        int r2 = 1;
        int r3 = 3;
        double ln_floor = 1.0;
        Mode mode = Mode::Permissive;
        double slack = 1.0;

        /// Throws LemmaError if slack < 1 or delta < 0. Does not check strict feasibility.
        static auto for_delta(int delta, Mode mode = Mode::Permissive, double slack = 1.0) -> LemmaParams;

        /// Delta^{2/3} lnD^{1/3}.
        auto big_term() const -> double;
        /// Delta^{1/3} lnD^{2/3}.
        auto small_term() const -> double;
        /// 1 in strict mode, slack otherwise.
        auto scale() const -> double { return mode == Mode::Strict ? 1.0 : slack; }
        /// True iff 3 d >= Delta, i.e. d >= ceil(Delta / 3).
        auto large(int d) const -> bool { return 3 * static_cast<long long>(d) >= delta; }
    };

    /// The individual conditions behind strict mode, each evaluated at Delta.
    struct StrictFeasibility
    {
        bool caps_positive = false;
        bool stage_one_local_lemma = false;   // e p (D + 1) <= 1, p = Delta^{-8/3}, D = 5 + 6 Delta^2
        bool stage_two_local_lemma = false;   // e (1/Delta) (Delta(H3) cap + 1) < 1
        bool score_bound = false;             // max S(v) <= Delta^2
        bool auxiliary = false;               // 2 M - 3 Delta^{1/6} lnD^{5/6} > 0

        auto all() const -> bool
        {
            return caps_positive && stage_one_local_lemma && stage_two_local_lemma && score_bound && auxiliary;
        }
    };

    auto strict_feasibility(int delta) -> StrictFeasibility;

    /**
     * Exact score machinery: b_unit = ceil(Delta^{2/3} lnD^{1/3}) +
     * 6 ceil(Delta^{1/3} lnD^{2/3}), the interval length Delta^{5/3} lnD^{1/3} / 3
     * (evaluated once in floating point and then used as the exact dyadic
     * rational it is), and a table of interval indices for every (d, c1).
     */
    class SParams
    {
        private:
            int _delta = 0;
            int _r1 = 1;
            int _r2 = 1;
            std::int64_t _b_unit = 1;
            Rational _interval_len;
            double _interval_len_value = 1.0;
            std::vector<std::int64_t> _alpha;  // (d, c1) -> interval index, 0 for d = 0

        public:
            /// with_table = false skips the alpha table; alpha() must not be called then.
            explicit SParams(const LemmaParams & p, bool with_table = true);

            auto b_unit() const -> std::int64_t { return _b_unit; }
            auto interval_len() const -> const Rational & { return _interval_len; }
            auto interval_len_value() const -> double { return _interval_len_value; }

            /// R(d, Delta) = b_unit ((d / r1) C(r1+1, 2) + (d / r2) C(r2+1, 2)).
            auto r_of_d(int d) const -> Rational;

            /// S(v) = b_unit d c1 + R(d, Delta).
            auto s_of(int d, int c1) const -> Rational;

            /// The alpha >= 1 with s in ((alpha-1) len, alpha len]. Throws LemmaError if s <= 0.
            auto interval_index(const Rational & s) const -> std::int64_t;

            /// Cached interval_index(s_of(d, c1)); 0 when d = 0.
            auto alpha(int d, int c1) const -> std::int64_t
            {
                return _alpha[static_cast<std::size_t>(d) * _r1 + (c1 - 1)];
            }
    };

    enum class Stage
    {
        Sampled,    // c3e(uv) = c1(u) + c1(v) + c2(uv) everywhere
        Completed   // after the uncolour / recolour step
    };

    /// Auxiliary colourings c1 (vertices), c2 (edges), c3 (vertices and edges).
    struct LemmaState
    {
        std::vector<int> c1;
        std::vector<int> c2;
        std::vector<int> c3v;
        std::vector<int> c3e;   // 0 marks an uncoloured edge inside stage two
        std::uint64_t rng_seed = 0;
        Stage stage = Stage::Sampled;

        auto operator== (const LemmaState &) const -> bool = default;

        /// c1(u) + c1(v) + c2(uv).
        auto formula(const Graph & g, EdgeId e) const -> int
        {
            return c1[g.edge(e).u] + c1[g.edge(e).v] + c2[e];
        }

        /// uv in E1: the formula value equals c3(u) or c3(v).
        auto in_h1(const Graph & g, EdgeId e) const -> bool
        {
            int f = formula(g, e);
            return f == c3v[g.edge(e).u] || f == c3v[g.edge(e).v];
        }

        /// uv in E2: c3(u) = c3(v).
        auto in_h2(const Graph & g, EdgeId e) const -> bool
        {
            return c3v[g.edge(e).u] == c3v[g.edge(e).v];
        }

        auto in_h3(const Graph & g, EdgeId e) const -> bool
        {
            return in_h1(g, e) && ! in_h2(g, e);
        }
    };

    enum class Property
    {
        I, II, III, IV, V, VI, One, Two, Three, Four
    };

    inline constexpr std::array<Property, 10> all_properties = {
        Property::I, Property::II, Property::III, Property::IV, Property::V, Property::VI,
        Property::One, Property::Two, Property::Three, Property::Four
    };

    /// "I", ..., "VI", "1°", ..., "4°".
    auto to_string(Property) -> std::string;

    /// Properties decided by stage one alone (c1, c2, c3v).
    auto is_stage_one(Property) -> bool;

    /**
     * Caps as real numbers, with L = Delta^{2/3} lnD^{1/3}, M = Delta^{1/3} lnD^{2/3}:
     *   I    |count - d/r1| <= Delta^{1/2}
     *   II   |count - d/r2| <= 3 M
     *   III  exceptions     <= (2L + 5M) + (L + 3M)
     *   IV   per c3 value   <= L + 5M
     *   VI   per interval   <= Delta^{5/6} lnD^{1/6} + Delta^{1/2}
     *   1°   per value L + 3M, and (aux) formula hits c3(u) or c3(v) <= 2L + 5M
     *   2°   per c3 value   <= L + 3M
     *   3°   per c3 value on edges outside H3 <= L + 3M
     *   4°   per c3 value on H3 edges <= 2M
     * Every cap is multiplied by the scale (slack in permissive mode).
     */
    struct Caps
    {
        std::array<double, 10> cap{};
        double one_aux = 0.0;

        auto operator[] (Property p) const -> double { return cap[static_cast<int>(p)]; }
    };

    auto caps_for(const LemmaParams & p) -> Caps;

    /// A violation: the vertex and the offending value (c*, alpha, the
    /// exception count for III, the other endpoint for V, 0 for the aux part of 1°).
    struct Violator
    {
        Vertex vertex;
        std::int64_t value;

        auto operator== (const Violator &) const -> bool = default;
        auto operator<=> (const Violator &) const = default;
    };

    struct PropertyVerdict
    {
        Property id = Property::I;
        bool evaluated = false;
        double cap = 0.0;
        std::optional<double> aux_cap;
        std::vector<Violator> violators;

        auto passed() const -> bool { return violators.empty(); }
    };

    struct PropertyReport
    {
        std::array<PropertyVerdict, 10> verdicts;

        auto operator[] (Property p) const -> const PropertyVerdict & { return verdicts[static_cast<int>(p)]; }
        auto operator[] (Property p) -> PropertyVerdict & { return verdicts[static_cast<int>(p)]; }

        /// Every evaluated property passed.
        auto all_pass() const -> bool;
        auto violator_count() const -> std::size_t;
    };

    /// Stage one: c1, c2, c3v uniform and independent, c3e from the formula.
    auto sample_stage_one(const Graph & g, const LemmaParams & p, std::uint64_t seed) -> LemmaState;

    /// Evaluates every property applicable to the state's stage (stage two
    /// properties only when Completed). OpenMP over vertices.
    auto check_properties(const Graph & g, const LemmaState & st, const SParams & sp, const LemmaParams & p) -> PropertyReport;

    /// Single-threaded reference of check_properties, identical output.
    auto check_properties_serial(const Graph & g, const LemmaState & st, const SParams & sp, const LemmaParams & p) -> PropertyReport;

    /// The variables an event may resample.
    struct Scope
    {
        std::vector<Vertex> c1;
        std::vector<EdgeId> c2;
        std::vector<Vertex> c3v;
    };

    struct ResampledEvent
    {
        Vertex vertex;
        Property property;
        bool aux = false;   // the E_v half of 1°
    };

    /// Scope of the stage one event (v, property).
    auto event_scope(const Graph & g, const ResampledEvent & event) -> Scope;

    /**
     * Moser-Tardos resampling of the stage one events. Each step takes the
     * smallest vertex with a violated event, takes its first violated event in
     * the order I, II, 2°, 1°, 1°(aux), VI, and redraws exactly that event's scope.
     */
    class StageOneResampler
    {
        private:
            struct Impl;
            std::unique_ptr<Impl> _imp;

        public:
            StageOneResampler(const Graph & g, const LemmaParams & p, const SParams & sp, LemmaState initial, std::uint64_t seed);
            ~StageOneResampler();

            auto done() const -> bool;
            auto violated_vertices() const -> std::size_t;
            auto step() -> ResampledEvent;
            auto state() const -> const LemmaState &;

            /// Roll back to the state with fewest violated vertices seen so far.
            auto restore_best() -> void;
    };

    struct LemmaOutcome
    {
        LemmaState state;
        PropertyReport report;
        int rounds = 0;
        bool exhausted = false;
    };

    /// Resamples until I, II, VI, 1°, 2° all hold or max_rounds steps have
    /// run; on exhaustion returns the best state seen with exhausted set.
    auto resample_until_valid(const Graph & g, const LemmaParams & p, const SParams & sp, std::uint64_t seed, int max_rounds) -> LemmaOutcome;

    struct StageTwoStats
    {
        int e1 = 0;
        int e2 = 0;
        int e1_or_e2 = 0;
        int h3 = 0;
        int max_degree_h1 = 0;
        int max_degree_h2 = 0;
        int max_degree_h3 = 0;
    };

    struct StageTwoOutcome
    {
        LemmaState state;
        PropertyReport report;
        StageTwoStats stats;
        int rounds = 0;
        bool exhausted = false;
    };

    /**
     * Uncolours E1, sets c3(uv) = c3(u) on E2, draws H3 = E1 \ E2 uniformly from
     * {1..r3} and resamples the H3 edges at v while v has more than the 4° cap
     * of one colour among them.
     */
    auto stage_two(const Graph & g, const LemmaState & st, const LemmaParams & p, std::uint64_t seed, int max_rounds) -> StageTwoOutcome;

    /// JSON object with verdicts, caps_used and violator_counts.
    auto report_to_json_string(const PropertyReport & r) -> std::string;
}

#endif
