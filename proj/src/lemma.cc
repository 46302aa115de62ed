/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <nsd/lemma.hh>
#include <nsd/rng.hh>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using std::int64_t;
using std::optional;
using std::string;
using std::vector;

namespace nsd
{
    auto to_string(Mode m) -> string
    {
        return m == Mode::Strict ? "strict" : "permissive";
    }

    auto parse_mode(const string & s) -> Mode
    {
        if (s == "strict")
            return Mode::Strict;
        if (s == "permissive")
            return Mode::Permissive;
        throw LemmaError{ "unknown mode '" + s + "'" };
    }

    auto LemmaParams::for_delta(int delta, Mode mode, double slack) -> LemmaParams
    {
        if (delta < 0)
            throw LemmaError{ "negative maximum degree" };
        if (! (slack >= 1.0))
            throw LemmaError{ "slack must be at least 1" };

        LemmaParams p;
        p.delta = delta;
        p.mode = mode;
        p.slack = slack;
        p.ln_floor = delta > 0 ? std::max(std::log(static_cast<double>(delta)), 1.0) : 1.0;
        double ratio = delta / p.ln_floor;
        p.r1 = std::max(1, static_cast<int>(std::ceil(std::pow(ratio, 1.0 / 6.0))));
        p.r2 = std::max(1, static_cast<int>(std::ceil(std::cbrt(ratio))));
        p.r3 = 2 * p.r1 + p.r2;
        return p;
    }

    auto LemmaParams::big_term() const -> double
    {
        return std::pow(static_cast<double>(delta), 2.0 / 3.0) * std::cbrt(ln_floor);
    }

    auto LemmaParams::small_term() const -> double
    {
        return std::cbrt(static_cast<double>(delta)) * std::pow(ln_floor, 2.0 / 3.0);
    }

    auto caps_for(const LemmaParams & p) -> Caps
    {
        double big = p.big_term(), small = p.small_term(), root = std::sqrt(static_cast<double>(p.delta));
        double s = p.scale();

        Caps c;
        auto set = [&] (Property q, double value) { c.cap[static_cast<int>(q)] = value * s; };
        set(Property::I, root);
        set(Property::II, 3 * small);
        set(Property::III, (2 * big + 5 * small) + (big + 3 * small));
        set(Property::IV, big + 5 * small);
        set(Property::V, 0.0);
        set(Property::VI, std::pow(static_cast<double>(p.delta), 5.0 / 6.0) * std::pow(p.ln_floor, 1.0 / 6.0) + root);
        set(Property::One, big + 3 * small);
        set(Property::Two, big + 3 * small);
        set(Property::Three, big + 3 * small);
        set(Property::Four, 2 * small);
        c.one_aux = (2 * big + 5 * small) * s;
        return c;
    }

    SParams::SParams(const LemmaParams & p, bool with_table) :
        _delta(p.delta),
        _r1(p.r1),
        _r2(p.r2)
    {
        _b_unit = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(p.big_term())) + 6 * static_cast<int64_t>(std::ceil(p.small_term())));

        double d = std::max(p.delta, 1);
        _interval_len_value = std::pow(d, 5.0 / 3.0) * std::cbrt(p.ln_floor) / 3.0;
        // a double is a dyadic rational; convert it without rounding
        int exponent = 0;
        double mantissa = std::frexp(_interval_len_value, &exponent);
        auto scaled = static_cast<int64_t>(std::ldexp(mantissa, 53));
        exponent -= 53;
        Rational len{ scaled };
        if (exponent >= 0)
            len *= Rational{ boost::multiprecision::cpp_int{ 1 } << exponent };
        else
            len /= Rational{ boost::multiprecision::cpp_int{ 1 } << -exponent };
        _interval_len = len;

        if (! with_table)
            return;
        _alpha.assign(static_cast<std::size_t>(p.delta + 1) * _r1, 0);
        for (int deg = 1; deg <= p.delta; ++deg)
            for (int c1 = 1; c1 <= _r1; ++c1)
                _alpha[static_cast<std::size_t>(deg) * _r1 + (c1 - 1)] = interval_index(s_of(deg, c1));
    }

    auto SParams::r_of_d(int d) const -> Rational
    {
        auto binom2 = [] (int64_t r) { return (r + 1) * r / 2; };
        Rational first{ static_cast<int64_t>(d) * binom2(_r1), _r1 };
        Rational second{ static_cast<int64_t>(d) * binom2(_r2), _r2 };
        return Rational{ _b_unit } * (first + second);
    }

    auto SParams::s_of(int d, int c1) const -> Rational
    {
        return Rational{ _b_unit * d * c1 } + r_of_d(d);
    }

    auto SParams::interval_index(const Rational & s) const -> int64_t
    {
        if (s <= 0)
            throw LemmaError{ "interval index needs a positive score" };
        Rational q = s / _interval_len;
        auto num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
        boost::multiprecision::cpp_int alpha = (num + den - 1) / den;
        return alpha.convert_to<int64_t>();
    }

    auto strict_feasibility(int delta) -> StrictFeasibility
    {
        StrictFeasibility f;
        if (delta < 2)
            return f;
        auto p = LemmaParams::for_delta(delta, Mode::Strict);
        auto caps = caps_for(p);
        double d = delta, big = p.big_term(), small = p.small_term();

        f.caps_positive = std::all_of(all_properties.begin(), all_properties.end(),
                [&] (Property q) { return q == Property::V || caps[q] > 0; }) && caps.one_aux > 0;
        f.stage_one_local_lemma = std::numbers::e * std::pow(d, -8.0 / 3.0) * (6.0 + 6.0 * d * d) <= 1.0;
        f.stage_two_local_lemma = std::numbers::e * (1.0 / d) * (2 * big + 5 * small + 1.0) < 1.0;

        SParams sp{ p, false };
        f.score_bound = sp.s_of(delta, p.r1) <= Rational{ static_cast<int64_t>(delta) * delta };

        double gap = 2 * small - 3 * std::pow(d, 1.0 / 6.0) * std::pow(p.ln_floor, 5.0 / 6.0);
        f.auxiliary = gap > 0 && 1.0 / (p.r2 + 2 * p.r1) <= gap / std::floor(2 * big + 5 * small);
        return f;
    }

    auto to_string(Property p) -> string
    {
        switch (p) {
            case Property::I:     return "I";
            case Property::II:    return "II";
            case Property::III:   return "III";
            case Property::IV:    return "IV";
            case Property::V:     return "V";
            case Property::VI:    return "VI";
            case Property::One:   return "1°";
            case Property::Two:   return "2°";
            case Property::Three: return "3°";
            case Property::Four:  return "4°";
        }
        return "?";
    }

    auto is_stage_one(Property p) -> bool
    {
        return p == Property::I || p == Property::II || p == Property::VI || p == Property::One || p == Property::Two;
    }

    auto PropertyReport::all_pass() const -> bool
    {
        return std::all_of(verdicts.begin(), verdicts.end(), [] (const PropertyVerdict & v) { return ! v.evaluated || v.passed(); });
    }

    auto PropertyReport::violator_count() const -> std::size_t
    {
        std::size_t result = 0;
        for (auto & v : verdicts)
            result += v.violators.size();
        return result;
    }

    auto sample_stage_one(const Graph & g, const LemmaParams & p, std::uint64_t seed) -> LemmaState
    {
        Rng rng{ seed };
        LemmaState st;
        st.rng_seed = seed;
        st.c1.resize(g.vertex_count());
        st.c2.resize(g.edge_count());
        st.c3v.resize(g.vertex_count());
        st.c3e.resize(g.edge_count());
        for (auto & c : st.c1)
            c = rng.colour(p.r1);
        for (auto & c : st.c2)
            c = rng.colour(p.r2);
        for (auto & c : st.c3v)
            c = rng.colour(p.r2);
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            st.c3e[e] = st.formula(g, e);
        return st;
    }

    namespace
    {
        // Integer versions of the caps, floored once.
        struct Thresholds
        {
            int64_t deviation_i, deviation_ii;
            int64_t count[10];
            int64_t one_aux;

            Thresholds(const LemmaParams & p, const Caps & caps)
            {
                deviation_i = static_cast<int64_t>(std::floor(p.r1 * caps[Property::I]));
                deviation_ii = static_cast<int64_t>(std::floor(p.r2 * caps[Property::II]));
                for (auto q : all_properties)
                    count[static_cast<int>(q)] = static_cast<int64_t>(std::floor(caps[q]));
                one_aux = static_cast<int64_t>(std::floor(caps.one_aux));
            }

            auto operator[] (Property q) const -> int64_t { return count[static_cast<int>(q)]; }
        };

        struct VertexFindings
        {
            // violators per property at one vertex, plus the aux part of 1°
            std::array<vector<Violator>, 10> found;
            bool one_aux = false;

            auto clear() -> void
            {
                for (auto & f : found)
                    f.clear();
                one_aux = false;
            }
        };

        struct Evaluator
        {
            const Graph & g;
            const LemmaState & st;
            const SParams & sp;
            const LemmaParams & p;
            Thresholds thr;

            Evaluator(const Graph & g_, const LemmaState & st_, const SParams & sp_, const LemmaParams & p_) :
                g(g_), st(st_), sp(sp_), p(p_), thr(p_, caps_for(p_))
            {
            }

            auto count_over(vector<int> & counts, int range) const -> void
            {
                counts.assign(range + 2, 0);
            }

            auto stage_one(Vertex v, VertexFindings & out, vector<int> & counts) const -> void
            {
                int d = g.degree(v);
                auto incs = g.incidences(v);
                auto push = [&] (Property q, int64_t value) { out.found[static_cast<int>(q)].push_back({ v, value }); };

                if (p.large(d)) {
                    counts.assign(p.r1 + 1, 0);
                    for (auto & inc : incs)
                        ++counts[st.c1[inc.neighbour]];
                    for (int c = 1; c <= p.r1; ++c)
                        if (std::abs(static_cast<int64_t>(p.r1) * counts[c] - d) > thr.deviation_i)
                            push(Property::I, c);

                    counts.assign(p.r2 + 1, 0);
                    for (auto & inc : incs)
                        ++counts[st.c2[inc.edge]];
                    for (int c = 1; c <= p.r2; ++c)
                        if (std::abs(static_cast<int64_t>(p.r2) * counts[c] - d) > thr.deviation_ii)
                            push(Property::II, c);
                }

                counts.assign(p.r3 + 1, 0);
                for (auto & inc : incs)
                    ++counts[st.c3v[inc.neighbour]];
                for (int c = 1; c <= p.r3; ++c)
                    if (counts[c] > thr[Property::Two])
                        push(Property::Two, c);

                counts.assign(p.r3 + 1, 0);
                int64_t hits = 0;
                for (auto & inc : incs) {
                    int f = st.c1[v] + st.c1[inc.neighbour] + st.c2[inc.edge];
                    ++counts[f];
                    if (f == st.c3v[v] || f == st.c3v[inc.neighbour])
                        ++hits;
                }
                for (int c = 1; c <= p.r3; ++c)
                    if (counts[c] > thr[Property::One])
                        push(Property::One, c);
                if (hits > thr.one_aux) {
                    push(Property::One, 0);
                    out.one_aux = true;
                }

                if (p.large(d)) {
                    vector<int64_t> alphas;
                    alphas.reserve(incs.size());
                    for (auto & inc : incs)
                        if (p.large(g.degree(inc.neighbour)))
                            alphas.push_back(sp.alpha(g.degree(inc.neighbour), st.c1[inc.neighbour]));
                    std::sort(alphas.begin(), alphas.end());
                    for (std::size_t i = 0; i < alphas.size(); ) {
                        std::size_t j = i;
                        while (j < alphas.size() && alphas[j] == alphas[i])
                            ++j;
                        if (static_cast<int64_t>(j - i) > thr[Property::VI])
                            push(Property::VI, alphas[i]);
                        i = j;
                    }
                }
            }

            auto stage_two(Vertex v, VertexFindings & out, vector<int> & counts) const -> void
            {
                auto incs = g.incidences(v);
                auto push = [&] (Property q, int64_t value) { out.found[static_cast<int>(q)].push_back({ v, value }); };

                int64_t exceptions = 0;
                for (auto & inc : incs)
                    if (st.c3e[inc.edge] != st.formula(g, inc.edge))
                        ++exceptions;
                if (exceptions > thr[Property::III])
                    push(Property::III, exceptions);

                // colour 0 (uncoloured) is counted too so that it is never silently accepted
                counts.assign(p.r3 + 1, 0);
                vector<int> outside(p.r3 + 1, 0), inside(p.r3 + 1, 0);
                bool uncoloured = false;
                for (auto & inc : incs) {
                    int c = st.c3e[inc.edge];
                    if (c < 1 || c > p.r3) {
                        uncoloured = true;
                        continue;
                    }
                    ++counts[c];
                    ++(st.in_h3(g, inc.edge) ? inside : outside)[c];
                }
                if (uncoloured)
                    push(Property::IV, 0);
                for (int c = 1; c <= p.r3; ++c) {
                    if (counts[c] > thr[Property::IV])
                        push(Property::IV, c);
                    if (outside[c] > thr[Property::Three])
                        push(Property::Three, c);
                    if (inside[c] > thr[Property::Four])
                        push(Property::Four, c);
                }

                for (auto & inc : incs)
                    if (inc.neighbour > v && st.c3v[v] == st.c3v[inc.neighbour] && st.c3e[inc.edge] != st.c3v[v])
                        push(Property::V, inc.neighbour);
            }

            auto vertex(Vertex v, VertexFindings & out, vector<int> & counts) const -> void
            {
                stage_one(v, out, counts);
                if (st.stage == Stage::Completed)
                    stage_two(v, out, counts);
            }
        };

        auto assemble(const LemmaParams & p, const LemmaState & st, vector<VertexFindings> & per_vertex) -> PropertyReport
        {
            auto caps = caps_for(p);
            PropertyReport report;
            for (auto q : all_properties) {
                auto & verdict = report[q];
                verdict.id = q;
                verdict.evaluated = is_stage_one(q) || st.stage == Stage::Completed;
                verdict.cap = caps[q];
                if (q == Property::One)
                    verdict.aux_cap = caps.one_aux;
                for (auto & f : per_vertex)
                    for (auto & v : f.found[static_cast<int>(q)])
                        verdict.violators.push_back(v);
            }
            return report;
        }

        auto check_sizes(const Graph & g, const LemmaState & st) -> void
        {
            if (static_cast<int>(st.c1.size()) != g.vertex_count() || static_cast<int>(st.c3v.size()) != g.vertex_count()
                    || static_cast<int>(st.c2.size()) != g.edge_count() || static_cast<int>(st.c3e.size()) != g.edge_count())
                throw LemmaError{ "lemma state does not match the graph" };
        }
    }

    auto check_properties(const Graph & g, const LemmaState & st, const SParams & sp, const LemmaParams & p) -> PropertyReport
    {
        check_sizes(g, st);
        Evaluator eval{ g, st, sp, p };
        vector<VertexFindings> per_vertex(g.vertex_count());
#pragma omp parallel
        {
            vector<int> counts;
#pragma omp for schedule(dynamic, 64)
            for (Vertex v = 0; v < g.vertex_count(); ++v)
                eval.vertex(v, per_vertex[v], counts);
        }
        return assemble(p, st, per_vertex);
    }

    auto check_properties_serial(const Graph & g, const LemmaState & st, const SParams & sp, const LemmaParams & p) -> PropertyReport
    {
        check_sizes(g, st);
        Evaluator eval{ g, st, sp, p };
        vector<VertexFindings> per_vertex(g.vertex_count());
        vector<int> counts;
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            eval.vertex(v, per_vertex[v], counts);
        return assemble(p, st, per_vertex);
    }

    auto event_scope(const Graph & g, const ResampledEvent & event) -> Scope
    {
        Scope s;
        Vertex v = event.vertex;
        auto neighbours = [&] (bool closed) {
            vector<Vertex> result;
            if (closed)
                result.push_back(v);
            for (auto & inc : g.incidences(v))
                result.push_back(inc.neighbour);
            return result;
        };
        auto edges = [&] {
            vector<EdgeId> result;
            for (auto & inc : g.incidences(v))
                result.push_back(inc.edge);
            return result;
        };

        switch (event.property) {
            case Property::I:
            case Property::VI:
                s.c1 = neighbours(false);
                break;
            case Property::II:
                s.c2 = edges();
                break;
            case Property::Two:
                s.c3v = neighbours(false);
                break;
            case Property::One:
                s.c1 = neighbours(true);
                s.c2 = edges();
                if (event.aux)
                    s.c3v = neighbours(true);
                break;
            default:
                throw LemmaError{ "property " + to_string(event.property) + " is not a stage one event" };
        }
        return s;
    }

    namespace
    {
        enum class Variable : char { C1, C2, C3v, C3e };

        struct Change
        {
            Variable which;
            int index;
            int old_value;
        };

        auto first_event(Vertex v, const VertexFindings & f) -> optional<ResampledEvent>
        {
            auto has = [&] (Property q) { return ! f.found[static_cast<int>(q)].empty(); };
            if (has(Property::I))
                return ResampledEvent{ v, Property::I };
            if (has(Property::II))
                return ResampledEvent{ v, Property::II };
            if (has(Property::Two))
                return ResampledEvent{ v, Property::Two };
            if (has(Property::One)) {
                // value-specific violators come before the aux marker (value 0 pushed last)
                auto & one = f.found[static_cast<int>(Property::One)];
                bool only_aux = one.size() == 1 && f.one_aux;
                return ResampledEvent{ v, Property::One, only_aux };
            }
            if (has(Property::VI))
                return ResampledEvent{ v, Property::VI };
            return std::nullopt;
        }
    }

    struct StageOneResampler::Impl
    {
        const Graph & g;
        LemmaParams p;
        const SParams & sp;
        LemmaState state;
        Rng rng;
        std::set<Vertex> violated;
        vector<Change> undo;
        std::size_t best_count;
        vector<int> mark;
        int epoch = 0;
        vector<int> counts;
        VertexFindings scratch;

        Impl(const Graph & g_, const LemmaParams & p_, const SParams & sp_, LemmaState initial, std::uint64_t seed) :
            g(g_), p(p_), sp(sp_), state(std::move(initial)), rng(seed), mark(g_.vertex_count(), 0)
        {
            state.stage = Stage::Sampled;
            rebuild();
        }

        auto evaluator() const -> Evaluator
        {
            return Evaluator{ g, state, sp, p };
        }

        auto rebuild() -> void
        {
            Evaluator eval = evaluator();
            vector<char> bad(g.vertex_count(), 0);
#pragma omp parallel
            {
                vector<int> local_counts;
                VertexFindings findings;
#pragma omp for schedule(dynamic, 64)
                for (Vertex v = 0; v < g.vertex_count(); ++v) {
                    findings.clear();
                    eval.stage_one(v, findings, local_counts);
                    bad[v] = first_event(v, findings).has_value();
                }
            }
            violated.clear();
            for (Vertex v = 0; v < g.vertex_count(); ++v)
                if (bad[v])
                    violated.insert(v);
            best_count = violated.size();
            undo.clear();
        }

        auto findings_at(Vertex v) -> optional<ResampledEvent>
        {
            scratch.clear();
            evaluator().stage_one(v, scratch, counts);
            return first_event(v, scratch);
        }

        auto step() -> ResampledEvent
        {
            if (violated.empty())
                throw LemmaError{ "no violated event to resample" };
            Vertex v = *violated.begin();
            auto event = findings_at(v);
            if (! event)
                throw LemmaError{ "violated set out of date" };

            auto scope = event_scope(g, *event);
            for (auto x : scope.c1) {
                undo.push_back({ Variable::C1, x, state.c1[x] });
                state.c1[x] = rng.colour(p.r1);
            }
            for (auto e : scope.c2) {
                undo.push_back({ Variable::C2, e, state.c2[e] });
                state.c2[e] = rng.colour(p.r2);
            }
            for (auto x : scope.c3v) {
                undo.push_back({ Variable::C3v, x, state.c3v[x] });
                state.c3v[x] = rng.colour(p.r2);
            }
            for (auto e : scope.c2) {
                undo.push_back({ Variable::C3e, e, state.c3e[e] });
                state.c3e[e] = state.formula(g, e);
            }
            for (auto x : scope.c1)
                for (auto & inc : g.incidences(x)) {
                    undo.push_back({ Variable::C3e, inc.edge, state.c3e[inc.edge] });
                    state.c3e[inc.edge] = state.formula(g, inc.edge);
                }

            // events at distance <= 2 from v see the changed variables
            ++epoch;
            auto refresh = [&] (Vertex w) {
                if (mark[w] == epoch)
                    return;
                mark[w] = epoch;
                if (findings_at(w))
                    violated.insert(w);
                else
                    violated.erase(w);
            };
            refresh(v);
            for (auto & inc : g.incidences(v)) {
                refresh(inc.neighbour);
                for (auto & inc2 : g.incidences(inc.neighbour))
                    refresh(inc2.neighbour);
            }

            if (violated.size() < best_count) {
                best_count = violated.size();
                undo.clear();
            }
            return *event;
        }

        auto restore_best() -> void
        {
            if (undo.empty())
                return;
            for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
                switch (it->which) {
                    case Variable::C1:  state.c1[it->index] = it->old_value; break;
                    case Variable::C2:  state.c2[it->index] = it->old_value; break;
                    case Variable::C3v: state.c3v[it->index] = it->old_value; break;
                    case Variable::C3e: state.c3e[it->index] = it->old_value; break;
                }
            }
            rebuild();
        }
    };

    StageOneResampler::StageOneResampler(const Graph & g, const LemmaParams & p, const SParams & sp, LemmaState initial, std::uint64_t seed) :
        _imp(std::make_unique<Impl>(g, p, sp, std::move(initial), seed))
    {
        check_sizes(g, _imp->state);
    }

    StageOneResampler::~StageOneResampler() = default;

    auto StageOneResampler::done() const -> bool
    {
        return _imp->violated.empty();
    }

    auto StageOneResampler::violated_vertices() const -> std::size_t
    {
        return _imp->violated.size();
    }

    auto StageOneResampler::step() -> ResampledEvent
    {
        return _imp->step();
    }

    auto StageOneResampler::state() const -> const LemmaState &
    {
        return _imp->state;
    }

    auto StageOneResampler::restore_best() -> void
    {
        _imp->restore_best();
    }

    auto resample_until_valid(const Graph & g, const LemmaParams & p, const SParams & sp, std::uint64_t seed, int max_rounds) -> LemmaOutcome
    {
        if (max_rounds < 1)
            throw LemmaError{ "max_rounds must be at least 1" };

        StageOneResampler resampler{ g, p, sp, sample_stage_one(g, p, seed), derive_seed(seed, 1) };
        LemmaOutcome outcome;
        while (! resampler.done() && outcome.rounds < max_rounds) {
            resampler.step();
            ++outcome.rounds;
        }
        if (! resampler.done()) {
            outcome.exhausted = true;
            resampler.restore_best();
        }
        outcome.state = resampler.state();
        outcome.report = check_properties(g, outcome.state, sp, p);
        return outcome;
    }

    auto stage_two(const Graph & g, const LemmaState & st, const LemmaParams & p, std::uint64_t seed, int max_rounds) -> StageTwoOutcome
    {
        check_sizes(g, st);
        if (max_rounds < 1)
            throw LemmaError{ "max_rounds must be at least 1" };

        StageTwoOutcome out;
        out.state = st;
        auto & s = out.state;
        int m = g.edge_count();

        vector<char> h1(m), h2(m), h3(m);
        vector<int> deg1(g.vertex_count(), 0), deg2(g.vertex_count(), 0), deg3(g.vertex_count(), 0);
        for (EdgeId e = 0; e < m; ++e) {
            s.c3e[e] = s.formula(g, e);
            h1[e] = s.in_h1(g, e);
            h2[e] = s.in_h2(g, e);
            h3[e] = h1[e] && ! h2[e];
            auto & edge = g.edge(e);
            if (h1[e]) { ++deg1[edge.u]; ++deg1[edge.v]; ++out.stats.e1; }
            if (h2[e]) { ++deg2[edge.u]; ++deg2[edge.v]; ++out.stats.e2; }
            if (h3[e]) { ++deg3[edge.u]; ++deg3[edge.v]; ++out.stats.h3; }
            if (h1[e] || h2[e])
                ++out.stats.e1_or_e2;
        }
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            out.stats.max_degree_h1 = std::max(out.stats.max_degree_h1, deg1[v]);
            out.stats.max_degree_h2 = std::max(out.stats.max_degree_h2, deg2[v]);
            out.stats.max_degree_h3 = std::max(out.stats.max_degree_h3, deg3[v]);
        }

        for (EdgeId e = 0; e < m; ++e)
            if (h1[e])
                s.c3e[e] = 0;
        for (EdgeId e = 0; e < m; ++e)
            if (h2[e])
                s.c3e[e] = s.c3v[g.edge(e).u];

        Rng rng{ derive_seed(seed, 2) };
        for (EdgeId e = 0; e < m; ++e)
            if (h3[e])
                s.c3e[e] = rng.colour(p.r3);

        // events L_v: more than the 4° cap of one colour among v's H3 edges
        auto limit = static_cast<int64_t>(std::floor(caps_for(p)[Property::Four]));
        vector<int> counts;
        auto bad = [&] (Vertex v) {
            counts.assign(p.r3 + 1, 0);
            for (auto & inc : g.incidences(v))
                if (h3[inc.edge] && ++counts[s.c3e[inc.edge]] > limit)
                    return true;
            return false;
        };

        std::set<Vertex> violated;
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (bad(v))
                violated.insert(v);

        vector<Change> undo;
        std::size_t best_count = violated.size();
        while (! violated.empty() && out.rounds < max_rounds) {
            Vertex v = *violated.begin();
            vector<Vertex> touched{ v };
            for (auto & inc : g.incidences(v))
                if (h3[inc.edge]) {
                    undo.push_back({ Variable::C3e, inc.edge, s.c3e[inc.edge] });
                    s.c3e[inc.edge] = rng.colour(p.r3);
                    touched.push_back(inc.neighbour);
                }
            for (auto w : touched) {
                if (bad(w))
                    violated.insert(w);
                else
                    violated.erase(w);
            }
            ++out.rounds;
            if (violated.size() < best_count) {
                best_count = violated.size();
                undo.clear();
            }
        }
        if (! violated.empty()) {
            out.exhausted = true;
            for (auto it = undo.rbegin(); it != undo.rend(); ++it)
                s.c3e[it->index] = it->old_value;
        }

        s.stage = Stage::Completed;
        SParams sp{ p };
        out.report = check_properties(g, s, sp, p);
        return out;
    }

    auto report_to_json_string(const PropertyReport & r) -> string
    {
        nlohmann::ordered_json verdicts, caps, counts;
        for (auto & v : r.verdicts) {
            auto key = to_string(v.id);
            verdicts[key] = ! v.evaluated ? "n/a" : v.passed() ? "pass" : "fail";
            if (v.aux_cap)
                caps[key] = { v.cap, *v.aux_cap };
            else
                caps[key] = v.cap;
            counts[key] = v.violators.size();
        }
        nlohmann::ordered_json j;
        j["verdicts"] = verdicts;
        j["caps_used"] = caps;
        j["violator_counts"] = counts;
        j["all_pass"] = r.all_pass();
        return j.dump();
    }
}
