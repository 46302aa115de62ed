/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <nsd/construct.hh>
#include <nsd/rng.hh>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using std::int64_t;
using std::optional;
using std::pair;
using std::string;
using std::vector;

namespace nsd
{
    auto ConstructionState::span() const -> Colour
    {
        Colour result = 0;
        for (auto c : ct_v)
            result = std::max(result, c);
        for (auto c : ct_e)
            result = std::max(result, c);
        return result;
    }

    auto ConstructionState::colouring() const -> TotalColouring
    {
        TotalColouring c;
        c.k = std::max(1, span());
        c.vertex_colour = ct_v;
        c.edge_colour = ct_e;
        return c;
    }

    auto lift(const LemmaState & st, Colour width) -> ConstructionState
    {
        if (width < 1)
            throw ConstructionError{ "class width must be positive" };

        ConstructionState cs;
        cs.width = width;
        cs.class_v = st.c3v;
        cs.class_e = st.c3e;
        cs.ct_v.resize(st.c3v.size());
        cs.ct_e.resize(st.c3e.size());
        for (std::size_t v = 0; v < st.c3v.size(); ++v)
            cs.ct_v[v] = width * st.c3v[v];
        for (std::size_t e = 0; e < st.c3e.size(); ++e) {
            if (st.c3e[e] < 1)
                throw ConstructionError{ "edge " + std::to_string(e) + " has no c3 colour" };
            cs.ct_e[e] = width * st.c3e[e];
        }
        return cs;
    }

    namespace
    {
        auto smallest_missing(vector<Colour> & used, Colour from) -> Colour
        {
            std::sort(used.begin(), used.end());
            Colour c = from;
            for (auto u : used) {
                if (u == c)
                    ++c;
                else if (u > c)
                    break;
            }
            return c;
        }

        // Colours one class's objects with local colours 1, 2, ...
        struct ClassColourer
        {
            const Graph & g;
            const ConstructionState & cs;
            vector<Colour> local_v, local_e;

            ClassColourer(const Graph & g_, const ConstructionState & cs_) :
                g(g_), cs(cs_), local_v(g_.vertex_count(), 0), local_e(g_.edge_count(), 0)
            {
            }

            auto place_vertex(Vertex v, int beta) -> Colour
            {
                vector<Colour> used;
                for (auto & inc : g.incidences(v)) {
                    if (cs.class_v[inc.neighbour] == beta && local_v[inc.neighbour])
                        used.push_back(local_v[inc.neighbour]);
                    if (cs.class_e[inc.edge] == beta && local_e[inc.edge])
                        used.push_back(local_e[inc.edge]);
                }
                return local_v[v] = smallest_missing(used, 1);
            }

            auto greedy(const vector<Vertex> & vs, const vector<EdgeId> & es, int beta) -> Colour
            {
                Colour top = 0;
                for (auto e : es) {
                    vector<Colour> used;
                    for (Vertex x : { g.edge(e).u, g.edge(e).v }) {
                        if (cs.class_v[x] == beta && local_v[x])
                            used.push_back(local_v[x]);
                        for (auto & inc : g.incidences(x))
                            if (inc.edge != e && cs.class_e[inc.edge] == beta && local_e[inc.edge])
                                used.push_back(local_e[inc.edge]);
                    }
                    local_e[e] = smallest_missing(used, 1);
                    top = std::max(top, local_e[e]);
                }
                for (auto v : vs)
                    top = std::max(top, place_vertex(v, beta));
                return top;
            }

            auto misra_gries(const vector<Vertex> & vs, const vector<EdgeId> & es, int beta, int class_degree) -> optional<Colour>;

            auto clear(const vector<Vertex> & vs, const vector<EdgeId> & es) -> void
            {
                for (auto v : vs)
                    local_v[v] = 0;
                for (auto e : es)
                    local_e[e] = 0;
            }
        };

        // Misra-Gries edge colouring with class_degree + 1 colours (0-based here).
        struct MisraGries
        {
            vector<pair<int, int>> ends;
            vector<vector<pair<int, int>>> adj;    // (neighbour, local edge)
            vector<vector<int>> at;                // at[x][c] = local edge or -1
            vector<int> colour;
            int palette;

            MisraGries(int vertices, const vector<pair<int, int>> & edges, int palette_) :
                ends(edges), adj(vertices), at(vertices, vector<int>(palette_, -1)), colour(edges.size(), -1), palette(palette_)
            {
                for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
                    adj[edges[e].first].emplace_back(edges[e].second, e);
                    adj[edges[e].second].emplace_back(edges[e].first, e);
                }
            }

            auto other(int e, int x) const -> int { return ends[e].first == x ? ends[e].second : ends[e].first; }
            auto is_free(int x, int c) const -> bool { return at[x][c] == -1; }

            auto free_colour(int x) const -> int
            {
                for (int c = 0; c < palette; ++c)
                    if (is_free(x, c))
                        return c;
                return -1;
            }

            auto set(int e, int c) -> void
            {
                colour[e] = c;
                at[ends[e].first][c] = e;
                at[ends[e].second][c] = e;
            }

            auto unset(int e) -> void
            {
                int c = colour[e];
                if (c < 0)
                    return;
                at[ends[e].first][c] = -1;
                at[ends[e].second][c] = -1;
                colour[e] = -1;
            }

            auto edge_between(int u, int w) const -> int
            {
                for (auto & [x, e] : adj[u])
                    if (x == w)
                        return e;
                return -1;
            }

            auto colour_edge(int e0) -> bool
            {
                int u = ends[e0].first;
                vector<int> fan{ ends[e0].second };
                vector<char> in_fan(adj.size(), 0);
                in_fan[fan[0]] = 1;
                for (bool grew = true; grew; ) {
                    grew = false;
                    for (auto & [w, e] : adj[u])
                        if (! in_fan[w] && colour[e] >= 0 && is_free(fan.back(), colour[e])) {
                            fan.push_back(w);
                            in_fan[w] = 1;
                            grew = true;
                            break;
                        }
                }

                int c = free_colour(u), d = free_colour(fan.back());
                if (c < 0 || d < 0)
                    return false;

                if (c != d) {
                    vector<int> path;
                    int x = u, cur = d;
                    while (at[x][cur] != -1) {
                        int e = at[x][cur];
                        path.push_back(e);
                        x = other(e, x);
                        cur = cur == c ? d : c;
                    }
                    vector<int> old(path.size());
                    for (std::size_t i = 0; i < path.size(); ++i) {
                        old[i] = colour[path[i]];
                        unset(path[i]);
                    }
                    for (std::size_t i = 0; i < path.size(); ++i)
                        set(path[i], old[i] == c ? d : c);
                }

                for (std::size_t w = 0; w < fan.size(); ++w) {
                    if (! is_free(fan[w], d))
                        continue;
                    bool is_fan = true;
                    for (std::size_t j = 0; j + 1 <= w && is_fan; ++j) {
                        int next = colour[edge_between(u, fan[j + 1])];
                        is_fan = next >= 0 && is_free(fan[j], next);
                    }
                    if (! is_fan)
                        continue;

                    vector<int> edges(w + 1), shifted(w + 1);
                    for (std::size_t j = 0; j <= w; ++j)
                        edges[j] = edge_between(u, fan[j]);
                    for (std::size_t j = 0; j < w; ++j)
                        shifted[j] = colour[edges[j + 1]];
                    shifted[w] = d;
                    for (auto e : edges)
                        unset(e);
                    for (std::size_t j = 0; j <= w; ++j)
                        set(edges[j], shifted[j]);
                    return true;
                }
                return false;
            }
        };

        auto ClassColourer::misra_gries(const vector<Vertex> & vs, const vector<EdgeId> & es, int beta, int class_degree) -> optional<Colour>
        {
            std::map<Vertex, int> index;
            for (auto e : es)
                for (Vertex x : { g.edge(e).u, g.edge(e).v })
                    index.emplace(x, 0);
            int k = 0;
            for (auto & [x, i] : index)
                i = k++;

            vector<pair<int, int>> local;
            for (auto e : es)
                local.emplace_back(index[g.edge(e).u], index[g.edge(e).v]);
            MisraGries mg{ k, local, class_degree + 1 };
            for (int e = 0; e < static_cast<int>(local.size()); ++e)
                if (! mg.colour_edge(e))
                    return std::nullopt;

            Colour top = 0;
            for (std::size_t i = 0; i < es.size(); ++i) {
                local_e[es[i]] = mg.colour[i] + 1;
                top = std::max(top, local_e[es[i]]);
            }
            for (auto v : vs)
                top = std::max(top, place_vertex(v, beta));
            return top;
        }
    }

    auto properize(const Graph & g, const ConstructionState & cs) -> ProperizeResult
    {
        ProperizeResult result;
        result.state = cs;
        auto & out = result.state;

        std::map<int, pair<vector<Vertex>, vector<EdgeId>>> classes;
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            classes[cs.class_v[v]].first.push_back(v);
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            classes[cs.class_e[e]].second.push_back(e);
        result.classes = static_cast<int>(classes.size());

        ClassColourer colourer{ g, cs };
        for (auto & [beta, objects] : classes) {
            auto & [vs, es] = objects;

            std::map<Vertex, int> degree;
            int class_degree = 0;
            for (auto e : es)
                for (Vertex x : { g.edge(e).u, g.edge(e).v })
                    class_degree = std::max(class_degree, ++degree[x]);
            result.max_class_degree = std::max(result.max_class_degree, class_degree);

            Colour top = colourer.greedy(vs, es, beta);
            if (top > cs.width) {
                vector<Colour> keep_v, keep_e;
                for (auto v : vs)
                    keep_v.push_back(colourer.local_v[v]);
                for (auto e : es)
                    keep_e.push_back(colourer.local_e[e]);

                colourer.clear(vs, es);
                auto alt = colourer.misra_gries(vs, es, beta, class_degree);
                if (alt && *alt < top) {
                    top = *alt;
                    ++result.misra_gries_classes;
                }
                else {
                    for (std::size_t i = 0; i < vs.size(); ++i)
                        colourer.local_v[vs[i]] = keep_v[i];
                    for (std::size_t i = 0; i < es.size(); ++i)
                        colourer.local_e[es[i]] = keep_e[i];
                }
            }

            result.width_needed = std::max(result.width_needed, top);
            if (top > cs.width)
                result.fits = false;

            for (auto v : vs)
                out.ct_v[v] = (beta - 1) * cs.width + colourer.local_v[v];
            for (auto e : es)
                out.ct_e[e] = (beta - 1) * cs.width + colourer.local_e[e];
        }
        return result;
    }

    auto RiskParams::for_params(const LemmaParams & p, const SParams & sp) -> RiskParams
    {
        auto caps = caps_for(p);
        double b = static_cast<double>(sp.b_unit()), d = p.delta;
        auto binom2 = [] (double r) { return (r + 1) * r / 2; };

        RiskParams rp;
        rp.fault_cap = caps[Property::III] * b * p.r3 + b * p.r3 + b * d
            + b * (binom2(p.r1) * caps[Property::I] + binom2(p.r2) * caps[Property::II]);
        rp.repair_slack = 16.0 * d * p.ln_floor * p.scale();
        rp.window = 2.0 * (rp.fault_cap + rp.repair_slack);
        rp.covered_intervals = static_cast<int64_t>(std::ceil(2.0 * rp.window / sp.interval_len_value())) + 1;
        return rp;
    }

    auto compute_risky(const Graph & g, const LemmaState & st, const LemmaParams & p, const SParams & sp,
            const RiskParams & rp) -> vector<vector<Vertex>>
    {
        vector<optional<Rational>> score(g.vertex_count());
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (g.degree(v) > 0)
                score[v] = sp.s_of(g.degree(v), st.c1[v]);

        Rational window{ static_cast<int64_t>(std::floor(rp.window)) };
        vector<vector<Vertex>> risky(g.vertex_count());
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            for (auto & inc : g.incidences(v)) {
                Vertex u = inc.neighbour;
                if (! p.large(g.degree(u)))
                    continue;
                Rational diff = *score[u] - *score[v];
                if (diff < 0)
                    diff = -diff;
                if (diff <= window)
                    risky[v].push_back(u);
            }
        return risky;
    }

    auto HSelection::max_degree() const -> int
    {
        return degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
    }

    auto h_degree_cap(const LemmaParams & p) -> double
    {
        return 15.0 * p.ln_floor * p.scale();
    }

    auto select_H(const Graph & g, const LemmaParams & p, std::uint64_t seed, int max_rounds) -> HSelection
    {
        Rng rng{ seed };
        int n = g.vertex_count();
        vector<vector<EdgeId>> picks(n);
        vector<int> multiplicity(g.edge_count(), 0);

        HSelection h;
        h.cap = h_degree_cap(p);
        h.degree.assign(n, 0);
        auto limit = static_cast<int>(std::floor(h.cap));

        auto add = [&] (EdgeId e, int delta) {
            int before = multiplicity[e];
            multiplicity[e] += delta;
            if ((before == 0) != (multiplicity[e] == 0)) {
                int change = before == 0 ? 1 : -1;
                h.degree[g.edge(e).u] += change;
                h.degree[g.edge(e).v] += change;
            }
        };
        auto draw = [&] (Vertex v) {
            for (auto e : picks[v])
                add(e, -1);
            picks[v].clear();
            auto incs = g.incidences(v);
            int d = static_cast<int>(incs.size());
            if (d <= 2) {
                for (auto & inc : incs)
                    picks[v].push_back(inc.edge);
            }
            else {
                auto i = static_cast<int>(rng.below(d)), j = static_cast<int>(rng.below(d - 1));
                if (j >= i)
                    ++j;
                picks[v] = { incs[i].edge, incs[j].edge };
            }
            for (auto e : picks[v])
                add(e, 1);
        };

        for (Vertex v = 0; v < n; ++v)
            if (g.degree(v) > 0 && p.large(g.degree(v)))
                draw(v);

        std::set<Vertex> violated;
        for (Vertex v = 0; v < n; ++v)
            if (h.degree[v] > limit)
                violated.insert(v);

        auto best_picks = picks;
        std::size_t best = violated.size();
        while (! violated.empty() && h.rounds < max_rounds) {
            Vertex v = *violated.begin();
            std::set<Vertex> touched{ v };
            for (auto & inc : g.incidences(v))
                if (p.large(g.degree(inc.neighbour))) {
                    for (auto e : picks[inc.neighbour])
                        touched.insert({ g.edge(e).u, g.edge(e).v });
                    draw(inc.neighbour);
                    for (auto e : picks[inc.neighbour])
                        touched.insert({ g.edge(e).u, g.edge(e).v });
                }
            for (auto w : touched) {
                if (h.degree[w] > limit)
                    violated.insert(w);
                else
                    violated.erase(w);
            }
            ++h.rounds;
            if (violated.size() < best) {
                best = violated.size();
                best_picks = picks;
            }
        }

        if (! violated.empty()) {
            h.exhausted = true;
            for (Vertex v = 0; v < n; ++v) {
                for (auto e : picks[v])
                    add(e, -1);
                picks[v] = best_picks[v];
                for (auto e : picks[v])
                    add(e, 1);
            }
        }

        for (EdgeId e = 0; e < g.edge_count(); ++e)
            if (multiplicity[e] > 0)
                h.edges.push_back(e);
        return h;
    }

    namespace
    {
        auto sums_of(const Graph & g, const ConstructionState & cs) -> vector<Sum>
        {
            vector<Sum> s(g.vertex_count());
            for (Vertex v = 0; v < g.vertex_count(); ++v) {
                s[v] = cs.ct_v[v];
                for (auto & inc : g.incidences(v))
                    s[v] += cs.ct_e[inc.edge];
            }
            return s;
        }

        auto first_allowed(vector<Sum> & forbidden, Sum from) -> Sum
        {
            std::sort(forbidden.begin(), forbidden.end());
            Sum c = from;
            for (auto f : forbidden) {
                if (f == c)
                    ++c;
                else if (f > c)
                    break;
            }
            return c;
        }
    }

    auto recolour_H(const Graph & g, ConstructionState & cs, const HSelection & h,
            const vector<vector<Vertex>> & risky, Colour a_bound, Mode mode) -> RecolourStats
    {
        RecolourStats stats;
        stats.a_first = cs.span() + 1;
        stats.a_bound = a_bound;
        if (h.edges.empty())
            return stats;

        auto s = sums_of(g, cs);
        for (auto e : h.edges) {
            Vertex u = g.edge(e).u, v = g.edge(e).v;
            Sum old = cs.ct_e[e];
            vector<Sum> forbidden;
            for (Vertex x : { u, v })
                for (auto & inc : g.incidences(x))
                    if (inc.edge != e)
                        forbidden.push_back(cs.ct_e[inc.edge]);
            for (auto w : risky[u])
                if (w != v)
                    forbidden.push_back(s[w] - s[u] + old);
            for (auto w : risky[v])
                if (w != u)
                    forbidden.push_back(s[w] - s[v] + old);

            Sum c = first_allowed(forbidden, stats.a_first);
            if (c > a_bound) {
                if (mode == Mode::Strict)
                    throw ConstructionError{ "reserve colours exhausted at edge " + std::to_string(u + 1) + " " + std::to_string(v + 1) };
                stats.a_grown = true;
            }
            s[u] += c - old;
            s[v] += c - old;
            cs.ct_e[e] = static_cast<Colour>(c);
            stats.a_last_used = std::max<Colour>(stats.a_last_used, cs.ct_e[e]);
            ++stats.recoloured;
        }
        return stats;
    }

    auto repair_vertices(const Graph & g, ConstructionState & cs, const vector<char> & which, Colour pool) -> RepairStats
    {
        RepairStats stats;
        stats.pool = pool;
        auto s = sums_of(g, cs);
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (! which[v])
                continue;
            Sum own = s[v] - cs.ct_v[v];
            vector<Sum> forbidden;
            for (auto & inc : g.incidences(v)) {
                forbidden.push_back(cs.ct_v[inc.neighbour]);
                forbidden.push_back(cs.ct_e[inc.edge]);
                forbidden.push_back(s[inc.neighbour] - own);
            }
            auto c = static_cast<Colour>(first_allowed(forbidden, 1));
            if (c > pool)
                stats.pool_extended = true;
            if (c != cs.ct_v[v])
                ++stats.repaired;
            cs.ct_v[v] = c;
            s[v] = own + c;
        }
        return stats;
    }

    auto repair_small_degree(const Graph & g, ConstructionState & cs, const LemmaParams & p) -> RepairStats
    {
        vector<char> which(g.vertex_count(), 0);
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            which[v] = ! p.large(g.degree(v));
        return repair_vertices(g, cs, which, cs.span());
    }

    auto greedy_nsd(const Graph & g) -> TotalColouring
    {
        ConstructionState cs;
        cs.class_v.assign(g.vertex_count(), 1);
        cs.class_e.assign(g.edge_count(), 1);
        cs.ct_v.assign(g.vertex_count(), 0);
        cs.ct_e.assign(g.edge_count(), 0);

        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            vector<Colour> used;
            for (auto & inc : g.incidences(v))
                if (cs.ct_v[inc.neighbour])
                    used.push_back(cs.ct_v[inc.neighbour]);
            cs.ct_v[v] = smallest_missing(used, 1);
        }
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            vector<Colour> used;
            for (Vertex x : { g.edge(e).u, g.edge(e).v }) {
                used.push_back(cs.ct_v[x]);
                for (auto & inc : g.incidences(x))
                    if (cs.ct_e[inc.edge])
                        used.push_back(cs.ct_e[inc.edge]);
            }
            cs.ct_e[e] = smallest_missing(used, 1);
        }

        vector<char> all(g.vertex_count(), 1);
        repair_vertices(g, cs, all, cs.span());
        return cs.colouring();
    }

    auto theorem_bound(int delta) -> double
    {
        if (delta <= 0)
            return 0.0;
        double ln_floor = std::max(std::log(static_cast<double>(delta)), 1.0);
        return delta + 139.0 * std::pow(static_cast<double>(delta), 5.0 / 6.0) * std::pow(ln_floor, 1.0 / 6.0);
    }

    namespace
    {
        // Largest observed value of each capped quantity, computed directly from the state.
        auto observe(const Graph & g, const LemmaState & st, const SParams & sp, const LemmaParams & p) -> vector<CapObservation>
        {
            auto caps = caps_for(p);
            std::map<string, double> seen;
            for (auto q : all_properties)
                seen[to_string(q)] = 0.0;
            seen["1° (aux)"] = 0.0;

            auto raise = [&] (const string & key, double value) { seen[key] = std::max(seen[key], value); };
            for (Vertex v = 0; v < g.vertex_count(); ++v) {
                int d = g.degree(v);
                std::map<int, int> by_c1, by_c2, by_c3v, by_formula, by_c3e, outside, inside;
                std::map<int64_t, int> by_alpha;
                int hits = 0, exceptions = 0;
                for (auto & inc : g.incidences(v)) {
                    Vertex u = inc.neighbour;
                    EdgeId e = inc.edge;
                    ++by_c1[st.c1[u]];
                    ++by_c2[st.c2[e]];
                    ++by_c3v[st.c3v[u]];
                    int f = st.formula(g, e);
                    ++by_formula[f];
                    hits += f == st.c3v[v] || f == st.c3v[u];
                    exceptions += st.c3e[e] != f;
                    ++by_c3e[st.c3e[e]];
                    ++(st.in_h3(g, e) ? inside : outside)[st.c3e[e]];
                    if (p.large(g.degree(u)))
                        ++by_alpha[sp.alpha(g.degree(u), st.c1[u])];
                    if (u > v && st.c3v[u] == st.c3v[v] && st.c3e[e] != st.c3v[v])
                        raise("V", seen["V"] + 1);
                }
                if (p.large(d) && d > 0) {
                    for (int c = 1; c <= p.r1; ++c)
                        raise("I", std::abs(by_c1[c] - static_cast<double>(d) / p.r1));
                    for (int c = 1; c <= p.r2; ++c)
                        raise("II", std::abs(by_c2[c] - static_cast<double>(d) / p.r2));
                    for (auto & [a, k] : by_alpha)
                        raise("VI", k);
                }
                auto top = [] (const std::map<int, int> & m) {
                    int r = 0;
                    for (auto & [k, c] : m)
                        r = std::max(r, c);
                    return static_cast<double>(r);
                };
                raise("2°", top(by_c3v));
                raise("1°", top(by_formula));
                raise("1° (aux)", hits);
                raise("III", exceptions);
                raise("IV", top(by_c3e));
                raise("3°", top(outside));
                raise("4°", top(inside));
            }

            vector<CapObservation> result;
            for (auto q : all_properties) {
                result.push_back({ to_string(q), caps[q], seen[to_string(q)] });
                if (q == Property::One)
                    result.push_back({ "1° (aux)", caps.one_aux, seen["1° (aux)"] });
            }
            return result;
        }

        struct Attempt
        {
            ConstructionState state;
            RunReport report;
        };

        auto attempt(const Graph & g, const LemmaParams & p, std::uint64_t seed, int rounds, RunReport report) -> Attempt
        {
            SParams sp{ p };
            report.r1 = p.r1;
            report.r2 = p.r2;
            report.r3 = p.r3;

            auto one = resample_until_valid(g, p, sp, derive_seed(seed, 0), rounds);
            report.stage_one_rounds = one.rounds;
            report.stage_one_exhausted = one.exhausted;
            if (one.exhausted && p.mode == Mode::Strict)
                throw ConstructionError{ "stage one resampling ran out of rounds" };

            auto two = stage_two(g, one.state, p, derive_seed(seed, 1), rounds);
            report.stage_two_rounds = two.rounds;
            report.stage_two_exhausted = two.exhausted;
            report.stage_two = two.stats;
            report.lemma_properties_pass = two.report.all_pass();
            report.caps = observe(g, two.state, sp, p);
            if (two.exhausted && p.mode == Mode::Strict)
                throw ConstructionError{ "stage two resampling ran out of rounds" };

            Colour width = static_cast<Colour>(sp.b_unit());
            report.width_initial = width;
            auto pr = properize(g, lift(two.state, width));
            if (! pr.fits) {
                if (p.mode == Mode::Strict)
                    throw ConstructionError{ "a colour class needs " + std::to_string(pr.width_needed) + " colours, width is " + std::to_string(width) };
                width = pr.width_needed;
                report.width_widened = true;
                pr = properize(g, lift(two.state, width));
                if (! pr.fits)
                    throw ConstructionError{ "properize did not fit after widening" };
            }
            report.width_used = width;
            report.lift_span = lift(two.state, width).span();

            auto cs = pr.state;
            {
                auto s = sums_of(g, cs);
                for (Vertex v = 0; v < g.vertex_count(); ++v)
                    if (g.degree(v) > 0 && p.large(g.degree(v))) {
                        Rational diff = Rational{ s[v] } - sp.s_of(g.degree(v), two.state.c1[v]);
                        report.max_fault = std::max(report.max_fault, std::abs(diff.convert_to<double>()));
                    }
            }

            report.risk = RiskParams::for_params(p, sp);
            auto risky = compute_risky(g, two.state, p, sp, report.risk);
            for (auto & r : risky)
                report.max_risky = std::max(report.max_risky, r.size());
            report.risky_audit_cap = report.risk.covered_intervals * caps_for(p)[Property::VI];

            auto h = select_H(g, p, derive_seed(seed, 2), rounds);
            report.h_edges = static_cast<int>(h.edges.size());
            report.h_max_degree = h.max_degree();
            report.h_cap = h.cap;
            report.h_rounds = h.rounds;
            report.h_exhausted = h.exhausted;

            report.recolour = recolour_H(g, cs, h, risky, static_cast<Colour>(std::floor(theorem_bound(p.delta))), p.mode);
            report.repair = repair_small_degree(g, cs, p);
            return { std::move(cs), std::move(report) };
        }

        auto finish(const Graph & g, TotalColouring & c, RunReport & r) -> void
        {
            r.span = c.span();
            r.theorem = theorem_bound(r.delta);
            r.within_theorem = r.span <= r.theorem;
            r.within_delta_plus_3 = r.span <= r.delta + 3;
            r.proper_violations = check_proper(g, c).size();
            r.sum_violations = check_nsd(g, c).size();
        }
    }

    auto construct(const Graph & g, const ConstructConfig & config) -> ConstructResult
    {
        if (config.retries < 0 || config.rounds < 1)
            throw ConstructionError{ "retries must be non-negative and rounds positive" };

        RunReport base;
        base.n = g.vertex_count();
        base.m = g.edge_count();
        base.delta = g.max_degree();
        base.mode_requested = config.mode;
        base.mode_used = config.mode;
        if (config.mode == Mode::Strict && ! strict_feasibility(base.delta).all()) {
            base.mode_used = Mode::Permissive;
            base.downgraded = true;
        }

        double slack = config.slack;
        vector<string> failures;
        for (int i = 0; i <= config.retries; ++i) {
            auto p = LemmaParams::for_delta(base.delta, base.mode_used, slack);
            RunReport report = base;
            report.slack_used = slack;
            report.attempts = i + 1;
            try {
                auto a = attempt(g, p, derive_seed(config.seed, i), config.rounds, report);
                auto colouring = a.state.colouring();
                finish(g, colouring, a.report);
                if (a.report.valid()) {
                    a.report.attempt_failures = failures;
                    return { std::move(colouring), std::move(a.report) };
                }
                failures.push_back("attempt " + std::to_string(i + 1) + ": " + std::to_string(a.report.proper_violations)
                        + " properness and " + std::to_string(a.report.sum_violations) + " sum violations");
            }
            catch (const ConstructionError & e) {
                if (base.mode_used == Mode::Strict)
                    throw;
                failures.push_back("attempt " + std::to_string(i + 1) + ": " + e.what());
            }
            slack *= 2.0;
        }

        ConstructResult result;
        result.colouring = greedy_nsd(g);
        result.report = base;
        result.report.fallback = true;
        result.report.attempts = config.retries + 1;
        result.report.slack_used = slack / 2.0;
        result.report.attempt_failures = failures;
        finish(g, result.colouring, result.report);
        return result;
    }

    auto report_to_json_string(const RunReport & r) -> string
    {
        nlohmann::ordered_json j;
        j["n"] = r.n;
        j["m"] = r.m;
        j["delta"] = r.delta;
        j["mode_requested"] = to_string(r.mode_requested);
        j["mode_used"] = to_string(r.mode_used);
        j["downgraded"] = r.downgraded;
        j["slack_used"] = r.slack_used;
        j["attempts"] = r.attempts;
        j["attempt_failures"] = r.attempt_failures;
        j["fallback"] = r.fallback;
        j["palettes"] = { { "r1", r.r1 }, { "r2", r.r2 }, { "r3", r.r3 } };
        j["class_width"] = { { "initial", r.width_initial }, { "used", r.width_used }, { "widened", r.width_widened } };
        j["lemma"] = {
            { "stage_one_rounds", r.stage_one_rounds },
            { "stage_one_exhausted", r.stage_one_exhausted },
            { "stage_two_rounds", r.stage_two_rounds },
            { "stage_two_exhausted", r.stage_two_exhausted },
            { "properties_pass", r.lemma_properties_pass },
            { "e1", r.stage_two.e1 }, { "e2", r.stage_two.e2 }, { "h3", r.stage_two.h3 },
            { "max_degree_h1", r.stage_two.max_degree_h1 },
            { "max_degree_h2", r.stage_two.max_degree_h2 },
            { "max_degree_h3", r.stage_two.max_degree_h3 } };

        nlohmann::ordered_json caps = nlohmann::ordered_json::array();
        for (auto & c : r.caps)
            caps.push_back({ { "property", c.property }, { "cap", c.cap }, { "observed", c.observed } });
        j["caps"] = caps;

        j["risk"] = {
            { "fault_cap", r.risk.fault_cap },
            { "observed_max_fault", r.max_fault },
            { "repair_slack", r.risk.repair_slack },
            { "window", r.risk.window },
            { "covered_intervals", r.risk.covered_intervals },
            { "max_risky", r.max_risky },
            { "risky_audit_cap", r.risky_audit_cap } };
        j["h"] = {
            { "edges", r.h_edges }, { "max_degree", r.h_max_degree }, { "cap", r.h_cap },
            { "rounds", r.h_rounds }, { "exhausted", r.h_exhausted } };
        j["reserve"] = {
            { "first", r.recolour.a_first }, { "bound", r.recolour.a_bound },
            { "last_used", r.recolour.a_last_used }, { "grown", r.recolour.a_grown },
            { "recoloured", r.recolour.recoloured } };
        j["repair"] = { { "repaired", r.repair.repaired }, { "pool", r.repair.pool }, { "pool_extended", r.repair.pool_extended } };
        j["lift_span"] = r.lift_span;
        j["span"] = r.span;
        j["delta_plus_3"] = r.delta + 3;
        j["theorem_bound"] = r.theorem;
        j["within_theorem_bound"] = r.within_theorem;
        j["within_delta_plus_3"] = r.within_delta_plus_3;
        j["proper_violations"] = r.proper_violations;
        j["sum_violations"] = r.sum_violations;
        j["valid"] = r.valid();
        return j.dump();
    }
}
