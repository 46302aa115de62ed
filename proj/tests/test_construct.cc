/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nsd/construct.hh>

#include <json.hpp>

using namespace nsd;

namespace
{
    auto completed(const Graph & g, const LemmaParams & p, std::uint64_t seed) -> LemmaState
    {
        SParams sp{ p };
        auto one = resample_until_valid(g, p, sp, seed, 500);
        return stage_two(g, one.state, p, seed, 500).state;
    }
}

TEST_CASE("lift")
{
    LemmaState st;
    st.c3v = { 1, 2 };
    st.c3e = { 3 };
    auto cs = lift(st, 10);
    CHECK(cs.ct_e[0] == 30);
    CHECK(cs.ct_v == std::vector<Colour>{ 10, 20 });
    CHECK(cs.addition_e(0) == 0);
    CHECK(cs.span() == 30);

    st.c3e = { 0 };
    CHECK_THROWS_AS(lift(st, 10), ConstructionError);
    CHECK_THROWS_AS(lift(st, 0), ConstructionError);
}

TEST_CASE("edgeless graph")
{
    Graph g{ 4, {} };
    auto p = LemmaParams::for_delta(0);
    auto st = completed(g, p, 1);
    auto cs = lift(st, 7);
    CHECK(cs.span() == 7 * *std::max_element(st.c3v.begin(), st.c3v.end()));

    auto r = construct(g, {});
    CHECK(r.report.valid());
    CHECK(r.colouring.span() == 1);
}

TEST_CASE("properize keeps classes and makes the colouring proper")
{
    auto g = random_graph(600, 0.08, 2);
    auto p = LemmaParams::for_delta(g.max_degree(), Mode::Permissive, 2.0);
    SParams sp{ p };
    auto st = completed(g, p, 5);
    auto pr = properize(g, lift(st, static_cast<Colour>(sp.b_unit())));
    CHECK(pr.fits);
    CHECK(pr.width_needed <= sp.b_unit());
    CHECK(pr.classes >= 1);
    CHECK(check_proper(g, pr.state.colouring()).empty());
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        CHECK(pr.state.addition_v(v) <= 0);
        CHECK(pr.state.addition_v(v) > -pr.state.width);
    }
}

TEST_CASE("properize reports a class that does not fit")
{
    // every object in class 1 of width 2: K4 needs more than 2 colours
    auto g = complete_graph(4);
    LemmaState st;
    st.c3v.assign(4, 1);
    st.c3e.assign(6, 1);
    auto pr = properize(g, lift(st, 2));
    CHECK(! pr.fits);
    CHECK(pr.width_needed >= 5);
    auto wide = properize(g, lift(st, pr.width_needed));
    CHECK(wide.fits);
    CHECK(check_proper(g, wide.state.colouring()).empty());
}

TEST_CASE("edge classes fit in degree + 1 colours")
{
    // edges alone in class 1: Vizing's bound is reached by the edge colouring fallback
    int used_fallback = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto g = random_graph(40, 0.3, seed);
        LemmaState st;
        st.c3v.assign(g.vertex_count(), 2);
        st.c3e.assign(g.edge_count(), 1);
        auto pr = properize(g, lift(st, g.max_degree() + 1));
        CHECK(pr.fits);
        CHECK(check_proper(g, pr.state.colouring()).empty());
        used_fallback += pr.misra_gries_classes;
    }
    CHECK(used_fallback > 0);
}

TEST_CASE("risky sets")
{
    auto g = star_graph(3);
    auto p = LemmaParams::for_delta(3);
    SParams sp{ p };
    LemmaState st;
    st.c1 = { 1, 1, 1, 1 };
    auto rp = RiskParams::for_params(p, sp);
    CHECK(rp.window > 0);
    CHECK(rp.covered_intervals >= 1);
    auto risky = compute_risky(g, st, p, sp, rp);
    // leaves have degree 1 and 3 * 1 >= 3, so everyone is large here
    CHECK(risky[0] == std::vector<Vertex>{ 1, 2, 3 });
    CHECK(risky[1] == std::vector<Vertex>{ 0 });

    auto big = star_graph(10);
    auto q = LemmaParams::for_delta(10);
    SParams sq{ q };
    st.c1.assign(11, 1);
    auto r2 = compute_risky(big, st, q, sq, RiskParams::for_params(q, sq));
    CHECK(r2[0].empty());
    CHECK(r2[1] == std::vector<Vertex>{ 0 });
}

TEST_CASE("select H")
{
    auto k3 = complete_graph(3);
    auto h = select_H(k3, LemmaParams::for_delta(2), 1, 10);
    CHECK(h.edges == std::vector<EdgeId>{ 0, 1, 2 });
    CHECK(h.degree == std::vector<int>{ 2, 2, 2 });

    auto g = random_graph(1000, 0.05, 6);
    auto p = LemmaParams::for_delta(g.max_degree(), Mode::Permissive, 1.0);
    h = select_H(g, p, 3, 1000);
    CHECK(! h.exhausted);
    CHECK(h.max_degree() <= h.cap);
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (p.large(g.degree(v)))
            CHECK(h.degree[v] >= 2);
    CHECK(std::is_sorted(h.edges.begin(), h.edges.end()));
}

TEST_CASE("recolour H with an empty H changes nothing")
{
    auto g = cycle_graph(5);
    LemmaState st;
    st.c3v = { 1, 2, 1, 2, 3 };
    st.c3e = { 3, 3, 3, 3, 1 };
    auto cs = lift(st, 4);
    auto before = cs;
    auto stats = recolour_H(g, cs, HSelection{}, std::vector<std::vector<Vertex>>(5), 100, Mode::Strict);
    CHECK(cs.ct_e == before.ct_e);
    CHECK(stats.recoloured == 0);
}

TEST_CASE("recolour H separates large neighbours")
{
    auto g = random_graph(800, 0.06, 12);
    auto p = LemmaParams::for_delta(g.max_degree(), Mode::Permissive, 2.0);
    SParams sp{ p };
    auto st = completed(g, p, 7);
    auto cs = properize(g, lift(st, static_cast<Colour>(sp.b_unit()))).state;
    auto risky = compute_risky(g, st, p, sp, RiskParams::for_params(p, sp));
    auto h = select_H(g, p, 2, 500);
    auto stats = recolour_H(g, cs, h, risky, static_cast<Colour>(theorem_bound(p.delta)), Mode::Permissive);
    CHECK(stats.recoloured == static_cast<int>(h.edges.size()));
    CHECK(stats.a_last_used >= stats.a_first);

    auto c = cs.colouring();
    CHECK(check_proper(g, c).empty());
    auto s = weighted_degrees(g, c);
    for (auto & e : g.edges())
        if (p.large(g.degree(e.u)) && p.large(g.degree(e.v)))
            CHECK(s[e.u] != s[e.v]);
}

TEST_CASE("repair")
{
    Graph g{ 2, {} };
    ConstructionState cs;
    cs.class_v = { 1, 1 };
    cs.ct_v = { 1, 1 };
    auto stats = repair_vertices(g, cs, { 1, 1 }, 1);
    CHECK(cs.ct_v == std::vector<Colour>{ 1, 1 });
    CHECK(stats.repaired == 0);

    // a leaf on a hub: avoid the hub's colour, the edge colour and the hub's sum
    auto star = star_graph(4);
    ConstructionState st;
    st.class_v.assign(5, 1);
    st.class_e.assign(4, 1);
    st.ct_v = { 1, 1, 1, 1, 1 };
    st.ct_e = { 2, 3, 4, 5 };
    std::vector<char> leaves{ 0, 1, 1, 1, 1 };
    repair_vertices(star, st, leaves, 5);
    auto c = st.colouring();
    CHECK(is_nsd_total_colouring(star, c));
}

TEST_CASE("greedy fallback is always valid")
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto g = random_graph(5 + static_cast<int>(seed % 40), 0.05 + (seed % 9) * 0.1, seed);
        CHECK(is_nsd_total_colouring(g, greedy_nsd(g)));
    }
    CHECK(is_nsd_total_colouring(complete_graph(7), greedy_nsd(complete_graph(7))));
}

TEST_CASE("construct on K2 and small graphs")
{
    auto r = construct(complete_graph(2), {});
    CHECK(r.report.valid());
    CHECK(r.colouring.span() >= 3);
    CHECK(theorem_bound(0) == 0.0);

    for (auto g : { complete_graph(5), cycle_graph(7), star_graph(9), path_graph(6) }) {
        auto c = construct(g, {});
        CHECK(c.report.valid());
        CHECK(is_nsd_total_colouring(g, c.colouring));
    }
}

TEST_CASE("strict requests below the feasibility threshold run permissive")
{
    ConstructConfig config;
    config.mode = Mode::Strict;
    auto r = construct(cycle_graph(6), config);
    CHECK(r.report.downgraded);
    CHECK(r.report.mode_used == Mode::Permissive);
    CHECK(r.report.valid());
}

TEST_CASE("end to end at delta about 60")
{
    auto g = random_graph(2000, 0.0185, 21);
    ConstructConfig config;
    config.seed = 5;
    auto r = construct(g, config);
    CHECK(r.report.valid());
    CHECK(! r.report.fallback);
    CHECK(check_proper(g, r.colouring).empty());
    CHECK(check_nsd(g, r.colouring).empty());
    CHECK(r.report.theorem > 2 * r.report.delta);
    if (r.report.lemma_properties_pass)
        CHECK(r.report.max_risky <= r.report.risky_audit_cap);
    CHECK(r.report.h_max_degree <= r.report.h_cap);

    auto again = construct(g, config);
    CHECK(again.colouring == r.colouring);
    CHECK(report_to_json_string(again.report) == report_to_json_string(r.report));

    auto j = nlohmann::json::parse(report_to_json_string(r.report));
    CHECK(j["valid"] == true);
    CHECK(j["caps"].size() == 11);
    CHECK(j.contains("theorem_bound"));
}
