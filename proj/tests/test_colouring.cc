/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nsd/colouring.hh>

#include <json.hpp>

using namespace nsd;

namespace
{
    // K3 with vertex colours 1 2 3 and edge colours chosen so sums are 7, 8, 9.
    auto triangle() -> std::pair<Graph, TotalColouring>
    {
        auto g = complete_graph(3);
        TotalColouring c{ g, 5 };
        c.vertex_colour = { 1, 2, 3 };
        // edges (0,1) (0,2) (1,2)
        c.edge_colour = { 3, 2, 1 };
        return { g, c };
    }
}

TEST_CASE("weighted degrees")
{
    auto [g, c] = triangle();
    CHECK(weighted_degree(g, c, 0) == 1 + 3 + 2);
    CHECK(weighted_degree(g, c, 1) == 2 + 3 + 1);
    CHECK(weighted_degree(g, c, 2) == 3 + 2 + 1);
    CHECK(weighted_degrees(g, c) == std::vector<Sum>{ 6, 6, 6 });
    CHECK_THROWS_AS(weighted_degree(g, c, 3), ColouringError);
}

TEST_CASE("proper but not sum distinguishing")
{
    auto [g, c] = triangle();
    CHECK(check_proper(g, c).empty());
    auto sums = check_nsd(g, c);
    CHECK(sums.size() == 3);
    CHECK(sums[0] == Violation{ ViolationKind::SumConflict, { 0, 1 }, { 0 } });
    CHECK(! is_nsd_total_colouring(g, c));
}

TEST_CASE("a valid colouring of K3 with 5 colours")
{
    auto g = complete_graph(3);
    TotalColouring c{ g, 5 };
    c.vertex_colour = { 1, 2, 3 };
    c.edge_colour = { 3, 4, 5 };
    CHECK(check_proper(g, c).empty());
    CHECK(weighted_degrees(g, c) == std::vector<Sum>{ 8, 10, 12 });
    CHECK(is_nsd_total_colouring(g, c));
    CHECK(c.span() == 5);
}

TEST_CASE("each kind of properness violation")
{
    auto g = path_graph(3);
    TotalColouring c{ g, 4 };
    c.vertex_colour = { 1, 1, 2 };
    c.edge_colour = { 3, 3 };
    auto v = check_proper(g, c);
    CHECK(std::find(v.begin(), v.end(), Violation{ ViolationKind::VertexVertex, { 0, 1 }, { 0 } }) != v.end());
    CHECK(std::find(v.begin(), v.end(), Violation{ ViolationKind::EdgeEdge, { 1 }, { 0, 1 } }) != v.end());
    CHECK(v == check_proper_serial(g, c));

    c.edge_colour = { 1, 4 };
    v = check_proper(g, c);
    CHECK(std::find(v.begin(), v.end(), Violation{ ViolationKind::VertexEdge, { 0 }, { 0 } }) != v.end());
    CHECK(to_string(ViolationKind::VertexEdge) == "vertex-edge");
}

TEST_CASE("colouring files round trip")
{
    auto g = complete_graph(3);
    TotalColouring c{ g, 5 };
    c.vertex_colour = { 1, 2, 3 };
    c.edge_colour = { 3, 4, 5 };
    auto text = colouring_to_string(g, c);
    CHECK(parse_colouring(text, g) == c);

    CHECK_THROWS_AS(parse_colouring("k 5\nv 1 1\n", g), ColouringError);
    CHECK_THROWS_AS(parse_colouring("k 2\nv 1 1\nv 2 2\nv 3 3\ne 1 2 1\ne 1 3 1\ne 2 3 1\n", g), ColouringError);
    CHECK_THROWS_AS(parse_colouring("k 5\nv 1 1\nv 2 2\nv 3 3\ne 1 2 1\ne 1 3 1\ne 2 4 1\n", g), ColouringError);
}

TEST_CASE("violation json")
{
    auto g = path_graph(3);
    auto j = nlohmann::json::parse(violation_to_json(g, Violation{ ViolationKind::EdgeEdge, { 1 }, { 0, 1 } }));
    CHECK(j["kind"] == "edge-edge");
    CHECK(j["vertices"] == nlohmann::json::array({ 2 }));
    CHECK(j["edges"] == nlohmann::json::array({ { 1, 2 }, { 2, 3 } }));
}

TEST_CASE("validate")
{
    auto g = path_graph(2);
    TotalColouring c{ g, 3 };
    CHECK_NOTHROW(c.validate(g));
    c.edge_colour[0] = 4;
    CHECK_THROWS_AS(c.validate(g), ColouringError);
    c.edge_colour.clear();
    CHECK_THROWS_AS(c.validate(g), ColouringError);
}
