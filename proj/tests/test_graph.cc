/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nsd/graph.hh>

#include <algorithm>
#include <vector>

using namespace nsd;

TEST_CASE("edges are normalised, sorted and deduplicated")
{
    Graph g{ 4, { { 2, 0 }, { 1, 3 }, { 0, 2 }, { 0, 1 } } };
    CHECK(g.edge_count() == 3);
    CHECK(g.edge(0) == Edge{ 0, 1 });
    CHECK(g.edge(1) == Edge{ 0, 2 });
    CHECK(g.edge(2) == Edge{ 1, 3 });
    CHECK(g.max_degree() == 2);
    CHECK(g.edge_id(2, 0) == 1);
    CHECK(g.edge_id(2, 3) == -1);
    CHECK(g.adjacent(3, 1));
    CHECK(! g.adjacent(0, 3));

    auto incs = g.incidences(0);
    REQUIRE(incs.size() == 2);
    CHECK(incs[0].neighbour == 1);
    CHECK(incs[1].neighbour == 2);
    CHECK(incs[1].edge == 1);
}

TEST_CASE("bad edges are rejected")
{
    CHECK_THROWS_AS((Graph{ 3, { { 1, 1 } } }), GraphError);
    CHECK_THROWS_AS((Graph{ 3, { { 0, 3 } } }), GraphError);
    CHECK_THROWS_AS((Graph{ 3, { { -1, 2 } } }), GraphError);
}

TEST_CASE("graph files round trip")
{
    auto g = random_graph(12, 0.4, 5);
    auto text = graph_to_string(g);
    CHECK(parse_graph(text) == g);
    CHECK(text.rfind("p edge 12 " + std::to_string(g.edge_count()) + "\n", 0) == 0);

    auto h = parse_graph("c comment\np edge 3 2\ne 1 2\n\ne 3 2\n");
    CHECK(h.vertex_count() == 3);
    CHECK(h.edge_count() == 2);
    CHECK(h.edge(1) == Edge{ 1, 2 });
}

TEST_CASE("graph file errors")
{
    CHECK_THROWS_AS(parse_graph("e 1 2\n"), GraphError);
    CHECK_THROWS_AS(parse_graph("p edge 2\n"), GraphError);
    CHECK_THROWS_AS(parse_graph("p graph 2 1\ne 1 2\n"), GraphError);
    CHECK_THROWS_AS(parse_graph("p edge 2 1\np edge 2 1\ne 1 2\n"), GraphError);
    CHECK_THROWS_AS(parse_graph("p edge 2 1\ne 1 3\n"), GraphError);
    CHECK_THROWS_AS(parse_graph("p edge 2 1\ne 2 2\n"), GraphError);
    CHECK_THROWS_AS(parse_graph("p edge 2 1\nx 1 2\n"), GraphError);
    CHECK_THROWS_AS(parse_graph("p edge 3 2\ne 1 2\n"), GraphError);
    CHECK_THROWS_AS(parse_graph(""), GraphError);
    CHECK_THROWS_AS(read_graph_file("/nonexistent/graph"), GraphError);
}

TEST_CASE("named generators")
{
    CHECK(complete_graph(5).edge_count() == 10);
    CHECK(complete_graph(5).max_degree() == 4);
    CHECK(cycle_graph(6).edge_count() == 6);
    CHECK(path_graph(4).edge_count() == 3);
    CHECK(path_graph(1).edge_count() == 0);
    CHECK(star_graph(4).vertex_count() == 5);
    CHECK(star_graph(4).max_degree() == 4);
    CHECK_THROWS_AS(cycle_graph(2), GraphError);

    CHECK(generate("cycle 5") == cycle_graph(5));
    CHECK(generate("random 30 0.2 4") == random_graph(30, 0.2, 4));
    CHECK_THROWS_AS(generate("cycle"), GraphError);
    CHECK_THROWS_AS(generate("cycle 5 6"), GraphError);
    CHECK_THROWS_AS(generate("wheel 5"), GraphError);
}

TEST_CASE("random graphs are deterministic per seed")
{
    CHECK(random_graph(200, 0.05, 1) == random_graph(200, 0.05, 1));
    CHECK(! (random_graph(200, 0.05, 1) == random_graph(200, 0.05, 2)));
    CHECK(random_graph(10, 0.0, 3).edge_count() == 0);
    CHECK(random_graph(10, 1.0, 3).edge_count() == 45);
}

TEST_CASE("regular graphs have every degree equal")
{
    for (auto [n, d] : std::vector<std::pair<int, int>>{ { 10, 3 }, { 50, 4 }, { 21, 6 }, { 8, 7 } }) {
        auto g = regular_graph(n, d, 11);
        for (Vertex v = 0; v < n; ++v)
            CHECK(g.degree(v) == d);
    }
    CHECK_THROWS_AS(regular_graph(5, 3, 1), GraphError);
}

TEST_CASE("components and induced subgraphs")
{
    Graph g{ 6, { { 0, 1 }, { 1, 2 }, { 4, 5 } } };
    auto cs = g.components();
    REQUIRE(cs.size() == 3);
    CHECK(cs[0] == std::vector<Vertex>{ 0, 1, 2 });
    CHECK(cs[1] == std::vector<Vertex>{ 3 });
    CHECK(cs[2] == std::vector<Vertex>{ 4, 5 });

    std::vector<Vertex> keep{ 1, 2, 4 };
    auto h = g.induced(keep);
    CHECK(h.vertex_count() == 3);
    CHECK(h.edge_count() == 1);
    CHECK(h.edge(0) == Edge{ 0, 1 });
}
