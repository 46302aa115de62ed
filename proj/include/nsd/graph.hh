/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef NSD_GRAPH_HH
#define NSD_GRAPH_HH

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nsd
{
    using Vertex = int;
    using EdgeId = int;

    struct Edge
    {
        Vertex u;
        Vertex v;

        auto operator<=> (const Edge &) const = default;
    };

    struct Incidence
    {
        Vertex neighbour;
        EdgeId edge;
    };

    class GraphError : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    /**
     * Immutable simple graph on vertices 0..n-1.
     *
     * Edges are stored with u < v, sorted lexicographically, and their
     * position in that order is the EdgeId used by every colour map. The
     * adjacency is CSR, each vertex's incidences sorted by neighbour.
     */
    class Graph
    {
        private:
            int _n = 0;
            std::vector<Edge> _edges;
            std::vector<int> _offsets;
            std::vector<Incidence> _incidences;
            int _max_degree = 0;

        public:
            Graph() = default;

            /// Builds from an arbitrary edge list. Duplicates (in either
            /// orientation) collapse to one edge; loops and out-of-range
            /// endpoints throw GraphError.
            Graph(int n, std::vector<Edge> edges);

            auto vertex_count() const -> int { return _n; }
            auto edge_count() const -> int { return static_cast<int>(_edges.size()); }
            auto max_degree() const -> int { return _max_degree; }
            auto edges() const -> std::span<const Edge> { return _edges; }
            auto edge(EdgeId e) const -> const Edge & { return _edges[e]; }

            auto degree(Vertex v) const -> int
            {
                return _offsets[v + 1] - _offsets[v];
            }

            auto incidences(Vertex v) const -> std::span<const Incidence>
            {
                return { _incidences.data() + _offsets[v], static_cast<std::size_t>(degree(v)) };
            }

            /// EdgeId of uv, or -1 if u and v are not adjacent.
            auto edge_id(Vertex u, Vertex v) const -> EdgeId;

            auto adjacent(Vertex u, Vertex v) const -> bool { return edge_id(u, v) >= 0; }

            auto operator== (const Graph & other) const -> bool
            {
                return _n == other._n && _edges == other._edges;
            }

            /// Connected components, each a sorted vertex list, ordered by smallest vertex.
            auto components() const -> std::vector<std::vector<Vertex>>;

            /// Subgraph induced by the given sorted vertex list; vertex i of the
            /// result is vertices[i].
            auto induced(std::span<const Vertex> vertices) const -> Graph;
    };

    /// Reads the DIMACS-like format: `c` comments, `p edge <n> <m>`, then m
    /// lines `e <u> <v>` with 1-based endpoints.
    auto parse_graph(std::istream & in) -> Graph;
    auto parse_graph(const std::string & text) -> Graph;
    auto read_graph_file(const std::string & filename) -> Graph;

    /// Writes the same format, edges in lexicographic order.
    auto write_graph(std::ostream & out, const Graph & g) -> void;
    auto graph_to_string(const Graph & g) -> std::string;

    auto complete_graph(int n) -> Graph;
    auto cycle_graph(int n) -> Graph;
    auto path_graph(int n) -> Graph;
    auto star_graph(int leaves) -> Graph;

    /// G(n, p): every pair independently with probability p.
    auto random_graph(int n, double p, std::uint64_t seed) -> Graph;

    /// Uniform-ish d-regular graph via point pairing with restarts. Throws
    /// GraphError if n*d is odd, d >= n, or max_attempts restarts fail.
    auto regular_graph(int n, int d, std::uint64_t seed, int max_attempts = 1000) -> Graph;

    /// Parses a generator descriptor such as "complete 4", "cycle 5",
    /// "path 3", "star 4", "random 100 0.5 7" or "regular 10 3 1".
    auto generate(const std::string & descriptor) -> Graph;
}

#endif
