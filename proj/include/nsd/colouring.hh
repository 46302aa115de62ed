/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#ifndef NSD_COLOURING_HH
#define NSD_COLOURING_HH

#include <nsd/graph.hh>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nsd
{
    using Colour = int;
    using Sum = std::int64_t;

    class ColouringError : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    /**
     * A total colouring: one colour per vertex and per edge (indexed by
     * EdgeId), all in {1, ..., k}. Colour 0 never appears in a finished
     * colouring.
     */
    struct TotalColouring
    {
        Colour k = 1;
        std::vector<Colour> vertex_colour;
        std::vector<Colour> edge_colour;

        TotalColouring() = default;

        /// All objects coloured 1, palette bound k.
        TotalColouring(const Graph & g, Colour k);

        auto operator== (const TotalColouring &) const -> bool = default;

        /// Largest colour actually used (0 if there are no objects).
        auto span() const -> Colour;

        /// Throws ColouringError unless sizes match g and every colour is in {1..k}.
        auto validate(const Graph & g) const -> void;
    };

    enum class ViolationKind
    {
        VertexVertex,
        EdgeEdge,
        VertexEdge,
        SumConflict
    };

    auto to_string(ViolationKind) -> std::string;

    /**
     * One violated adjacency or incidence. The witnesses depend on the kind:
     * VertexVertex and SumConflict carry two vertices (u < v) and the edge
     * joining them; EdgeEdge carries the shared vertex and both edges (first
     * < second); VertexEdge carries the vertex and the edge.
     */
    struct Violation
    {
        ViolationKind kind;
        std::vector<Vertex> vertices;
        std::vector<EdgeId> edges;

        auto operator== (const Violation &) const -> bool = default;
    };

    /// s_c(v) = c(v) + sum of the colours on edges at v.
    auto weighted_degree(const Graph & g, const TotalColouring & c, Vertex v) -> Sum;

    /// Weighted degrees of every vertex.
    auto weighted_degrees(const Graph & g, const TotalColouring & c) -> std::vector<Sum>;

    /// Every properness violation, each reported exactly once, in a
    /// deterministic order (by vertex, then edge). Parallel over vertices.
    auto check_proper(const Graph & g, const TotalColouring & c) -> std::vector<Violation>;

    /// Every edge whose endpoints have equal weighted degrees. Parallel over edges.
    auto check_nsd(const Graph & g, const TotalColouring & c) -> std::vector<Violation>;

    /// Single-threaded reference versions of the two checks, same output.
    auto check_proper_serial(const Graph & g, const TotalColouring & c) -> std::vector<Violation>;
    auto check_nsd_serial(const Graph & g, const TotalColouring & c) -> std::vector<Violation>;

    /// True iff both checks come back empty.
    auto is_nsd_total_colouring(const Graph & g, const TotalColouring & c) -> bool;

    /// Colouring file: `k <bound>`, then `v <vertex> <colour>` and
    /// `e <u> <v> <colour>` lines, 1-based vertices, `c` comments allowed.
    auto parse_colouring(std::istream & in, const Graph & g) -> TotalColouring;
    auto parse_colouring(const std::string & text, const Graph & g) -> TotalColouring;
    auto read_colouring_file(const std::string & filename, const Graph & g) -> TotalColouring;
    auto write_colouring(std::ostream & out, const Graph & g, const TotalColouring & c) -> void;
    auto colouring_to_string(const Graph & g, const TotalColouring & c) -> std::string;

    /// One JSON object per line, for the verify command.
    auto violation_to_json(const Graph & g, const Violation & v) -> std::string;
}

#endif
