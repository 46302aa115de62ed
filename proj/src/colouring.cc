/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <nsd/colouring.hh>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

using std::istream;
using std::istringstream;
using std::ostream;
using std::string;
using std::to_string;
using std::vector;

namespace nsd
{
    TotalColouring::TotalColouring(const Graph & g, Colour bound) :
        k(bound),
        vertex_colour(g.vertex_count(), 1),
        edge_colour(g.edge_count(), 1)
    {
    }

    auto TotalColouring::span() const -> Colour
    {
        Colour result = 0;
        for (auto c : vertex_colour)
            result = std::max(result, c);
        for (auto c : edge_colour)
            result = std::max(result, c);
        return result;
    }

    auto TotalColouring::validate(const Graph & g) const -> void
    {
        if (k < 1)
            throw ColouringError{ "palette bound must be at least 1" };
        if (static_cast<int>(vertex_colour.size()) != g.vertex_count()
                || static_cast<int>(edge_colour.size()) != g.edge_count())
            throw ColouringError{ "colouring does not match the graph's size" };
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (vertex_colour[v] < 1 || vertex_colour[v] > k)
                throw ColouringError{ "vertex " + std::to_string(v + 1) + " has colour "
                    + std::to_string(vertex_colour[v]) + " outside 1.." + std::to_string(k) };
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            if (edge_colour[e] < 1 || edge_colour[e] > k)
                throw ColouringError{ "edge " + std::to_string(g.edge(e).u + 1) + " " + std::to_string(g.edge(e).v + 1)
                    + " has colour " + std::to_string(edge_colour[e]) + " outside 1.." + std::to_string(k) };
    }

    auto to_string(ViolationKind kind) -> string
    {
        switch (kind) {
            case ViolationKind::VertexVertex: return "vertex-vertex";
            case ViolationKind::EdgeEdge:     return "edge-edge";
            case ViolationKind::VertexEdge:   return "vertex-edge";
            case ViolationKind::SumConflict:  return "sum-conflict";
        }
        return "unknown";
    }

    auto weighted_degree(const Graph & g, const TotalColouring & c, Vertex v) -> Sum
    {
        if (v < 0 || v >= g.vertex_count())
            throw ColouringError{ "vertex " + std::to_string(v) + " out of range" };
        Sum result = c.vertex_colour[v];
        for (auto & inc : g.incidences(v))
            result += c.edge_colour[inc.edge];
        return result;
    }

    auto weighted_degrees(const Graph & g, const TotalColouring & c) -> vector<Sum>
    {
        vector<Sum> result(g.vertex_count());
#pragma omp parallel for schedule(static)
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            Sum s = c.vertex_colour[v];
            for (auto & inc : g.incidences(v))
                s += c.edge_colour[inc.edge];
            result[v] = s;
        }
        return result;
    }

    namespace
    {
        // Violations whose reporting vertex is v: VV to larger neighbours,
        // VE on v's own colour, EE pairs meeting at v.
        auto proper_violations_at(const Graph & g, const TotalColouring & c, Vertex v, vector<Violation> & out) -> void
        {
            auto incs = g.incidences(v);
            for (auto & inc : incs)
                if (inc.neighbour > v && c.vertex_colour[inc.neighbour] == c.vertex_colour[v])
                    out.push_back({ ViolationKind::VertexVertex, { v, inc.neighbour }, { inc.edge } });

            for (auto & inc : incs)
                if (c.edge_colour[inc.edge] == c.vertex_colour[v])
                    out.push_back({ ViolationKind::VertexEdge, { v }, { inc.edge } });

            if (incs.size() < 2)
                return;
            vector<std::pair<Colour, EdgeId>> by_colour;
            by_colour.reserve(incs.size());
            for (auto & inc : incs)
                by_colour.emplace_back(c.edge_colour[inc.edge], inc.edge);
            std::sort(by_colour.begin(), by_colour.end());
            for (std::size_t i = 0; i < by_colour.size(); ) {
                std::size_t j = i;
                while (j < by_colour.size() && by_colour[j].first == by_colour[i].first)
                    ++j;
                for (std::size_t a = i; a < j; ++a)
                    for (std::size_t b = a + 1; b < j; ++b)
                        out.push_back({ ViolationKind::EdgeEdge, { v }, { by_colour[a].second, by_colour[b].second } });
                i = j;
            }
        }

        auto concatenate(vector<vector<Violation>> && parts) -> vector<Violation>
        {
            vector<Violation> result;
            for (auto & p : parts)
                for (auto & v : p)
                    result.push_back(std::move(v));
            return result;
        }
    }

    auto check_proper(const Graph & g, const TotalColouring & c) -> vector<Violation>
    {
        vector<vector<Violation>> per_vertex(g.vertex_count());
#pragma omp parallel for schedule(dynamic, 64)
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            proper_violations_at(g, c, v, per_vertex[v]);
        return concatenate(std::move(per_vertex));
    }

    auto check_proper_serial(const Graph & g, const TotalColouring & c) -> vector<Violation>
    {
        vector<Violation> result;
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            proper_violations_at(g, c, v, result);
        return result;
    }

    auto check_nsd(const Graph & g, const TotalColouring & c) -> vector<Violation>
    {
        auto sums = weighted_degrees(g, c);
        vector<char> conflict(g.edge_count(), 0);
#pragma omp parallel for schedule(static)
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            conflict[e] = sums[g.edge(e).u] == sums[g.edge(e).v];

        vector<Violation> result;
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            if (conflict[e])
                result.push_back({ ViolationKind::SumConflict, { g.edge(e).u, g.edge(e).v }, { e } });
        return result;
    }

    auto check_nsd_serial(const Graph & g, const TotalColouring & c) -> vector<Violation>
    {
        vector<Violation> result;
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            auto & edge = g.edge(e);
            if (weighted_degree(g, c, edge.u) == weighted_degree(g, c, edge.v))
                result.push_back({ ViolationKind::SumConflict, { edge.u, edge.v }, { e } });
        }
        return result;
    }

    auto is_nsd_total_colouring(const Graph & g, const TotalColouring & c) -> bool
    {
        return check_proper(g, c).empty() && check_nsd(g, c).empty();
    }

    auto parse_colouring(istream & in, const Graph & g) -> TotalColouring
    {
        TotalColouring result;
        result.k = 0;
        result.vertex_colour.assign(g.vertex_count(), 0);
        result.edge_colour.assign(g.edge_count(), 0);

        string line;
        int line_number = 0;
        while (std::getline(in, line)) {
            ++line_number;
            istringstream words{ line };
            string kind;
            if (! (words >> kind) || kind == "c")
                continue;
            auto where = [&] { return " on line " + std::to_string(line_number); };

            if (kind == "k") {
                if (! (words >> result.k) || result.k < 1)
                    throw ColouringError{ "malformed palette bound" + where() };
            }
            else if (kind == "v") {
                long long v;
                Colour colour;
                if (! (words >> v >> colour))
                    throw ColouringError{ "malformed vertex line" + where() };
                if (v < 1 || v > g.vertex_count())
                    throw ColouringError{ "vertex out of range" + where() };
                result.vertex_colour[v - 1] = colour;
            }
            else if (kind == "e") {
                long long u, v;
                Colour colour;
                if (! (words >> u >> v >> colour))
                    throw ColouringError{ "malformed edge line" + where() };
                auto e = g.edge_id(static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1));
                if (e < 0)
                    throw ColouringError{ "no such edge" + where() };
                result.edge_colour[e] = colour;
            }
            else
                throw ColouringError{ "unknown line type '" + kind + "'" + where() };
        }

        if (result.k == 0)
            throw ColouringError{ "missing 'k' header" };
        for (auto c : result.vertex_colour)
            if (c == 0)
                throw ColouringError{ "some vertex is uncoloured" };
        for (auto c : result.edge_colour)
            if (c == 0)
                throw ColouringError{ "some edge is uncoloured" };
        result.validate(g);
        return result;
    }

    auto parse_colouring(const string & text, const Graph & g) -> TotalColouring
    {
        istringstream in{ text };
        return parse_colouring(in, g);
    }

    auto read_colouring_file(const string & filename, const Graph & g) -> TotalColouring
    {
        std::ifstream in{ filename };
        if (! in)
            throw ColouringError{ "cannot open colouring file '" + filename + "'" };
        return parse_colouring(in, g);
    }

    auto write_colouring(ostream & out, const Graph & g, const TotalColouring & c) -> void
    {
        out << "k " << c.k << "\n";
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            out << "v " << v + 1 << " " << c.vertex_colour[v] << "\n";
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            out << "e " << g.edge(e).u + 1 << " " << g.edge(e).v + 1 << " " << c.edge_colour[e] << "\n";
    }

    auto colouring_to_string(const Graph & g, const TotalColouring & c) -> string
    {
        std::ostringstream out;
        write_colouring(out, g, c);
        return out.str();
    }

    auto violation_to_json(const Graph & g, const Violation & v) -> string
    {
        nlohmann::json j;
        j["kind"] = to_string(v.kind);
        auto vertices = nlohmann::json::array();
        for (auto x : v.vertices)
            vertices.push_back(x + 1);
        auto edges = nlohmann::json::array();
        for (auto e : v.edges)
            edges.push_back({ g.edge(e).u + 1, g.edge(e).v + 1 });
        j["vertices"] = vertices;
        j["edges"] = edges;
        return j.dump();
    }
}
