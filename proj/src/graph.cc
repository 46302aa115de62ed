/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <nsd/graph.hh>
#include <nsd/rng.hh>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

using std::istream;
using std::istringstream;
using std::ostream;
using std::pair;
using std::sort;
using std::span;
using std::string;
using std::to_string;
using std::vector;

namespace nsd
{
    Graph::Graph(int n, vector<Edge> edges) :
        _n(n)
    {
        if (n < 0)
            throw GraphError{ "negative vertex count" };

        for (auto & e : edges) {
            if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
                throw GraphError{ "edge endpoint out of range: " + std::to_string(e.u) + " " + std::to_string(e.v) };
            if (e.u == e.v)
                throw GraphError{ "self-loop on vertex " + std::to_string(e.u) };
            if (e.u > e.v)
                std::swap(e.u, e.v);
        }
        sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        _edges = std::move(edges);

        _offsets.assign(n + 1, 0);
        for (auto & e : _edges) {
            ++_offsets[e.u + 1];
            ++_offsets[e.v + 1];
        }
        for (int v = 0; v < n; ++v)
            _offsets[v + 1] += _offsets[v];

        _incidences.resize(2 * _edges.size());
        vector<int> fill(_offsets.begin(), _offsets.end() - (n > 0 ? 1 : 0));
        for (EdgeId i = 0; i < edge_count(); ++i) {
            auto & e = _edges[i];
            _incidences[fill[e.u]++] = { e.v, i };
            _incidences[fill[e.v]++] = { e.u, i };
        }
        for (Vertex v = 0; v < n; ++v) {
            sort(_incidences.begin() + _offsets[v], _incidences.begin() + _offsets[v + 1],
                    [] (const Incidence & a, const Incidence & b) { return a.neighbour < b.neighbour; });
            _max_degree = std::max(_max_degree, degree(v));
        }
    }

    auto Graph::edge_id(Vertex u, Vertex v) const -> EdgeId
    {
        if (u < 0 || u >= _n || v < 0 || v >= _n)
            return -1;
        auto inc = incidences(u);
        auto it = std::lower_bound(inc.begin(), inc.end(), v,
                [] (const Incidence & a, Vertex x) { return a.neighbour < x; });
        if (it != inc.end() && it->neighbour == v)
            return it->edge;
        return -1;
    }

    auto Graph::components() const -> vector<vector<Vertex>>
    {
        vector<vector<Vertex>> result;
        vector<char> seen(_n, 0);
        for (Vertex s = 0; s < _n; ++s) {
            if (seen[s])
                continue;
            vector<Vertex> comp{ s };
            seen[s] = 1;
            for (std::size_t i = 0; i < comp.size(); ++i)
                for (auto & inc : incidences(comp[i]))
                    if (! seen[inc.neighbour]) {
                        seen[inc.neighbour] = 1;
                        comp.push_back(inc.neighbour);
                    }
            sort(comp.begin(), comp.end());
            result.push_back(std::move(comp));
        }
        return result;
    }

    auto Graph::induced(span<const Vertex> vertices) const -> Graph
    {
        vector<int> index(_n, -1);
        for (std::size_t i = 0; i < vertices.size(); ++i)
            index[vertices[i]] = static_cast<int>(i);
        vector<Edge> sub;
        for (auto & e : _edges)
            if (index[e.u] >= 0 && index[e.v] >= 0)
                sub.push_back({ index[e.u], index[e.v] });
        return Graph{ static_cast<int>(vertices.size()), std::move(sub) };
    }

    auto parse_graph(istream & in) -> Graph
    {
        string line;
        int n = -1, m = -1, line_number = 0;
        vector<Edge> edges;
        while (std::getline(in, line)) {
            ++line_number;
            istringstream words{ line };
            string kind;
            if (! (words >> kind) || kind == "c")
                continue;

            auto where = [&] { return " on line " + std::to_string(line_number); };
            if (kind == "p") {
                string format;
                if (n >= 0)
                    throw GraphError{ "duplicate header" + where() };
                if (! (words >> format >> n >> m) || format != "edge" || n < 0 || m < 0)
                    throw GraphError{ "malformed header" + where() };
            }
            else if (kind == "e") {
                if (n < 0)
                    throw GraphError{ "edge before header" + where() };
                long long u, v;
                if (! (words >> u >> v))
                    throw GraphError{ "malformed edge" + where() };
                if (u < 1 || u > n || v < 1 || v > n)
                    throw GraphError{ "endpoint out of range" + where() };
                if (u == v)
                    throw GraphError{ "self-loop" + where() };
                edges.push_back({ static_cast<Vertex>(u - 1), static_cast<Vertex>(v - 1) });
            }
            else
                throw GraphError{ "unknown line type '" + kind + "'" + where() };
        }

        if (n < 0)
            throw GraphError{ "malformed header: missing 'p edge' line" };
        if (static_cast<int>(edges.size()) != m)
            throw GraphError{ "header declares " + std::to_string(m) + " edges but " + std::to_string(edges.size()) + " were given" };
        return Graph{ n, std::move(edges) };
    }

    auto parse_graph(const string & text) -> Graph
    {
        istringstream in{ text };
        return parse_graph(in);
    }

    auto read_graph_file(const string & filename) -> Graph
    {
        std::ifstream in{ filename };
        if (! in)
            throw GraphError{ "cannot open graph file '" + filename + "'" };
        return parse_graph(in);
    }

    auto write_graph(ostream & out, const Graph & g) -> void
    {
        out << "p edge " << g.vertex_count() << " " << g.edge_count() << "\n";
        for (auto & e : g.edges())
            out << "e " << e.u + 1 << " " << e.v + 1 << "\n";
    }

    auto graph_to_string(const Graph & g) -> string
    {
        std::ostringstream out;
        write_graph(out, g);
        return out.str();
    }

    auto complete_graph(int n) -> Graph
    {
        vector<Edge> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                edges.push_back({ u, v });
        return Graph{ n, std::move(edges) };
    }

    auto cycle_graph(int n) -> Graph
    {
        if (n < 3)
            throw GraphError{ "cycle needs at least 3 vertices" };
        vector<Edge> edges;
        for (int v = 0; v < n; ++v)
            edges.push_back({ v, (v + 1) % n });
        return Graph{ n, std::move(edges) };
    }

    auto path_graph(int n) -> Graph
    {
        if (n < 1)
            throw GraphError{ "path needs at least 1 vertex" };
        vector<Edge> edges;
        for (int v = 0; v + 1 < n; ++v)
            edges.push_back({ v, v + 1 });
        return Graph{ n, std::move(edges) };
    }

    auto star_graph(int leaves) -> Graph
    {
        if (leaves < 0)
            throw GraphError{ "star needs a non-negative leaf count" };
        vector<Edge> edges;
        for (int v = 1; v <= leaves; ++v)
            edges.push_back({ 0, v });
        return Graph{ leaves + 1, std::move(edges) };
    }

    auto random_graph(int n, double p, std::uint64_t seed) -> Graph
    {
        if (n < 0 || ! (p >= 0.0 && p <= 1.0))
            throw GraphError{ "random graph needs n >= 0 and 0 <= p <= 1" };
        Rng rng{ seed };
        vector<Edge> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.chance(p))
                    edges.push_back({ u, v });
        return Graph{ n, std::move(edges) };
    }

    auto regular_graph(int n, int d, std::uint64_t seed, int max_attempts) -> Graph
    {
        if (n < 1 || d < 0 || d >= n || (static_cast<long long>(n) * d) % 2 != 0)
            throw GraphError{ "regular graph needs 0 <= d < n and n*d even" };

        Rng rng{ seed };
        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            // Steger-Wormald: pair random points, rejecting loops and repeats,
            // restarting when only unsuitable pairs remain
            vector<Vertex> points;
            points.reserve(static_cast<std::size_t>(n) * d);
            for (Vertex v = 0; v < n; ++v)
                for (int i = 0; i < d; ++i)
                    points.push_back(v);

            vector<vector<Vertex>> adjacency(n);
            auto joined = [&] (Vertex a, Vertex b) {
                return std::find(adjacency[a].begin(), adjacency[a].end(), b) != adjacency[a].end();
            };

            vector<Edge> edges;
            bool stuck = false;
            while (! points.empty() && ! stuck) {
                bool placed = false;
                for (int tries = 0; tries < 64 && ! placed; ++tries) {
                    auto i = rng.below(points.size()), j = rng.below(points.size());
                    Vertex a = points[i], b = points[j];
                    if (i == j || a == b || joined(a, b))
                        continue;
                    adjacency[a].push_back(b);
                    adjacency[b].push_back(a);
                    edges.push_back({ a, b });
                    if (i < j)
                        std::swap(i, j);
                    points[i] = points.back();
                    points.pop_back();
                    points[j] = points.back();
                    points.pop_back();
                    placed = true;
                }

                if (! placed) {
                    // check exhaustively whether any suitable pair is left
                    bool any = false;
                    for (std::size_t i = 0; i < points.size() && ! any; ++i)
                        for (std::size_t j = i + 1; j < points.size() && ! any; ++j)
                            if (points[i] != points[j] && ! joined(points[i], points[j]))
                                any = true;
                    stuck = ! any;
                }
            }

            if (! stuck)
                return Graph{ n, std::move(edges) };
        }
        throw GraphError{ "regular graph generation exceeded " + std::to_string(max_attempts) + " attempts" };
    }

    auto generate(const string & descriptor) -> Graph
    {
        istringstream words{ descriptor };
        string kind;
        words >> kind;
        auto fail = [&] () -> Graph { throw GraphError{ "bad generator descriptor '" + descriptor + "'" }; };
        auto finished = [&] { string rest; return ! (words >> rest); };

        if (kind == "complete" || kind == "cycle" || kind == "path" || kind == "star") {
            int n;
            if (! (words >> n) || ! finished())
                return fail();
            if (kind == "complete") {
                if (n < 0)
                    return fail();
                return complete_graph(n);
            }
            if (kind == "cycle")
                return cycle_graph(n);
            if (kind == "path")
                return path_graph(n);
            return star_graph(n);
        }
        if (kind == "random") {
            int n;
            double p;
            std::uint64_t seed;
            if (! (words >> n >> p >> seed) || ! finished())
                return fail();
            return random_graph(n, p, seed);
        }
        if (kind == "regular") {
            int n, d;
            std::uint64_t seed;
            if (! (words >> n >> d >> seed) || ! finished())
                return fail();
            return regular_graph(n, d, seed);
        }
        return fail();
    }
}
