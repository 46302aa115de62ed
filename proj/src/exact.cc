/* vim: set sw=4 sts=4 et foldmethod=syntax : */

#include <nsd/exact.hh>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

using std::optional;
using std::string;
using std::to_string;
using std::vector;

namespace nsd
{
    namespace
    {
        // Lean total-NSD test for the brute force; it deliberately shares no
        // code with the backtracker.
        auto brute_valid(const Graph & g, const vector<Colour> & objects) -> bool
        {
            int n = g.vertex_count();
            for (EdgeId e = 0; e < g.edge_count(); ++e) {
                auto & edge = g.edge(e);
                Colour ce = objects[n + e];
                if (objects[edge.u] == objects[edge.v] || ce == objects[edge.u] || ce == objects[edge.v])
                    return false;
            }
            for (Vertex v = 0; v < n; ++v) {
                auto incs = g.incidences(v);
                for (std::size_t a = 0; a < incs.size(); ++a)
                    for (std::size_t b = a + 1; b < incs.size(); ++b)
                        if (objects[n + incs[a].edge] == objects[n + incs[b].edge])
                            return false;
            }
            vector<Sum> sums(n);
            for (Vertex v = 0; v < n; ++v) {
                sums[v] = objects[v];
                for (auto & inc : g.incidences(v))
                    sums[v] += objects[n + inc.edge];
            }
            for (auto & edge : g.edges())
                if (sums[edge.u] == sums[edge.v])
                    return false;
            return true;
        }

        struct SearchObject
        {
            bool is_vertex;
            int id;
            vector<int> earlier_conflicts;  // positions of conflicting objects placed before this one
            vector<Vertex> completes;       // vertices whose weighted degree is final once this is placed
        };

        class Backtracker
        {
            private:
                const Graph & _g;
                Colour _k;
                vector<SearchObject> _objects;
                vector<Colour> _assigned;
                vector<int> _vertex_position, _edge_position;
                vector<int> _completed_at;
                vector<Sum> _sums;
                std::uint64_t & _nodes;

            public:
                Backtracker(const Graph & g, Colour k, std::uint64_t & nodes) :
                    _g(g),
                    _k(k),
                    _vertex_position(g.vertex_count(), -1),
                    _edge_position(g.edge_count(), -1),
                    _completed_at(g.vertex_count(), -1),
                    _sums(g.vertex_count(), 0),
                    _nodes(nodes)
                {
                    build_order();
                }

                auto build_order() -> void
                {
                    int n = _g.vertex_count();
                    auto by_degree = [&] (Vertex a, Vertex b) {
                        return _g.degree(a) != _g.degree(b) ? _g.degree(a) > _g.degree(b) : a < b;
                    };

                    // BFS from a maximum degree vertex, higher degree neighbours first;
                    // each vertex is followed by all its not yet placed edges
                    vector<char> queued(n, 0);
                    vector<Vertex> starts(n);
                    std::iota(starts.begin(), starts.end(), 0);
                    std::sort(starts.begin(), starts.end(), by_degree);
                    for (auto s : starts) {
                        if (queued[s])
                            continue;
                        vector<Vertex> queue{ s };
                        queued[s] = 1;
                        for (std::size_t head = 0; head < queue.size(); ++head) {
                            Vertex v = queue[head];
                            _vertex_position[v] = static_cast<int>(_objects.size());
                            _objects.push_back({ true, v, {}, {} });

                            vector<Vertex> next;
                            for (auto & inc : _g.incidences(v)) {
                                if (_edge_position[inc.edge] < 0) {
                                    _edge_position[inc.edge] = static_cast<int>(_objects.size());
                                    _objects.push_back({ false, inc.edge, {}, {} });
                                }
                                if (! queued[inc.neighbour]) {
                                    queued[inc.neighbour] = 1;
                                    next.push_back(inc.neighbour);
                                }
                            }
                            std::sort(next.begin(), next.end(), by_degree);
                            queue.insert(queue.end(), next.begin(), next.end());
                        }
                    }

                    for (auto & obj : _objects) {
                        int position = obj.is_vertex ? _vertex_position[obj.id] : _edge_position[obj.id];
                        auto add = [&] (int other) {
                            if (other < position)
                                obj.earlier_conflicts.push_back(other);
                        };
                        if (obj.is_vertex) {
                            for (auto & inc : _g.incidences(obj.id)) {
                                add(_vertex_position[inc.neighbour]);
                                add(_edge_position[inc.edge]);
                            }
                        }
                        else {
                            auto & edge = _g.edge(obj.id);
                            for (Vertex end : { edge.u, edge.v }) {
                                add(_vertex_position[end]);
                                for (auto & inc : _g.incidences(end))
                                    if (inc.edge != obj.id)
                                        add(_edge_position[inc.edge]);
                            }
                        }
                    }

                    for (Vertex v = 0; v < n; ++v) {
                        int last = _vertex_position[v];
                        for (auto & inc : _g.incidences(v))
                            last = std::max(last, _edge_position[inc.edge]);
                        _completed_at[v] = last;
                        _objects[last].completes.push_back(v);
                    }
                    _assigned.assign(_objects.size(), 0);
                }

                auto sum_of(Vertex v) const -> Sum
                {
                    Sum s = _assigned[_vertex_position[v]];
                    for (auto & inc : _g.incidences(v))
                        s += _assigned[_edge_position[inc.edge]];
                    return s;
                }

                auto search(int position) -> bool
                {
                    if (position == static_cast<int>(_objects.size()))
                        return true;

                    auto & obj = _objects[position];
                    for (Colour c = 1; c <= _k; ++c) {
                        ++_nodes;
                        bool ok = true;
                        for (int other : obj.earlier_conflicts)
                            if (_assigned[other] == c) {
                                ok = false;
                                break;
                            }
                        if (! ok)
                            continue;

                        _assigned[position] = c;
                        // neighbours completing at this same position are compared
                        // by whichever of the pair comes later in obj.completes
                        for (Vertex v : obj.completes) {
                            _sums[v] = sum_of(v);
                            for (auto & inc : _g.incidences(v))
                                if (_completed_at[inc.neighbour] <= position && inc.neighbour != v
                                        && (_completed_at[inc.neighbour] < position || inc.neighbour < v)
                                        && _sums[inc.neighbour] == _sums[v]) {
                                    ok = false;
                                    break;
                                }
                            if (! ok)
                                break;
                        }
                        if (ok && search(position + 1))
                            return true;
                        _assigned[position] = 0;
                    }
                    return false;
                }

                auto witness() const -> TotalColouring
                {
                    TotalColouring c;
                    c.k = _k;
                    c.vertex_colour.resize(_g.vertex_count());
                    c.edge_colour.resize(_g.edge_count());
                    for (Vertex v = 0; v < _g.vertex_count(); ++v)
                        c.vertex_colour[v] = _assigned[_vertex_position[v]];
                    for (EdgeId e = 0; e < _g.edge_count(); ++e)
                        c.edge_colour[e] = _assigned[_edge_position[e]];
                    return c;
                }
        };
    }

    auto brute_force_chi(const Graph & g, Colour k_max) -> optional<SolveResult>
    {
        int objects = g.vertex_count() + g.edge_count();
        if (k_max >= 2 && objects * std::log2(static_cast<double>(k_max)) > brute_force_guard)
            throw GuardExceeded{ "brute force guard exceeded: (n+m) log2(k_max) = "
                + std::to_string(objects * std::log2(static_cast<double>(k_max))) };

        SolveResult result;
        for (Colour k = g.max_degree() + 1; k <= k_max; ++k) {
            vector<Colour> assignment(objects, 1);
            while (true) {
                ++result.nodes_explored;
                if (brute_valid(g, assignment)) {
                    result.chi_sum_total = k;
                    result.witness.k = k;
                    result.witness.vertex_colour.assign(assignment.begin(), assignment.begin() + g.vertex_count());
                    result.witness.edge_colour.assign(assignment.begin() + g.vertex_count(), assignment.end());
                    return result;
                }
                int i = 0;
                while (i < objects && assignment[i] == k)
                    assignment[i++] = 1;
                if (i == objects)
                    break;
                ++assignment[i];
            }
        }
        return std::nullopt;
    }

    auto nsd_colourable(const Graph & g, Colour k, TotalColouring * witness, std::uint64_t & nodes) -> bool
    {
        if (k < 1)
            return false;
        Backtracker search{ g, k, nodes };
        if (! search.search(0))
            return false;
        if (witness)
            *witness = search.witness();
        return true;
    }

    auto solve_exact(const Graph & g, Colour k_max) -> optional<SolveResult>
    {
        SolveResult result;
        result.witness.k = 1;
        result.witness.vertex_colour.assign(g.vertex_count(), 1);
        result.witness.edge_colour.assign(g.edge_count(), 1);
        result.chi_sum_total = std::max(1, g.max_degree() + 1);

        for (auto & component : g.components()) {
            auto sub = g.induced(component);
            Colour k = sub.max_degree() + 1;
            TotalColouring witness;
            while (k <= k_max && ! nsd_colourable(sub, k, &witness, result.nodes_explored))
                ++k;
            if (k > k_max)
                return std::nullopt;

            result.chi_sum_total = std::max(result.chi_sum_total, k);
            for (std::size_t i = 0; i < component.size(); ++i)
                result.witness.vertex_colour[component[i]] = witness.vertex_colour[i];
            for (EdgeId e = 0; e < sub.edge_count(); ++e) {
                auto & edge = sub.edge(e);
                result.witness.edge_colour[g.edge_id(component[edge.u], component[edge.v])] = witness.edge_colour[e];
            }
        }
        if (result.chi_sum_total > k_max)
            return std::nullopt;
        result.witness.k = result.chi_sum_total;
        return result;
    }

    auto conjecture_sweep(const vector<NamedGraph> & family, Colour k_max) -> vector<SweepRow>
    {
        vector<SweepRow> rows(family.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::size_t i = 0; i < family.size(); ++i) {
            auto & [id, g] = family[i];
            auto & row = rows[i];
            row.graph_id = id;
            row.n = g.vertex_count();
            row.m = g.edge_count();
            row.max_degree = g.max_degree();
            try {
                auto solved = solve_exact(g, k_max);
                if (solved)
                    row.chi = solved->chi_sum_total;
                else
                    row.error = "exceeds k_max " + std::to_string(k_max);
            }
            catch (const std::exception & e) {
                row.error = e.what();
            }
            if (! row.holds())
                row.witness_graph = g;
        }
        return rows;
    }

    auto sweep_csv(const vector<SweepRow> & rows) -> string
    {
        std::ostringstream out;
        out << "graph-id,n,m,delta,chi,delta_plus_3,verdict\n";
        for (auto & r : rows) {
            out << r.graph_id << "," << r.n << "," << r.m << "," << r.max_degree << ",";
            if (r.chi)
                out << *r.chi;
            out << "," << r.max_degree + 3 << ",";
            if (! r.chi)
                out << "error";
            else
                out << (r.holds() ? "holds" : "VIOLATED");
            out << "\n";
        }
        return out.str();
    }

    namespace
    {
        auto pairs_of(int n) -> vector<Edge>
        {
            vector<Edge> pairs;
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    pairs.push_back({ u, v });
            return pairs;
        }

        auto graph_from_mask(int n, const vector<Edge> & pairs, std::uint64_t mask) -> Graph
        {
            vector<Edge> edges;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if (mask >> i & 1)
                    edges.push_back(pairs[i]);
            return Graph{ n, std::move(edges) };
        }
    }

    auto all_labelled_graphs(int n) -> vector<NamedGraph>
    {
        if (n < 0 || n > 7)
            throw GraphError{ "labelled enumeration supports 0 <= n <= 7" };
        auto pairs = pairs_of(n);
        vector<NamedGraph> result;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{ 1 } << pairs.size()); ++mask)
            result.push_back({ "L" + std::to_string(n) + "-" + std::to_string(mask), graph_from_mask(n, pairs, mask) });
        return result;
    }

    auto connected_graphs_up_to_iso(int max_n) -> vector<NamedGraph>
    {
        if (max_n > 7)
            throw GraphError{ "connected enumeration supports n <= 7" };
        vector<NamedGraph> result;
        for (int n = 1; n <= max_n; ++n) {
            auto pairs = pairs_of(n);
            vector<vector<int>> index(n, vector<int>(n, -1));
            for (std::size_t i = 0; i < pairs.size(); ++i)
                index[pairs[i].u][pairs[i].v] = index[pairs[i].v][pairs[i].u] = static_cast<int>(i);

            vector<vector<int>> permutations;
            vector<int> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            do permutations.push_back(perm); while (std::next_permutation(perm.begin(), perm.end()));

            for (std::uint64_t mask = 0; mask < (std::uint64_t{ 1 } << pairs.size()); ++mask) {
                std::uint64_t canonical = mask;
                for (auto & p : permutations) {
                    std::uint64_t image = 0;
                    for (std::size_t i = 0; i < pairs.size(); ++i)
                        if (mask >> i & 1)
                            image |= std::uint64_t{ 1 } << index[p[pairs[i].u]][p[pairs[i].v]];
                    canonical = std::min(canonical, image);
                }
                if (canonical != mask)
                    continue;
                auto g = graph_from_mask(n, pairs, mask);
                if (g.components().size() == 1)
                    result.push_back({ "C" + std::to_string(n) + "-" + std::to_string(mask), std::move(g) });
            }
        }
        return result;
    }

    auto parse_family(const string & spec) -> vector<NamedGraph>
    {
        vector<NamedGraph> result;
        std::istringstream parts{ spec };
        string part;
        while (std::getline(parts, part, ';')) {
            auto colon = part.find(':');
            if (colon == string::npos)
                throw GraphError{ "bad family descriptor '" + part + "'" };
            auto kind = part.substr(0, colon), arg = part.substr(colon + 1);
            if (kind == "connected" || kind == "labelled") {
                int n;
                try {
                    n = std::stoi(arg);
                }
                catch (const std::exception &) {
                    throw GraphError{ "bad family size in '" + part + "'" };
                }
                auto more = kind == "connected" ? connected_graphs_up_to_iso(n) : all_labelled_graphs(n);
                result.insert(result.end(), more.begin(), more.end());
            }
            else if (kind == "gen")
                result.push_back({ arg, generate(arg) });
            else if (kind == "file")
                result.push_back({ arg, read_graph_file(arg) });
            else
                throw GraphError{ "unknown family kind '" + kind + "'" };
        }
        if (result.empty())
            throw GraphError{ "empty family" };
        return result;
    }
}
