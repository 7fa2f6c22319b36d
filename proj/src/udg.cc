#include <amc/udg.hh>
#include <amc/digest.hh>
#include <amc/parallel.hh>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

using namespace amc;

UnitDistanceGraph::UnitDistanceGraph(std::vector<GraphVertex> vertices, std::vector<std::pair<std::size_t, std::size_t>> edges,
        std::optional<std::size_t> origin) :
    _vertices(std::move(vertices)),
    _edges(std::move(edges)),
    _origin(origin),
    _adjacent(_vertices.size())
{
    std::map<std::string, std::size_t> ids;
    for (std::size_t i = 0 ; i < _vertices.size() ; ++i)
        if (! ids.emplace(_vertices[i].id, i).second)
            throw Error{"duplicate vertex id '" + _vertices[i].id + "'"};
    std::vector<std::pair<std::size_t, std::size_t>> seen;
    for (auto [a, b] : _edges) {
        if (a >= _vertices.size() || b >= _vertices.size())
            throw Error{"edge refers to a missing vertex"};
        if (a == b)
            throw Error{"loop at vertex '" + _vertices[a].id + "'"};
        std::pair<std::size_t, std::size_t> key = std::minmax(a, b);
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            throw Error{"repeated edge " + _vertices[a].id + "-" + _vertices[b].id};
        seen.push_back(key);
        _adjacent[a].push_back(b);
        _adjacent[b].push_back(a);
    }
    if (_origin && *_origin >= _vertices.size())
        throw Error{"origin is not a vertex"};
}

auto UnitDistanceGraph::index_of(const std::string & id) const -> std::size_t
{
    for (std::size_t i = 0 ; i < _vertices.size() ; ++i)
        if (_vertices[i].id == id)
            return i;
    throw Error{"unknown vertex id '" + id + "'"};
}

auto UnitDistanceGraph::with_origin(std::size_t v) const -> UnitDistanceGraph
{
    return UnitDistanceGraph{_vertices, _edges, v};
}

namespace
{
    auto id_of(const nlohmann::json & j) -> std::string
    {
        return j.is_string() ? j.get<std::string>() : j.dump();
    }

    auto coordinate_from_json(const nlohmann::json & j, bool & numeric) -> Rational
    {
        if (j.is_number_float()) {
            numeric = true;
            return from_double(j.get<double>());
        }
        return rational_from_json(j);
    }
}

auto UnitDistanceGraph::from_json(const nlohmann::json & j) -> UnitDistanceGraph
{
    if (! j.is_object() || ! j.contains("vertices") || ! j.contains("edges"))
        throw Error{"graph JSON needs 'vertices' and 'edges'"};
    std::vector<GraphVertex> vs;
    for (auto & v : j.at("vertices")) {
        GraphVertex g;
        g.id = id_of(v.is_object() ? v.at("id") : v);
        if (v.is_object() && v.contains("x") != v.contains("y"))
            throw Error{"vertex '" + g.id + "' needs both x and y"};
        if (v.is_object() && v.contains("x")) {
            bool numeric = false;
            auto x = coordinate_from_json(v.at("x"), numeric);
            auto y = coordinate_from_json(v.at("y"), numeric);
            g.position = Point{{x, y}};
            g.numeric = numeric;
        }
        vs.push_back(std::move(g));
    }
    UnitDistanceGraph tmp{vs, {}};
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (auto & e : j.at("edges")) {
        if (! e.is_array() || e.size() != 2)
            throw Error{"each edge must be a pair of vertex ids"};
        es.emplace_back(tmp.index_of(id_of(e[0])), tmp.index_of(id_of(e[1])));
    }
    std::optional<std::size_t> origin;
    if (j.contains("origin") && ! j.at("origin").is_null())
        origin = tmp.index_of(id_of(j.at("origin")));
    return UnitDistanceGraph{std::move(vs), std::move(es), origin};
}

auto UnitDistanceGraph::to_json() const -> nlohmann::json
{
    auto vs = nlohmann::json::array();
    for (auto & v : _vertices) {
        nlohmann::json o = {{"id", v.id}};
        if (v.position) {
            if (v.numeric) {
                o["x"] = (*v.position)[0].get_d();
                o["y"] = (*v.position)[1].get_d();
            }
            else {
                o["x"] = rational_to_json((*v.position)[0]);
                o["y"] = rational_to_json((*v.position)[1]);
            }
        }
        vs.push_back(o);
    }
    auto es = nlohmann::json::array();
    for (auto [a, b] : _edges)
        es.push_back({_vertices[a].id, _vertices[b].id});
    nlohmann::json j = {{"vertices", vs}, {"edges", es}};
    if (_origin)
        j["origin"] = _vertices[*_origin].id;
    return j;
}

auto SearchTrace::to_json() const -> nlohmann::json
{
    return {{"nodes", nodes}, {"dead_ends", dead_ends}, {"digest", digest}};
}

namespace
{
    struct ListSolver
    {
        const UnitDistanceGraph & graph;
        int k;
        std::vector<std::uint64_t> allowed;
        bool symmetric;
        std::vector<int> colour;
        std::uint64_t nodes = 0, dead_ends = 0;
        std::string log;

        auto neighbour_mask(std::size_t v) const -> std::uint64_t
        {
            std::uint64_t m = 0;
            for (auto w : graph.neighbours(v))
                if (colour[w] >= 0)
                    m |= std::uint64_t(1) << colour[w];
            return m;
        }

        auto pick() const -> std::optional<std::size_t>
        {
            std::optional<std::size_t> best;
            int best_sat = -1;
            std::size_t best_deg = 0;
            for (std::size_t v = 0 ; v < graph.size() ; ++v) {
                if (colour[v] != -1)
                    continue;
                int sat = std::popcount(neighbour_mask(v));
                std::size_t deg = graph.neighbours(v).size();
                if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
                    best = v;
                    best_sat = sat;
                    best_deg = deg;
                }
            }
            return best;
        }

        auto solve(int max_used) -> bool
        {
            ++nodes;
            auto v = pick();
            if (! v)
                return true;
            std::uint64_t options = allowed[*v] & ~neighbour_mask(*v);
            bool tried = false;
            for (int c = 0 ; c < k ; ++c) {
                if (! (options >> c & 1))
                    continue;
                if (symmetric && c > max_used + 1)
                    break;
                tried = true;
                colour[*v] = c;
                if (solve(std::max(max_used, c)))
                    return true;
                colour[*v] = -1;
            }
            if (! tried) {
                ++dead_ends;
                log += std::to_string(*v) + ";";
            }
            return false;
        }
    };

    auto full_mask(int k) -> std::uint64_t
    {
        return k >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << k) - 1;
    }
}

auto amc::solve_proper(const UnitDistanceGraph & graph, int k) -> ProperResult
{
    if (k < 1 || k > 63)
        throw Error{"k must be between 1 and 63"};
    ListSolver s{graph, k, std::vector<std::uint64_t>(graph.size(), full_mask(k)), true, std::vector<int>(graph.size(), -1), 0, 0, {}};
    ProperResult r;
    if (s.solve(-1))
        r.colouring = s.colour;
    r.trace.nodes = s.nodes;
    r.trace.dead_ends = s.dead_ends;
    r.trace.digest = sha256_hex("proper k=" + std::to_string(k) + " nodes=" + std::to_string(s.nodes) + "\n" + s.log);
    if (r.colouring && ! is_proper(graph, *r.colouring))
        throw Error{"internal: solver returned an improper colouring"};
    return r;
}

auto amc::solve_bichromatic_origin(const UnitDistanceGraph & graph, int k, unsigned jobs) -> OriginResult
{
    if (! graph.origin())
        throw Error{"graph has no origin vertex"};
    if (k < 2 || k > 63)
        throw Error{"k must be between 2 and 63"};
    std::size_t v0 = *graph.origin();

    std::vector<std::pair<int, int>> pairs;
    for (int a = 0 ; a < k ; ++a)
        for (int b = a + 1 ; b < k ; ++b)
            pairs.emplace_back(a, b);

    struct PairOutcome
    {
        std::optional<std::vector<int>> colours;
        std::uint64_t nodes = 0, dead_ends = 0;
        std::string log;
    };
    std::vector<PairOutcome> outcomes(pairs.size());
    std::atomic<std::size_t> best{pairs.size()};

    parallel_indices(pairs.size(), jobs, [&] (std::size_t i) {
        if (i > best.load())
            return;
        auto [a, b] = pairs[i];
        std::vector<std::uint64_t> allowed(graph.size(), full_mask(k));
        for (auto w : graph.neighbours(v0))
            allowed[w] &= ~((std::uint64_t(1) << a) | (std::uint64_t(1) << b));
        std::vector<int> colour(graph.size(), -1);
        colour[v0] = -2;
        ListSolver s{graph, k, allowed, false, colour, 0, 0, {}};
        // the origin is pre-placed; mark it so it is never picked or counted
        bool ok = s.solve(k);
        outcomes[i].nodes = s.nodes;
        outcomes[i].dead_ends = s.dead_ends;
        outcomes[i].log = s.log;
        if (ok) {
            s.colour[v0] = -1;
            outcomes[i].colours = s.colour;
            std::size_t cur = best.load();
            while (i < cur && ! best.compare_exchange_weak(cur, i))
                ;
        }
    });

    OriginResult r;
    std::string text = "origin k=" + std::to_string(k) + "\n";
    std::size_t used = std::min(best.load() + 1, pairs.size());
    for (std::size_t i = 0 ; i < used ; ++i) {
        r.pairs_tried.push_back(pairs[i]);
        r.trace.nodes += outcomes[i].nodes;
        r.trace.dead_ends += outcomes[i].dead_ends;
        text += std::to_string(pairs[i].first) + "," + std::to_string(pairs[i].second) + ":" + std::to_string(outcomes[i].nodes)
            + ":" + outcomes[i].log + "\n";
    }
    r.trace.digest = sha256_hex(text);
    if (best.load() < pairs.size()) {
        OriginColouring c{pairs[best.load()], *outcomes[best.load()].colours};
        if (! is_proper_with_origin(graph, c))
            throw Error{"internal: solver returned an improper origin colouring"};
        r.colouring = std::move(c);
    }
    return r;
}

auto amc::is_proper(const UnitDistanceGraph & graph, const std::vector<int> & colours) -> bool
{
    if (colours.size() != graph.size())
        return false;
    for (auto [a, b] : graph.edges())
        if (colours[a] < 0 || colours[a] == colours[b])
            return false;
    return std::none_of(colours.begin(), colours.end(), [] (int c) { return c < 0; });
}

auto amc::is_proper_with_origin(const UnitDistanceGraph & graph, const OriginColouring & c) -> bool
{
    if (! graph.origin() || c.colours.size() != graph.size())
        return false;
    std::size_t v0 = *graph.origin();
    auto [a, b] = c.origin_colours;
    if (a == b || a < 0 || b < 0)
        return false;
    for (std::size_t v = 0 ; v < graph.size() ; ++v)
        if (v != v0 && c.colours[v] < 0)
            return false;
    for (auto [x, y] : graph.edges()) {
        if (x == v0 || y == v0) {
            int other = c.colours[x == v0 ? y : x];
            if (other == a || other == b)
                return false;
        }
        else if (c.colours[x] == c.colours[y])
            return false;
    }
    return true;
}

auto OriginColouring::to_json(const UnitDistanceGraph & graph) const -> nlohmann::json
{
    nlohmann::json vs = nlohmann::json::object();
    for (std::size_t v = 0 ; v < graph.size() ; ++v)
        if (graph.origin() && v == *graph.origin())
            vs[graph.vertices()[v].id] = {origin_colours.first, origin_colours.second};
        else
            vs[graph.vertices()[v].id] = colours[v];
    return {{"origin", graph.vertices()[*graph.origin()].id}, {"colours", vs}};
}

auto UnitDistanceReport::to_json(const UnitDistanceGraph & graph) const -> nlohmann::json
{
    auto vs = nlohmann::json::array();
    for (auto & v : violations)
        vs.push_back({{"edge", {graph.vertices()[v.a].id, graph.vertices()[v.b].id}}, {"squared_length", v.squared_length}});
    return {{"exact_edges", exact_edges}, {"numeric_edges", numeric_edges}, {"violations", vs}, {"ok", ok()}};
}

auto amc::validate_unit_distances(const UnitDistanceGraph & graph) -> UnitDistanceReport
{
    UnitDistanceReport r;
    for (auto [a, b] : graph.edges()) {
        auto & va = graph.vertices()[a];
        auto & vb = graph.vertices()[b];
        if (! va.position || ! vb.position)
            throw Error{"vertex without coordinates: '" + (va.position ? vb.id : va.id) + "'"};
        Rational d2 = squared_distance(*va.position, *vb.position);
        if (va.numeric || vb.numeric) {
            ++r.numeric_edges;
            if (std::abs(d2.get_d() - 1.0) > 1e-12)
                r.violations.push_back(EdgeViolation{a, b, d2.get_d()});
        }
        else {
            ++r.exact_edges;
            if (d2 != 1)
                r.violations.push_back(EdgeViolation{a, b, d2.get_d()});
        }
    }
    return r;
}

namespace
{
    auto numeric_vertex(const std::string & id, long double x, long double y) -> GraphVertex
    {
        return GraphVertex{id, Point{{from_double(double(x)), from_double(double(y))}}, true};
    }
}

auto amc::unit_triangle_graph() -> UnitDistanceGraph
{
    std::vector<GraphVertex> vs{
        GraphVertex{"o", Point{{Rational{0}, Rational{0}}}, false},
        GraphVertex{"a", Point{{Rational{1}, Rational{0}}}, false},
        numeric_vertex("b", 0.5L, std::sqrt(3.0L) / 2)
    };
    return UnitDistanceGraph{std::move(vs), {{0, 1}, {0, 2}, {1, 2}}, 0};
}

auto amc::moser_spindle_graph() -> UnitDistanceGraph
{
    // two rhombi of unit triangles hinged at the origin, tips one apart
    long double s3 = std::sqrt(3.0L);
    long double theta = 2 * std::asin(1 / (2 * s3));
    auto rot = [&] (long double x, long double y) {
        return std::pair{x * std::cos(theta) - y * std::sin(theta), x * std::sin(theta) + y * std::cos(theta)};
    };
    std::vector<GraphVertex> vs{GraphVertex{"a", Point{{Rational{0}, Rational{0}}}, false}};
    vs.push_back(numeric_vertex("b", s3 / 2, 0.5L));
    vs.push_back(numeric_vertex("c", s3 / 2, -0.5L));
    vs.push_back(numeric_vertex("d", s3, 0));
    auto [bx, by] = rot(s3 / 2, 0.5L);
    auto [cx, cy] = rot(s3 / 2, -0.5L);
    auto [dx, dy] = rot(s3, 0);
    vs.push_back(numeric_vertex("e", bx, by));
    vs.push_back(numeric_vertex("f", cx, cy));
    vs.push_back(numeric_vertex("g", dx, dy));
    return UnitDistanceGraph{std::move(vs), {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {0, 4}, {0, 5}, {4, 5}, {4, 6}, {5, 6}, {3, 6}}, 0};
}
