#include <amc/incidence.hh>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

using namespace amc;

namespace
{
    auto point_from_json(const nlohmann::json & j, bool & numeric) -> Point
    {
        if (! j.is_array())
            throw Error{"point must be a coordinate array"};
        std::vector<Rational> cs;
        for (auto & c : j) {
            if (c.is_number_float()) {
                numeric = true;
                cs.push_back(from_double(c.get<double>()));
            }
            else
                cs.push_back(rational_from_json(c));
        }
        return Point{std::move(cs)};
    }

    auto to_plane(const Point & p) -> PlanePoint
    {
        return PlanePoint{(long double) p[0].get_d(), (long double) p[1].get_d()};
    }

    auto rational_sqrt(const Rational & q) -> std::optional<Rational>
    {
        if (q < 0)
            return std::nullopt;
        Integer n = isqrt(q.get_num()), d = isqrt(q.get_den());
        if (n * n != q.get_num() || d * d != q.get_den())
            return std::nullopt;
        Rational r{n, d};
        r.canonicalize();
        return r;
    }

    auto hypot2(long double x, long double y) -> long double
    {
        return std::sqrt(x * x + y * y);
    }
}

auto Bouquet::validate() const -> void
{
    if (origin.dimension() != 2)
        throw Error{"bouquets live in the plane"};
    if (centres.empty())
        throw Error{"bouquet has no circles"};
    std::set<Point> seen;
    for (auto & c : centres) {
        if (c.dimension() != 2)
            throw Error{"bouquets live in the plane"};
        if (! seen.insert(c).second)
            throw Error{"bouquet centres must be distinct"};
        Rational d2 = squared_distance(c, origin);
        if (numeric ? std::abs(d2.get_d() - 1) > 1e-12 : d2 != 1)
            throw Error{"centre " + to_string(c) + " is not at unit distance from the common point"};
    }
}

auto Bouquet::to_json() const -> nlohmann::json
{
    auto cs = nlohmann::json::array();
    for (auto & c : centres)
        cs.push_back(c.to_json());
    return {{"origin", origin.to_json()}, {"centres", cs}};
}

auto Bouquet::from_json(const nlohmann::json & j) -> Bouquet
{
    Bouquet b;
    b.origin = point_from_json(j.at("origin"), b.numeric);
    for (auto & c : j.at("centres"))
        b.centres.push_back(point_from_json(c, b.numeric));
    b.validate();
    return b;
}

auto Bouquet::of_graph(const UnitDistanceGraph & graph) -> Bouquet
{
    if (! graph.origin())
        throw Error{"graph has no origin vertex"};
    auto & o = graph.vertices()[*graph.origin()];
    if (! o.position)
        throw Error{"origin vertex has no coordinates"};
    Bouquet b{*o.position, {}, o.numeric};
    for (auto w : graph.neighbours(*graph.origin())) {
        auto & v = graph.vertices()[w];
        if (! v.position)
            throw Error{"vertex '" + v.id + "' has no coordinates"};
        b.centres.push_back(*v.position);
        b.numeric = b.numeric || v.numeric;
    }
    b.validate();
    return b;
}

auto Pencil::validate() const -> void
{
    if (origin.dimension() != 2)
        throw Error{"pencils live in the plane"};
    if (directions.size() < 2)
        throw Error{"degenerate pencil: at least two lines are needed"};
    for (std::size_t i = 0 ; i < directions.size() ; ++i) {
        if (directions[i].dimension() != 2 || squared_norm(directions[i]) == 0)
            throw Error{"pencil directions must be non-zero plane vectors"};
        for (std::size_t j = 0 ; j < i ; ++j)
            if (directions[i][0] * directions[j][1] - directions[i][1] * directions[j][0] == 0)
                throw Error{"degenerate pencil: parallel lines"};
    }
}

auto Pencil::to_json() const -> nlohmann::json
{
    auto ds = nlohmann::json::array();
    for (auto & d : directions)
        ds.push_back(d.to_json());
    return {{"origin", origin.to_json()}, {"directions", ds}};
}

auto Pencil::from_json(const nlohmann::json & j) -> Pencil
{
    Pencil p;
    bool numeric = false;
    p.origin = j.contains("origin") ? point_from_json(j.at("origin"), numeric) : Point::zero(2);
    for (auto & d : j.at("directions"))
        p.directions.push_back(point_from_json(d, numeric));
    p.validate();
    return p;
}

auto amc::place_scaled_copy(const Bouquet & bouquet, const Rational & lambda) -> ScaledPlacement
{
    if (! (lambda > 0 && lambda <= 2))
        throw Error{"lambda must lie in (0, 2], got " + to_string(lambda)};
    bouquet.validate();

    Rational cos_exact = lambda / 2;
    long double l = (long double) lambda.get_d();
    ScaledPlacement out;
    out.alpha = std::acos(l / 2);
    long double c = std::cos(out.alpha), s = std::sin(out.alpha);
    auto O = to_plane(bouquet.origin);

    for (auto & centre : bouquet.centres) {
        auto Oj = to_plane(centre);
        long double dx = Oj.x - O.x, dy = Oj.y - O.y;
        out.points.push_back(PlanePoint{O.x + l * (c * dx - s * dy), O.y + l * (s * dx + c * dy)});
    }

    for (std::size_t j = 0 ; j < out.points.size() ; ++j) {
        auto Oj = to_plane(bouquet.centres[j]);
        auto & P = out.points[j];
        out.max_circle_error = std::max(out.max_circle_error, std::abs(hypot2(P.x - Oj.x, P.y - Oj.y) - 1));
        out.max_congruence_error = std::max(out.max_congruence_error, std::abs(hypot2(P.x - O.x, P.y - O.y) - l));
        for (std::size_t i = 0 ; i < j ; ++i) {
            auto Oi = to_plane(bouquet.centres[i]);
            auto & Q = out.points[i];
            long double want = l * hypot2(Oj.x - Oi.x, Oj.y - Oi.y);
            out.max_congruence_error = std::max(out.max_congruence_error, std::abs(hypot2(P.x - Q.x, P.y - Q.y) - want));
        }
    }

    if (auto sin_exact = rational_sqrt(1 - cos_exact * cos_exact)) {
        Matrix R = rotation_2d(cos_exact, *sin_exact);
        std::vector<Point> exact;
        for (auto & centre : bouquet.centres) {
            exact.push_back(bouquet.origin + (R * (centre - bouquet.origin)).scaled(lambda));
            if (! bouquet.numeric && squared_distance(exact.back(), centre) != 1)
                throw Error{"internal: exact placement is off the circle"};
        }
        out.exact_points = std::move(exact);
    }
    return out;
}

namespace
{
    struct Sector
    {
        double start, width;
    };

    auto pencil_sector(const Pencil & pencil) -> Sector
    {
        std::vector<double> th;
        for (auto & d : pencil.directions) {
            double t = std::atan2(d[1].get_d(), d[0].get_d());
            t = std::fmod(t + 2 * std::numbers::pi, std::numbers::pi);
            th.push_back(t);
        }
        std::sort(th.begin(), th.end());
        double best_gap = -1;
        std::size_t after = 0;
        for (std::size_t i = 0 ; i < th.size() ; ++i) {
            double gap = i + 1 < th.size() ? th[i + 1] - th[i] : th[0] + std::numbers::pi - th[i];
            if (gap > best_gap) {
                best_gap = gap;
                after = i;
            }
        }
        return Sector{th[(after + 1) % th.size()], std::numbers::pi - best_gap};
    }
}

auto amc::pencil_reach(const Pencil & pencil) -> PencilReach
{
    pencil.validate();
    auto sector = pencil_sector(pencil);
    double alpha = sector.width;
    // tangent cone from distance eps has angle 2 asin(1 / (1 + eps)); half
    // the critical distance keeps a margin
    double eps = (1 / std::sin(alpha / 2) - 1) / 2;
    return PencilReach{alpha, eps};
}

auto amc::pencil_meets_circle(const Pencil & pencil, double rotation, PlanePoint p, PlanePoint centre) -> bool
{
    long double c = std::cos((long double) rotation), s = std::sin((long double) rotation);
    for (auto & d : pencil.directions) {
        long double x = d[0].get_d(), y = d[1].get_d();
        long double n = hypot2(x, y);
        long double ex = (c * x - s * y) / n, ey = (s * x + c * y) / n;
        long double dist = std::abs((centre.x - p.x) * ey - (centre.y - p.y) * ex);
        if (dist > 1 + 1e-12L)
            return false;
    }
    return true;
}

auto amc::place_pencil_on_circle(const Pencil & pencil, PlanePoint p, PlanePoint centre) -> std::optional<double>
{
    pencil.validate();
    long double dx = centre.x - p.x, dy = centre.y - p.y;
    if (hypot2(dx, dy) <= 1)
        return 0.0;
    auto sector = pencil_sector(pencil);
    double rot = double(std::atan2(dy, dx)) - (sector.start + sector.width / 2);
    if (pencil_meets_circle(pencil, rot, p, centre))
        return rot;
    return std::nullopt;
}

auto amc::inscribed_points(PlanePoint centre, double radius, const std::vector<double> & angles) -> InscribedPoints
{
    if (radius <= 0)
        throw Error{"radius must be positive"};
    long double total = 0;
    for (auto a : angles) {
        if (! (a > 0))
            throw Error{"inscribed angles must be positive"};
        total += 2 * (long double) a;
    }
    if (total >= 2 * std::numbers::pi_v<long double> - 1e-12L)
        throw Error{"arc overflow: the arcs 2 alpha_i cover the whole circle"};

    InscribedPoints out;
    long double phi = 0;
    auto at = [&] (long double t) {
        return PlanePoint{centre.x + radius * std::cos(t), centre.y + radius * std::sin(t)};
    };
    out.points.push_back(at(0));
    for (auto a : angles) {
        phi += 2 * (long double) a;
        out.points.push_back(at(phi));
    }

    long double free = 2 * std::numbers::pi_v<long double> - total;
    for (int k = 1 ; k <= 5 ; ++k) {
        auto c = at(total + free * k / 6);
        for (std::size_t i = 0 ; i < angles.size() ; ++i) {
            auto & a = out.points[i];
            auto & b = out.points[i + 1];
            long double ux = a.x - c.x, uy = a.y - c.y, vx = b.x - c.x, vy = b.y - c.y;
            long double seen = std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
            out.max_angle_error = std::max(out.max_angle_error, double(std::abs(seen - (long double) angles[i])));
        }
    }
    return out;
}

auto amc::circle_samples(const Point & centre, int density) -> std::vector<Point>
{
    if (density < 1)
        throw Error{"probe density must be at least 1"};
    std::vector<Point> out;
    for (long b = 1 ; b <= density ; ++b)
        for (long a = -density * b ; a <= density * b ; ++a) {
            if (std::gcd(a, b) != 1)
                continue;
            Rational t{a, b};
            t.canonicalize();
            Rational den = 1 + t * t;
            out.push_back(centre + Point{{(1 - t * t) / den, 2 * t / den}});
        }
    out.push_back(centre + Point{{Rational{-1}, Rational{0}}});
    return out;
}

namespace
{
    auto line_samples(const Point & origin, const Point & direction, int density) -> std::vector<Point>
    {
        std::vector<Point> out;
        for (long b = 1 ; b <= density ; ++b)
            for (long a = -density * b ; a <= density * b ; ++a) {
                if (a == 0 || std::gcd(a, b) != 1)
                    continue;
                Rational s{a, b};
                s.canonicalize();
                out.push_back(origin + direction.scaled(s));
            }
        return out;
    }

    auto rigid(const SimilarityMap & placement) -> void
    {
        if (placement.scale() != 1 || placement.dimension() != 2)
            throw Error{"placement must be a rigid motion of the plane"};
    }

    auto find_smiling(const Colouring & colouring, const SimilarityMap & placement, const Point & origin,
            const std::vector<Point> & components, bool circles, int density, std::optional<int> want)
        -> std::optional<SmilingWitness>
    {
        rigid(placement);
        Point placed_origin = placement(origin);
        int origin_colour = colouring.colour(placed_origin);

        std::vector<std::map<int, Point>> met;
        for (auto & comp : components) {
            std::vector<Point> samples;
            if (circles)
                samples = circle_samples(placement(comp), density);
            else
                samples = line_samples(placed_origin, placement.rotation() * comp, density);
            std::map<int, Point> first;
            for (auto & p : samples)
                first.emplace(colouring.colour(p), p);
            met.push_back(std::move(first));
        }

        for (auto & [colour, p] : met.front()) {
            (void) p;
            if (colour == origin_colour || (want && colour != *want))
                continue;
            if (! std::all_of(met.begin(), met.end(), [c = colour] (const auto & m) { return m.count(c) > 0; }))
                continue;
            SmilingWitness w{placement, origin, components, circles, {}, colour, origin_colour};
            for (auto & m : met)
                w.points.push_back(m.at(colour));
            return w;
        }
        return std::nullopt;
    }
}

auto SmilingWitness::to_json() const -> nlohmann::json
{
    auto cs = nlohmann::json::array();
    for (auto & c : components)
        cs.push_back(c.to_json());
    auto ps = nlohmann::json::array();
    for (auto & p : points)
        ps.push_back(p.to_json());
    return {
        {"placement", placement.to_json()},
        {"origin", origin.to_json()},
        {circles ? "centres" : "directions", cs},
        {"points", ps},
        {"colour", colour},
        {"origin_colour", origin_colour}
    };
}

auto amc::check_smiling(const Colouring & colouring, const Bouquet & bouquet, const SimilarityMap & placement, int density,
        std::optional<int> colour) -> std::optional<SmilingWitness>
{
    bouquet.validate();
    return find_smiling(colouring, placement, bouquet.origin, bouquet.centres, true, density, colour);
}

auto amc::check_smiling(const Colouring & colouring, const Pencil & pencil, const SimilarityMap & placement, int density,
        std::optional<int> colour) -> std::optional<SmilingWitness>
{
    pencil.validate();
    return find_smiling(colouring, placement, pencil.origin, pencil.directions, false, density, colour);
}

auto amc::verify_smiling(const Colouring & colouring, const SmilingWitness & w) -> bool
{
    if (w.placement.scale() != 1 || w.points.size() != w.components.size())
        return false;
    Point o = w.placement(w.origin);
    if (colouring.colour(o) != w.origin_colour || w.colour == w.origin_colour)
        return false;
    for (std::size_t i = 0 ; i < w.points.size() ; ++i) {
        auto & p = w.points[i];
        if (w.circles) {
            if (squared_distance(p, w.placement(w.components[i])) != 1)
                return false;
        }
        else {
            Point d = w.placement.rotation() * w.components[i];
            Point v = p - o;
            if (v[0] * d[1] - v[1] * d[0] != 0)
                return false;
        }
        if (colouring.colour(p) != w.colour)
            return false;
    }
    return true;
}

auto LatticeLikeReport::to_json() const -> nlohmann::json
{
    return {{"in_lattice", in_lattice}, {"origin_extreme", origin_extreme}, {"ok", ok()},
        {"rotatable_intervals", rotatable_intervals}, {"tested_intervals", tested_intervals}};
}

auto amc::validate_lattice_like(const Bouquet & bouquet, const Lattice & lattice, int max_rot_param) -> LatticeLikeReport
{
    LatticeLikeReport r;
    if (lattice.dimension() != bouquet.origin.dimension())
        throw Error{"lattice and bouquet dimensions differ"};
    std::vector<Point> pts{bouquet.origin};
    pts.insert(pts.end(), bouquet.centres.begin(), bouquet.centres.end());
    r.in_lattice = ! bouquet.numeric && std::all_of(pts.begin(), pts.end(), [&] (const Point & p) { return lattice_contains(lattice, p); });
    std::set<Point> distinct(pts.begin(), pts.end());
    r.origin_extreme = distinct.size() == pts.size() && is_extreme_point(PatternPair{pts, 0});

    r.tested_intervals = 8;
    for (int k = 0 ; k < 8 ; ++k)
        if (find_rotatability_witness(lattice, k * std::numbers::pi / 8, (k + 1) * std::numbers::pi / 8, max_rot_param))
            ++r.rotatable_intervals;
    return r;
}

auto amc::compose_bichromatic_colouring(const UnitDistanceGraph & graph, const SmilingWitness & witness,
        const Colouring & colouring) -> OriginColouring
{
    auto bouquet = Bouquet::of_graph(graph);
    if (! witness.circles)
        throw Error{"witness is for a pencil, not a bouquet"};
    std::set<Point> want(bouquet.centres.begin(), bouquet.centres.end());
    std::set<Point> have(witness.components.begin(), witness.components.end());
    if (witness.origin != bouquet.origin || want != have)
        throw Error{"witness does not match the bouquet of the graph's origin"};
    if (! verify_smiling(colouring, witness))
        throw Error{"smiling witness does not validate against the colouring"};

    std::size_t v0 = *graph.origin();
    OriginColouring out;
    out.colours.assign(graph.size(), -1);
    for (std::size_t v = 0 ; v < graph.size() ; ++v) {
        if (v == v0)
            continue;
        auto & pos = graph.vertices()[v].position;
        if (! pos)
            throw Error{"vertex '" + graph.vertices()[v].id + "' has no coordinates"};
        out.colours[v] = colouring.colour(witness.placement(*pos));
    }
    out.origin_colours = {witness.origin_colour, witness.colour};
    if (! is_proper_with_origin(graph, out))
        throw Error{"properness violation: the colouring is not proper on the placed graph"};
    return out;
}
