#include <amc/search.hh>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

using namespace amc;

namespace
{
    auto embed_plane_rotation(std::size_t d, std::size_t a, std::size_t b, const Matrix & r) -> Matrix
    {
        Matrix m = Matrix::identity(d);
        m(a, a) = r(0, 0);
        m(a, b) = r(0, 1);
        m(b, a) = r(1, 0);
        m(b, b) = r(1, 1);
        return m;
    }

    auto max_denominator_ok(const Point & p, unsigned N) -> bool
    {
        for (auto & c : p.coords())
            if (c.get_den() > N)
                return false;
        return true;
    }

    auto diameter(const PatternPair & pattern) -> double
    {
        Rational best{0};
        for (auto & p : pattern.points())
            for (auto & q : pattern.points())
                best = std::max(best, squared_distance(p, q));
        return std::sqrt(best.get_d());
    }

    using Accept = std::function<auto (const PatternPair &) -> bool>;

    struct Extension
    {
        PatternPair copy;
        Matrix rotation;
        Rational mu;
    };

    /// Tries copies anchor + mu R (s - s0) for a ladder of target scales,
    /// every rotation and nearby admissible mu, returning the first one the
    /// predicate accepts.
    auto extend_with(const PatternPair & pattern, const Point & anchor, double radius, unsigned N, int max_rot_param,
            const Accept & accept) -> std::optional<Extension>
    {
        if (! is_extreme_point(pattern))
            throw DomainError{"the distinguished point is not an extreme point of the pattern"};
        if (anchor.dimension() != pattern.dimension())
            throw Error{"dimension mismatch between anchor and pattern"};
        if (N < 1)
            throw Error{"denominator bound must be at least 1"};

        std::size_t d = pattern.dimension();
        const Point & s0 = pattern.origin();
        std::vector<Point> diffs;
        for (auto & p : pattern.points())
            diffs.push_back(p - s0);
        double diam = diameter(pattern);

        auto rotations = extension_rotations(d, max_rot_param);
        std::vector<Rational> unit;
        for (auto & R : rotations) {
            Rational g{0};
            for (auto & v : diffs) {
                Point image = R * v;
                for (auto & c : image.coords())
                    g = gcd_of(g, c);
            }
            unit.push_back(1 / g);
        }

        std::set<std::pair<std::size_t, Rational>> tried;
        for (int e = 1 ; e <= 10 ; ++e) {
            double target = std::ldexp(radius / diam, -e);
            for (std::size_t r = 0 ; r < rotations.size() ; ++r) {
                std::vector<Rational> mus;
                for (unsigned b = 1 ; b <= N ; ++b) {
                    Rational step = unit[r] / b;
                    double k0 = std::floor(target / step.get_d());
                    for (double k : {k0, k0 + 1}) {
                        if (k < 1 || k > 1e15)
                            continue;
                        Rational mu = step * Rational{Integer{static_cast<long>(k)}};
                        if (std::find(mus.begin(), mus.end(), mu) == mus.end())
                            mus.push_back(mu);
                    }
                }
                std::sort(mus.begin(), mus.end(), [target] (const Rational & a, const Rational & b) {
                    double da = std::abs(a.get_d() - target), db = std::abs(b.get_d() - target);
                    if (da != db)
                        return da < db;
                    return a < b;
                });

                for (auto & mu : mus) {
                    if (! tried.emplace(r, mu).second)
                        continue;
                    std::vector<Point> pts;
                    bool ok = true;
                    for (auto & v : diffs) {
                        pts.push_back(anchor + (rotations[r] * v).scaled(mu));
                        if (! max_denominator_ok(pts.back(), N)) {
                            ok = false;
                            break;
                        }
                    }
                    if (! ok)
                        continue;
                    PatternPair copy{pts, pattern.origin_index()};
                    if (accept(copy))
                        return Extension{copy, rotations[r], mu};
                }
            }
        }
        return std::nullopt;
    }

    auto strictly_inside(const PatternPair & copy, const Point & centre, const Rational & radius_squared) -> bool
    {
        for (std::size_t i = 0 ; i < copy.size() ; ++i)
            if (i != copy.origin_index() && ! (squared_distance(copy.points()[i], centre) < radius_squared))
                return false;
        return true;
    }
}

auto amc::extension_rotations(std::size_t d, int max_rot_param) -> std::vector<Matrix>
{
    std::vector<Matrix> out;
    if (d == 1) {
        out.push_back(Matrix::identity(1));
        Matrix m = Matrix::identity(1);
        m(0, 0) = -1;
        out.push_back(m);
        return out;
    }

    out.push_back(Matrix::identity(d));
    auto planar = rational_rotations_2d(max_rot_param);
    for (std::size_t a = 0 ; a < d ; ++a)
        for (std::size_t b = a + 1 ; b < d ; ++b)
            for (auto & r : planar) {
                Matrix m = r.rotation();
                for (int q = 0 ; q < 4 ; ++q) {
                    Matrix e = embed_plane_rotation(d, a, b, m);
                    if (std::find(out.begin(), out.end(), e) == out.end())
                        out.push_back(e);
                    m = quarter_turn() * m;
                }
            }
    return out;
}

auto amc::extend_into_ball(const PatternPair & pattern, const Point & anchor, const Point & centre,
        const Rational & radius_squared, unsigned N, int max_rot_param) -> std::optional<PatternPair>
{
    if (centre.dimension() != pattern.dimension())
        throw Error{"dimension mismatch between disc centre and pattern"};
    if (radius_squared <= 0)
        throw Error{"disc radius must be positive"};
    auto e = extend_with(pattern, anchor, std::sqrt(radius_squared.get_d()), N, max_rot_param,
            [&] (const PatternPair & copy) { return strictly_inside(copy, centre, radius_squared); });
    if (! e)
        return std::nullopt;
    return e->copy;
}

auto amc::extend_from_ball(const PatternPair & pattern, const Point & anchor, const Point & centre,
        const Rational & radius, unsigned N, int max_rot_param) -> std::optional<PatternPair>
{
    if (radius <= 0)
        throw Error{"disc radius must be positive"};
    return extend_into_ball(pattern, anchor, centre, radius * radius, N, max_rot_param);
}

auto amc::ball_points(std::size_t d, int R) -> std::vector<Point>
{
    if (d < 1 || R < 0)
        throw Error{"ball needs a positive dimension and a non-negative radius"};
    std::vector<Point> out;
    std::vector<long> v(d, -R);
    while (true) {
        long n = 0;
        for (auto x : v)
            n += x * x;
        if (n <= long(R) * R) {
            std::vector<Rational> c;
            for (auto x : v)
                c.emplace_back(x);
            out.emplace_back(std::move(c));
        }
        std::size_t k = d;
        while (k > 0 && v[k - 1] == R) {
            v[k - 1] = -R;
            --k;
        }
        if (k == 0)
            break;
        ++v[k - 1];
    }
    return out;
}

auto amc::grid_expand(const ColouringPtr & colouring, const PatternPair & pattern, const Window & window, int R,
        long lambda_max, int max_rot_param, unsigned jobs) -> Witness
{
    if (pattern.dimension() != window.dimension())
        throw Error{"dimension mismatch: pattern " + std::to_string(pattern.dimension()) + " vs window " + std::to_string(window.dimension())};
    if (! is_extreme_point(pattern))
        throw DomainError{"the distinguished point is not an extreme point of the pattern"};
    if (R < 1)
        throw Error{"ball radius must be at least 1"};

    std::size_t d = window.dimension();
    auto H = ball_points(d, R);

    Witness w;
    w.operation = "grid_expand";
    w.colouring = colouring->to_json();
    w.search_space = {
        {"operation", w.operation},
        {"pattern", pattern.to_json()},
        {"window", window.to_json()},
        {"R", R},
        {"lambda_max", lambda_max},
        {"max_rot_param", max_rot_param},
        {"order", "ball homothet by lambda then translation; lattice points by squared norm then lexicographic"}
    };

    auto ball = search_mono_homothet(colouring, H, window, lambda_max, jobs);
    if (! ball.found()) {
        w.kind = WitnessKind::Exhausted;
        w.extra["stage"] = "ball";
        w.extra["ball"] = ball.to_json();
        w.caveats.push_back("no monochromatic homothet of the ball within the window and scale bound");
        return w;
    }

    Rational lambda = ball.transform->scale();
    Point c = ball.transform->translation();
    int ref = ball.evidence.front().colour;
    w.extra["lambda"] = to_string(lambda);
    w.extra["offset"] = c.to_json();

    // lattice coordinates z with c + lambda z inside the window
    std::vector<long> zlo(d), zhi(d);
    Rational margin{-1};
    for (std::size_t k = 0 ; k < d ; ++k) {
        zlo[k] = ceil_of((window.lower()[k] - c[k]) / lambda).get_si();
        zhi[k] = floor_of((window.upper()[k] - c[k]) / lambda).get_si();
        Rational m = std::min(c[k] - window.lower()[k], window.upper()[k] - c[k]);
        margin = margin < 0 ? m : std::min(margin, m);
    }
    double total = 1;
    for (std::size_t k = 0 ; k < d ; ++k)
        total *= double(zhi[k] - zlo[k] + 1);
    if (total > double(1 << 22))
        throw Error{"window too large for lattice expansion"};

    std::vector<std::vector<long>> zs;
    std::vector<long> z = zlo;
    while (true) {
        zs.push_back(z);
        std::size_t k = d;
        while (k > 0 && z[k - 1] == zhi[k - 1]) {
            z[k - 1] = zlo[k - 1];
            --k;
        }
        if (k == 0)
            break;
        ++z[k - 1];
    }
    auto norm = [] (const std::vector<long> & v) {
        long n = 0;
        for (auto x : v)
            n += x * x;
        return n;
    };
    std::stable_sort(zs.begin(), zs.end(), [&] (const auto & a, const auto & b) {
        auto na = norm(a), nb = norm(b);
        return na != nb ? na < nb : a < b;
    });

    auto lattice_point = [&] (const Point & zp) { return c + zp.scaled(lambda); };
    auto to_point = [] (const std::vector<long> & v) {
        std::vector<Rational> cs;
        for (auto x : v)
            cs.emplace_back(x);
        return Point{std::move(cs)};
    };

    std::uint64_t checked = 0;
    for (auto & zq : zs) {
        Point qz = to_point(zq);
        Point q = lattice_point(qz);
        int colour = colouring->colour(q);
        ++checked;
        if (colour == ref)
            continue;

        // every lattice point of smaller norm inside the window is known to be ref-coloured
        Rational r2 = Rational{norm(zq)} - Rational{1, 2};
        auto accept = [&] (const PatternPair & copy) {
            if (! strictly_inside(copy, Point::zero(d), r2))
                return false;
            for (std::size_t i = 0 ; i < copy.size() ; ++i) {
                if (i == copy.origin_index())
                    continue;
                Point p = lattice_point(copy.points()[i]);
                if (! window.contains(p) || colouring->colour(p) != ref)
                    return false;
            }
            return true;
        };
        auto ext = r2 > 0 ? extend_with(pattern, qz, std::sqrt(r2.get_d()), 1, max_rot_param, accept) : std::nullopt;
        if (! ext) {
            w.kind = WitnessKind::Exhausted;
            w.extra["stage"] = "extension";
            w.extra["off_colour_point"] = q.to_json();
            w.caveats.push_back("an off-colour lattice point was found but no copy was placed within the rotation and scale bounds");
            return w;
        }

        w.kind = WitnessKind::AMCopy;
        w.origin_index = pattern.origin_index();
        for (auto & p : ext->copy.points()) {
            Point x = lattice_point(p);
            w.evidence.push_back(Evidence{x, colouring->colour(x)});
        }
        // x -> c + lambda (qz + mu R (x - s0))
        Rational scale = lambda * ext->mu;
        w.transform = SimilarityMap{scale, ext->rotation, q - (ext->rotation * pattern.origin()).scaled(scale)};
        w.extra["lattice_checked"] = checked;
        return w;
    }

    w.kind = WitnessKind::MonoSublattice;
    for (auto & e : ball.evidence)
        w.evidence.push_back(e);
    w.extra["verified_radius"] = to_string(margin);
    w.extra["lattice_points"] = checked;
    w.extra["colour"] = ref;
    return w;
}
