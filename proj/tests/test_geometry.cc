#include <amc/geometry.hh>

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace amc;

namespace
{
    auto P(long x) -> Point { return Point{Rational{x}}; }
    auto P(long x, long y) -> Point { return Point{Rational{x}, Rational{y}}; }

    auto cross(const Point & o, const Point & a, const Point & b) -> Rational
    {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    }

    auto on_segment(const Point & a, const Point & b, const Point & p) -> bool
    {
        if (cross(a, b, p) != 0)
            return false;
        return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0])
            && std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
    }

    auto in_triangle(const Point & a, const Point & b, const Point & c, const Point & p) -> bool
    {
        auto d1 = cross(a, b, p), d2 = cross(b, c, p), d3 = cross(c, a, p);
        if (cross(a, b, c) == 0)
            return on_segment(a, b, p) || on_segment(b, c, p) || on_segment(a, c, p);
        bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
        bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
        return ! (has_neg && has_pos);
    }

    /// By Caratheodory, p is in the hull of the others iff it equals one of
    /// them or lies on a segment or triangle spanned by them.
    auto brute_extreme(const std::vector<Point> & pts, std::size_t origin) -> bool
    {
        std::vector<Point> rest;
        for (std::size_t i = 0 ; i < pts.size() ; ++i)
            if (i != origin)
                rest.push_back(pts[i]);
        auto & p = pts[origin];
        for (std::size_t i = 0 ; i < rest.size() ; ++i) {
            if (rest[i] == p)
                return false;
            for (std::size_t j = i + 1 ; j < rest.size() ; ++j) {
                if (on_segment(rest[i], rest[j], p))
                    return false;
                for (std::size_t k = j + 1 ; k < rest.size() ; ++k)
                    if (in_triangle(rest[i], rest[j], rest[k], p))
                        return false;
            }
        }
        return true;
    }
}

TEST_CASE("rationals parse and round exactly")
{
    CHECK(parse_rational("6/4") == Rational{3, 2});
    CHECK(parse_rational("-7") == -7);
    CHECK(floor_of(Rational{-3, 2}) == -2);
    CHECK(ceil_of(Rational{-3, 2}) == -1);
    CHECK(gcd_of(Rational{1, 2}, Rational{1, 3}) == Rational{1, 6});
    CHECK(isqrt(Integer{99}) == 9);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("extreme points on the line and in the plane")
{
    CHECK(is_extreme_point(PatternPair{{P(0), P(1), P(2)}, 0}));
    CHECK_FALSE(is_extreme_point(PatternPair{{P(0), P(1), P(2)}, 1}));
    CHECK(is_extreme_point(PatternPair{{P(0, 1), P(1, 1), P(1, 0)}, 1}));
    CHECK_FALSE(is_extreme_point(PatternPair{{P(0, 0), P(1, 0), P(-1, 0)}, 0}));
}

TEST_CASE("extreme point test agrees with a brute-force hull check")
{
    std::mt19937 rng{7};
    std::uniform_int_distribution<long> coord{-4, 4};
    int checked = 0;
    while (checked < 400) {
        std::vector<Point> pts;
        for (int i = 0 ; i < 5 ; ++i)
            pts.push_back(P(coord(rng), coord(rng)));
        std::set<Point> distinct(pts.begin(), pts.end());
        if (distinct.size() != pts.size())
            continue;
        for (std::size_t o = 0 ; o < pts.size() ; ++o)
            CHECK(is_extreme_point(PatternPair{pts, o}) == brute_extreme(pts, o));
        ++checked;
    }
}

TEST_CASE("patterns are validated")
{
    CHECK_THROWS_AS(PatternPair({P(0), P(1)}, 0), Error);
    CHECK_THROWS_AS(PatternPair({P(0), P(1), P(1)}, 0), Error);
    CHECK_THROWS_AS(PatternPair({P(0), P(1), P(2)}, 3), Error);
    CHECK_THROWS_AS(PatternPair({P(0), P(1), P(2, 2)}, 0), Error);
    auto p = parse_pattern("0,1;1,1;1,0@1,1");
    CHECK(p.size() == 3);
    CHECK(p.origin_index() == 1);
    CHECK(parse_pattern("1,2,3@2").origin() == P(2));
    CHECK_THROWS_AS(parse_pattern("1,2,3@4"), Error);
}

TEST_CASE("similarity maps")
{
    PatternPair s{{P(0), P(1), P(2)}, 0};
    CHECK(apply_similarity(SimilarityMap::identity(1), s) == s);
    auto doubled = apply_similarity(SimilarityMap::homothety(2, P(0)), s);
    CHECK(doubled.points() == std::vector<Point>{P(0), P(2), P(4)});

    Matrix r = rotation_2d(Rational{4, 5}, Rational{3, 5});
    SimilarityMap m{5, r, P(0, 0)};
    CHECK(m(P(1, 0)) == P(4, 3));
    CHECK(squared_norm(m(P(1, 0))) == 25);
    CHECK(m.is_proper());
}

TEST_CASE("rational rotations")
{
    auto rots = rational_rotations_2d(2);
    Matrix three_four_five = rotation_2d(Rational{3, 5}, Rational{4, 5});
    bool found = false;
    for (auto & r : rots)
        found = found || r.rotation() == three_four_five;
    CHECK(found);
    CHECK(rots.front().rotation() == Matrix::identity(2));

    auto three = rational_rotations_2d(3);
    CHECK(three.size() == 4);
    for (auto & r : rational_rotations_2d(12)) {
        CHECK(r.rotation().is_orthogonal());
        CHECK(r.rotation().transpose() * r.rotation() == Matrix::identity(2));
        CHECK(r.rotation().determinant() == 1);
    }
}

TEST_CASE("lattice membership")
{
    auto z2 = Lattice::integer_lattice(2);
    CHECK(lattice_contains(z2, P(3, -7)));
    CHECK_FALSE(lattice_contains(z2, Point{Rational{1, 2}, Rational{0}}));

    Lattice skew{{P(2, 0), P(1, 1)}};
    CHECK(lattice_contains(skew, P(3, 1)));
    CHECK_FALSE(lattice_contains(skew, P(1, 0)));

    CHECK_THROWS_AS(Lattice::from_json(nlohmann::json::parse("[[1,0],[0,1.4142135]]")), Error);
    CHECK_NOTHROW(Lattice::from_json(nlohmann::json::parse(R"([[1,0],[0,"7/5"]])")));
}

TEST_CASE("rotatability witnesses")
{
    auto z2 = Lattice::integer_lattice(2);
    auto w = find_rotatability_witness(z2, 0.6, 0.7, 3);
    REQUIRE(w);
    CHECK(w->lambda == 5);
    CHECK(w->rotation.rotation() == rotation_2d(Rational{4, 5}, Rational{3, 5}));
    for (auto & b : z2.basis())
        CHECK(lattice_contains(z2, w->rotation.rotation() * b.scaled(w->lambda)));
    CHECK(w->angle.lo <= std::atan2(3.0, 4.0));
    CHECK(w->angle.hi >= std::atan2(3.0, 4.0));

    CHECK_FALSE(find_rotatability_witness(z2, 0.0, M_PI, 1));

    auto wide = find_rotatability_witness(z2, 0.92, 0.93, 12);
    REQUIRE(wide);
    CHECK(wide->angle.lo > 0.92);
    CHECK(wide->angle.hi < 0.93);
    for (auto & b : z2.basis())
        CHECK(lattice_contains(z2, wide->rotation.rotation() * b.scaled(wide->lambda)));
}

TEST_CASE("point and pattern JSON round trip")
{
    auto p = parse_pattern("0,1/3;1,1;-2/7,0@1,1");
    CHECK(PatternPair::from_json(p.to_json()) == p);
    SimilarityMap m{Rational{3, 2}, quarter_turn(), Point{Rational{1, 3}, Rational{-1}}};
    CHECK(SimilarityMap::from_json(m.to_json()) == m);
}
