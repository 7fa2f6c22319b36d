#include <amc/search.hh>

#include <doctest.h>

#include <random>
#include <set>

using namespace amc;

namespace
{
    auto P(const Rational & x) -> Point { return Point{x}; }
    auto P(long x, long y) -> Point { return Point{Rational{x}, Rational{y}}; }

    auto ptr(ColouringPtr c) -> ColouringPtr { return c; }

    /// Every grid point of a window with denominators within its bound.
    auto window_points(const Window & w) -> std::vector<Point>
    {
        std::vector<Point> out;
        std::size_t d = w.dimension();
        std::vector<std::int64_t> g(d);
        for (std::size_t k = 0 ; k < d ; ++k)
            g[k] = w.grid_lo(k);
        while (true) {
            Point p = w.point_at(g);
            bool ok = true;
            for (auto & c : p.coords())
                ok = ok && c.get_den() <= w.denominator_bound();
            if (ok)
                out.push_back(p);
            std::size_t k = d;
            while (k > 0 && g[k - 1] == w.grid_hi(k - 1)) {
                g[k - 1] = w.grid_lo(k - 1);
                --k;
            }
            if (k == 0)
                break;
            ++g[k - 1];
        }
        return out;
    }

    /// A homothet is fixed by the images of two pattern points, so trying
    /// every ordered pair of window points finds every positive homothet.
    auto brute_am_exists(const Colouring & c, const PatternPair & s, const Window & w, const Rational & lambda_max) -> bool
    {
        auto pts = window_points(w);
        std::set<Point> valid(pts.begin(), pts.end());
        auto & a = s.points()[0];
        auto & b = s.points()[1];
        Point ab = b - a;
        std::size_t k = 0;
        while (ab[k] == 0)
            ++k;
        for (auto & x : pts)
            for (auto & y : pts) {
                Point xy = y - x;
                Rational lambda = xy[k] / ab[k];
                if (lambda <= 0 || lambda > lambda_max || xy != ab.scaled(lambda))
                    continue;
                std::vector<int> cols;
                bool inside = true;
                for (auto & p : s.points()) {
                    Point image = x + (p - a).scaled(lambda);
                    if (! valid.count(image)) {
                        inside = false;
                        break;
                    }
                    cols.push_back(c.colour(image));
                }
                if (! inside)
                    continue;
                int o = cols[s.origin_index()];
                int other = -1;
                bool am = true;
                for (std::size_t i = 0 ; i < cols.size() ; ++i) {
                    if (i == s.origin_index())
                        continue;
                    if (other == -1)
                        other = cols[i];
                    am = am && cols[i] == other;
                }
                if (am && other != o)
                    return true;
            }
        return false;
    }

    auto random_word(std::mt19937 & rng, std::size_t n, int colours) -> std::string
    {
        std::string s;
        std::uniform_int_distribution<int> pick{0, colours - 1};
        for (std::size_t i = 0 ; i < n ; ++i)
            s += "RBGY"[pick(rng)];
        return s;
    }

    auto verified(const Witness & w, const Colouring & c) -> bool
    {
        auto back = Witness::from_json(w.to_json());
        return verify_witness(back, c).ok;
    }
}

TEST_CASE("mod 3 colouring has no almost-monochromatic triple")
{
    auto c = parse_colouring("mod3");
    auto w = search_am_homothet(c, parse_pattern("1,2,3@2"), Window::parse("1:300"), 20);
    CHECK(w.kind == WitnessKind::Exhausted);
    CHECK(w.extra.at("candidates").get<std::uint64_t>() > 0);
    CHECK(verified(w, *c));
}

TEST_CASE("dyadic colouring")
{
    auto c = parse_colouring("dyadic");
    auto integral = search_am_homothet(c, parse_pattern("0,1,2@0"), Window::parse("1:10"), 10);
    REQUIRE(integral.kind == WitnessKind::AMCopy);
    CHECK(integral.evidence[0].point == P(2));
    CHECK(integral.evidence[1].point == P(3));
    CHECK(integral.evidence[2].point == P(4));
    CHECK(integral.evidence[0].colour == 1);
    CHECK(integral.evidence[1].colour == 0);

    auto fine = search_am_homothet(c, parse_pattern("0,1,2@0"), Window::parse("1:10", 4), 10);
    REQUIRE(fine.kind == WitnessKind::AMCopy);
    CHECK(verified(fine, *c));
    CHECK(fine.transform->scale() <= 1);

    auto five = search_am_homothet(c, parse_pattern("0,1,2,3,4@0"), Window::parse("1:200", 8), 10);
    CHECK(five.kind == WitnessKind::Exhausted);
}

TEST_CASE("search agrees with pair enumeration on small random colourings")
{
    std::mt19937 rng{11};
    int found = 0, exhausted = 0;
    for (int trial = 0 ; trial < 150 ; ++trial) {
        auto c = std::make_shared<ExplicitColouring>(ExplicitColouring::from_word(random_word(rng, 14, 2 + trial % 3)));
        for (auto text : {"0,1,2@0", "1,2,3@2", "0,1,3@1", "0,2,3,7@3"}) {
            auto s = parse_pattern(text);
            auto w = search_am_homothet(c, s, Window::parse("1:14"), 13);
            CHECK(w.found() == brute_am_exists(*c, s, Window::parse("1:14"), 13));
            CHECK(verified(w, *c));
            (w.found() ? found : exhausted)++;
        }
    }
    CHECK(found > 0);
    CHECK(exhausted > 0);
}

TEST_CASE("rational windows agree with pair enumeration")
{
    auto c = parse_colouring("dyadic");
    auto strip = std::make_shared<StripColouring>(Rational{2, 3}, 3);
    for (auto colouring : {c, ptr(strip)})
        for (auto text : {"0,1,2@0", "0,1,2,3@0", "0,2,3@3"}) {
            auto s = parse_pattern(text);
            auto w = search_am_homothet(colouring, s, Window::parse("0:3", 4), 3);
            CHECK(w.found() == brute_am_exists(*colouring, s, Window::parse("0:3", 4), 3));
            CHECK(verified(w, *colouring));
        }
}

TEST_CASE("plane search agrees with pair enumeration")
{
    std::mt19937 rng{13};
    std::uniform_int_distribution<int> pick{0, 2};
    for (int trial = 0 ; trial < 30 ; ++trial) {
        std::map<Point, int> table;
        for (long x = 0 ; x <= 6 ; ++x)
            for (long y = 0 ; y <= 6 ; ++y)
                table[P(x, y)] = pick(rng);
        auto c = std::make_shared<ExplicitColouring>(table);
        auto s = parse_pattern("0,1;1,1;1,0@1,1");
        auto w = search_am_homothet(c, s, Window::parse("0:6,0:6"), 6);
        CHECK(w.found() == brute_am_exists(*c, s, Window::parse("0:6,0:6"), 6));
        CHECK(verified(w, *c));
    }
}

TEST_CASE("half-plane and constant colourings have no almost-monochromatic copies")
{
    auto half = parse_colouring("halfspace");
    CHECK(search_am_homothet(half, parse_pattern("1,2,3@2"), Window::parse("-10:10", 4), 10).kind == WitnessKind::Exhausted);
    CHECK(search_am_homothet(half, parse_pattern("0,0;1,1;2,2@1,1"), Window::parse("-6:6,-6:6"), 6).kind == WitnessKind::Exhausted);
    CHECK(search_am_similar_2d(half, parse_pattern("0,0;1,0;2,0@1,0"), Window::parse("-6:6,-6:6"), 3, 3).kind
        == WitnessKind::Exhausted);
    auto constant = parse_colouring("constant");
    CHECK(search_am_homothet(constant, parse_pattern("0,1,5@5"), Window::parse("0:40"), 8).kind == WitnessKind::Exhausted);
}

TEST_CASE("real-line colourings carry the sampling caveat")
{
    auto half = parse_colouring("halfspace");
    auto w = search_am_homothet(half, parse_pattern("1,2,3@2"), Window::parse("-5:5"), 2);
    bool has = false;
    for (auto & c : w.caveats)
        has = has || c.find("rational sample points") != std::string::npos;
    CHECK(has);
}

TEST_CASE("Mondrian colouring avoids axis-aligned positive homothets of the corner")
{
    auto c = parse_colouring("mondrian");
    auto s = parse_pattern("0,1;1,1;1,0@1,1");
    auto w = search_am_homothet(c, s, Window::parse("-64:64,-64:64"), 8);
    CHECK(w.kind == WitnessKind::Exhausted);

    auto rotated = search_am_similar_2d(c, s, Window::parse("-64:64,-64:64"), 8, 3);
    CHECK(verified(rotated, *c));
    if (rotated.found()) {
        CHECK_FALSE(rotated.extra.at("axis_aligned").get<bool>());
        CHECK(rotated.transform->rotation() != Matrix::identity(2));
    }
}

TEST_CASE("similar copies use exact rotations")
{
    auto c = parse_colouring("parity");
    auto s = parse_pattern("0,0;1,0;0,1@0,0");
    auto w = search_am_similar_2d(c, s, Window::parse("-5:5,-5:5"), 5, 2);
    REQUIRE(w.found());
    CHECK(w.transform->rotation().is_orthogonal());
    CHECK(verified(w, *c));
}

TEST_CASE("search space hash ignores jobs")
{
    auto c = parse_colouring("split-shell:1,2,3,5@3");
    auto a = search_am_homothet(c, parse_pattern("1,2,3,5@3"), Window::parse("1:500"), 20, 1);
    auto b = search_am_homothet(c, parse_pattern("1,2,3,5@3"), Window::parse("1:500"), 20, 3);
    CHECK(a.to_json() == b.to_json());
    CHECK(a.search_space_hash() == b.search_space_hash());
}

TEST_CASE("invalid searches are rejected")
{
    auto c = parse_colouring("mod3");
    CHECK_THROWS_AS(search_am_homothet(c, parse_pattern("1,2,3@2"), Window::parse("1:10,1:10"), 2), Error);
    CHECK_THROWS_AS(search_am_homothet(c, parse_pattern("1,2,3@2"), Window::parse("1:10"), 0), Error);
    CHECK_THROWS_AS(Window::parse("5:1"), Error);
}

TEST_CASE("monochromatic progressions")
{
    auto rb = std::make_shared<ExplicitColouring>(ExplicitColouring::from_word("RBRBRBRBR"));
    auto w = probe_mono_ap(rb, Window::parse("1:9"), 3, 4);
    REQUIRE(w.kind == WitnessKind::MonoAP);
    CHECK(w.evidence[0].point == P(1));
    CHECK(w.evidence[1].point == P(3));
    CHECK(w.evidence[2].point == P(5));
    CHECK(w.evidence[0].colour == 0);
    CHECK(verified(w, *rb));

    auto constant = parse_colouring("constant");
    auto cw = probe_mono_ap(constant, Window::parse("0:10"), 5, 3);
    REQUIRE(cw.kind == WitnessKind::MonoAP);
    CHECK(cw.evidence[1].point == P(1));

    // shells [5, 25) hold six consecutive integers of one colour
    auto alternating = parse_colouring("alt-shell:5");
    auto pw = probe_mono_ap(alternating, Window::parse("1:3000"), 6, 10);
    REQUIRE(pw.kind == WitnessKind::MonoAP);
    CHECK(pw.evidence.front().point == P(5));
    CHECK(pw.evidence.back().point == P(10));
    CHECK(verified(pw, *alternating));

    auto block = parse_colouring("block:10");
    auto bw = probe_mono_ap(block, Window::parse("0:2000"), 12, 30);
    REQUIRE(bw.kind == WitnessKind::MonoAP);
    CHECK(verified(bw, *block));
}

TEST_CASE("monochromatic homothets with integer scale")
{
    // every 2-colouring of [1, 9] has a monochromatic 3-AP
    for (int mask = 0 ; mask < 512 ; ++mask) {
        std::string word;
        for (int i = 0 ; i < 9 ; ++i)
            word += (mask >> i) & 1 ? 'B' : 'R';
        auto c = std::make_shared<ExplicitColouring>(ExplicitColouring::from_word(word));
        auto w = search_mono_homothet(c, {P(0), P(1), P(2)}, Window::parse("1:9"), 4);
        REQUIRE(w.kind == WitnessKind::MonoHomothet);
        CHECK(verified(w, *c));
    }
    auto free = std::make_shared<ExplicitColouring>(ExplicitColouring::from_word("RRBBRRBB"));
    CHECK(search_mono_homothet(free, {P(0), P(1), P(2)}, Window::parse("1:8"), 4).kind == WitnessKind::Exhausted);

    auto constant = parse_colouring("constant");
    auto cw = search_mono_homothet(constant, {P(0), P(3), P(4)}, Window::parse("0:10"), 3);
    REQUIRE(cw.found());
    CHECK(cw.transform->scale() == 1);

    auto checker = parse_colouring("checkerboard");
    auto kw = search_mono_homothet(checker, {P(0, 0), P(1, 0), P(0, 1)}, Window::parse("0:8,0:8"), 4);
    REQUIRE(kw.found());
    CHECK(kw.transform->scale() == 2);
    CHECK(verified(kw, *checker));
}

TEST_CASE("middle interval")
{
    auto s = parse_pattern("1,2,4@2");
    auto r = middle_interval({10, 15}, {20, 22}, s);
    CHECK(r.M == 3);
    CHECK(r.ratio == Rational{2, 3});
    CHECK(r.interval.lo == 14);
    CHECK(r.interval.hi == 16);
    REQUIRE(r.triples.size() == 3);
    CHECK(r.triples[0].q1 == 11);
    CHECK(r.triples[0].q3 == 20);

    auto t = middle_interval({1, 4}, {11, 12}, parse_pattern("1,2,3@2"));
    CHECK(t.M == 2);
    CHECK(t.interval.size() == 2);
    CHECK(t.interval.lo > 4);
    CHECK(t.interval.hi < 12);
    for (auto & q : t.triples) {
        CHECK(2 * q.q2 == q.q1 + q.q3);
        CHECK(q.q1 >= 1);
        CHECK(q.q1 <= 4);
        CHECK(q.q3 >= 11);
        CHECK(q.q3 <= 12);
    }

    CHECK_THROWS_AS(middle_interval({1, 5}, {11, 12}, parse_pattern("1,2,3@2")), Error);
    CHECK_THROWS_AS(middle_interval({1, 4}, {3, 4}, parse_pattern("1,2,3@2")), Error);
}

TEST_CASE("middle interval triples are homothets of the pattern")
{
    std::mt19937 rng{21};
    std::uniform_int_distribution<long> start{-500, 500}, gap{0, 300};
    for (auto text : {"0,1,3@1", "0,2,5@2", "1,4,6@4", "0,3,4@3", "0,5,7@5"}) {
        auto s = parse_pattern(text);
        Rational r = Rational{s.points()[2][0] - s.points()[1][0]} / Rational{s.points()[2][0] - s.points()[0][0]};
        long M = r.get_den().get_si();
        for (int trial = 0 ; trial < 50 ; ++trial) {
            long a = start(rng);
            IntegerInterval low{a, a + 2 * M - 1};
            long b = a + 2 * M + 2 * M * M + gap(rng);
            IntegerInterval high{b, b + M - 1};
            auto res = middle_interval(low, high, s);
            CHECK(res.M == M);
            CHECK(res.interval.size() == M);
            REQUIRE(res.triples.size() == std::size_t(M));
            std::set<Integer> middles;
            for (auto & q : res.triples) {
                CHECK(q.q1 >= low.lo);
                CHECK(q.q1 <= low.hi);
                CHECK(q.q3 >= high.lo);
                CHECK(q.q3 <= high.hi);
                CHECK(Rational{q.q2} == r * q.q1 + (1 - r) * q.q3);
                middles.insert(q.q2);
            }
            CHECK(*middles.begin() == res.interval.lo);
            CHECK(*middles.rbegin() == res.interval.hi);
            CHECK(middles.size() == std::size_t(M));
            CHECK(low.hi < res.interval.hi);
            CHECK(res.interval.hi < high.hi);
        }
    }
}

TEST_CASE("small copies reach into a disc")
{
    auto s = PatternPair{{P(0, 0), P(1, 0), P(2, 0)}, 2};
    Point centre = P(0, 0);
    Point anchor{Rational{101, 100}, Rational{0}};
    auto copy = extend_into_ball(s, anchor, centre, 1, 1000, 3);
    REQUIRE(copy);
    CHECK(copy->origin() == anchor);
    for (std::size_t i = 0 ; i < copy->size() ; ++i)
        if (i != copy->origin_index())
            CHECK(squared_norm(copy->points()[i]) < 1);
    // the copy is similar to the pattern: pairwise squared distances scale together
    Rational ratio = squared_distance(copy->points()[0], copy->points()[1]) / squared_distance(s.points()[0], s.points()[1]);
    CHECK(squared_distance(copy->points()[0], copy->points()[2]) == ratio * squared_distance(s.points()[0], s.points()[2]));
    CHECK(squared_distance(copy->points()[1], copy->points()[2]) == ratio * squared_distance(s.points()[1], s.points()[2]));

    CHECK_FALSE(extend_into_ball(s, P(3, 0), centre, 1, 1000, 3));

    Point inside{Rational{1, 2}, Rational{0}};
    auto straight = extend_into_ball(s, inside, centre, 1, 8, 3);
    REQUIRE(straight);
    // identity rotation: the copy keeps the pattern's direction from the anchor
    CHECK(straight->points()[0][1] == 0);
    CHECK(straight->points()[0][0] < inside[0]);

    CHECK_THROWS_AS(extend_into_ball(PatternPair{{P(0, 0), P(1, 0), P(2, 0)}, 1}, inside, centre, 1, 8, 3), DomainError);
    CHECK(extend_from_ball(s, inside, centre, 1, 8, 3) == straight);
}

TEST_CASE("lattice expansion")
{
    auto corner = parse_pattern("0,0;1,0;0,1@0,0");

    auto constant = parse_colouring("constant");
    auto w = grid_expand(constant, corner, Window::parse("0:40,0:40"), 2, 4, 3);
    REQUIRE(w.kind == WitnessKind::MonoSublattice);
    CHECK(w.extra.at("lambda") == "1");
    CHECK(w.extra.at("lattice_points").get<long>() == 41 * 41);

    auto checker = parse_colouring("checkerboard");
    auto cw = grid_expand(checker, corner, Window::parse("0:20,0:20"), 2, 4, 3);
    REQUIRE(cw.found());
    CHECK(verify_witness(cw, *checker).ok);
    for (auto & [colouring, result] : {std::pair{constant, w}, std::pair{checker, cw}}) {
        if (result.kind != WitnessKind::MonoSublattice)
            continue;
        // rescan the whole coset inside the window
        Rational lambda = parse_rational(result.extra.at("lambda").get<std::string>());
        Point c = Point::from_json(result.extra.at("offset"));
        int colour = result.extra.at("colour").get<int>();
        long seen = 0;
        for (long x = 0 ; x <= 40 ; ++x)
            for (long y = 0 ; y <= 40 ; ++y) {
                Point p = P(x, y);
                if (! Window::parse(colouring == constant ? "0:40,0:40" : "0:20,0:20").contains(p))
                    continue;
                Point z = (p - c).scaled(1 / lambda);
                if (! is_integer(z[0]) || ! is_integer(z[1]))
                    continue;
                CHECK(colouring->colour(p) == colour);
                ++seen;
            }
        CHECK(seen == result.extra.at("lattice_points").get<long>());
    }
    if (cw.kind == WitnessKind::MonoSublattice)
        CHECK(cw.extra.at("lambda") == "2");

    // a large red region with one planted blue point
    std::map<Point, int> table;
    for (long x = 0 ; x <= 30 ; ++x)
        for (long y = 0 ; y <= 30 ; ++y)
            table[P(x, y)] = 0;
    table[P(20, 14)] = 1;
    auto planted = std::make_shared<ExplicitColouring>(table, 2);
    auto pw = grid_expand(planted, corner, Window::parse("0:30,0:30"), 2, 3, 3);
    REQUIRE(pw.kind == WitnessKind::AMCopy);
    CHECK(pw.evidence[pw.origin_index.value()].point == P(20, 14));
    CHECK(verify_witness(pw, *planted).ok);

    // audit: every lattice point nearer the ball than the planted one is red
    Rational lambda = parse_rational(pw.extra.at("lambda").get<std::string>());
    CHECK(lambda == 1);

    CHECK_THROWS_AS(grid_expand(constant, parse_pattern("0,0;1,0;2,0@1,0"), Window::parse("0:10,0:10"), 2, 2, 3), DomainError);
}
