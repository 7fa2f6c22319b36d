#include <amc/colouring.hh>

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace amc;

namespace
{
    auto P(const Rational & x) -> Point { return Point{x}; }
    auto P(long x, long y) -> Point { return Point{Rational{x}, Rational{y}}; }

    /// [K^i, K^(i+1)) coloured i mod 2, found by walking the intervals.
    auto alternating_oracle(long K, const Rational & x) -> int
    {
        if (x < 1)
            return 2;
        Rational lo{1};
        for (int i = 0 ; ; ++i) {
            if (x < lo * K)
                return i % 2;
            lo *= K;
        }
    }

    /// The j-th of L equal pieces of [L K^i, L K^(i+1)), written out as the
    /// interval [L K^i + (j-1)(K^(i+1) - K^i), L K^i + j (K^(i+1) - K^i)).
    auto stepped_oracle(long K, long L, const Rational & x) -> int
    {
        if (x < L)
            return 0;
        Rational ki{1};
        for (int i = 0 ; ; ++i) {
            for (long j = 1 ; j <= L ; ++j) {
                Rational a = L * ki + (j - 1) * (ki * K - ki);
                Rational b = L * ki + j * (ki * K - ki);
                if (a <= x && x < b)
                    return i % 2 == 1 ? int(j) : int(L + j);
            }
            ki *= K;
        }
    }
}

TEST_CASE("named colour values")
{
    auto mod3 = parse_colouring("mod3");
    CHECK(mod3->colour(P(7)) == 1);

    DyadicColouring dyadic;
    CHECK(dyadic.colour(P(2)) == 1);
    CHECK(dyadic.colour(P(3)) == 0);
    CHECK(dyadic.colour(P(4)) == 0);
    CHECK(dyadic.colour(P(Rational{3, 2})) == 1);
    CHECK(two_adic_valuation(Rational{3, 8}) == -3);

    MondrianColouring mondrian;
    CHECK(MondrianColouring::square_index(3, -3) == 2);
    CHECK(mondrian.colour(P(3, -3)) == 2);
    CHECK(mondrian.colour(P(0, 0)) == 2 + 1);
    CHECK(mondrian.colour(P(-1, 0)) == 0 + 1);

    ShellColouring1D alternating{ShellVariant::Alternating, 5};
    CHECK(alternating.colour(P(30)) == 0);
    CHECK(alternating.shell_index(30) == 2);
}

TEST_CASE("domains are enforced")
{
    ShellColouring1D alternating{ShellVariant::Alternating, 5};
    CHECK_THROWS_AS(alternating.colour(P(0)), DomainError);
    CHECK_THROWS_AS(alternating.colour(P(-1)), DomainError);
    ShellColouring1D stepped{ShellVariant::Stepped, 5, 5};
    CHECK_THROWS_AS(stepped.colour(P(-1)), DomainError);
    CHECK_THROWS_AS(parse_colouring("mod3")->colour(P(Rational{1, 2})), DomainError);
    CHECK_THROWS_AS(MondrianColouring{}.colour(P(1)), Error);
    CHECK_THROWS_AS(parse_colouring("nonsense"), Error);
}

TEST_CASE("shell colourings match their interval definitions")
{
    ShellColouring1D alternating{ShellVariant::Alternating, 5};
    ShellColouring1D stepped{ShellVariant::Stepped, 5, 5};
    ShellColouring1D stepped_b{ShellVariant::Stepped, 3, 6};
    for (long num = 1 ; num <= 4000 ; num += 3)
        for (long den : {1, 2, 7}) {
            Rational x{num, den};
            x.canonicalize();
            CHECK(alternating.colour(P(x)) == alternating_oracle(5, x));
            CHECK(stepped.colour(P(x)) == stepped_oracle(5, 5, x));
            CHECK(stepped_b.colour(P(x)) == stepped_oracle(3, 6, x));
        }
    CHECK(stepped.colour(P(0)) == 0);
    CHECK(stepped.palette_size() == 11);
}

TEST_CASE("parameters chosen for a four point pattern")
{
    std::vector<Rational> s{1, 2, 3, 5};
    auto alternating = ShellColouring1D::for_pattern(ShellVariant::Alternating, s);
    CHECK(alternating.K() == 5);
    auto stepped = ShellColouring1D::for_pattern(ShellVariant::Stepped, s);
    CHECK(stepped.K() == 5);
    CHECK(stepped.L() == 5);

    // K > (p4 - p2) / (p2 - p1) + 1 and L = K ceil((p3 - p1) / (p4 - p3))
    std::vector<Rational> t{0, 1, 5, 6};
    auto stepped_t = ShellColouring1D::for_pattern(ShellVariant::Stepped, t);
    CHECK(stepped_t.K() == 7);
    CHECK(stepped_t.L() == 35);
}

TEST_CASE("full-line construction combines disjoint palettes")
{
    auto c3 = split_shell_colouring({1, 2, 3, 5}, 2);
    auto c2 = split_shell_colouring({1, 2, 3, 5}, 1);
    for (auto & c : {c3, c2}) {
        std::set<int> positive, negative;
        for (long x = -3000 ; x <= 3000 ; ++x) {
            int col = c->colour(P(x));
            CHECK(col >= 0);
            CHECK(col < c->palette_size());
            bool right = c == c3 ? x > 0 : x >= 0;
            (right ? positive : negative).insert(col);
        }
        for (int col : positive)
            CHECK(negative.count(col) == 0);
    }
    // stepped on the non-negative side includes 0
    CHECK(c2->colour(P(0)) == 0);
    CHECK_THROWS_AS(split_shell_colouring({1, 2, 3, 5}, 0), Error);

    auto u = compose_disjoint({parse_colouring("parity"), parse_colouring("parity")}, RegionRule::PositiveElseRest);
    CHECK(u->palette_size() == 4);
    CHECK(u->colour(P(2)) == 0);
    CHECK(u->colour(P(-2)) == 2);
    CHECK(u->colour(P(-1)) == 3);
}

TEST_CASE("shell certificate crossover index")
{
    ShellColouring1D alternating{ShellVariant::Alternating, 5};
    auto cert = certify_shell_ap_free(alternating);
    CHECK(cert.ap_free);
    for (long t = 1 ; t <= 5000 ; ++t) {
        Integer i0 = cert.crossover_index(Integer{t});
        long i = i0.get_si();
        Integer wide = pow_of(5, std::size_t(i)) * 4;
        CHECK(wide > t);
        if (i > 0)
            CHECK(pow_of(5, std::size_t(i - 1)) * 4 <= t);
        CHECK(i <= long(std::ceil(std::log(double(t)) / std::log(5.0) - 1e-12)) + 1);
    }
    CHECK(cert.to_json().at("schema") == "amc-lab/certificate/v1");
}

TEST_CASE("progressions leave every shell past the crossover")
{
    ShellColouring1D alternating{ShellVariant::Alternating, 5};
    auto cert = certify_shell_ap_free(alternating);
    for (long t = 1 ; t <= 40 ; ++t)
        for (long a = 1 ; a <= 40 ; ++a) {
            long i0 = cert.crossover_index(Integer{t}).get_si();
            // from the crossover shell on, both parities must appear
            long start = a;
            while (start < std::pow(5.0, double(i0)))
                start += t;
            std::set<int> seen;
            long first = alternating.shell_index(start);
            for (long x = start ; alternating.shell_index(x) <= first + 1 ; x += t)
                seen.insert(alternating.colour(P(x)));
            CHECK(seen.size() == 2);
        }
}

TEST_CASE("block colouring is not AP-free")
{
    BlockColouring block{10};
    auto cert = certify_shell_ap_free(block);
    CHECK_FALSE(cert.ap_free);
    for (long x = 0 ; x < 2000 ; x += 20)
        CHECK(block.colour(P(x)) == 0);
    CHECK(cert.crossover_index(Integer{20}) == 0);
    CHECK(cert.crossover_index(Integer{3}) == 20);
    // an AP of difference 3 changes colour within 20 terms from any start
    for (long a = -50 ; a < 50 ; ++a) {
        std::set<int> seen;
        for (int i = 0 ; i < 20 ; ++i)
            seen.insert(block.colour(P(a + 3 * i)));
        CHECK(seen.size() == 2);
    }
}

TEST_CASE("explicit tables are not certifiable")
{
    auto e = ExplicitColouring::from_word("RBRB");
    CHECK_THROWS_AS(certify_shell_ap_free(e), Error);
    CHECK(e.colour(P(1)) == 0);
    CHECK(e.colour(P(2)) == 1);
    CHECK_THROWS_AS(e.colour(P(5)), DomainError);
}

TEST_CASE("cone partitions")
{
    ConePartition line{1, 0.3};
    CHECK(line.cone_count() == 2);

    ConePartition fan{2, M_PI / 8};
    CHECK(fan.cone_count() == 16);
    std::mt19937 rng{3};
    std::uniform_int_distribution<long> coord{-1000, 1000};
    for (int trial = 0 ; trial < 2000 ; ++trial) {
        Point p = P(coord(rng), coord(rng));
        if (squared_norm(p) == 0)
            continue;
        long k = fan.cone_of(p);
        auto frame = fan.frame(k);
        // p lies between the sector's boundary rays
        auto & a = frame.generators[0];
        auto & b = frame.generators[1];
        CHECK(a[0] * p[1] - a[1] * p[0] >= 0);
        CHECK(b[0] * p[1] - b[1] * p[0] < 0);
    }
    for (auto & frame : build_cone_partition(2, M_PI / 8)) {
        auto g = to_doubles(frame.generators[0]), h = to_doubles(frame.generators[1]);
        double cosine = (g[0] * h[0] + g[1] * h[1]) / std::hypot(g[0], g[1]) / std::hypot(h[0], h[1]);
        CHECK(std::acos(std::min(1.0, cosine)) <= 2 * M_PI / 8 + 1e-12);
        CHECK(frame.isometry.is_orthogonal());
    }

    ConePartition space{3, 0.5};
    for (auto & frame : build_cone_partition(3, 0.5)) {
        CHECK(frame.isometry.is_orthogonal());
        for (auto & g : frame.generators)
            for (auto & h : frame.generators) {
                auto x = to_doubles(g), y = to_doubles(h);
                double dotp = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
                double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
                CHECK(std::acos(std::min(1.0, dotp / n)) <= 2 * 0.5 + 1e-12);
            }
    }
}

TEST_CASE("cone-shell colouring places each cone next to the diagonal")
{
    auto cone = ConeShellColouring::for_pattern({P(0, 0), P(1, 0), P(0, 1), P(2, 1)});
    // (K-1)^2 > 4 d r^2 with r^2 = 5 the largest squared distance ratio
    CHECK((cone->K() - 1) * (cone->K() - 1) > 40);
    CHECK((cone->K() - 2) * (cone->K() - 2) <= 40);
    CHECK(cone->L() * cone->L() * 2 >= cone->K() * cone->K() * cone->K() * cone->K());
    std::mt19937 rng{5};
    std::uniform_int_distribution<long> coord{-5000, 5000};
    for (int trial = 0 ; trial < 500 ; ++trial) {
        Point p = P(coord(rng), coord(rng));
        long k = cone->cone_of(p);
        Point image = cone->partition().frame(k).isometry * p;
        CHECK(image[0] >= 0);
        CHECK(image[1] >= 0);
        // isometries preserve the Euclidean norm exactly
        CHECK(squared_norm(image) == squared_norm(p));
        CHECK(cone->colour(p) == k * (2 * cone->L().get_si() + 1) + cone->shell_colour(l1_norm(image)));
    }
}

TEST_CASE("fibred plane colouring uses the plane colouring on each fibre")
{
    FibreColouring fibre{3};
    MondrianColouring mondrian;
    for (long x = -20 ; x <= 20 ; x += 3)
        for (long y = -20 ; y <= 20 ; y += 5)
            for (long z : {0L, 1L, 2L, 3L, -4L}) {
                int c = fibre.colour(Point{Rational{x}, Rational{y}, Rational{z}});
                CHECK(c % 4 == mondrian.colour(P(x, y)));
            }
}

TEST_CASE("colourings survive a JSON round trip")
{
    for (auto spec : {"mod3", "dyadic", "block:10", "alt-shell:5", "step-shell:5,5", "split-shell:1,2,3,5@3", "split-shell:1,2,3,5@2",
             "mondrian", "strip:2/5,4", "halfspace", "parity", "constant:2", "word:RBGY"}) {
        auto c = parse_colouring(spec);
        auto back = colouring_from_json(c->to_json());
        CHECK(back->to_json() == c->to_json());
        std::size_t d = c->dimension() == 0 ? 1 : c->dimension();
        for (long x = 1 ; x <= 4 ; ++x) {
            std::vector<Rational> coords(d, Rational{x});
            Point p{coords};
            CHECK(back->colour(p) == c->colour(p));
        }
    }
}
