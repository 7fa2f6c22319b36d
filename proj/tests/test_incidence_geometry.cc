#include <amc/incidence.hh>

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace amc;

namespace
{
    auto P(long x, long y) -> Point { return Point{Rational{x}, Rational{y}}; }

    auto unit_square_corner() -> Bouquet
    {
        return Bouquet{P(0, 0), {P(1, 0), P(0, 1)}};
    }

    auto rigid_quarter_turn() -> SimilarityMap
    {
        return SimilarityMap{1, quarter_turn(), Point::zero(2)};
    }
}

TEST_CASE("bouquets validate their radii")
{
    CHECK_NOTHROW(unit_square_corner().validate());
    Bouquet bad{P(0, 0), {P(1, 1)}};
    CHECK_THROWS_AS(bad.validate(), Error);
    Bouquet twice{P(0, 0), {P(1, 0), P(1, 0)}};
    CHECK_THROWS_AS(twice.validate(), Error);
    auto j = nlohmann::json::parse(R"({"origin": [0, 0], "centres": [[0.5, 0.8660254037844386], [1, 0]]})");
    auto b = Bouquet::from_json(j);
    CHECK(b.numeric);
    CHECK(b.centres.size() == 2);
    CHECK(Bouquet::from_json(unit_square_corner().to_json()).centres == unit_square_corner().centres);
}

TEST_CASE("scaled copies sit on their circles")
{
    Bouquet b{P(0, 0), {P(1, 0), P(0, 1), Point{Rational{3, 5}, Rational{4, 5}}}};

    auto doubled = place_scaled_copy(b, 2);
    CHECK(doubled.alpha == doctest::Approx(0));
    REQUIRE(doubled.exact_points);
    CHECK((*doubled.exact_points)[0] == P(2, 0));
    CHECK((*doubled.exact_points)[1] == P(0, 2));

    auto unit = place_scaled_copy(b, 1);
    CHECK(double(unit.alpha) == doctest::Approx(std::numbers::pi / 3));
    CHECK_FALSE(unit.exact_points);

    auto pythagorean = place_scaled_copy(b, Rational{8, 5});
    REQUIRE(pythagorean.exact_points);
    for (std::size_t j = 0 ; j < b.centres.size() ; ++j)
        CHECK(squared_distance((*pythagorean.exact_points)[j], b.centres[j]) == 1);

    for (int k = 1 ; k <= 8 ; ++k) {
        auto placed = place_scaled_copy(b, Rational{k, 4});
        CHECK(placed.max_circle_error <= 1e-12L);
        CHECK(placed.max_congruence_error <= 1e-12L);
        REQUIRE(placed.points.size() == 3);
        for (std::size_t j = 0 ; j < 3 ; ++j) {
            long double dx = placed.points[j].x - b.centres[j][0].get_d(), dy = placed.points[j].y - b.centres[j][1].get_d();
            CHECK(double(std::sqrt(dx * dx + dy * dy)) == doctest::Approx(1).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(place_scaled_copy(b, 0), Error);
    CHECK_THROWS_AS(place_scaled_copy(b, Rational{9, 4}), Error);
}

TEST_CASE("pencils reach nearby circles")
{
    Pencil cross{P(0, 0), {P(1, 0), P(0, 1)}};
    auto reach = pencil_reach(cross);
    CHECK(reach.spanned_angle == doctest::Approx(std::numbers::pi / 2));
    CHECK(reach.epsilon > 0);
    CHECK(reach.epsilon < std::sqrt(2.0) - 1);

    Pencil three{P(0, 0), {P(1, 0), Point{Rational{1}, Rational{17, 10}}, Point{Rational{-1}, Rational{17, 10}}}};
    auto r3 = pencil_reach(three);
    CHECK(r3.spanned_angle < std::numbers::pi);
    CHECK(r3.spanned_angle > std::numbers::pi / 2);

    for (double heading : {0.0, 0.7, 2.0, 4.5}) {
        PlanePoint p{0.3, -0.2};
        double d = 1 + reach.epsilon;
        PlanePoint near{p.x + d * std::cos(heading), p.y + d * std::sin(heading)};
        auto rot = place_pencil_on_circle(cross, p, near);
        REQUIRE(rot);
        CHECK(pencil_meets_circle(cross, *rot, p, near));

        double far_d = 1 + 3 * reach.epsilon;
        PlanePoint far{p.x + far_d * std::cos(heading), p.y + far_d * std::sin(heading)};
        CHECK_FALSE(place_pencil_on_circle(cross, p, far));
    }

    CHECK_THROWS_AS(pencil_reach(Pencil{P(0, 0), {P(1, 0)}}), Error);
    CHECK_THROWS_AS(pencil_reach(Pencil{P(0, 0), {P(1, 0), P(-2, 0)}}), Error);
}

TEST_CASE("inscribed angles")
{
    auto ins = inscribed_points({0, 0}, 1, {std::numbers::pi / 6, std::numbers::pi / 6});
    REQUIRE(ins.points.size() == 3);
    CHECK(ins.points[1].x == doctest::Approx(0.5));
    CHECK(ins.points[2].x == doctest::Approx(-0.5));
    CHECK(ins.max_angle_error < 1e-12);

    auto uneven = inscribed_points({2, -1}, 3, {0.3, 0.9, 0.2});
    CHECK(uneven.max_angle_error < 1e-12);

    CHECK_THROWS_AS(inscribed_points({0, 0}, 1, {std::numbers::pi / 2, std::numbers::pi / 2}), Error);
    CHECK_THROWS_AS(inscribed_points({0, 0}, 1, {2.0, 1.5}), Error);
    CHECK_THROWS_AS(inscribed_points({0, 0}, 1, {0.0}), Error);
    CHECK_THROWS_AS(inscribed_points({0, 0}, 0, {0.1}), Error);
}

TEST_CASE("rational circle samples are exact")
{
    auto samples = circle_samples(P(1, 2), 3);
    CHECK(samples.size() > 20);
    for (auto & s : samples)
        CHECK(squared_distance(s, P(1, 2)) == 1);
}

TEST_CASE("smiling bouquets and pencils")
{
    auto constant = parse_colouring("constant");
    Bouquet three{P(0, 0), {P(1, 0), P(-1, 0), P(0, 1)}};
    auto identity = SimilarityMap::identity(2);
    CHECK_FALSE(check_smiling(*constant, three, identity, 4));

    auto upper = parse_colouring("halfspace");
    auto w = check_smiling(*upper, three, identity, 4);
    REQUIRE(w);
    CHECK(w->colour == 0);
    CHECK(w->origin_colour == 1);
    CHECK(verify_smiling(*upper, *w));
    CHECK_FALSE(check_smiling(*upper, three, identity, 4, 1));

    Bouquet below{P(0, 0), {P(1, 0), P(0, -1)}};
    CHECK_FALSE(check_smiling(*upper, below, identity, 6));

    auto forged = *w;
    forged.points[0] = forged.points[0] + P(0, 1);
    CHECK_FALSE(verify_smiling(*upper, forged));

    auto strips = parse_colouring("strip:1,2");
    Pencil axes{P(0, 0), {P(1, 0), P(0, 1)}};
    CHECK_FALSE(check_smiling(*strips, axes, identity, 4));
    Pencil diagonals{P(0, 0), {P(1, 1), P(1, -1)}};
    auto pw = check_smiling(*strips, diagonals, identity, 4);
    REQUIRE(pw);
    CHECK(pw->colour == 1);
    CHECK(verify_smiling(*strips, *pw));

    CHECK_THROWS_AS(check_smiling(*upper, three, SimilarityMap::homothety(2, P(0, 0)), 4), Error);
}

TEST_CASE("lattice-like bouquets")
{
    auto z2 = Lattice::integer_lattice(2);
    auto report = validate_lattice_like(unit_square_corner(), z2);
    CHECK(report.ok());
    CHECK(report.tested_intervals == 8);
    CHECK(report.rotatable_intervals > 0);

    Bouquet straight{P(0, 0), {P(1, 0), P(-1, 0)}};
    auto r2 = validate_lattice_like(straight, z2);
    CHECK(r2.in_lattice);
    CHECK_FALSE(r2.origin_extreme);

    auto tri = Bouquet::of_graph(unit_triangle_graph());
    CHECK_FALSE(validate_lattice_like(tri, z2).in_lattice);
}

TEST_CASE("bichromatic origins from smiling placements")
{
    auto graph = unit_triangle_graph();
    auto bouquet = Bouquet::of_graph(graph);
    auto placement = rigid_quarter_turn();

    auto four = parse_colouring("strip:2/5,4");
    auto w = check_smiling(*four, bouquet, placement, 8, 3);
    REQUIRE(w);
    auto oc = compose_bichromatic_colouring(graph, *w, *four);
    CHECK(oc.origin_colours == std::pair{0, 3});
    CHECK(oc.colours[0] == -1);
    CHECK(oc.colours[1] == 2);
    CHECK(oc.colours[2] == 1);
    CHECK(is_proper_with_origin(graph, oc));

    // with three strips every colour other than the origin's is already used
    auto three = parse_colouring("strip:2/5,3");
    auto w3 = check_smiling(*three, bouquet, placement, 8);
    REQUIRE(w3);
    CHECK_THROWS_WITH_AS(compose_bichromatic_colouring(graph, *w3, *three), doctest::Contains("properness"), Error);

    Bouquet other{P(0, 0), {P(1, 0), P(0, 1)}};
    auto elsewhere = check_smiling(*four, other, placement, 8);
    REQUIRE(elsewhere);
    CHECK_THROWS_AS(compose_bichromatic_colouring(graph, *elsewhere, *four), Error);
}
