#include <amc/udg.hh>

#include <doctest.h>

#include <fstream>

using namespace amc;

namespace
{
    auto load(const std::string & name) -> UnitDistanceGraph
    {
        std::ifstream in{std::string{AMC_FIXTURES} + "/" + name};
        return UnitDistanceGraph::from_json(nlohmann::json::parse(in));
    }

    auto next(std::vector<int> & c, int k) -> bool
    {
        std::size_t i = 0;
        while (i < c.size() && c[i] == k - 1)
            c[i++] = 0;
        if (i == c.size())
            return false;
        ++c[i];
        return true;
    }

    auto brute_proper(const UnitDistanceGraph & g, int k) -> bool
    {
        std::vector<int> c(g.size(), 0);
        do {
            bool ok = true;
            for (auto [a, b] : g.edges())
                ok = ok && c[a] != c[b];
            if (ok)
                return true;
        } while (next(c, k));
        return false;
    }

    /// Every origin pair and every colouring of the other vertices.
    auto brute_origin(const UnitDistanceGraph & g, int k) -> bool
    {
        std::size_t v0 = *g.origin();
        for (int a = 0 ; a < k ; ++a)
            for (int b = a + 1 ; b < k ; ++b) {
                std::vector<int> c(g.size(), 0);
                do {
                    if (c[v0] != 0)
                        continue;
                    bool ok = true;
                    for (auto [x, y] : g.edges()) {
                        if (x == v0 || y == v0) {
                            int o = c[x == v0 ? y : x];
                            ok = ok && o != a && o != b;
                        }
                        else
                            ok = ok && c[x] != c[y];
                    }
                    if (ok)
                        return true;
                } while (next(c, k));
            }
        return false;
    }
}

TEST_CASE("proper colourings of the fixtures")
{
    auto tri = unit_triangle_graph();
    auto t3 = solve_proper(tri, 3);
    REQUIRE(t3.colouring);
    CHECK(is_proper(tri, *t3.colouring));
    CHECK_FALSE(solve_proper(tri, 2).colouring);

    auto moser = moser_spindle_graph();
    auto m3 = solve_proper(moser, 3);
    CHECK_FALSE(m3.colouring);
    CHECK(m3.trace.dead_ends > 0);
    CHECK(m3.trace.digest.size() == 64);
    auto m4 = solve_proper(moser, 4);
    REQUIRE(m4.colouring);
    CHECK(is_proper(moser, *m4.colouring));

    UnitDistanceGraph edge{{GraphVertex{"u", {}, false}, GraphVertex{"v", {}, false}}, {{0, 1}}};
    CHECK_FALSE(solve_proper(edge, 1).colouring);
    CHECK(solve_proper(edge, 2).colouring);
    CHECK_THROWS_AS(solve_proper(edge, 0), Error);
}

TEST_CASE("proper search agrees with exhaustive enumeration")
{
    for (auto & g : {unit_triangle_graph(), moser_spindle_graph()})
        for (int k = 1 ; k <= 4 ; ++k)
            CHECK(solve_proper(g, k).colouring.has_value() == brute_proper(g, k));
}

TEST_CASE("bichromatic origin on the unit triangle")
{
    auto tri = unit_triangle_graph();
    auto three = solve_bichromatic_origin(tri, 3);
    CHECK_FALSE(three.colouring);
    CHECK(three.pairs_tried.size() == 3);

    auto four = solve_bichromatic_origin(tri, 4);
    REQUIRE(four.colouring);
    CHECK(is_proper_with_origin(tri, *four.colouring));
    CHECK(four.colouring->colours[0] == -1);
    CHECK(four.pairs_tried.front() == std::pair{0, 1});
    CHECK(four.colouring->to_json(tri).at("colours").at("o").size() == 2);
}

TEST_CASE("bichromatic origin on the Moser spindle from every vertex")
{
    auto moser = load("moser.json");
    // origin vertex -> colouring exists with k = 4, from exhaustive enumeration
    std::map<std::string, bool> expected;
    for (std::size_t v = 0 ; v < moser.size() ; ++v)
        expected[moser.vertices()[v].id] = brute_origin(moser.with_origin(v), 4);
    std::ifstream in{std::string{AMC_FIXTURES} + "/moser_origins.json"};
    auto recorded = nlohmann::json::parse(in);
    for (auto & [id, found] : expected)
        CHECK(recorded.at("found").at(id) == found);

    for (std::size_t v = 0 ; v < moser.size() ; ++v) {
        auto g = moser.with_origin(v);
        auto r = solve_bichromatic_origin(g, 4, 1 + v % 3);
        CHECK(r.colouring.has_value() == expected[g.vertices()[v].id]);
        if (r.colouring) {
            CHECK(is_proper_with_origin(g, *r.colouring));
            CHECK(solve_proper(g, 4).colouring);
        }
        auto again = solve_bichromatic_origin(g, 4, 4);
        CHECK(again.trace.digest == r.trace.digest);
        CHECK_FALSE(solve_bichromatic_origin(g, 3).colouring);
    }
}

TEST_CASE("found origin colourings drop to proper ones")
{
    for (auto & g : {unit_triangle_graph(), load("moser.json")})
        for (int k = 2 ; k <= 5 ; ++k) {
            auto r = solve_bichromatic_origin(g, k);
            CHECK(r.colouring.has_value() == brute_origin(g, k));
            if (! r.colouring)
                continue;
            auto c = r.colouring->colours;
            c[*g.origin()] = r.colouring->origin_colours.first;
            CHECK(is_proper(g, c));
        }
}

TEST_CASE("unit distance validation")
{
    auto tri = load("triangle.json");
    auto report = validate_unit_distances(tri);
    CHECK(report.ok());
    CHECK(report.numeric_edges == 2);
    CHECK(report.exact_edges == 1);
    CHECK(validate_unit_distances(load("moser.json")).ok());

    auto exact = UnitDistanceGraph::from_json(nlohmann::json::parse(R"({
        "vertices": [{"id": "o", "x": 0, "y": 0}, {"id": "p", "x": "3/5", "y": "4/5"}, {"id": "q", "x": 2, "y": 0}],
        "edges": [["o", "p"], ["o", "q"]]
    })"));
    auto r = validate_unit_distances(exact);
    CHECK(r.exact_edges == 2);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].squared_length == doctest::Approx(4));
    CHECK(r.to_json(exact).at("violations")[0].at("edge") == nlohmann::json{"o", "q"});
}

TEST_CASE("graph JSON")
{
    auto tri = load("triangle.json");
    CHECK(tri.size() == 3);
    CHECK(tri.origin() == tri.index_of("o"));
    auto back = UnitDistanceGraph::from_json(tri.to_json());
    CHECK(back.edges() == tri.edges());
    CHECK(back.vertices()[2].numeric);

    auto bare = UnitDistanceGraph::from_json(nlohmann::json::parse(R"({"vertices": ["a", "b", "c"], "edges": [["a", "b"]]})"));
    CHECK(bare.size() == 3);
    CHECK_FALSE(bare.origin());
    CHECK_THROWS_AS(solve_bichromatic_origin(bare, 3), Error);

    CHECK_THROWS_AS(UnitDistanceGraph::from_json(nlohmann::json::parse(R"({"vertices": ["a"], "edges": [["a", "b"]]})")), Error);
    CHECK_THROWS_AS(UnitDistanceGraph::from_json(nlohmann::json::parse(R"({"vertices": ["a", "a"], "edges": []})")), Error);
    CHECK_THROWS_AS(UnitDistanceGraph::from_json(nlohmann::json::parse(R"({"vertices": ["a"], "edges": [["a", "a"]]})")), Error);
    CHECK_THROWS_AS(UnitDistanceGraph::from_json(nlohmann::json::parse(R"({"edges": []})")), Error);
}
