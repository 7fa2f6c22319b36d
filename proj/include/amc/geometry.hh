#pragma once

#include <amc/rational.hh>

#include <json.hpp>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace amc
{
    inline constexpr std::size_t max_dimension = 8;

    class Point
    {
        private:
            std::vector<Rational> _coords;

        public:
            Point() = default;
            explicit Point(std::vector<Rational> coords);
            Point(std::initializer_list<Rational> coords);

            static auto zero(std::size_t d) -> Point;

            auto dimension() const -> std::size_t { return _coords.size(); }
            auto operator[] (std::size_t i) const -> const Rational & { return _coords[i]; }
            auto coords() const -> std::span<const Rational> { return _coords; }

            auto operator+ (const Point & other) const -> Point;
            auto operator- (const Point & other) const -> Point;
            auto scaled(const Rational & s) const -> Point;

            auto operator== (const Point & other) const -> bool = default;
            auto operator< (const Point & other) const -> bool;

            auto to_json() const -> nlohmann::json;
            static auto from_json(const nlohmann::json & j) -> Point;
    };

    auto dot(const Point & a, const Point & b) -> Rational;
    auto squared_norm(const Point & a) -> Rational;
    auto squared_distance(const Point & a, const Point & b) -> Rational;
    auto l1_norm(const Point & a) -> Rational;
    auto linf_norm(const Point & a) -> Rational;
    auto to_doubles(const Point & p) -> std::vector<double>;
    auto to_string(const Point & p) -> std::string;

    /// Square d x d rational matrix, row-major.
    class Matrix
    {
        private:
            std::size_t _n = 0;
            std::vector<Rational> _a;

        public:
            Matrix() = default;
            explicit Matrix(std::size_t n);
            Matrix(std::size_t n, std::vector<Rational> entries);

            static auto identity(std::size_t n) -> Matrix;

            auto size() const -> std::size_t { return _n; }
            auto operator() (std::size_t r, std::size_t c) -> Rational & { return _a[r * _n + c]; }
            auto operator() (std::size_t r, std::size_t c) const -> const Rational & { return _a[r * _n + c]; }

            auto operator* (const Matrix & other) const -> Matrix;
            auto operator* (const Point & p) const -> Point;
            auto operator== (const Matrix & other) const -> bool = default;
            auto transpose() const -> Matrix;
            auto determinant() const -> Rational;
            auto inverse() const -> Matrix;
            auto is_orthogonal() const -> bool;

            auto to_json() const -> nlohmann::json;
            static auto from_json(const nlohmann::json & j) -> Matrix;
    };

    /// A finite point set S with a distinguished element s0.
    class PatternPair
    {
        private:
            std::vector<Point> _points;
            std::size_t _origin_index;

        public:
            PatternPair(std::vector<Point> points, std::size_t origin_index);

            auto points() const -> const std::vector<Point> & { return _points; }
            auto origin_index() const -> std::size_t { return _origin_index; }
            auto origin() const -> const Point & { return _points[_origin_index]; }
            auto dimension() const -> std::size_t { return _points.front().dimension(); }
            auto size() const -> std::size_t { return _points.size(); }

            auto operator== (const PatternPair &) const -> bool = default;

            auto to_json() const -> nlohmann::json;
            static auto from_json(const nlohmann::json & j) -> PatternPair;
    };

    /// x -> translation + scale * rotation * x, rotation exactly orthogonal.
    class SimilarityMap
    {
        private:
            Rational _scale;
            Matrix _rotation;
            Point _translation;

        public:
            SimilarityMap(Rational scale, Matrix rotation, Point translation);

            static auto identity(std::size_t d) -> SimilarityMap;
            static auto homothety(const Rational & scale, const Point & translation) -> SimilarityMap;

            auto scale() const -> const Rational & { return _scale; }
            auto rotation() const -> const Matrix & { return _rotation; }
            auto translation() const -> const Point & { return _translation; }
            auto dimension() const -> std::size_t { return _translation.dimension(); }
            auto is_proper() const -> bool { return _rotation.determinant() == 1; }

            auto operator() (const Point & x) const -> Point;
            auto operator== (const SimilarityMap &) const -> bool = default;

            auto to_json() const -> nlohmann::json;
            static auto from_json(const nlohmann::json & j) -> SimilarityMap;
    };

    auto apply_similarity(const SimilarityMap & map, const PatternPair & pair) -> PatternPair;

    /// True iff s0 lies outside the convex hull of S minus s0, decided by an
    /// exact phase-one simplex over the rationals.
    auto is_extreme_point(const PatternPair & pair) -> bool;

    /// Exact convex-combination feasibility: is target in conv(points)?
    auto in_convex_hull(std::span<const Point> points, const Point & target) -> bool;

    /// 2-D rotations ((a^2-b^2, -2ab), (2ab, a^2-b^2)) / (a^2+b^2) for coprime
    /// 0 < b < a <= max_param, ordered by a then b. The identity is first.
    auto rational_rotations_2d(int max_param) -> std::vector<SimilarityMap>;

    auto rotation_2d(const Rational & cos_value, const Rational & sin_value) -> Matrix;
    auto quarter_turn() -> Matrix;

    /// Angle in [0, 2pi) of an exactly orthogonal 2-D rotation, enclosed in a
    /// conservative floating interval.
    struct AngleEnclosure
    {
        double lo, hi;
    };
    auto rotation_angle(const Matrix & rotation) -> AngleEnclosure;

    class Lattice
    {
        private:
            std::vector<Point> _basis;
            Matrix _gram;
            Matrix _columns_inverse;

        public:
            explicit Lattice(std::vector<Point> basis);

            static auto integer_lattice(std::size_t d) -> Lattice;

            auto basis() const -> const std::vector<Point> & { return _basis; }
            auto gram() const -> const Matrix & { return _gram; }
            auto dimension() const -> std::size_t { return _basis.size(); }

            /// Coordinates of p in the basis (exact).
            auto coordinates(const Point & p) const -> Point;

            auto to_json() const -> nlohmann::json;
            /// Entries must be integers or "num/den" strings; floating
            /// literals are rejected because the basis has to be exact.
            static auto from_json(const nlohmann::json & j) -> Lattice;
    };

    auto lattice_contains(const Lattice & lat, const Point & p) -> bool;

    struct RotatabilityWitness
    {
        SimilarityMap rotation;
        Rational lambda;
        AngleEnclosure angle;
    };

    auto find_rotatability_witness(const Lattice & lat, double angle_lo, double angle_hi, int max_param)
        -> std::optional<RotatabilityWitness>;

    /// "1,2,3" is three points on the line; "0,1;1,1;1,0" is three points in
    /// the plane (points split on ';', coordinates on ',').
    auto parse_point_list(std::string_view text) -> std::vector<Point>;

    /// A point list followed by "@" and the distinguished point, e.g. "1,2,3@2".
    auto parse_pattern(std::string_view text) -> PatternPair;

    auto rational_to_json(const Rational & q) -> nlohmann::json;
    auto rational_from_json(const nlohmann::json & j) -> Rational;
}
