#pragma once

#include <amc/colouring.hh>
#include <amc/geometry.hh>
#include <amc/udg.hh>

#include <optional>
#include <vector>

namespace amc
{
    /// Unit circles through a common point, given by their centres.
    struct Bouquet
    {
        Point origin;
        std::vector<Point> centres;
        bool numeric = false;

        /// Exact unit distances, or within 1e-12 when numeric.
        auto validate() const -> void;
        auto to_json() const -> nlohmann::json;
        static auto from_json(const nlohmann::json & j) -> Bouquet;
        /// The circles centred at the neighbours of the graph's origin.
        static auto of_graph(const UnitDistanceGraph & graph) -> Bouquet;
    };

    /// Concurrent lines through origin with the given (rational) directions.
    struct Pencil
    {
        Point origin;
        std::vector<Point> directions;

        auto validate() const -> void;
        auto to_json() const -> nlohmann::json;
        static auto from_json(const nlohmann::json & j) -> Pencil;
    };

    struct PlanePoint
    {
        long double x, y;
    };

    struct ScaledPlacement
    {
        long double alpha;
        std::vector<PlanePoint> points;
        /// Present when cos and sin of alpha are both rational.
        std::optional<std::vector<Point>> exact_points;
        long double max_circle_error = 0, max_congruence_error = 0;
    };

    /// P_j = O + lambda Rot(alpha) (O_j - O) with cos(alpha) = lambda / 2, so
    /// that P_j lies on the j-th circle and the P_j form lambda times the
    /// centres.
    auto place_scaled_copy(const Bouquet & bouquet, const Rational & lambda) -> ScaledPlacement;

    struct PencilReach
    {
        /// Smallest sector angle holding one ray of every line.
        double spanned_angle;
        double epsilon;
    };

    auto pencil_reach(const Pencil & pencil) -> PencilReach;

    /// Rotation angle that puts a copy of the pencil at p with every line
    /// meeting the unit circle about centre, if there is one.
    auto place_pencil_on_circle(const Pencil & pencil, PlanePoint p, PlanePoint centre) -> std::optional<double>;
    auto pencil_meets_circle(const Pencil & pencil, double rotation, PlanePoint p, PlanePoint centre) -> bool;

    struct InscribedPoints
    {
        std::vector<PlanePoint> points;
        /// Largest deviation of the angle seen from sample points on the free arc.
        double max_angle_error = 0;
    };

    /// Points on the circle with consecutive arcs 2 alpha_i, starting at angle 0.
    auto inscribed_points(PlanePoint centre, double radius, const std::vector<double> & angles) -> InscribedPoints;

    struct SmilingWitness
    {
        SimilarityMap placement;
        /// Before placement.
        Point origin;
        std::vector<Point> components;
        bool circles = true;
        std::vector<Point> points;
        int colour;
        int origin_colour;

        auto to_json() const -> nlohmann::json;
    };

    /// Rational points of circle component around centre: c + ((1-t^2), 2t) / (1+t^2)
    /// for t = a / b, b <= density, |t| <= density, plus c + (-1, 0).
    auto circle_samples(const Point & centre, int density) -> std::vector<Point>;

    /// Looks for a colour other than the origin's met by every placed circle.
    /// Absence only means no such colour was met at this sampling density.
    auto check_smiling(const Colouring & colouring, const Bouquet & bouquet, const SimilarityMap & placement, int density,
            std::optional<int> colour = std::nullopt) -> std::optional<SmilingWitness>;
    auto check_smiling(const Colouring & colouring, const Pencil & pencil, const SimilarityMap & placement, int density,
            std::optional<int> colour = std::nullopt) -> std::optional<SmilingWitness>;

    auto verify_smiling(const Colouring & colouring, const SmilingWitness & w) -> bool;

    struct LatticeLikeReport
    {
        bool in_lattice = false;
        bool origin_extreme = false;
        /// Test intervals [k pi/8, (k+1) pi/8] in [0, pi] with a rotatability witness.
        int rotatable_intervals = 0;
        int tested_intervals = 0;

        auto ok() const -> bool { return in_lattice && origin_extreme; }
        auto to_json() const -> nlohmann::json;
    };

    auto validate_lattice_like(const Bouquet & bouquet, const Lattice & lattice, int max_rot_param = 20) -> LatticeLikeReport;

    /// phi'(v0) = {phi(v0'), colour} and phi'(v) = phi(v') elsewhere, with v'
    /// the placed vertex; throws if the result is not proper.
    auto compose_bichromatic_colouring(const UnitDistanceGraph & graph, const SmilingWitness & witness,
            const Colouring & colouring) -> OriginColouring;
}
