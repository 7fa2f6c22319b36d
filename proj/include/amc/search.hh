#pragma once

#include <amc/colouring.hh>
#include <amc/geometry.hh>
#include <amc/window.hh>
#include <amc/witness.hh>

#include <optional>
#include <vector>

namespace amc
{
    /// First almost-monochromatic positive homothet c + lambda S inside the
    /// window, in order of lambda then c (row-major). Every lambda for which
    /// all images land on the window grid is tried, up to lambda_max.
    auto search_am_homothet(const ColouringPtr & colouring, const PatternPair & pattern, const Window & window,
            const Rational & lambda_max, unsigned jobs = 1) -> Witness;

    /// As search_am_homothet, over c + lambda R S with R the identity and the
    /// rational rotations with parameter up to max_rot_param, optionally
    /// composed with quarter turns. Order is lambda, rotation, then c.
    auto search_am_similar_2d(const ColouringPtr & colouring, const PatternPair & pattern, const Window & window,
            const Rational & lambda_max, int max_rot_param, bool quarter_turns = true, unsigned jobs = 1) -> Witness;

    /// First monochromatic n-term AP with an integer step vector of sup-norm
    /// at most t_max. Steps are ordered by sup-norm then lexicographically
    /// (first non-zero entry positive), then by starting point.
    auto probe_mono_ap(const ColouringPtr & colouring, const Window & window, int n_terms, long t_max,
            unsigned jobs = 1) -> Witness;

    /// First monochromatic c + lambda S with integer 1 <= lambda <= lambda_max.
    auto search_mono_homothet(const ColouringPtr & colouring, const std::vector<Point> & pattern, const Window & window,
            long lambda_max, unsigned jobs = 1) -> Witness;

    struct IntegerInterval
    {
        Integer lo, hi;

        auto size() const -> Integer { return hi - lo + 1; }
    };

    struct IntervalTriple
    {
        Integer q1, q2, q3;
    };

    struct MiddleInterval
    {
        IntegerInterval interval;
        Rational ratio;
        Integer M;
        std::vector<IntervalTriple> triples;
    };

    /// For a 3-point pattern p1 < p2 < p3, r = (p3 - p2) / (p3 - p1) and M the
    /// denominator of r: given |low| = 2M and |high| = M, an interval of length M
    /// every element of which is the middle of a homothet with ends in low and high.
    auto middle_interval(const IntegerInterval & low, const IntegerInterval & high, const PatternPair & pattern) -> MiddleInterval;

    /// Rotations tried when fitting a copy into a ball: the identity, the
    /// rational rotations of each coordinate plane and the quarter turns.
    auto extension_rotations(std::size_t d, int max_rot_param) -> std::vector<Matrix>;

    /// A similar copy of the pattern in Q_N^d whose distinguished point is the
    /// anchor and whose other points lie strictly inside the ball. Tries scale
    /// targets delta * radius / diam(S) for delta = 1/2, ..., 1/2^10.
    auto extend_from_ball(const PatternPair & pattern, const Point & anchor, const Point & centre,
            const Rational & radius, unsigned N, int max_rot_param) -> std::optional<PatternPair>;

    /// Same with the squared radius given exactly.
    auto extend_into_ball(const PatternPair & pattern, const Point & anchor, const Point & centre,
            const Rational & radius_squared, unsigned N, int max_rot_param) -> std::optional<PatternPair>;

    /// Finds a monochromatic homothet c + lambda (B(0,R) cap Z^d), then scans
    /// the coset c + lambda Z^d outward. An off-colour point is turned into an
    /// almost-monochromatic copy; otherwise the coset is monochromatic on the
    /// whole window.
    auto grid_expand(const ColouringPtr & colouring, const PatternPair & pattern, const Window & window, int R,
            long lambda_max, int max_rot_param, unsigned jobs = 1) -> Witness;

    /// Integer points of the closed ball of radius R, lexicographic.
    auto ball_points(std::size_t d, int R) -> std::vector<Point>;
}
