#pragma once

#include <amc/colouring.hh>
#include <amc/window.hh>
#include <amc/witness.hh>

#include <optional>
#include <string>
#include <vector>

namespace amc
{
    struct APClass
    {
        /// Smallest non-negative member of the class's residue, and its step.
        Integer residue;
        Integer difference;
        int colour;
    };

    struct APPartition
    {
        std::vector<APClass> classes;
        Integer period;
        Rational density_sum;

        auto to_json() const -> nlohmann::json;
    };

    struct StructureReport
    {
        std::optional<APPartition> partition;
        std::optional<Witness> am_witness;
        /// Set when the window cannot settle the question.
        std::string inconclusive;
        std::vector<std::string> caveats;

        auto to_json() const -> nlohmann::json;
    };

    /// Either an almost-monochromatic homothet of ({0, 1, 2}, 0) inside
    /// [lo, hi], or a check that every colour class there is the trace of an
    /// arithmetic progression.
    auto analyze_z_colouring(const ColouringPtr & colouring, long lo, long hi, unsigned jobs = 1) -> StructureReport;

    /// Recursive bound on the largest x_i in sum_{i <= k} 1 / x_i = c.
    auto egyptian_bound(int k, const Rational & c) -> Integer;

    /// All x_1 <= ... <= x_k with sum 1 / x_i = 1, in lexicographic order.
    auto enumerate_unit_fraction_solutions(int k, unsigned jobs = 1) -> std::vector<std::vector<Integer>>;
}
