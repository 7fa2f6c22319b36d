#pragma once

#include <amc/colouring.hh>
#include <amc/window.hh>
#include <amc/witness.hh>

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace amc
{
    struct VdwResult
    {
        int k = 0, l = 0;
        long n_max = 0;
        bool decided = false;
        /// N(k, l) when decided, otherwise n_max (the bound is then "> n_max").
        long value = 0;
        /// Colours 0..k-1 of 1, 2, ... with no monochromatic l-AP.
        std::vector<int> witness;
        std::uint64_t nodes = 0;
        std::uint64_t refuted_prefixes = 0;
        bool log_truncated = false;
        std::string proof_digest;

        auto to_json() const -> nlohmann::json;
    };

    /// Backtracking over colourings of 1, 2, ..., n_max, left to right, with
    /// colours introduced in increasing order. The proof log lists every
    /// refuted prefix with the AP that kills each extension.
    auto vdw_number(int k, int l, long n_max, unsigned jobs = 1, const std::string & proof_log_path = "") -> VdwResult;

    /// Reads back a proof log and replays it, returning the decided value.
    auto check_vdw_proof_log(const std::string & path) -> long;

    /// Does colours (positions 1..n) contain a monochromatic l-AP?
    auto has_mono_ap(const std::vector<int> & colours, int l) -> bool;

    struct CommonDifference
    {
        long t = 0;
        int colour = 0;
        std::vector<long> starts;
    };

    /// The difference and colour with the most monochromatic l-APs inside
    /// [lo, hi], ties going to smaller t then smaller colour.
    auto vdw_common_difference(const Colouring & colouring, long lo, long hi, int l) -> CommonDifference;

    /// The cube [n]^N with a colouring evaluated on demand and remembered.
    class HJCube
    {
        private:
            int _n, _N;
            std::function<auto (const std::vector<int> &) -> int> _colour;
            std::unique_ptr<std::atomic<int>[]> _memo;
            std::uint64_t _size;

        public:
            HJCube(int n, int N, std::function<auto (const std::vector<int> &) -> int> colour);

            auto n() const -> int { return _n; }
            auto N() const -> int { return _N; }
            auto point_count() const -> std::uint64_t { return _size; }

            /// Coordinates in 1..n.
            auto colour(const std::vector<int> & x) const -> int;
    };

    struct CombinatorialLine
    {
        /// 0 marks a moving coordinate, otherwise the fixed value.
        std::vector<int> pattern;

        auto moving() const -> std::vector<int>;
        auto points(int n) const -> std::vector<std::vector<int>>;
        auto to_json() const -> nlohmann::json;
    };

    /// First monochromatic line, reading templates over {*, 1..n} as base
    /// n + 1 numbers with * = 0 and the first coordinate most significant.
    auto hj_find_line(const HJCube & cube, unsigned jobs = 1) -> std::optional<CombinatorialLine>;

    struct GallaiEmbedding
    {
        std::vector<Point> S;
        int N = 0;
        std::vector<Integer> lambdas;
        bool injective = false;

        /// sum_i lambda_i s_{x_i}, coordinates in 1..n.
        auto image(const std::vector<int> & x) const -> Point;
        auto to_json() const -> nlohmann::json;
    };

    /// Greedy weights: each lambda_i is the least positive integer keeping the
    /// partial map injective on [n]^i.
    auto build_gallai_embedding(const std::vector<Point> & S, int N) -> GallaiEmbedding;

    /// Pulls the colouring back to [n]^N and maps a monochromatic line to a
    /// monochromatic homothet. With a window, images are translated to its
    /// lower corner; when the injective embedding does not fit, unit weights
    /// are used instead.
    auto gallai_via_hj(const ColouringPtr & colouring, const std::vector<Point> & S, int N,
            const std::optional<Window> & window = std::nullopt, unsigned jobs = 1) -> Witness;
}
