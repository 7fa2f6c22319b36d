#pragma once

#include <amc/colouring.hh>
#include <amc/geometry.hh>

#include <cstdint>
#include <string_view>
#include <vector>

namespace amc
{
    enum class WindowDomain
    {
        Integer,
        Rational
    };

    /// A box of Z^d, or of Q_N^d = { a/b : b <= N }^d. Points are addressed
    /// through integer grid coordinates g = scale * x, scale = lcm(1..N).
    class Window
    {
        private:
            WindowDomain _domain;
            Point _lower, _upper;
            unsigned _N;
            std::int64_t _scale;
            std::vector<std::int64_t> _grid_lo, _grid_hi;
            std::vector<char> _valid_residue;

        public:
            Window(WindowDomain domain, Point lower, Point upper, unsigned N = 1);

            static auto integer_box(Point lower, Point upper) -> Window;

            /// "1:300" or "-256:64,-256:64"; den <= 1 gives an integer window.
            static auto parse(std::string_view range, unsigned den = 1) -> Window;

            auto domain() const -> WindowDomain { return _domain; }
            auto dimension() const -> std::size_t { return _lower.dimension(); }
            auto lower() const -> const Point & { return _lower; }
            auto upper() const -> const Point & { return _upper; }
            auto denominator_bound() const -> unsigned { return _N; }
            auto scale() const -> std::int64_t { return _scale; }
            auto grid_lo(std::size_t k) const -> std::int64_t { return _grid_lo[k]; }
            auto grid_hi(std::size_t k) const -> std::int64_t { return _grid_hi[k]; }

            auto contains(const Point & p) const -> bool;
            auto valid_grid_coordinate(std::int64_t g) const -> bool;
            auto point_at(const std::vector<std::int64_t> & grid) const -> Point;
            auto grid_of(const Point & p) const -> std::vector<std::int64_t>;

            auto grid_point_count() const -> std::uint64_t;

            auto to_json() const -> nlohmann::json;
            static auto from_json(const nlohmann::json & j) -> Window;
    };

    /// Colours of every grid point of a window, computed once. Grid points
    /// whose coordinates exceed the denominator bound hold -1.
    class ColourTable
    {
        private:
            Window _window;
            std::vector<std::int64_t> _extent, _stride;
            std::vector<std::int32_t> _colours;
            std::vector<std::uint64_t> _valid;  // linear indices of valid points, row-major

        public:
            static constexpr std::uint64_t max_entries = std::uint64_t(1) << 25;

            ColourTable(const Window & window, const Colouring & colouring, unsigned jobs = 1);

            auto window() const -> const Window & { return _window; }
            auto size() const -> std::uint64_t { return _colours.size(); }
            auto extent(std::size_t k) const -> std::int64_t { return _extent[k]; }
            auto stride(std::size_t k) const -> std::int64_t { return _stride[k]; }
            auto at_linear(std::uint64_t i) const -> std::int32_t { return _colours[i]; }
            auto linear(const std::vector<std::int64_t> & grid) const -> std::uint64_t;
            auto coords_of(std::uint64_t linear) const -> std::vector<std::int64_t>;
            auto valid_points() const -> const std::vector<std::uint64_t> & { return _valid; }
    };
}
