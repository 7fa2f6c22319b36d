#include <amc/window.hh>
#include <amc/parallel.hh>

#include <numeric>

using namespace amc;

namespace
{
    const std::int64_t grid_limit = std::int64_t(1) << 40;

    auto split(std::string_view text, char sep) -> std::vector<std::string_view>
    {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        while (true) {
            auto pos = text.find(sep, start);
            out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
            if (pos == std::string_view::npos)
                break;
            start = pos + 1;
        }
        return out;
    }
}

Window::Window(WindowDomain domain, Point lower, Point upper, unsigned N) :
    _domain(domain),
    _lower(std::move(lower)),
    _upper(std::move(upper)),
    _N(domain == WindowDomain::Integer ? 1 : N)
{
    if (_lower.dimension() != _upper.dimension())
        throw Error{"window bounds have different dimensions"};
    if (_N < 1)
        throw Error{"denominator bound must be at least 1"};
    if (_N > 16)
        throw Error{"denominator bound above 16 is not supported"};
    _scale = to_int64(lcm_upto(_N));

    for (std::size_t k = 0 ; k < dimension() ; ++k) {
        if (_lower[k] > _upper[k])
            throw Error{"window lower bound exceeds upper bound in coordinate " + std::to_string(k)};
        Integer lo = ceil_of(_lower[k] * _scale), hi = floor_of(_upper[k] * _scale);
        if (! fits_int64(lo) || ! fits_int64(hi) || abs(lo) > grid_limit || abs(hi) > grid_limit)
            throw Error{"window too large"};
        _grid_lo.push_back(to_int64(lo));
        _grid_hi.push_back(to_int64(hi));
    }

    _valid_residue.resize(_scale);
    for (std::int64_t r = 0 ; r < _scale ; ++r)
        _valid_residue[r] = (_scale / std::gcd(r == 0 ? _scale : r, _scale)) <= std::int64_t(_N);
}

auto Window::integer_box(Point lower, Point upper) -> Window
{
    return Window{WindowDomain::Integer, std::move(lower), std::move(upper)};
}

auto Window::parse(std::string_view range, unsigned den) -> Window
{
    std::vector<Rational> lo, hi;
    for (auto part : split(range, ',')) {
        auto bounds = split(part, ':');
        if (bounds.size() != 2)
            throw Error{"window coordinate '" + std::string{part} + "' must look like lo:hi"};
        lo.push_back(parse_rational(bounds[0]));
        hi.push_back(parse_rational(bounds[1]));
    }
    if (den <= 1)
        return Window{WindowDomain::Integer, Point{lo}, Point{hi}};
    return Window{WindowDomain::Rational, Point{lo}, Point{hi}, den};
}

auto Window::valid_grid_coordinate(std::int64_t g) const -> bool
{
    std::int64_t r = g % _scale;
    if (r < 0)
        r += _scale;
    return _valid_residue[r];
}

auto Window::contains(const Point & p) const -> bool
{
    if (p.dimension() != dimension())
        return false;
    for (std::size_t k = 0 ; k < dimension() ; ++k) {
        if (p[k] < _lower[k] || p[k] > _upper[k])
            return false;
        if (p[k].get_den() > _N)
            return false;
    }
    return true;
}

auto Window::point_at(const std::vector<std::int64_t> & grid) const -> Point
{
    std::vector<Rational> c;
    for (auto g : grid) {
        Rational q{Integer{std::to_string(g)}, Integer{std::to_string(_scale)}};
        q.canonicalize();
        c.push_back(q);
    }
    return Point{std::move(c)};
}

auto Window::grid_of(const Point & p) const -> std::vector<std::int64_t>
{
    std::vector<std::int64_t> g;
    for (auto & x : p.coords()) {
        Rational s = x * _scale;
        if (! is_integer(s))
            throw Error{"point " + to_string(p) + " is not on the window grid"};
        g.push_back(to_int64(s.get_num()));
    }
    return g;
}

auto Window::grid_point_count() const -> std::uint64_t
{
    std::uint64_t c = 1;
    for (std::size_t k = 0 ; k < dimension() ; ++k) {
        std::uint64_t e = std::uint64_t(_grid_hi[k] - _grid_lo[k] + 1);
        if (e != 0 && c > (std::uint64_t(1) << 62) / e)
            return std::uint64_t(1) << 62;
        c *= e;
    }
    return c;
}

auto Window::to_json() const -> nlohmann::json
{
    return {
        {"domain", _domain == WindowDomain::Integer ? "Z" : "Q_N"},
        {"lower", _lower.to_json()},
        {"upper", _upper.to_json()},
        {"N", _N}
    };
}

auto Window::from_json(const nlohmann::json & j) -> Window
{
    auto d = j.at("domain").get<std::string>();
    if (d != "Z" && d != "Q_N")
        throw Error{"unknown window domain '" + d + "'"};
    return Window{d == "Z" ? WindowDomain::Integer : WindowDomain::Rational,
        Point::from_json(j.at("lower")), Point::from_json(j.at("upper")), j.value("N", 1u)};
}

ColourTable::ColourTable(const Window & window, const Colouring & colouring, unsigned jobs) :
    _window(window)
{
    std::size_t d = window.dimension();
    if (! colouring.accepts_dimension(d))
        throw Error{"dimension mismatch: colouring " + std::to_string(colouring.dimension()) + " vs window " + std::to_string(d)};

    std::uint64_t total = window.grid_point_count();
    if (total > max_entries)
        throw Error{"window has " + std::to_string(total) + " grid points; the limit is " + std::to_string(max_entries)};

    _extent.resize(d);
    _stride.resize(d);
    for (std::size_t k = 0 ; k < d ; ++k)
        _extent[k] = window.grid_hi(k) - window.grid_lo(k) + 1;
    std::int64_t s = 1;
    for (std::size_t k = d ; k-- > 0 ; ) {
        _stride[k] = s;
        s *= _extent[k];
    }
    _colours.assign(total, -1);

    const std::uint64_t chunk = 4096;
    std::uint64_t chunks = (total + chunk - 1) / chunk;
    parallel_indices(chunks, jobs, [&] (std::size_t c) {
        std::uint64_t end = std::min<std::uint64_t>(total, (c + 1) * chunk);
        for (std::uint64_t i = c * chunk ; i < end ; ++i) {
            auto g = coords_of(i);
            bool ok = true;
            for (auto x : g)
                if (! _window.valid_grid_coordinate(x)) {
                    ok = false;
                    break;
                }
            if (! ok)
                continue;
            _colours[i] = colouring.colour(_window.point_at(g));
        }
    });

    for (std::uint64_t i = 0 ; i < total ; ++i)
        if (_colours[i] >= 0)
            _valid.push_back(i);
}

auto ColourTable::linear(const std::vector<std::int64_t> & grid) const -> std::uint64_t
{
    std::uint64_t i = 0;
    for (std::size_t k = 0 ; k < grid.size() ; ++k)
        i += std::uint64_t(grid[k] - _window.grid_lo(k)) * std::uint64_t(_stride[k]);
    return i;
}

auto ColourTable::coords_of(std::uint64_t linear) const -> std::vector<std::int64_t>
{
    std::vector<std::int64_t> g(_extent.size());
    for (std::size_t k = 0 ; k < g.size() ; ++k) {
        g[k] = _window.grid_lo(k) + std::int64_t(linear / std::uint64_t(_stride[k]));
        linear %= std::uint64_t(_stride[k]);
    }
    return g;
}
