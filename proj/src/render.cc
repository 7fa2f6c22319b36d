#include <amc/render.hh>

#include <set>
#include <sstream>

using namespace amc;

namespace
{
    const char * const fills[] = {
        "#d62728", "#1f77b4", "#2ca02c", "#ffbf00", "#9467bd", "#8c564b",
        "#e377c2", "#7f7f7f", "#17becf", "#bcbd22", "#ff7f0e", "#393b79"
    };

    auto fill_of(int c) -> std::string
    {
        if (c < 12)
            return fills[c];
        // beyond the fixed palette, spread hues deterministically
        std::ostringstream s;
        s << "hsl(" << (c * 47) % 360 << "," << 40 + (c * 13) % 40 << "%," << 35 + (c * 7) % 30 << "%)";
        return s.str();
    }
}

auto amc::render_colouring_svg(const Colouring & colouring, const Point & lower, const Point & upper, int width, int height)
    -> std::string
{
    if (lower.dimension() != 2 || upper.dimension() != 2)
        throw Error{"rendering needs a planar window"};
    if (! colouring.accepts_dimension(2))
        throw Error{"colouring is not defined on the plane"};
    if (width < 1 || height < 1 || long(width) * height > 1'000'000)
        throw Error{"resolution must be positive and at most 1000000 cells"};
    if (! (lower[0] < upper[0] && lower[1] < upper[1]))
        throw Error{"window lower corner must lie below and left of the upper corner"};

    Rational dx = (upper[0] - lower[0]) / width, dy = (upper[1] - lower[1]) / height;
    std::set<int> used;
    std::ostringstream body;
    for (int j = 0 ; j < height ; ++j) {
        Rational y = upper[1] - dy * Rational{2 * j + 1, 2};
        for (int i = 0 ; i < width ; ++i) {
            Rational x = lower[0] + dx * Rational{2 * i + 1, 2};
            int c = colouring.colour(Point{{x, y}});
            used.insert(c);
            body << "<rect x=\"" << i << "\" y=\"" << j << "\" width=\"1\" height=\"1\" fill=\"" << fill_of(c) << "\"/>\n";
        }
    }

    int legend_height = 16 * int(used.size()) + 8;
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width + 120 << "\" height=\"" << std::max(height, legend_height)
        << "\" shape-rendering=\"crispEdges\">\n"
        << "<g id=\"cells\">\n" << body.str() << "</g>\n"
        << "<g id=\"legend\" font-family=\"monospace\" font-size=\"12\">\n";
    int row = 0;
    for (int c : used) {
        svg << "<rect x=\"" << width + 10 << "\" y=\"" << 4 + 16 * row << "\" width=\"12\" height=\"12\" fill=\"" << fill_of(c) << "\"/>"
            << "<text x=\"" << width + 28 << "\" y=\"" << 14 + 16 * row << "\">colour " << c << "</text>\n";
        ++row;
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}
