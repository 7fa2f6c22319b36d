#pragma once

#include <amc/colouring.hh>

#include <string>

namespace amc
{
    /// One rect per cell, coloured by the colour at the cell centre, plus a
    /// legend of the colours that occur. Rows run from the top (upper y).
    auto render_colouring_svg(const Colouring & colouring, const Point & lower, const Point & upper, int width, int height)
        -> std::string;
}
