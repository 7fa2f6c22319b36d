#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amc::cli
{
    constexpr int exit_found = 0;
    constexpr int exit_error = 2;
    constexpr int exit_exhausted = 3;

    /// Runs one command line, given without the program name.
    auto run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;
}
