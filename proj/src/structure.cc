#include <amc/structure.hh>
#include <amc/parallel.hh>
#include <amc/search.hh>

#include <algorithm>
#include <map>

using namespace amc;

auto APPartition::to_json() const -> nlohmann::json
{
    auto cs = nlohmann::json::array();
    for (auto & c : classes)
        cs.push_back({{"residue", c.residue.get_str()}, {"difference", c.difference.get_str()}, {"colour", c.colour}});
    return {{"classes", cs}, {"period", period.get_str()}, {"density_sum", to_string(density_sum)}};
}

auto StructureReport::to_json() const -> nlohmann::json
{
    nlohmann::json j = {{"caveats", caveats}};
    if (partition)
        j["partition"] = partition->to_json();
    if (am_witness)
        j["am_witness"] = am_witness->to_json();
    if (! inconclusive.empty())
        j["inconclusive"] = inconclusive;
    return j;
}

auto amc::analyze_z_colouring(const ColouringPtr & colouring, long lo, long hi, unsigned jobs) -> StructureReport
{
    if (hi - lo < 2)
        throw Error{"window must contain at least three integers"};
    if (! colouring->accepts_dimension(1))
        throw Error{"colouring is not defined on the line"};

    StructureReport report;
    PatternPair pattern{{Point{{Rational{0}}}, Point{{Rational{1}}}, Point{{Rational{2}}}}, 0};
    Window window = Window::integer_box(Point{{Rational{lo}}}, Point{{Rational{hi}}});
    auto w = search_am_homothet(colouring, pattern, window, Rational{(hi - lo) / 2}, jobs);
    if (w.found()) {
        report.am_witness = std::move(w);
        return report;
    }

    std::map<int, std::vector<long>> members;
    for (long x = lo ; x <= hi ; ++x)
        members[colouring->colour(Point{{Rational{x}}})].push_back(x);

    APPartition p;
    p.period = 1;
    p.density_sum = 0;
    long length = hi - lo + 1;
    for (auto & [colour, xs] : members) {
        if (xs.size() < 2) {
            report.inconclusive = "colour " + std::to_string(colour) + " occurs fewer than twice in the window";
            return report;
        }
        long d = xs[1] - xs[0];
        for (std::size_t i = 1 ; i < xs.size() ; ++i)
            if (xs[i] - xs[i - 1] != d) {
                report.inconclusive = "colour " + std::to_string(colour) + " is not an arithmetic progression inside the window";
                return report;
            }
        if (xs.front() - d >= lo || xs.back() + d <= hi) {
            report.inconclusive = "colour " + std::to_string(colour) + " does not fill its progression inside the window";
            return report;
        }
        if (4 * d > length)
            report.caveats.push_back("colour " + std::to_string(colour) + " has step " + std::to_string(d) + ", more than a quarter of the window");
        long r = ((xs.front() % d) + d) % d;
        p.classes.push_back(APClass{Integer{r}, Integer{d}, colour});
        p.period = lcm(p.period, Integer{d});
        p.density_sum += Rational{1, d};
        p.density_sum.canonicalize();
    }
    std::sort(p.classes.begin(), p.classes.end(), [] (const APClass & a, const APClass & b) {
        return a.difference != b.difference ? a.difference < b.difference : a.residue < b.residue;
    });
    if (p.density_sum != 1)
        throw Error{"internal: progression densities do not sum to one"};
    report.caveats.push_back("progressions are checked inside the window only");
    report.partition = std::move(p);
    return report;
}

namespace
{
    auto egyptian_bound_memo(int k, const Rational & c, std::map<std::pair<int, Rational>, Integer> & memo) -> Integer
    {
        if (k == 1)
            return floor_of(1 / c);
        auto key = std::pair{k, c};
        if (auto it = memo.find(key) ; it != memo.end())
            return it->second;

        Integer best{0};
        Integer top = floor_of(Rational{k} / c);
        for (Integer i{1} ; i <= top ; ++i) {
            Rational rest = c - Rational{Integer{1}, i};
            rest.canonicalize();
            if (rest <= 0)
                continue;
            best = std::max(best, std::max(i, egyptian_bound_memo(k - 1, rest, memo)));
        }
        memo.emplace(key, best);
        return best;
    }

    auto extend_solutions(int remaining, const Rational & r, const Integer & min_x, std::vector<Integer> & prefix,
            std::vector<std::vector<Integer>> & out) -> void
    {
        if (remaining == 1) {
            if (r.get_num() == 1 && r.get_den() >= min_x) {
                prefix.push_back(r.get_den());
                out.push_back(prefix);
                prefix.pop_back();
            }
            return;
        }
        Integer lo = std::max(min_x, ceil_of(1 / r));
        Integer hi = floor_of(Rational{remaining} / r);
        for (Integer x = lo ; x <= hi ; ++x) {
            Rational rest = r - Rational{Integer{1}, x};
            rest.canonicalize();
            if (rest <= 0)
                continue;
            prefix.push_back(x);
            extend_solutions(remaining - 1, rest, x, prefix, out);
            prefix.pop_back();
        }
    }
}

auto amc::egyptian_bound(int k, const Rational & c) -> Integer
{
    if (k < 1)
        throw Error{"k must be at least 1"};
    if (c <= 0)
        throw Error{"c must be positive"};
    std::map<std::pair<int, Rational>, Integer> memo;
    return egyptian_bound_memo(k, c, memo);
}

auto amc::enumerate_unit_fraction_solutions(int k, unsigned jobs) -> std::vector<std::vector<Integer>>
{
    if (k < 1 || k > 6)
        throw Error{"k must be between 1 and 6"};
    if (k == 1)
        return {{Integer{1}}};

    // first term x_1 ranges over 2..k
    std::vector<std::vector<std::vector<Integer>>> parts(std::size_t(k - 1));
    parallel_indices(parts.size(), jobs, [&] (std::size_t i) {
        Integer x1{static_cast<unsigned long>(i + 2)};
        std::vector<Integer> prefix{x1};
        Rational rest = 1 - Rational{Integer{1}, x1};
        rest.canonicalize();
        extend_solutions(k - 1, rest, x1, prefix, parts[i]);
    });

    std::vector<std::vector<Integer>> out;
    for (auto & p : parts)
        for (auto & s : p)
            out.push_back(std::move(s));

    Integer bound = egyptian_bound(k, Rational{1});
    for (auto & s : out) {
        Rational sum{0};
        for (auto & x : s)
            sum += Rational{Integer{1}, x};
        sum.canonicalize();
        if (sum != 1)
            throw Error{"internal: enumerated solution does not sum to one"};
        if (s.back() > bound)
            throw Error{"internal: solution exceeds the recursive bound"};
    }
    return out;
}
