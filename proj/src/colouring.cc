#include <amc/colouring.hh>

#include <algorithm>
#include <climits>
#include <cmath>
#include <fstream>
#include <sstream>

using namespace amc;

namespace
{
    auto require_integer_point(const Point & p) -> void
    {
        for (auto & c : p.coords())
            if (! is_integer(c))
                throw DomainError{"point " + to_string(p) + " is not an integer point"};
    }

    auto mod_of(const Integer & a, long m) -> long
    {
        Integer r;
        mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), m);
        return r.get_si();
    }

    auto to_int_checked(const Integer & z, const char * what) -> int
    {
        if (! z.fits_sint_p())
            throw Error{std::string{what} + " " + z.get_str() + " is too large"};
        return int(z.get_si());
    }

    auto integer_to_json(const Integer & z) -> nlohmann::json
    {
        if (z.fits_slong_p())
            return z.get_si();
        return z.get_str();
    }

    auto integer_from_json(const nlohmann::json & j) -> Integer
    {
        if (j.is_string())
            return Integer{j.get<std::string>()};
        if (j.is_number_integer())
            return Integer{std::to_string(j.get<long long>())};
        throw Error{"expected an integer, got " + j.dump()};
    }

    auto split(std::string_view text, char sep) -> std::vector<std::string>
    {
        std::vector<std::string> out;
        std::string cur;
        for (char c : text) {
            if (c == sep) {
                out.push_back(cur);
                cur.clear();
            }
            else
                cur += c;
        }
        out.push_back(cur);
        return out;
    }
}

auto amc::to_string(DomainKind d) -> std::string
{
    switch (d) {
        case DomainKind::Integer: return "Z_d";
        case DomainKind::Rational: return "Q_N_d";
        case DomainKind::RealSampled: return "R_d_sampled";
    }
    return "?";
}

auto Colouring::check_dimension(const Point & p) const -> void
{
    if (! accepts_dimension(p.dimension()))
        throw Error{kind() + " colouring is " + std::to_string(dimension()) + "-dimensional, got point of dimension "
            + std::to_string(p.dimension())};
}

ConstantColouring::ConstantColouring(int colour, std::size_t dimension) :
    _colour(colour),
    _dimension(dimension)
{
    if (colour < 0)
        throw Error{"colour must be non-negative"};
}

auto ConstantColouring::colour(const Point & p) const -> int
{
    check_dimension(p);
    return _colour;
}

auto ConstantColouring::to_json() const -> nlohmann::json
{
    return {{"kind", "constant"}, {"colour", _colour}, {"dimension", _dimension}};
}

PeriodicColouring::PeriodicColouring(std::vector<int> table, std::size_t dimension) :
    _table(std::move(table)),
    _dimension(dimension)
{
    if (_table.empty())
        throw Error{"periodic colouring needs a non-empty table"};
    if (*std::min_element(_table.begin(), _table.end()) < 0)
        throw Error{"colours must be non-negative"};
    _palette = *std::max_element(_table.begin(), _table.end()) + 1;
}

auto PeriodicColouring::residues(int period, std::size_t dimension) -> PeriodicColouring
{
    if (period < 1)
        throw Error{"period must be positive"};
    std::vector<int> t(period);
    for (int i = 0 ; i < period ; ++i)
        t[i] = i;
    return PeriodicColouring{std::move(t), dimension};
}

auto PeriodicColouring::colour(const Point & p) const -> int
{
    check_dimension(p);
    require_integer_point(p);
    Integer s{0};
    for (auto & c : p.coords())
        s += c.get_num();
    return _table[mod_of(s, long(_table.size()))];
}

auto PeriodicColouring::to_json() const -> nlohmann::json
{
    return {{"kind", "periodic"}, {"table", _table}, {"dimension", _dimension}};
}

ExplicitColouring::ExplicitColouring(std::map<Point, int> table, int palette) :
    _table(std::move(table)),
    _dimension(0),
    _palette(palette)
{
    if (_table.empty())
        throw Error{"explicit colouring needs at least one point"};
    _dimension = _table.begin()->first.dimension();
    int top = 0;
    for (auto & [p, c] : _table) {
        if (p.dimension() != _dimension)
            throw Error{"explicit colouring mixes dimensions"};
        if (c < 0)
            throw Error{"colours must be non-negative"};
        top = std::max(top, c + 1);
    }
    if (_palette == 0)
        _palette = top;
    else if (_palette < top)
        throw Error{"palette size " + std::to_string(_palette) + " smaller than colours used"};
}

auto ExplicitColouring::from_word(std::string_view word, long long first) -> ExplicitColouring
{
    std::map<Point, int> t;
    long long i = first;
    for (char c : word) {
        int colour;
        switch (c) {
            case 'R': case 'r': colour = 0; break;
            case 'B': case 'b': colour = 1; break;
            case 'G': case 'g': colour = 2; break;
            case 'Y': case 'y': colour = 3; break;
            default:
                if (c >= '0' && c <= '9')
                    colour = c - '0';
                else
                    throw Error{std::string{"unknown colour letter '"} + c + "'"};
        }
        t.emplace(Point{Rational{std::to_string(i)}}, colour);
        ++i;
    }
    return ExplicitColouring{std::move(t)};
}

auto ExplicitColouring::colour(const Point & p) const -> int
{
    check_dimension(p);
    auto it = _table.find(p);
    if (it == _table.end())
        throw DomainError{"point " + to_string(p) + " is not in the explicit table"};
    return it->second;
}

auto ExplicitColouring::to_json() const -> nlohmann::json
{
    auto rows = nlohmann::json::array();
    for (auto & [p, c] : _table)
        rows.push_back({p.to_json(), c});
    return {{"kind", "explicit"}, {"palette", _palette}, {"points", rows}};
}

HalfSpaceColouring::HalfSpaceColouring(bool closed, std::size_t dimension) :
    _closed(closed),
    _dimension(dimension)
{
}

auto HalfSpaceColouring::colour(const Point & p) const -> int
{
    check_dimension(p);
    auto & last = p[p.dimension() - 1];
    return (last > 0 || (_closed && last == 0)) ? 0 : 1;
}

auto HalfSpaceColouring::to_json() const -> nlohmann::json
{
    return {{"kind", "halfspace"}, {"closed", _closed}, {"dimension", _dimension}};
}

StripColouring::StripColouring(Rational width, int colours, std::size_t dimension) :
    _width(std::move(width)),
    _colours(colours),
    _dimension(dimension)
{
    if (_width <= 0)
        throw Error{"strip width must be positive"};
    if (_colours < 1)
        throw Error{"strip colouring needs at least one colour"};
}

auto StripColouring::colour(const Point & p) const -> int
{
    check_dimension(p);
    return int(mod_of(floor_of(p[p.dimension() - 1] / _width), _colours));
}

auto StripColouring::to_json() const -> nlohmann::json
{
    return {{"kind", "strip"}, {"width", rational_to_json(_width)}, {"colours", _colours}, {"dimension", _dimension}};
}

auto amc::two_adic_valuation(const Rational & q) -> long
{
    if (q == 0)
        throw Error{"2-adic valuation of 0"};
    long num = long(mpz_scan1(q.get_num_mpz_t(), 0));
    long den = long(mpz_scan1(q.get_den_mpz_t(), 0));
    return num - den;
}

auto DyadicColouring::colour(const Point & p) const -> int
{
    check_dimension(p);
    if (p[0] == 0)
        return 0;
    long t = two_adic_valuation(p[0]);
    return int(((t % 2) + 2) % 2);
}

auto DyadicColouring::to_json() const -> nlohmann::json
{
    return {{"kind", "dyadic"}};
}

BlockColouring::BlockColouring(long long block) :
    _block(block)
{
    if (block < 1)
        throw Error{"block length must be positive"};
}

auto BlockColouring::colour(const Point & p) const -> int
{
    check_dimension(p);
    require_integer_point(p);
    Integer q;
    Integer d{std::to_string(_block)};
    mpz_fdiv_q(q.get_mpz_t(), p[0].get_num_mpz_t(), d.get_mpz_t());
    return int(mod_of(q, 2));
}

auto BlockColouring::to_json() const -> nlohmann::json
{
    return {{"kind", "block"}, {"D", _block}};
}

ShellColouring1D::ShellColouring1D(ShellVariant variant, Integer K, Integer L) :
    _variant(variant),
    _K(std::move(K)),
    _L(std::move(L))
{
    if (_K < 2)
        throw Error{"shell base K must be at least 2"};
    if (_variant == ShellVariant::Stepped) {
        if (_L < 1)
            throw Error{"step-shell needs L >= 1"};
        to_int_checked(2 * _L + 1, "palette size");
    }
}

auto ShellColouring1D::for_pattern(ShellVariant variant, const std::vector<Rational> & sorted) -> ShellColouring1D
{
    if (sorted.size() != 4 || ! std::is_sorted(sorted.begin(), sorted.end())
            || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error{"shell colourings are built for four points p1 < p2 < p3 < p4"};
    auto & p = sorted;
    Rational bound = (p[3] - p[1]) / (p[1] - p[0]) + 1;
    Integer K = floor_of(bound) + 1;
    if (K < 2)
        K = 2;
    if (variant == ShellVariant::Alternating)
        return ShellColouring1D{variant, K};
    Integer L = K * ceil_of((p[2] - p[0]) / (p[3] - p[2]));
    return ShellColouring1D{variant, K, L};
}

auto ShellColouring1D::shell_index(const Rational & x) const -> long
{
    Rational scaled = _variant == ShellVariant::Alternating ? x : x / _L;
    if (scaled < 1)
        return -1;
    Integer f = floor_of(scaled);
    long i = 0;
    Integer power = _K;
    while (power <= f) {
        power *= _K;
        ++i;
    }
    return i;
}

auto ShellColouring1D::colour(const Point & p) const -> int
{
    check_dimension(p);
    auto & x = p[0];
    if (_variant == ShellVariant::Alternating) {
        if (x <= 0)
            throw DomainError{"alt-shell is defined on x > 0, got " + to_string(x)};
        if (x < 1)
            return 2;
        return int(shell_index(x) % 2);
    }

    if (x < 0)
        throw DomainError{"step-shell is defined on x >= 0, got " + to_string(x)};
    if (x < _L)
        return 0;
    long i = shell_index(x);
    Integer ki = pow_of(_K, i);
    Integer width = ki * (_K - 1);
    Integer j = floor_of((x - _L * ki) / width) + 1;
    int jj = to_int_checked(j, "piece index");
    return i % 2 == 1 ? jj : to_int_checked(_L, "L") + jj;
}

auto ShellColouring1D::palette_size() const -> int
{
    if (_variant == ShellVariant::Alternating)
        return 3;
    return to_int_checked(2 * _L + 1, "palette size");
}

auto ShellColouring1D::to_json() const -> nlohmann::json
{
    nlohmann::json j = {{"kind", kind()}, {"K", integer_to_json(_K)}};
    if (_variant == ShellVariant::Stepped)
        j["L"] = integer_to_json(_L);
    return j;
}

ReflectedColouring::ReflectedColouring(ColouringPtr inner) :
    _inner(std::move(inner))
{
}

auto ReflectedColouring::colour(const Point & p) const -> int
{
    return _inner->colour(p.scaled(Rational{-1}));
}

auto ReflectedColouring::to_json() const -> nlohmann::json
{
    return {{"kind", "reflected"}, {"inner", _inner->to_json()}};
}

DisjointUnionColouring::DisjointUnionColouring(std::vector<ColouringPtr> parts, RegionRule rule) :
    _parts(std::move(parts)),
    _rule(rule)
{
    if (_parts.size() != 2)
        throw Error{"half-line region rules split into exactly two parts"};
    int offset = 0;
    for (auto & p : _parts) {
        _offsets.push_back(offset);
        offset += p->palette_size();
    }
}

auto DisjointUnionColouring::region_of(const Point & p) const -> std::size_t
{
    auto & x = p[0];
    switch (_rule) {
        case RegionRule::PositiveElseRest: return x > 0 ? 0 : 1;
        case RegionRule::NonNegativeElseRest: return x >= 0 ? 0 : 1;
    }
    return 0;
}

auto DisjointUnionColouring::colour(const Point & p) const -> int
{
    check_dimension(p);
    auto r = region_of(p);
    return _offsets[r] + _parts[r]->colour(p);
}

auto DisjointUnionColouring::palette_size() const -> int
{
    return _offsets.back() + _parts.back()->palette_size();
}

auto DisjointUnionColouring::dimension() const -> std::size_t
{
    return 1;
}

auto DisjointUnionColouring::domain() const -> DomainKind
{
    DomainKind d = DomainKind::Integer;
    for (auto & p : _parts)
        d = std::max(d, p->domain());
    return d;
}

auto DisjointUnionColouring::set_label(std::string label, nlohmann::json params) -> void
{
    _label = std::move(label);
    _label_params = std::move(params);
}

auto DisjointUnionColouring::to_json() const -> nlohmann::json
{
    if (! _label.empty())
        return _label_params;
    auto parts = nlohmann::json::array();
    for (auto & p : _parts)
        parts.push_back(p->to_json());
    return {{"kind", "disjoint"},
        {"rule", _rule == RegionRule::PositiveElseRest ? "positive" : "nonnegative"},
        {"parts", parts}};
}

auto amc::compose_disjoint(std::vector<ColouringPtr> parts, RegionRule rule) -> ColouringPtr
{
    return std::make_shared<DisjointUnionColouring>(std::move(parts), rule);
}

auto amc::split_shell_colouring(const std::vector<Rational> & pattern, std::size_t origin_index) -> ColouringPtr
{
    if (pattern.size() != 4 || origin_index >= 4)
        throw Error{"the half-line shell construction needs a 4-point pattern"};
    Rational origin = pattern[origin_index];
    std::vector<Rational> sorted = pattern, negated;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw Error{"pattern points must be distinct"};
    for (auto it = sorted.rbegin() ; it != sorted.rend() ; ++it)
        negated.push_back(-*it);

    std::shared_ptr<DisjointUnionColouring> result;
    if (origin == sorted[2]) {
        auto positive = std::make_shared<ShellColouring1D>(ShellColouring1D::for_pattern(ShellVariant::Alternating, sorted));
        auto negative = std::make_shared<ShellColouring1D>(ShellColouring1D::for_pattern(ShellVariant::Stepped, negated));
        result = std::make_shared<DisjointUnionColouring>(
                std::vector<ColouringPtr>{positive, std::make_shared<ReflectedColouring>(negative)},
                RegionRule::PositiveElseRest);
    }
    else if (origin == sorted[1]) {
        auto positive = std::make_shared<ShellColouring1D>(ShellColouring1D::for_pattern(ShellVariant::Stepped, sorted));
        auto negative = std::make_shared<ShellColouring1D>(ShellColouring1D::for_pattern(ShellVariant::Alternating, negated));
        result = std::make_shared<DisjointUnionColouring>(
                std::vector<ColouringPtr>{positive, std::make_shared<ReflectedColouring>(negative)},
                RegionRule::NonNegativeElseRest);
    }
    else
        throw Error{"the distinguished point must be one of the two middle points"};

    auto pts = nlohmann::json::array();
    for (auto & p : pattern)
        pts.push_back(rational_to_json(p));
    result->set_label("split-shell", {{"kind", "split-shell"}, {"pattern", pts}, {"origin_index", origin_index}});
    return result;
}

auto MondrianColouring::square_index(const Rational & x, const Rational & y) -> long
{
    // Q_i = [-4^i, 4^(i-1)]^2, increasing in i
    Rational lo = -4, hi = 1;
    for (long i = 1 ; ; ++i) {
        if (x >= lo && x <= hi && y >= lo && y <= hi)
            return i;
        lo *= 4;
        hi *= 4;
    }
}

auto MondrianColouring::colour(const Point & p) const -> int
{
    check_dimension(p);
    long i = square_index(p[0], p[1]);
    int half = p[0] < p[1] ? 0 : 1;
    return 2 * half + int(i % 2);
}

auto MondrianColouring::to_json() const -> nlohmann::json
{
    return {{"kind", "mondrian"}};
}

FibreColouring::FibreColouring(std::size_t dimension) :
    _dimension(dimension)
{
    if (dimension < 3 || dimension > max_dimension)
        throw Error{"the fibred plane colouring needs 3 <= d <= " + std::to_string(max_dimension)};
}

auto FibreColouring::colour(const Point & p) const -> int
{
    check_dimension(p);
    Rational t{0};
    for (std::size_t i = 2 ; i < p.dimension() ; ++i)
        t += abs_of(p[i]);
    Integer f = floor_of(t + 1);
    long level = long(mpz_sizeinbase(f.get_mpz_t(), 2)) - 1;
    int offset = (level % 2) * 4;
    return offset + MondrianColouring{}.colour(Point{p[0], p[1]});
}

auto FibreColouring::to_json() const -> nlohmann::json
{
    return {{"kind", "fibre"}, {"dimension", _dimension}};
}

auto amc::colouring_from_json(const nlohmann::json & j) -> ColouringPtr
{
    if (! j.is_object() || ! j.contains("kind"))
        throw Error{"colouring JSON needs a \"kind\" field"};
    auto kind = j.at("kind").get<std::string>();
    std::size_t dim = j.value("dimension", std::size_t{0});

    if (kind == "constant")
        return std::make_shared<ConstantColouring>(j.value("colour", 0), dim);
    if (kind == "periodic")
        return std::make_shared<PeriodicColouring>(j.at("table").get<std::vector<int>>(), dim);
    if (kind == "explicit") {
        std::map<Point, int> t;
        for (auto & row : j.at("points")) {
            if (! row.is_array() || row.size() != 2)
                throw Error{"explicit colouring rows are [point, colour]"};
            auto p = row[0].is_array() ? Point::from_json(row[0]) : Point{rational_from_json(row[0])};
            if (! t.emplace(p, row[1].get<int>()).second)
                throw Error{"point " + to_string(p) + " listed twice"};
        }
        return std::make_shared<ExplicitColouring>(std::move(t), j.value("palette", 0));
    }
    if (kind == "halfspace")
        return std::make_shared<HalfSpaceColouring>(j.value("closed", false), dim);
    if (kind == "strip")
        return std::make_shared<StripColouring>(rational_from_json(j.at("width")), j.at("colours").get<int>(), dim);
    if (kind == "dyadic")
        return std::make_shared<DyadicColouring>();
    if (kind == "block")
        return std::make_shared<BlockColouring>(j.at("D").get<long long>());
    if (kind == "alt-shell")
        return std::make_shared<ShellColouring1D>(ShellVariant::Alternating, integer_from_json(j.at("K")));
    if (kind == "step-shell")
        return std::make_shared<ShellColouring1D>(ShellVariant::Stepped, integer_from_json(j.at("K")), integer_from_json(j.at("L")));
    if (kind == "reflected")
        return std::make_shared<ReflectedColouring>(colouring_from_json(j.at("inner")));
    if (kind == "disjoint") {
        std::vector<ColouringPtr> parts;
        for (auto & p : j.at("parts"))
            parts.push_back(colouring_from_json(p));
        auto rule = j.at("rule").get<std::string>();
        if (rule != "positive" && rule != "nonnegative")
            throw Error{"unknown region rule '" + rule + "'"};
        return compose_disjoint(std::move(parts), rule == "positive" ? RegionRule::PositiveElseRest : RegionRule::NonNegativeElseRest);
    }
    if (kind == "split-shell") {
        std::vector<Rational> pts;
        for (auto & p : j.at("pattern"))
            pts.push_back(rational_from_json(p));
        return split_shell_colouring(pts, j.at("origin_index").get<std::size_t>());
    }
    if (kind == "mondrian")
        return std::make_shared<MondrianColouring>();
    if (kind == "fibre")
        return std::make_shared<FibreColouring>(j.at("dimension").get<std::size_t>());
    if (kind == "cone") {
        auto alpha = j.at("alpha").get<double>();
        return std::make_shared<ConeShellColouring>(j.at("dimension").get<std::size_t>(),
                integer_from_json(j.at("K")), integer_from_json(j.at("L")), alpha);
    }
    throw Error{"unknown colouring kind '" + kind + "'"};
}

auto amc::parse_colouring(std::string_view spec_view) -> ColouringPtr
{
    std::string spec{spec_view};
    if (spec.empty())
        throw Error{"empty colouring name"};
    if (spec.front() == '{')
        return colouring_from_json(nlohmann::json::parse(spec));
    if (spec.front() == '@') {
        std::ifstream in{spec.substr(1)};
        if (! in)
            throw Error{"cannot read colouring file '" + spec.substr(1) + "'"};
        return colouring_from_json(nlohmann::json::parse(in));
    }

    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto need_arg = [&] {
        if (arg.empty())
            throw Error{"colouring '" + name + "' needs parameters after ':'"};
    };

    if (name == "constant")
        return std::make_shared<ConstantColouring>(arg.empty() ? 0 : std::stoi(arg));
    if (name == "mod3")
        return std::make_shared<PeriodicColouring>(PeriodicColouring::residues(3));
    if (name == "mod") {
        need_arg();
        return std::make_shared<PeriodicColouring>(PeriodicColouring::residues(std::stoi(arg)));
    }
    if (name == "parity" || name == "checkerboard")
        return std::make_shared<PeriodicColouring>(PeriodicColouring::residues(2));
    if (name == "halfspace")
        return std::make_shared<HalfSpaceColouring>(false);
    if (name == "halfspace-closed")
        return std::make_shared<HalfSpaceColouring>(true);
    if (name == "strip") {
        need_arg();
        auto parts = split(arg, ',');
        if (parts.size() != 2)
            throw Error{"strip needs width,colours"};
        return std::make_shared<StripColouring>(parse_rational(parts[0]), std::stoi(parts[1]));
    }
    if (name == "dyadic")
        return std::make_shared<DyadicColouring>();
    if (name == "block") {
        need_arg();
        return std::make_shared<BlockColouring>(std::stoll(arg));
    }
    if (name == "alt-shell") {
        need_arg();
        return std::make_shared<ShellColouring1D>(ShellVariant::Alternating, Integer{arg});
    }
    if (name == "step-shell") {
        need_arg();
        auto parts = split(arg, ',');
        if (parts.size() != 2)
            throw Error{"step-shell needs K,L"};
        return std::make_shared<ShellColouring1D>(ShellVariant::Stepped, Integer{parts[0]}, Integer{parts[1]});
    }
    if (name == "split-shell") {
        need_arg();
        auto pattern = parse_pattern(arg);
        if (pattern.dimension() != 1)
            throw Error{"split-shell needs a pattern on the line"};
        std::vector<Rational> pts;
        for (auto & p : pattern.points())
            pts.push_back(p[0]);
        return split_shell_colouring(pts, pattern.origin_index());
    }
    if (name == "mondrian")
        return std::make_shared<MondrianColouring>();
    if (name == "fibre") {
        need_arg();
        return std::make_shared<FibreColouring>(std::stoul(arg));
    }
    if (name == "word") {
        need_arg();
        return std::make_shared<ExplicitColouring>(ExplicitColouring::from_word(arg));
    }
    if (name == "cone") {
        need_arg();
        auto parts = split(arg, ':');
        std::optional<double> alpha;
        if (parts.size() == 2)
            alpha = std::stod(parts[1]);
        else if (parts.size() != 1)
            throw Error{"cone takes a point list and an optional angle"};
        return ConeShellColouring::for_pattern(parse_point_list(parts[0]), alpha);
    }
    throw Error{"unknown colouring '" + name + "'"};
}
