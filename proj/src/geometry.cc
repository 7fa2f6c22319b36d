#include <amc/geometry.hh>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

using namespace amc;

namespace
{
    auto check_dimension(std::size_t d) -> void
    {
        if (d < 1 || d > max_dimension)
            throw Error{"dimension " + std::to_string(d) + " outside 1.." + std::to_string(max_dimension)};
    }

    auto require_same_dimension(const Point & a, const Point & b) -> void
    {
        if (a.dimension() != b.dimension())
            throw Error{"dimension mismatch: " + std::to_string(a.dimension()) + " vs " + std::to_string(b.dimension())};
    }
}

auto amc::rational_to_json(const Rational & q) -> nlohmann::json
{
    return to_string(q);
}

auto amc::rational_from_json(const nlohmann::json & j) -> Rational
{
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational{std::to_string(j.get<long long>())};
    if (j.is_number_float())
        return from_double(j.get<double>());
    throw Error{"expected a rational, got " + j.dump()};
}

Point::Point(std::vector<Rational> coords) :
    _coords(std::move(coords))
{
    check_dimension(_coords.size());
}

Point::Point(std::initializer_list<Rational> coords) :
    _coords(coords)
{
    check_dimension(_coords.size());
}

auto Point::zero(std::size_t d) -> Point
{
    return Point{std::vector<Rational>(d, Rational{0})};
}

auto Point::operator+ (const Point & other) const -> Point
{
    require_same_dimension(*this, other);
    std::vector<Rational> c(_coords.size());
    for (std::size_t i = 0 ; i < c.size() ; ++i)
        c[i] = _coords[i] + other._coords[i];
    return Point{std::move(c)};
}

auto Point::operator- (const Point & other) const -> Point
{
    require_same_dimension(*this, other);
    std::vector<Rational> c(_coords.size());
    for (std::size_t i = 0 ; i < c.size() ; ++i)
        c[i] = _coords[i] - other._coords[i];
    return Point{std::move(c)};
}

auto Point::scaled(const Rational & s) const -> Point
{
    std::vector<Rational> c(_coords.size());
    for (std::size_t i = 0 ; i < c.size() ; ++i)
        c[i] = _coords[i] * s;
    return Point{std::move(c)};
}

auto Point::operator< (const Point & other) const -> bool
{
    return std::lexicographical_compare(_coords.begin(), _coords.end(), other._coords.begin(), other._coords.end());
}

auto Point::to_json() const -> nlohmann::json
{
    auto j = nlohmann::json::array();
    for (auto & c : _coords)
        j.push_back(rational_to_json(c));
    return j;
}

auto Point::from_json(const nlohmann::json & j) -> Point
{
    if (! j.is_array())
        throw Error{"point must be a JSON array, got " + j.dump()};
    std::vector<Rational> c;
    for (auto & e : j)
        c.push_back(rational_from_json(e));
    return Point{std::move(c)};
}

auto amc::dot(const Point & a, const Point & b) -> Rational
{
    require_same_dimension(a, b);
    Rational s{0};
    for (std::size_t i = 0 ; i < a.dimension() ; ++i)
        s += a[i] * b[i];
    return s;
}

auto amc::squared_norm(const Point & a) -> Rational
{
    return dot(a, a);
}

auto amc::squared_distance(const Point & a, const Point & b) -> Rational
{
    return squared_norm(a - b);
}

auto amc::l1_norm(const Point & a) -> Rational
{
    Rational s{0};
    for (auto & c : a.coords())
        s += abs_of(c);
    return s;
}

auto amc::linf_norm(const Point & a) -> Rational
{
    Rational s{0};
    for (auto & c : a.coords())
        s = std::max<Rational>(s, abs_of(c));
    return s;
}

auto amc::to_doubles(const Point & p) -> std::vector<double>
{
    std::vector<double> r;
    for (auto & c : p.coords())
        r.push_back(c.get_d());
    return r;
}

auto amc::to_string(const Point & p) -> std::string
{
    std::string s = "(";
    for (std::size_t i = 0 ; i < p.dimension() ; ++i) {
        if (i)
            s += ", ";
        s += to_string(p[i]);
    }
    return s + ")";
}

Matrix::Matrix(std::size_t n) :
    _n(n),
    _a(n * n, Rational{0})
{
}

Matrix::Matrix(std::size_t n, std::vector<Rational> entries) :
    _n(n),
    _a(std::move(entries))
{
    if (_a.size() != n * n)
        throw Error{"matrix needs " + std::to_string(n * n) + " entries"};
}

auto Matrix::identity(std::size_t n) -> Matrix
{
    Matrix m(n);
    for (std::size_t i = 0 ; i < n ; ++i)
        m(i, i) = 1;
    return m;
}

auto Matrix::operator* (const Matrix & other) const -> Matrix
{
    if (_n != other._n)
        throw Error{"matrix size mismatch"};
    Matrix m(_n);
    for (std::size_t r = 0 ; r < _n ; ++r)
        for (std::size_t k = 0 ; k < _n ; ++k) {
            if ((*this)(r, k) == 0)
                continue;
            for (std::size_t c = 0 ; c < _n ; ++c)
                m(r, c) += (*this)(r, k) * other(k, c);
        }
    return m;
}

auto Matrix::operator* (const Point & p) const -> Point
{
    if (_n != p.dimension())
        throw Error{"dimension mismatch: matrix " + std::to_string(_n) + " vs point " + std::to_string(p.dimension())};
    std::vector<Rational> c(_n, Rational{0});
    for (std::size_t r = 0 ; r < _n ; ++r)
        for (std::size_t k = 0 ; k < _n ; ++k)
            c[r] += (*this)(r, k) * p[k];
    return Point{std::move(c)};
}

auto Matrix::transpose() const -> Matrix
{
    Matrix m(_n);
    for (std::size_t r = 0 ; r < _n ; ++r)
        for (std::size_t c = 0 ; c < _n ; ++c)
            m(c, r) = (*this)(r, c);
    return m;
}

auto Matrix::determinant() const -> Rational
{
    Matrix m = *this;
    Rational det{1};
    for (std::size_t col = 0 ; col < _n ; ++col) {
        std::size_t pivot = col;
        while (pivot < _n && m(pivot, col) == 0)
            ++pivot;
        if (pivot == _n)
            return Rational{0};
        if (pivot != col) {
            for (std::size_t c = 0 ; c < _n ; ++c)
                std::swap(m(pivot, c), m(col, c));
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t r = col + 1 ; r < _n ; ++r) {
            if (m(r, col) == 0)
                continue;
            Rational f = m(r, col) / m(col, col);
            for (std::size_t c = col ; c < _n ; ++c)
                m(r, c) -= f * m(col, c);
        }
    }
    return det;
}

auto Matrix::inverse() const -> Matrix
{
    Matrix m = *this, inv = identity(_n);
    for (std::size_t col = 0 ; col < _n ; ++col) {
        std::size_t pivot = col;
        while (pivot < _n && m(pivot, col) == 0)
            ++pivot;
        if (pivot == _n)
            throw Error{"singular matrix"};
        if (pivot != col)
            for (std::size_t c = 0 ; c < _n ; ++c) {
                std::swap(m(pivot, c), m(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        Rational p = m(col, col);
        for (std::size_t c = 0 ; c < _n ; ++c) {
            m(col, c) /= p;
            inv(col, c) /= p;
        }
        for (std::size_t r = 0 ; r < _n ; ++r) {
            if (r == col || m(r, col) == 0)
                continue;
            Rational f = m(r, col);
            for (std::size_t c = 0 ; c < _n ; ++c) {
                m(r, c) -= f * m(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

auto Matrix::is_orthogonal() const -> bool
{
    return transpose() * (*this) == identity(_n);
}

auto Matrix::to_json() const -> nlohmann::json
{
    auto j = nlohmann::json::array();
    for (std::size_t r = 0 ; r < _n ; ++r) {
        auto row = nlohmann::json::array();
        for (std::size_t c = 0 ; c < _n ; ++c)
            row.push_back(rational_to_json((*this)(r, c)));
        j.push_back(row);
    }
    return j;
}

auto Matrix::from_json(const nlohmann::json & j) -> Matrix
{
    if (! j.is_array() || j.empty())
        throw Error{"matrix must be a non-empty array of rows"};
    std::size_t n = j.size();
    std::vector<Rational> e;
    for (auto & row : j) {
        if (! row.is_array() || row.size() != n)
            throw Error{"matrix must be square"};
        for (auto & x : row)
            e.push_back(rational_from_json(x));
    }
    return Matrix{n, std::move(e)};
}

PatternPair::PatternPair(std::vector<Point> points, std::size_t origin_index) :
    _points(std::move(points)),
    _origin_index(origin_index)
{
    if (_points.size() < 3)
        throw Error{"a pattern needs at least 3 points"};
    if (_origin_index >= _points.size())
        throw Error{"origin index out of range"};
    for (auto & p : _points)
        require_same_dimension(p, _points.front());
    std::set<Point> seen(_points.begin(), _points.end());
    if (seen.size() != _points.size())
        throw Error{"pattern points must be distinct"};
}

auto PatternPair::to_json() const -> nlohmann::json
{
    auto pts = nlohmann::json::array();
    for (auto & p : _points)
        pts.push_back(p.to_json());
    return {{"points", pts}, {"origin_index", _origin_index}};
}

auto PatternPair::from_json(const nlohmann::json & j) -> PatternPair
{
    std::vector<Point> pts;
    for (auto & p : j.at("points"))
        pts.push_back(Point::from_json(p));
    return PatternPair{std::move(pts), j.at("origin_index").get<std::size_t>()};
}

SimilarityMap::SimilarityMap(Rational scale, Matrix rotation, Point translation) :
    _scale(std::move(scale)),
    _rotation(std::move(rotation)),
    _translation(std::move(translation))
{
    if (_scale <= 0)
        throw Error{"similarity scale must be positive"};
    if (_rotation.size() != _translation.dimension())
        throw Error{"dimension mismatch between rotation and translation"};
    if (! _rotation.is_orthogonal())
        throw Error{"rotation part is not exactly orthogonal"};
}

auto SimilarityMap::identity(std::size_t d) -> SimilarityMap
{
    return SimilarityMap{Rational{1}, Matrix::identity(d), Point::zero(d)};
}

auto SimilarityMap::homothety(const Rational & scale, const Point & translation) -> SimilarityMap
{
    return SimilarityMap{scale, Matrix::identity(translation.dimension()), translation};
}

auto SimilarityMap::operator() (const Point & x) const -> Point
{
    return _translation + (_rotation * x).scaled(_scale);
}

auto SimilarityMap::to_json() const -> nlohmann::json
{
    return {
        {"scale", rational_to_json(_scale)},
        {"rotation", _rotation.to_json()},
        {"translation", _translation.to_json()}
    };
}

auto SimilarityMap::from_json(const nlohmann::json & j) -> SimilarityMap
{
    return SimilarityMap{
        rational_from_json(j.at("scale")),
        Matrix::from_json(j.at("rotation")),
        Point::from_json(j.at("translation"))};
}

auto amc::apply_similarity(const SimilarityMap & map, const PatternPair & pair) -> PatternPair
{
    if (map.dimension() != pair.dimension())
        throw Error{"dimension mismatch: map " + std::to_string(map.dimension()) + " vs pattern " + std::to_string(pair.dimension())};
    std::vector<Point> image;
    for (auto & p : pair.points())
        image.push_back(map(p));
    return PatternPair{std::move(image), pair.origin_index()};
}

auto amc::in_convex_hull(std::span<const Point> points, const Point & target) -> bool
{
    if (points.empty())
        return false;

    // Phase one of the simplex method on
    //   sum_j w_j p_j = target, sum_j w_j = 1, w >= 0
    // with one artificial variable per row and Bland's rule.
    std::size_t d = target.dimension(), m = points.size(), rows = d + 1;
    std::size_t cols = m + rows + 1, rhs = cols - 1;
    std::vector<std::vector<Rational>> t(rows, std::vector<Rational>(cols, Rational{0}));

    for (std::size_t i = 0 ; i < rows ; ++i) {
        for (std::size_t j = 0 ; j < m ; ++j)
            t[i][j] = i < d ? points[j][i] : Rational{1};
        t[i][rhs] = i < d ? target[i] : Rational{1};
        if (t[i][rhs] < 0)
            for (auto & x : t[i])
                x = -x;
        t[i][m + i] = 1;
    }

    std::vector<std::size_t> basis(rows);
    std::iota(basis.begin(), basis.end(), m);

    std::vector<Rational> z(cols, Rational{0});
    for (std::size_t i = 0 ; i < rows ; ++i)
        for (std::size_t j = 0 ; j < cols ; ++j)
            if (j < m || j == rhs)
                z[j] -= t[i][j];

    while (true) {
        std::size_t enter = cols;
        for (std::size_t j = 0 ; j < rhs ; ++j)
            if (z[j] < 0) {
                enter = j;
                break;
            }
        if (enter == cols)
            break;

        std::size_t leave = rows;
        Rational best;
        for (std::size_t i = 0 ; i < rows ; ++i) {
            if (t[i][enter] <= 0)
                continue;
            Rational ratio = t[i][rhs] / t[i][enter];
            if (leave == rows || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == rows)
            break; // unbounded cannot happen in phase one

        Rational p = t[leave][enter];
        for (auto & x : t[leave])
            x /= p;
        for (std::size_t i = 0 ; i < rows ; ++i) {
            if (i == leave || t[i][enter] == 0)
                continue;
            Rational f = t[i][enter];
            for (std::size_t j = 0 ; j < cols ; ++j)
                t[i][j] -= f * t[leave][j];
        }
        if (z[enter] != 0) {
            Rational f = z[enter];
            for (std::size_t j = 0 ; j < cols ; ++j)
                z[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    return z[rhs] == 0;
}

auto amc::is_extreme_point(const PatternPair & pair) -> bool
{
    std::vector<Point> rest;
    for (std::size_t i = 0 ; i < pair.size() ; ++i)
        if (i != pair.origin_index())
            rest.push_back(pair.points()[i]);
    return ! in_convex_hull(rest, pair.origin());
}

auto amc::rotation_2d(const Rational & cos_value, const Rational & sin_value) -> Matrix
{
    return Matrix{2, {cos_value, -sin_value, sin_value, cos_value}};
}

auto amc::quarter_turn() -> Matrix
{
    return rotation_2d(Rational{0}, Rational{1});
}

auto amc::rational_rotations_2d(int max_param) -> std::vector<SimilarityMap>
{
    if (max_param < 1)
        throw Error{"max_param must be at least 1"};
    std::vector<SimilarityMap> result;
    result.push_back(SimilarityMap::identity(2));
    for (int a = 2 ; a <= max_param ; ++a)
        for (int b = 1 ; b < a ; ++b) {
            if (std::gcd(a, b) != 1)
                continue;
            Rational h{a * a + b * b};
            Rational c = Rational{a * a - b * b} / h, s = Rational{2 * a * b} / h;
            result.push_back(SimilarityMap{Rational{1}, rotation_2d(c, s), Point::zero(2)});
        }
    return result;
}

auto amc::rotation_angle(const Matrix & rotation) -> AngleEnclosure
{
    if (rotation.size() != 2 || ! rotation.is_orthogonal())
        throw Error{"rotation_angle needs an orthogonal 2x2 matrix"};
    long double c = rotation(0, 0).get_d(), s = rotation(1, 0).get_d();
    long double a = std::atan2(s, c);
    if (a < 0)
        a += 2.0L * std::acos(-1.0L);
    // conversion and atan2 each contribute a few ulps; widen generously
    double margin = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, static_cast<double>(a));
    return AngleEnclosure{static_cast<double>(a) - margin, static_cast<double>(a) + margin};
}

Lattice::Lattice(std::vector<Point> basis) :
    _basis(std::move(basis))
{
    if (_basis.empty())
        throw Error{"lattice basis is empty"};
    std::size_t d = _basis.size();
    check_dimension(d);
    for (auto & v : _basis)
        if (v.dimension() != d)
            throw Error{"lattice basis must consist of d vectors in dimension d"};

    Matrix cols(d);
    for (std::size_t j = 0 ; j < d ; ++j)
        for (std::size_t i = 0 ; i < d ; ++i)
            cols(i, j) = _basis[j][i];
    if (cols.determinant() == 0)
        throw Error{"lattice basis is linearly dependent"};
    _columns_inverse = cols.inverse();
    _gram = cols.transpose() * cols;
}

auto Lattice::integer_lattice(std::size_t d) -> Lattice
{
    std::vector<Point> b;
    for (std::size_t i = 0 ; i < d ; ++i) {
        std::vector<Rational> c(d, Rational{0});
        c[i] = 1;
        b.emplace_back(std::move(c));
    }
    return Lattice{std::move(b)};
}

auto Lattice::coordinates(const Point & p) const -> Point
{
    return _columns_inverse * p;
}

auto Lattice::to_json() const -> nlohmann::json
{
    auto j = nlohmann::json::array();
    for (auto & v : _basis)
        j.push_back(v.to_json());
    return {{"basis", j}};
}

auto Lattice::from_json(const nlohmann::json & j) -> Lattice
{
    const auto & b = j.contains("basis") ? j.at("basis") : j;
    std::vector<Point> basis;
    for (auto & v : b) {
        for (auto & x : v)
            if (x.is_number_float())
                throw Error{"lattice basis must be rational: got floating literal " + x.dump()};
        basis.push_back(Point::from_json(v));
    }
    return Lattice{std::move(basis)};
}

auto amc::lattice_contains(const Lattice & lat, const Point & p) -> bool
{
    if (p.dimension() != lat.dimension())
        throw Error{"dimension mismatch: lattice " + std::to_string(lat.dimension()) + " vs point " + std::to_string(p.dimension())};
    auto c = lat.coordinates(p);
    return std::all_of(c.coords().begin(), c.coords().end(), [] (const Rational & x) { return is_integer(x); });
}

auto amc::find_rotatability_witness(const Lattice & lat, double angle_lo, double angle_hi, int max_param)
    -> std::optional<RotatabilityWitness>
{
    const double pi = std::acos(-1.0);
    if (! (angle_lo >= 0 && angle_lo < angle_hi && angle_hi <= pi))
        throw Error{"invalid angle interval: need 0 <= lo < hi <= pi"};
    if (lat.dimension() != 2)
        throw Error{"rotatability is only searched for planar lattices"};

    auto rotations = rational_rotations_2d(max_param);
    std::vector<Matrix> candidates;
    for (std::size_t i = 1 ; i < rotations.size() ; ++i) {
        candidates.push_back(rotations[i].rotation());
        candidates.push_back(quarter_turn() * rotations[i].rotation());
    }

    for (auto & r : candidates) {
        auto angle = rotation_angle(r);
        if (! (angle.lo > angle_lo && angle.hi < angle_hi))
            continue;

        // the basis coordinates of R v_i form a rational matrix M; the least
        // positive lambda with lambda M integral is lcm(dens) / gcd(scaled nums)
        Integer den_lcm{1};
        std::vector<Rational> entries;
        for (auto & v : lat.basis()) {
            auto c = lat.coordinates(r * v);
            for (auto & x : c.coords()) {
                entries.push_back(x);
                mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den_mpz_t());
            }
        }
        Integer g{0};
        for (auto & x : entries) {
            Integer scaled = x.get_num() * (den_lcm / x.get_den());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled.get_mpz_t());
        }
        Rational lambda{den_lcm, g};
        lambda.canonicalize();

        bool ok = true;
        for (auto & v : lat.basis())
            if (! lattice_contains(lat, (r * v).scaled(lambda)))
                ok = false;
        if (! ok)
            throw Error{"internal: rotatability scale failed exact verification"};

        return RotatabilityWitness{SimilarityMap{Rational{1}, r, Point::zero(2)}, lambda, angle};
    }
    return std::nullopt;
}

namespace
{
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

    auto parse_coords(std::string_view text) -> Point
    {
        std::vector<Rational> c;
        for (auto part : split(text, ','))
            c.push_back(parse_rational(part));
        return Point{std::move(c)};
    }
}

auto amc::parse_point_list(std::string_view text) -> std::vector<Point>
{
    std::vector<Point> points;
    if (text.find(';') != std::string_view::npos) {
        for (auto part : split(text, ';'))
            points.push_back(parse_coords(part));
    }
    else {
        for (auto part : split(text, ','))
            points.push_back(Point{parse_rational(part)});
    }
    return points;
}

auto amc::parse_pattern(std::string_view text) -> PatternPair
{
    auto at = text.find('@');
    if (at == std::string_view::npos)
        throw Error{"pattern '" + std::string{text} + "' needs '@' followed by the distinguished point"};
    auto points = parse_point_list(text.substr(0, at));
    auto origin = parse_coords(text.substr(at + 1));
    auto it = std::find(points.begin(), points.end(), origin);
    if (it == points.end())
        throw Error{"distinguished point " + to_string(origin) + " is not in the pattern"};
    auto index = std::size_t(it - points.begin());
    return PatternPair{std::move(points), index};
}
