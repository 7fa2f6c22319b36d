#include <amc/colouring.hh>

#include <climits>
#include <cmath>

using namespace amc;

namespace
{
    const double pi = std::acos(-1.0);
    const long grid = 1L << 30;

    auto rounded(double x) -> Rational
    {
        Rational q{Integer{std::to_string(std::llround(x * double(grid)))}, Integer{std::to_string(grid)}};
        q.canonicalize();
        return q;
    }

    auto cross(const Point & a, const Point & b) -> Rational
    {
        return a[0] * b[1] - a[1] * b[0];
    }

    /// Exact proper rotation of the plane by approximately phi radians, from a
    /// rational tangent of the half angle.
    auto rotation_by(double phi) -> Matrix
    {
        Rational t = rounded(std::tan(phi / 2));
        Rational den = 1 + t * t;
        return rotation_2d((1 - t * t) / den, 2 * t / den);
    }

    /// A rational point on the unit sphere close to the unit vector w, by
    /// inverse stereographic projection from the pole farther from w.
    auto rational_unit_near(const std::vector<double> & w) -> Point
    {
        std::size_t d = w.size();
        double sign = w[0] > -0.5 ? 1.0 : -1.0;
        std::vector<Rational> y(d - 1);
        Rational norm2{0};
        for (std::size_t k = 1 ; k < d ; ++k) {
            y[k - 1] = rounded(w[k] / (1.0 + sign * w[0]));
            norm2 += y[k - 1] * y[k - 1];
        }
        std::vector<Rational> c(d);
        Rational den = 1 + norm2;
        c[0] = Rational{sign > 0 ? 1 : -1} * (1 - norm2) / den;
        for (std::size_t k = 1 ; k < d ; ++k)
            c[k] = 2 * y[k - 1] / den;
        return Point{std::move(c)};
    }

    /// Reflection in the hyperplane orthogonal to u - v: an exact isometry
    /// exchanging the rational unit vectors u and v.
    auto reflection_taking(const Point & u, const Point & v) -> Matrix
    {
        std::size_t d = u.dimension();
        if (u == v)
            return Matrix::identity(d);
        Point n = u - v;
        Rational nn = squared_norm(n);
        Matrix m = Matrix::identity(d);
        for (std::size_t r = 0 ; r < d ; ++r)
            for (std::size_t c = 0 ; c < d ; ++c)
                m(r, c) -= 2 * n[r] * n[c] / nn;
        return m;
    }

    auto unit(std::vector<double> v) -> std::vector<double>
    {
        double s = 0;
        for (double x : v)
            s += x * x;
        s = std::sqrt(s);
        for (double & x : v)
            x /= s;
        return v;
    }
}

ConePartition::ConePartition(std::size_t d, double alpha) :
    _dimension(d),
    _alpha(alpha),
    _bins(1)
{
    if (d < 1 || d > max_dimension)
        throw Error{"dimension " + std::to_string(d) + " outside 1.." + std::to_string(max_dimension)};
    if (! (alpha > 0 && alpha < pi / 2))
        throw Error{"cone angle must satisfy 0 < alpha < pi/2"};

    if (d == 2) {
        double sectors = std::ceil(2 * pi / alpha - 1e-9);
        if (sectors > double(max_cones))
            throw Error{"alpha too small: would need more than " + std::to_string(max_cones) + " cones"};
        _bins = std::max(3L, long(sectors));
        for (long k = 0 ; k < _bins ; ++k) {
            double theta = 2 * pi * double(k) / double(_bins);
            _fan.push_back(Point{Rational{Integer{std::to_string(std::llround(std::cos(theta) * double(grid)))}},
                    Rational{Integer{std::to_string(std::llround(std::sin(theta) * double(grid)))}}});
        }
    }
    else if (d >= 3) {
        // directions (1, u) with u in a cell of side 2/m are pairwise within
        // angle |u - u'| <= 2 sqrt(d-1) / m
        double m = std::ceil(2 * std::sqrt(double(d - 1)) / alpha - 1e-12);
        double count = 2.0 * double(d) * std::pow(m, double(d - 1));
        if (count > double(max_cones))
            throw Error{"alpha too small to realise with at most " + std::to_string(max_cones) + " cones"};
        _bins = long(m);
    }
}

auto ConePartition::cone_count() const -> long
{
    if (_dimension == 1)
        return 2;
    if (_dimension == 2)
        return _bins;
    long c = 2 * long(_dimension);
    for (std::size_t k = 1 ; k < _dimension ; ++k)
        c *= _bins;
    return c;
}

auto ConePartition::cone_of(const Point & p) const -> long
{
    if (p.dimension() != _dimension)
        throw Error{"dimension mismatch: cone partition " + std::to_string(_dimension) + " vs point " + std::to_string(p.dimension())};

    if (_dimension == 1)
        return p[0] >= 0 ? 0 : 1;

    bool zero = std::all_of(p.coords().begin(), p.coords().end(), [] (const Rational & x) { return x == 0; });
    if (zero)
        return 0;

    if (_dimension == 2) {
        auto inside = [&] (long k) {
            return cross(_fan[k], p) >= 0 && cross(_fan[(k + 1) % _bins], p) < 0;
        };
        double theta = std::atan2(p[1].get_d(), p[0].get_d());
        if (theta < 0)
            theta += 2 * pi;
        long guess = long(std::floor(theta * double(_bins) / (2 * pi)));
        for (long delta : {0L, -1L, 1L, -2L, 2L}) {
            long k = ((guess + delta) % _bins + _bins) % _bins;
            if (inside(k))
                return k;
        }
        for (long k = 0 ; k < _bins ; ++k)
            if (inside(k))
                return k;
        throw Error{"internal: point " + to_string(p) + " lies in no sector"};
    }

    std::size_t face = 0;
    for (std::size_t k = 1 ; k < _dimension ; ++k)
        if (abs_of(p[k]) > abs_of(p[face]))
            face = k;
    long sign = p[face] > 0 ? 0 : 1;
    Rational top = abs_of(p[face]);
    long index = long(face) * 2 + sign;
    for (std::size_t k = 0 ; k < _dimension ; ++k) {
        if (k == face)
            continue;
        Rational u = p[k] / top;
        long bin = floor_of((u + 1) * _bins / 2).get_si();
        bin = std::clamp(bin, 0L, _bins - 1);
        index = index * _bins + bin;
    }
    return index;
}

auto ConePartition::frame(long index) const -> ConeFrame
{
    if (index < 0 || index >= cone_count())
        throw Error{"cone index out of range"};
    std::size_t d = _dimension;

    if (d == 1) {
        Rational s = index == 0 ? 1 : -1;
        return ConeFrame{{Point{s}}, Point{s}, Matrix{1, {s}}};
    }

    if (d == 2) {
        auto & a = _fan[index];
        auto & b = _fan[(index + 1) % _bins];
        double mid = 2 * pi * (double(index) + 0.5) / double(_bins);
        return ConeFrame{{a, b}, a + b, rotation_by(pi / 4 - mid)};
    }

    // decode face and bins from the mixed-radix index
    std::vector<long> bins(d - 1);
    long rest = index;
    for (std::size_t k = d - 1 ; k-- > 0 ; ) {
        bins[k] = rest % _bins;
        rest /= _bins;
    }
    long sign = rest % 2;
    std::size_t face = std::size_t(rest / 2);

    Rational s = sign == 0 ? 1 : -1;
    std::vector<double> axis_d(d);
    std::vector<Rational> axis(d);
    std::vector<std::pair<Rational, Rational>> ranges;
    std::size_t b = 0;
    for (std::size_t k = 0 ; k < d ; ++k) {
        if (k == face) {
            axis[k] = s;
            continue;
        }
        Rational step{2, _bins};
        step.canonicalize();
        Rational lo = -1 + step * bins[b];
        Rational hi = lo + step;
        ranges.emplace_back(lo, hi);
        axis[k] = (lo + hi) / 2;
        ++b;
    }
    for (std::size_t k = 0 ; k < d ; ++k)
        axis_d[k] = axis[k].get_d();

    std::vector<Point> generators;
    for (unsigned mask = 0 ; mask < (1u << (d - 1)) ; ++mask) {
        std::vector<Rational> g(d);
        std::size_t r = 0;
        for (std::size_t k = 0 ; k < d ; ++k) {
            if (k == face) {
                g[k] = s;
                continue;
            }
            g[k] = (mask >> r) & 1 ? ranges[r].second : ranges[r].first;
            ++r;
        }
        generators.emplace_back(std::move(g));
    }

    auto u = rational_unit_near(unit(axis_d));
    auto v = rational_unit_near(unit(std::vector<double>(d, 1.0)));
    return ConeFrame{std::move(generators), Point{std::move(axis)}, reflection_taking(u, v)};
}

auto amc::build_cone_partition(std::size_t d, double alpha) -> std::vector<ConeFrame>
{
    ConePartition partition{d, alpha};
    if (partition.cone_count() > 200'000)
        throw Error{"partition has " + std::to_string(partition.cone_count()) + " cones; too many to list"};
    std::vector<ConeFrame> frames;
    for (long i = 0 ; i < partition.cone_count() ; ++i)
        frames.push_back(partition.frame(i));
    return frames;
}

ConeShellColouring::ConeShellColouring(std::size_t d, Integer K, Integer L, double alpha) :
    _dimension(d),
    _K(std::move(K)),
    _L(std::move(L)),
    _alpha(alpha),
    _partition(std::make_shared<ConePartition>(d, alpha))
{
    if (_K < 2 || _L < 1)
        throw Error{"cone-shell colouring needs K >= 2 and L >= 1"};
    if (! _L.fits_sint_p() || (2 * _L + 1) * _partition->cone_count() > INT_MAX)
        throw Error{"cone-shell palette too large"};
}

auto ConeShellColouring::for_pattern(const std::vector<Point> & pattern, std::optional<double> alpha)
    -> std::shared_ptr<ConeShellColouring>
{
    if (pattern.size() < 2)
        throw Error{"cone-shell colouring needs at least two pattern points"};
    std::size_t d = pattern.front().dimension();
    Rational lo, hi;
    bool first = true;
    for (std::size_t i = 0 ; i < pattern.size() ; ++i)
        for (std::size_t j = i + 1 ; j < pattern.size() ; ++j) {
            if (pattern[j].dimension() != d)
                throw Error{"pattern mixes dimensions"};
            Rational q = squared_distance(pattern[i], pattern[j]);
            if (q == 0)
                throw Error{"pattern points must be distinct"};
            if (first || q < lo)
                lo = q;
            if (first || q > hi)
                hi = q;
            first = false;
        }

    // (K - 1)^2 > 4 d r^2 with r^2 = hi / lo
    Rational bound = 4 * Rational{long(d)} * hi / lo;
    Integer K = isqrt(floor_of(bound)) + 2;
    while (K > 2 && Rational{(K - 2) * (K - 2)} > bound)
        --K;
    while (! (Rational{(K - 1) * (K - 1)} > bound))
        ++K;

    // L^2 d >= K^4
    Integer K4 = K * K * K * K;
    Integer L = isqrt(K4 / long(d));
    while (L > 1 && (L - 1) * (L - 1) * long(d) >= K4)
        --L;
    while (L * L * long(d) < K4)
        ++L;

    double a;
    if (alpha)
        a = *alpha;
    else {
        double s = Integer{K - 1}.get_d() / (2.0 * L.get_d() * K.get_d());
        a = 0.999 * std::min(std::asin(s), 0.9 * std::asin(1.0 / std::sqrt(double(d))));
    }
    auto c = std::make_shared<ConeShellColouring>(d, K, L, a);
    c->_pattern = pattern;
    return c;
}

auto ConeShellColouring::isometry(long cone) const -> Matrix
{
    std::lock_guard<std::mutex> guard(_frames_mutex);
    auto it = _frames.find(cone);
    if (it == _frames.end())
        it = _frames.emplace(cone, _partition->frame(cone).isometry).first;
    return it->second;
}

auto ConeShellColouring::reference_norm(const Point & p) const -> Rational
{
    return l1_norm(isometry(_partition->cone_of(p)) * p);
}

auto ConeShellColouring::shell_colour(const Rational & norm) const -> int
{
    if (norm < _L)
        return 0;
    Integer f = floor_of(norm / _L);
    long i = 0;
    Integer power = _K;
    while (power <= f) {
        power *= _K;
        ++i;
    }
    Integer ki = pow_of(_K, i);
    Integer j = floor_of((norm - _L * ki) / (ki * (_K - 1))) + 1;
    int jj = int(j.get_si());
    return i % 2 == 0 ? jj : int(_L.get_si()) + jj;
}

auto ConeShellColouring::colour(const Point & p) const -> int
{
    check_dimension(p);
    long cone = _partition->cone_of(p);
    int per_cone = int(2 * _L.get_si() + 1);
    return int(cone) * per_cone + shell_colour(l1_norm(isometry(cone) * p));
}

auto ConeShellColouring::palette_size() const -> int
{
    return int((2 * _L.get_si() + 1) * _partition->cone_count());
}

auto ConeShellColouring::to_json() const -> nlohmann::json
{
    return {{"kind", "cone"}, {"dimension", _dimension}, {"K", _K.get_si()}, {"L", _L.get_si()}, {"alpha", _alpha}};
}
