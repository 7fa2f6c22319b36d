#include <amc/rational.hh>

#include <cmath>
#include <limits>

using namespace amc;

auto amc::parse_rational(std::string_view text) -> Rational
{
    std::string s{text};
    while (! s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.erase(s.begin());
    while (! s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.pop_back();

    if (s.empty())
        throw Error{"empty rational literal"};

    auto dot = s.find('.');
    if (dot != std::string::npos) {
        if (s.find('/') != std::string::npos)
            throw Error{"malformed rational literal '" + s + "'"};
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        auto frac_len = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw Error{"malformed rational literal '" + s + "'"};
        Integer num;
        if (num.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0)
            throw Error{"malformed rational literal '" + s + "'"};
        Rational q{num, pow_of(Integer{10}, frac_len)};
        q.canonicalize();
        return q;
    }

    Rational q;
    auto body = s[0] == '+' ? s.substr(1) : s;
    if (q.set_str(body, 10) != 0)
        throw Error{"malformed rational literal '" + s + "'"};
    if (q.get_den() == 0)
        throw Error{"zero denominator in '" + s + "'"};
    q.canonicalize();
    return q;
}

auto amc::to_string(const Rational & q) -> std::string
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

auto amc::floor_of(const Rational & q) -> Integer
{
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

auto amc::ceil_of(const Rational & q) -> Integer
{
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

auto amc::is_integer(const Rational & q) -> bool
{
    return q.get_den() == 1;
}

auto amc::abs_of(const Rational & q) -> Rational
{
    return q < 0 ? Rational{-q} : q;
}

auto amc::pow_of(const Integer & base, unsigned long exponent) -> Integer
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

auto amc::from_double(double x) -> Rational
{
    if (! std::isfinite(x))
        throw Error{"non-finite coordinate"};
    Rational q{x};
    q.canonicalize();
    return q;
}

auto amc::fits_int64(const Integer & z) -> bool
{
    static const Integer lo{std::to_string(std::numeric_limits<std::int64_t>::min())};
    static const Integer hi{std::to_string(std::numeric_limits<std::int64_t>::max())};
    return z >= lo && z <= hi;
}

auto amc::to_int64(const Integer & z) -> std::int64_t
{
    if (! fits_int64(z))
        throw Error{"integer " + z.get_str() + " exceeds 64 bits"};
    if (z.fits_slong_p())
        return z.get_si();
    return std::stoll(z.get_str());
}

auto amc::isqrt(const Integer & n) -> Integer
{
    if (n < 0)
        throw Error{"isqrt of negative integer"};
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

auto amc::gcd_of(const Rational & a, const Rational & b) -> Rational
{
    // gcd(p/q, r/s) = gcd(p s, r q) / (q s), then reduced
    Integer num, den = a.get_den() * b.get_den();
    Integer x = a.get_num() * b.get_den(), y = b.get_num() * a.get_den();
    mpz_gcd(num.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    Rational g{num, den};
    g.canonicalize();
    return g;
}

auto amc::lcm_of(const Rational & a, const Rational & b) -> Rational
{
    if (a == 0 || b == 0)
        return Rational{0};
    Rational g = gcd_of(a, b);
    return abs_of(a * b) / g;
}

auto amc::lcm_upto(unsigned n) -> Integer
{
    Integer l{1};
    for (unsigned i = 2 ; i <= n ; ++i)
        mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), i);
    return l;
}
