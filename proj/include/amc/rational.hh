#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace amc
{
    /// Exact rational number. GMP keeps every value in lowest terms with a
    /// positive denominator after each arithmetic operation.
    using Rational = mpq_class;
    using Integer = mpz_class;

    class Error : public std::runtime_error
    {
        public:
            using std::runtime_error::runtime_error;
    };

    /// A point was handed to a colouring outside its declared domain.
    class DomainError : public Error
    {
        public:
            using Error::Error;
    };

    /// Parses "7", "-3/4" or "0.25" (decimal literals are read exactly).
    auto parse_rational(std::string_view text) -> Rational;

    /// Canonical "num/den" form; integers print without a denominator.
    auto to_string(const Rational & q) -> std::string;

    auto floor_of(const Rational & q) -> Integer;
    auto ceil_of(const Rational & q) -> Integer;
    auto is_integer(const Rational & q) -> bool;
    auto abs_of(const Rational & q) -> Rational;
    auto pow_of(const Integer & base, unsigned long exponent) -> Integer;

    /// Exact conversion of a finite double (every double is a dyadic rational).
    auto from_double(double x) -> Rational;

    auto to_int64(const Integer & z) -> std::int64_t;
    auto fits_int64(const Integer & z) -> bool;

    /// Largest integer r with r*r <= n, n >= 0.
    auto isqrt(const Integer & n) -> Integer;

    /// gcd and lcm of rationals: the generator of the Z-module they span.
    auto gcd_of(const Rational & a, const Rational & b) -> Rational;
    auto lcm_of(const Rational & a, const Rational & b) -> Rational;

    auto lcm_upto(unsigned n) -> Integer;
}
