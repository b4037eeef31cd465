#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>

namespace jetsol {

using Rational = mpq_class;
using Integer = mpz_class;

/// Arithmetic regime a value or a certificate was produced in.
enum class Arithmetic { exact, floating };

inline const char* to_string(Arithmetic a) { return a == Arithmetic::exact ? "exact" : "float"; }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Rational make_rational(long num, long den = 1)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Exact rational value of an IEEE double (every finite double is a dyadic rational).
inline Rational rational_from_double(double d)
{
    if (!std::isfinite(d)) throw std::domain_error("non-finite double has no rational value");
    Rational q(d);
    q.canonicalize();
    return q;
}

/// Text form "p" or "p/q".
inline std::string rational_string(const Rational& q) { return q.get_str(); }

/// Shortest decimal that round-trips to the same double.
inline std::string double_string(double d)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, res.ptr);
}

/// Parses "p", "p/q", "-p/q" or a decimal literal ("1.25", "-3e-2") into an exact rational.
inline Rational parse_rational(std::string_view text)
{
    auto fail = [&] { throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw std::domain_error("zero denominator in '" + std::string(text) + "'");
        Rational q = num / den;
        q.canonicalize();
        return q;
    }
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    long scale = 0;
    bool seen_digit = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
        digits += text[i];
        seen_digit = true;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
            digits += text[i];
            --scale;
            seen_digit = true;
        }
    }
    if (!seen_digit) fail();
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        long exponent = 0;
        auto [ptr, ec] = std::from_chars(text.data() + i + (i < text.size() && text[i] == '+' ? 1 : 0),
                                         text.data() + text.size(), exponent);
        if (ec != std::errc{} || ptr != text.data() + text.size()) fail();
        scale += exponent;
        i = text.size();
    }
    if (i != text.size()) fail();
    Integer mantissa(digits.empty() ? std::string("0") : digits, 10);
    Integer power;
    mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    Rational q = scale < 0 ? Rational(mantissa, power) : Rational(mantissa * power);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

/// q^e for integer e; throws on 0^negative.
inline Rational rational_pow(const Rational& base, long e)
{
    if (e == 0) return 1;
    if (base == 0) {
        if (e < 0) throw std::domain_error("division by zero");
        return 0;
    }
    unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), k);
    Rational q = e < 0 ? Rational(den, num) : Rational(num, den);
    q.canonicalize();
    return q;
}

/// Exact q-th root of a rational when one exists (root > 0).
inline bool exact_root(const Rational& value, unsigned long root, Rational& out)
{
    if (value < 0 && root % 2 == 0) return false;
    Integer n = abs(value.get_num());
    Integer d = value.get_den();
    Integer rn, rd;
    if (mpz_root(rn.get_mpz_t(), n.get_mpz_t(), root) == 0) return false;
    if (mpz_root(rd.get_mpz_t(), d.get_mpz_t(), root) == 0) return false;
    out = Rational(value < 0 ? Integer(-rn) : rn, rd);
    out.canonicalize();
    return true;
}

/// A scalar that is either an exact rational or an IEEE double.
class Number {
public:
    Number() : value_(Rational(0)) {}
    Number(Rational q) : value_(std::move(q)) {}
    Number(double d) : value_(d) {}
    Number(int i) : value_(Rational(i)) {}

    bool is_exact() const { return std::holds_alternative<Rational>(value_); }
    Arithmetic arithmetic() const { return is_exact() ? Arithmetic::exact : Arithmetic::floating; }

    const Rational& rational() const { return std::get<Rational>(value_); }

    double to_double() const
    {
        return is_exact() ? std::get<Rational>(value_).get_d() : std::get<double>(value_);
    }

    /// Exact value; for a double this is its dyadic rational.
    Rational to_rational() const
    {
        return is_exact() ? std::get<Rational>(value_) : rational_from_double(std::get<double>(value_));
    }

    bool is_zero() const { return is_exact() ? rational() == 0 : std::get<double>(value_) == 0.0; }

    std::string str() const
    {
        return is_exact() ? rational_string(rational()) : double_string(std::get<double>(value_));
    }

private:
    std::variant<Rational, double> value_;
};

/// Exact when both operands are exact, float otherwise.
inline Number operator+(const Number& a, const Number& b)
{
    if (a.is_exact() && b.is_exact()) return Number(Rational(a.rational() + b.rational()));
    return Number(a.to_double() + b.to_double());
}

inline Number operator-(const Number& a, const Number& b)
{
    if (a.is_exact() && b.is_exact()) return Number(Rational(a.rational() - b.rational()));
    return Number(a.to_double() - b.to_double());
}

inline Number operator*(const Number& a, const Number& b)
{
    if (a.is_exact() && b.is_exact()) return Number(Rational(a.rational() * b.rational()));
    return Number(a.to_double() * b.to_double());
}

}  // namespace jetsol
