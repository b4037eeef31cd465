#pragma once

#include "jetsol/expr/expression.hpp"

#include <string>
#include <vector>

namespace jetsol {

std::string to_string(const Expr& e);

namespace detail {

inline bool is_negative_term(const Expr& t)
{
    if (t.is_constant()) return t.value() < 0;
    return t.is(ExprKind::product) && t.args().front().is_constant() && t.args().front().value() < 0;
}

/// Text of e for use as a factor: sums are parenthesized.
inline std::string factor_string(const Expr& e)
{
    std::string s = to_string(e);
    if (e.is(ExprKind::sum) || e.is(ExprKind::product) || (e.is_constant() && (e.value() < 0 || !is_integer(e.value()))))
        return "(" + s + ")";
    return s;
}

inline std::string power_base_string(const Expr& base)
{
    bool atomic = base.is(ExprKind::variable) || base.is(ExprKind::unary) || base.is(ExprKind::bump) ||
                  (base.is_constant() && base.value() >= 0 && is_integer(base.value()));
    std::string s = to_string(base);
    return atomic ? s : "(" + s + ")";
}

inline std::string positive_power_string(const Expr& base, const Rational& e)
{
    if (e == 1) return factor_string(base);
    std::string ex = is_integer(e) && e > 0 ? rational_string(e) : "(" + rational_string(e) + ")";
    return power_base_string(base) + "^" + ex;
}

inline std::string product_string(const Rational& coefficient, const std::vector<Expr>& factors)
{
    std::vector<std::string> num;
    std::vector<std::string> den;
    Rational c = abs(coefficient);
    if (c.get_num() != 1) num.push_back(c.get_num().get_str());
    if (c.get_den() != 1) den.push_back(c.get_den().get_str());
    for (const auto& f : factors) {
        if (f.is(ExprKind::power) && f.exponent() < 0)
            den.push_back(positive_power_string(f.args()[0], -f.exponent()));
        else if (f.is(ExprKind::power))
            num.push_back(positive_power_string(f.args()[0], f.exponent()));
        else
            num.push_back(factor_string(f));
    }
    std::string s = coefficient < 0 ? "-" : "";
    if (num.empty()) s += "1";
    for (std::size_t i = 0; i < num.size(); ++i) s += (i ? "*" : "") + num[i];
    for (const auto& d : den) s += "/" + d;
    return s;
}

}  // namespace detail

/// Prints in the parser's syntax; bump-free expressions round-trip through parse_expression.
inline std::string to_string(const Expr& e)
{
    switch (e.kind()) {
    case ExprKind::constant: return rational_string(e.value());
    case ExprKind::variable: return e.variable().name;
    case ExprKind::bump: {
        const BumpShape& b = e.bump();
        std::string s = "bump[c=(";
        for (std::size_t i = 0; i < b.center.size(); ++i) s += (i ? "," : "") + rational_string(b.center[i]);
        s += ");r_in=" + rational_string(b.r_in) + ";r_out=" + rational_string(b.r_out);
        if (!e.bump_derivative().is_zero()) s += ";d=" + e.bump_derivative().str();
        return s + "]";
    }
    case ExprKind::unary: return std::string(unary_name(e.function())) + "(" + to_string(e.args()[0]) + ")";
    case ExprKind::power:
        if (e.exponent() < 0) return detail::product_string(Rational(1), {e});
        return detail::positive_power_string(e.args()[0], e.exponent());
    case ExprKind::product: {
        const auto& a = e.args();
        if (a.front().is_constant())
            return detail::product_string(a.front().value(), std::vector<Expr>(a.begin() + 1, a.end()));
        return detail::product_string(Rational(1), a);
    }
    case ExprKind::sum: {
        std::vector<Expr> terms;
        const auto& a = e.args();
        // Constant term last.
        for (const auto& t : a)
            if (!t.is_constant()) terms.push_back(t);
        for (const auto& t : a)
            if (t.is_constant()) terms.push_back(t);
        std::string s;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const Expr& t = terms[i];
            if (i == 0) {
                s += to_string(t);
                continue;
            }
            if (detail::is_negative_term(t))
                s += " - " + to_string(product({Expr(-1), t}));
            else
                s += " + " + to_string(t);
        }
        return s;
    }
    }
    return "?";
}

}  // namespace jetsol
