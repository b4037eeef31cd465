#pragma once

#include "jetsol/expr/differentiate.hpp"
#include "jetsol/expr/expression.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace jetsol {

/// Raised for division by zero, logarithms of non-positive values and other domain faults.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using FloatAssignment = std::map<Variable, double>;
using ExactAssignment = std::map<Variable, Rational>;

/// Closed-form transition profile of a bump, in its own axes.
inline Expr bump_transition_expression(const BumpShape& shape)
{
    std::vector<Expr> squares;
    for (std::size_t i = 0; i < shape.axes.size(); ++i)
        squares.push_back(power(variable(shape.axes[i]) - Expr(shape.center[i]), Rational(2)));
    Expr t = sum(std::move(squares));
    Expr outer = Expr(Rational(shape.r_out * shape.r_out)) - t;
    Expr inner = t - Expr(Rational(shape.r_in * shape.r_in));
    // σ(o) / (σ(o) + σ(i)) = (1 - tanh(h/2)) / 2 with h = 1/o - 1/i; every derivative is then a
    // polynomial in a bounded tanh, so small bumps do not underflow both exponentials.
    Expr h = power(outer, Rational(-1)) - power(inner, Rational(-1));
    return Expr(Rational(1, 2)) - Expr(Rational(1, 2)) * tanh(Expr(Rational(1, 2)) * h);
}

/// D^p of the transition profile, cached on the shape.
inline Expr bump_transition_derivative(const BumpShape& shape, const MultiIndex& p)
{
    std::lock_guard lock(shape.cache_mutex);
    auto& cache = shape.transition_cache;
    if (cache.empty()) cache.emplace(MultiIndex(shape.axes.size()), bump_transition_expression(shape));
    if (auto it = cache.find(p); it != cache.end()) return it->second;
    // Walk up from the nearest cached lower index.
    MultiIndex cur(shape.axes.size());
    Expr e = cache.at(cur);
    for (std::size_t i = 0; i < p.dim(); ++i) {
        for (int k = 0; k < p[i]; ++k) {
            cur = cur.raised(i);
            if (auto it = cache.find(cur); it != cache.end()) {
                e = it->second;
                continue;
            }
            e = differentiate(e, shape.axes[i]);
            cache.emplace(cur, e);
        }
    }
    return e;
}

namespace detail {

enum class BumpZone { plateau, transition, exterior };

inline BumpZone bump_zone(const BumpShape& shape, const Rational& t)
{
    if (t <= shape.r_in * shape.r_in) return BumpZone::plateau;
    if (t >= shape.r_out * shape.r_out) return BumpZone::exterior;
    return BumpZone::transition;
}

inline BumpZone bump_zone(const BumpShape& shape, double t)
{
    if (t <= Rational(shape.r_in * shape.r_in).get_d()) return BumpZone::plateau;
    if (t >= Rational(shape.r_out * shape.r_out).get_d()) return BumpZone::exterior;
    return BumpZone::transition;
}

inline double checked(double v, const char* what)
{
    if (!std::isfinite(v)) throw EvaluationError(std::string("non-finite result in ") + what);
    return v;
}

}  // namespace detail

/// IEEE double evaluation. Throws EvaluationError instead of producing NaN or infinity.
inline double evaluate_float(const Expr& e, const FloatAssignment& at)
{
    std::unordered_map<const ExprNode*, double> memo;
    auto rec = [&](const Expr& x, auto&& self) -> double {
        if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
        double out = 0.0;
        switch (x.kind()) {
        case ExprKind::constant: out = x.value().get_d(); break;
        case ExprKind::variable: {
            auto it = at.find(x.variable());
            if (it == at.end()) throw EvaluationError("unassigned variable '" + x.variable().name + "'");
            out = it->second;
            break;
        }
        case ExprKind::bump: {
            const BumpShape& s = x.bump();
            FloatAssignment local;
            double t = 0.0;
            for (std::size_t i = 0; i < s.axes.size(); ++i) {
                auto it = at.find(s.axes[i]);
                if (it == at.end()) throw EvaluationError("unassigned variable '" + s.axes[i].name + "'");
                double d = it->second - s.center[i].get_d();
                t += d * d;
                local.emplace(s.axes[i], it->second);
            }
            switch (detail::bump_zone(s, t)) {
            case detail::BumpZone::plateau: out = x.bump_derivative().is_zero() ? 1.0 : 0.0; break;
            case detail::BumpZone::exterior: out = 0.0; break;
            case detail::BumpZone::transition:
                out = evaluate_float(bump_transition_derivative(s, x.bump_derivative()), local);
                break;
            }
            break;
        }
        case ExprKind::sum:
            for (const auto& a : x.args()) out += self(a, self);
            break;
        case ExprKind::product:
            out = 1.0;
            for (const auto& a : x.args()) out *= self(a, self);
            break;
        case ExprKind::power: {
            double b = self(x.args()[0], self);
            const Rational& k = x.exponent();
            if (b == 0.0 && k < 0) throw EvaluationError("division by zero");
            if (is_integer(k))
                out = std::pow(b, k.get_d());
            else {
                if (b < 0.0) throw EvaluationError("fractional power of a negative value");
                out = std::pow(b, k.get_d());
            }
            out = detail::checked(out, "power");
            break;
        }
        case ExprKind::unary: {
            double a = self(x.args()[0], self);
            switch (x.function()) {
            case UnaryFn::sin: out = std::sin(a); break;
            case UnaryFn::tanh: out = std::tanh(a); break;
            case UnaryFn::cos: out = std::cos(a); break;
            case UnaryFn::exp: out = detail::checked(std::exp(a), "exp"); break;
            case UnaryFn::log:
                if (a <= 0.0) throw EvaluationError("log of a non-positive value");
                out = std::log(a);
                break;
            case UnaryFn::sqrt:
                if (a < 0.0) throw EvaluationError("sqrt of a negative value");
                out = std::sqrt(a);
                break;
            }
            break;
        }
        }
        memo.emplace(x.get(), out);
        return out;
    };
    return rec(e, rec);
}

/// Exact rational evaluation. Returns nullopt when a transcendental or irrational step is met
/// (including a bump evaluated inside its transition shell); throws EvaluationError on
/// division by zero.
inline std::optional<Rational> evaluate_exact(const Expr& e, const ExactAssignment& at)
{
    struct Unavailable {};
    std::unordered_map<const ExprNode*, Rational> memo;
    auto rec = [&](const Expr& x, auto&& self) -> Rational {
        if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
        Rational out = 0;
        switch (x.kind()) {
        case ExprKind::constant: out = x.value(); break;
        case ExprKind::variable: {
            auto it = at.find(x.variable());
            if (it == at.end()) throw EvaluationError("unassigned variable '" + x.variable().name + "'");
            out = it->second;
            break;
        }
        case ExprKind::bump: {
            const BumpShape& s = x.bump();
            Rational t = 0;
            for (std::size_t i = 0; i < s.axes.size(); ++i) {
                auto it = at.find(s.axes[i]);
                if (it == at.end()) throw EvaluationError("unassigned variable '" + s.axes[i].name + "'");
                Rational d = it->second - s.center[i];
                t += d * d;
            }
            switch (detail::bump_zone(s, t)) {
            case detail::BumpZone::plateau: out = x.bump_derivative().is_zero() ? 1 : 0; break;
            case detail::BumpZone::exterior: out = 0; break;
            case detail::BumpZone::transition: throw Unavailable{};
            }
            break;
        }
        case ExprKind::sum:
            for (const auto& a : x.args()) out += self(a, self);
            break;
        case ExprKind::product:
            out = 1;
            for (const auto& a : x.args()) {
                out *= self(a, self);
                if (out == 0) break;
            }
            break;
        case ExprKind::power: {
            Rational b = self(x.args()[0], self);
            const Rational& k = x.exponent();
            if (b == 0 && k < 0) throw EvaluationError("division by zero");
            if (is_integer(k)) {
                out = rational_pow(b, k.get_num().get_si());
            } else {
                Rational root;
                if (b < 0 || !exact_root(b, k.get_den().get_ui(), root)) throw Unavailable{};
                out = rational_pow(root, k.get_num().get_si());
            }
            break;
        }
        case ExprKind::unary: {
            Rational a = self(x.args()[0], self);
            switch (x.function()) {
            case UnaryFn::sin:
            case UnaryFn::tanh:
                if (a != 0) throw Unavailable{};
                out = 0;
                break;
            case UnaryFn::cos:
            case UnaryFn::exp:
                if (a != 0) throw Unavailable{};
                out = 1;
                break;
            case UnaryFn::log:
                if (a <= 0) throw EvaluationError("log of a non-positive value");
                if (a != 1) throw Unavailable{};
                out = 0;
                break;
            case UnaryFn::sqrt:
                if (a < 0) throw EvaluationError("sqrt of a negative value");
                if (!exact_root(a, 2, out)) throw Unavailable{};
                break;
            }
            break;
        }
        }
        out.canonicalize();
        memo.emplace(x.get(), out);
        return out;
    };
    try {
        return rec(e, rec);
    } catch (const Unavailable&) {
        return std::nullopt;
    }
}

inline FloatAssignment to_float_assignment(const ExactAssignment& at)
{
    FloatAssignment out;
    for (const auto& [v, q] : at) out.emplace(v, q.get_d());
    return out;
}

/// Exact when possible, otherwise IEEE double.
inline Number evaluate(const Expr& e, const ExactAssignment& at)
{
    if (auto q = evaluate_exact(e, at)) return Number(*q);
    return Number(evaluate_float(e, to_float_assignment(at)));
}

/// Evaluates with mixed inputs: exact when every input is exact and the tree permits it.
inline Number evaluate(const Expr& e, const std::map<Variable, Number>& at)
{
    bool all_exact = true;
    for (const auto& [v, n] : at) all_exact = all_exact && n.is_exact();
    if (all_exact) {
        ExactAssignment ex;
        for (const auto& [v, n] : at) ex.emplace(v, n.rational());
        return evaluate(e, ex);
    }
    FloatAssignment fl;
    for (const auto& [v, n] : at) fl.emplace(v, n.to_double());
    return Number(evaluate_float(e, fl));
}

}  // namespace jetsol
