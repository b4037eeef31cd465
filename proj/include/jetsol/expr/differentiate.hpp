#pragma once

#include "jetsol/expr/expression.hpp"

#include <unordered_map>

namespace jetsol {

/// Partial derivative ∂e/∂v, all other variables held independent.
inline Expr differentiate(const Expr& e, const Variable& v)
{
    std::unordered_map<const ExprNode*, Expr> memo;
    auto rec = [&](const Expr& x, auto&& self) -> Expr {
        if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
        Expr out;
        switch (x.kind()) {
        case ExprKind::constant: out = Expr(0); break;
        case ExprKind::variable: out = Expr(x.variable() == v ? 1 : 0); break;
        case ExprKind::bump: {
            out = Expr(0);
            if (v.is_space()) {
                const auto& axes = x.bump().axes;
                for (std::size_t i = 0; i < axes.size(); ++i)
                    if (axes[i] == v) out = bump(x.bump_ptr(), x.bump_derivative().raised(i));
            }
            break;
        }
        case ExprKind::sum: {
            std::vector<Expr> terms;
            for (const auto& a : x.args()) {
                Expr d = self(a, self);
                if (!d.is_zero()) terms.push_back(std::move(d));
            }
            out = sum(std::move(terms));
            break;
        }
        case ExprKind::product: {
            const auto& f = x.args();
            std::vector<Expr> terms;
            for (std::size_t i = 0; i < f.size(); ++i) {
                Expr d = self(f[i], self);
                if (d.is_zero()) continue;
                std::vector<Expr> factors;
                factors.reserve(f.size());
                for (std::size_t j = 0; j < f.size(); ++j) factors.push_back(j == i ? d : f[j]);
                terms.push_back(product(std::move(factors)));
            }
            out = sum(std::move(terms));
            break;
        }
        case ExprKind::power: {
            const Expr& base = x.args()[0];
            Expr d = self(base, self);
            if (d.is_zero()) {
                out = Expr(0);
                break;
            }
            const Rational& k = x.exponent();
            out = product({Expr(k), power(base, k - 1), d});
            break;
        }
        case ExprKind::unary: {
            const Expr& a = x.args()[0];
            Expr d = self(a, self);
            if (d.is_zero()) {
                out = Expr(0);
                break;
            }
            Expr outer;
            switch (x.function()) {
            case UnaryFn::sin: outer = cos(a); break;
            case UnaryFn::cos: outer = -sin(a); break;
            case UnaryFn::exp: outer = x; break;
            case UnaryFn::log: outer = power(a, Rational(-1)); break;
            case UnaryFn::sqrt: outer = product({Expr(Rational(1, 2)), power(x, Rational(-1))}); break;
            case UnaryFn::tanh: outer = Expr(1) - power(x, Rational(2)); break;
            }
            out = product({outer, d});
            break;
        }
        }
        memo.emplace(x.get(), out);
        return out;
    };
    return rec(e, rec);
}

/// D^p e with respect to the given space axes: ∂^{p_1}/∂x_1^{p_1} ... applied in axis order.
inline Expr differentiate(const Expr& e, const std::vector<Variable>& axes, const MultiIndex& p)
{
    Expr out = e;
    for (std::size_t i = 0; i < p.dim(); ++i)
        for (int k = 0; k < p[i]; ++k) out = differentiate(out, axes.at(i));
    return out;
}

/// Memoized family of space derivatives D^p e; D^{p+e_i} is derived from D^p.
class DerivativeTable {
public:
    DerivativeTable(Expr e, std::vector<Variable> axes) : axes_(std::move(axes))
    {
        table_.emplace(MultiIndex(axes_.size()), std::move(e));
    }

    const Expr& get(const MultiIndex& p)
    {
        if (auto it = table_.find(p); it != table_.end()) return it->second;
        // Lower the last nonzero axis so the derivation path is deterministic.
        std::size_t axis = p.dim();
        while (axis > 0 && p[axis - 1] == 0) --axis;
        --axis;
        MultiIndex lower = p.raised(axis, -1);
        Expr d = differentiate(get(lower), axes_[axis]);
        return table_.emplace(p, std::move(d)).first->second;
    }

private:
    std::vector<Variable> axes_;
    std::map<MultiIndex, Expr> table_;
};

}  // namespace jetsol
