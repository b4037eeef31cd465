#pragma once

#include "jetsol/jet/jet.hpp"

#include <vector>

namespace jetsol {

/// P(x) = Σ_p ξ_p (x - a)^p / p! per unknown. Float jet entries enter as their exact binary
/// value, so D^p P(a) reproduces every entry bit for bit.
inline std::vector<Expr> taylor_from_jet(const Point& a, const Jet& jet, const VariableContext& ctx)
{
    if (a.size() != ctx.dim() || jet.dim() != ctx.dim()) throw std::invalid_argument("dimension mismatch");
    std::vector<Expr> out;
    for (std::size_t u = 0; u < jet.unknowns(); ++u) {
        std::vector<Expr> terms;
        for (const auto& p : jet.indices()) {
            Rational c = jet.at(u, p).to_rational();
            if (c == 0) continue;
            std::vector<Expr> factors{Expr(Rational(c / p.factorial()))};
            for (std::size_t i = 0; i < ctx.dim(); ++i)
                if (p[i] > 0) factors.push_back(pow(variable(ctx.space(i)) - Expr(a[i]), static_cast<long>(p[i])));
            terms.push_back(product(std::move(factors)));
        }
        out.push_back(sum(std::move(terms)));
    }
    return out;
}

}  // namespace jetsol
