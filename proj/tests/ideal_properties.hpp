#pragma once

#include "jetsol/ideal/vanishing.hpp"

#include <string>
#include <vector>

namespace jetsol::testing {

/// Violations of a truncated ideal property; empty means it held everywhere checked.
using Violations = std::vector<std::string>;

inline std::string where(const VanishingEntry& e)
{
    return point_string(e.point) + " order " + std::to_string(e.order);
}

inline std::string witness_string(const std::optional<std::size_t>& w) { return w ? std::to_string(*w) : "none"; }

/// Z' ⊆ Z: every entry at Z' passes with a witness no later than at Z.
inline Violations check_monotonicity(const FunctionSequence& w, const SingularityComplement& z, const std::vector<int>& orders,
                                     const VanishingOptions& opts = {})
{
    Violations out;
    SingularityComplement sub{z.box, {}};
    for (std::size_t i = 0; i < z.points.size(); i += 2) sub.points.push_back(z.points[i]);
    auto full = check_vanishing(w, z, orders, opts);
    auto part = check_vanishing(w, sub, orders, opts);
    for (const auto& e : part.entries) {
        for (const auto& f : full.entries) {
            if (f.point != e.point || f.order != e.order || !f.witness) continue;
            if (!e.witness || *e.witness > *f.witness)
                out.push_back("monotonicity at " + where(e) + ": " + witness_string(e.witness) + " vs " + witness_string(f.witness));
        }
    }
    return out;
}

/// Witness ν at (x, l) implies D^q w has witness ≤ ν at (x, l - |q|).
inline Violations check_derivation_invariance(const FunctionSequence& w, const SingularityComplement& z, int l,
                                              const VanishingOptions& opts = {})
{
    Violations out;
    auto base = check_vanishing(w, z, {l}, opts);
    for (const auto& q : multi_indices_up_to(w.context.dim(), l)) {
        if (q.is_zero()) continue;
        auto dq = check_vanishing(differentiate_sequence(w, q), z, {l - q.order()}, opts);
        for (std::size_t i = 0; i < base.entries.size(); ++i) {
            const auto& b = base.entries[i];
            const auto& d = dq.entries[i];
            if (!b.witness) continue;
            if (!d.witness || *d.witness > *b.witness)
                out.push_back("derivation q=" + q.str() + " at " + where(b) + ": " + witness_string(d.witness) + " vs " +
                              witness_string(b.witness));
        }
    }
    return out;
}

/// (a_ν w_ν) has a witness ≤ that of w at every (x, l) where w passes.
inline Violations check_absorption(const FunctionSequence& w, const std::vector<Expr>& a, const SingularityComplement& z,
                                   const std::vector<int>& orders, const VanishingOptions& opts = {})
{
    Violations out;
    auto base = check_vanishing(w, z, orders, opts);
    auto prod = check_vanishing(multiply_sequence(a, w), z, orders, opts);
    for (std::size_t i = 0; i < base.entries.size(); ++i) {
        const auto& b = base.entries[i];
        const auto& p = prod.entries[i];
        if (!b.witness) continue;
        if (!p.witness || *p.witness > *b.witness || !p.exact)
            out.push_back("absorption at " + where(b) + ": " + witness_string(p.witness) + " vs " + witness_string(b.witness));
    }
    return out;
}

/// Smooth factor sequences a_ν with rational-closed terms.
inline std::vector<Expr> absorption_factors(const VariableContext& ctx, std::size_t length, int variant)
{
    std::vector<Expr> out;
    Expr x = variable(ctx.space(0));
    Expr y = ctx.dim() > 1 ? variable(ctx.space(1)) : Expr(Rational(1, 3));
    for (std::size_t nu = 0; nu < length; ++nu) {
        Rational c = make_rational(static_cast<long>(nu) + 1, 7);
        switch (variant % 4) {
        case 0: out.push_back(Expr(c) + pow(x, static_cast<long>(nu))); break;
        case 1: out.push_back(x * y - Expr(c)); break;
        case 2: out.push_back(pow(x - Expr(c), 3) + Expr(2)); break;
        default: out.push_back(Expr(Rational(static_cast<long>(nu) * 5 - 3))); break;
        }
    }
    return out;
}

}  // namespace jetsol::testing
