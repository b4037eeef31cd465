#pragma once

#include "jetsol/core/multi_index.hpp"
#include "jetsol/expr/expression.hpp"
#include "jetsol/jet/jet.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace jetsol {

/// Open interval (lo, hi) with rational endpoints.
struct Interval {
    Rational lo;
    Rational hi;
};

/// G_j(x, ξ) = 0 for j = 1..r: a system of order m in k unknowns over an open box X ⊂ R^n,
/// with any right-hand side already folded into G_j.
class PdeOperator {
public:
    PdeOperator(VariableContext ctx, int order, std::vector<Expr> equations, std::vector<Interval> box)
        : ctx_(std::move(ctx)), order_(order), equations_(std::move(equations)), box_(std::move(box))
    {
        if (ctx_.dim() == 0) throw std::invalid_argument("operator needs at least one space variable");
        if (ctx_.unknowns() == 0) throw std::invalid_argument("operator needs at least one unknown");
        if (order_ < 0) throw std::invalid_argument("operator order must be non-negative");
        if (equations_.empty()) throw std::invalid_argument("operator needs at least one equation");
        if (box_.size() != ctx_.dim()) throw std::invalid_argument("domain box must have one interval per axis");
        for (const auto& iv : box_)
            if (!(iv.lo < iv.hi)) throw std::invalid_argument("domain interval must satisfy lo < hi");
        for (const auto& g : equations_)
            for (const auto& v : free_variables(g)) {
                if (v.is_jet() && v.deriv.order() > order_)
                    throw std::invalid_argument("jet " + v.name + " exceeds the operator order " +
                                                std::to_string(order_));
                if (v.is_jet() && static_cast<std::size_t>(v.index) >= ctx_.unknowns())
                    throw std::invalid_argument("jet " + v.name + " refers to an undeclared unknown");
                if (v.is_space() && static_cast<std::size_t>(v.index) >= ctx_.dim())
                    throw std::invalid_argument("variable " + v.name + " is not a declared axis");
            }
        ctx_.max_jet_order = -1;
    }

    const VariableContext& context() const { return ctx_; }
    std::size_t dim() const { return ctx_.dim(); }
    std::size_t unknowns() const { return ctx_.unknowns(); }
    int order() const { return order_; }
    const std::vector<Expr>& equations() const { return equations_; }
    const std::vector<Interval>& box() const { return box_; }

    /// m* = k · C(n+m, n): number of jet arguments of the operator.
    long jet_arity() const { return static_cast<long>(unknowns()) * count_up_to(dim(), order_); }

    /// Highest |p| actually used by the equations; below order() flags a declared-order mismatch.
    int used_order() const
    {
        int used = -1;
        for (const auto& g : equations_)
            for (const auto& v : free_variables(g))
                if (v.is_jet()) used = std::max(used, v.deriv.order());
        return used;
    }
    bool arity_mismatch() const { return used_order() != order_; }

    std::vector<Variable> space_variables() const { return ctx_.space_variables(); }

    /// Jet coordinates of order ≤ order, unknown-major then graded-lex.
    std::vector<Variable> jet_variables(int order) const
    {
        std::vector<Variable> out;
        for (std::size_t u = 0; u < unknowns(); ++u)
            for (const auto& p : multi_indices_up_to(dim(), order)) out.push_back(ctx_.jet(u, p));
        return out;
    }

    /// Jet coordinates of order exactly `order`.
    std::vector<Variable> jet_variables_of_order(int order) const
    {
        std::vector<Variable> out;
        for (std::size_t u = 0; u < unknowns(); ++u)
            for (const auto& p : multi_indices_of_order(dim(), order)) out.push_back(ctx_.jet(u, p));
        return out;
    }

    bool contains(const Point& x) const
    {
        if (x.size() != dim()) return false;
        for (std::size_t i = 0; i < dim(); ++i)
            if (!(box_[i].lo < x[i] && x[i] < box_[i].hi)) return false;
        return true;
    }

private:
    VariableContext ctx_;
    int order_;
    std::vector<Expr> equations_;
    std::vector<Interval> box_;
};

/// F - f, rejecting right-hand sides that depend on jet coordinates.
inline Expr normalize_homogeneous(const Expr& F, const Expr& f)
{
    if (has_jet_variables(f)) throw std::invalid_argument("right-hand side must depend on space variables only");
    return F - f;
}

}  // namespace jetsol
