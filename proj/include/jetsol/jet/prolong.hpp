#pragma once

#include "jetsol/expr/differentiate.hpp"
#include "jetsol/expr/evaluate.hpp"
#include "jetsol/jet/jet.hpp"
#include "jetsol/jet/pde_operator.hpp"

#include <map>
#include <utility>
#include <vector>

namespace jetsol {

/// D_i e = ∂e/∂x_i + Σ ξ_{u,q+e_i} · ∂e/∂ξ_{u,q}.
inline Expr total_derivative(const Expr& e, std::size_t axis, const VariableContext& ctx)
{
    if (axis >= ctx.dim()) throw std::out_of_range("axis out of range");
    std::vector<Expr> terms{differentiate(e, ctx.space(axis))};
    for (const auto& v : free_variables(e)) {
        if (!v.is_jet()) continue;
        Expr partial = differentiate(e, v);
        if (partial.is_zero()) continue;
        terms.push_back(variable(ctx.jet(v.index, v.deriv.raised(axis))) * partial);
    }
    return sum(std::move(terms));
}

/// Iterated total derivative along p, lowest axis first.
inline Expr total_derivative(const Expr& e, const MultiIndex& p, const VariableContext& ctx)
{
    Expr out = e;
    for (std::size_t i = 0; i < p.dim(); ++i)
        for (int k = 0; k < p[i]; ++k) out = total_derivative(out, i, ctx);
    return out;
}

/// Key of a prolonged equation: (equation index j, multi-index p).
struct ProlongedKey {
    std::size_t equation;
    MultiIndex p;

    /// Graded-lex on p first, then by equation.
    friend auto operator<=>(const ProlongedKey& a, const ProlongedKey& b)
    {
        if (auto c = a.p <=> b.p; c != 0) return c;
        return a.equation <=> b.equation;
    }
    friend bool operator==(const ProlongedKey&, const ProlongedKey&) = default;
};

/// F_{j,p} = D^p G_j for |p| ≤ level.
class ProlongedSystem {
public:
    ProlongedSystem(std::size_t equation_count, int base_order, int level, std::map<ProlongedKey, Expr> eqs)
        : equation_count_(equation_count), base_order_(base_order), level_(level), equations_(std::move(eqs))
    {
    }

    int level() const { return level_; }
    int base_order() const { return base_order_; }
    int top_order() const { return base_order_ + level_; }
    std::size_t equation_count() const { return equation_count_; }
    std::size_t size() const { return equations_.size(); }

    const Expr& at(std::size_t j, const MultiIndex& p) const { return equations_.at(ProlongedKey{j, p}); }
    const std::map<ProlongedKey, Expr>& equations() const { return equations_; }

    /// Rows with |p| = order, in layout order.
    std::vector<ProlongedKey> keys_of_order(int order) const
    {
        std::vector<ProlongedKey> out;
        for (const auto& [key, e] : equations_)
            if (key.p.order() == order) out.push_back(key);
        return out;
    }

    ProlongedSystem restricted(int level) const
    {
        if (level > level_) throw std::invalid_argument("cannot restrict to a higher level");
        std::map<ProlongedKey, Expr> out;
        for (const auto& [key, e] : equations_)
            if (key.p.order() <= level) out.emplace(key, e);
        return ProlongedSystem(equation_count_, base_order_, level, std::move(out));
    }

private:
    std::size_t equation_count_;
    int base_order_;
    int level_;
    std::map<ProlongedKey, Expr> equations_;
};

/// Each F_{j,p} with |p| ≥ 1 is D_i F_{j,p-e_i} for the last nonzero axis i of p, so
/// restricting prolong(op, l) to level l' reproduces prolong(op, l') exactly.
inline ProlongedSystem prolong(const PdeOperator& op, int level)
{
    if (level < 0) throw std::invalid_argument("prolongation level must be non-negative");
    std::map<ProlongedKey, Expr> eqs;
    for (std::size_t j = 0; j < op.equations().size(); ++j) eqs.emplace(ProlongedKey{j, MultiIndex(op.dim())}, op.equations()[j]);
    for (int order = 1; order <= level; ++order)
        for (const auto& p : multi_indices_of_order(op.dim(), order)) {
            std::size_t axis = p.dim() - 1;
            while (p[axis] == 0) --axis;
            MultiIndex parent = p.raised(axis, -1);
            for (std::size_t j = 0; j < op.equations().size(); ++j)
                eqs.emplace(ProlongedKey{j, p},
                            total_derivative(eqs.at(ProlongedKey{j, parent}), axis, op.context()));
        }
    return ProlongedSystem(op.equations().size(), op.order(), level, std::move(eqs));
}

inline Expr sum_of_squares(const ProlongedSystem& sys)
{
    std::vector<Expr> terms;
    for (const auto& [key, e] : sys.equations()) terms.push_back(pow(e, 2));
    return sum(std::move(terms));
}

/// D^p u(a) for |p| ≤ order, exact where the derivative evaluates exactly.
inline Jet jet_of_function(const std::vector<Expr>& u, const Point& a, int order, const VariableContext& ctx)
{
    if (u.size() != ctx.unknowns()) throw std::invalid_argument("need one expression per unknown");
    if (a.size() != ctx.dim()) throw std::invalid_argument("point dimension mismatch");
    for (const auto& e : u)
        if (has_jet_variables(e)) throw std::invalid_argument("function must depend on space variables only");
    Jet out(ctx.dim(), ctx.unknowns(), order);
    auto at = bind_point(ctx, a);
    auto axes = ctx.space_variables();
    for (std::size_t k = 0; k < u.size(); ++k) {
        DerivativeTable table(u[k], axes);
        for (const auto& p : out.indices()) out.set(k, p, evaluate(table.get(p), at));
    }
    return out;
}

inline Jet jet_of_function(const Expr& u, const Point& a, int order, const VariableContext& ctx)
{
    return jet_of_function(std::vector<Expr>{u}, a, order, ctx);
}

/// Value of e with space variables at x and jet variables from `jet`.
inline Number evaluate_at_jet(const Expr& e, const Point& x, const Jet& jet, const VariableContext& ctx)
{
    auto at = bind_point(ctx, x);
    jet.bind(ctx, at);
    return evaluate(e, at);
}

/// G_j(x, D^p u(x)) for each equation.
inline std::vector<Number> apply_operator(const PdeOperator& op, const std::vector<Expr>& u, const Point& x)
{
    Jet jet = jet_of_function(u, x, op.order(), op.context());
    std::vector<Number> out;
    for (const auto& g : op.equations()) out.push_back(evaluate_at_jet(g, x, jet, op.context()));
    return out;
}

}  // namespace jetsol
