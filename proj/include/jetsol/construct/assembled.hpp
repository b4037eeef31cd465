#pragma once

#include "jetsol/expr/differentiate.hpp"
#include "jetsol/expr/evaluate.hpp"
#include "jetsol/jet/pde_operator.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace jetsol {

using BumpPtr = std::shared_ptr<const BumpShape>;

/// Max-norm distance; a rational lower bound for the Euclidean one.
inline Rational chebyshev_distance(const Point& a, const Point& b)
{
    Rational d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, Rational(abs(a[i] - b[i])));
    return d;
}

inline Rational boundary_distance(const Point& a, const std::vector<Interval>& box)
{
    Rational d = box[0].hi - box[0].lo;
    for (std::size_t i = 0; i < box.size(); ++i) d = std::min({d, Rational(a[i] - box[i].lo), Rational(box[i].hi - a[i])});
    return d;
}

/// r_out(a) = shrink · min(half the smallest pairwise distance, distance to the boundary),
/// r_in = r_out / 2. Pairwise distances use the max-norm so radii stay rational while the
/// Euclidean balls remain disjoint.
inline std::vector<BumpPtr> make_bumps(const std::vector<Point>& points, const std::vector<Interval>& box,
                                       const VariableContext& ctx, const Rational& shrink = Rational(1, 2))
{
    if (!(shrink > 0 && shrink < 1)) throw std::invalid_argument("shrink must lie in (0, 1)");
    if (points.empty()) return {};
    for (const auto& p : points) {
        if (p.size() != box.size()) throw std::invalid_argument("point dimension mismatch");
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!(box[i].lo < p[i] && p[i] < box[i].hi))
                throw std::invalid_argument("point " + point_string(p) + " lies outside the box");
    }
    std::optional<Rational> gap;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            Rational d = chebyshev_distance(points[i], points[j]);
            if (d == 0) throw std::invalid_argument("duplicate point " + point_string(points[i]));
            if (!gap || d < *gap) gap = d;
        }
    std::vector<BumpPtr> out;
    for (const auto& p : points) {
        Rational r = boundary_distance(p, box);
        if (gap) r = std::min(r, Rational(*gap / 2));
        Rational r_out = shrink * r;
        out.push_back(std::make_shared<const BumpShape>(p, Rational(r_out / 2), r_out, ctx.space_variables()));
    }
    return out;
}

/// U(x) = Σ ψ_a(x) P_a(x) + background(x).
class AssembledFunction {
public:
    struct Piece {
        BumpPtr bump;
        Expr polynomial;
    };

    AssembledFunction() = default;
    AssembledFunction(std::vector<Piece> pieces, std::optional<Expr> background = std::nullopt)
        : pieces_(std::move(pieces)), background_(std::move(background)), tables_(pieces_.size())
    {
    }

    const std::vector<Piece>& pieces() const { return pieces_; }
    const std::optional<Expr>& background() const { return background_; }

    Expr expression() const
    {
        std::vector<Expr> terms;
        for (const auto& p : pieces_) terms.push_back(bump(p.bump) * p.polynomial);
        if (background_) terms.push_back(*background_);
        return sum(std::move(terms));
    }

    /// D^p U(x), touching only pieces whose open support contains x.
    Number derivative(const MultiIndex& p, const Point& x, const VariableContext& ctx) const
    {
        auto at = bind_point(ctx, x);
        Number total(Rational(0));
        auto add = [&](const Number& v) {
            if (total.is_exact() && v.is_exact())
                total = Number(Rational(total.rational() + v.rational()));
            else
                total = Number(total.to_double() + v.to_double());
        };
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            if (pieces_[i].bump->squared_radius(x) >= pieces_[i].bump->r_out * pieces_[i].bump->r_out) continue;
            add(evaluate(table(i, ctx).get(p), at));
        }
        if (background_) {
            if (!background_table_) background_table_ = std::make_shared<DerivativeTable>(*background_, ctx.space_variables());
            add(evaluate(background_table_->get(p), at));
        }
        return total;
    }

    Number value(const Point& x, const VariableContext& ctx) const { return derivative(MultiIndex(ctx.dim()), x, ctx); }

private:
    DerivativeTable& table(std::size_t i, const VariableContext& ctx) const
    {
        if (!tables_[i]) tables_[i] = std::make_shared<DerivativeTable>(bump(pieces_[i].bump) * pieces_[i].polynomial, ctx.space_variables());
        return *tables_[i];
    }

    std::vector<Piece> pieces_;
    std::optional<Expr> background_;
    mutable std::vector<std::shared_ptr<DerivativeTable>> tables_;
    mutable std::shared_ptr<DerivativeTable> background_table_;
};

/// Jet of order `order` at x of one assembled function per unknown.
inline Jet jet_of_assembled(const std::vector<AssembledFunction>& u, const Point& x, int order, const VariableContext& ctx)
{
    Jet out(ctx.dim(), ctx.unknowns(), order);
    for (std::size_t k = 0; k < u.size(); ++k)
        for (const auto& p : out.indices()) out.set(k, p, u[k].derivative(p, x, ctx));
    return out;
}

}  // namespace jetsol
