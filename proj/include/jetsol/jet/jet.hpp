#pragma once

#include "jetsol/core/multi_index.hpp"
#include "jetsol/core/number.hpp"
#include "jetsol/expr/expression.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace jetsol {

/// Dense jet: a value for every (unknown, p) with |p| ≤ order.
class Jet {
public:
    Jet() = default;
    Jet(std::size_t dim, std::size_t unknowns, int order)
        : dim_(dim), unknowns_(unknowns), order_(order), indices_(multi_indices_up_to(dim, order)),
          values_(unknowns * indices_.size(), Number(Rational(0)))
    {
        for (std::size_t i = 0; i < indices_.size(); ++i) position_.emplace(indices_[i], i);
    }

    std::size_t dim() const { return dim_; }
    std::size_t unknowns() const { return unknowns_; }
    int order() const { return order_; }
    const std::vector<MultiIndex>& indices() const { return indices_; }

    const Number& at(std::size_t unknown, const MultiIndex& p) const { return values_.at(slot(unknown, p)); }
    void set(std::size_t unknown, const MultiIndex& p, Number v) { values_.at(slot(unknown, p)) = std::move(v); }

    Arithmetic arithmetic() const
    {
        for (const auto& v : values_)
            if (!v.is_exact()) return Arithmetic::floating;
        return Arithmetic::exact;
    }

    /// Keeps entries with |p| ≤ order.
    Jet truncated(int order) const
    {
        if (order > order_) throw std::invalid_argument("cannot truncate a jet to a higher order");
        Jet out(dim_, unknowns_, order);
        for (std::size_t u = 0; u < unknowns_; ++u)
            for (const auto& p : out.indices()) out.set(u, p, at(u, p));
        return out;
    }

    /// Jet coordinates as variables bound to this jet's values.
    void bind(const VariableContext& ctx, std::map<Variable, Number>& into) const
    {
        for (std::size_t u = 0; u < unknowns_; ++u)
            for (const auto& p : indices_) into.insert_or_assign(ctx.jet(u, p), at(u, p));
    }

private:
    std::size_t slot(std::size_t unknown, const MultiIndex& p) const
    {
        auto it = position_.find(p);
        if (it == position_.end() || unknown >= unknowns_)
            throw std::out_of_range("jet coordinate " + p.str() + " not present");
        return unknown * indices_.size() + it->second;
    }

    std::size_t dim_ = 0;
    std::size_t unknowns_ = 0;
    int order_ = 0;
    std::vector<MultiIndex> indices_;
    std::map<MultiIndex, std::size_t> position_;
    std::vector<Number> values_;
};

using Point = std::vector<Rational>;

/// Space variables bound to the coordinates of x.
inline std::map<Variable, Number> bind_point(const VariableContext& ctx, const Point& x)
{
    std::map<Variable, Number> out;
    for (std::size_t i = 0; i < ctx.dim(); ++i) out.emplace(ctx.space(i), Number(x.at(i)));
    return out;
}

inline std::string point_string(const Point& x)
{
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + rational_string(x[i]);
    return s + ")";
}

}  // namespace jetsol
