#pragma once

#include "jetsol/core/multi_index.hpp"
#include "jetsol/core/number.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace jetsol {

/// A space coordinate x_i or a jet coordinate ξ_{u,p}. Indices are 0-based.
/// Equality and ordering ignore the display name.
struct Variable {
    enum class Kind : std::uint8_t { space = 0, jet = 1 };

    Kind kind = Kind::space;
    int index = 0;
    MultiIndex deriv;
    std::string name;

    static Variable space(int axis, std::string name)
    {
        return Variable{Kind::space, axis, MultiIndex{}, std::move(name)};
    }
    static Variable jet(int unknown, MultiIndex p, std::string name)
    {
        return Variable{Kind::jet, unknown, std::move(p), std::move(name)};
    }

    bool is_space() const { return kind == Kind::space; }
    bool is_jet() const { return kind == Kind::jet; }

    std::strong_ordering operator<=>(const Variable& o) const
    {
        if (auto c = kind <=> o.kind; c != 0) return c;
        if (auto c = index <=> o.index; c != 0) return c;
        return deriv <=> o.deriv;
    }
    bool operator==(const Variable& o) const { return (*this <=> o) == 0; }
};

/// Declared space variables and unknowns; names jet coordinates as `u_xy`.
struct VariableContext {
    std::vector<std::string> space_names;
    std::vector<std::string> unknown_names;
    /// Largest admissible |p| for jet coordinates; negative means unbounded.
    int max_jet_order = -1;

    std::size_t dim() const { return space_names.size(); }
    std::size_t unknowns() const { return unknown_names.size(); }

    Variable space(std::size_t axis) const
    {
        return Variable::space(static_cast<int>(axis), space_names.at(axis));
    }

    Variable jet(std::size_t unknown, const MultiIndex& p) const
    {
        std::string name = unknown_names.at(unknown);
        if (!p.is_zero()) name += "_" + p.subscript(space_names);
        return Variable::jet(static_cast<int>(unknown), p, std::move(name));
    }

    std::vector<Variable> space_variables() const
    {
        std::vector<Variable> out;
        for (std::size_t i = 0; i < dim(); ++i) out.push_back(space(i));
        return out;
    }
};

/// tanh is internal to the bump profile and has no text syntax.
enum class UnaryFn : std::uint8_t { sin, cos, exp, log, sqrt, tanh };

inline const char* unary_name(UnaryFn fn)
{
    switch (fn) {
    case UnaryFn::sin: return "sin";
    case UnaryFn::cos: return "cos";
    case UnaryFn::exp: return "exp";
    case UnaryFn::log: return "log";
    case UnaryFn::sqrt: return "sqrt";
    case UnaryFn::tanh: return "tanh";
    }
    return "?";
}

/// Node kinds. The rank order here is the canonical child order in sums and products.
/// Quotients are represented as products with a (-1)-power factor.
enum class ExprKind : std::uint8_t { constant, variable, bump, unary, power, product, sum };

struct BumpShape;
struct ExprNode;

/// Immutable, shared expression tree. Builders return canonical (simplified) trees.
class Expr {
public:
    Expr();
    Expr(const Rational& q);
    Expr(long v) : Expr(Rational(v)) {}
    Expr(int v) : Expr(Rational(v)) {}
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

    const ExprNode& node() const { return *node_; }
    const ExprNode* get() const { return node_.get(); }

    ExprKind kind() const;
    bool is(ExprKind k) const { return kind() == k; }
    bool is_constant() const { return is(ExprKind::constant); }
    bool is_zero() const;
    bool is_one() const;
    const Rational& value() const;
    const Variable& variable() const;
    const std::vector<Expr>& args() const;
    const Rational& exponent() const;
    UnaryFn function() const;
    const BumpShape& bump() const;
    const std::shared_ptr<const BumpShape>& bump_ptr() const;
    const MultiIndex& bump_derivative() const;
    std::size_t hash() const;
    /// No unary nodes, no non-integer exponents, no bump nodes.
    bool is_rational_closed() const;

private:
    std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
    ExprKind kind = ExprKind::constant;
    Rational value;  // constant value, or exponent of a power
    Variable var;
    std::vector<Expr> args;  // sum/product children, power base, unary argument
    UnaryFn fn = UnaryFn::exp;
    std::shared_ptr<const BumpShape> bump;
    MultiIndex bump_deriv;
    std::size_t hash = 0;
    bool rational_closed = true;
};

/// Smooth plateau bump: 1 on the closed ball of radius r_in about `center`, 0 outside the
/// open ball of radius r_out, C^∞ everywhere. Profile in t = |x - a|^2:
///   φ = σ(r_out² - t) / (σ(r_out² - t) + σ(t - r_in²)),  σ(s) = exp(-1/s) for s > 0, else 0.
struct BumpShape {
    std::vector<Rational> center;
    Rational r_in;
    Rational r_out;
    std::vector<Variable> axes;

    BumpShape(std::vector<Rational> c, Rational inner, Rational outer, std::vector<Variable> ax)
        : center(std::move(c)), r_in(std::move(inner)), r_out(std::move(outer)), axes(std::move(ax))
    {
        if (center.size() != axes.size()) throw std::invalid_argument("bump center/axes mismatch");
        if (!(r_in > 0) || !(r_out > r_in)) throw std::invalid_argument("bump radii must satisfy 0 < r_in < r_out");
    }

    Rational squared_radius(const std::vector<Rational>& x) const
    {
        Rational t = 0;
        for (std::size_t i = 0; i < center.size(); ++i) {
            Rational d = x.at(i) - center[i];
            t += d * d;
        }
        return t;
    }

    // Symbolic derivatives of the transition profile, filled on demand by the evaluator.
    mutable std::mutex cache_mutex;
    mutable std::map<MultiIndex, Expr> transition_cache;
};

// ---------------------------------------------------------------------------------------------
// Node accessors

inline std::shared_ptr<const ExprNode> make_constant_node(const Rational& q)
{
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::constant;
    n->value = q;
    n->value.canonicalize();
    n->hash = std::hash<std::string>{}(n->value.get_str()) * 31u + 1u;
    return n;
}

inline Expr::Expr() : node_(make_constant_node(Rational(0))) {}
inline Expr::Expr(const Rational& q) : node_(make_constant_node(q)) {}
inline ExprKind Expr::kind() const { return node_->kind; }
inline bool Expr::is_zero() const { return is_constant() && node_->value == 0; }
inline bool Expr::is_one() const { return is_constant() && node_->value == 1; }
inline const Rational& Expr::value() const { return node_->value; }
inline const Variable& Expr::variable() const { return node_->var; }
inline const std::vector<Expr>& Expr::args() const { return node_->args; }
inline const Rational& Expr::exponent() const { return node_->value; }
inline UnaryFn Expr::function() const { return node_->fn; }
inline const BumpShape& Expr::bump() const { return *node_->bump; }
inline const std::shared_ptr<const BumpShape>& Expr::bump_ptr() const { return node_->bump; }
inline const MultiIndex& Expr::bump_derivative() const { return node_->bump_deriv; }
inline std::size_t Expr::hash() const { return node_->hash; }
inline bool Expr::is_rational_closed() const { return node_->rational_closed; }

namespace detail {

inline std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

inline std::size_t hash_variable(const Variable& v)
{
    std::size_t h = mix(static_cast<std::size_t>(v.kind), static_cast<std::size_t>(v.index));
    for (int e : v.deriv.entries()) h = mix(h, static_cast<std::size_t>(e));
    return h;
}

inline std::size_t hash_rational(const Rational& q) { return std::hash<std::string>{}(q.get_str()); }

inline Expr raw_composite(ExprKind kind, std::vector<Expr> args)
{
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    std::size_t h = static_cast<std::size_t>(kind) * 1000003u;
    bool closed = true;
    for (const auto& a : args) {
        h = mix(h, a.hash());
        closed = closed && a.is_rational_closed();
    }
    n->hash = h;
    n->rational_closed = closed;
    n->args = std::move(args);
    return Expr(std::move(n));
}

inline Expr raw_power(Expr base, const Rational& e)
{
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::power;
    n->value = e;
    n->hash = mix(mix(static_cast<std::size_t>(ExprKind::power), base.hash()), hash_rational(e));
    n->rational_closed = base.is_rational_closed() && is_integer(e);
    n->args.push_back(std::move(base));
    return Expr(std::move(n));
}

inline Expr raw_unary(UnaryFn fn, Expr arg)
{
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::unary;
    n->fn = fn;
    n->hash = mix(mix(static_cast<std::size_t>(ExprKind::unary), static_cast<std::size_t>(fn)), arg.hash());
    n->rational_closed = false;
    n->args.push_back(std::move(arg));
    return Expr(std::move(n));
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Canonical ordering

inline int compare(const Expr& a, const Expr& b);

inline int compare_bumps(const BumpShape& a, const BumpShape& b)
{
    if (&a == &b) return 0;
    if (a.center.size() != b.center.size()) return a.center.size() < b.center.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.center.size(); ++i)
        if (a.center[i] != b.center[i]) return a.center[i] < b.center[i] ? -1 : 1;
    if (a.r_in != b.r_in) return a.r_in < b.r_in ? -1 : 1;
    if (a.r_out != b.r_out) return a.r_out < b.r_out ? -1 : 1;
    for (std::size_t i = 0; i < a.axes.size(); ++i) {
        auto c = a.axes[i] <=> b.axes[i];
        if (c != 0) return c < 0 ? -1 : 1;
    }
    return 0;
}

/// Total structural order; 0 iff the trees are structurally equal.
inline int compare(const Expr& a, const Expr& b)
{
    if (a.get() == b.get()) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
    case ExprKind::constant:
        return a.value() == b.value() ? 0 : (a.value() < b.value() ? -1 : 1);
    case ExprKind::variable: {
        auto c = a.variable() <=> b.variable();
        return c == 0 ? 0 : (c < 0 ? -1 : 1);
    }
    case ExprKind::bump: {
        if (int c = compare_bumps(a.bump(), b.bump()); c != 0) return c;
        auto c = a.bump_derivative() <=> b.bump_derivative();
        return c == 0 ? 0 : (c < 0 ? -1 : 1);
    }
    case ExprKind::unary:
        if (a.function() != b.function()) return a.function() < b.function() ? -1 : 1;
        return compare(a.args()[0], b.args()[0]);
    case ExprKind::power:
        if (int c = compare(a.args()[0], b.args()[0]); c != 0) return c;
        return a.exponent() == b.exponent() ? 0 : (a.exponent() < b.exponent() ? -1 : 1);
    case ExprKind::product:
    case ExprKind::sum: {
        const auto& x = a.args();
        const auto& y = b.args();
        std::size_t n = std::min(x.size(), y.size());
        // Compare from the last child: the leading constant coefficient is the least informative.
        for (std::size_t i = 0; i < n; ++i)
            if (int c = compare(x[x.size() - 1 - i], y[y.size() - 1 - i]); c != 0) return c;
        return x.size() == y.size() ? 0 : (x.size() < y.size() ? -1 : 1);
    }
    }
    return 0;
}

inline bool structurally_equal(const Expr& a, const Expr& b)
{
    return a.hash() == b.hash() && compare(a, b) == 0;
}

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// ---------------------------------------------------------------------------------------------
// Canonicalizing builders

inline Expr constant(const Rational& q) { return Expr(q); }

inline Expr variable(const Variable& v)
{
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::variable;
    n->var = v;
    n->hash = detail::mix(static_cast<std::size_t>(ExprKind::variable), detail::hash_variable(v));
    return Expr(std::move(n));
}

inline Expr bump(std::shared_ptr<const BumpShape> shape, MultiIndex deriv = {})
{
    if (deriv.dim() == 0) deriv = MultiIndex(shape->center.size());
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::bump;
    std::size_t h = static_cast<std::size_t>(ExprKind::bump);
    for (const auto& c : shape->center) h = detail::mix(h, detail::hash_rational(c));
    h = detail::mix(h, detail::hash_rational(shape->r_out));
    for (int e : deriv.entries()) h = detail::mix(h, static_cast<std::size_t>(e));
    n->hash = h;
    n->rational_closed = false;
    n->bump = std::move(shape);
    n->bump_deriv = std::move(deriv);
    return Expr(std::move(n));
}

inline Expr sum(std::vector<Expr> terms);
inline Expr product(std::vector<Expr> factors);
inline Expr power(const Expr& base, const Rational& e);

namespace detail {

/// term = coefficient * rest, with rest free of a leading constant.
inline std::pair<Rational, Expr> split_coefficient(const Expr& t)
{
    if (t.is(ExprKind::product) && t.args().front().is_constant()) {
        const auto& a = t.args();
        if (a.size() == 2) return {a[0].value(), a[1]};
        return {a[0].value(), raw_composite(ExprKind::product, std::vector<Expr>(a.begin() + 1, a.end()))};
    }
    return {Rational(1), t};
}

inline Expr scale_term(const Rational& c, const Expr& rest)
{
    if (c == 1) return rest;
    std::vector<Expr> f{Expr(c)};
    if (rest.is(ExprKind::product))
        f.insert(f.end(), rest.args().begin(), rest.args().end());
    else
        f.push_back(rest);
    return raw_composite(ExprKind::product, std::move(f));
}

}  // namespace detail

/// Flattens, folds constants, collects like terms, sorts. Empty sum is 0.
inline Expr sum(std::vector<Expr> terms)
{
    Rational c = 0;
    std::vector<std::pair<Expr, Rational>> parts;
    auto add = [&](const Expr& t, const Rational& scale, auto&& self) -> void {
        if (t.is_constant()) {
            c += scale * t.value();
        } else if (t.is(ExprKind::sum)) {
            for (const auto& ch : t.args()) self(ch, scale, self);
        } else {
            auto [k, rest] = detail::split_coefficient(t);
            parts.emplace_back(rest, scale * k);
        }
    };
    for (const auto& t : terms) add(t, Rational(1), add);
    std::stable_sort(parts.begin(), parts.end(),
                     [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
    std::vector<Expr> out;
    for (std::size_t i = 0; i < parts.size();) {
        Rational k = parts[i].second;
        std::size_t j = i + 1;
        while (j < parts.size() && structurally_equal(parts[j].first, parts[i].first)) k += parts[j++].second;
        if (k != 0) out.push_back(detail::scale_term(k, parts[i].first));
        i = j;
    }
    c.canonicalize();
    if (out.empty()) return Expr(c);
    if (c == 0 && out.size() == 1) return out.front();
    if (c != 0) out.insert(out.begin(), Expr(c));
    return detail::raw_composite(ExprKind::sum, std::move(out));
}

/// Flattens, folds constants, merges equal bases by adding exponents, sorts.
/// A lone constant multiplying a sum is distributed over it.
inline Expr product(std::vector<Expr> factors)
{
    Rational c = 1;
    std::vector<std::pair<Expr, Rational>> parts;
    bool zero = false;
    auto add = [&](const Expr& f, auto&& self) -> void {
        if (f.is_constant()) {
            c *= f.value();
            if (c == 0) zero = true;
        } else if (f.is(ExprKind::product)) {
            for (const auto& ch : f.args()) self(ch, self);
        } else if (f.is(ExprKind::power)) {
            parts.emplace_back(f.args()[0], f.exponent());
        } else {
            parts.emplace_back(f, Rational(1));
        }
    };
    for (const auto& f : factors) {
        add(f, add);
        if (zero) return Expr(0);
    }
    std::stable_sort(parts.begin(), parts.end(),
                     [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
    std::vector<Expr> out;
    bool refold = false;
    for (std::size_t i = 0; i < parts.size();) {
        Rational e = parts[i].second;
        std::size_t j = i + 1;
        while (j < parts.size() && structurally_equal(parts[j].first, parts[i].first)) e += parts[j++].second;
        if (e != 0) {
            Expr p = power(parts[i].first, e);
            if (p.is_constant())
                c *= p.value();
            else {
                // power() may rewrite the base (products, nested powers); merge again if so
                const Expr& kept_base = p.is(ExprKind::power) ? p.args()[0] : p;
                if (p.is(ExprKind::product) || !structurally_equal(kept_base, parts[i].first)) refold = true;
                out.push_back(std::move(p));
            }
        }
        i = j;
    }
    c.canonicalize();
    if (c == 0) return Expr(0);
    if (refold) {
        out.insert(out.begin(), Expr(c));
        return product(std::move(out));
    }
    if (out.empty()) return Expr(c);
    if (out.size() == 1) {
        if (c == 1) return out.front();
        if (out.front().is(ExprKind::sum)) {
            std::vector<Expr> scaled;
            for (const auto& t : out.front().args()) scaled.push_back(product({Expr(c), t}));
            return sum(std::move(scaled));
        }
    }
    if (c != 1) out.insert(out.begin(), Expr(c));
    return detail::raw_composite(ExprKind::product, std::move(out));
}

/// base^e with e rational. Integer powers of sums stay unexpanded.
inline Expr power(const Expr& base, const Rational& e_in)
{
    Rational e = e_in;
    e.canonicalize();
    if (e == 0) return Expr(1);
    if (e == 1) return base;
    if (base.is_constant()) {
        const Rational& b = base.value();
        if (is_integer(e)) {
            if (b == 0 && e < 0) throw std::domain_error("division by zero");
            return Expr(rational_pow(b, e.get_num().get_si()));
        }
        Rational root;
        if (b >= 0 && exact_root(b, e.get_den().get_ui(), root))
            return Expr(rational_pow(root, e.get_num().get_si()));
        return detail::raw_power(base, e);
    }
    if (base.is(ExprKind::power) && is_integer(e)) return power(base.args()[0], base.exponent() * e);
    if (base.is(ExprKind::product) && is_integer(e)) {
        std::vector<Expr> f;
        for (const auto& ch : base.args()) f.push_back(power(ch, e));
        return product(std::move(f));
    }
    if (base.is(ExprKind::unary) && base.function() == UnaryFn::sqrt && is_integer(e) && e.get_num() % 2 == 0)
        return power(base.args()[0], e / 2);
    return detail::raw_power(base, e);
}

inline Expr quotient(const Expr& numer, const Expr& denom)
{
    if (denom.is_zero()) throw std::domain_error("division by the zero constant");
    return product({numer, power(denom, Rational(-1))});
}

inline Expr unary(UnaryFn fn, const Expr& arg)
{
    if (arg.is_constant()) {
        const Rational& v = arg.value();
        switch (fn) {
        case UnaryFn::sin:
        case UnaryFn::tanh:
            if (v == 0) return Expr(0);
            break;
        case UnaryFn::cos:
        case UnaryFn::exp:
            if (v == 0) return Expr(1);
            break;
        case UnaryFn::log:
            if (v == 1) return Expr(0);
            break;
        case UnaryFn::sqrt: {
            Rational r;
            if (v >= 0 && exact_root(v, 2, r)) return Expr(r);
            break;
        }
        }
    }
    return detail::raw_unary(fn, arg);
}

/// Rebuilds e bottom-up through the canonical builders. Idempotent.
inline Expr simplify(const Expr& e)
{
    std::unordered_map<const ExprNode*, Expr> memo;
    auto rec = [&](const Expr& x, auto&& self) -> Expr {
        if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
        Expr out;
        switch (x.kind()) {
        case ExprKind::constant:
        case ExprKind::variable:
        case ExprKind::bump: out = x; break;
        case ExprKind::unary: out = unary(x.function(), self(x.args()[0], self)); break;
        case ExprKind::power: out = power(self(x.args()[0], self), x.exponent()); break;
        case ExprKind::product:
        case ExprKind::sum: {
            std::vector<Expr> ch;
            for (const auto& a : x.args()) ch.push_back(self(a, self));
            out = x.is(ExprKind::sum) ? sum(std::move(ch)) : product(std::move(ch));
            break;
        }
        }
        memo.emplace(x.get(), out);
        return out;
    };
    return rec(e, rec);
}

// ---------------------------------------------------------------------------------------------
// Operators

inline Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
inline Expr operator-(const Expr& a) { return product({Expr(-1), a}); }
inline Expr operator-(const Expr& a, const Expr& b) { return sum({a, -b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return quotient(a, b); }
inline Expr pow(const Expr& a, const Rational& e) { return power(a, e); }
inline Expr pow(const Expr& a, long e) { return power(a, Rational(e)); }
inline Expr sin(const Expr& a) { return unary(UnaryFn::sin, a); }
inline Expr cos(const Expr& a) { return unary(UnaryFn::cos, a); }
inline Expr exp(const Expr& a) { return unary(UnaryFn::exp, a); }
inline Expr log(const Expr& a) { return unary(UnaryFn::log, a); }
inline Expr sqrt(const Expr& a) { return unary(UnaryFn::sqrt, a); }
inline Expr tanh(const Expr& a) { return unary(UnaryFn::tanh, a); }

// ---------------------------------------------------------------------------------------------
// Traversal helpers

/// Free variables, sorted. Bumps contribute their axes.
inline std::set<Variable> free_variables(const Expr& e)
{
    std::set<Variable> out;
    std::unordered_map<const ExprNode*, bool> seen;
    auto rec = [&](const Expr& x, auto&& self) -> void {
        if (!seen.emplace(x.get(), true).second) return;
        switch (x.kind()) {
        case ExprKind::constant: break;
        case ExprKind::variable: out.insert(x.variable()); break;
        case ExprKind::bump:
            for (const auto& v : x.bump().axes) out.insert(v);
            break;
        default:
            for (const auto& a : x.args()) self(a, self);
        }
    };
    rec(e, rec);
    return out;
}

inline bool has_jet_variables(const Expr& e)
{
    for (const auto& v : free_variables(e))
        if (v.is_jet()) return true;
    return false;
}

/// Simultaneous substitution followed by canonicalization.
inline Expr substitute(const Expr& e, const std::map<Variable, Expr>& map)
{
    if (map.empty()) return e;
    std::unordered_map<const ExprNode*, Expr> memo;
    auto rec = [&](const Expr& x, auto&& self) -> Expr {
        if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
        Expr out;
        switch (x.kind()) {
        case ExprKind::constant:
        case ExprKind::bump: out = x; break;
        case ExprKind::variable: {
            auto it = map.find(x.variable());
            out = it == map.end() ? x : it->second;
            break;
        }
        case ExprKind::unary: out = unary(x.function(), self(x.args()[0], self)); break;
        case ExprKind::power: out = power(self(x.args()[0], self), x.exponent()); break;
        case ExprKind::product:
        case ExprKind::sum: {
            std::vector<Expr> ch;
            for (const auto& a : x.args()) ch.push_back(self(a, self));
            out = x.is(ExprKind::sum) ? sum(std::move(ch)) : product(std::move(ch));
            break;
        }
        }
        memo.emplace(x.get(), out);
        return out;
    };
    return rec(e, rec);
}

/// Number of distinct nodes (DAG size).
inline std::size_t node_count(const Expr& e)
{
    std::unordered_map<const ExprNode*, bool> seen;
    auto rec = [&](const Expr& x, auto&& self) -> void {
        if (!seen.emplace(x.get(), true).second) return;
        for (const auto& a : x.args()) self(a, self);
    };
    rec(e, rec);
    return seen.size();
}

}  // namespace jetsol
