#pragma once

#include "jetsol/expr/evaluate.hpp"
#include "jetsol/expr/parse.hpp"
#include "jetsol/expr/print.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace jetsol::testing {

inline VariableContext context(std::vector<std::string> vars, std::vector<std::string> unknowns = {"u"})
{
    VariableContext ctx;
    ctx.space_names = std::move(vars);
    ctx.unknown_names = std::move(unknowns);
    return ctx;
}

inline Expr parse(const std::string& text, const VariableContext& ctx) { return parse_or_throw(text, ctx); }

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-300)
{
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), abs_floor});
}

/// Random bump-free expressions over the given leaves. `smooth_only` restricts to
/// primitives that are defined everywhere (no log/sqrt/negative powers).
class ExprGenerator {
public:
    ExprGenerator(std::vector<Variable> leaves, unsigned seed, bool rational_only = false)
        : leaves_(std::move(leaves)), rng_(seed), rational_only_(rational_only)
    {
    }

    Expr operator()(int depth = 3)
    {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : (rational_only_ ? 5 : 7));
        switch (pick(rng_)) {
        case 0: return small_constant();
        case 1: return variable(leaves_[index(leaves_.size())]);
        case 2:
        case 3: return (*this)(depth - 1) + (*this)(depth - 1);
        case 4: return (*this)(depth - 1) * (*this)(depth - 1);
        case 5: return pow((*this)(depth - 1), static_cast<long>(1 + index(3)));
        case 6: return sin((*this)(depth - 1));
        default: return exp(product({Expr(Rational(1, 4)), (*this)(depth - 1)}));
        }
    }

    Rational small_rational()
    {
        std::uniform_int_distribution<int> num(-9, 9);
        std::uniform_int_distribution<int> den(1, 7);
        return make_rational(num(rng_), den(rng_));
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

private:
    Expr small_constant() { return Expr(small_rational()); }

    std::vector<Variable> leaves_;
    std::mt19937 rng_;
    bool rational_only_;
};

}  // namespace jetsol::testing
