#pragma once

#include "jetsol/construct/assembled.hpp"
#include "jetsol/jet/prolong.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetsol {

class BracketError : public std::runtime_error {
public:
    BracketError(std::size_t index, Point point, const std::string& message)
        : std::runtime_error("bracket violated at point " + std::to_string(index) + " " + point_string(point) + ": " + message),
          index_(index), point_(std::move(point))
    {
    }
    std::size_t index() const { return index_; }
    const Point& point() const { return point_; }

private:
    std::size_t index_;
    Point point_;
};

struct BracketResult {
    AssembledFunction function;
    std::vector<Rational> lambdas;
    std::vector<double> residuals;  // |T U_λ(a) - f(a)|
    std::vector<int> iterations;
};

/// For a scalar operator T with T U_- ≤ f ≤ T U_+ on A, finds λ_a by bisection so that
/// U_λ = (1-λ) U_- + λ U_+ satisfies T U_λ(a) = f(a) to within tol, then blends
/// U = Σ ψ_a U_{λ_a} with ψ_a = φ_a + (1 - Σ φ_b)/|A| over disjoint plateau bumps φ_a.
/// The result is stored as pieces (φ_a, U_{λ_a} - Ū) over the background Ū = mean U_{λ_a}.
inline BracketResult bracket_interpolate(const PdeOperator& op, const Expr& f, const Expr& u_minus, const Expr& u_plus,
                                         const std::vector<Point>& points, const Point& center, const Rational& radius,
                                         double tol = 1e-12, int max_iterations = 200,
                                         const Rational& shrink = Rational(1, 2))
{
    if (op.unknowns() != 1 || op.equations().size() != 1)
        throw std::invalid_argument("bracket interpolation needs a scalar operator");
    if (points.empty()) throw std::invalid_argument("bracket interpolation needs at least one point");
    if (!(radius > 0)) throw std::invalid_argument("ball radius must be positive");
    const auto& ctx = op.context();
    for (std::size_t i = 0; i < points.size(); ++i) {
        Rational t = 0;
        for (std::size_t d = 0; d < ctx.dim(); ++d) t += (points[i][d] - center.at(d)) * (points[i][d] - center.at(d));
        if (!(t < radius * radius)) throw std::invalid_argument("point " + point_string(points[i]) + " lies outside the ball");
    }

    auto h = [&](const Rational& lambda, const Point& a) {
        Expr u = Expr(Rational(1 - lambda)) * u_minus + Expr(lambda) * u_plus;
        Number t = apply_operator(op, {u}, a).at(0);
        Number fa = evaluate(f, bind_point(ctx, a));
        if (t.is_exact() && fa.is_exact()) return Number(Rational(t.rational() - fa.rational()));
        return Number(t.to_double() - fa.to_double());
    };
    auto sign = [](const Number& n) {
        if (n.is_exact()) return sgn(n.rational());
        return n.to_double() > 0 ? 1 : (n.to_double() < 0 ? -1 : 0);
    };

    BracketResult out;
    std::vector<Expr> blended;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point& a = points[i];
        Number h0 = h(0, a), h1 = h(1, a);
        if (sign(h0) > 0) throw BracketError(i, a, "T U_- exceeds f (h(0) = " + h0.str() + ")");
        if (sign(h1) < 0) throw BracketError(i, a, "T U_+ is below f (h(1) = " + h1.str() + ")");
        Rational lo = 0, hi = 1, lambda;
        Number hl = h0;
        int it = 0;
        if (sign(h0) == 0) {
            lambda = 0;
        } else if (sign(h1) == 0) {
            lambda = 1;
            hl = h1;
        } else {
            for (;;) {
                lambda = (lo + hi) / 2;
                hl = h(lambda, a);
                ++it;
                if (sign(hl) == 0 || std::abs(hl.to_double()) <= tol || it >= max_iterations) break;
                if (sign(hl) < 0)
                    lo = lambda;
                else
                    hi = lambda;
            }
        }
        out.lambdas.push_back(lambda);
        out.residuals.push_back(std::abs(hl.to_double()));
        out.iterations.push_back(it);
        blended.push_back(Expr(Rational(1 - lambda)) * u_minus + Expr(lambda) * u_plus);
    }

    Expr mean = Expr(Rational(1, static_cast<long>(points.size()))) * sum(blended);
    auto bumps = make_bumps(points, op.box(), ctx, shrink);
    std::vector<AssembledFunction::Piece> pieces;
    for (std::size_t i = 0; i < points.size(); ++i) pieces.push_back({bumps[i], blended[i] - mean});
    out.function = AssembledFunction(std::move(pieces), mean);
    return out;
}

}  // namespace jetsol
