#pragma once

#include "jetsol/jet/prolong.hpp"
#include "jetsol/range/linalg.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace jetsol {

/// Jet coordinates of order ≤ order, graded-lex in p and then by unknown. This is the
/// column order of every linear system built here.
inline std::vector<Variable> jet_columns(const VariableContext& ctx, int order)
{
    std::vector<Variable> out;
    for (const auto& p : multi_indices_up_to(ctx.dim(), order))
        for (std::size_t u = 0; u < ctx.unknowns(); ++u) out.push_back(ctx.jet(u, p));
    return out;
}

inline std::vector<Variable> jet_columns_of_order(const VariableContext& ctx, int order)
{
    std::vector<Variable> out;
    for (const auto& p : multi_indices_of_order(ctx.dim(), order))
        for (std::size_t u = 0; u < ctx.unknowns(); ++u) out.push_back(ctx.jet(u, p));
    return out;
}

/// F_{j,p} = d_p(x) + Σ_i d_{p,i}(x) ξ_i.
struct LinearRow {
    ProlongedKey key;
    Expr offset;
    std::vector<Expr> coefficients;
};

struct LinearDecomposition {
    int level = 0;
    std::vector<Variable> columns;
    std::vector<LinearRow> rows;

    Expr reassemble(std::size_t row) const
    {
        std::vector<Expr> terms{rows[row].offset};
        for (std::size_t i = 0; i < columns.size(); ++i) terms.push_back(rows[row].coefficients[i] * variable(columns[i]));
        return sum(std::move(terms));
    }
};

class NotLinearError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Affine decomposition of every prolonged equation, or nullopt if some F_{j,p} is
/// nonlinear in a jet coordinate.
inline std::optional<LinearDecomposition> linearize(const ProlongedSystem& sys, const VariableContext& ctx)
{
    LinearDecomposition dec;
    dec.level = sys.level();
    dec.columns = jet_columns(ctx, sys.top_order());
    std::map<Variable, Expr> zero;
    for (const auto& v : dec.columns) zero.emplace(v, Expr(0));
    for (const auto& [key, f] : sys.equations()) {
        LinearRow row{key, Expr(0), {}};
        row.coefficients.reserve(dec.columns.size());
        for (const auto& v : dec.columns) {
            Expr d = differentiate(f, v);
            if (has_jet_variables(d)) return std::nullopt;
            row.coefficients.push_back(d);
        }
        for (const auto& v : free_variables(f))
            if (v.is_jet() && v.deriv.order() > sys.top_order()) return std::nullopt;
        row.offset = substitute(f, zero);
        dec.rows.push_back(std::move(row));
    }
    return dec;
}

/// P ξ = rhs with rhs = -d_p(x); Q = [P | rhs].
struct LinearSystem {
    Arithmetic arithmetic = Arithmetic::exact;
    std::size_t rows = 0;
    std::size_t cols = 0;
    RationalMatrix exact_p;
    RationalVector exact_rhs;
    Eigen::MatrixXd float_p;
    Eigen::VectorXd float_rhs;

    Eigen::MatrixXd augmented_float() const
    {
        Eigen::MatrixXd q(rows, cols + 1);
        q << float_p, float_rhs;
        return q;
    }
    RationalMatrix augmented_exact() const
    {
        RationalMatrix q = exact_p;
        for (std::size_t r = 0; r < rows; ++r) q[r].push_back(exact_rhs[r]);
        return q;
    }
};

inline LinearSystem assemble_linear_system(const LinearDecomposition& dec, const Point& x, const VariableContext& ctx)
{
    LinearSystem sys;
    sys.rows = dec.rows.size();
    sys.cols = dec.columns.size();
    auto at = bind_point(ctx, x);
    std::vector<std::vector<Number>> p(sys.rows, std::vector<Number>(sys.cols));
    std::vector<Number> rhs(sys.rows);
    bool exact = true;
    for (std::size_t r = 0; r < sys.rows; ++r) {
        for (std::size_t c = 0; c < sys.cols; ++c) {
            const Expr& e = dec.rows[r].coefficients[c];
            p[r][c] = e.is_constant() ? Number(e.value()) : evaluate(e, at);
            exact = exact && p[r][c].is_exact();
        }
        Number d = evaluate(dec.rows[r].offset, at);
        rhs[r] = d.is_exact() ? Number(Rational(-d.rational())) : Number(-d.to_double());
        exact = exact && rhs[r].is_exact();
    }
    sys.arithmetic = exact ? Arithmetic::exact : Arithmetic::floating;
    sys.float_p.resize(sys.rows, sys.cols);
    sys.float_rhs.resize(sys.rows);
    for (std::size_t r = 0; r < sys.rows; ++r) {
        for (std::size_t c = 0; c < sys.cols; ++c) sys.float_p(r, c) = p[r][c].to_double();
        sys.float_rhs(r) = rhs[r].to_double();
    }
    if (exact) {
        sys.exact_p.assign(sys.rows, RationalVector(sys.cols));
        sys.exact_rhs.resize(sys.rows);
        for (std::size_t r = 0; r < sys.rows; ++r) {
            for (std::size_t c = 0; c < sys.cols; ++c) sys.exact_p[r][c] = p[r][c].rational();
            sys.exact_rhs[r] = rhs[r].rational();
        }
    }
    return sys;
}

/// rank P^l(x) against rank Q^l(x). `strict` asks for full row rank: both ranks equal
/// the number of prolonged equations.
struct RankCertificate {
    Point point;
    int level = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t rank_p = 0;
    std::size_t rank_q = 0;
    std::size_t expected_rank = 0;
    bool holds = false;
    bool strict = false;
    Arithmetic arithmetic = Arithmetic::exact;
    double tolerance = 0;
};

inline RankCertificate certify_rank(const LinearSystem& sys, const Point& x, int level, double tol = 1e-9)
{
    RankCertificate cert;
    cert.point = x;
    cert.level = level;
    cert.rows = sys.rows;
    cert.cols = sys.cols;
    cert.expected_rank = sys.rows;
    cert.arithmetic = sys.arithmetic;
    if (sys.arithmetic == Arithmetic::exact) {
        cert.rank_p = exact_rank(sys.exact_p);
        cert.rank_q = exact_rank(sys.augmented_exact());
    } else {
        cert.tolerance = tol;
        cert.rank_p = float_rank(sys.float_p, tol);
        cert.rank_q = float_rank(sys.augmented_float(), tol);
    }
    cert.holds = cert.rank_p == cert.rank_q;
    cert.strict = cert.holds && cert.rank_p == cert.expected_rank;
    return cert;
}

inline RankCertificate rank_condition(const PdeOperator& op, const Point& x, int level, double tol = 1e-9)
{
    auto dec = linearize(prolong(op, level), op.context());
    if (!dec) throw NotLinearError("operator is not linear in its jet coordinates");
    return certify_rank(assemble_linear_system(*dec, x, op.context()), x, level, tol);
}

inline bool is_linear(const PdeOperator& op) { return linearize(prolong(op, 0), op.context()).has_value(); }

}  // namespace jetsol
