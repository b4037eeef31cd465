#include "test_support.hpp"

#include "jetsol/range/range_check.hpp"

#include <gtest/gtest.h>

using namespace jetsol;
using namespace jetsol::testing;

namespace {

PdeOperator make_op(const VariableContext& ctx, int order, const std::vector<std::string>& eqs,
                    Interval iv = {-1, 1})
{
    std::vector<Expr> g;
    for (const auto& e : eqs) g.push_back(parse(e, ctx));
    return PdeOperator(ctx, order, g, std::vector<Interval>(ctx.dim(), iv));
}

PdeOperator lewy()
{
    auto ctx = context({"x", "y", "z"}, {"V", "W"});
    return make_op(ctx, 1,
                   {"V_x - W_y - 2*x*V_z + 2*y*W_z - x", "W_x + V_y - 2*y*V_z - 2*x*W_z"});
}

std::vector<Point> sample_points(std::size_t dim, std::size_t count, unsigned seed)
{
    ExprGenerator gen({}, seed);
    std::vector<Point> out;
    for (std::size_t i = 0; i < count; ++i) {
        Point p;
        for (std::size_t d = 0; d < dim; ++d) p.push_back(make_rational(static_cast<int>(gen.index(15)) - 7, 8));
        out.push_back(p);
    }
    return out;
}

RationalMatrix random_low_rank(ExprGenerator& gen, std::size_t rows, std::size_t cols, std::size_t inner)
{
    RationalMatrix b(rows, RationalVector(inner)), c(inner, RationalVector(cols)), out(rows, RationalVector(cols));
    for (auto& r : b)
        for (auto& v : r) v = gen.small_rational();
    for (auto& r : c)
        for (auto& v : r) v = gen.small_rational();
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t k = 0; k < inner; ++k) out[i][j] += b[i][k] * c[k][j];
    return out;
}

}  // namespace

TEST(Linalg, BareissExamples)
{
    EXPECT_EQ(exact_rank({}), 0u);
    EXPECT_EQ(exact_rank({{0, 0}, {0, 0}}), 0u);
    EXPECT_EQ(exact_rank({{1, 2}, {2, 4}}), 1u);
    EXPECT_EQ(exact_rank({{0, 1, 2}, {1, 0, 3}, {1, 1, 5}}), 2u);
    EXPECT_EQ(exact_rank({{Rational(1, 3), Rational(1, 2)}, {Rational(2, 3), Rational(1, 1)}}), 1u);
    EXPECT_EQ(exact_rank({{0, 0, 1}, {0, 2, 0}, {3, 0, 0}}), 3u);
}

TEST(Linalg, ExactAgreesWithFloatRank)
{
    ExprGenerator gen({}, 17);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t rows = 2 + gen.index(5), cols = 2 + gen.index(5), inner = 1 + gen.index(5);
        auto a = random_low_rank(gen, rows, cols, inner);
        Eigen::MatrixXd f = to_eigen(a, cols);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
        const auto& s = svd.singularValues();
        std::size_t r = exact_rank(a);
        // skip numerically borderline draws
        bool conditioned = r == 0 || (s(static_cast<Eigen::Index>(r) - 1) > 1e-6 * s(0));
        if (!conditioned) continue;
        EXPECT_EQ(r, float_rank(f, 1e-9));
        EXPECT_LE(r, std::min({rows, cols, inner}));
    }
}

TEST(Linalg, ExactLeastNorm)
{
    ExprGenerator gen({}, 23);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t rows = 1 + gen.index(4), cols = rows + gen.index(4);
        auto a = random_low_rank(gen, rows, cols, 1 + gen.index(rows));
        RationalVector xs(cols);
        for (auto& v : xs) v = gen.small_rational();
        RationalVector b(rows);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) b[r] += a[r][c] * xs[c];
        auto sol = exact_least_norm(a, b, cols);
        ASSERT_TRUE(sol.consistent);
        EXPECT_EQ(sol.rank, exact_rank(a));
        for (std::size_t r = 0; r < rows; ++r) {
            Rational s = 0;
            for (std::size_t c = 0; c < cols; ++c) s += a[r][c] * sol.x[c];
            EXPECT_EQ(s, b[r]);
        }
        Eigen::VectorXd bf(rows);
        for (std::size_t r = 0; r < rows; ++r) bf(r) = b[r].get_d();
        auto fl = float_least_norm(to_eigen(a, cols), bf);
        for (std::size_t c = 0; c < cols; ++c) EXPECT_NEAR(sol.x[c].get_d(), fl.x(c), 1e-8 * (1 + std::abs(fl.x(c))));
    }
    auto bad = exact_least_norm({{1, 1}, {2, 2}}, {1, 3}, 2);
    EXPECT_FALSE(bad.consistent);
    EXPECT_EQ(bad.rank, 1u);
    EXPECT_EQ(bad.augmented_rank, 2u);
}

TEST(Linearize, Examples)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 1, {"u_x - exp(x)"});
    auto dec = linearize(prolong(op, 0), ctx);
    ASSERT_TRUE(dec);
    ASSERT_EQ(dec->columns.size(), 2u);
    EXPECT_TRUE(structurally_equal(dec->rows[0].offset, parse("-exp(x)", ctx)));
    EXPECT_TRUE(dec->rows[0].coefficients[0].is_zero());
    EXPECT_TRUE(dec->rows[0].coefficients[1].is_one());

    EXPECT_FALSE(linearize(prolong(make_op(ctx, 0, {"u^2"}), 0), ctx));
    EXPECT_FALSE(linearize(prolong(make_op(ctx, 1, {"u_x^2 - 1"}), 1), ctx));
}

TEST(Linearize, ProlongedLaplaceReassembles)
{
    auto ctx = context({"x", "y"});
    auto op = make_op(ctx, 2, {"u_xx + u_yy - 1 - x*y*sin(x)"});
    auto sys = prolong(op, 2);
    auto dec = linearize(sys, ctx);
    ASSERT_TRUE(dec);
    ExprGenerator gen({}, 4);
    for (std::size_t r = 0; r < dec->rows.size(); ++r) {
        Expr back = dec->reassemble(r);
        const Expr& f = sys.equations().at(dec->rows[r].key);
        for (int trial = 0; trial < 5; ++trial) {
            std::map<Variable, Number> at;
            for (const auto& v : ctx.space_variables()) at.emplace(v, Number(gen.small_rational()));
            for (const auto& v : dec->columns) at.emplace(v, Number(gen.small_rational()));
            EXPECT_TRUE(close_rel(evaluate(back, at).to_double(), evaluate(f, at).to_double(), 1e-12, 1.0));
        }
    }
}

TEST(Assemble, Examples)
{
    auto ctx = context({"x"});
    auto dx = make_op(ctx, 1, {"u_x - (x^2 + 1)"});
    auto sys = assemble_linear_system(*linearize(prolong(dx, 0), ctx), {Rational(1, 2)}, ctx);
    EXPECT_EQ(sys.arithmetic, Arithmetic::exact);
    ASSERT_EQ(sys.rows, 1u);
    ASSERT_EQ(sys.cols, 2u);
    EXPECT_EQ(sys.exact_p[0][0], 0);
    EXPECT_EQ(sys.exact_p[0][1], 1);
    EXPECT_EQ(sys.exact_rhs[0], Rational(5, 4));

    auto ctx0 = context({"x"});
    auto degenerate = make_op(ctx0, 0, {"0*u - 1"});
    auto d = assemble_linear_system(*linearize(prolong(degenerate, 0), ctx0), {Rational(0)}, ctx0);
    ASSERT_EQ(d.cols, 1u);
    EXPECT_EQ(d.exact_p[0][0], 0);
    EXPECT_EQ(d.exact_rhs[0], 1);

    // Lewy system at the origin; columns V, W, V_x, W_x, V_y, W_y, V_z, W_z
    auto op = lewy();
    auto l = assemble_linear_system(*linearize(prolong(op, 0), op.context()), {0, 0, 0}, op.context());
    RationalMatrix expected{{0, 0, 1, 0, 0, -1, 0, 0}, {0, 0, 0, 1, 1, 0, 0, 0}};
    EXPECT_EQ(l.exact_p, expected);
    EXPECT_EQ(l.exact_rhs, (RationalVector{0, 0}));

    auto off = assemble_linear_system(*linearize(prolong(op, 0), op.context()),
                                      {Rational(1, 2), Rational(-1, 3), 0}, op.context());
    RationalMatrix expected_off{{0, 0, 1, 0, 0, -1, -1, Rational(-2, 3)},
                                {0, 0, 0, 1, 1, 0, Rational(2, 3), -1}};
    EXPECT_EQ(off.exact_p, expected_off);
    EXPECT_EQ(off.exact_rhs, (RationalVector{Rational(1, 2), 0}));
}

TEST(RankCondition, Examples)
{
    auto ctx = context({"x"});
    auto dx = make_op(ctx, 1, {"u_x - (x^2 + 1)"});
    for (const auto& x : sample_points(1, 5, 1))
        for (int l = 0; l <= 3; ++l) {
            auto cert = rank_condition(dx, x, l);
            EXPECT_TRUE(cert.holds);
            EXPECT_TRUE(cert.strict);
            EXPECT_EQ(cert.arithmetic, Arithmetic::exact);
            EXPECT_EQ(cert.rank_p, static_cast<std::size_t>(l + 1));
            EXPECT_EQ(cert.cols, static_cast<std::size_t>(l + 2));
        }

    auto degenerate = make_op(ctx, 0, {"0*u - 1"});
    for (const auto& x : sample_points(1, 5, 2)) {
        auto cert = rank_condition(degenerate, x, 0);
        EXPECT_FALSE(cert.holds);
        EXPECT_EQ(cert.rank_p, 0u);
        EXPECT_EQ(cert.rank_q, 1u);
    }

    auto xux = make_op(ctx, 1, {"x*u_x - 1"});
    EXPECT_FALSE(rank_condition(xux, {Rational(0)}, 0).holds);
    EXPECT_TRUE(rank_condition(xux, {Rational(1, 2)}, 2).strict);

    auto trig = make_op(ctx, 1, {"u_x - sin(x)"});
    auto cert = rank_condition(trig, {Rational(1, 3)}, 1);
    EXPECT_EQ(cert.arithmetic, Arithmetic::floating);
    EXPECT_TRUE(cert.strict);

    EXPECT_THROW(rank_condition(make_op(ctx, 1, {"u_x^2 - 1"}), {Rational(0)}, 0), NotLinearError);
}

TEST(Solve, ExponentialSeries)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 1, {"u_x - u"});
    JetSeed seed{{{0, MultiIndex({0})}, Number(Rational(1))}};
    auto res = solve_jets_triangular(op, 10, {Rational(0)}, seed);
    ASSERT_TRUE(res.ok()) << res.message;
    // oracle: derivatives of the truncated series Σ x^k/k! at 0
    std::vector<Expr> terms;
    Rational fact = 1;
    for (int k = 0; k <= 12; ++k) {
        if (k) fact *= k;
        terms.push_back(Expr(Rational(1) / fact) * pow(parse("x", ctx), k));
    }
    auto oracle = jet_of_function(sum(terms), {Rational(0)}, 11, ctx);
    for (int k = 0; k <= 11; ++k) {
        const Number& v = res.jet->at(0, MultiIndex({k}));
        ASSERT_TRUE(v.is_exact());
        EXPECT_EQ(v.rational(), oracle.at(0, MultiIndex({k})).rational());
        EXPECT_EQ(v.rational(), 1);
    }
}

TEST(Solve, SquareRootTieBreak)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 1, {"u_x^2 - 1"});
    for (const auto& x : sample_points(1, 3, 5)) {
        auto res = solve_jets_triangular(op, 0, x);
        ASSERT_TRUE(res.ok()) << res.message;
        const Number& ux = res.jet->at(0, MultiIndex({1}));
        ASSERT_TRUE(ux.is_exact());
        EXPECT_EQ(ux.rational(), 1);
        EXPECT_EQ(res.jet->at(0, MultiIndex({0})).rational(), 0);
    }
    auto higher = solve_jets_triangular(op, 3, {Rational(1, 4)});
    ASSERT_TRUE(higher.ok());
    for (int k = 2; k <= 4; ++k) EXPECT_EQ(higher.jet->at(0, MultiIndex({k})).rational(), 0);
}

TEST(Solve, EmptyRange)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 1, {"u_x^2 + 1"});
    auto res = solve_jets_triangular(op, 0, {Rational(1, 3)});
    EXPECT_EQ(res.status, SolveStatus::no_solution);
    EXPECT_EQ(res.failed_level, 0);
    EXPECT_GT(res.residual_floor, 0.5);
    EXPECT_FALSE(res.jet);
}

TEST(Solve, AffineLevelInconsistent)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 0, {"0*u - 1"});
    auto res = solve_jets_triangular(op, 0, {Rational(0)});
    EXPECT_EQ(res.status, SolveStatus::no_solution);
    EXPECT_EQ(res.residual_floor, 1.0);
}

TEST(Solve, SumOfSquaresVanishesAtSolvedJets)
{
    auto ctx = context({"x", "y"});
    std::vector<PdeOperator> ops{make_op(ctx, 1, {"u_x^2 + u_y^2 - 1 - x^2"}), make_op(ctx, 2, {"u_xx + u_yy - 1 - x*y"}),
                                 make_op(ctx, 1, {"u_x*u_y - x"}), make_op(ctx, 1, {"u_x + u*u_y - y"})};
    for (const auto& op : ops)
        for (const auto& x : sample_points(2, 4, 8))
            for (int l = 0; l <= 2; ++l) {
                auto res = solve_jets_triangular(op, l, x);
                ASSERT_TRUE(res.ok()) << res.message;
                auto sys = prolong(op, l);
                Number sq = evaluate_at_jet(sum_of_squares(sys), x, *res.jet, ctx);
                double bound = static_cast<double>(sys.size()) * 1e-18;
                if (res.jet->arithmetic() == Arithmetic::exact)
                    EXPECT_TRUE(sq.is_exact() && sq.is_zero());
                else
                    EXPECT_LE(sq.to_double(), bound);
                // each prolonged equation vanishes at the same jet
                for (const auto& [key, f] : sys.equations())
                    EXPECT_LE(std::abs(evaluate_at_jet(f, x, *res.jet, ctx).to_double()), 1e-9);
            }
}

TEST(Solve, RankAndSolveAgree)
{
    auto ctx = context({"x", "y"});
    std::vector<PdeOperator> corpus{
        make_op(ctx, 1, {"x*u_x - 1"}),
        make_op(ctx, 1, {"y*u_x + x*u_y - 1"}),
        make_op(ctx, 1, {"u_x - u"}),
        make_op(ctx, 2, {"x*u_xx + u - 1"}),
        make_op(ctx, 0, {"x*u - 1"}),
        make_op(ctx, 0, {"0*u - x"}),
        make_op(ctx, 2, {"u_xx + u_yy - 1 - x*y"}),
        make_op(ctx, 1, {"x*y*u_x - y"}),
        make_op(ctx, 1, {"u_x - x", "u_y - y"}),
        make_op(ctx, 1, {"u_x - y", "u_y - x^2"}),
        make_op(ctx, 1, {"x*u_x + y", "u_y"}),
    };
    std::vector<Point> points = sample_points(2, 4, 11);
    points.push_back({0, 0});
    points.push_back({0, Rational(1, 2)});
    int agreements = 0;
    for (const auto& op : corpus)
        for (const auto& x : points)
            for (int l = 0; l <= 2; ++l) {
                bool holds = rank_condition(op, x, l).holds;
                bool solved = solve_jets_triangular(op, l, x).ok();
                EXPECT_EQ(holds, solved) << to_string(op.equations()[0]) << " at " << point_string(x) << " l=" << l;
                ++agreements;
            }
    EXPECT_GT(agreements, 150);
}

TEST(RangeCheck, Laplace)
{
    auto ctx = context({"x", "y"});
    auto op = make_op(ctx, 2, {"u_xx + u_yy - 1 - x*y"});
    auto report = range_condition_check(op, sample_points(2, 5, 3), 2);
    EXPECT_TRUE(report.linear);
    ASSERT_EQ(report.entries.size(), 15u);
    for (const auto& e : report.entries) {
        EXPECT_EQ(e.outcome, RangeOutcome::rank_certified);
        ASSERT_TRUE(e.certificate);
        EXPECT_TRUE(e.certificate->strict);
        EXPECT_EQ(e.certificate->arithmetic, Arithmetic::exact);
    }
}

TEST(RangeCheck, Eikonal)
{
    auto ctx = context({"x", "y"});
    auto op = make_op(ctx, 1, {"u_x^2 + u_y^2 - 1 - x^2"});
    auto report = range_condition_check(op, sample_points(2, 5, 4), 2);
    EXPECT_FALSE(report.linear);
    for (const auto& e : report.entries) {
        EXPECT_EQ(e.outcome, RangeOutcome::solved) << e.message;
        EXPECT_LE(e.residual, 1e-9);
    }
}

TEST(RangeCheck, NoSolutionControl)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 1, {"u_x^2 + 1"});
    auto report = range_condition_check(op, sample_points(1, 5, 6), 2);
    for (const auto& e : report.entries) {
        EXPECT_EQ(e.outcome, RangeOutcome::no_solution);
        EXPECT_GT(e.residual, 0);
    }
}

TEST(RangeCheck, Lewy)
{
    auto op = lewy();
    auto report = range_condition_check(op, sample_points(3, 5, 12), 2);
    EXPECT_TRUE(report.linear);
    for (const auto& e : report.entries) {
        ASSERT_TRUE(e.certificate);
        EXPECT_TRUE(e.certificate->strict) << point_string(e.point) << " l=" << e.level;
    }
}
