#include "test_support.hpp"

#include "jetsol/construct/bracket.hpp"
#include "jetsol/construct/dense.hpp"
#include "jetsol/construct/sequence.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace jetsol;
using namespace jetsol::testing;

namespace {

PdeOperator make_op(const VariableContext& ctx, int order, const std::vector<std::string>& eqs, Interval iv = {0, 1})
{
    std::vector<Expr> g;
    for (const auto& e : eqs) g.push_back(parse(e, ctx));
    return PdeOperator(ctx, order, g, std::vector<Interval>(ctx.dim(), iv));
}

Point pt(std::initializer_list<Rational> xs) { return Point(xs); }

/// D^p(G_j at the jets of U)(z) for every prolonged equation, evaluated at the jet of U.
std::vector<Number> prolonged_residuals(const PdeOperator& op, const std::vector<AssembledFunction>& u, const Point& z, int level)
{
    auto sys = prolong(op, level);
    Jet jet = jet_of_assembled(u, z, op.order() + level, op.context());
    std::vector<Number> out;
    for (const auto& [key, f] : sys.equations()) out.push_back(evaluate_at_jet(f, z, jet, op.context()));
    return out;
}

}  // namespace

TEST(Dense, DyadicExamples)
{
    auto one = enumerate_dense({{0, 1}}, DenseScheme::dyadic, 3);
    EXPECT_EQ(one, (std::vector<Point>{pt({Rational(1, 2)}), pt({Rational(1, 4)}), pt({Rational(3, 4)})}));
    EXPECT_EQ(enumerate_dense({{-1, 3}}, DenseScheme::dyadic, 1), (std::vector<Point>{pt({Rational(1)})}));
    auto two = enumerate_dense({{0, 1}, {0, 1}}, DenseScheme::dyadic, 4);
    std::vector<Point> expected{pt({Rational(1, 2), Rational(1, 2)}), pt({Rational(1, 4), Rational(1, 4)}),
                                pt({Rational(1, 4), Rational(3, 4)}), pt({Rational(3, 4), Rational(1, 4)})};
    EXPECT_EQ(two, expected);
    EXPECT_THROW(enumerate_dense({{1, 1}}, DenseScheme::dyadic, 1), std::invalid_argument);
    EXPECT_THROW(enumerate_dense({}, DenseScheme::dyadic, 1), std::invalid_argument);
}

TEST(Dense, DiagonalExamples)
{
    auto one = enumerate_dense({{0, 1}}, DenseScheme::diagonal, 5);
    std::vector<Point> expected{pt({Rational(1, 2)}), pt({Rational(1, 3)}), pt({Rational(2, 3)}), pt({Rational(1, 4)}),
                                pt({Rational(3, 4)})};
    EXPECT_EQ(one, expected);
    auto two = enumerate_dense({{0, 1}, {0, 1}}, DenseScheme::diagonal, 3);
    EXPECT_EQ(two[0], pt({Rational(1, 2), Rational(1, 2)}));
    EXPECT_EQ(two[1], pt({Rational(1, 2), Rational(1, 3)}));
    EXPECT_EQ(two[2], pt({Rational(1, 3), Rational(1, 2)}));
}

TEST(Dense, DistinctInteriorAndDense)
{
    std::vector<Interval> box{{-1, 1}, {0, Rational(1, 3)}};
    for (auto scheme : {DenseScheme::dyadic, DenseScheme::diagonal}) {
        auto pts = enumerate_dense(box, scheme, 6000);
        std::set<Point> seen(pts.begin(), pts.end());
        EXPECT_EQ(seen.size(), pts.size());
        for (const auto& p : pts)
            for (std::size_t i = 0; i < 2; ++i) {
                EXPECT_LT(box[i].lo, p[i]);
                EXPECT_LT(p[i], box[i].hi);
            }
        // every ball of radius r (in unit-cube coordinates) well inside the box is met
        Rational r = scheme == DenseScheme::dyadic ? Rational(1, 64) : Rational(1, 8);
        ExprGenerator gen({}, 31);
        for (int trial = 0; trial < 25; ++trial) {
            Point c;
            for (std::size_t i = 0; i < 2; ++i) {
                Rational t = make_rational(2 + static_cast<int>(gen.index(60)), 64);
                c.push_back(box[i].lo + (box[i].hi - box[i].lo) * t);
            }
            bool met = false;
            for (const auto& p : pts) {
                Rational d = 0;
                for (std::size_t i = 0; i < 2; ++i) {
                    Rational u = (p[i] - c[i]) / (box[i].hi - box[i].lo);
                    d += u * u;
                }
                if (d < r * r) {
                    met = true;
                    break;
                }
            }
            EXPECT_TRUE(met) << to_string(scheme) << " " << point_string(c);
        }
    }
}

TEST(Taylor, Examples)
{
    auto ctx = context({"x"});
    Jet j(1, 1, 2);
    j.set(0, MultiIndex({0}), Number(Rational(1)));
    j.set(0, MultiIndex({1}), Number(Rational(2)));
    j.set(0, MultiIndex({2}), Number(Rational(6)));
    auto p = taylor_from_jet({Rational(0)}, j, ctx);
    EXPECT_TRUE(structurally_equal(p[0], parse("1 + 2*x + 3*x^2", ctx)));
    EXPECT_TRUE(taylor_from_jet({Rational(5)}, Jet(1, 1, 3), ctx)[0].is_zero());

    auto ctx2 = context({"x", "y"});
    Jet k(2, 1, 2);
    k.set(0, MultiIndex({1, 1}), Number(Rational(4)));
    EXPECT_TRUE(structurally_equal(taylor_from_jet({0, 0}, k, ctx2)[0], parse("4*x*y", ctx2)));
}

TEST(Taylor, ReproducesJet)
{
    auto ctx = context({"x", "y"}, {"u", "v"});
    ExprGenerator gen({}, 41);
    for (int trial = 0; trial < 20; ++trial) {
        Jet j(2, 2, 4);
        for (std::size_t u = 0; u < 2; ++u)
            for (const auto& p : j.indices()) j.set(u, p, trial % 2 ? Number(gen.uniform(-3, 3)) : Number(gen.small_rational()));
        Point a{gen.small_rational(), gen.small_rational()};
        auto polys = taylor_from_jet(a, j, ctx);
        auto back = jet_of_function(polys, a, 4, ctx);
        for (std::size_t u = 0; u < 2; ++u)
            for (const auto& p : j.indices()) {
                ASSERT_TRUE(back.at(u, p).is_exact());
                EXPECT_EQ(back.at(u, p).rational(), j.at(u, p).to_rational());
            }
    }
}

TEST(Bumps, Examples)
{
    auto ctx = context({"x"});
    auto two = make_bumps({{Rational(1, 4)}, {Rational(3, 4)}}, {{0, 1}}, ctx);
    EXPECT_EQ(two[0]->r_out, Rational(1, 8));
    EXPECT_EQ(two[1]->r_out, Rational(1, 8));
    EXPECT_EQ(two[0]->r_in, Rational(1, 16));
    auto one = make_bumps({{Rational(1, 2)}}, {{0, 1}}, ctx, Rational(1, 3));
    EXPECT_EQ(one[0]->r_out, Rational(1, 6));
    EXPECT_THROW(make_bumps({{Rational(1, 2)}, {Rational(1, 2)}}, {{0, 1}}, ctx), std::invalid_argument);
    EXPECT_THROW(make_bumps({{Rational(1)}}, {{0, 1}}, ctx), std::invalid_argument);
}

TEST(Bumps, DisjointInsideBox)
{
    auto ctx = context({"x", "y"});
    std::vector<Interval> box{{-1, 1}, {-1, 1}};
    auto pts = enumerate_dense(box, DenseScheme::diagonal, 40);
    auto bumps = make_bumps(pts, box, ctx);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t d = 0; d < 2; ++d) {
            EXPECT_LE(box[d].lo, pts[i][d] - bumps[i]->r_out);
            EXPECT_LE(pts[i][d] + bumps[i]->r_out, box[d].hi);
        }
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Rational r = bumps[i]->r_out + bumps[j]->r_out;
            EXPECT_GT(bumps[i]->squared_radius(pts[j]), r * r);
        }
    }
}

TEST(Bumps, ProfileValues)
{
    auto ctx = context({"x", "y"});
    auto b = make_bumps({{0, 0}}, {{-1, 1}, {-1, 1}}, ctx)[0];
    Expr e = bump(b);
    ExprGenerator gen({}, 3);
    for (int trial = 0; trial < 200; ++trial) {
        FloatAssignment at{{ctx.space(0), gen.uniform(-0.6, 0.6)}, {ctx.space(1), gen.uniform(-0.6, 0.6)}};
        double v = evaluate_float(e, at);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    auto exact_at = [&](Rational x, Rational y) { return evaluate_exact(e, {{ctx.space(0), x}, {ctx.space(1), y}}); };
    EXPECT_EQ(*exact_at(Rational(1, 8), 0), 1);
    EXPECT_EQ(*exact_at(Rational(1, 2), Rational(1, 2)), 0);
    EXPECT_FALSE(exact_at(Rational(3, 8), 0));
    Expr d = differentiate(e, ctx.space(0));
    EXPECT_EQ(*evaluate_exact(d, {{ctx.space(0), Rational(1, 8)}, {ctx.space(1), 0}}), 0);
    EXPECT_EQ(*evaluate_exact(d, {{ctx.space(0), Rational(3, 4)}, {ctx.space(1), 0}}), 0);
}

TEST(DiscreteSet, Examples)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 1, {"u_x - 1"});
    auto res = solve_on_discrete_set(op, {{Rational(1, 2)}}, 0);
    ASSERT_TRUE(res.ok());
    Expr u = res.solution->functions[0].expression();
    auto t = apply_operator(make_op(ctx, 1, {"u_x"}), {u}, {Rational(1, 2)});
    ASSERT_TRUE(t[0].is_exact());
    EXPECT_EQ(t[0].rational(), 1);
    EXPECT_EQ(apply_operator(op, {u}, {Rational(1, 2)})[0].rational(), 0);

    auto bad = solve_on_discrete_set(make_op(ctx, 1, {"u_x^2 + 1"}), {{Rational(1, 2)}, {Rational(1, 4)}}, 0);
    ASSERT_FALSE(bad.ok());
    EXPECT_EQ(bad.failure->index, 0u);
    EXPECT_EQ(bad.failure->result.status, SolveStatus::no_solution);
    EXPECT_GT(bad.failure->result.residual_floor, 0);

    auto ctx2 = context({"x", "y"});
    auto eik = make_op(ctx2, 1, {"u_x^2 + u_y^2 - 1 - x^2"});
    Point a{Rational(1, 3), Rational(2, 3)};
    auto one = solve_on_discrete_set(eik, {a}, 0);
    ASSERT_TRUE(one.ok());
    EXPECT_NEAR(apply_operator(eik, {one.solution->functions[0].expression()}, a)[0].to_double(), 0.0, 1e-12);
}

TEST(DiscreteSet, PlateauExactness)
{
    auto ctx = context({"x", "y"});
    auto op = make_op(ctx, 2, {"u_xx + u_yy - 1 - x*y"});
    auto pts = enumerate_dense(op.box(), DenseScheme::dyadic, 4);
    auto res = solve_on_discrete_set(op, pts, 1);
    ASSERT_TRUE(res.ok());
    const auto& sol = *res.solution;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Jet j = jet_of_assembled(sol.functions, pts[i], 3, ctx);
        for (const auto& p : j.indices()) {
            ASSERT_TRUE(j.at(0, p).is_exact());
            EXPECT_EQ(j.at(0, p).rational(), sol.jets[i].at(0, p).rational());
        }
        // the full symbolic expression agrees with the support-filtered evaluation
        auto full = jet_of_function(sol.functions[0].expression(), pts[i], 2, ctx);
        for (const auto& p : full.indices()) EXPECT_EQ(full.at(0, p).rational(), j.at(0, p).rational());
    }
}

TEST(DiscreteSet, SupportDiscipline)
{
    auto ctx = context({"x", "y"});
    auto op = make_op(ctx, 1, {"u_x - y", "u_y - x"});
    auto pts = enumerate_dense(op.box(), DenseScheme::dyadic, 3);
    auto res = solve_on_discrete_set(op, pts, 2);
    ASSERT_TRUE(res.ok());
    const auto& f = res.solution->functions[0];
    Expr e = f.expression();
    ExprGenerator gen({}, 8);
    int outside = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Point x{make_rational(1 + static_cast<int>(gen.index(127)), 128), make_rational(1 + static_cast<int>(gen.index(127)), 128)};
        bool in_support = false;
        for (const auto& b : res.solution->bumps) in_support = in_support || b->squared_radius(x) < b->r_out * b->r_out;
        if (in_support) continue;
        ++outside;
        Number v = f.value(x, ctx);
        ASSERT_TRUE(v.is_exact());
        EXPECT_EQ(v.rational(), 0);
        auto ev = evaluate_exact(e, {{ctx.space(0), x[0]}, {ctx.space(1), x[1]}});
        ASSERT_TRUE(ev);
        EXPECT_EQ(*ev, 0);
    }
    EXPECT_GT(outside, 100);
}

TEST(DiscreteSet, SmoothnessProbe)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 1, {"u_x - u"});
    auto res = solve_on_discrete_set(op, {{Rational(1, 2)}}, 2);
    ASSERT_TRUE(res.ok());
    Expr e = res.solution->functions[0].expression();
    const auto& b = *res.solution->bumps[0];
    double edge = b.center[0].get_d() + b.r_out.get_d();
    double inner = b.center[0].get_d() + b.r_in.get_d();
    auto f = [&](double x) { return evaluate_float(e, {{ctx.space(0), x}}); };
    // central differences of order k on a stencil straddling each support boundary
    auto fd = [&](int k, double x, double h) {
        double s = 0, c = 1;
        for (int i = 0; i <= k; ++i) {
            s += c * f(x + (k / 2.0 - i) * h) * ((i % 2) ? -1 : 1);
            c = c * (k - i) / (i + 1);
        }
        return s / std::pow(h, k);
    };
    DerivativeTable table(e, ctx.space_variables());
    for (int k = 1; k <= 4; ++k) {
        double sup = 0;
        for (int i = 0; i <= 400; ++i) {
            double x = b.center[0].get_d() - b.r_out.get_d() * 1.1 + i * (2.2 * b.r_out.get_d() / 400);
            sup = std::max(sup, std::abs(evaluate_float(table.get(MultiIndex({k})), {{ctx.space(0), x}})));
        }
        for (double x0 : {edge, inner})
            for (double h : {1e-1 * b.r_in.get_d(), 1e-2 * b.r_in.get_d(), 1e-3})
                EXPECT_LE(std::abs(fd(k, x0, h)), 1.5 * sup + 1e-6) << "order " << k << " at " << x0 << " h=" << h;
    }
}

TEST(Sequence, ZeroDerivativeStagesVanish)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 1, {"u_x"});
    auto z = enumerate_dense(op.box(), DenseScheme::dyadic, 4);
    auto seq = construct_sequence(op, z, default_schedule(4));
    ASSERT_TRUE(seq.complete());
    for (std::size_t nu = 0; nu < seq.stages.size(); ++nu) {
        EXPECT_EQ(seq.stages[nu].points.size(), nu + 1);
        for (std::size_t j = 0; j <= nu; ++j)
            for (const auto& r : prolonged_residuals(op, seq.stages[nu].functions, z[j], seq.schedule[nu])) {
                ASSERT_TRUE(r.is_exact());
                EXPECT_EQ(r.rational(), 0);
            }
    }
}

TEST(Sequence, SingleStage)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 1, {"u_x - u"});
    auto seq = construct_sequence(op, {{Rational(1, 2)}}, {0});
    ASSERT_TRUE(seq.complete());
    ASSERT_EQ(seq.stages.size(), 1u);
    EXPECT_EQ(seq.stages[0].bumps.size(), 1u);
}

TEST(Sequence, ScheduleValidation)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 1, {"u_x"});
    auto z = enumerate_dense(op.box(), DenseScheme::dyadic, 4);
    EXPECT_THROW(construct_sequence(op, z, {0, 2, 1}), std::invalid_argument);
    EXPECT_THROW(construct_sequence(op, z, {}), std::invalid_argument);
    EXPECT_THROW(construct_sequence(op, z, {0, 0, 0, 0, 0}), std::invalid_argument);
}

TEST(Sequence, PartialFailure)
{
    auto ctx = context({"x"});
    // solvable only where x > 1/3
    auto op = make_op(ctx, 1, {"u_x^2 - (x - 1/3)"});
    auto z = enumerate_dense(op.box(), DenseScheme::dyadic, 3);
    auto seq = construct_sequence(op, z, {0, 0, 0});
    ASSERT_FALSE(seq.complete());
    EXPECT_EQ(seq.stages.size(), 1u);
    EXPECT_EQ(seq.failure->stage, 1u);
    EXPECT_EQ(seq.failure->point.index, 1u);
    EXPECT_NE(seq.failure->describe().find("1/4"), std::string::npos);
}

TEST(Bracket, Examples)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 0, {"u"}, {-1, 1});
    std::vector<Point> pts{{Rational(-1, 2)}, {Rational(0)}, {Rational(1, 3)}};
    auto res = bracket_interpolate(op, Expr(0), Expr(-1), Expr(1), pts, {Rational(0)}, 1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_EQ(res.lambdas[i], Rational(1, 2));
        EXPECT_EQ(res.function.value(pts[i], ctx).rational(), 0);
    }

    auto grad = make_op(ctx, 1, {"u_x"}, {-1, 1});
    auto g = bracket_interpolate(grad, Expr(0), parse("-x", ctx), parse("x", ctx), {{Rational(0)}}, {Rational(0)}, 1);
    EXPECT_EQ(g.lambdas[0], Rational(1, 2));
    EXPECT_EQ(g.residuals[0], 0.0);

    try {
        bracket_interpolate(op, Expr(0), Expr(1), Expr(2), pts, {Rational(0)}, 1);
        FAIL() << "expected rejection";
    } catch (const BracketError& err) {
        EXPECT_EQ(err.index(), 0u);
    }
}

TEST(Bracket, BisectionCorrectness)
{
    auto ctx = context({"x"});
    auto op = make_op(ctx, 1, {"u_x^2 + u"}, {-1, 1});
    Expr f = parse("sin(x)", ctx);
    Expr lo = Expr(-2), hi = parse("2 + x^2", ctx);
    std::vector<Point> pts = enumerate_dense(op.box(), DenseScheme::dyadic, 7);
    auto res = bracket_interpolate(op, f, lo, hi, pts, {Rational(0)}, 1, 1e-12);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_LE(res.residuals[i], 1e-12);
        // the blended function equals U_λ on the plateau, so T U(a) = f(a)
        Expr u = res.function.expression();
        double t = apply_operator(op, {u}, pts[i])[0].to_double();
        EXPECT_NEAR(t, std::sin(pts[i][0].get_d()), 1e-11);
        EXPECT_GT(res.lambdas[i], 0);
        EXPECT_LT(res.lambdas[i], 1);
    }
}
