#pragma once

#include "jetsol/construct/assembled.hpp"
#include "jetsol/construct/taylor.hpp"
#include "jetsol/range/solve.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace jetsol {

/// A single-stage solution: a jet per point, glued by disjoint bumps.
struct DiscreteSolution {
    std::vector<Point> points;
    int level = 0;
    std::vector<Jet> jets;
    std::vector<BumpPtr> bumps;
    std::vector<AssembledFunction> functions;  // one per unknown
};

struct PointFailure {
    std::size_t index = 0;
    Point point;
    JetSolveResult result;

    std::string describe() const
    {
        std::string s = to_string(result.status) + " at point " + std::to_string(index) + " " + point_string(point);
        if (!result.message.empty()) s += ": " + result.message;
        return s;
    }
};

struct DiscreteOutcome {
    std::optional<DiscreteSolution> solution;
    std::optional<PointFailure> failure;
    bool ok() const { return solution.has_value(); }
};

/// Jet solvers cached per prolongation level.
class SolverCache {
public:
    SolverCache(const PdeOperator& op, SolveOptions opts) : op_(op), opts_(opts) {}

    const JetSolver& at(int level)
    {
        auto it = solvers_.find(level);
        if (it == solvers_.end()) it = solvers_.emplace(level, std::make_unique<JetSolver>(op_, level, opts_)).first;
        return *it->second;
    }

    const PdeOperator& op() const { return op_; }

private:
    PdeOperator op_;
    SolveOptions opts_;
    std::map<int, std::unique_ptr<JetSolver>> solvers_;
};

inline AssembledFunction glue(const std::vector<BumpPtr>& bumps, const std::vector<Expr>& polys)
{
    std::vector<AssembledFunction::Piece> pieces;
    for (std::size_t i = 0; i < bumps.size(); ++i) pieces.push_back({bumps[i], polys[i]});
    return AssembledFunction(std::move(pieces));
}

/// U = Σ_a ψ_a P_a with P_a the Taylor polynomial of a level-l jet solution at a.
inline DiscreteOutcome solve_on_discrete_set(SolverCache& cache, const std::vector<Point>& points, int level,
                                             const Rational& shrink = Rational(1, 2), const JetSeed& seed = {})
{
    const PdeOperator& op = cache.op();
    const auto& ctx = op.context();
    DiscreteOutcome out;
    DiscreteSolution sol;
    sol.points = points;
    sol.level = level;
    sol.bumps = make_bumps(points, op.box(), ctx, shrink);
    const JetSolver& solver = cache.at(level);
    std::vector<std::vector<Expr>> polys(ctx.unknowns());
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto res = solver.solve(points[i], seed);
        if (!res.ok()) {
            out.failure = PointFailure{i, points[i], res};
            return out;
        }
        auto taylor = taylor_from_jet(points[i], *res.jet, ctx);
        for (std::size_t u = 0; u < ctx.unknowns(); ++u) polys[u].push_back(taylor[u]);
        sol.jets.push_back(std::move(*res.jet));
    }
    for (std::size_t u = 0; u < ctx.unknowns(); ++u) sol.functions.push_back(glue(sol.bumps, polys[u]));
    out.solution = std::move(sol);
    return out;
}

inline DiscreteOutcome solve_on_discrete_set(const PdeOperator& op, const std::vector<Point>& points, int level,
                                             SolveOptions opts = {}, const Rational& shrink = Rational(1, 2))
{
    SolverCache cache(op, opts);
    return solve_on_discrete_set(cache, points, level, shrink);
}

/// Throws unless l is non-empty and non-decreasing.
inline void validate_schedule(const std::vector<int>& l)
{
    if (l.empty()) throw std::invalid_argument("schedule must list at least one order");
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i] < 0) throw std::invalid_argument("schedule orders must be non-negative");
        if (i && l[i] < l[i - 1])
            throw std::invalid_argument("schedule must be non-decreasing (l_" + std::to_string(i) + " = " +
                                        std::to_string(l[i]) + " < l_" + std::to_string(i - 1) + " = " +
                                        std::to_string(l[i - 1]) + ")");
    }
}

/// l_ν = ν.
inline std::vector<int> default_schedule(std::size_t stages)
{
    std::vector<int> l;
    for (std::size_t i = 0; i < stages; ++i) l.push_back(static_cast<int>(i));
    return l;
}

struct StageFailure {
    std::size_t stage = 0;
    PointFailure point;
    std::string describe() const { return "stage " + std::to_string(stage) + ": " + point.describe(); }
};

/// s_ν for ν = 0..N; stage ν uses z_0..z_ν at prolongation level l_ν.
struct SolutionSequence {
    PdeOperator op;
    std::vector<Point> points;
    std::vector<int> schedule;
    std::vector<DiscreteSolution> stages;
    std::optional<StageFailure> failure;

    bool complete() const { return !failure && stages.size() == schedule.size(); }
};

inline SolutionSequence construct_sequence(const PdeOperator& op, const std::vector<Point>& z, const std::vector<int>& schedule,
                                           SolveOptions opts = {}, const Rational& shrink = Rational(1, 2))
{
    validate_schedule(schedule);
    if (z.size() < schedule.size())
        throw std::invalid_argument("need " + std::to_string(schedule.size()) + " points for " +
                                    std::to_string(schedule.size()) + " stages, got " + std::to_string(z.size()));
    SolutionSequence seq{op, {z.begin(), z.begin() + static_cast<std::ptrdiff_t>(schedule.size())}, schedule, {}, {}};
    SolverCache cache(op, opts);
    for (std::size_t nu = 0; nu < schedule.size(); ++nu) {
        std::vector<Point> prefix(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(nu + 1));
        auto outcome = solve_on_discrete_set(cache, prefix, schedule[nu], shrink);
        if (!outcome.ok()) {
            seq.failure = StageFailure{nu, *outcome.failure};
            break;
        }
        seq.stages.push_back(std::move(*outcome.solution));
    }
    return seq;
}

}  // namespace jetsol
