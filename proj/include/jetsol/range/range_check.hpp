#pragma once

#include "jetsol/range/solve.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jetsol {

enum class RangeOutcome { solved, rank_certified, no_solution, solver_failed };

inline std::string to_string(RangeOutcome o)
{
    switch (o) {
    case RangeOutcome::solved: return "solved";
    case RangeOutcome::rank_certified: return "rank-certified";
    case RangeOutcome::no_solution: return "no-solution";
    default: return "solver-failed";
    }
}

struct RangeEntry {
    Point point;
    int level = 0;
    RangeOutcome outcome = RangeOutcome::solver_failed;
    std::optional<RankCertificate> certificate;
    std::optional<Jet> jet;
    double residual = 0;  // max residual when solved, residual floor otherwise
    std::string message;
};

struct RangeReport {
    bool linear = false;
    int max_level = 0;
    std::vector<RangeEntry> entries;

    bool all_ok() const
    {
        for (const auto& e : entries)
            if (e.outcome != RangeOutcome::solved && e.outcome != RangeOutcome::rank_certified) return false;
        return !entries.empty();
    }
};

/// Linear operators get a rank certificate per level; nonlinear ones are solved once at the
/// top level, since the level-by-level solve at l is a prefix of the solve at l_max.
inline RangeReport range_condition_check(const PdeOperator& op, const std::vector<Point>& points, int max_level,
                                         SolveOptions opts = {})
{
    RangeReport report;
    report.max_level = max_level;
    std::vector<std::optional<LinearDecomposition>> decs;
    for (int l = 0; l <= max_level; ++l) decs.push_back(linearize(prolong(op, l), op.context()));
    report.linear = decs.front().has_value();

    std::optional<JetSolver> solver;
    if (!report.linear) solver.emplace(op, max_level, opts);

    for (const auto& x : points) {
        if (!op.contains(x)) throw std::invalid_argument("point " + point_string(x) + " lies outside the domain");
        if (report.linear) {
            for (int l = 0; l <= max_level; ++l) {
                RangeEntry e;
                e.point = x;
                e.level = l;
                try {
                    auto cert = certify_rank(assemble_linear_system(*decs[static_cast<std::size_t>(l)], x, op.context()), x, l,
                                             opts.rank_tol);
                    e.outcome = cert.holds ? RangeOutcome::rank_certified : RangeOutcome::no_solution;
                    if (!cert.holds) e.message = "rank P " + std::to_string(cert.rank_p) + " < rank Q " + std::to_string(cert.rank_q);
                    e.certificate = cert;
                } catch (const EvaluationError& err) {
                    e.outcome = RangeOutcome::solver_failed;
                    e.message = err.what();
                }
                report.entries.push_back(std::move(e));
            }
            continue;
        }
        auto res = solver->solve(x);
        for (int l = 0; l <= max_level; ++l) {
            RangeEntry e;
                e.point = x;
                e.level = l;
            if (res.ok()) {
                e.outcome = RangeOutcome::solved;
                e.jet = res.jet->truncated(op.order() + l);
                auto sub = prolong(op, l);
                std::map<Variable, Number> at = bind_point(op.context(), x);
                e.jet->bind(op.context(), at);
                for (const auto& [key, f] : sub.equations()) e.residual = std::max(e.residual, std::abs(evaluate(f, at).to_double()));
            } else if (res.status == SolveStatus::no_solution && l >= res.failed_level) {
                e.outcome = RangeOutcome::no_solution;
                e.residual = res.residual_floor;
                e.message = res.message;
            } else if (res.failed_level >= 0 && l < res.failed_level) {
                // a later level failed; rerun this level alone
                auto lower = solve_jets_triangular(op, l, x, {}, opts);
                e.outcome = lower.ok() ? RangeOutcome::solved : RangeOutcome::solver_failed;
                if (lower.ok()) e.jet = lower.jet;
                e.residual = lower.ok() ? lower.max_residual : lower.residual_floor;
                e.message = lower.message;
            } else {
                e.outcome = RangeOutcome::solver_failed;
                e.residual = res.residual_floor;
                e.message = res.message;
            }
            report.entries.push_back(std::move(e));
        }
    }
    return report;
}

}  // namespace jetsol
