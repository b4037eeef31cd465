#pragma once

#include "jetsol/range/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace jetsol {

struct SolveOptions {
    double newton_tol = 1e-12;  // level-0 residual target
    double tol = 1e-9;          // acceptance bound on every prolonged residual
    int max_iterations = 200;
    double rank_tol = 1e-9;
};

/// Partial jet guess: pinned values for some (unknown, p) with |p| ≤ m.
using JetSeed = std::map<std::pair<std::size_t, MultiIndex>, Number>;

enum class SolveStatus { solved, no_solution, solver_failed };

inline std::string to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::solved: return "solved";
    case SolveStatus::no_solution: return "no-solution";
    default: return "solver-failed";
    }
}

struct JetSolveResult {
    SolveStatus status = SolveStatus::solver_failed;
    std::optional<Jet> jet;
    int failed_level = -1;
    double residual_floor = 0;  // smallest residual reached when no jet was found
    double max_residual = 0;    // max |F_{j,p}| at the returned jet
    std::string message;

    bool ok() const { return status == SolveStatus::solved; }
};

namespace detail {

/// Best rational with denominator ≤ max_den within tol of v, by continued fractions.
inline std::optional<Rational> rationalize(double v, double tol, long max_den = 1000000)
{
    if (!std::isfinite(v)) return std::nullopt;
    Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double rest = v;
    for (int step = 0; step < 64; ++step) {
        double a = std::floor(rest);
        if (std::abs(a) > 1e18) return std::nullopt;
        Integer ai(static_cast<long>(a));
        Integer h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) return std::nullopt;
        Rational q(h2, k2);
        q.canonicalize();
        if (std::abs(q.get_d() - v) <= tol) return q;
        h0 = h1, h1 = h2, k0 = k1, k1 = k2;
        double frac = rest - a;
        if (frac == 0) return std::nullopt;
        rest = 1.0 / frac;
    }
    return std::nullopt;
}

}  // namespace detail

/// Level-by-level jet solver for one prolonged system. Level 0 is solved for all jets of
/// order ≤ m (exact least norm when affine, damped Newton otherwise); level L ≥ 1 is affine
/// in the jets of order m+L and is solved by least norm with lower jets fixed.
class JetSolver {
public:
    JetSolver(const PdeOperator& op, int level, SolveOptions opts = {})
        : op_(op), sys_(prolong(op, level)), opts_(opts)
    {
        const auto& ctx = op_.context();
        for (int L = 0; L <= level; ++L) {
            Level lv;
            lv.vars = L == 0 ? jet_columns(ctx, op_.order()) : jet_columns_of_order(ctx, op_.order() + L);
            std::set<Variable> own(lv.vars.begin(), lv.vars.end());
            for (const auto& key : sys_.keys_of_order(L)) {
                lv.equations.push_back(sys_.equations().at(key));
                std::vector<Expr> row;
                for (const auto& v : lv.vars) {
                    Expr d = differentiate(lv.equations.back(), v);
                    for (const auto& w : free_variables(d))
                        if (own.count(w)) lv.affine = false;
                    row.push_back(d);
                }
                lv.partials.push_back(std::move(row));
            }
            if (L > 0 && !lv.affine) throw std::logic_error("prolonged level is not affine in its top jets");
            levels_.push_back(std::move(lv));
        }
    }

    const ProlongedSystem& system() const { return sys_; }
    const PdeOperator& op() const { return op_; }

    JetSolveResult solve(const Point& x, const JetSeed& seed = {}) const
    {
        JetSolveResult out;
        const auto& ctx = op_.context();
        try {
            auto base = bind_point(ctx, x);
            const Level& lv0 = levels_.front();
            Outcome first = lv0.affine ? affine_level(lv0, base, seed) : newton_level(lv0, base, seed);
            if (!first.ok && first.stalled) {
                out.status = SolveStatus::solver_failed;
                out.failed_level = 0;
                out.residual_floor = first.floor;
                out.message = "Newton stalled at level 0 with residual " + double_string(first.floor);
                return out;
            }
            std::optional<std::pair<int, double>> blocked;
            if (!first.ok) blocked = {0, first.floor};
            std::vector<std::vector<Number>> candidates;
            if (first.ok) {
                candidates.push_back(first.values);
                for (const auto& alt : first.alternatives) candidates.push_back(alt);
            }
            // level-0 roots in tie-break order; a later root is tried only if an earlier one blocks
            for (const auto& cand : candidates) {
                auto known = base;
                for (std::size_t i = 0; i < lv0.vars.size(); ++i) known.insert_or_assign(lv0.vars[i], cand[i]);
                bool complete = true;
                for (std::size_t L = 1; L < levels_.size(); ++L) {
                    Outcome got = affine_level(levels_[L], known, {});
                    if (!got.ok) {
                        if (!blocked) blocked = {static_cast<int>(L), got.floor};
                        complete = false;
                        break;
                    }
                    for (std::size_t i = 0; i < levels_[L].vars.size(); ++i)
                        known.insert_or_assign(levels_[L].vars[i], got.values[i]);
                }
                if (complete) return finish(known);
            }
            if (auto global = global_linear(x)) return finish(*global);
            out.status = SolveStatus::no_solution;
            out.failed_level = blocked->first;
            out.residual_floor = blocked->second;
            out.message = "level " + std::to_string(blocked->first) + " inconsistent, residual floor " +
                          double_string(blocked->second);
        } catch (const EvaluationError& err) {
            out.status = SolveStatus::solver_failed;
            out.message = std::string("evaluation failed: ") + err.what();
        }
        return out;
    }

private:
    struct Level {
        std::vector<Variable> vars;
        std::vector<Expr> equations;
        std::vector<std::vector<Expr>> partials;
        bool affine = true;
    };

    struct Outcome {
        bool ok = false;
        bool stalled = false;
        std::vector<Number> values;
        std::vector<std::vector<Number>> alternatives;
        double floor = 0;
    };

    JetSolveResult finish(const std::map<Variable, Number>& known) const
    {
        JetSolveResult out;
        const auto& ctx = op_.context();
        Jet jet(ctx.dim(), ctx.unknowns(), sys_.top_order());
        for (std::size_t u = 0; u < ctx.unknowns(); ++u)
            for (const auto& p : jet.indices()) jet.set(u, p, known.at(ctx.jet(u, p)));
        bool within = true;
        for (const auto& [key, f] : sys_.equations()) {
            Number r = evaluate(f, known);
            double a = std::abs(r.to_double());
            out.max_residual = std::max(out.max_residual, a);
            within = within && (r.is_exact() ? r.is_zero() : a <= opts_.tol);
        }
        out.jet = std::move(jet);
        if (within) {
            out.status = SolveStatus::solved;
        } else {
            out.status = SolveStatus::solver_failed;
            out.message = "residual " + double_string(out.max_residual) + " exceeds tolerance";
        }
        return out;
    }

    static std::vector<std::ptrdiff_t> pinned_slots(const Level& lv, const JetSeed& seed)
    {
        std::vector<std::ptrdiff_t> slot(lv.vars.size(), -1);
        for (std::size_t i = 0; i < lv.vars.size(); ++i)
            if (seed.count({lv.vars[i].index, lv.vars[i].deriv})) slot[i] = 1;
        return slot;
    }

    Outcome affine_level(const Level& lv, const std::map<Variable, Number>& known, const JetSeed& seed) const
    {
        if (!seed.empty()) {
            Outcome pinned = affine_solve(lv, known, seed);
            if (pinned.ok) return pinned;
        }
        return affine_solve(lv, known, {});
    }

    Outcome affine_solve(const Level& lv, std::map<Variable, Number> local, const JetSeed& seed) const
    {
        auto pinned = pinned_slots(lv, seed);
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < lv.vars.size(); ++i) {
            if (pinned[i] >= 0)
                local.insert_or_assign(lv.vars[i], seed.at({lv.vars[i].index, lv.vars[i].deriv}));
            else {
                local.insert_or_assign(lv.vars[i], Number(Rational(0)));
                free.push_back(i);
            }
        }
        std::size_t rows = lv.equations.size(), cols = free.size();
        std::vector<std::vector<Number>> a(rows, std::vector<Number>(cols));
        std::vector<Number> b(rows);
        bool exact = true;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                const Expr& e = lv.partials[r][free[c]];
                a[r][c] = e.is_constant() ? Number(e.value()) : evaluate(e, local);
                exact = exact && a[r][c].is_exact();
            }
            Number v = evaluate(lv.equations[r], local);
            b[r] = v.is_exact() ? Number(Rational(-v.rational())) : Number(-v.to_double());
            exact = exact && b[r].is_exact();
        }

        Eigen::MatrixXd af(rows, cols);
        Eigen::VectorXd bf(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) af(r, c) = a[r][c].to_double();
            bf(r) = b[r].to_double();
        }

        Outcome out;
        std::vector<Number> solution(cols);
        if (exact) {
            RationalMatrix ae(rows, RationalVector(cols));
            RationalVector be(rows);
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t c = 0; c < cols; ++c) ae[r][c] = a[r][c].rational();
                be[r] = b[r].rational();
            }
            auto sol = exact_least_norm(ae, be, cols);
            if (!sol.consistent) {
                out.floor = float_least_norm(af, bf, opts_.rank_tol).residual;
                return out;
            }
            for (std::size_t c = 0; c < cols; ++c) solution[c] = Number(sol.x[c]);
        } else {
            auto sol = float_least_norm(af, bf, opts_.rank_tol);
            double scale = 1.0 + (rows ? bf.cwiseAbs().maxCoeff() : 0.0) +
                           (rows && cols ? af.cwiseAbs().maxCoeff() * sol.x.cwiseAbs().maxCoeff() : 0.0);
            if (!(sol.residual <= opts_.rank_tol * scale)) {
                out.floor = sol.residual;
                return out;
            }
            for (std::size_t c = 0; c < cols; ++c) solution[c] = Number(sol.x(static_cast<Eigen::Index>(c)));
        }
        out.ok = true;
        out.values.resize(lv.vars.size());
        for (std::size_t c = 0; c < cols; ++c) out.values[free[c]] = solution[c];
        for (std::size_t i = 0; i < lv.vars.size(); ++i)
            if (pinned[i] >= 0) out.values[i] = seed.at({lv.vars[i].index, lv.vars[i].deriv});
        return out;
    }

    struct NewtonRun {
        Eigen::VectorXd xi;
        double residual = std::numeric_limits<double>::infinity();
        bool converged = false;
    };

    Eigen::VectorXd residual(const Level& lv, FloatAssignment& at, const Eigen::VectorXd& xi) const
    {
        for (std::size_t i = 0; i < lv.vars.size(); ++i) at.insert_or_assign(lv.vars[i], xi(static_cast<Eigen::Index>(i)));
        Eigen::VectorXd r(lv.equations.size());
        for (std::size_t e = 0; e < lv.equations.size(); ++e) r(static_cast<Eigen::Index>(e)) = evaluate_float(lv.equations[e], at);
        return r;
    }

    Eigen::MatrixXd jacobian(const Level& lv, FloatAssignment& at, const Eigen::VectorXd& xi) const
    {
        for (std::size_t i = 0; i < lv.vars.size(); ++i) at.insert_or_assign(lv.vars[i], xi(static_cast<Eigen::Index>(i)));
        Eigen::MatrixXd j(lv.equations.size(), lv.vars.size());
        for (std::size_t e = 0; e < lv.equations.size(); ++e)
            for (std::size_t i = 0; i < lv.vars.size(); ++i)
                j(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(i)) = evaluate_float(lv.partials[e][i], at);
        return j;
    }

    /// Damped Newton with minimum-norm steps; coordinates with mask false stay fixed.
    NewtonRun newton(const Level& lv, FloatAssignment at, Eigen::VectorXd xi, const std::vector<bool>& mask) const
    {
        NewtonRun run;
        auto safe_residual = [&](const Eigen::VectorXd& v) -> std::optional<Eigen::VectorXd> {
            try {
                return residual(lv, at, v);
            } catch (const EvaluationError&) {
                return std::nullopt;
            }
        };
        auto r = safe_residual(xi);
        if (!r) return run;
        for (int it = 0; it <= opts_.max_iterations; ++it) {
            double norm_inf = r->size() ? r->cwiseAbs().maxCoeff() : 0.0;
            run.xi = xi;
            run.residual = norm_inf;
            if (norm_inf <= opts_.newton_tol) {
                run.converged = true;
                return run;
            }
            if (it == opts_.max_iterations) break;
            Eigen::MatrixXd j;
            try {
                j = jacobian(lv, at, xi);
            } catch (const EvaluationError&) {
                break;
            }
            for (std::size_t i = 0; i < mask.size(); ++i)
                if (!mask[i]) j.col(static_cast<Eigen::Index>(i)).setZero();
            Eigen::VectorXd step = float_least_norm(j, -*r, 1e-12).x;
            if (!step.allFinite() || step.norm() == 0) break;
            double norm2 = r->norm(), alpha = 1.0;
            bool accepted = false;
            while (alpha > 1e-12) {
                Eigen::VectorXd trial = xi + alpha * step;
                auto rt = safe_residual(trial);
                if (rt && rt->allFinite() && rt->norm() < (1 - 1e-4 * alpha) * norm2) {
                    xi = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
                alpha /= 2;
            }
            if (!accepted) break;
        }
        return run;
    }

    /// Levenberg-Marquardt descent on ½|F|²; reports whether it ended at a stationary point.
    std::pair<NewtonRun, bool> minimize(const Level& lv, FloatAssignment at, Eigen::VectorXd xi) const
    {
        NewtonRun run;
        Eigen::VectorXd r = residual(lv, at, xi);
        double lambda = 1e-3;
        bool stationary = false;
        for (int it = 0; it < 4 * opts_.max_iterations; ++it) {
            Eigen::MatrixXd j = jacobian(lv, at, xi);
            Eigen::VectorXd g = j.transpose() * r;
            double scale = std::max(1.0, r.cwiseAbs().maxCoeff() * std::max(1.0, j.cwiseAbs().maxCoeff()));
            if (g.cwiseAbs().maxCoeff() <= 1e-9 * scale) {
                stationary = true;
                break;
            }
            Eigen::MatrixXd h = j.transpose() * j;
            h.diagonal().array() += lambda;
            Eigen::VectorXd step = h.ldlt().solve(-g);
            Eigen::VectorXd trial = xi + step;
            Eigen::VectorXd rt;
            bool good = false;
            try {
                rt = residual(lv, at, trial);
                good = rt.allFinite() && rt.norm() < r.norm();
            } catch (const EvaluationError&) {
            }
            if (good) {
                xi = trial;
                r = rt;
                lambda = std::max(lambda / 3, 1e-12);
            } else {
                lambda *= 4;
                if (lambda > 1e16) break;
            }
        }
        run.xi = xi;
        run.residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
        return {run, stationary};
    }

    static bool better(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
    {
        double na = a.norm(), nb = b.norm();
        if (std::abs(na - nb) > 1e-9 * std::max(1.0, std::max(na, nb))) return na < nb;
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (std::abs(a(i) - b(i)) > 1e-9 * std::max(1.0, std::abs(a(i)))) return a(i) > b(i);
        return false;
    }

    /// Rational values close to xi that zero the level-0 equations exactly, if any.
    std::optional<std::vector<Number>> snap(const Level& lv, const std::map<Variable, Number>& known,
                                            const Eigen::VectorXd& xi) const
    {
        ExactAssignment ex;
        for (const auto& [v, num] : known) {
            if (!num.is_exact()) return std::nullopt;
            ex.emplace(v, num.rational());
        }
        std::vector<Number> out;
        for (std::size_t i = 0; i < lv.vars.size(); ++i) {
            double v = xi(static_cast<Eigen::Index>(i));
            auto q = detail::rationalize(v, 1e-9 * std::max(1.0, std::abs(v)));
            if (!q) return std::nullopt;
            ex.insert_or_assign(lv.vars[i], *q);
            out.emplace_back(*q);
        }
        try {
            for (const auto& e : lv.equations) {
                auto v = evaluate_exact(e, ex);
                if (!v || *v != 0) return std::nullopt;
            }
        } catch (const EvaluationError&) {
            return std::nullopt;
        }
        return out;
    }

    std::vector<Number> level_values(const Level& lv, const std::map<Variable, Number>& known,
                                     const Eigen::VectorXd& xi) const
    {
        if (auto exact = snap(lv, known, xi)) return *exact;
        std::vector<Number> out;
        for (Eigen::Index i = 0; i < xi.size(); ++i) out.emplace_back(xi(i));
        return out;
    }

    Outcome newton_level(const Level& lv, const std::map<Variable, Number>& known, const JetSeed& seed) const
    {
        FloatAssignment at;
        for (const auto& [v, n] : known) at.emplace(v, n.to_double());
        std::size_t n = lv.vars.size();
        std::vector<Eigen::VectorXd> roots;
        NewtonRun best_failure;

        auto consider_failure = [&](const NewtonRun& run) {
            if (run.xi.size() && run.residual < best_failure.residual) best_failure = run;
        };

        std::optional<Eigen::VectorXd> seeded;
        if (!seed.empty()) {
            Eigen::VectorXd start = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
            std::vector<bool> mask(n, true);
            for (std::size_t i = 0; i < n; ++i) {
                auto it = seed.find({lv.vars[i].index, lv.vars[i].deriv});
                if (it == seed.end()) continue;
                start(static_cast<Eigen::Index>(i)) = it->second.to_double();
                mask[i] = false;
            }
            NewtonRun pinned = newton(lv, at, start, mask);
            if (pinned.converged) {
                seeded = pinned.xi;
            } else {
                consider_failure(pinned);
                NewtonRun free = newton(lv, at, start, std::vector<bool>(n, true));
                if (free.converged)
                    seeded = free.xi;
                else
                    consider_failure(free);
            }
        }
        for (std::size_t d = 0; d < n; ++d)
            for (int s = 0; s < 8; ++s) {
                Eigen::VectorXd start = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
                start(static_cast<Eigen::Index>(d)) = -2.0 + 4.0 * s / 7.0;
                NewtonRun run = newton(lv, at, start, std::vector<bool>(n, true));
                if (!run.converged) {
                    consider_failure(run);
                    continue;
                }
                bool fresh = true;
                for (const auto& r : roots)
                    if ((r - run.xi).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, r.cwiseAbs().maxCoeff())) fresh = false;
                if (fresh) roots.push_back(run.xi);
            }
        std::stable_sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return better(a, b); });
        if (seeded) roots.insert(roots.begin(), *seeded);

        Outcome out;
        if (roots.empty()) {
            if (!best_failure.xi.size()) {
                out.stalled = true;
                out.floor = std::numeric_limits<double>::infinity();
                return out;
            }
            try {
                auto [run, stationary] = minimize(lv, at, best_failure.xi);
                out.floor = std::min(run.residual, best_failure.residual);
                out.stalled = !stationary;
            } catch (const EvaluationError&) {
                out.floor = best_failure.residual;
                out.stalled = true;
            }
            return out;
        }

        out.ok = true;
        out.values = level_values(lv, known, roots.front());
        for (std::size_t i = 1; i < roots.size() && i <= 16; ++i) out.alternatives.push_back(level_values(lv, known, roots[i]));
        return out;
    }

    /// Whole-system exact least norm for linear operators.
    std::optional<std::map<Variable, Number>> global_linear(const Point& x) const
    {
        if (!linear_checked_) {
            linear_ = linearize(sys_, op_.context());
            linear_checked_ = true;
        }
        if (!linear_) return std::nullopt;
        auto sys = assemble_linear_system(*linear_, x, op_.context());
        if (sys.arithmetic != Arithmetic::exact) return std::nullopt;
        auto sol = exact_least_norm(sys.exact_p, sys.exact_rhs, sys.cols);
        if (!sol.consistent) return std::nullopt;
        auto known = bind_point(op_.context(), x);
        for (std::size_t c = 0; c < sys.cols; ++c) known.insert_or_assign(linear_->columns[c], Number(sol.x[c]));
        return known;
    }

    PdeOperator op_;
    ProlongedSystem sys_;
    SolveOptions opts_;
    std::vector<Level> levels_;
    mutable bool linear_checked_ = false;
    mutable std::optional<LinearDecomposition> linear_;
};

inline JetSolveResult solve_jets_triangular(const PdeOperator& op, int level, const Point& x, const JetSeed& seed = {},
                                            SolveOptions opts = {})
{
    return JetSolver(op, level, opts).solve(x, seed);
}

}  // namespace jetsol
