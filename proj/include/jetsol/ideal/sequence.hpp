#pragma once

#include "jetsol/construct/sequence.hpp"
#include "jetsol/jet/prolong.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetsol {

enum class SequenceOrigin { constructed, example_1_1, diagonal, user };

inline const char* to_string(SequenceOrigin o)
{
    switch (o) {
    case SequenceOrigin::constructed: return "constructed";
    case SequenceOrigin::example_1_1: return "example-1-1";
    case SequenceOrigin::diagonal: return "diagonal";
    case SequenceOrigin::user: return "user";
    }
    return "user";
}

/// One smooth function w_ν of a sequence, queried through its derivatives at points.
class SequenceTerm {
public:
    virtual ~SequenceTerm() = default;
    /// D^p w(x) for every |p| ≤ order.
    virtual std::map<MultiIndex, Number> derivatives(const Point& x, int order) const = 0;
    virtual Expr expression() const = 0;
};

using TermPtr = std::shared_ptr<const SequenceTerm>;

class ExpressionTerm : public SequenceTerm {
public:
    ExpressionTerm(Expr e, const VariableContext& ctx) : expr_(e), ctx_(ctx), table_(std::move(e), ctx.space_variables()) {}

    std::map<MultiIndex, Number> derivatives(const Point& x, int order) const override
    {
        auto at = bind_point(ctx_, x);
        std::map<MultiIndex, Number> out;
        for (const auto& p : multi_indices_up_to(ctx_.dim(), order)) out.emplace(p, evaluate(table_.get(p), at));
        return out;
    }

    Expr expression() const override { return expr_; }

private:
    Expr expr_;
    VariableContext ctx_;
    mutable DerivativeTable table_;
};

/// Shared state of the error sequences of one constructed solution sequence.
class ErrorSequenceData {
public:
    /// `floating[ν]` marks stages whose jets came from float solves; their Taylor coefficients
    /// are dyadic images of doubles, so residuals are reported as floats.
    ErrorSequenceData(PdeOperator op, std::vector<std::vector<AssembledFunction>> stages, std::vector<bool> floating = {})
        : op_(std::move(op)), stages_(std::move(stages)), floating_(std::move(floating))
    {
        floating_.resize(stages_.size(), false);
    }

    bool floating(std::size_t nu) const { return floating_.at(nu); }

    const PdeOperator& op() const { return op_; }
    const std::vector<AssembledFunction>& stage(std::size_t nu) const { return stages_.at(nu); }
    std::size_t stage_count() const { return stages_.size(); }

    const ProlongedSystem& system(int level) const
    {
        if (!system_ || system_->level() < level) system_ = std::make_shared<ProlongedSystem>(prolong(op_, level));
        return *system_;
    }

    /// Jet of stage ν at x to at least `order`, reused across equations.
    const Jet& jet(std::size_t nu, const Point& x, int order) const
    {
        auto key = std::make_pair(nu, x);
        auto it = jets_.find(key);
        if (it == jets_.end() || it->second.order() < order)
            it = jets_.insert_or_assign(key, jet_of_assembled(stages_.at(nu), x, order, op_.context())).first;
        return it->second;
    }

private:
    PdeOperator op_;
    std::vector<std::vector<AssembledFunction>> stages_;
    std::vector<bool> floating_;
    mutable std::shared_ptr<ProlongedSystem> system_;
    mutable std::map<std::pair<std::size_t, Point>, Jet> jets_;
};

/// w_ν = G_j(x, jets of s_ν); D^p w_ν(x) is the prolonged equation (j, p) at the jet of s_ν.
class ErrorTerm : public SequenceTerm {
public:
    ErrorTerm(std::shared_ptr<const ErrorSequenceData> data, std::size_t stage, std::size_t equation)
        : data_(std::move(data)), stage_(stage), equation_(equation)
    {
    }

    std::map<MultiIndex, Number> derivatives(const Point& x, int order) const override
    {
        const auto& op = data_->op();
        const auto& sys = data_->system(order);
        const Jet& jet = data_->jet(stage_, x, op.order() + order);
        std::map<MultiIndex, Number> out;
        bool floating = data_->floating(stage_);
        for (const auto& p : multi_indices_up_to(op.dim(), order)) {
            Number v = evaluate_at_jet(sys.at(equation_, p), x, jet, op.context());
            out.emplace(p, floating ? Number(v.to_double()) : v);
        }
        return out;
    }

    Expr expression() const override
    {
        const auto& op = data_->op();
        const auto& ctx = op.context();
        const auto& fns = data_->stage(stage_);
        std::vector<DerivativeTable> tables;
        for (const auto& f : fns) tables.emplace_back(f.expression(), ctx.space_variables());
        const Expr& g = op.equations().at(equation_);
        std::map<Variable, Expr> sub;
        for (const auto& v : free_variables(g))
            if (v.is_jet()) sub.emplace(v, tables.at(static_cast<std::size_t>(v.index)).get(v.deriv));
        return substitute(g, sub);
    }

private:
    std::shared_ptr<const ErrorSequenceData> data_;
    std::size_t stage_;
    std::size_t equation_;
};

/// D^q w.
class DerivedTerm : public SequenceTerm {
public:
    DerivedTerm(TermPtr base, MultiIndex q, const VariableContext& ctx) : base_(std::move(base)), q_(std::move(q)), ctx_(ctx) {}

    std::map<MultiIndex, Number> derivatives(const Point& x, int order) const override
    {
        auto all = base_->derivatives(x, order + q_.order());
        std::map<MultiIndex, Number> out;
        for (const auto& p : multi_indices_up_to(ctx_.dim(), order)) out.emplace(p, all.at(shifted(p)));
        return out;
    }

    Expr expression() const override { return differentiate(base_->expression(), ctx_.space_variables(), q_); }

private:
    MultiIndex shifted(const MultiIndex& p) const
    {
        std::vector<int> e;
        for (std::size_t i = 0; i < p.dim(); ++i) e.push_back(p[i] + q_[i]);
        return MultiIndex(e);
    }

    TermPtr base_;
    MultiIndex q_;
    VariableContext ctx_;
};

/// a·w, differentiated by the Leibniz rule.
class ProductTerm : public SequenceTerm {
public:
    ProductTerm(Expr a, TermPtr base, const VariableContext& ctx)
        : factor_(std::make_shared<ExpressionTerm>(std::move(a), ctx)), base_(std::move(base)), ctx_(ctx)
    {
    }

    std::map<MultiIndex, Number> derivatives(const Point& x, int order) const override
    {
        auto da = factor_->derivatives(x, order);
        auto dw = base_->derivatives(x, order);
        std::map<MultiIndex, Number> out;
        for (const auto& p : multi_indices_up_to(ctx_.dim(), order)) {
            Number total(Rational(0));
            for (const auto& r : multi_indices_up_to(ctx_.dim(), p.order())) {
                std::vector<int> rest;
                Integer c = 1;
                bool below = true;
                for (std::size_t i = 0; i < p.dim() && below; ++i) {
                    if (r[i] > p[i]) below = false;
                    rest.push_back(p[i] - r[i]);
                    Integer b;
                    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(p[i]), static_cast<unsigned long>(std::max(r[i], 0)));
                    c *= b;
                }
                if (!below) continue;
                total = total + Number(Rational(c)) * da.at(r) * dw.at(MultiIndex(rest));
            }
            out.emplace(p, total);
        }
        return out;
    }

    Expr expression() const override { return factor_->expression() * base_->expression(); }

private:
    std::shared_ptr<ExpressionTerm> factor_;
    TermPtr base_;
    VariableContext ctx_;
};

/// w = (w_0, ..., w_N), truncated at N.
struct FunctionSequence {
    VariableContext context;
    std::vector<TermPtr> terms;
    SequenceOrigin origin = SequenceOrigin::user;
    std::string label;

    std::size_t size() const { return terms.size(); }
    bool empty() const { return terms.empty(); }
};

inline FunctionSequence sequence_of(const std::vector<Expr>& terms, const VariableContext& ctx,
                                    SequenceOrigin origin = SequenceOrigin::user)
{
    FunctionSequence w{ctx, {}, origin, {}};
    for (const auto& t : terms) w.terms.push_back(std::make_shared<ExpressionTerm>(t, ctx));
    return w;
}

/// u(ψ) = (ψ, ψ, ...) truncated at N.
inline FunctionSequence constant_sequence(const Expr& psi, const VariableContext& ctx, std::size_t truncation)
{
    auto term = std::make_shared<ExpressionTerm>(psi, ctx);
    FunctionSequence w{ctx, std::vector<TermPtr>(truncation + 1, term), SequenceOrigin::diagonal, {}};
    return w;
}

/// w_ν(x) = (x - x_0)^{l_ν} ··· (x - x_ν)^{l_ν}.
inline FunctionSequence example_1_1(const std::vector<Point>& points, const std::vector<int>& schedule, const VariableContext& ctx)
{
    if (ctx.dim() != 1) throw std::invalid_argument("the product sequence is defined on one space dimension");
    if (points.size() != schedule.size())
        throw std::invalid_argument("need one order per point (" + std::to_string(points.size()) + " points, " +
                                    std::to_string(schedule.size()) + " orders)");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != 1) throw std::invalid_argument("point dimension mismatch");
        if (schedule[i] < 0) throw std::invalid_argument("orders must be non-negative");
        for (std::size_t j = 0; j < i; ++j)
            if (points[i] == points[j]) throw std::invalid_argument("duplicate point " + point_string(points[i]));
    }
    Expr x = variable(ctx.space(0));
    std::vector<Expr> terms;
    for (std::size_t nu = 0; nu < points.size(); ++nu) {
        std::vector<Expr> factors;
        for (std::size_t i = 0; i <= nu; ++i) factors.push_back(pow(x - Expr(points[i][0]), static_cast<long>(schedule[nu])));
        terms.push_back(product(std::move(factors)));
    }
    auto w = sequence_of(terms, ctx, SequenceOrigin::example_1_1);
    w.label = "product sequence";
    return w;
}

/// One sequence per equation: w_ν = G_j(x, jets of s_ν) for the homogeneous form G of the operator.
inline std::vector<FunctionSequence> error_sequence(const SolutionSequence& s)
{
    std::vector<std::vector<AssembledFunction>> stages;
    std::vector<bool> floating;
    for (const auto& st : s.stages) {
        stages.push_back(st.functions);
        floating.push_back(std::any_of(st.jets.begin(), st.jets.end(),
                                       [](const Jet& j) { return j.arithmetic() == Arithmetic::floating; }));
    }
    auto data = std::make_shared<const ErrorSequenceData>(s.op, std::move(stages), std::move(floating));
    std::vector<FunctionSequence> out;
    for (std::size_t j = 0; j < s.op.equations().size(); ++j) {
        FunctionSequence w{s.op.context(), {}, SequenceOrigin::constructed, "equation " + std::to_string(j)};
        for (std::size_t nu = 0; nu < s.stages.size(); ++nu) w.terms.push_back(std::make_shared<ErrorTerm>(data, nu, j));
        out.push_back(std::move(w));
    }
    return out;
}

/// Termwise D^q w.
inline FunctionSequence differentiate_sequence(const FunctionSequence& w, const MultiIndex& q)
{
    FunctionSequence out{w.context, {}, w.origin, w.label};
    for (const auto& t : w.terms) out.terms.push_back(std::make_shared<DerivedTerm>(t, q, w.context));
    return out;
}

/// Termwise a_ν · w_ν.
inline FunctionSequence multiply_sequence(const std::vector<Expr>& a, const FunctionSequence& w)
{
    if (a.size() != w.size()) throw std::invalid_argument("factor sequence length mismatch");
    FunctionSequence out{w.context, {}, w.origin, w.label};
    for (std::size_t i = 0; i < a.size(); ++i) out.terms.push_back(std::make_shared<ProductTerm>(a[i], w.terms[i], w.context));
    return out;
}

}  // namespace jetsol
