#pragma once

#include "jetsol/construct/dense.hpp"
#include "jetsol/ideal/sequence.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetsol {

/// Finite prefix of test points from X \ Σ; Σ itself is never materialized.
struct SingularityComplement {
    std::vector<Interval> box;
    std::vector<Point> points;
};

inline SingularityComplement make_complement(std::vector<Interval> box, std::vector<Point> points)
{
    std::set<Point> seen;
    for (const auto& p : points) {
        if (p.size() != box.size()) throw std::invalid_argument("point dimension mismatch");
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!(box[i].lo < p[i] && p[i] < box[i].hi))
                throw std::invalid_argument("point " + point_string(p) + " lies outside the box");
        if (!seen.insert(p).second) throw std::invalid_argument("duplicate point " + point_string(p));
    }
    return {std::move(box), std::move(points)};
}

inline SingularityComplement dense_complement(const std::vector<Interval>& box, DenseScheme scheme, std::size_t count)
{
    return {box, enumerate_dense(box, scheme, count)};
}

struct VanishingOptions {
    /// nullopt: exact zeros where values are exact, tolerance otherwise.
    std::optional<Arithmetic> arithmetic;
    double tolerance = 1e-10;
};

inline std::string mode_string(const VanishingOptions& o) { return o.arithmetic ? to_string(*o.arithmetic) : "auto"; }

/// A derivative that keeps a term from vanishing.
struct Blocker {
    std::size_t stage = 0;
    MultiIndex p;
    Number value;
};

struct VanishingEntry {
    std::size_t point_index = 0;
    Point point;
    int order = 0;
    /// Least ν with D^p w_μ(x) = 0 for all μ ∈ [ν, N], |p| ≤ order.
    std::optional<std::size_t> witness;
    /// Last term in [0, N] with a nonzero derivative of order ≤ `order`.
    std::optional<Blocker> blocker;
    /// Every zero in the verified range was an exact rational zero.
    bool exact = true;
};

struct VanishingReport {
    std::size_t length = 0;  // N + 1
    std::string mode = "auto";
    double tolerance = 0;
    std::vector<VanishingEntry> entries;

    bool all_witnessed() const
    {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.witness.has_value(); });
    }
    bool exact_zeros() const
    {
        return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return !e.witness || e.exact; });
    }
};

namespace detail {

struct TermProfile {
    int vanish_order = INT_MAX;   // every |p| < vanish_order is zero
    int inexact_order = INT_MAX;  // least |p| whose zero relied on the tolerance
    std::optional<Blocker> blocker;
};

inline bool is_zero_value(const Number& v, const VanishingOptions& opts, bool& exact)
{
    if (opts.arithmetic == Arithmetic::floating) {
        exact = false;
        return std::abs(v.to_double()) <= opts.tolerance;
    }
    if (v.is_exact()) {
        exact = true;
        return v.rational() == 0;
    }
    if (opts.arithmetic == Arithmetic::exact)
        throw std::domain_error("exact arithmetic requested but a derivative evaluated to the float " + v.str());
    exact = false;
    return std::abs(v.to_double()) <= opts.tolerance;
}

inline std::vector<TermProfile> profile(const FunctionSequence& w, const Point& x, int max_order, const VanishingOptions& opts)
{
    std::vector<TermProfile> out;
    auto indices = multi_indices_up_to(w.context.dim(), max_order);
    for (std::size_t mu = 0; mu < w.size(); ++mu) {
        std::map<MultiIndex, Number> d;
        try {
            d = w.terms[mu]->derivatives(x, max_order);
        } catch (const std::exception& e) {
            throw std::runtime_error("evaluating term " + std::to_string(mu) + " at " + point_string(x) + ": " + e.what());
        }
        TermProfile t;
        for (const auto& p : indices) {
            const Number& v = d.at(p);
            bool exact = true;
            bool zero;
            try {
                zero = is_zero_value(v, opts, exact);
            } catch (const std::domain_error& e) {
                throw std::domain_error(std::string(e.what()) + " (term " + std::to_string(mu) + ", point " + point_string(x) +
                                        ", p = " + p.str() + ")");
            }
            if (!zero) {
                t.vanish_order = p.order();
                t.blocker = Blocker{mu, p, v};
                break;
            }
            if (!exact) t.inexact_order = std::min(t.inexact_order, p.order());
        }
        out.push_back(std::move(t));
    }
    return out;
}

inline VanishingEntry entry_from_profile(const std::vector<TermProfile>& prof, std::size_t index, const Point& x, int l)
{
    VanishingEntry e;
    e.point_index = index;
    e.point = x;
    e.order = l;
    std::size_t nu = prof.size();
    while (nu > 0 && prof[nu - 1].vanish_order > l) --nu;
    if (nu > 0) e.blocker = prof[nu - 1].blocker;
    if (nu < prof.size() || prof.empty()) {
        e.witness = nu;
        for (std::size_t mu = nu; mu < prof.size(); ++mu) e.exact = e.exact && prof[mu].inexact_order > l;
    }
    return e;
}

}  // namespace detail

/// For each point and order, the minimal witness of the truncated vanishing condition, verified
/// for every term of the tail rather than sampled.
inline VanishingReport check_vanishing(const FunctionSequence& w, const SingularityComplement& z, const std::vector<int>& orders,
                                       const VanishingOptions& opts = {})
{
    for (int l : orders)
        if (l < 0) throw std::invalid_argument("orders must be non-negative");
    VanishingReport r;
    r.length = w.size();
    r.mode = mode_string(opts);
    r.tolerance = opts.tolerance;
    if (orders.empty()) return r;
    int top = *std::max_element(orders.begin(), orders.end());
    for (std::size_t i = 0; i < z.points.size(); ++i) {
        auto prof = detail::profile(w, z.points[i], top, opts);
        for (int l : orders) r.entries.push_back(detail::entry_from_profile(prof, i, z.points[i], l));
    }
    return r;
}

struct VerificationFailure {
    std::size_t equation = 0;
    std::size_t stage = 0;
    std::size_t point_index = 0;
    Point point;
    MultiIndex p;
    Number value;
    int order = 0;
    std::size_t expected_witness = 0;

    std::string describe() const
    {
        return "equation " + std::to_string(equation) + ", stage " + std::to_string(stage) + ", point " +
               std::to_string(point_index) + " " + point_string(point) + ", p = " + p.str() + ": D^p w = " + value.str() +
               " (expected zero from stage " + std::to_string(expected_witness) + " on at order " + std::to_string(order) + ")";
    }
};

struct VerificationReport {
    bool pass = false;
    bool degenerate = false;
    std::optional<std::string> construction_failure;
    std::vector<Point> points;
    std::vector<int> schedule;
    std::vector<VanishingReport> equations;
    std::vector<VerificationFailure> failures;

    bool exact_zeros() const
    {
        return std::all_of(equations.begin(), equations.end(), [](const auto& r) { return r.exact_zeros(); });
    }
};

/// Least stage by which (z_j, l) must vanish: max(j, min{ν : l_ν ≥ l}).
inline std::size_t expected_witness(const std::vector<int>& schedule, std::size_t j, int l)
{
    std::size_t nu = 0;
    while (nu < schedule.size() && schedule[nu] < l) ++nu;
    return std::max(j, nu);
}

/// Error sequences of s checked at z_0..z_N for every order l ≤ l_N. PASS iff each (z_j, l)
/// has a witness no later than the first stage that contains z_j at order ≥ l.
inline VerificationReport verify_solution(const SolutionSequence& s, const VanishingOptions& opts = {})
{
    VerificationReport out;
    if (s.failure) out.construction_failure = s.failure->describe();
    std::size_t n = s.stages.size();
    out.schedule.assign(s.schedule.begin(), s.schedule.begin() + static_cast<std::ptrdiff_t>(n));
    out.points.assign(s.points.begin(), s.points.begin() + static_cast<std::ptrdiff_t>(n));
    if (n == 0) {
        out.degenerate = true;
        out.pass = !out.construction_failure;
        return out;
    }
    auto z = make_complement(s.op.box(), out.points);
    int top = out.schedule.back();
    std::vector<int> orders;
    for (int l = 0; l <= top; ++l) orders.push_back(l);
    auto ws = error_sequence(s);
    std::set<std::tuple<std::size_t, std::size_t, std::size_t, MultiIndex>> seen;
    for (std::size_t eq = 0; eq < ws.size(); ++eq) {
        auto rep = check_vanishing(ws[eq], z, orders, opts);
        for (const auto& e : rep.entries) {
            std::size_t want = expected_witness(out.schedule, e.point_index, e.order);
            if (e.witness && *e.witness <= want) continue;
            const Blocker& b = *e.blocker;
            if (!seen.insert({eq, b.stage, e.point_index, b.p}).second) continue;
            out.failures.push_back(VerificationFailure{eq, b.stage, e.point_index, e.point, b.p, b.value, e.order, want});
        }
        out.equations.push_back(std::move(rep));
    }
    out.pass = out.failures.empty() && !out.construction_failure;
    return out;
}

/// Runs the truncated vanishing check on u(ψ); true iff every point has a witness at order l.
inline bool diagonal_probe(const Expr& psi, const VariableContext& ctx, const SingularityComplement& z, int l,
                           std::size_t truncation, const VanishingOptions& opts = {})
{
    auto rep = check_vanishing(constant_sequence(psi, ctx, truncation), z, {l}, opts);
    return rep.all_witnessed();
}

struct ClosurePair {
    std::size_t first = 0;
    std::size_t second = 0;
    /// A member contained in both.
    std::optional<std::size_t> member;
};

struct ClosureReport {
    std::vector<ClosurePair> pairs;
    bool closed() const
    {
        return std::all_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.member.has_value(); });
    }
    std::vector<ClosurePair> open_pairs() const
    {
        std::vector<ClosurePair> out;
        for (const auto& p : pairs)
            if (!p.member) out.push_back(p);
        return out;
    }
};

/// For every pair (Z, Z') looks for a member Z'' ⊆ Z ∩ Z'.
inline ClosureReport family_closure_check(const std::vector<SingularityComplement>& family)
{
    std::vector<std::set<Point>> sets;
    for (const auto& z : family) {
        if (!family.empty() && z.box.size() != family.front().box.size())
            throw std::invalid_argument("family members must share one box");
        sets.emplace_back(z.points.begin(), z.points.end());
    }
    ClosureReport r;
    for (std::size_t a = 0; a < sets.size(); ++a)
        for (std::size_t b = a + 1; b < sets.size(); ++b) {
            ClosurePair pr{a, b, std::nullopt};
            for (std::size_t c = 0; c < sets.size() && !pr.member; ++c) {
                bool inside = std::all_of(sets[c].begin(), sets[c].end(),
                                          [&](const Point& p) { return sets[a].count(p) && sets[b].count(p); });
                if (inside) pr.member = c;
            }
            r.pairs.push_back(pr);
        }
    return r;
}

}  // namespace jetsol
