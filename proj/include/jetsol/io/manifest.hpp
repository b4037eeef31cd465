#pragma once

#include "jetsol/construct/dense.hpp"
#include "jetsol/construct/sequence.hpp"
#include "jetsol/io/pde_file.hpp"
#include "jetsol/io/report_json.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetsol {

class ManifestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline SolveStatus parse_solve_status(const std::string& s)
{
    for (auto st : {SolveStatus::solved, SolveStatus::no_solution, SolveStatus::solver_failed})
        if (to_string(st) == s) return st;
    throw ManifestError("unknown solve status '" + s + "'");
}

/// Everything needed to rebuild s_0..s_N: the operator source, the points, bump radii and jets.
/// Functions are reassembled from the jets, so a tampered jet changes what verify sees.
inline Json manifest_json(const PdeSpec& spec, const SolutionSequence& s, DenseScheme scheme, const Rational& shrink)
{
    const auto& ctx = s.op.context();
    Json points = Json::array();
    for (const auto& p : s.points) points.push_back(point_json(p));
    Json stages = Json::array();
    for (std::size_t nu = 0; nu < s.stages.size(); ++nu) {
        const auto& st = s.stages[nu];
        Json bumps = Json::array();
        for (const auto& b : st.bumps)
            bumps.push_back(Json{{"center", point_json(b->center)}, {"r_in", rational_string(b->r_in)}, {"r_out", rational_string(b->r_out)}});
        Json jets = Json::array();
        for (const auto& j : st.jets) jets.push_back(jet_json(j, ctx));
        stages.push_back(Json{{"stage", nu}, {"level", st.level}, {"bumps", std::move(bumps)}, {"jets", std::move(jets)}});
    }
    Json failure;
    if (s.failure) {
        const auto& f = *s.failure;
        failure = Json{{"stage", f.stage},
                       {"point_index", f.point.index},
                       {"point", point_json(f.point.point)},
                       {"status", to_string(f.point.result.status)},
                       {"failed_level", f.point.result.failed_level},
                       {"residual_floor", f.point.result.residual_floor},
                       {"message", f.point.result.message},
                       {"description", f.describe()}};
    }
    return Json{{"header", report_header("manifest")},
                {"format", "jetsol-manifest"},
                {"version", 1},
                {"pde", spec.source},
                {"scheme", to_string(scheme)},
                {"shrink", rational_string(shrink)},
                {"schedule", s.schedule},
                {"points", std::move(points)},
                {"complete", s.complete()},
                {"stages", std::move(stages)},
                {"failure", std::move(failure)}};
}

struct LoadedManifest {
    PdeSpec spec;
    SolutionSequence sequence;
    DenseScheme scheme = DenseScheme::dyadic;
    Rational shrink;
};

inline LoadedManifest manifest_from_json(const Json& m)
{
    try {
        if (m.value("format", "") != "jetsol-manifest") throw ManifestError("not a jetsol manifest");
        PdeSpec spec = parse_pde_text(m.at("pde").get<std::string>());
        const auto& ctx = spec.op.context();
        SolutionSequence s{spec.op, {}, m.at("schedule").get<std::vector<int>>(), {}, {}};
        for (const auto& p : m.at("points")) s.points.push_back(point_from_json(p));
        if (s.points.size() != s.schedule.size()) throw ManifestError("schedule and point list differ in length");
        const auto& stages = m.at("stages");
        if (stages.size() > s.schedule.size()) throw ManifestError("more stages than schedule entries");
        for (std::size_t nu = 0; nu < stages.size(); ++nu) {
            const auto& js = stages[nu];
            DiscreteSolution st;
            st.level = js.at("level").get<int>();
            if (st.level != s.schedule[nu]) throw ManifestError("stage " + std::to_string(nu) + " level disagrees with the schedule");
            st.points.assign(s.points.begin(), s.points.begin() + static_cast<std::ptrdiff_t>(nu + 1));
            const auto& bumps = js.at("bumps");
            const auto& jets = js.at("jets");
            if (bumps.size() != nu + 1 || jets.size() != nu + 1)
                throw ManifestError("stage " + std::to_string(nu) + " must carry " + std::to_string(nu + 1) + " bumps and jets");
            std::vector<std::vector<Expr>> polys(ctx.unknowns());
            for (std::size_t i = 0; i <= nu; ++i) {
                Point c = point_from_json(bumps[i].at("center"));
                if (c != st.points[i]) throw ManifestError("bump " + std::to_string(i) + " of stage " + std::to_string(nu) + " is not centred on its point");
                st.bumps.push_back(std::make_shared<const BumpShape>(c, parse_rational(bumps[i].at("r_in").get<std::string>()),
                                                                     parse_rational(bumps[i].at("r_out").get<std::string>()),
                                                                     ctx.space_variables()));
                st.jets.push_back(jet_from_json(jets[i], ctx));
                auto t = taylor_from_jet(st.points[i], st.jets.back(), ctx);
                for (std::size_t u = 0; u < ctx.unknowns(); ++u) polys[u].push_back(t[u]);
            }
            for (std::size_t u = 0; u < ctx.unknowns(); ++u) st.functions.push_back(glue(st.bumps, polys[u]));
            s.stages.push_back(std::move(st));
        }
        if (const auto& f = m.at("failure"); !f.is_null()) {
            JetSolveResult res;
            res.status = parse_solve_status(f.at("status").get<std::string>());
            res.failed_level = f.value("failed_level", -1);
            res.residual_floor = f.value("residual_floor", 0.0);
            res.message = f.value("message", "");
            s.failure = StageFailure{f.at("stage").get<std::size_t>(),
                                     PointFailure{f.at("point_index").get<std::size_t>(), point_from_json(f.at("point")), res}};
        }
        LoadedManifest out{std::move(spec), std::move(s), parse_dense_scheme(m.value("scheme", "dyadic")),
                           parse_rational(m.value("shrink", "1/2"))};
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError(std::string("malformed manifest: ") + e.what());
    } catch (const PdeFileError& e) {
        throw ManifestError(std::string("manifest operator: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ManifestError(std::string("malformed manifest: ") + e.what());
    }
}

/// Samples on a uniform grid with `per_axis` nodes per axis (endpoints included).
/// Header x1,...,xn,unknown,value.
inline std::string samples_csv(const std::vector<AssembledFunction>& u, const PdeOperator& op, std::size_t per_axis)
{
    const auto& ctx = op.context();
    std::size_t n = ctx.dim();
    std::ostringstream out;
    for (std::size_t i = 0; i < n; ++i) out << "x" << (i + 1) << ",";
    out << "unknown,value\n";
    out << std::setprecision(17);
    std::vector<std::size_t> idx(n, 0);
    std::size_t steps = per_axis > 1 ? per_axis - 1 : 1;
    for (;;) {
        Point x;
        for (std::size_t i = 0; i < n; ++i)
            x.push_back(op.box()[i].lo + (op.box()[i].hi - op.box()[i].lo) * make_rational(static_cast<long>(idx[i]), static_cast<long>(steps)));
        for (std::size_t k = 0; k < u.size(); ++k) {
            for (const auto& c : x) out << c.get_d() << ",";
            out << ctx.unknown_names[k] << "," << u[k].value(x, ctx).to_double() << "\n";
        }
        std::size_t axis = n;
        while (axis > 0) {
            --axis;
            if (++idx[axis] <= steps) break;
            idx[axis] = 0;
            if (axis == 0) return out.str();
        }
    }
}

}  // namespace jetsol
