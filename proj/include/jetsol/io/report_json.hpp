#pragma once

#include "jetsol/ideal/vanishing.hpp"
#include "jetsol/range/range_check.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace jetsol {

using Json = nlohmann::ordered_json;

/// Exact values as "p/q" strings, floats as JSON numbers.
inline Json number_json(const Number& n)
{
    if (n.is_exact()) return rational_string(n.rational());
    return n.to_double();
}

inline Number number_from_json(const Json& j)
{
    if (j.is_string()) return Number(parse_rational(j.get<std::string>()));
    if (j.is_number()) return Number(j.get<double>());
    throw std::invalid_argument("expected a rational string or a number, got " + j.dump());
}

inline Json point_json(const Point& x)
{
    Json a = Json::array();
    for (const auto& c : x) a.push_back(rational_string(c));
    return a;
}

inline Point point_from_json(const Json& j)
{
    Point x;
    for (const auto& c : j) x.push_back(parse_rational(c.get<std::string>()));
    return x;
}

inline Json multi_index_json(const MultiIndex& p)
{
    Json a = Json::array();
    for (std::size_t i = 0; i < p.dim(); ++i) a.push_back(p[i]);
    return a;
}

/// Values per unknown in graded-lex multi-index order.
inline Json jet_json(const Jet& jet, const VariableContext& ctx)
{
    Json values = Json::object();
    for (std::size_t u = 0; u < jet.unknowns(); ++u) {
        Json v = Json::array();
        for (const auto& p : jet.indices()) v.push_back(number_json(jet.at(u, p)));
        values[ctx.unknown_names.at(u)] = std::move(v);
    }
    return Json{{"order", jet.order()}, {"arithmetic", to_string(jet.arithmetic())}, {"values", std::move(values)}};
}

inline Jet jet_from_json(const Json& j, const VariableContext& ctx)
{
    Jet jet(ctx.dim(), ctx.unknowns(), j.at("order").get<int>());
    for (std::size_t u = 0; u < ctx.unknowns(); ++u) {
        const Json& v = j.at("values").at(ctx.unknown_names[u]);
        if (v.size() != jet.indices().size())
            throw std::invalid_argument("jet of unknown " + ctx.unknown_names[u] + " has " + std::to_string(v.size()) +
                                        " values, expected " + std::to_string(jet.indices().size()));
        for (std::size_t i = 0; i < jet.indices().size(); ++i) jet.set(u, jet.indices()[i], number_from_json(v[i]));
    }
    return jet;
}

inline Json certificate_json(const RankCertificate& c)
{
    return Json{{"rows", c.rows},         {"cols", c.cols},         {"rank_p", c.rank_p},
                {"rank_q", c.rank_q},     {"expected_rank", c.expected_rank},
                {"holds", c.holds},       {"strict", c.strict},     {"arithmetic", to_string(c.arithmetic)},
                {"tolerance", c.tolerance}};
}

inline Json range_json(const RangeReport& r, const VariableContext& ctx)
{
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json j{{"point", point_json(e.point)}, {"level", e.level}, {"outcome", to_string(e.outcome)}};
        j["certificate"] = e.certificate ? certificate_json(*e.certificate) : Json();
        j["residual"] = e.residual;
        j["jet"] = e.jet ? jet_json(*e.jet, ctx) : Json();
        if (!e.message.empty()) j["message"] = e.message;
        entries.push_back(std::move(j));
    }
    return Json{{"linear", r.linear}, {"max_level", r.max_level}, {"all_ok", r.all_ok()}, {"entries", std::move(entries)}};
}

inline Json vanishing_json(const VanishingReport& r)
{
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json j{{"point", point_json(e.point)}, {"point_index", e.point_index}, {"order", e.order}};
        if (e.witness) {
            j["witness"] = *e.witness;
            j["verified_range"] = Json::array({*e.witness, r.length == 0 ? 0 : r.length - 1});
            j["exact"] = e.exact;
        } else {
            j["witness"] = nullptr;
            j["verified_range"] = nullptr;
        }
        if (e.blocker)
            j["blocker"] = Json{{"stage", e.blocker->stage}, {"p", multi_index_json(e.blocker->p)}, {"value", number_json(e.blocker->value)}};
        entries.push_back(std::move(j));
    }
    Json out{{"truncation", r.length == 0 ? Json() : Json(r.length - 1)},
             {"arithmetic", r.mode},
             {"tolerance", r.tolerance},
             {"all_witnessed", r.all_witnessed()},
             {"exact_zeros", r.exact_zeros()},
             {"entries", std::move(entries)}};
    return out;
}

inline Json verification_json(const VerificationReport& r)
{
    Json eqs = Json::array();
    for (const auto& e : r.equations) eqs.push_back(vanishing_json(e));
    Json failures = Json::array();
    for (const auto& f : r.failures)
        failures.push_back(Json{{"equation", f.equation},
                                {"stage", f.stage},
                                {"point_index", f.point_index},
                                {"point", point_json(f.point)},
                                {"p", multi_index_json(f.p)},
                                {"value", number_json(f.value)},
                                {"order", f.order},
                                {"expected_witness", f.expected_witness},
                                {"description", f.describe()}});
    Json pts = Json::array();
    for (const auto& p : r.points) pts.push_back(point_json(p));
    return Json{{"result", r.pass ? "PASS" : "FAIL"},
                {"degenerate", r.degenerate},
                {"exact_zeros", r.exact_zeros()},
                {"construction_failure", r.construction_failure ? Json(*r.construction_failure) : Json()},
                {"schedule", r.schedule},
                {"points", std::move(pts)},
                {"equations", std::move(eqs)},
                {"failures", std::move(failures)}};
}

/// The only non-deterministic part of a report.
inline Json report_header(const std::string& kind)
{
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return Json{{"tool", "jetsol"}, {"kind", kind}, {"generated", buf}};
}

/// Writes through a temporary file in the same directory and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace jetsol
