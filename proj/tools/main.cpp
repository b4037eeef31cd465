#include "jetsol/construct/sequence.hpp"
#include "jetsol/expr/print.hpp"
#include "jetsol/ideal/vanishing.hpp"
#include "jetsol/io/demos.hpp"
#include "jetsol/io/manifest.hpp"
#include "jetsol/io/report_json.hpp"
#include "jetsol/range/range_check.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace jetsol;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string pde;
    std::string manifest;
    std::string demo;
    int level = -1;
    int stages = -1;
    std::string schedule = "nu";
    std::size_t points = 0;
    std::string scheme = "dyadic";
    std::optional<double> tol;
    std::string arith = "auto";
    std::string out;
    std::string f = "x";
    std::size_t samples = 0;
};

PdeSpec load_spec(const std::string& path)
{
    if (!std::filesystem::is_regular_file(path)) throw UsageError("cannot open " + path);
    try {
        return load_pde_file(path);
    } catch (const PdeFileError& e) {
        throw UsageError(path + ":" + e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(path + ": " + e.what());
    }
}

SolveOptions solve_options(const RunConfig& c)
{
    SolveOptions o;
    if (c.tol) {
        o.tol = *c.tol;
        o.rank_tol = *c.tol;
    }
    return o;
}

VanishingOptions vanishing_options(const RunConfig& c)
{
    VanishingOptions o;
    if (c.arith == "exact")
        o.arithmetic = Arithmetic::exact;
    else if (c.arith == "float")
        o.arithmetic = Arithmetic::floating;
    if (c.tol) o.tolerance = *c.tol;
    return o;
}

DenseScheme scheme_of(const RunConfig& c)
{
    try {
        return parse_dense_scheme(c.scheme);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

/// "nu" gives l_ν = ν; otherwise a comma-separated list of N + 1 orders.
std::vector<int> schedule_of(const RunConfig& c, int default_stages)
{
    int n = c.stages >= 0 ? c.stages : default_stages;
    std::vector<int> l;
    if (c.schedule == "nu") {
        l = default_schedule(static_cast<std::size_t>(n) + 1);
    } else {
        std::stringstream ss(c.schedule);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                l.push_back(std::stoi(item, &used));
                if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw UsageError("bad schedule entry '" + item + "'");
            }
        }
        if (c.stages >= 0 && l.size() != static_cast<std::size_t>(c.stages) + 1)
            throw UsageError("schedule lists " + std::to_string(l.size()) + " orders but --stages " + std::to_string(c.stages) +
                             " needs " + std::to_string(c.stages + 1));
    }
    try {
        validate_schedule(l);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return l;
}

void emit(const RunConfig& c, const std::string& file, const Json& j)
{
    std::string text = j.dump(2) + "\n";
    if (c.out.empty())
        std::cout << text;
    else
        write_file_atomic(fs::path(c.out) / file, text);
}

std::size_t default_samples(std::size_t dim) { return dim == 1 ? 201 : dim == 2 ? 41 : 11; }

// ---------------------------------------------------------------------------------------------

int cmd_prolong(const RunConfig& c)
{
    auto spec = load_spec(c.pde);
    int level = c.level >= 0 ? c.level : 1;
    auto sys = prolong(spec.op, level);
    for (const auto& [key, e] : sys.equations()) std::cout << to_string(e) << "\n";
    return ok;
}

RangeReport run_range(const PdeOperator& op, const RunConfig& c, std::size_t default_points, int default_level)
{
    auto pts = enumerate_dense(op.box(), scheme_of(c), c.points ? c.points : default_points);
    return range_condition_check(op, pts, c.level >= 0 ? c.level : default_level, solve_options(c));
}

void print_range_summary(const RangeReport& r, std::ostream& os)
{
    std::size_t good = 0;
    for (const auto& e : r.entries) good += e.outcome == RangeOutcome::solved || e.outcome == RangeOutcome::rank_certified;
    os << "range: " << good << "/" << r.entries.size() << " checks hold" << (r.linear ? " (linear, rank certificates)" : "")
       << "\n";
    for (const auto& e : r.entries)
        if (e.outcome != RangeOutcome::solved && e.outcome != RangeOutcome::rank_certified)
            os << "  " << to_string(e.outcome) << " at " << point_string(e.point) << " level " << e.level
               << (e.message.empty() ? "" : ": " + e.message) << "\n";
}

int cmd_range(const RunConfig& c)
{
    auto spec = load_spec(c.pde);
    auto r = run_range(spec.op, c, 5, 1);
    Json j{{"header", report_header("range")}, {"report", range_json(r, spec.op.context())}};
    emit(c, "range.json", j);
    print_range_summary(r, c.out.empty() ? std::cerr : std::cout);
    return r.all_ok() ? ok : failed;
}

SolutionSequence run_construct(const PdeSpec& spec, const RunConfig& c, int default_stages, Json& manifest)
{
    auto schedule = schedule_of(c, default_stages);
    auto scheme = scheme_of(c);
    auto z = enumerate_dense(spec.op.box(), scheme, schedule.size());
    auto s = construct_sequence(spec.op, z, schedule, solve_options(c));
    manifest = manifest_json(spec, s, scheme, Rational(1, 2));
    return s;
}

void write_samples(const RunConfig& c, const SolutionSequence& s)
{
    if (c.out.empty() || s.stages.empty()) return;
    std::size_t per_axis = c.samples ? c.samples : default_samples(s.op.dim());
    write_file_atomic(fs::path(c.out) / "samples.csv", samples_csv(s.stages.back().functions, s.op, per_axis));
}

void print_construct_summary(const SolutionSequence& s, std::ostream& os)
{
    os << "construct: " << s.stages.size() << "/" << s.schedule.size() << " stages";
    if (s.failure) os << ", failed at " << s.failure->describe();
    os << "\n";
}

int cmd_construct(const RunConfig& c)
{
    auto spec = load_spec(c.pde);
    Json manifest;
    auto s = run_construct(spec, c, 3, manifest);
    emit(c, "manifest.json", manifest);
    write_samples(c, s);
    print_construct_summary(s, c.out.empty() ? std::cerr : std::cout);
    if (s.failure) std::cerr << "error: " << s.failure->describe() << "\n";
    return s.complete() ? ok : failed;
}

void print_verify_summary(const VerificationReport& r, std::ostream& os)
{
    os << "verify: " << (r.pass ? "PASS" : "FAIL") << (r.degenerate ? " (degenerate: no stages)" : "")
       << (r.exact_zeros() ? ", exact zeros" : ", float zeros within tolerance") << "\n";
    if (r.construction_failure) os << "  construction stopped: " << *r.construction_failure << "\n";
    for (const auto& f : r.failures) os << "  " << f.describe() << "\n";
}

Json verify_json(const VerificationReport& r, const VanishingOptions& o)
{
    return Json{{"header", report_header("vanishing")},
                {"arithmetic", mode_string(o)},
                {"tolerance", o.tolerance},
                {"report", verification_json(r)}};
}

VerificationReport run_verify(const SolutionSequence& s, const VanishingOptions& o)
{
    try {
        return verify_solution(s, o);
    } catch (const std::domain_error& e) {
        throw UsageError(std::string(e.what()) + "; use --arith float or auto for float-solved stages");
    }
}

int cmd_verify(const RunConfig& c)
{
    std::ifstream in(c.manifest);
    if (!in) throw UsageError("cannot open manifest " + c.manifest);
    Json m;
    try {
        m = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(c.manifest + ": " + e.what());
    }
    auto lm = [&] {
        try {
            return manifest_from_json(m);
        } catch (const ManifestError& e) {
            throw UsageError(c.manifest + ": " + e.what());
        }
    }();
    auto o = vanishing_options(c);
    auto r = run_verify(lm.sequence, o);
    emit(c, "vanishing.json", verify_json(r, o));
    print_verify_summary(r, c.out.empty() ? std::cerr : std::cout);
    return r.pass ? ok : failed;
}

int demo_lewy(const RunConfig& c)
{
    auto spec = [&] {
        try {
            return lewy_spec(c.f);
        } catch (const PdeFileError& e) {
            throw UsageError(std::string("--f: ") + e.what());
        }
    }();
    std::ostream& os = std::cout;
    os << "Lewy system, f = " << c.f << "\n";
    for (const auto& t : spec.equations_text) os << "  " << t << "\n";
    auto range = run_range(spec.op, c, 5, 2);
    print_range_summary(range, os);
    Json manifest;
    auto s = run_construct(spec, c, 2, manifest);
    print_construct_summary(s, os);
    auto o = vanishing_options(c);
    auto v = run_verify(s, o);
    print_verify_summary(v, os);
    if (!c.out.empty()) {
        emit(c, "range.json", Json{{"header", report_header("range")}, {"report", range_json(range, spec.op.context())}});
        emit(c, "manifest.json", manifest);
        emit(c, "vanishing.json", verify_json(v, o));
        write_samples(c, s);
        write_file_atomic(fs::path(c.out) / "lewy.pde", spec.source);
    }
    return range.all_ok() && s.complete() && v.pass ? ok : failed;
}

int demo_example11(const RunConfig& c)
{
    VariableContext ctx{{"x"}, {"u"}};
    std::size_t n = c.points ? c.points : 6;
    std::vector<Interval> box{{0, 1}};
    auto z = dense_complement(box, scheme_of(c), n);
    std::vector<int> l;
    for (std::size_t nu = 0; nu < n; ++nu) l.push_back(static_cast<int>(nu) + 1);
    auto w = example_1_1(z.points, l, ctx);
    std::vector<int> orders;
    for (int k = 0; k <= l.back(); ++k) orders.push_back(k);
    auto o = vanishing_options(c);
    auto r = check_vanishing(w, z, orders, o);
    bool pattern = true;
    for (const auto& e : r.entries) {
        std::size_t first = 0;
        while (first < l.size() && l[first] <= e.order) ++first;
        std::size_t want = std::max(e.point_index, first);
        std::optional<std::size_t> expect = want < l.size() ? std::optional(want) : std::nullopt;
        pattern = pattern && e.witness == expect;
    }
    Json terms = Json::array();
    for (const auto& t : w.terms) terms.push_back(to_string(t->expression()));
    Json pts = Json::array();
    for (const auto& p : z.points) pts.push_back(point_json(p));
    emit(c, "example11.json",
         Json{{"header", report_header("example11")},
              {"points", std::move(pts)},
              {"schedule", l},
              {"terms", std::move(terms)},
              {"witness_pattern", pattern ? "max(j, min{nu : l_nu > l})" : "MISMATCH"},
              {"report", vanishing_json(r)}});
    std::ostream& os = c.out.empty() ? std::cerr : std::cout;
    os << "example11: " << n << " points, orders 0.." << l.back() << ", witness pattern " << (pattern ? "confirmed" : "MISMATCH")
       << (r.exact_zeros() ? ", exact zeros" : "") << "\n";
    return pattern && r.exact_zeros() ? ok : failed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"jetsol: jet-space solutions of nonlinear PDEs in sequence algebras"};
    app.require_subcommand(1);
    RunConfig c;

    auto add_tol = [&](CLI::App* sub, const std::string& what) {
        sub->add_option("--tol", c.tol, what)->check(CLI::PositiveNumber);
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", c.out, "output directory (default: JSON on stdout)"); };
    auto add_points = [&](CLI::App* sub, const std::string& what) {
        sub->add_option("--points", c.points, what)->check(CLI::PositiveNumber);
        sub->add_option("--scheme", c.scheme, "dense point scheme: dyadic or diagonal")->default_val("dyadic");
    };
    auto add_construct = [&](CLI::App* sub, const std::string& stages_default) {
        sub->add_option("--stages", c.stages, "last stage index N (stages 0..N); default " + stages_default)->check(CLI::NonNegativeNumber);
        sub->add_option("--schedule", c.schedule, "prolongation orders l_0..l_N as a comma list, or 'nu' for l = nu")->default_val("nu");
        sub->add_option("--samples", c.samples, "CSV grid nodes per axis (default 201, 41, 11 for 1, 2, 3 dims)");
    };
    auto add_arith = [&](CLI::App* sub) {
        sub->add_option("--arith", c.arith, "zero test arithmetic: exact, float or auto")
            ->check(CLI::IsMember({"exact", "float", "auto"}))
            ->default_val("auto");
    };

    auto* prolong_cmd = app.add_subcommand("prolong", "print the prolonged system D^p G_j, graded-lex in p");
    prolong_cmd->add_option("file", c.pde, "PDE file")->required();
    prolong_cmd->add_option("--level", c.level, "prolongation level l (default 1)")->check(CLI::NonNegativeNumber);

    auto* range_cmd = app.add_subcommand("range", "check the range condition at dense sample points");
    range_cmd->add_option("file", c.pde, "PDE file")->required();
    range_cmd->add_option("--level", c.level, "highest prolongation level (default 1)")->check(CLI::NonNegativeNumber);
    add_points(range_cmd, "number of sample points (default 5)");
    add_tol(range_cmd, "residual and rank tolerance for float data (default 1e-9)");
    add_out(range_cmd);

    auto* construct_cmd = app.add_subcommand("construct", "build s_0..s_N and write a manifest and CSV samples");
    construct_cmd->add_option("file", c.pde, "PDE file")->required();
    add_construct(construct_cmd, "3");
    construct_cmd->add_option("--scheme", c.scheme, "dense point scheme: dyadic or diagonal")->default_val("dyadic");
    add_tol(construct_cmd, "residual tolerance for float jets (default 1e-9)");
    add_out(construct_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "check the error sequence of a manifest for asymptotic vanishing");
    verify_cmd->add_option("manifest", c.manifest, "manifest.json written by construct")->required();
    add_tol(verify_cmd, "float zero tolerance (default 1e-10)");
    add_arith(verify_cmd);
    add_out(verify_cmd);

    auto* demo_cmd = app.add_subcommand("demo", "run a canonical demo: lewy or example11");
    demo_cmd->add_option("name", c.demo, "demo name")->required()->check(CLI::IsMember({"lewy", "example11"}));
    demo_cmd->add_option("--f", c.f, "Lewy right-hand side, a real expression in x, y, z")->default_val("x");
    demo_cmd->add_option("--level", c.level, "Lewy range-check level (default 2)")->check(CLI::NonNegativeNumber);
    add_points(demo_cmd, "sample points (lewy: range points, default 5; example11: sequence length, default 6)");
    add_construct(demo_cmd, "2");
    add_tol(demo_cmd, "tolerance for float data");
    add_arith(demo_cmd);
    add_out(demo_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*prolong_cmd) return cmd_prolong(c);
        if (*range_cmd) return cmd_range(c);
        if (*construct_cmd) return cmd_construct(c);
        if (*verify_cmd) return cmd_verify(c);
        if (*demo_cmd) return c.demo == "lewy" ? demo_lewy(c) : demo_example11(c);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failed;
    }
    return usage;
}
