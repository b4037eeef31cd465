#pragma once

#include "jetsol/expr/parse.hpp"
#include "jetsol/jet/pde_operator.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetsol {

class PdeFileError : public std::runtime_error {
public:
    PdeFileError(std::size_t line, std::size_t column, const std::string& message)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line),
          column_(column)
    {
    }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Operator description as loaded from text. `equations_text` keeps each eq: line verbatim.
struct PdeSpec {
    PdeOperator op;
    std::vector<std::string> equations_text;
    std::string source;
};

namespace detail {

inline std::vector<std::pair<std::string, std::size_t>> split_words(const std::string& s, std::size_t offset)
{
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != ',') ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start), offset + start);
    }
    return out;
}

inline bool valid_name(const std::string& s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c))) return false;
    static const char* reserved[] = {"sin", "cos", "exp", "log", "sqrt"};
    for (const char* r : reserved)
        if (s == r) return false;
    return true;
}

}  // namespace detail

/// Parses the header keys dim:, vars:, unknowns:, order:, domain: followed by eq: lines.
/// "eq: lhs = rhs" is folded to lhs - rhs. Lines starting with # are comments.
inline PdeSpec parse_pde_text(const std::string& text)
{
    std::optional<std::size_t> dim;
    std::optional<int> order;
    std::vector<std::string> vars, unknowns;
    std::vector<Interval> box;
    bool have_domain = false;
    struct PendingEq {
        std::string text;
        std::size_t line, column;
    };
    std::vector<PendingEq> pending;

    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::size_t first = raw.find_first_not_of(" \t");
        if (first == std::string::npos || raw[first] == '#') continue;
        std::size_t colon = raw.find(':', first);
        if (colon == std::string::npos) throw PdeFileError(lineno, first + 1, "expected 'key: value'");
        std::string key = raw.substr(first, colon - first);
        while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
        std::string value = raw.substr(colon + 1);
        std::size_t vcol = colon + 2;
        auto words = detail::split_words(value, vcol);

        auto require_header = [&](bool seen) {
            if (seen) throw PdeFileError(lineno, first + 1, "duplicate '" + key + "'");
            if (!pending.empty()) throw PdeFileError(lineno, first + 1, "'" + key + "' must precede eq: lines");
        };
        auto integer = [&](const std::pair<std::string, std::size_t>& w) {
            try {
                std::size_t used = 0;
                long v = std::stol(w.first, &used);
                if (used != w.first.size() || v < 0) throw std::invalid_argument("");
                return v;
            } catch (const std::exception&) {
                throw PdeFileError(lineno, w.second, "expected a non-negative integer, got '" + w.first + "'");
            }
        };

        if (key == "dim") {
            require_header(dim.has_value());
            if (words.size() != 1) throw PdeFileError(lineno, vcol, "dim: takes one integer");
            dim = static_cast<std::size_t>(integer(words[0]));
        } else if (key == "order") {
            require_header(order.has_value());
            if (words.size() != 1) throw PdeFileError(lineno, vcol, "order: takes one integer");
            order = static_cast<int>(integer(words[0]));
        } else if (key == "vars" || key == "unknowns") {
            auto& target = key == "vars" ? vars : unknowns;
            require_header(!target.empty());
            if (words.empty()) throw PdeFileError(lineno, vcol, key + ": needs at least one name");
            for (const auto& [w, col] : words) {
                if (!detail::valid_name(w)) throw PdeFileError(lineno, col, "invalid name '" + w + "'");
                for (const auto& existing : vars)
                    if (existing == w) throw PdeFileError(lineno, col, "name '" + w + "' declared twice");
                for (const auto& existing : unknowns)
                    if (existing == w) throw PdeFileError(lineno, col, "name '" + w + "' declared twice");
                target.push_back(w);
            }
        } else if (key == "domain") {
            require_header(have_domain);
            have_domain = true;
            std::size_t i = 0;
            while (i < value.size()) {
                if (std::isspace(static_cast<unsigned char>(value[i]))) {
                    ++i;
                    continue;
                }
                if (value[i] != '(') throw PdeFileError(lineno, vcol + i, "expected '(' opening an interval");
                std::size_t close = value.find(')', i);
                if (close == std::string::npos) throw PdeFileError(lineno, vcol + i, "unclosed interval");
                std::string inner = value.substr(i + 1, close - i - 1);
                std::size_t comma = inner.find(',');
                if (comma == std::string::npos) throw PdeFileError(lineno, vcol + i, "interval needs 'lo, hi'");
                auto trim = [](std::string s) {
                    s.erase(0, s.find_first_not_of(" \t"));
                    s.erase(s.find_last_not_of(" \t") + 1);
                    return s;
                };
                Interval iv;
                try {
                    iv.lo = parse_rational(trim(inner.substr(0, comma)));
                    iv.hi = parse_rational(trim(inner.substr(comma + 1)));
                } catch (const std::exception&) {
                    throw PdeFileError(lineno, vcol + i, "interval endpoints must be rational numbers");
                }
                if (!(iv.lo < iv.hi)) throw PdeFileError(lineno, vcol + i, "interval needs lo < hi");
                box.push_back(iv);
                i = close + 1;
            }
        } else if (key == "eq") {
            pending.push_back({value, lineno, vcol});
        } else {
            throw PdeFileError(lineno, first + 1, "unknown key '" + key + "'");
        }
    }

    if (vars.empty()) throw PdeFileError(lineno + 1, 1, "missing 'vars:'");
    if (unknowns.empty()) unknowns = {"u"};
    if (dim && *dim != vars.size())
        throw PdeFileError(lineno + 1, 1, "dim: " + std::to_string(*dim) + " disagrees with " +
                                              std::to_string(vars.size()) + " declared vars");
    if (!order) throw PdeFileError(lineno + 1, 1, "missing 'order:'");
    if (!have_domain) throw PdeFileError(lineno + 1, 1, "missing 'domain:'");
    if (box.size() != vars.size())
        throw PdeFileError(lineno + 1, 1, "domain: needs one interval per variable");
    if (pending.empty()) throw PdeFileError(lineno + 1, 1, "no 'eq:' lines");

    VariableContext ctx;
    ctx.space_names = vars;
    ctx.unknown_names = unknowns;
    ctx.max_jet_order = *order;

    std::vector<Expr> eqs;
    std::vector<std::string> texts;
    for (const auto& eq : pending) {
        std::size_t eqpos = eq.text.find('=');
        if (eqpos != std::string::npos && eq.text.find('=', eqpos + 1) != std::string::npos)
            throw PdeFileError(eq.line, eq.column + eq.text.find('=', eqpos + 1), "more than one '='");
        auto parse_part = [&](const std::string& part, std::size_t offset) {
            try {
                return parse_or_throw(part, ctx);
            } catch (const ParseError& err) {
                throw PdeFileError(eq.line, eq.column + offset + err.diagnostic().position,
                                   err.diagnostic().message);
            }
        };
        Expr lhs = parse_part(eq.text.substr(0, eqpos), 0);
        Expr g = lhs;
        if (eqpos != std::string::npos) {
            Expr rhs = parse_part(eq.text.substr(eqpos + 1), eqpos + 1);
            if (has_jet_variables(rhs))
                g = lhs - rhs;
            else
                g = normalize_homogeneous(lhs, rhs);
        }
        eqs.push_back(g);
        std::string t = eq.text;
        t.erase(0, t.find_first_not_of(" \t"));
        t.erase(t.find_last_not_of(" \t") + 1);
        texts.push_back(t);
    }

    try {
        PdeOperator op(ctx, *order, eqs, box);
        return PdeSpec{std::move(op), std::move(texts), text};
    } catch (const std::invalid_argument& err) {
        throw PdeFileError(pending.front().line, 1, err.what());
    }
}

inline PdeSpec load_pde_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_pde_text(buf.str());
}

}  // namespace jetsol
