#pragma once

#include "jetsol/expr/expression.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace jetsol {

struct ParseDiagnostic {
    std::size_t position = 0;
    std::string message;
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(ParseDiagnostic d)
        : std::runtime_error("offset " + std::to_string(d.position) + ": " + d.message), diagnostic_(std::move(d))
    {
    }
    const ParseDiagnostic& diagnostic() const { return diagnostic_; }

private:
    ParseDiagnostic diagnostic_;
};

namespace detail {

/// Recursive descent over
///   expr    := term (('+'|'-') term)*
///   term    := unary (('*'|'/') unary)*
///   unary   := ('+'|'-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | identifier | function '(' expr ')' | '(' expr ')'
class ExpressionParser {
public:
    ExpressionParser(std::string_view text, const VariableContext& ctx) : text_(text), ctx_(ctx) {}

    Expr parse()
    {
        Expr e = expr();
        skip_ws();
        if (pos_ < text_.size()) fail(pos_, std::string("unexpected '") + text_[pos_] + "'");
        return e;
    }

private:
    [[noreturn]] void fail(std::size_t at, std::string message) const
    {
        throw ParseError(ParseDiagnostic{at, std::move(message)});
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr()
    {
        std::vector<Expr> terms{term()};
        for (;;) {
            if (accept('+'))
                terms.push_back(term());
            else if (accept('-'))
                terms.push_back(-term());
            else
                break;
        }
        return terms.size() == 1 ? terms.front() : sum(std::move(terms));
    }

    Expr term()
    {
        Expr acc = unary_expr();
        for (;;) {
            skip_ws();
            std::size_t at = pos_;
            if (accept('*')) {
                acc = acc * unary_expr();
            } else if (accept('/')) {
                Expr den = unary_expr();
                if (den.is_zero()) fail(at, "division by zero");
                acc = acc / den;
            } else {
                break;
            }
        }
        return acc;
    }

    Expr unary_expr()
    {
        if (accept('-')) return -unary_expr();
        if (accept('+')) return unary_expr();
        return power_expr();
    }

    Expr power_expr()
    {
        Expr base = primary();
        skip_ws();
        std::size_t at = pos_;
        if (accept('^')) {
            Expr ex = unary_expr();
            if (!ex.is_constant()) fail(at + 1, "exponent must be a rational constant");
            try {
                return power(base, ex.value());
            } catch (const std::domain_error& err) {
                fail(at, err.what());
            }
        }
        return base;
    }

    Expr primary()
    {
        skip_ws();
        if (pos_ >= text_.size()) fail(pos_, "unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            std::size_t open = pos_++;
            Expr e = expr();
            if (!accept(')')) fail(open, "unbalanced parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (c == ')') fail(pos_, "unbalanced parenthesis");
        fail(pos_, std::string("unexpected '") + c + "'");
    }

    Expr number()
    {
        std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                digits();
            else
                pos_ = save;
        }
        try {
            return Expr(parse_rational(text_.substr(start, pos_ - start)));
        } catch (const std::exception&) {
            fail(start, "malformed number");
        }
    }

    Expr identifier()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string_view id = text_.substr(start, pos_ - start);

        static constexpr std::pair<std::string_view, UnaryFn> functions[] = {
            {"sin", UnaryFn::sin}, {"cos", UnaryFn::cos}, {"exp", UnaryFn::exp},
            {"log", UnaryFn::log}, {"sqrt", UnaryFn::sqrt}};
        for (const auto& [name, fn] : functions) {
            if (id != name) continue;
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != '(') fail(pos_, "expected '(' after " + std::string(name));
            std::size_t open = pos_++;
            Expr arg = expr();
            if (!accept(')')) fail(open, "unbalanced parenthesis");
            return unary(fn, arg);
        }

        for (std::size_t i = 0; i < ctx_.dim(); ++i)
            if (id == ctx_.space_names[i]) return variable(ctx_.space(i));

        std::size_t underscore = id.find('_');
        std::string_view base = id.substr(0, underscore);
        for (std::size_t u = 0; u < ctx_.unknowns(); ++u) {
            if (base != ctx_.unknown_names[u]) continue;
            MultiIndex p(ctx_.dim());
            if (underscore != std::string_view::npos) {
                std::string_view sub = id.substr(underscore + 1);
                if (sub.empty()) fail(start + underscore, "malformed subscript: empty");
                for (std::size_t k = 0; k < sub.size(); ++k) {
                    std::size_t axis = ctx_.dim();
                    for (std::size_t i = 0; i < ctx_.dim(); ++i)
                        if (ctx_.space_names[i].size() == 1 && ctx_.space_names[i][0] == sub[k]) axis = i;
                    if (axis == ctx_.dim())
                        fail(start + underscore + 1 + k,
                             std::string("malformed subscript: '") + sub[k] + "' is not a space variable");
                    p = p.raised(axis);
                }
            }
            if (ctx_.max_jet_order >= 0 && p.order() > ctx_.max_jet_order)
                fail(start, "jet order " + std::to_string(p.order()) + " exceeds the declared order " +
                                std::to_string(ctx_.max_jet_order));
            return variable(ctx_.jet(u, p));
        }
        fail(start, "unknown identifier '" + std::string(id) + "'");
    }

    std::string_view text_;
    const VariableContext& ctx_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses expression text; throws ParseError carrying the offending offset.
inline Expr parse_or_throw(std::string_view text, const VariableContext& ctx)
{
    return detail::ExpressionParser(text, ctx).parse();
}

inline std::variant<Expr, ParseDiagnostic> parse_expression(std::string_view text, const VariableContext& ctx)
{
    try {
        return parse_or_throw(text, ctx);
    } catch (const ParseError& err) {
        return err.diagnostic();
    }
}

}  // namespace jetsol
