#pragma once

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <string>

#include "nullcurve/errors.hpp"

namespace nullcurve {

namespace detail {

/**
Recursive-descent parser for the curvature-function grammar:
variable x, decimal literals, + - * / ^ (right-associative power),
parentheses, unary minus, and sin cos sinh cosh exp log sqrt.
*/
class ExpressionParser {
public:
    using Fn = std::function<double(double)>;

    explicit ExpressionParser(std::string text) : text_(std::move(text)) {}

    Fn parse()
    {
        Fn e = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return e;
    }

private:
    Fn parse_sum()
    {
        Fn lhs = parse_product();
        for (;;) {
            skip_ws();
            if (consume('+')) {
                Fn rhs = parse_product();
                lhs = [lhs, rhs](double x) { return lhs(x) + rhs(x); };
            } else if (consume('-')) {
                Fn rhs = parse_product();
                lhs = [lhs, rhs](double x) { return lhs(x) - rhs(x); };
            } else {
                return lhs;
            }
        }
    }

    Fn parse_product()
    {
        Fn lhs = parse_unary();
        for (;;) {
            skip_ws();
            if (consume('*')) {
                Fn rhs = parse_unary();
                lhs = [lhs, rhs](double x) { return lhs(x) * rhs(x); };
            } else if (consume('/')) {
                Fn rhs = parse_unary();
                lhs = [lhs, rhs](double x) { return lhs(x) / rhs(x); };
            } else {
                return lhs;
            }
        }
    }

    Fn parse_unary()
    {
        skip_ws();
        if (consume('-')) {
            Fn e = parse_unary();
            return [e](double x) { return -e(x); };
        }
        if (consume('+'))
            return parse_unary();
        return parse_power();
    }

    Fn parse_power()
    {
        Fn base = parse_atom();
        skip_ws();
        if (consume('^')) {
            Fn expo = parse_unary(); // right-associative, binds unary minus in the exponent
            return [base, expo](double x) { return std::pow(base(x), expo(x)); };
        }
        return base;
    }

    Fn parse_atom()
    {
        skip_ws();
        if (pos_ >= text_.size())
            fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Fn e = parse_sum();
            skip_ws();
            if (!consume(')'))
                fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return parse_name();
        fail(std::string("unexpected character '") + c + "'");
        return {};
    }

    Fn parse_number()
    {
        size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text_.substr(pos_), &used);
        } catch (const std::exception&) {
            fail("malformed number");
        }
        pos_ += used;
        return [v](double) { return v; };
    }

    Fn parse_name()
    {
        const size_t start = pos_;
        while (pos_ < text_.size()
               && std::isalpha(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        const std::string name = text_.substr(start, pos_ - start);
        if (name == "x")
            return [](double x) { return x; };

        double (*fn)(double) = nullptr;
        if (name == "sin") fn = std::sin;
        else if (name == "cos") fn = std::cos;
        else if (name == "sinh") fn = std::sinh;
        else if (name == "cosh") fn = std::cosh;
        else if (name == "exp") fn = std::exp;
        else if (name == "log") fn = std::log;
        else if (name == "sqrt") fn = std::sqrt;
        else fail("unknown identifier '" + name + "'");

        skip_ws();
        if (!consume('('))
            fail("expected '(' after '" + name + "'");
        Fn arg = parse_sum();
        skip_ws();
        if (!consume(')'))
            fail("expected ')'");
        return [fn, arg](double x) { return fn(arg(x)); };
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool consume(char c)
    {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorCode::ParseError,
                    what + " at position " + std::to_string(pos_) + " in \"" + text_ + "\"");
    }

    std::string text_;
    size_t pos_ = 0;
};

} // namespace detail

/// Compiles an expression in the variable x to a callable.
inline std::function<double(double)> parse_expression(const std::string& text)
{
    return detail::ExpressionParser(text).parse();
}

} // namespace nullcurve
