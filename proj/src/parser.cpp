#include "levilab/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "levilab/error.hpp"

namespace levilab {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    std::size_t column = 0;  // 1-based
};

class Lexer {
public:
    Lexer(std::string_view src, int line) : src_(src), line_(line) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            std::size_t col = pos_ + 1;
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", 0.0, col});
                return out;
            }
            char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                out.push_back(number(col));
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    ++pos_;
                out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), 0.0, col});
            } else {
                Tok k;
                switch (c) {
                    case '+': k = Tok::Plus; break;
                    case '-': k = Tok::Minus; break;
                    case '*': k = Tok::Star; break;
                    case '/': k = Tok::Slash; break;
                    case '^': k = Tok::Caret; break;
                    case '(': k = Tok::LParen; break;
                    case ')': k = Tok::RParen; break;
                    case ',': k = Tok::Comma; break;
                    default:
                        throw ParseError(std::string("unexpected character '") + c + "'", col, line_);
                }
                ++pos_;
                out.push_back({k, std::string(1, c), 0.0, col});
            }
        }
    }

private:
    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    Token number(std::size_t col) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        std::string_view text = src_.substr(start, pos_ - start);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw ParseError("malformed number '" + std::string(text) + "'", col, line_);
        return {Tok::Number, std::string(text), value, col};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_;
};

std::optional<int> indexed_name(std::string_view name, std::string_view prefix) {
    if (name.size() <= prefix.size() || name.substr(0, prefix.size()) != prefix) return std::nullopt;
    std::string_view digits = name.substr(prefix.size());
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc()) return std::nullopt;
    return value;
}

const std::vector<std::string_view>& function_names() {
    static const std::vector<std::string_view> names{"sin", "cos", "exp", "log", "conj", "re", "im", "abs2"};
    return names;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const ParseContext& ctx) : toks_(std::move(tokens)), ctx_(ctx) {}

    Expr parse() {
        Expr e = expression();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().column, ctx_.line); }
    void expect(Tok k, const char* what) {
        if (!accept(k)) fail(std::string("expected ") + what);
    }

    Expr expression() {
        std::vector<Expr> terms{term()};
        while (true) {
            if (accept(Tok::Plus))
                terms.push_back(term());
            else if (accept(Tok::Minus))
                terms.push_back(negate(term()));
            else
                break;
        }
        return sum(std::move(terms));
    }

    Expr term() {
        Expr acc = unary();
        while (true) {
            if (accept(Tok::Star))
                acc = acc * unary();
            else if (peek().kind == Tok::Slash) {
                std::size_t col = peek().column;
                ++pos_;
                Expr den = unary();
                if (den.is_zero()) throw ParseError("division by literal zero", col, ctx_.line);
                acc = acc / den;
            } else
                break;
        }
        return acc;
    }

    Expr unary() {
        if (accept(Tok::Minus)) return negate(unary());
        if (accept(Tok::Plus)) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (peek().kind != Tok::Caret) return base;
        std::size_t col = peek().column;
        ++pos_;
        int k = integer_exponent();
        if (base.is_zero() && k < 0) throw ParseError("negative power of literal zero", col, ctx_.line);
        return pow(base, k);
    }

    int integer_exponent() {
        bool paren = accept(Tok::LParen);
        bool negative = false;
        if (accept(Tok::Minus))
            negative = true;
        else
            accept(Tok::Plus);
        if (peek().kind != Tok::Number) fail("exponent must be an integer literal");
        const Token& t = advance();
        double v = t.number;
        if (v != std::floor(v) || std::abs(v) > 1024)
            throw ParseError("exponent must be an integer literal", t.column, ctx_.line);
        if (paren) expect(Tok::RParen, "')'");
        int k = static_cast<int>(v);
        return negative ? -k : k;
    }

    Expr primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Number: advance(); return Expr(t.number);
            case Tok::LParen: {
                advance();
                Expr e = expression();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::Ident: return identifier();
            default: fail(t.kind == Tok::End ? "unexpected end of expression" : "unexpected '" + t.text + "'");
        }
    }

    Expr identifier() {
        const Token t = advance();
        const std::string& name = t.text;
        if (peek().kind == Tok::LParen) {
            if (std::find(function_names().begin(), function_names().end(), name) == function_names().end())
                throw ParseError("unknown function '" + name + "'", t.column, ctx_.line);
            advance();
            std::vector<Expr> args;
            if (peek().kind != Tok::RParen) {
                args.push_back(expression());
                while (accept(Tok::Comma)) args.push_back(expression());
            }
            expect(Tok::RParen, "')'");
            if (args.size() != 1)
                throw ParseError("function '" + name + "' takes 1 argument, got " + std::to_string(args.size()),
                                 t.column, ctx_.line);
            const Expr& a = args.front();
            if (name == "sin") return sin(a);
            if (name == "cos") return cos(a);
            if (name == "exp") return exp(a);
            if (name == "log") return log(a);
            if (name == "conj") return conjugate(a);
            if (name == "re") return real_part(a);
            if (name == "im") return imag_part(a);
            return abs2(a);
        }
        if (name == "i") return Expr(Complex(0.0, 1.0));
        if (name == "pi") return Expr(std::numbers::pi);
        if (auto j = indexed_name(name, "zb")) return holo_var(*j, true, t);
        if (auto j = indexed_name(name, "z")) return holo_var(*j, false, t);
        for (std::size_t k = 0; k < ctx_.params.size(); ++k)
            if (ctx_.params[k] == name) return Expr(Var::param(static_cast<int>(k)));
        if (auto it = ctx_.constants.find(name); it != ctx_.constants.end()) return Expr(it->second);
        if (std::find(function_names().begin(), function_names().end(), name) != function_names().end())
            throw ParseError("function '" + name + "' requires an argument list", t.column, ctx_.line);
        throw ParseError("unknown identifier '" + name + "'", t.column, ctx_.line);
    }

    Expr holo_var(int j, bool anti, const Token& t) {
        if (j < 1 || j > ctx_.n)
            throw ParseError("unknown variable '" + t.text + "' (n = " + std::to_string(ctx_.n) + ")", t.column,
                             ctx_.line);
        return anti ? Expr(Var::antiholo(j - 1)) : Expr(Var::holo(j - 1));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const ParseContext& ctx_;
};

}  // namespace

Expr parse_expr(std::string_view text, const ParseContext& context) {
    Parser p(Lexer(text, context.line).run(), context);
    return p.parse();
}

bool is_reserved_name(std::string_view name) {
    if (name == "i" || name == "pi") return true;
    if (std::find(function_names().begin(), function_names().end(), name) != function_names().end()) return true;
    return indexed_name(name, "z").has_value() || indexed_name(name, "zb").has_value();
}

}  // namespace levilab
