#pragma once

#include <cctype>

#include "crpoly.hpp"

namespace crsym {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                             std::to_string(col_) + ")"),
          line(line_),
          col(col_) {}
};

namespace detail {

struct Token {
    enum Kind { Ident, Int, Plus, Minus, Star, Caret, Slash, LParen, RParen, End } kind;
    std::string text;
    int line, col;
};

inline std::vector<Token> tokenize(const std::string& s, int line0 = 1, int col0 = 1) {
    std::vector<Token> out;
    int line = line0, col = col0;
    size_t i = 0;
    auto push = [&](Token::Kind k, std::string t) { out.push_back({k, std::move(t), line, col}); };
    while (i < s.size()) {
        char c = s[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            push(Token::Int, s.substr(i, j - i));
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            push(Token::Ident, s.substr(i, j - i));
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        Token::Kind k;
        switch (c) {
            case '+': k = Token::Plus; break;
            case '-': k = Token::Minus; break;
            case '*': k = Token::Star; break;
            case '^': k = Token::Caret; break;
            case '/': k = Token::Slash; break;
            case '(': k = Token::LParen; break;
            case ')': k = Token::RParen; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        push(k, std::string(1, c));
        ++col;
        ++i;
    }
    out.push_back({Token::End, "", line, col});
    return out;
}

/// Recursive-descent parser over any value type supporting ring operations.
/// Env supplies constants, named variables and (optionally) the imaginary
/// unit token I.
template <class V, class Env>
class Parser {
public:
    Parser(std::vector<Token> tokens, Env env) : toks_(std::move(tokens)), env_(std::move(env)) {}

    V parse() {
        V v = sum();
        expect(Token::End, "end of expression");
        return v;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }
    void expect(Token::Kind k, const std::string& what) {
        if (peek().kind != k)
            throw ParseError("expected " + what + ", found '" + peek().text + "'", peek().line,
                             peek().col);
        ++pos_;
    }

    V sum() {
        V v = product();
        while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
            bool minus = next().kind == Token::Minus;
            V rhs = product();
            v = minus ? v - rhs : v + rhs;
        }
        return v;
    }

    V product() {
        V v = unary();
        while (peek().kind == Token::Star) {
            next();
            v = v * unary();
        }
        return v;
    }

    V unary() {
        if (peek().kind == Token::Minus) {
            next();
            return -unary();
        }
        return power();
    }

    V power() {
        V v = atom();
        if (peek().kind == Token::Caret) {
            Token caret = next();
            if (peek().kind != Token::Int)
                throw ParseError("exponent must be an integer literal", caret.line, caret.col);
            long e = std::stol(next().text);
            V acc = env_.constant(Rational(1));
            for (long i = 0; i < e; ++i) acc = acc * v;
            v = std::move(acc);
        }
        return v;
    }

    V atom() {
        const Token& t = peek();
        switch (t.kind) {
            case Token::LParen: {
                next();
                V v = sum();
                expect(Token::RParen, "')'");
                return v;
            }
            case Token::Int: {
                Token num = next();
                Rational q = rat_from_string(num.text);
                if (peek().kind == Token::Slash) {  // rational literal p/q
                    Token slash = next();
                    if (peek().kind != Token::Int)
                        throw ParseError("expected integer denominator", slash.line, slash.col);
                    Rational d = rat_from_string(next().text);
                    if (sgn(d) == 0) throw ParseError("zero denominator", slash.line, slash.col);
                    q /= d;
                }
                return env_.constant(q);
            }
            case Token::Ident: {
                Token id = next();
                return env_.variable(id.text, id.line, id.col);
            }
            default:
                throw ParseError("expected a term, found '" + t.text + "'", t.line, t.col);
        }
    }

    std::vector<Token> toks_;
    Env env_;
    size_t pos_ = 0;
};

struct CREnv {
    VarTablePtr table;
    CRPoly constant(const Rational& q) const {
        return CRPoly::constant(table, GaussRational(q));
    }
    CRPoly variable(const std::string& name, int line, int col) const {
        if (name == "I") return CRPoly::constant(table, GaussRational::i_unit());
        int idx = table->index_of(name);
        if (idx >= 0) return CRPoly::variable(table, static_cast<size_t>(idx));
        int pidx = table->params()->index_of(name);
        if (pidx >= 0)
            return CRPoly::term(
                table, Mono(table->var_count(), 0),
                CoeffScalar::parameter(table->params(), static_cast<size_t>(pidx)));
        throw ParseError("unknown variable or parameter '" + name + "'", line, col);
    }
};

struct QEnv {
    RingPtr ring;
    QPoly constant(const Rational& q) const { return QPoly::constant(ring, q); }
    QPoly variable(const std::string& name, int line, int col) const {
        if (name == "I")
            throw ParseError("the imaginary unit is not allowed in this context", line, col);
        int idx = ring->index_of(name);
        if (idx < 0) throw ParseError("unknown variable '" + name + "'", line, col);
        return QPoly::variable(ring, static_cast<size_t>(idx));
    }
};

}  // namespace detail

/// Parses the model expression syntax (z1..zn, bz1..bzn, w1..wk, bw1..bwk,
/// I, declared parameter names, + - * ^, integer and p/q literals).
inline CRPoly parse_crpoly(const std::string& text, const VarTablePtr& table) {
    detail::Parser<CRPoly, detail::CREnv> p(detail::tokenize(text), detail::CREnv{table});
    return p.parse();
}

/// Same syntax over a plain polynomial ring (no imaginary unit).
inline QPoly parse_qpoly(const std::string& text, const RingPtr& ring) {
    detail::Parser<QPoly, detail::QEnv> p(detail::tokenize(text), detail::QEnv{ring});
    return p.parse();
}

}  // namespace crsym
