#pragma once

// Recursive-descent parser for the expression language (grammar in
// docs/grammar.md). Produces raw Ast trees; all normalization happens later.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "lbc/ast.hpp"
#include "lbc/error.hpp"

namespace lbc::io {

struct Token {
    enum class Kind { Number, Ident, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1, column = 1;
};

inline std::vector<Token> tokenize(std::string_view src)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        unsigned char c = src[i];
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = col;
        std::size_t j = i;
        if (std::isdigit(c)) {
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            t.kind = Token::Kind::Number;
        } else if (std::isalpha(c) || c == '_') {
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            t.kind = Token::Kind::Ident;
        } else if (std::string_view("+-*/^()[],=").find(static_cast<char>(c)) != std::string_view::npos) {
            j = i + 1;
            t.kind = Token::Kind::Punct;
        } else {
            throw Error(std::string("unexpected character '") + static_cast<char>(c) + "'", line, col);
        }
        t.text = std::string(src.substr(i, j - i));
        out.push_back(t);
        advance(j - i);
    }
    Token end;
    end.line = line;
    end.column = col;
    out.push_back(end);
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

    AstPtr parse_all()
    {
        AstPtr e = expr();
        if (peek().kind != Token::Kind::End)
            fail("unexpected '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek(int k = 0) const { return toks_.at(std::min(pos_ + k, toks_.size() - 1)); }
    const Token& next() { return toks_.at(pos_ < toks_.size() - 1 ? pos_++ : pos_); }
    bool is(const char* p, int k = 0) const { return peek(k).kind == Token::Kind::Punct && peek(k).text == p; }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(what, peek().line, peek().column);
    }

    void expect(const char* p)
    {
        if (!is(p))
            fail(peek().kind == Token::Kind::End ? std::string("expected '") + p + "' before end of input"
                                                 : std::string("expected '") + p + "', found '" + peek().text + "'");
        next();
    }

    static AstPtr at(Ast a, const Token& t)
    {
        a.line = t.line;
        a.column = t.column;
        return Ast::make(std::move(a));
    }

    AstPtr expr()
    {
        AstPtr l = term();
        while (is("+") || is("-")) {
            const Token& op = next();
            Ast a;
            a.kind = op.text == "+" ? Ast::Kind::Add : Ast::Kind::Sub;
            a.args = {l, term()};
            l = at(std::move(a), op);
        }
        return l;
    }

    AstPtr term()
    {
        AstPtr l = unary();
        while (is("*") || is("/")) {
            const Token& op = next();
            Ast a;
            a.kind = op.text == "*" ? Ast::Kind::Mul : Ast::Kind::Div;
            a.args = {l, unary()};
            l = at(std::move(a), op);
        }
        return l;
    }

    AstPtr unary()
    {
        if (is("-")) {
            const Token& op = next();
            Ast a;
            a.kind = Ast::Kind::Neg;
            a.args = {unary()};
            return at(std::move(a), op);
        }
        return power();
    }

    AstPtr power()
    {
        AstPtr b = primary();
        if (is("^")) {
            const Token& op = next();
            if (peek().kind != Token::Kind::Number)
                fail(peek().kind == Token::Kind::End ? "expected an exponent before end of input"
                                                     : "exponent must be a nonnegative integer");
            Ast a;
            a.kind = Ast::Kind::Pow;
            a.exponent = static_cast<unsigned>(std::stoul(next().text));
            a.args = {b};
            return at(std::move(a), op);
        }
        return b;
    }

    static bool is_mark(const std::string& s)
    {
        return s.size() > 1 && s[0] == 'D' && s.find_first_not_of("0123456789", 1) == std::string::npos;
    }

    static int deriv_order(const std::string& s)
    {
        if (s == "d")
            return 1;
        if (s.size() > 1 && s[0] == 'd' && s.find_first_not_of("0123456789", 1) == std::string::npos)
            return std::stoi(s.substr(1));
        return 0;
    }

    AstPtr primary()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Token::Kind::End:
            fail("unexpected end of input");
        case Token::Kind::Number: {
            next();
            Ast a;
            a.kind = Ast::Kind::Number;
            a.number = Rational(t.text);
            return at(std::move(a), t);
        }
        case Token::Kind::Punct:
            if (is("(")) {
                next();
                AstPtr e = expr();
                expect(")");
                return e;
            }
            if (is("["))
                return list();
            fail("unexpected '" + t.text + "'");
        case Token::Kind::Ident:
            break;
        }
        if (is_mark(t.text) && peek(1).kind == Token::Kind::Ident)
            return marked_atom();
        if (is("[", 1))
            return atom_tail({}, next());
        if (is("(", 1)) {
            const Token& name = next();
            next();
            if (int ord = deriv_order(name.text)) {
                Ast a;
                a.kind = Ast::Kind::Deriv;
                a.order = ord;
                a.args = {expr()};
                expect(")");
                return at(std::move(a), name);
            }
            if (name.text == "sec")
                return section(name);
            Ast a;
            a.kind = Ast::Kind::Call;
            a.name = name.text;
            if (!is(")")) {
                a.args.push_back(expr());
                while (is(",")) {
                    next();
                    a.args.push_back(expr());
                }
            }
            expect(")");
            return at(std::move(a), name);
        }
        next();
        Ast a;
        a.kind = Ast::Kind::Ident;
        a.name = t.text;
        return at(std::move(a), t);
    }

    AstPtr marked_atom()
    {
        const Token& first = peek();
        std::vector<int> marks;
        while (peek().kind == Token::Kind::Ident && is_mark(peek().text) && peek(1).kind == Token::Kind::Ident)
            marks.push_back(std::stoi(next().text.substr(1)));
        if (peek().kind != Token::Kind::Ident || !is("[", 1))
            fail("derivative marks must precede an atom name[...]");
        AstPtr a = atom_tail(marks, next());
        Ast b = *a;
        b.line = first.line;
        b.column = first.column;
        return Ast::make(std::move(b));
    }

    AstPtr atom_tail(std::vector<int> marks, const Token& name)
    {
        expect("[");
        Ast a;
        a.kind = Ast::Kind::Atom;
        a.name = name.text;
        a.derivs = std::move(marks);
        if (peek().kind == Token::Kind::Ident && peek().text == "x") {
            next();
            a.scalar_atom = true;
        } else {
            for (;;) {
                if (peek().kind != Token::Kind::Number)
                    fail("atom index must be a positive integer");
                a.indices.push_back(std::stoi(next().text));
                if (!is(","))
                    break;
                next();
            }
        }
        expect("]");
        return at(std::move(a), name);
    }

    AstPtr list()
    {
        const Token& open = next();
        Ast a;
        a.kind = Ast::Kind::List;
        if (!is("]")) {
            a.args.push_back(expr());
            while (is(",")) {
                next();
                a.args.push_back(expr());
            }
        }
        expect("]");
        return at(std::move(a), open);
    }

    AstPtr section(const Token& name)
    {
        Ast a;
        a.kind = Ast::Kind::Section;
        a.name = "sec";
        if (!is(")")) {
            for (;;) {
                if (peek().kind != Token::Kind::Ident)
                    fail("expected a section field name");
                std::string key = next().text;
                for (auto& k : a.keys)
                    if (k == key)
                        fail("repeated section field '" + key + "'");
                expect("=");
                a.keys.push_back(key);
                a.args.push_back(expr());
                if (!is(","))
                    break;
                next();
            }
        }
        expect(")");
        return at(std::move(a), name);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

inline AstPtr parse(std::string_view src) { return Parser(src).parse_all(); }

// ---------------------------------------------------------------------------
// printing raw trees back to source

namespace detail {

inline int precedence(const Ast& a)
{
    switch (a.kind) {
    case Ast::Kind::Add:
    case Ast::Kind::Sub: return 1;
    case Ast::Kind::Mul:
    case Ast::Kind::Div: return 2;
    case Ast::Kind::Neg: return 3;
    case Ast::Kind::Pow: return 4;
    default: return 5;
    }
}

} // namespace detail

/// Source text for a raw tree; parse(to_source(t)) is structurally t.
inline std::string to_source(const Ast& a)
{
    using K = Ast::Kind;
    auto wrap = [](const Ast& x, bool paren) { return paren ? "(" + to_source(x) + ")" : to_source(x); };
    int p = detail::precedence(a);
    switch (a.kind) {
    case K::Number: return a.number.get_str(); // the parser only makes nonnegative integers
    case K::Ident: return a.name;
    case K::Atom: {
        std::string s;
        for (int d : a.derivs)
            s += "D" + std::to_string(d) + " ";
        s += a.name + "[";
        if (a.scalar_atom)
            s += "x";
        for (std::size_t i = 0; i < a.indices.size(); ++i)
            s += (i ? "," : "") + std::to_string(a.indices[i]);
        return s + "]";
    }
    case K::Neg: return "-" + wrap(*a.args[0], detail::precedence(*a.args[0]) < 3);
    case K::Add:
    case K::Sub:
    case K::Mul:
    case K::Div: {
        const char* op = a.kind == K::Add ? " + " : a.kind == K::Sub ? " - " : a.kind == K::Mul ? "*" : "/";
        // left-associative: the right operand needs parentheses at equal precedence
        return wrap(*a.args[0], detail::precedence(*a.args[0]) < p) + op +
               wrap(*a.args[1], detail::precedence(*a.args[1]) <= p);
    }
    case K::Pow: return wrap(*a.args[0], detail::precedence(*a.args[0]) <= p) + "^" + std::to_string(a.exponent);
    case K::Deriv:
        return (a.order == 1 ? std::string("d") : "d" + std::to_string(a.order)) + "(" + to_source(*a.args[0]) + ")";
    case K::Call:
    case K::List:
    case K::Section: {
        std::string s = a.kind == K::List ? "[" : a.name + "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i)
                s += ", ";
            if (a.kind == K::Section)
                s += a.keys[i] + "=";
            s += to_source(*a.args[i]);
        }
        return s + (a.kind == K::List ? "]" : ")");
    }
    }
    return "";
}

} // namespace lbc::io
