#include "bottomup/parser.hpp"

#include <charconv>
#include <optional>
#include <unordered_map>

namespace bottomup {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      reason_(message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Name, Quoted, Var, Int, Neck, Comma, LParen, RParen, LBracket, RBracket, Bar, End, Eof };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

const char* describe(Tok k) {
    switch (k) {
    case Tok::Name: return "atom";
    case Tok::Quoted: return "quoted atom";
    case Tok::Var: return "variable";
    case Tok::Int: return "integer";
    case Tok::Neck: return "':-'";
    case Tok::Comma: return "','";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Bar: return "'|'";
    case Tok::End: return "'.'";
    case Tok::Eof: return "end of input";
    }
    return "token";
}

bool is_alnum(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_layout();
        std::size_t line = line_, col = col_;
        if (pos_ >= src_.size()) return {Tok::Eof, "", line, col};
        char c = src_[pos_];
        auto single = [&](Tok k) {
            advance();
            return Token{k, std::string(1, c), line, col};
        };
        switch (c) {
        case ',': return single(Tok::Comma);
        case '(': return single(Tok::LParen);
        case ')': return single(Tok::RParen);
        case '[': return single(Tok::LBracket);
        case ']': return single(Tok::RBracket);
        case '|': return single(Tok::Bar);
        case '.': return single(Tok::End);
        case ':':
            if (peek(1) == '-') {
                advance();
                advance();
                return {Tok::Neck, ":-", line, col};
            }
            throw ParseError("unexpected character ':'", line, col);
        case '\'':
            return quoted(line, col);
        default:
            break;
        }
        if (is_digit(c) || (c == '-' && is_digit(peek(1)))) {
            std::size_t start = pos_;
            advance();
            while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
            return {Tok::Int, std::string(src_.substr(start, pos_ - start)), line, col};
        }
        if (is_alnum(c)) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && is_alnum(src_[pos_])) advance();
            std::string text(src_.substr(start, pos_ - start));
            bool var = c == '_' || (c >= 'A' && c <= 'Z');
            return {var ? Tok::Var : Tok::Name, std::move(text), line, col};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }

private:
    char peek(std::size_t ahead) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_layout() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
                advance();
            } else {
                break;
            }
        }
    }

    Token quoted(std::size_t line, std::size_t col) {
        advance();
        std::string text;
        for (;;) {
            if (pos_ >= src_.size()) throw ParseError("unterminated quoted atom", line, col);
            char c = src_[pos_];
            if (c == '\'') {
                if (peek(1) == '\'') {
                    text += '\'';
                    advance();
                    advance();
                    continue;
                }
                advance();
                break;
            }
            if (c == '\\') {
                char e = peek(1);
                if (e == '\'' || e == '\\') {
                    text += e;
                } else if (e == 'n') {
                    text += '\n';
                } else if (e == 't') {
                    text += '\t';
                } else {
                    throw ParseError("unsupported escape sequence in quoted atom", line_, col_);
                }
                advance();
                advance();
                continue;
            }
            if (c == '\n') throw ParseError("newline in quoted atom", line, col);
            text += c;
            advance();
        }
        return {Tok::Quoted, std::move(text), line, col};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    Parser(std::string_view src, VarCounter& counter) : lexer_(src), counter_(counter) { shift(); }

    Program program() {
        Program p;
        while (tok_.kind != Tok::Eof) p.clauses.push_back(clause());
        return p;
    }

    Term query() {
        vars_.clear();
        Token start = tok_;
        Term t = term();
        if (t.is_var()) throw ParseError("query must not be a variable", start.line, start.column);
        if (t.is_integer()) throw ParseError("query must not be an integer", start.line, start.column);
        if (tok_.kind == Tok::End) shift();
        expect(Tok::Eof);
        return t;
    }

private:
    void shift() { tok_ = lexer_.next(); }

    [[noreturn]] void unexpected(const std::string& wanted) const {
        std::string got = describe(tok_.kind);
        if (!tok_.text.empty() && tok_.kind != Tok::Eof) got += " '" + tok_.text + "'";
        throw ParseError("expected " + wanted + ", found " + got, tok_.line, tok_.column);
    }

    void expect(Tok k) {
        if (tok_.kind != k) unexpected(describe(k));
        shift();
    }

    Clause clause() {
        vars_.clear();
        if (tok_.kind == Tok::Neck) {
            throw ParseError("directives are not supported", tok_.line, tok_.column);
        }
        Token head_tok = tok_;
        Term head = term();
        check_literal(head, head_tok, "clause head");
        if (head.is_atom() && head.name() == "true") {
            throw ParseError("'true' is reserved and cannot be a clause head", head_tok.line, head_tok.column);
        }
        Clause c{head, {}};
        if (tok_.kind == Tok::Neck) {
            shift();
            for (;;) {
                Token lit_tok = tok_;
                Term lit = term();
                check_literal(lit, lit_tok, "body literal");
                if (lit.is_atom() && lit.name() == "true") {
                    throw ParseError("'true' is reserved and cannot appear in a clause body", lit_tok.line,
                                     lit_tok.column);
                }
                c.body.push_back(std::move(lit));
                if (tok_.kind != Tok::Comma) break;
                shift();
            }
        }
        if (tok_.kind != Tok::End) unexpected(c.body.empty() ? "':-' or '.'" : "',' or '.'");
        shift();
        return c;
    }

    static void check_literal(const Term& t, const Token& at, const char* where) {
        if (t.is_var()) throw ParseError(std::string("variable in ") + where + " position", at.line, at.column);
        if (t.is_integer()) throw ParseError(std::string("integer in ") + where + " position", at.line, at.column);
    }

    Term term() {
        switch (tok_.kind) {
        case Tok::Var: {
            Token t = tok_;
            shift();
            return variable(t.text);
        }
        case Tok::Int: {
            Token t = tok_;
            shift();
            std::int64_t value = 0;
            auto first = t.text.data();
            auto last = first + t.text.size();
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || ptr != last) throw ParseError("integer out of range", t.line, t.column);
            return Term::integer(value);
        }
        case Tok::Name:
        case Tok::Quoted: {
            std::string name = tok_.text;
            shift();
            if (tok_.kind != Tok::LParen) return Term::atom(name);
            shift();
            std::vector<Term> args = arguments();
            expect(Tok::RParen);
            return Term::compound(name, std::move(args));
        }
        case Tok::LBracket:
            return list();
        default:
            unexpected("a term");
        }
    }

    std::vector<Term> arguments() {
        std::vector<Term> args{term()};
        while (tok_.kind == Tok::Comma) {
            shift();
            args.push_back(term());
        }
        return args;
    }

    Term list() {
        expect(Tok::LBracket);
        if (tok_.kind == Tok::RBracket) {
            shift();
            return Term::nil();
        }
        std::vector<Term> items = arguments();
        std::optional<Term> tail;
        if (tok_.kind == Tok::Bar) {
            shift();
            tail = term();
        }
        expect(Tok::RBracket);
        return Term::list(std::move(items), std::move(tail));
    }

    Term variable(const std::string& name) {
        if (name == "_") return Term::variable(counter_.fresh());
        auto it = vars_.find(name);
        if (it != vars_.end()) return it->second;
        Term v = Term::variable(counter_.fresh(), name);
        vars_.emplace(name, v);
        return v;
    }

    Lexer lexer_;
    VarCounter& counter_;
    Token tok_{Tok::Eof, "", 0, 0};
    std::unordered_map<std::string, Term> vars_;
};

}  // namespace

Program parse_program(std::string_view src, VarCounter& counter) {
    return Parser(src, counter).program();
}

Term parse_query(std::string_view src, VarCounter& counter) {
    return Parser(src, counter).query();
}

Clause rename_clause(const Clause& c, VarCounter& counter) {
    Renamer rename(counter);
    Clause out{rename(c.head), {}};
    out.body.reserve(c.body.size());
    for (const Term& b : c.body) out.body.push_back(rename(b));
    return out;
}

std::string format_clause(const Clause& c) {
    VarNaming naming;
    std::string out = format_term(c.head, naming);
    for (std::size_t i = 0; i < c.body.size(); ++i) {
        out += i == 0 ? " :- " : ", ";
        out += format_term(c.body[i], naming);
    }
    out += '.';
    return out;
}

std::string format_program(const Program& p) {
    std::string out;
    for (const Clause& c : p.clauses) {
        out += format_clause(c);
        out += '\n';
    }
    return out;
}

}  // namespace bottomup
