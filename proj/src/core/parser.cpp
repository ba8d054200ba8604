#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "core/errors.hpp"
#include "core/expr.hpp"

// Recursive-descent parser for the assertion grammar. Precedence, low to
// high: -> (right assoc), <=>, ||, ^, &&, !, comparison, + -, * / %, unary
// minus, atom. Typing is checked as nodes are built; error positions point
// at the offending token.

namespace aoi {
namespace {

enum class Tok {
    End, Ident, Number,
    LParen, RParen,
    Not, And, Or, Xor, Implies, Equiv,
    Eq, Ne, Lt, Le, Gt, Ge,
    Plus, Minus, Star, Slash, Percent,
};

struct Token {
    Tok kind = Tok::End;
    int pos = 0;
    std::string text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_ws();
        Token t;
        t.pos = static_cast<int>(i_);
        if (i_ >= src_.size()) return t;

        const char c = src_[i_];
        auto two = [&](char a, char b) {
            return c == a && i_ + 1 < src_.size() && src_[i_ + 1] == b;
        };

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident(t);
        if (std::isdigit(static_cast<unsigned char>(c))) return number(t);

        if (c == '<' && i_ + 2 < src_.size() && src_[i_ + 1] == '=' && src_[i_ + 2] == '>')
            return make(t, Tok::Equiv, 3);
        if (two('&', '&')) return make(t, Tok::And, 2);
        if (two('|', '|')) return make(t, Tok::Or, 2);
        if (two('-', '>')) return make(t, Tok::Implies, 2);
        if (two('=', '=')) return make(t, Tok::Eq, 2);
        if (two('!', '=')) return make(t, Tok::Ne, 2);
        if (two('<', '=')) return make(t, Tok::Le, 2);
        if (two('>', '=')) return make(t, Tok::Ge, 2);

        switch (c) {
        case '(': return make(t, Tok::LParen, 1);
        case ')': return make(t, Tok::RParen, 1);
        case '!': return make(t, Tok::Not, 1);
        case '^': return make(t, Tok::Xor, 1);
        case '<': return make(t, Tok::Lt, 1);
        case '>': return make(t, Tok::Gt, 1);
        case '+': return make(t, Tok::Plus, 1);
        case '-': return make(t, Tok::Minus, 1);
        case '*': return make(t, Tok::Star, 1);
        case '/': return make(t, Tok::Slash, 1);
        case '%': return make(t, Tok::Percent, 1);
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", t.pos);
        }
    }

private:
    void skip_ws() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    }

    Token make(Token t, Tok kind, int len) {
        t.kind = kind;
        t.text = std::string(src_.substr(i_, static_cast<std::size_t>(len)));
        i_ += static_cast<std::size_t>(len);
        return t;
    }

    Token ident(Token t) {
        std::size_t start = i_;
        ++i_;
        while (i_ < src_.size()) {
            const char c = src_[i_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') ++i_;
            else break;
        }
        t.kind = Tok::Ident;
        t.text = std::string(src_.substr(start, i_ - start));
        return t;
    }

    Token number(Token t) {
        std::size_t start = i_;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
        if (i_ < src_.size() && src_[i_] == '.') {
            ++i_;
            if (i_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[i_])))
                throw ParseError("malformed number literal", static_cast<int>(i_));
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
        }
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            std::size_t mark = i_;
            ++i_;
            if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) ++i_;
            if (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
            } else {
                i_ = mark; // 'e' belongs to a following identifier, not the literal
            }
        }
        t.kind = Tok::Number;
        t.text = std::string(src_.substr(start, i_ - start));
        t.number = std::strtod(t.text.c_str(), nullptr);
        if (!std::isfinite(t.number))
            throw ParseError("number literal out of range", t.pos);
        return t;
    }

    std::string_view src_;
    std::size_t i_ = 0;
};

class Parser {
public:
    Parser(std::string_view src, const VarSignature& sig) : lex_(src), sig_(sig) {
        advance();
    }

    ExprPtr parse_assertion() {
        ExprPtr e = parse_implies();
        if (cur_.kind != Tok::End)
            throw ParseError("unexpected trailing input", cur_.pos);
        if (e->type() != Type::Boolean)
            throw TypeError("assertion must be boolean-typed", 0);
        return e;
    }

private:
    void advance() { cur_ = lex_.next(); }

    bool accept(Tok k) {
        if (cur_.kind != k) return false;
        advance();
        return true;
    }

    void expect(Tok k, const char* what) {
        if (cur_.kind != k) throw ParseError(std::string("expected ") + what, cur_.pos);
        advance();
    }

    ExprPtr require_bool(ExprPtr e, int op_pos) {
        if (e->type() != Type::Boolean)
            throw TypeError("boolean operand expected", op_pos);
        return e;
    }

    ExprPtr require_num(ExprPtr e, int op_pos) {
        if (e->type() != Type::Number)
            throw TypeError("numeric operand expected", op_pos);
        return e;
    }

    ExprPtr parse_implies() {
        ExprPtr l = parse_equiv();
        if (cur_.kind == Tok::Implies) {
            int pos = cur_.pos;
            advance();
            ExprPtr r = parse_implies(); // right-associative
            return Expr::bool_bin(BoolBinOp::Implies, require_bool(std::move(l), pos),
                                  require_bool(std::move(r), pos));
        }
        return l;
    }

    ExprPtr parse_equiv() {
        ExprPtr l = parse_or();
        while (cur_.kind == Tok::Equiv) {
            int pos = cur_.pos;
            advance();
            ExprPtr r = parse_or();
            l = Expr::bool_bin(BoolBinOp::Equiv, require_bool(std::move(l), pos),
                               require_bool(std::move(r), pos));
        }
        return l;
    }

    ExprPtr parse_or() {
        ExprPtr l = parse_xor();
        while (cur_.kind == Tok::Or) {
            int pos = cur_.pos;
            advance();
            ExprPtr r = parse_xor();
            l = Expr::bool_bin(BoolBinOp::Or, require_bool(std::move(l), pos),
                               require_bool(std::move(r), pos));
        }
        return l;
    }

    ExprPtr parse_xor() {
        ExprPtr l = parse_and();
        while (cur_.kind == Tok::Xor) {
            int pos = cur_.pos;
            advance();
            ExprPtr r = parse_and();
            l = Expr::bool_bin(BoolBinOp::Xor, require_bool(std::move(l), pos),
                               require_bool(std::move(r), pos));
        }
        return l;
    }

    ExprPtr parse_and() {
        ExprPtr l = parse_not();
        while (cur_.kind == Tok::And) {
            int pos = cur_.pos;
            advance();
            ExprPtr r = parse_not();
            l = Expr::bool_bin(BoolBinOp::And, require_bool(std::move(l), pos),
                               require_bool(std::move(r), pos));
        }
        return l;
    }

    ExprPtr parse_not() {
        if (cur_.kind == Tok::Not) {
            int pos = cur_.pos;
            advance();
            return Expr::negation(require_bool(parse_not(), pos));
        }
        return parse_comparison();
    }

    ExprPtr parse_comparison() {
        ExprPtr l = parse_additive();
        CmpOp op;
        switch (cur_.kind) {
        case Tok::Eq: op = CmpOp::Eq; break;
        case Tok::Ne: op = CmpOp::Ne; break;
        case Tok::Lt: op = CmpOp::Lt; break;
        case Tok::Le: op = CmpOp::Le; break;
        case Tok::Gt: op = CmpOp::Gt; break;
        case Tok::Ge: op = CmpOp::Ge; break;
        default: return l;
        }
        int pos = cur_.pos;
        advance();
        ExprPtr r = parse_additive();
        return Expr::cmp(op, require_num(std::move(l), pos), require_num(std::move(r), pos));
    }

    ExprPtr parse_additive() {
        ExprPtr l = parse_multiplicative();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            NumBinOp op = cur_.kind == Tok::Plus ? NumBinOp::Add : NumBinOp::Sub;
            int pos = cur_.pos;
            advance();
            ExprPtr r = parse_multiplicative();
            l = Expr::num_bin(op, require_num(std::move(l), pos), require_num(std::move(r), pos));
        }
        return l;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr l = parse_unary();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash || cur_.kind == Tok::Percent) {
            NumBinOp op = cur_.kind == Tok::Star    ? NumBinOp::Mul
                          : cur_.kind == Tok::Slash ? NumBinOp::Div
                                                    : NumBinOp::Mod;
            int pos = cur_.pos;
            advance();
            ExprPtr r = parse_unary();
            l = Expr::num_bin(op, require_num(std::move(l), pos), require_num(std::move(r), pos));
        }
        return l;
    }

    ExprPtr parse_unary() {
        if (cur_.kind == Tok::Minus) {
            int pos = cur_.pos;
            advance();
            ExprPtr operand = require_num(parse_unary(), pos);
            // A negated literal is a constant in its own right; anything else
            // desugars to (0 - operand).
            if (operand->kind() == ExprKind::Const)
                return Expr::constant(-operand->const_value());
            return Expr::num_bin(NumBinOp::Sub, Expr::constant(0.0), std::move(operand));
        }
        return parse_atom();
    }

    ExprPtr parse_atom() {
        if (cur_.kind == Tok::Number) {
            double v = cur_.number;
            advance();
            return Expr::constant(v);
        }
        if (cur_.kind == Tok::Ident) {
            auto idx = sig_.index_of(cur_.text);
            if (!idx)
                throw ParseError("unknown identifier '" + cur_.text + "'", cur_.pos);
            ExprPtr v = Expr::var(sig_, *idx);
            advance();
            return v;
        }
        if (cur_.kind == Tok::LParen) {
            if (++paren_depth_ > 256)
                throw ParseError("expression too deeply nested", cur_.pos);
            advance();
            ExprPtr e = parse_implies();
            expect(Tok::RParen, "')'");
            --paren_depth_;
            return e;
        }
        throw ParseError("expected identifier, number, or '('", cur_.pos);
    }

    Lexer lex_;
    const VarSignature& sig_;
    Token cur_;
    int paren_depth_ = 0;
};

} // namespace

ExprPtr parse(std::string_view text, const VarSignature& sig) {
    return Parser(text, sig).parse_assertion();
}

} // namespace aoi
