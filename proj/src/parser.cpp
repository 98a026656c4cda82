#include "tl/parser.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include "tl/error.hpp"

namespace tl {

ParserNames ParserNames::builtins() {
    ParserNames n;
    n.functions = {"relu", "sign", "identity", "recip_sqrt_plus1", "recip_sqrt"};
    n.aggregations = {"sum", "max", "min", "mean", "stdv"};
    return n;
}

namespace {

enum class Tok {
    Number, Ident, At, Pipe, Colon, Comma, Eq, Neq, LBracket, RBracket,
    LParen, RParen, Star, Plus, Minus, Slash, End,
};

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }
    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    const std::string& src_;
    std::size_t pos_ = 0;
    Token cur_;

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::size_t start = pos_;
        if (pos_ >= src_.size()) {
            cur_ = {Tok::End, "", {start, start}};
            return;
        }
        char c = src_[pos_];
        auto single = [&](Tok k) {
            ++pos_;
            cur_ = {k, std::string(1, c), {start, pos_}};
        };
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '.') {
                ++pos_;
                if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    throw Error("lexical error: malformed decimal", SourceSpan{start, pos_});
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
            cur_ = {Tok::Number, src_.substr(start, pos_ - start), {start, pos_}};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            cur_ = {Tok::Ident, src_.substr(start, pos_ - start), {start, pos_}};
            return;
        }
        switch (c) {
        case '@': single(Tok::At); return;
        case '|': single(Tok::Pipe); return;
        case ':': single(Tok::Colon); return;
        case ',': single(Tok::Comma); return;
        case '=': single(Tok::Eq); return;
        case '[': single(Tok::LBracket); return;
        case ']': single(Tok::RBracket); return;
        case '(': single(Tok::LParen); return;
        case ')': single(Tok::RParen); return;
        case '*': single(Tok::Star); return;
        case '+': single(Tok::Plus); return;
        case '-': single(Tok::Minus); return;
        case '/': single(Tok::Slash); return;
        case '!':
            if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                pos_ += 2;
                cur_ = {Tok::Neq, "!=", {start, pos_}};
                return;
            }
            throw Error("lexical error: stray '!'", SourceSpan{start, start + 1});
        default:
            throw Error(std::string("lexical error: unexpected character '") + c + "'",
                        SourceSpan{start, start + 1});
        }
    }
};

class Parser {
public:
    Parser(const std::string& src, const ParserNames& names) : lex_(src), names_(names) {}

    ExprPtr run() {
        ExprPtr e = parse_expr();
        expect(Tok::End, "trailing input after expression");
        return e;
    }

private:
    Lexer lex_;
    const ParserNames& names_;

    [[noreturn]] void fail(const std::string& msg, SourceSpan span) { throw Error(msg, span); }

    Token expect(Tok k, const std::string& what) {
        if (lex_.peek().kind != k) fail("expected " + what, lex_.peek().span);
        return lex_.next();
    }

    int parse_var() {
        Token t = expect(Tok::Ident, "variable (xN)");
        if (t.text.size() < 2 || t.text[0] != 'x') fail("expected variable (xN)", t.span);
        for (std::size_t i = 1; i < t.text.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t.text[i])))
                fail("expected variable (xN)", t.span);
        int idx = std::stoi(t.text.substr(1));
        if (idx < 1) fail("variable index must be >= 1", t.span);
        return idx;
    }

    Rational parse_rational_tail(const Token& first, bool negative) {
        std::string text = first.text;
        if (lex_.peek().kind == Tok::Slash && text.find('.') == std::string::npos) {
            lex_.next();
            Token den = expect(Tok::Number, "denominator");
            if (den.text.find('.') != std::string::npos)
                fail("denominator must be an integer", den.span);
            text += "/" + den.text;
        }
        Rational r = Rational::parse(text);
        return negative ? -r : r;
    }

    ExprPtr parse_expr() {
        ExprPtr acc = parse_term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            bool minus = lex_.next().kind == Tok::Minus;
            ExprPtr t = parse_term();
            acc = minus ? sub(acc, t) : add(acc, t);
        }
        return acc;
    }

    // A leading rational literal acts as a scaling coefficient for the rest
    // of the term; elsewhere a rational literal stands for r * 1.
    ExprPtr parse_term() {
        bool lead_neg = false;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.next();
            if (lex_.peek().kind != Tok::Number)
                fail("expected number after unary '-'", lex_.peek().span);
            lead_neg = true;
        }
        if (lex_.peek().kind == Tok::Number) {
            Token num = lex_.next();
            bool is_one = !lead_neg && num.text == "1" && lex_.peek().kind != Tok::Slash;
            if (is_one) {
                // bare literal "1" is the One constant
                return parse_factors_after(one());
            }
            Rational coeff = parse_rational_tail(num, lead_neg);
            if (lex_.peek().kind != Tok::Star) return scale(coeff, one());
            lex_.next();
            ExprPtr rest = parse_factor();
            rest = parse_factors_after(rest);
            return scale(coeff, rest);
        }
        ExprPtr f = parse_factor();
        return parse_factors_after(f);
    }

    ExprPtr parse_factors_after(ExprPtr acc) {
        while (lex_.peek().kind == Tok::Star) {
            lex_.next();
            acc = product(acc, parse_factor());
        }
        return acc;
    }

    ExprPtr parse_factor() {
        const Token& t = lex_.peek();
        switch (t.kind) {
        case Tok::Minus: {
            lex_.next();
            if (lex_.peek().kind != Tok::Number)
                fail("expected number after unary '-'", lex_.peek().span);
            Token num = lex_.next();
            return scale(parse_rational_tail(num, true), one());
        }
        case Tok::Number: {
            Token num = lex_.next();
            if (num.text == "1" && lex_.peek().kind != Tok::Slash) return one();
            return scale(parse_rational_tail(num, false), one());
        }
        case Tok::LParen: {
            lex_.next();
            ExprPtr e = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        case Tok::LBracket: {
            Token open = lex_.next();
            int i = parse_var();
            bool neq;
            if (lex_.peek().kind == Tok::Eq)
                neq = false;
            else if (lex_.peek().kind == Tok::Neq)
                neq = true;
            else
                fail("expected '=' or '!=' in equality predicate", lex_.peek().span);
            lex_.next();
            int j = parse_var();
            if (lex_.peek().kind != Tok::RBracket)
                fail("unterminated '[' equality predicate",
                     SourceSpan{open.span.start, lex_.peek().span.end});
            lex_.next();
            return eq_pred(i, j, neq);
        }
        case Tok::At: {
            lex_.next();
            Token name = expect(Tok::Ident, "function name after '@'");
            if (!names_.functions.count(name.text))
                fail("unknown function '" + name.text + "'", name.span);
            expect(Tok::LParen, "'(' after function name");
            std::vector<ExprPtr> args;
            args.push_back(parse_expr());
            while (lex_.peek().kind == Tok::Comma) {
                lex_.next();
                args.push_back(parse_expr());
            }
            expect(Tok::RParen, "')' closing function application");
            return apply(name.text, std::move(args));
        }
        case Tok::Ident: {
            if (t.text == "sum") {
                lex_.next();
                int v = parse_var();
                expect(Tok::Colon, "':' after sum variable");
                return sum_agg(v, parse_expr());
            }
            if (t.text == "agg") {
                lex_.next();
                expect(Tok::At, "'@' before aggregation name");
                Token name = expect(Tok::Ident, "aggregation name");
                if (!names_.aggregations.count(name.text))
                    fail("unknown aggregation '" + name.text + "'", name.span);
                int bound = parse_var();
                if (lex_.peek().kind == Tok::Pipe) {
                    lex_.next();
                    Token ekw = expect(Tok::Ident, "'E' guard");
                    if (ekw.text != "E") fail("guard must be an E(...) predicate", ekw.span);
                    expect(Tok::LParen, "'('");
                    int gi = parse_var();
                    expect(Tok::Comma, "','");
                    int gj = parse_var();
                    expect(Tok::RParen, "')'");
                    if (gj != bound)
                        fail("guard's second variable must be the aggregation variable", ekw.span);
                    expect(Tok::Colon, "':' after guard");
                    ExprPtr body = parse_expr();
                    auto fv = free_vars(body);
                    fv.erase(bound);
                    if (!fv.empty())
                        fail("conditional aggregation body may only use its bound variable",
                             ekw.span);
                    return guarded_agg(name.text, gi, bound, body);
                }
                expect(Tok::Colon, "':' after aggregation variable");
                return uncond_agg(name.text, bound, parse_expr());
            }
            if (t.text == "E") {
                lex_.next();
                expect(Tok::LParen, "'(' after E");
                int i = parse_var();
                expect(Tok::Comma, "','");
                int j = parse_var();
                expect(Tok::RParen, "')'");
                return edge_pred(i, j);
            }
            if (t.text.size() >= 2 && t.text[0] == 'P') {
                bool digits = true;
                for (std::size_t i = 1; i < t.text.size(); ++i)
                    if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) digits = false;
                if (digits) {
                    Token pt = lex_.next();
                    int s = std::stoi(pt.text.substr(1));
                    if (s < 1) fail("label position must be >= 1", pt.span);
                    expect(Tok::LParen, "'(' after label predicate");
                    int v = parse_var();
                    expect(Tok::RParen, "')'");
                    return label_pred(s, v);
                }
            }
            fail("unexpected identifier '" + t.text + "'", t.span);
        }
        default:
            fail("unexpected token", t.span);
        }
        throw Error("unreachable");
    }
};

// ---- renderer ----


std::string coeff_text(const Rational& a) {
    if (a == Rational(1)) return "1/1"; // avoid clashing with the One literal
    return a.str();
}

// tail: the rendered text extends to the end of the enclosing region, so a
// binder body can be left open.
std::string render_rec(const ExprPtr& e, int min_level, bool tail);

// level 0 = expression (additions), 1 = term (factors), 2 = atom
std::string parenthesize(const std::string& s) { return "(" + s + ")"; }

std::string render_binder(const ExprPtr& e, bool tail, int min_level) {
    std::string body = render_rec(e->body, 0, true);
    std::string head;
    if (e->kind == ExprKind::SumAgg) {
        head = "sum x" + std::to_string(e->var) + " : ";
    } else if (e->kind == ExprKind::UncondAgg) {
        head = "agg @" + e->name + " x" + std::to_string(e->var) + " : ";
    } else {
        head = "agg @" + e->name + " x" + std::to_string(e->var) + " | E(x" +
               std::to_string(e->guard_free) + ",x" + std::to_string(e->var) + ") : ";
    }
    (void)min_level;
    std::string s = head + body;
    if (!tail) return parenthesize(s); // a binder body extends maximally right
    return s;
}

std::string render_rec(const ExprPtr& e, int min_level, bool tail) {
    switch (e->kind) {
    case ExprKind::EqPred:
        return "[x" + std::to_string(e->i) + (e->neq ? "!=" : "=") + "x" + std::to_string(e->j) +
               "]";
    case ExprKind::EdgePred:
        return "E(x" + std::to_string(e->i) + ",x" + std::to_string(e->j) + ")";
    case ExprKind::LabelPred:
        return "P" + std::to_string(e->s) + "(x" + std::to_string(e->i) + ")";
    case ExprKind::One:
        return "1";
    case ExprKind::Apply: {
        std::string s = "@" + e->name + "(";
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            if (i) s += ", ";
            s += render_rec(e->args[i], 0, true);
        }
        return s + ")";
    }
    case ExprKind::Add: {
        // left-assoc spine; subtraction sugar for Scale(-1, b) right operands
        std::string l = render_rec(e->lhs, 0, false);
        const ExprPtr& r = e->rhs;
        std::string s;
        if (r->kind == ExprKind::Scale && r->a == Rational(-1)) {
            s = l + " - " + render_rec(r->body, 1, tail);
        } else {
            s = l + " + " + render_rec(r, 1, tail);
            // right operand rendered at term level so that a nested Add gets parens
        }
        if (min_level > 0) return parenthesize(s);
        return s;
    }
    case ExprKind::Product: {
        // factors: left spine flattened; Scale/Add/nested-right-Product need parens
        std::string l = render_rec(e->lhs,
                                   e->lhs->kind == ExprKind::Product ? 1 : 2, false);
        std::string r = render_rec(e->rhs, 2, tail);
        std::string s = l + " * " + r;
        if (min_level > 1) return parenthesize(s);
        return s;
    }
    case ExprKind::Scale: {
        std::string body;
        if (e->body->kind == ExprKind::Product) {
            body = render_rec(e->body, 1, tail); // folds back into the coefficient
        } else {
            body = render_rec(e->body, 2, tail);
        }
        std::string s = coeff_text(e->a) + " * " + body;
        if (min_level > 1) return parenthesize(s);
        return s;
    }
    case ExprKind::SumAgg:
    case ExprKind::UncondAgg:
    case ExprKind::GuardedAgg:
        return render_binder(e, tail, min_level);
    }
    throw Error("render: unknown node");
}

} // namespace

ExprPtr parse(const std::string& text) { return parse(text, ParserNames::builtins()); }

ExprPtr parse(const std::string& text, const ParserNames& names) {
    Parser p(text, names);
    return p.run();
}

std::string render(const ExprPtr& e) { return render_rec(e, 0, true); }

} // namespace tl
