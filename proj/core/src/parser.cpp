#include "varjet/parser.hpp"

#include <cctype>
#include <sstream>

namespace varjet {

namespace {

struct Token {
    enum Type { integer, ident, punct, end } type = end;
    long long value = 0;
    std::string text;
    char punct_char = 0;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        tok_ = Token{};
        tok_.pos = i_;
        if (i_ >= s_.size()) {
            tok_.type = Token::end;
            return;
        }
        const char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long long v = 0;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                if (__builtin_mul_overflow(v, 10LL, &v) ||
                    __builtin_add_overflow(v, static_cast<long long>(s_[i_] - '0'), &v))
                    throw ParseError("integer literal too large", tok_.pos);
                ++i_;
            }
            tok_.type = Token::integer;
            tok_.value = v;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                id.push_back(s_[i_++]);
            tok_.type = Token::ident;
            tok_.text = std::move(id);
            return;
        }
        static const std::string puncts = "+-*/^()[],;";
        if (puncts.find(c) != std::string::npos) {
            tok_.type = Token::punct;
            tok_.punct_char = c;
            ++i_;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", i_);
    }

    const std::string& s_;
    std::size_t i_ = 0;
    Token tok_;
};

class Parser {
public:
    Parser(const std::string& text, const BundleSpec& bundle)
        : lex_(text), bundle_(bundle) {}

    Expression parse() {
        Expression e = parse_expr();
        if (lex_.peek().type != Token::end)
            throw ParseError("unexpected trailing input", lex_.peek().pos);
        return e;
    }

private:
    bool at_punct(char c) const {
        return lex_.peek().type == Token::punct && lex_.peek().punct_char == c;
    }
    void expect_punct(char c) {
        if (!at_punct(c))
            throw ParseError(std::string("expected '") + c + "'", lex_.peek().pos);
        lex_.take();
    }

    Expression parse_expr() {
        bool negate = false;
        if (at_punct('+') || at_punct('-')) negate = lex_.take().punct_char == '-';
        Expression acc = parse_term();
        if (negate) acc = -acc;
        while (at_punct('+') || at_punct('-')) {
            const bool minus = lex_.take().punct_char == '-';
            Expression t = parse_term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    Expression parse_term() {
        Expression acc = parse_factor();
        while (at_punct('*') || at_punct('/')) {
            const Token op = lex_.take();
            Expression f = parse_factor();
            if (op.punct_char == '*') {
                acc *= f;
            } else {
                acc *= invert_divisor(f, op.pos);
            }
        }
        return acc;
    }

    // Division is admitted by monomials and by det-polynomial multiples; the
    // latter re-encode as negative sqrtdet powers.
    Expression invert_divisor(const Expression& d, std::size_t pos) {
        if (d.is_zero()) throw ParseError("division by zero", pos);
        if (d.term_count() == 1) return d.pow(-1);
        for (int f = 0; f < static_cast<int>(bundle_.fields().size()); ++f) {
            if (bundle_.field(f).kind != FieldKind::symmetric2) continue;
            const Expression det = det_polynomial(f, bundle_.dim());
            Expression cur = d;
            int k = 0;
            while (cur.term_count() > 1 && k <= 2 * kMaxJetOrder) {
                auto q = exact_divide(cur, det);
                if (!q) break;
                cur = *q;
                ++k;
            }
            if (k > 0 && cur.term_count() == 1)
                return cur.pow(-1) *
                       Expression::from_atom(bundle_.root_atom(f), -2 * k);
        }
        throw ParseError("division by a non-monomial polynomial", pos);
    }

    struct Exponent {
        long long num = 1;
        long long den = 1;
    };

    std::optional<Exponent> parse_exponent_opt() {
        if (!at_punct('^')) return std::nullopt;
        lex_.take();
        Exponent e;
        bool neg = false;
        if (at_punct('(')) {
            lex_.take();
            if (at_punct('+') || at_punct('-')) neg = lex_.take().punct_char == '-';
            e.num = expect_int("exponent numerator");
            if (at_punct('/')) {
                lex_.take();
                e.den = expect_int("exponent denominator");
                if (e.den <= 0) throw ParseError("exponent denominator must be positive",
                                                 lex_.peek().pos);
            }
            expect_punct(')');
        } else {
            if (at_punct('+') || at_punct('-')) neg = lex_.take().punct_char == '-';
            e.num = expect_int("exponent");
        }
        if (neg) e.num = -e.num;
        return e;
    }

    long long expect_int(const char* what) {
        if (lex_.peek().type != Token::integer)
            throw ParseError(std::string("expected ") + what, lex_.peek().pos);
        return lex_.take().value;
    }

    int expect_base_index(const char* what) {
        const Token t = lex_.peek();
        const long long v = expect_int(what);
        if (v < 1 || v > bundle_.dim())
            throw ParseError(std::string(what) + " out of range 1.." +
                                 std::to_string(bundle_.dim()),
                             t.pos);
        return static_cast<int>(v);
    }

    // det/sqrtdet bases keep their root atom visible so signed and
    // half-integral exponents can act on it before normalization expands it.
    struct BaseResult {
        Expression value;
        bool is_root = false;
        Atom root{};
        int root_exp = 0;
    };

    Expression parse_factor() {
        const Token t = lex_.peek();
        BaseResult base = parse_base();
        auto exp = parse_exponent_opt();
        if (!exp) return base.value;

        if (base.is_root) {
            long long num = exp->num * base.root_exp;
            if (exp->den == 2) {
                if (num % 2 != 0)
                    throw ParseError("fractional power not representable", t.pos);
                num /= 2;
            } else if (exp->den != 1) {
                throw ParseError("unsupported exponent denominator", t.pos);
            }
            if (num < -128 || num > 128)
                throw ParseError("exponent out of range", t.pos);
            if (num == 0) return Expression::constant(Rational(1));
            return Expression::from_atom(base.root, static_cast<int>(num));
        }
        if (exp->den != 1)
            throw ParseError("fractional exponents only apply to det/sqrtdet", t.pos);
        if (exp->num < 0)
            throw ParseError("negative exponents only apply to det/sqrtdet; use '/'",
                             t.pos);
        if (exp->num > 64) throw ParseError("exponent out of range", t.pos);
        return base.value.pow(static_cast<int>(exp->num));
    }

    BaseResult parse_base() {
        const Token t = lex_.peek();
        if (t.type == Token::integer) {
            lex_.take();
            return {Expression::constant(Rational(t.value))};
        }
        if (at_punct('(')) {
            lex_.take();
            Expression e = parse_expr();
            expect_punct(')');
            return {e};
        }
        if (t.type != Token::ident)
            throw ParseError("expected a number, name or '('", t.pos);
        lex_.take();

        if (t.text == "x") {
            expect_punct('[');
            const int i = expect_base_index("base index");
            expect_punct(']');
            return {Expression::from_atom(Atom::coord(i))};
        }
        if (t.text == "det" || t.text == "sqrtdet" || t.text == "inv") {
            expect_punct('(');
            const Token ft = lex_.peek();
            if (ft.type != Token::ident)
                throw ParseError("expected a field name", ft.pos);
            lex_.take();
            auto fi = bundle_.field_index(ft.text);
            if (!fi) throw ParseError("unknown field '" + ft.text + "'", ft.pos);
            if (bundle_.field(*fi).kind != FieldKind::symmetric2)
                throw ParseError(t.text + " requires a symmetric2 field", ft.pos);
            expect_punct(')');
            if (t.text == "det") {
                const Atom r = bundle_.root_atom(*fi);
                return {Expression::from_atom(r, 2), true, r, 2};
            }
            if (t.text == "sqrtdet") {
                const Atom r = bundle_.root_atom(*fi);
                return {Expression::from_atom(r), true, r, 1};
            }
            expect_punct('[');
            const int a = expect_base_index("component index");
            expect_punct(',');
            const int b = expect_base_index("component index");
            expect_punct(']');
            return {adjugate_entry(*fi, bundle_.dim(), a, b) *
                    Expression::from_atom(bundle_.root_atom(*fi), -2)};
        }

        auto fi = bundle_.field_index(t.text);
        if (!fi) throw ParseError("unknown field '" + t.text + "'", t.pos);
        expect_punct('[');
        CompIdx comps;
        std::vector<int> raw_comps;
        while (lex_.peek().type == Token::integer) {
            raw_comps.push_back(expect_base_index("component index"));
            if (at_punct(','))
                lex_.take();
            else
                break;
        }
        MultiIdx derivs;
        if (at_punct(';')) {
            lex_.take();
            while (true) {
                const int i = expect_base_index("derivative index");
                if (derivs.size() >= static_cast<std::size_t>(bundle_.order_bound()))
                    throw ParseError("multi-index longer than the order bound",
                                     lex_.peek().pos);
                derivs.insert_sorted(i);
                if (at_punct(','))
                    lex_.take();
                else
                    break;
            }
        }
        expect_punct(']');

        const FieldKind kind = bundle_.field(*fi).kind;
        const std::size_t want = kind == FieldKind::scalar     ? 0
                                 : kind == FieldKind::covector ? 1
                                                               : 2;
        if (raw_comps.size() != want)
            throw ParseError("field '" + t.text + "' takes " + std::to_string(want) +
                                 " component index(es)",
                             t.pos);
        if (want == 1) comps.push_back(raw_comps[0]);
        if (want == 2) {
            comps.push_back(std::min(raw_comps[0], raw_comps[1]));
            comps.push_back(std::max(raw_comps[0], raw_comps[1]));
        }
        return {Expression::from_atom(Atom::jet(*fi, comps, derivs))};
    }

    Lexer lex_;
    const BundleSpec& bundle_;
};

std::string atom_str(const Atom& a, const BundleSpec& b) {
    std::ostringstream os;
    switch (a.kind) {
        case AtomKind::coord:
            os << "x[" << a.field << "]";
            break;
        case AtomKind::jet: {
            os << b.field(a.field).name << "[";
            for (std::size_t k = 0; k < a.comps.size(); ++k)
                os << (k ? "," : "") << a.comps[k];
            if (!a.derivs.empty()) {
                os << ";";
                for (std::size_t k = 0; k < a.derivs.size(); ++k)
                    os << (k ? "," : "") << a.derivs[k];
            }
            os << "]";
            break;
        }
        case AtomKind::root:
            os << "sqrtdet(" << b.field(a.field).name << ")";
            break;
        case AtomKind::aux:
        case AtomKind::param:
            os << a.debug_str();
            break;
    }
    return os.str();
}

} // namespace

Expression parse_expression(const std::string& text, const BundleSpec& bundle) {
    return Parser(text, bundle).parse();
}

std::string to_string(const Expression& e, const BundleSpec& bundle) {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : e.terms()) {
        const bool neg = c < Rational(0);
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        const Rational mag = neg ? -c : c;

        std::string numer, denom;
        for (const auto& [a, exp] : m.factors()) {
            if (a.kind == AtomKind::root || exp > 0) {
                if (!numer.empty()) numer += "*";
                numer += atom_str(a, bundle);
                if (exp != 1) numer += "^" + std::to_string(exp);
            } else {
                denom += "/" + atom_str(a, bundle);
                if (exp != -1) denom += "^" + std::to_string(-exp);
            }
        }
        if (numer.empty()) {
            os << mag.str();
        } else if (mag.is_one()) {
            os << numer;
        } else {
            os << mag.str() << "*" << numer;
        }
        os << denom;
    }
    return os.str();
}

} // namespace varjet
