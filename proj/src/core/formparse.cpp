#include "core/formparse.hpp"

#include <cctype>
#include <sstream>

namespace betaforms {

FormParseError::FormParseError(const std::string& msg, size_t pos, const std::string& text)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << msg << " at column " << pos + 1 << "\n  " << text << "\n  " << std::string(pos, ' ') << "^";
          return os.str();
      }()),
      pos_(pos) {}

namespace {

enum class Tok { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    size_t pos;
};

struct Lexer {
    const std::string& s;
    size_t i = 0;

    Token next() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) return {Tok::End, "", s.size()};
        size_t start = i;
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            return {Tok::Num, s.substr(start, i - start), start};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\''))
                ++i;
            return {Tok::Ident, s.substr(start, i - start), start};
        }
        ++i;
        switch (c) {
            case '+': return {Tok::Plus, "+", start};
            case '-': return {Tok::Minus, "-", start};
            case '*': return {Tok::Star, "*", start};
            case '/': return {Tok::Slash, "/", start};
            case '^': return {Tok::Caret, "^", start};
            case '(': return {Tok::LParen, "(", start};
            case ')': return {Tok::RParen, ")", start};
            default: throw FormParseError(std::string("unexpected character '") + c + "'", start, s);
        }
    }
};

// Evaluated node: a form of some pure degree. Scalars are 0-forms. An integer
// literal additionally remembers its value so '^' can mean power.
struct Value {
    DiffForm f;
    bool is_int_literal = false;
    long literal = 0;
};

struct Parser {
    const std::string& text;
    const Chart& chart;
    Lexer lex;
    Token cur;

    Parser(const std::string& t, const Chart& c) : text(t), chart(c), lex{t} { cur = lex.next(); }

    void advance() { cur = lex.next(); }
    [[noreturn]] void fail(const std::string& msg, size_t pos) const {
        throw FormParseError(msg, pos, text);
    }

    Value parse() {
        Value v = expr();
        if (cur.kind != Tok::End) fail("trailing input", cur.pos);
        return v;
    }

    Value expr() {
        size_t p0 = cur.pos;
        Value acc = term();
        while (cur.kind == Tok::Plus || cur.kind == Tok::Minus) {
            bool minus = cur.kind == Tok::Minus;
            advance();
            Value rhs = term();
            acc = add(acc, minus ? negate(rhs) : rhs, p0);
        }
        return acc;
    }

    Value term() {
        Value acc = unary();
        while (cur.kind == Tok::Star || cur.kind == Tok::Slash) {
            bool div = cur.kind == Tok::Slash;
            size_t p = cur.pos;
            advance();
            Value rhs = unary();
            acc = div ? divide(acc, rhs, p) : product(acc, rhs, p);
        }
        return acc;
    }

    Value unary() {
        if (cur.kind == Tok::Minus) {
            advance();
            return negate(unary());
        }
        if (cur.kind == Tok::Plus) {
            advance();
            return unary();
        }
        return power();
    }

    Value power() {
        Value base = atom();
        while (cur.kind == Tok::Caret) {
            size_t p = cur.pos;
            advance();
            // integer exponent (possibly (-n)) => scalar power; otherwise wedge
            if (cur.kind == Tok::Num) {
                long e = std::stol(cur.text);
                advance();
                base = int_power(base, e, p);
                continue;
            }
            if (cur.kind == Tok::LParen) {
                // look ahead for (-n)
                size_t save_i = lex.i;
                Token save = cur;
                advance();
                if (cur.kind == Tok::Minus) {
                    advance();
                    if (cur.kind == Tok::Num) {
                        long e = std::stol(cur.text);
                        advance();
                        if (cur.kind == Tok::RParen) {
                            advance();
                            base = int_power(base, -e, p);
                            continue;
                        }
                    }
                }
                lex.i = save_i;
                cur = save;
            }
            base = wedge_val(base, atom(), p);
        }
        return base;
    }

    Value atom() {
        if (cur.kind == Tok::Num) {
            Value v;
            v.f = form_function(chart, MeroFunction::constant(chart.ctx, Rational::parse(cur.text)));
            v.f.coords = chart.coords;
            v.is_int_literal = true;
            v.literal = std::stol(cur.text);
            advance();
            return v;
        }
        if (cur.kind == Tok::Ident) {
            std::string name = cur.text;
            size_t pos = cur.pos;
            advance();
            int vi = chart.ctx->index_of(name);
            if (vi >= 0) {
                Value v;
                v.f = form_function(chart, MeroFunction(Polynomial::variable(chart.ctx, vi)));
                v.f.coords = chart.coords;
                return v;
            }
            if (name.size() > 1 && name[0] == 'd') {
                int di = chart.ctx->index_of(name.substr(1));
                if (di >= 0) {
                    Value v;
                    v.f = form_dvar(chart, di);
                    v.f.coords = chart.coords;
                    return v;
                }
            }
            fail("unknown variable '" + name + "'", pos);
        }
        if (cur.kind == Tok::LParen) {
            advance();
            Value v = expr();
            if (cur.kind != Tok::RParen) fail("expected ')'", cur.pos);
            advance();
            v.is_int_literal = false;
            return v;
        }
        fail("expected a number, variable, differential or '('", cur.pos);
    }

    Value negate(Value v) {
        v.f = form_neg(v.f);
        if (v.is_int_literal) v.literal = -v.literal;
        return v;
    }

    Value add(const Value& a, const Value& b, size_t pos) {
        if (a.f.is_zero()) return b;
        if (b.f.is_zero()) return a;
        if (a.f.q != b.f.q) fail("cannot add forms of different degree", pos);
        Value v;
        v.f = form_add(a.f, b.f);
        return v;
    }

    Value product(const Value& a, const Value& b, size_t pos) {
        if (a.f.q + b.f.q > chart.dim()) fail("wedge degree exceeds chart dimension", pos);
        Value v;
        v.f = wedge(chart, a.f, b.f);
        return v;
    }

    Value wedge_val(const Value& a, const Value& b, size_t pos) { return product(a, b, pos); }

    Value divide(const Value& a, const Value& b, size_t pos) {
        if (b.f.q != 0) fail("can only divide by a scalar", pos);
        if (b.f.is_zero()) fail("division by zero", pos);
        const MeroFunction& m = b.f.comps.begin()->second;
        if (m.num().is_constant() && !m.has_denominator()) {
            Value v;
            v.f = form_scale(a.f, m.num().constant_value().inv());
            return v;
        }
        if (m.num().is_monomial()) {
            auto [e, c] = *m.num().terms().begin();
            Expo shift = expo_sub(m.den(), e); // inverse of (e - den)
            Value v;
            v.f = form_zero(a.f.q, a.f.coords);
            for (const auto& [k, f] : a.f.comps) v.f.add(k, f.mul_laurent(shift).scaled(c.inv()));
            return v;
        }
        fail("divisor must be a rational or a monomial", pos);
    }

    Value int_power(const Value& base, long e, size_t pos) {
        if (base.f.q != 0) fail("cannot raise a form of positive degree to a power", pos);
        if (base.f.is_zero()) {
            if (e <= 0) fail("zero to a non-positive power", pos);
            Value v;
            v.f = form_zero(0, chart.coords);
            return v;
        }
        const MeroFunction& m = base.f.comps.begin()->second;
        Value v;
        if (e >= 0) {
            MeroFunction acc = MeroFunction::constant(chart.ctx, Rational(1));
            for (long i = 0; i < e; ++i) acc = acc * m;
            v.f = form_function(chart, acc);
        } else {
            if (!m.num().is_monomial()) fail("negative power of a non-monomial", pos);
            auto [ex, c] = *m.num().terms().begin();
            Expo lau = expo_sub(m.den(), ex);
            MeroFunction acc = MeroFunction::constant(chart.ctx, c.inv());
            acc = acc.mul_laurent(lau);
            MeroFunction out = MeroFunction::constant(chart.ctx, Rational(1));
            for (long i = 0; i < -e; ++i) out = out * acc;
            v.f = form_function(chart, out);
        }
        v.f.coords = chart.coords;
        return v;
    }
};

void check_poles(const DiffForm& f, const Chart& chart, const std::string& text) {
    for (const auto& [k, m] : f.comps) {
        (void)k;
        if (!chart.pole_ok(m.den()))
            throw FormParseError("negative exponent outside declared pole variables", 0, text);
    }
}

} // namespace

DiffForm parse_form(const std::string& text, const Chart& chart) {
    Parser p(text, chart);
    Value v = p.parse();
    DiffForm f = form_nf(chart, v.f);
    f.coords = chart.coords;
    check_poles(f, chart, text);
    return f;
}

std::string print_form(const DiffForm& f, const Chart& chart) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, m] : f.comps) {
        // stable term order: descending total degree, then lex on exponents
        std::vector<std::pair<Expo, Rational>> ts(m.num().terms().begin(), m.num().terms().end());
        std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
            int da = total_degree(a.first), db = total_degree(b.first);
            if (da != db) return da > db;
            return a.first > b.first;
        });
        for (const auto& [e, c] : ts) {
            if (!first) os << (c.sign() < 0 ? " - " : " + ");
            else if (c.sign() < 0) os << "-";
            first = false;
            Rational ac = c.abs();
            bool printed = false;
            if (!ac.is_one() || (total_degree(e) == 0 && total_degree(m.den()) == 0 && key.empty())) {
                os << ac.str();
                printed = true;
            }
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (printed) os << "*";
                printed = true;
                os << chart.ctx->names[i];
                if (e[i] != 1) os << "^" << e[i];
            }
            for (size_t i = 0; i < m.den().size(); ++i) {
                if (m.den()[i] == 0) continue;
                if (!printed) {
                    os << "1";
                    printed = true;
                }
                os << "/" << chart.ctx->names[i];
                if (m.den()[i] != 1) os << "^" << m.den()[i];
            }
            for (size_t j = 0; j < key.size(); ++j) {
                if (printed || j > 0) os << (j == 0 ? "*" : "^");
                printed = true;
                os << "d" << chart.ctx->names[key[j]];
            }
            if (!printed) os << "1";
        }
    }
    return os.str();
}

} // namespace betaforms
