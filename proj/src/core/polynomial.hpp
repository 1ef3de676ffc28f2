#pragma once

#include "core/rational.hpp"

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace betaforms {

// Exponent vector; one non-negative entry per variable of the context.
using Expo = std::vector<int>;

int total_degree(const Expo& e);
bool expo_divides(const Expo& a, const Expo& b); // a | b, componentwise
Expo expo_add(const Expo& a, const Expo& b);
Expo expo_sub(const Expo& a, const Expo& b);
Expo expo_lcm(const Expo& a, const Expo& b);
bool expo_disjoint(const Expo& a, const Expo& b);

// Ordered variable list shared by all polynomials of a ring.
struct VarCtx {
    std::vector<std::string> names;
    int index_of(const std::string& name) const; // -1 if absent
};
using CtxPtr = std::shared_ptr<const VarCtx>;
CtxPtr make_ctx(std::vector<std::string> names);
bool same_ctx(const CtxPtr& a, const CtxPtr& b);

enum class OrderTag { Degrevlex, Lex };

struct MonomialOrder {
    OrderTag tag = OrderTag::Degrevlex;
    // strict "a before b" in descending reading order (a > b)
    bool greater(const Expo& a, const Expo& b) const;
    std::string name() const { return tag == OrderTag::Degrevlex ? "degrevlex" : "lex"; }
};

// Multivariate polynomial over Q with exact coefficients. Terms are kept in a
// canonical map keyed by exponent vector; no zero coefficients are stored.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(CtxPtr ctx) : ctx_(std::move(ctx)) {}

    static Polynomial zero(CtxPtr ctx) { return Polynomial(std::move(ctx)); }
    static Polynomial constant(CtxPtr ctx, const Rational& c);
    static Polynomial monomial(CtxPtr ctx, const Expo& e, const Rational& c = Rational(1));
    static Polynomial variable(CtxPtr ctx, int var, int power = 1);

    const CtxPtr& ctx() const { return ctx_; }
    int nvars() const { return ctx_ ? static_cast<int>(ctx_->names.size()) : 0; }
    const std::map<Expo, Rational>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    Rational constant_value() const; // requires is_constant
    int degree() const;              // total degree, -1 for zero

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    Polynomial scaled(const Rational& c) const;
    Polynomial mul_term(const Expo& e, const Rational& c) const;
    Polynomial pow(int n) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b);
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    void add_term(const Expo& e, const Rational& c); // merges, drops zeros

    Polynomial derivative(int var) const;
    // Substitute variable i by images[i]; all images share new_ctx.
    Polynomial substitute(const std::vector<Polynomial>& images, const CtxPtr& new_ctx) const;
    Rational eval(const std::vector<Rational>& point) const;
    std::complex<double> eval(const std::vector<std::complex<double>>& point) const;

    // Leading term under an order (largest). Requires non-zero.
    std::pair<Expo, Rational> leading(const MonomialOrder& ord) const;

    std::string str() const; // debug-ish rendering, e.g. "3*x^2*y - 1/2"

private:
    CtxPtr ctx_;
    std::map<Expo, Rational> terms_;
};

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

} // namespace betaforms
