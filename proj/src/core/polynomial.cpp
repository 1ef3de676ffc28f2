#include "core/polynomial.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace betaforms {

int total_degree(const Expo& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

bool expo_divides(const Expo& a, const Expo& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Expo expo_add(const Expo& a, const Expo& b) {
    Expo r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Expo expo_sub(const Expo& a, const Expo& b) {
    Expo r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Expo expo_lcm(const Expo& a, const Expo& b) {
    Expo r(a);
    for (size_t i = 0; i < r.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

bool expo_disjoint(const Expo& a, const Expo& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > 0 && b[i] > 0) return false;
    return true;
}

int VarCtx::index_of(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

CtxPtr make_ctx(std::vector<std::string> names) {
    auto c = std::make_shared<VarCtx>();
    c->names = std::move(names);
    return c;
}

bool same_ctx(const CtxPtr& a, const CtxPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->names == b->names;
}

bool MonomialOrder::greater(const Expo& a, const Expo& b) const {
    if (tag == OrderTag::Lex) {
        return a > b; // vector lex
    }
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    // degrevlex: larger = smaller power of the last variable where they differ
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

Polynomial Polynomial::constant(CtxPtr ctx, const Rational& c) {
    Polynomial p(std::move(ctx));
    if (!c.is_zero()) p.terms_[Expo(p.nvars(), 0)] = c;
    return p;
}

Polynomial Polynomial::monomial(CtxPtr ctx, const Expo& e, const Rational& c) {
    Polynomial p(std::move(ctx));
    if (static_cast<int>(e.size()) != p.nvars())
        throw std::invalid_argument("exponent vector length mismatch");
    if (!c.is_zero()) p.terms_[e] = c;
    return p;
}

Polynomial Polynomial::variable(CtxPtr ctx, int var, int power) {
    Polynomial p(std::move(ctx));
    Expo e(p.nvars(), 0);
    e.at(var) = power;
    p.terms_[e] = Rational(1);
    return p;
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
}

Rational Polynomial::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw std::logic_error("constant_value on non-constant");
    return terms_.begin()->second;
}

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

void Polynomial::add_term(const Expo& e, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial r(ctx_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (!same_ctx(ctx_, o.ctx_)) throw std::invalid_argument("context mismatch in +");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (!same_ctx(ctx_, o.ctx_)) throw std::invalid_argument("context mismatch in -");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (!same_ctx(a.ctx_, b.ctx_)) throw std::invalid_argument("context mismatch in *");
    Polynomial r(a.ctx_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_)
            r.add_term(expo_add(ea, eb), ca * cb);
    return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r(ctx_);
    if (c.is_zero()) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

Polynomial Polynomial::mul_term(const Expo& e, const Rational& c) const {
    Polynomial r(ctx_);
    if (c.is_zero()) return r;
    for (const auto& [te, tc] : terms_) r.terms_.emplace(expo_add(te, e), tc * c);
    return r;
}

Polynomial Polynomial::pow(int n) const {
    if (n < 0) throw std::invalid_argument("negative polynomial power");
    Polynomial acc = Polynomial::constant(ctx_, Rational(1));
    for (int i = 0; i < n; ++i) acc *= *this;
    return acc;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    return same_ctx(a.ctx_, b.ctx_) && a.terms_ == b.terms_;
}

Polynomial Polynomial::derivative(int var) const {
    Polynomial r(ctx_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Expo d(e);
        d[var] -= 1;
        r.add_term(d, c * Rational(e[var]));
    }
    return r;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images, const CtxPtr& new_ctx) const {
    if (static_cast<int>(images.size()) != nvars())
        throw std::invalid_argument("substitute: one image per variable required");
    Polynomial r = Polynomial::zero(new_ctx);
    for (const auto& [e, c] : terms_) {
        Polynomial t = Polynomial::constant(new_ctx, c);
        for (int i = 0; i < nvars(); ++i)
            if (e[i] > 0) t *= images[i].pow(e[i]);
        r += t;
    }
    return r;
}

Rational Polynomial::eval(const std::vector<Rational>& point) const {
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < nvars(); ++i)
            if (e[i] != 0) t *= point[i].pow(e[i]);
        acc += t;
    }
    return acc;
}

std::complex<double> Polynomial::eval(const std::vector<std::complex<double>>& point) const {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [e, c] : terms_) {
        std::complex<double> t(c.to_double(), 0.0);
        for (int i = 0; i < nvars(); ++i)
            for (int k = 0; k < e[i]; ++k) t *= point[i];
        acc += t;
    }
    return acc;
}

std::pair<Expo, Rational> Polynomial::leading(const MonomialOrder& ord) const {
    if (terms_.empty()) throw std::logic_error("leading term of zero");
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
        if (ord.greater(it->first, best->first)) best = it;
    return {best->first, best->second};
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print high-degree first for readability
    std::vector<const std::pair<const Expo, Rational>*> ts;
    for (const auto& t : terms_) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(), [](auto* a, auto* b) {
        int da = total_degree(a->first), db = total_degree(b->first);
        if (da != db) return da > db;
        return a->first > b->first;
    });
    for (auto* t : ts) {
        Rational c = t->second;
        if (!first) os << (c.sign() < 0 ? " - " : " + ");
        else if (c.sign() < 0) os << "-";
        first = false;
        Rational ac = c.abs();
        bool has_vars = total_degree(t->first) > 0;
        if (!ac.is_one() || !has_vars) os << ac.str();
        bool need_star = !ac.is_one() || !has_vars;
        for (int i = 0; i < nvars(); ++i) {
            if (t->first[i] == 0) continue;
            if (need_star) os << "*";
            need_star = true;
            os << ctx_->names[i];
            if (t->first[i] != 1) os << "^" << t->first[i];
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
    return os << p.str();
}

} // namespace betaforms
