#include "core/mero.hpp"

#include <sstream>
#include <stdexcept>

namespace betaforms {

void MeroFunction::normalize() {
    if (num_.is_zero()) {
        den_.assign(den_.size(), 0);
        return;
    }
    // cancel min(common power in numerator, denominator) per variable
    Expo minexp;
    bool first = true;
    for (const auto& [e, c] : num_.terms()) {
        (void)c;
        if (first) {
            minexp = e;
            first = false;
        } else {
            for (size_t i = 0; i < minexp.size(); ++i) minexp[i] = std::min(minexp[i], e[i]);
        }
    }
    Expo cancel(den_.size(), 0);
    bool any = false;
    for (size_t i = 0; i < den_.size(); ++i) {
        cancel[i] = std::min(minexp[i], den_[i]);
        if (cancel[i] > 0) any = true;
    }
    if (!any) return;
    Polynomial reduced(num_.ctx());
    for (const auto& [e, c] : num_.terms()) reduced.add_term(expo_sub(e, cancel), c);
    num_ = std::move(reduced);
    den_ = expo_sub(den_, cancel);
}

MeroFunction operator+(const MeroFunction& a, const MeroFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    Expo l = expo_lcm(a.den_, b.den_);
    Polynomial num = a.num_.mul_term(expo_sub(l, a.den_), Rational(1))
                   + b.num_.mul_term(expo_sub(l, b.den_), Rational(1));
    return MeroFunction(std::move(num), std::move(l));
}

MeroFunction operator*(const MeroFunction& a, const MeroFunction& b) {
    return MeroFunction(a.num_ * b.num_, expo_add(a.den_, b.den_));
}

MeroFunction MeroFunction::mul_laurent(const Expo& e) const {
    if (is_zero()) return *this;
    Expo up(e.size(), 0), down(e.size(), 0);
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] >= 0) up[i] = e[i];
        else down[i] = -e[i];
    }
    return MeroFunction(num_.mul_term(up, Rational(1)), expo_add(den_, down));
}

MeroFunction MeroFunction::derivative(int var) const {
    if (is_zero()) return *this;
    int cv = den_[var];
    if (cv == 0) return MeroFunction(num_.derivative(var), den_);
    // (p / x^c)' = (p' x - c p) / x^(c+1)
    Expo ev(den_.size(), 0);
    ev[var] = 1;
    Polynomial n = num_.derivative(var).mul_term(ev, Rational(1)) - num_.scaled(Rational(cv));
    return MeroFunction(std::move(n), expo_add(den_, ev));
}

Polynomial MeroFunction::cleared(const Expo& common_den) const {
    if (!expo_divides(den_, common_den))
        throw std::invalid_argument("cleared: denominator does not divide common denominator");
    return num_.mul_term(expo_sub(common_den, den_), Rational(1));
}

std::complex<double> MeroFunction::eval(const std::vector<std::complex<double>>& point) const {
    std::complex<double> n = num_.eval(point);
    std::complex<double> d(1.0, 0.0);
    for (size_t i = 0; i < den_.size(); ++i)
        for (int k = 0; k < den_[i]; ++k) d *= point[i];
    return n / d;
}

std::string MeroFunction::str() const {
    std::ostringstream os;
    bool den = total_degree(den_) > 0;
    if (den) os << "(";
    os << num_.str();
    if (den) {
        os << ")/(";
        bool star = false;
        for (size_t i = 0; i < den_.size(); ++i) {
            if (den_[i] == 0) continue;
            if (star) os << "*";
            star = true;
            os << ctx()->names[i];
            if (den_[i] != 1) os << "^" << den_[i];
        }
        os << ")";
    }
    return os.str();
}

Expo common_denominator(const std::vector<MeroFunction>& fs) {
    Expo l;
    for (const auto& f : fs) {
        if (l.empty()) l = f.den();
        else l = expo_lcm(l, f.den());
    }
    return l;
}

} // namespace betaforms
