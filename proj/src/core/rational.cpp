#include "core/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace betaforms {

Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    mpq_class v;
    if (v.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: '" + s + "'");
    v.canonicalize();
    if (v.get_den() == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
    return Rational(v);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::inv() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return Rational(mpq_class(1) / v_);
}

Rational Rational::pow(int e) const {
    if (e == 0) return Rational(1);
    Rational base = e > 0 ? *this : inv();
    int n = e > 0 ? e : -e;
    Rational acc(1);
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

std::string Rational::str() const {
    return v_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

} // namespace betaforms
