#pragma once

#include "core/polynomial.hpp"

namespace betaforms {

// Meromorphic coefficient: polynomial numerator over a monomial denominator.
// Normalized so no variable divides both. Which variables may appear in the
// denominator is a chart-level constraint, not enforced here.
class MeroFunction {
public:
    MeroFunction() = default;
    explicit MeroFunction(Polynomial num)
        : num_(std::move(num)), den_(num_.nvars(), 0) {}
    MeroFunction(Polynomial num, Expo den) : num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }
    static MeroFunction zero(const CtxPtr& ctx) { return MeroFunction(Polynomial::zero(ctx)); }
    static MeroFunction constant(const CtxPtr& ctx, const Rational& c) {
        return MeroFunction(Polynomial::constant(ctx, c));
    }

    const Polynomial& num() const { return num_; }
    const Expo& den() const { return den_; }
    const CtxPtr& ctx() const { return num_.ctx(); }
    bool is_zero() const { return num_.is_zero(); }
    bool has_denominator() const { return total_degree(den_) > 0; }

    MeroFunction operator-() const { return MeroFunction(-num_, den_); }
    friend MeroFunction operator+(const MeroFunction& a, const MeroFunction& b);
    friend MeroFunction operator-(const MeroFunction& a, const MeroFunction& b) { return a + (-b); }
    friend MeroFunction operator*(const MeroFunction& a, const MeroFunction& b);
    MeroFunction scaled(const Rational& c) const { return MeroFunction(num_.scaled(c), den_); }
    // multiply by the Laurent monomial x^e (e may have negative entries)
    MeroFunction mul_laurent(const Expo& e) const;
    MeroFunction derivative(int var) const;

    // numerator after clearing with a common denominator D (den_ | D required)
    Polynomial cleared(const Expo& common_den) const;

    std::complex<double> eval(const std::vector<std::complex<double>>& point) const;

    std::string str() const;

private:
    void normalize();
    Polynomial num_;
    Expo den_;
};

// lcm of denominators
Expo common_denominator(const std::vector<MeroFunction>& fs);

} // namespace betaforms
