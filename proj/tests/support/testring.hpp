#pragma once

// Small helpers shared by the unit tests: quick ring construction and a
// deterministic pseudo-random polynomial generator.

#include "core/groebner.hpp"
#include "core/polynomial.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tst {

using namespace betaforms;

struct Ring {
    CtxPtr ctx;

    Polynomial var(const std::string& name, int pow = 1) const {
        int i = ctx->index_of(name);
        return Polynomial::variable(ctx, i, pow);
    }
    Polynomial c(long n, long d = 1) const { return Polynomial::constant(ctx, Rational(n, d)); }
    Polynomial mono(const Expo& e, long num = 1, long den = 1) const {
        return Polynomial::monomial(ctx, e, Rational(num, den));
    }
};

inline Ring ring(std::vector<std::string> names) {
    return Ring{make_ctx(std::move(names))};
}

// xorshift-based deterministic generator
struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed ? seed : 1) {}
    uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    int uniform(int lo, int hi) { return lo + static_cast<int>(next() % (hi - lo + 1)); }
};

inline Polynomial random_poly(const Ring& r, Rng& rng, int max_terms = 4, int max_deg = 3) {
    Polynomial p = Polynomial::zero(r.ctx);
    int nt = rng.uniform(0, max_terms);
    int nv = static_cast<int>(r.ctx->names.size());
    for (int t = 0; t < nt; ++t) {
        Expo e(nv, 0);
        int budget = rng.uniform(0, max_deg);
        for (int i = 0; i < nv && budget > 0; ++i) {
            e[i] = rng.uniform(0, budget);
            budget -= e[i];
        }
        p.add_term(e, Rational(rng.uniform(-5, 5), rng.uniform(1, 3)));
    }
    return p;
}

} // namespace tst
