#include "core/pullback.hpp"

#include <doctest.h>

using namespace betaforms;

namespace {
Registry& reg() {
    static Registry r;
    return r;
}
} // namespace

TEST_CASE("quotient map pullbacks clear the denominators") {
    for (int k : {2, 3, 4, 5}) {
        MapSpec qk = builtin_map("qk:" + std::to_string(k), reg());
        auto plane = qk.source;
        const Chart& pc = plane->canonical_chart();
        DiffForm u = qk.target->parse("dx^dy/z^" + std::to_string(k - 1));
        DiffForm got = pullback(qk, u);
        DiffForm expect = form_scale(parse_form("da^db", pc), Rational(k * k));
        CHECK(form_equal(pc, got, expect));
    }
}

TEST_CASE("Fermat cover: pull back of dx^dy/z^{p-1}") {
    for (int n : {4, 6, 8}) {
        int p = n / 2;
        MapSpec f = builtin_map("fermat:" + std::to_string(n), reg());
        DiffForm u = f.target->parse("dx^dy/z^" + std::to_string(p - 1));
        DiffForm got = pullback(f, u);
        // 2 p^2 (ab)^{p-1} da^db / z^{p-1}
        std::string txt = std::to_string(2 * p * p) + "*a^" + std::to_string(p - 1) + "*b^" +
                          std::to_string(p - 1) + "*da^db" +
                          (p == 1 ? "" : "/z^" + std::to_string(p - 1));
        DiffForm expect = f.source->parse(txt);
        CHECK_MESSAGE(form_equal(f.source->ambient_chart(), got, expect), "n=", n);
    }
}

TEST_CASE("identity pullback is the identity") {
    auto S4 = reg().get("S4");
    MapSpec id = identity_map(S4);
    for (const std::string t : {"x*dy/z^2", "dx^dy/z", "y*dx + x*dy"}) {
        DiffForm u = S4->parse(t);
        CHECK(form_equal(S4->canonical_chart(), pullback(id, u), S4->to_canonical(u)));
    }
}

TEST_CASE("slice inclusion computes the v = 1 restrictions") {
    for (int k : {2, 3, 4, 5, 6}) {
        int m = k / 2;
        MapSpec j = builtin_map("slice:" + std::to_string(k), reg());
        auto Mk = j.target;
        auto Sk = j.source;
        const Chart& sc = Sk->canonical_chart();
        std::string us = m == 0 ? "" : "/u^" + std::to_string(m);

        // restrict(d omega_m) = (1 - m/k) dx^dy/z^m
        DiffForm dw = exterior_d(Mk->ambient_chart(), Mk->parse("x*dy" + us));
        DiffForm got = pullback(j, dw);
        std::string zs = m == 0 ? "" : "/z^" + std::to_string(m);
        DiffForm expect = form_scale(Sk->parse_canonical("dx^dy" + zs), Rational(k - m, k));
        CHECK_MESSAGE(form_equal(sc, got, expect), "k=", k);

        // restrict(du) = dz, restrict(dv) = 0
        CHECK(form_equal(sc, pullback(j, Mk->parse("du")), Sk->parse_canonical("dz")));
        CHECK(pullback(j, Mk->parse("dv")).is_zero());
    }
}

TEST_CASE("pi factors the pulled 3-form through the disc coordinate") {
    for (int k : {2, 3, 4}) {
        int m = k / 2;
        MapSpec pi = builtin_map("pi:" + std::to_string(k), reg());
        auto Mk = pi.target;
        auto P = pi.source; // S_k x C with coordinates x, y, z, v
        const Chart& pc = P->canonical_chart();
        std::string us = m == 0 ? "" : "/u^" + std::to_string(m);
        DiffForm w = Mk->parse("x*dy^dv" + us);
        DiffForm dw = exterior_d(Mk->ambient_chart(), w);
        DiffForm got = pullback(pi, dw);
        // v.dv ^ ((k-m).x.du^dy/u^{m+1}) with u = z on the product
        std::string eta = std::to_string(k - m) + "*x*dz^dy/z^" + std::to_string(m + 1);
        DiffForm expect = wedge(P->ambient_chart(), P->parse("v*dv"), P->parse(eta));
        CHECK_MESSAGE(form_equal(pc, got, P->to_canonical(expect)), "k=", k);
    }
}

TEST_CASE("pullback commutes with wedge and d") {
    MapSpec f = builtin_map("fermat:4", reg());
    auto S = f.target;
    std::vector<DiffForm> samples = {
        S->parse("x*dy/z^2"),
        S->parse("dx"),
        S->parse("y*dz + z^2*dx"),
        S->parse("x*y*dz/z"),
    };
    const Chart& sc = f.source->canonical_chart();
    for (const auto& u : samples) {
        CHECK(form_equal(sc, pullback(f, exterior_d(S->ambient_chart(), u)),
                         exterior_d(sc, pullback(f, u))));
        for (const auto& v : samples) {
            DiffForm lhs = pullback(f, wedge(S->ambient_chart(), u, v));
            DiffForm rhs = wedge(sc, pullback(f, u), pullback(f, v));
            CHECK(form_equal(sc, lhs, rhs));
        }
    }
}

TEST_CASE("composition functoriality") {
    MapSpec qk = builtin_map("qk:3", reg());
    MapSpec j = builtin_map("slice:3", reg());
    MapSpec jq = compose_map(j, qk);
    MapSpec jq2 = builtin_map("sliceqk:3", reg());
    auto M3 = j.target;
    const Chart& pc = qk.source->canonical_chart();
    for (const std::string t : {"x*dy/u", "du", "x*dy^dv/u", "dv", "y*dx^du"}) {
        DiffForm u = M3->parse(t);
        DiffForm direct = pullback(jq, u);
        DiffForm staged = pullback(qk, pullback(j, u));
        CHECK_MESSAGE(form_equal(pc, direct, staged), "form ", t);
        CHECK(form_equal(pc, direct, pullback(jq2, u)));
    }
}

TEST_CASE("invalid maps are rejected") {
    auto S2 = reg().get("S2");
    auto plane = reg().get("plane");
    const CtxPtr& ctx = plane->ambient_chart().ctx;
    Polynomial a = Polynomial::variable(ctx, 0), b = Polynomial::variable(ctx, 1);
    // does not satisfy xy = z^2
    CHECK_THROWS(make_map("bad", plane, S2, {a, b, a * b}, {Rational(1), Rational(1)}));
}

TEST_CASE("denominator collapsing onto the pole locus is reported") {
    auto S2 = reg().get("S2");
    auto line = reg().get("line");
    const CtxPtr& ctx = line->ambient_chart().ctx;
    Polynomial t = Polynomial::variable(ctx, 0);
    // t -> (t, 0, 0) lies on S_2 with image meeting the z = 0 locus entirely
    MapSpec f = make_map("axis", line, S2, {t, Polynomial::zero(ctx), Polynomial::zero(ctx)},
                         {Rational(1)});
    CHECK_THROWS_WITH_AS(pullback(f, S2->parse("dx^dy/z")),
                         doctest::Contains("zero divisor"), std::invalid_argument);
    // holomorphic forms restrict fine
    CHECK_NOTHROW(pullback(f, S2->parse("dx")));
}

TEST_CASE("restrict is the slice pullback") {
    MapSpec j = builtin_map("slice:4", reg());
    auto M4 = j.target;
    DiffForm du = M4->parse("du");
    CHECK(form_equal(j.source->canonical_chart(), restrict_form(j, du),
                     j.source->parse_canonical("dz")));
    CHECK(restrict_form(j, M4->parse("dv")).is_zero());
    // a slice whose image sits inside the singular locus is rejected up front
    auto line = reg().get("line");
    auto M2 = reg().get("M2");
    const CtxPtr& ctx = line->ambient_chart().ctx;
    Polynomial zero = Polynomial::zero(ctx);
    CHECK_THROWS(make_map("bad-slice", line, M2,
                          {zero, zero, zero, Polynomial::variable(ctx, 0)}, {Rational(1)}));
}
