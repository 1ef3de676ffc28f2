#include "core/variety.hpp"
#include "core/varietyio.hpp"

#include "support/testring.hpp"

#include <doctest.h>

#include <cstdlib>

using namespace betaforms;

TEST_CASE("builtins construct and self-validate") {
    for (const std::string id : {"curve35", "S2", "S4", "S5", "M2", "M3", "F3", "F4", "line", "plane"})
        CHECK_NOTHROW(builtin_variety(id));
    CHECK_THROWS(builtin_variety("S1"));
    CHECK_THROWS(builtin_variety("F2"));
    CHECK_THROWS(builtin_variety("nonsense"));
}

TEST_CASE("defining relations hold in the ambient model") {
    SUBCASE("S_k: y dx + x dy = k z^{k-1} dz") {
        for (int k : {2, 3, 4, 5}) {
            auto S = builtin_variety("S" + std::to_string(k));
            const Chart& ch = S->ambient_chart();
            DiffForm lhs = parse_form("y*dx + x*dy", ch);
            DiffForm rhs = form_scale(
                wedge(ch, parse_form("z^" + std::to_string(k - 1), ch), form_dvar(ch, 2)),
                Rational(k));
            CHECK(form_equal(ch, lhs, rhs));
        }
    }
    SUBCASE("M_k: x dy + y dx = k u^{k-1} v du + u^k dv") {
        for (int k : {1, 2, 3, 4}) {
            auto M = builtin_variety("M" + std::to_string(k));
            const Chart& ch = M->ambient_chart();
            DiffForm lhs = parse_form("x*dy + y*dx", ch);
            std::string rhs_text = std::to_string(k) + "*u^" + std::to_string(k - 1) + "*v*du + u^" +
                                   std::to_string(k) + "*dv";
            CHECK(form_equal(ch, lhs, parse_form(rhs_text, ch)));
        }
    }
    SUBCASE("curve35: 3 x^2 dx = 5 y^4 dy") {
        auto X = builtin_variety("curve35");
        const Chart& ch = X->ambient_chart();
        CHECK(form_equal(ch, parse_form("3*x^2*dx", ch), parse_form("5*y^4*dy", ch)));
    }
}

TEST_CASE("exterior derivative computes the reference relations") {
    SUBCASE("d(x dy/z^m) = (1 - m/k) dx^dy/z^m on S_k") {
        for (int k : {2, 3, 4, 5, 6, 7, 8}) {
            auto S = builtin_variety("S" + std::to_string(k));
            const Chart& ch = S->ambient_chart();
            int m = k / 2;
            std::string zs = m == 0 ? "" : "/z^" + std::to_string(m);
            DiffForm d_omega = exterior_d(ch, parse_form("x*dy" + zs, ch));
            DiffForm expect = form_scale(parse_form("dx^dy" + zs, ch), Rational(k - m, k));
            CHECK_MESSAGE(form_equal(ch, d_omega, expect), "k=", k);
        }
    }
    SUBCASE("d(omega_m) = dx^dy/u^m - m x du^dy/u^{m+1} on M_k") {
        for (int k : {2, 3, 4, 5}) {
            auto M = builtin_variety("M" + std::to_string(k));
            const Chart& ch = M->ambient_chart();
            int m = k / 2;
            DiffForm d_omega = exterior_d(ch, parse_form("x*dy/u^" + std::to_string(m), ch));
            std::string txt = "dx^dy/u^" + std::to_string(m) + " - " + std::to_string(m) +
                              "*x*du^dy/u^" + std::to_string(m + 1);
            CHECK(form_equal(ch, d_omega, parse_form(txt, ch)));
        }
    }
    SUBCASE("d of a constant multiple of dx vanishes") {
        auto S = builtin_variety("S3");
        const Chart& ch = S->ambient_chart();
        CHECK(exterior_d(ch, parse_form("7*dx", ch)).is_zero());
    }
}

TEST_CASE("d is a differential and a derivation") {
    auto S = builtin_variety("S4");
    const Chart& ch = S->ambient_chart();
    tst::Rng rng(11);
    auto R = tst::Ring{ch.ctx};
    for (int rep = 0; rep < 10; ++rep) {
        DiffForm u = form_function(ch, MeroFunction(tst::random_poly(R, rng)));
        DiffForm w = wedge(ch, u, form_dvar(ch, rep % 2));
        // d(d(u)) == 0 on functions and 1-forms
        CHECK(exterior_d(ch, exterior_d(ch, u)).is_zero());
        CHECK(exterior_d(ch, exterior_d(ch, w)).is_zero());
        // Leibniz: d(u ^ w) = du ^ w + (-1)^0 u ^ dw
        DiffForm lhs = exterior_d(ch, wedge(ch, u, w));
        DiffForm rhs = form_add(wedge(ch, exterior_d(ch, u), w), wedge(ch, u, exterior_d(ch, w)));
        CHECK(form_equal(ch, lhs, rhs));
    }
    // graded sign on 1-forms: u ^ v = -v ^ u
    DiffForm a = S->parse("x*dy/z^2");
    DiffForm b = S->parse("y*dx");
    CHECK(form_equal(ch, wedge(ch, a, b), form_neg(wedge(ch, b, a))));
}

TEST_CASE("cover pullback of the quotient map") {
    for (int k : {2, 4, 5}) {
        auto S = builtin_variety("S" + std::to_string(k));
        const Chart& cc = *S->cover_chart();
        // dx^dy/z^{k-1} pulls back to k^2 da^db
        DiffForm f = S->parse("dx^dy/z^" + std::to_string(k - 1));
        DiffForm pulled = S->to_cover(f);
        DiffForm expect = form_scale(parse_form("da^db", cc), Rational(k) * Rational(k));
        CHECK(form_equal(cc, pulled, expect));
        // and dx^dy/z^k has a genuine pole on the cover
        DiffForm g = S->to_cover(S->parse("dx^dy/z^" + std::to_string(k)));
        bool has_pole = false;
        for (const auto& [key, m] : g.comps) {
            (void)key;
            if (m.has_denominator()) has_pole = true;
        }
        CHECK(has_pole);
    }
}

TEST_CASE("torsion-free presentation on the cover") {
    for (int k : {2, 3, 4, 6}) {
        auto S = builtin_variety("S" + std::to_string(k));
        const Chart& cc = *S->cover_chart();
        auto gens = S->omega_torsionfree(2);
        // module generated by a^k da^db, b^k da^db, (ab)^{k-1} da^db up to units
        std::string ks = std::to_string(k), k1 = std::to_string(k - 1);
        std::vector<DiffForm> expect = {
            parse_form("a^" + ks + "*da^db", cc),
            parse_form("b^" + ks + "*da^db", cc),
            parse_form("a^" + k1 + "*b^" + k1 + "*da^db", cc),
        };
        // compare as ambient membership modules
        std::vector<DiffForm> ga, ea;
        for (const auto& g : gens) ga.push_back(S->to_ambient(g));
        for (const auto& g : expect) ea.push_back(S->to_ambient(g));
        FormModule A(&S->ambient_chart(), 2, ga);
        FormModule B(&S->ambient_chart(), 2, ea);
        CHECK(A.equals(B));
        // deck invariance of every generator
        for (const auto& g : gens) CHECK(S->deck_invariant(g));
    }
}

TEST_CASE("curve35 presentation and pole bookkeeping") {
    auto X = builtin_variety("curve35");
    auto gens = X->omega_torsionfree(1);
    const Chart& cc = *X->cover_chart();
    REQUIRE(gens.size() == 2);
    CHECK(form_equal(cc, gens[0], parse_form("5*t^4*dt", cc)));
    CHECK(form_equal(cc, gens[1], parse_form("3*t^2*dt", cc)));

    // invariant monomial sections: t <-> y^2/x
    DiffForm t_fn = X->parse("t");
    DiffForm amb = X->to_ambient(t_fn);
    CHECK(form_equal(X->ambient_chart(), amb, X->parse("y^2/x")));
    // and back
    CHECK(form_equal(cc, X->to_cover(amb), t_fn));
}

TEST_CASE("round trip cover <-> ambient on forms") {
    auto S = builtin_variety("S5");
    const Chart& ch = S->ambient_chart();
    for (const std::string text : {"x*dy/z^2", "dx^dy/z^2", "y*dx + x*dy", "dz", "dx^dz"}) {
        DiffForm f = S->parse(text);
        DiffForm round = S->to_ambient(S->to_cover(f));
        CHECK_MESSAGE(form_equal(ch, round, f), "round trip failed for ", text);
    }
    // non-invariant cover forms are rejected
    const Chart& cc = *S->cover_chart();
    DiffForm bad = parse_form("a*da", cc);
    CHECK_THROWS(S->to_ambient(bad));
}

TEST_CASE("L proxy on parametrized varieties") {
    SUBCASE("S_k: dx^dy/z^{k-1} in L, dx^dy/z^k not") {
        for (int k : {2, 4, 7}) {
            auto S = builtin_variety("S" + std::to_string(k));
            auto in = S->L_contains(S->parse("dx^dy/z^" + std::to_string(k - 1)));
            auto out = S->L_contains(S->parse("dx^dy/z^" + std::to_string(k)));
            REQUIRE(in.has_value());
            REQUIRE(out.has_value());
            CHECK(*in);
            CHECK_FALSE(*out);
        }
    }
    SUBCASE("curve35: L^0 minimal generators are 1, t, t^2 as a module") {
        auto X = builtin_variety("curve35");
        auto gens = X->L_cover_generators(0);
        const Chart& cc = *X->cover_chart();
        REQUIRE(gens.size() == 3);
        CHECK(form_equal(cc, gens[0], parse_form("1", cc)));
        CHECK(form_equal(cc, gens[1], parse_form("t", cc)));
        CHECK(form_equal(cc, gens[2], parse_form("t^2", cc)));
        // module-equal to the five-generator ambient list
        const FormModule* L0 = X->L_module(0);
        REQUIRE(L0 != nullptr);
        std::vector<DiffForm> listed;
        for (const std::string t : {"1", "y^2/x", "y^4/x^2", "y^3/x", "y^4/x"})
            listed.push_back(X->parse(t));
        FormModule P(&X->ambient_chart(), 0, listed);
        CHECK(L0->equals(P));
    }
    SUBCASE("Fermat has no L data") {
        auto F = builtin_variety("F4");
        CHECK_FALSE(F->has_L_module(2));
        CHECK_FALSE(F->L_contains(F->parse("da^db")).has_value());
    }
}

TEST_CASE("omega membership over the quotient ring") {
    auto F = builtin_variety("F4"); // n = 4, p = 2
    const FormModule& om2 = F->omega_module(2);
    // the integrally dependent 2-forms are not holomorphic
    CHECK_FALSE(om2.contains(F->parse("a^2*b^2*da^db/z^3")).member);
    CHECK_FALSE(om2.contains(F->parse("a*b*da^db/z")).member);
    CHECK(om2.contains(F->parse("da^db")).member);
    // dz^da written meromorphically: b^{n-1}/z^{n-1} da^db
    CHECK(om2.contains(F->parse("b^3*da^db/z^3")).member);
}

TEST_CASE("products") {
    auto S2 = builtin_variety("S2");
    auto P = product_with_disc(S2, "w");
    CHECK(P->id() == "S2xC");
    CHECK(P->dim() == 3);
    CHECK(P->parametrized());
    const Chart& ch = P->ambient_chart();
    DiffForm f = parse_form("x*dy/z + w*dw", ch);
    CHECK(f.q == 1);
    // defining equation still xy - z^2: reduces to the zero form
    CHECK(parse_form("x*y - z^2", ch).is_zero());
    CHECK_THROWS(product_with_disc(S2, "x"));
    // registry resolves the product id
    Registry reg;
    auto P2 = reg.get("S2xC");
    CHECK(P2->dim() == 3);
}

TEST_CASE("singular locus cutoff function") {
    CHECK(builtin_variety("S3")->cutoff_function() == Polynomial::variable(builtin_variety("S3")->ambient_chart().ctx, 2));
    CHECK(builtin_variety("line")->cutoff_function().is_zero());
}

TEST_CASE("variety files round trip") {
    auto S4 = builtin_variety("S4");
    std::string text = save_variety_text(*S4);
    auto back = load_variety_text(text, "roundtrip");
    CHECK(back->id() == "S4");
    CHECK(back->dim() == 2);
    CHECK(back->normal());
    CHECK(back->parametrized());
    CHECK(save_variety_text(*back) == text);

    // the reloaded spec computes the same torsion-free module
    FormModule a(&S4->ambient_chart(), 2, {S4->to_ambient(S4->parse("dx^dy/z"))});
    CHECK(S4->omega_module(2).contains(S4->to_ambient(S4->parse("x*dx^dz"))).member ==
          back->omega_module(2).contains(back->to_ambient(back->parse("x*dx^dz"))).member);
}

TEST_CASE("variety file diagnostics") {
    // parametrization violating the equation is rejected with the residual named
    std::string bad = R"([variety]
name = broken
variables = x y z
equations = x*y - z^2
dimension = 2
pole-variables = z
eliminated = z

[parametrization]
parameters = a b
x = a^2
y = b^2
z = a*b^2
)";
    try {
        load_variety_text(bad, "bad");
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("does not satisfy") != std::string::npos);
    }
    CHECK_THROWS_WITH_AS(load_variety_text("[variety]\nname", "f"),
                         doctest::Contains("f:2"), std::invalid_argument);
    CHECK_THROWS(load_variety_text("[variety]\nname = x\nbogus-key = 1\nvariables = x\n", "f"));
}

TEST_CASE("shipped fermat5 fixture loads") {
    const char* env = std::getenv("BETAFORMS_FIXTURES");
    std::string dir = env ? env : "fixtures";
    auto F5 = load_variety_file(dir + "/fermat5.variety");
    CHECK(F5->id() == "F5");
    CHECK(F5->dim() == 2);
    CHECK(F5->normal());
    CHECK(F5->has_declared_seeds());
    // matches the builtin
    auto builtin = builtin_variety("F5");
    CHECK(save_variety_text(*F5).find("a^5 - b^5 - z^5") != std::string::npos);
    CHECK(builtin->data().alpha_seed_decl.at(2) == F5->data().alpha_seed_decl.at(2));
}
