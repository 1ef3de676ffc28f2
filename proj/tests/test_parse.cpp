#include "core/formparse.hpp"
#include "core/variety.hpp"

#include <doctest.h>

using namespace betaforms;

TEST_CASE("parsing the reference form literals") {
    auto S4 = builtin_variety("S4");
    const Chart& ch = S4->ambient_chart();

    SUBCASE("x*dy/z^2") {
        DiffForm f = parse_form("x*dy/z^2", ch);
        CHECK(f.q == 1);
        REQUIRE(f.comps.size() == 1);
        auto& [key, m] = *f.comps.begin();
        CHECK(key == std::vector<int>{1}); // dy
        CHECK(m.num() == Polynomial::variable(ch.ctx, 0));
        CHECK(m.den() == Expo{0, 0, 2});
    }
    SUBCASE("antisymmetry collapses dx^dy - dy^dx") {
        DiffForm f = parse_form("dx^dy - dy^dx", ch);
        DiffForm g = parse_form("2*dx^dy", ch);
        CHECK(form_equal(ch, f, g));
    }
    SUBCASE("dx^dx is zero") {
        CHECK(parse_form("dx^dx", ch).is_zero());
    }
    SUBCASE("rational coefficients and powers") {
        DiffForm f = parse_form("3/4*x^2*y*dx - z^3*dy", ch);
        CHECK(f.q == 1);
        CHECK(f.comps.size() == 2);
    }
    SUBCASE("scalar expressions") {
        DiffForm f = parse_form("(1 - 2/4)*dx", ch);
        CHECK(form_equal(ch, f, parse_form("1/2*dx", ch)));
    }
    SUBCASE("division by a monomial only") {
        CHECK_THROWS_AS(parse_form("dx/(x+y)", ch), FormParseError);
        CHECK_THROWS_AS(parse_form("dx/dy", ch), FormParseError);
    }
    SUBCASE("pole discipline") {
        CHECK_THROWS_AS(parse_form("dy/x", ch), FormParseError); // x not a pole variable on S_k
        CHECK_NOTHROW(parse_form("dy/z^5", ch));
    }
    SUBCASE("unknown variable with caret position") {
        try {
            parse_form("x*dw", ch);
            FAIL("expected parse error");
        } catch (const FormParseError& e) {
            CHECK(e.position() == 2);
        }
    }
    SUBCASE("errors carry positions") {
        CHECK_THROWS_AS(parse_form("x +", ch), FormParseError);
        CHECK_THROWS_AS(parse_form("x + dy", ch), FormParseError); // degree mismatch
        CHECK_THROWS_AS(parse_form("dx^2", ch), FormParseError);   // form power
    }
}

TEST_CASE("curve35 grammar cases") {
    auto X = builtin_variety("curve35");
    const Chart& ch = X->ambient_chart();
    DiffForm f = parse_form("y^2*dy/x", ch);
    CHECK(f.q == 1);
    CHECK_NOTHROW(parse_form("y^4/x^2", ch));
    CHECK_THROWS(parse_form("dy/y", ch)); // y is not a declared pole
}

TEST_CASE("printer round trip") {
    auto S4 = builtin_variety("S4");
    const Chart& ch = S4->ambient_chart();
    std::vector<std::string> fixtures = {
        "x*dy/z^2",
        "dx^dy - 2*dy^dz",
        "y^2*dx + x*dy/z^3",
        "1",
        "0",
        "x*y*z",
        "dx^dy/z^3",
        "-dx + 3/7*z^2*dy",
    };
    for (const auto& text : fixtures) {
        DiffForm f = parse_form(text, ch);
        std::string printed = print_form(f, ch);
        DiffForm g = parse_form(printed, ch);
        CHECK_MESSAGE(form_equal(ch, f, g), "round trip failed for: ", text, " -> ", printed);
        // printing is canonical: print(parse(print(f))) == print(f)
        CHECK(print_form(g, ch) == printed);
    }
}

TEST_CASE("cover coordinates parse on parametrized varieties") {
    auto S4 = builtin_variety("S4");
    DiffForm f = S4->parse("a^4*da^db");
    CHECK(f.coords == Coords::Parameter);
    CHECK(f.q == 2);
    DiffForm g = S4->parse("x*dy/z^2");
    CHECK(g.coords == Coords::Ambient);
}
