// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and runtime budgets are pinned here.

#include "core/beta.hpp"
#include "core/closure.hpp"
#include "core/quad.hpp"
#include "core/varietyio.hpp"
#include "core/verify.hpp"

#include "../support/closure_oracle.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace betaforms;

namespace {

Registry g_reg;
BetaEngine g_engine(g_reg);
int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int criterion, const std::string& what, bool pass, const std::string& detail = "") {
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << what;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

std::string fixtures_dir() {
    if (const char* env = std::getenv("BETAFORMS_FIXTURES")) return env;
    return "fixtures";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FormModule forms_module(const VarietyPtr& X, int q, bool with_omega,
                        const std::vector<std::string>& texts) {
    std::vector<DiffForm> gens;
    if (with_omega)
        for (const auto& g : X->omega_module(q).gens()) gens.push_back(g);
    for (const auto& t : texts) gens.push_back(X->to_ambient(X->parse(t)));
    return FormModule(&X->ambient_chart(), q, gens);
}

bool check_cert_file(const std::string& rel, std::string* why = nullptr) {
    std::string text = slurp(fixtures_dir() + "/" + rel);
    VarietyPtr X = g_reg.get(certificate_variety_id(text));
    DependenceCertificate cert = parse_certificate_json(text);
    CertCheck c = verify_certificate(*X, X->parse(certificate_form_text(text)), cert);
    if (!c.ok && why) *why = rel + ": " + c.reason;
    return c.ok;
}

CutoffSpec bump(size_t ambient_dim, double radius) {
    CutoffSpec c;
    c.center.assign(ambient_dim, {0.0, 0.0});
    c.radius = radius;
    c.smoothness = BumpClass::C1;
    return c;
}

// ---------------------------------------------------------------------------

void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    auto X = g_reg.get("curve35");
    bool ok = true;
    std::string why;

    FormModule a0 = g_engine.module_of(X, g_engine.seed(X, 0));
    if (!a0.equals(forms_module(X, 0, false, {"1", "y^2/x", "y^4/x^2", "y^3/x", "y^4/x"}))) {
        ok = false;
        why = "alpha^0 mismatch";
    }
    FormModule a1 = g_engine.module_of(X, g_engine.seed(X, 1));
    if (ok && !a1.equals(forms_module(X, 1, true, {"y^2*dy/x"}))) {
        ok = false;
        why = "alpha^1 mismatch";
    }
    BetaResult b1 = g_engine.beta(X, 1);
    if (ok && b1.pstar != 1) {
        ok = false;
        why = "p* = " + std::to_string(b1.pstar);
    }
    const FormModule* L1 = X->L_module(1);
    if (ok && (!L1 || !g_engine.module_of(X, b1.gens).equals(*L1))) {
        ok = false;
        why = "beta^1 differs from L^1";
    }
    double dt = seconds_since(t0);
    if (dt >= 5.0) {
        ok = false;
        why += " (runtime over budget)";
    }
    std::ostringstream d;
    d << "runtime " << dt << "s < 5s";
    report(1, "curve x^3 = y^5: alpha^0, alpha^1, beta^1 = L^1 at p* = 1", ok, ok ? d.str() : why);
}

void criterion2() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string why;
    for (int k = 2; k <= 8 && ok; ++k) {
        auto S = g_reg.get("S" + std::to_string(k));
        int m = k / 2;
        auto zs = [&](int e) { return e == 0 ? std::string() : "/z^" + std::to_string(e); };

        if (!g_engine.module_of(S, g_engine.seed(S, 1))
                 .equals(forms_module(S, 1, true, {"x*dy" + zs(m)}))) {
            ok = false;
            why = "alpha^1 mismatch at k=" + std::to_string(k);
            break;
        }
        if (!g_engine.module_of(S, g_engine.seed(S, 2))
                 .equals(forms_module(S, 2, true, {"dx^dy" + zs(m - 1)}))) {
            ok = false;
            why = "alpha^2 mismatch at k=" + std::to_string(k);
            break;
        }
        BetaResult b2 = g_engine.beta(S, 2);
        FormModule bm = g_engine.module_of(S, b2.gens);
        FormModule lvl1 = g_engine.module_of(S, g_engine.alpha_level(S, 2, 1));
        if (b2.pstar != 1 || !bm.equals(lvl1) ||
            !bm.equals(forms_module(S, 2, true, {"dx^dy" + zs(m)}))) {
            ok = false;
            why = "beta^2 mismatch at k=" + std::to_string(k);
            break;
        }
        auto Lin = S->L_contains(S->parse("dx^dy/z^" + std::to_string(k - 1)));
        auto Lout = S->L_contains(S->parse("dx^dy/z^" + std::to_string(k)));
        if (!Lin || !*Lin || !Lout || *Lout) {
            ok = false;
            why = "L^2 check failed at k=" + std::to_string(k);
            break;
        }
        if (k >= 4) {
            bool strict =
                !S->omega_module(2).contains(S->to_ambient(S->parse("dx^dy" + zs(m - 1)))).member &&
                !g_engine.module_of(S, g_engine.seed(S, 2))
                     .contains(S->to_ambient(S->parse("dx^dy" + zs(m))))
                     .member &&
                !bm.contains(S->to_ambient(S->parse("dx^dy/z^" + std::to_string(k - 1)))).member;
            if (!strict) {
                ok = false;
                why = "chain not strict at k=" + std::to_string(k);
                break;
            }
        }
    }
    double dt = seconds_since(t0);
    if (dt >= 60.0) {
        ok = false;
        why += " (runtime over budget)";
    }
    std::ostringstream d;
    d << "runtime " << dt << "s < 60s";
    report(2, "S_k, k = 2..8: alpha^1, alpha^2, beta^2 = alpha^2[1], L^2, strict chain for k >= 4",
           ok, ok ? d.str() : why);
}

void criterion3() {
    bool ok = true;
    std::string why;
    std::vector<std::string> ids = {"curve35", "line", "plane", "S2xC"};
    for (int k = 2; k <= 8; ++k) ids.push_back("S" + std::to_string(k));
    for (int k = 2; k <= 6; ++k) ids.push_back("M" + std::to_string(k));
    for (int n : {3, 4, 5, 6, 8}) ids.push_back("F" + std::to_string(n));
    for (const auto& id : ids) {
        auto X = g_reg.get(id);
        for (int q = 0; q <= X->dim() && ok; ++q) {
            BetaResult b = g_engine.beta(X, q);
            if (b.pstar > q) {
                ok = false;
                why = id + " q=" + std::to_string(q) + " p*=" + std::to_string(b.pstar);
            }
            if (X->normal() && q >= 1 && b.pstar > q - 1) {
                ok = false;
                why = id + " (normal) q=" + std::to_string(q) + " p*=" + std::to_string(b.pstar);
            }
        }
        if (!ok) break;
    }
    report(3, "stabilization bounds p* <= q, and p* <= q-1 on normal varieties", ok, why);
}

void criterion4() {
    bool ok = true;
    std::string why;
    for (int k = 2; k <= 6 && ok; ++k) {
        std::string ks = std::to_string(k);
        int m = k / 2;
        std::string us = m == 0 ? "" : "/u^" + std::to_string(m);

        if (!check_cert_file("certs/mk_omega_" + ks + ".json", &why)) {
            ok = false;
            break;
        }
        if (!check_cert_file("certs/mk_w_" + ks + ".json", &why)) {
            ok = false;
            break;
        }
        // restriction of d(omega_m) to {v = 1} is arc-refuted out of alpha^2(S_k)
        MapSpec j = builtin_map("slice:" + ks, g_reg);
        DiffForm dom = exterior_d(j.target->ambient_chart(), j.target->parse("x*dy" + us));
        DiffForm restricted = pullback(j, dom);
        auto verdict = refute_by_arc(*j.source, restricted, alpha_seed(*j.source, 2),
                                     stock_arcs(*j.source).front());
        if (!verdict || !*verdict) {
            ok = false;
            why = "slice refutation failed at k=" + ks;
            break;
        }
        // pi^*(dw) is not a section of alpha^3 on S_k x C (product rule)
        MapSpec pi = builtin_map("pi:" + ks, g_reg);
        DiffForm dw = exterior_d(pi.target->ambient_chart(), pi.target->parse("x*dy^dv" + us));
        ClassificationReport cr = g_engine.classify(pi.source, pullback(pi, dw));
        if (cr.in_alpha != Rung::No) {
            ok = false;
            why = "pi^*(dw) not refuted at k=" + ks;
            break;
        }
    }
    report(4, "M_k, k = 2..6: dependence relation, slice refutation, w certified, dw refuted via the product rule",
           ok, why);
}

void criterion5() {
    bool ok = true;
    std::string why;
    for (int n : {3, 4, 5, 6, 8}) {
        std::string ns = std::to_string(n);
        int p = n / 2;
        if (!check_cert_file("certs/fermat_" + ns + ".json", &why)) {
            ok = false;
            break;
        }
        auto F = g_reg.get("F" + ns);
        int zp = n % 2 == 0 ? 2 * p - 1 : 2 * p;
        std::string main_form = "a^" + std::to_string(p) + "*b^" + std::to_string(p) +
                                "*da^db/z^" + std::to_string(zp);
        if (F->omega_module(2).contains(F->to_ambient(F->parse(main_form))).member) {
            ok = false;
            why = "F" + ns + ": the dependent form is holomorphic";
            break;
        }
        if (n % 2 == 0) {
            if (!check_cert_file("certs/fermat_pullback_" + ns + ".json", &why)) {
                ok = false;
                break;
            }
            MapSpec f = builtin_map("fermat:" + ns, g_reg);
            std::string zs = p - 1 == 0 ? "" : "/z^" + std::to_string(p - 1);
            DiffForm pulled = pullback(f, f.target->parse("dx^dy" + zs));
            FormModule a2 = g_engine.module_of(F, g_engine.seed(F, 2));
            if (!a2.contains(F->to_ambient(pulled)).member) {
                ok = false;
                why = "F" + ns + ": pullback route failed";
                break;
            }
            std::string pb_form = "a^" + std::to_string(p - 1) + "*b^" + std::to_string(p - 1) +
                                  "*da^db" + zs;
            if (F->omega_module(2).contains(F->to_ambient(F->parse(pb_form))).member) {
                ok = false;
                why = "F" + ns + ": pulled form is holomorphic";
                break;
            }
        }
    }
    report(5, "Fermat F_n, n in {3,4,5,6,8}: degree-2 certificates, pullback route, not holomorphic",
           ok, why);
}

void criterion6() {
    bool ok = true;
    std::string why;
    std::vector<std::string> maps = {"qk:2", "qk:4", "fermat:4", "fermat:6",
                                     "pi:2", "pi:3", "slice:2", "slice:3",
                                     "id:S4", "sliceqk:3"};
    for (const auto& tok : maps) {
        MapSpec f = builtin_map(tok, g_reg);
        PullbackLevelReport rep = g_engine.check_pullback_levels(f, 1);
        if (!rep.all_preserved || !rep.wedge_d_commute) {
            ok = false;
            why = tok + (rep.all_preserved ? " wedge/d commutation" : " level preservation");
            break;
        }
    }
    if (ok) {
        // functoriality on the composition slice . q_k against the staged pullbacks
        MapSpec qk = builtin_map("qk:3", g_reg);
        MapSpec sl = builtin_map("slice:3", g_reg);
        MapSpec both = compose_map(sl, qk);
        auto M3 = sl.target;
        for (int q = 0; q <= 2 && ok; ++q) {
            for (const auto& g : g_engine.alpha_level(M3, q, 0).gens) {
                DiffForm direct = pullback(both, g);
                DiffForm staged = pullback(qk, pullback(sl, g));
                if (!form_equal(qk.source->canonical_chart(), direct, staged)) {
                    ok = false;
                    why = "functoriality failed on " + M3->print(g);
                    break;
                }
            }
        }
    }
    report(6, "pull-back compatibility: level preservation, wedge/d commutation, functoriality", ok, why);
}

struct StokesCase {
    std::string name;
    StokesReport rep;
};

std::vector<StokesCase> run_stokes_cases() {
    std::vector<StokesCase> out;
    {
        auto L = g_reg.get("line");
        out.push_back({"smooth disc",
                       stokes_residual(L, stock_cycle(L, "self"), bump(1, 0.6), L->parse("t"),
                                       L->parse("dt"))});
    }
    {
        auto X = g_reg.get("curve35");
        out.push_back({"curve35",
                       stokes_residual(X, stock_cycle(X, "self"), bump(2, 0.7), X->parse("y^2/x"),
                                       X->parse("y^2*dx/x^2"))});
    }
    {
        auto S2 = g_reg.get("S2");
        out.push_back({"S_2 diagonal",
                       stokes_residual(S2, stock_cycle(S2, "diag"), bump(3, 0.8), S2->parse("x"),
                                       S2->parse("x*dy/z"))});
    }
    return out;
}

void criterion7() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string why;
    std::ostringstream residuals;
    for (const auto& c : run_stokes_cases()) {
        residuals << c.name << " " << c.rep.residual << "; ";
        if (!(c.rep.residual < 1e-6)) {
            ok = false;
            why = c.name + " residual " + std::to_string(c.rep.residual);
        }
    }
    double dt = seconds_since(t0);
    if (dt >= 60.0) {
        ok = false;
        why += " (runtime over budget)";
    }
    report(7, "Stokes residuals < 1e-6 on the three registered cases", ok,
           ok ? residuals.str() + "runtime " + std::to_string(dt) + "s" : why);
}

void criterion8() {
    bool ok = true;
    std::string why;

    // epsilon sequences: Cauchy with monotone decreasing increments
    struct Reg {
        std::string name;
        IntegralReport rep;
    };
    std::vector<Reg> regs;
    {
        auto X = g_reg.get("curve35");
        DiffForm v = X->parse("y^2*dx/x^2");
        regs.push_back({"curve35 self", integrate(X, stock_cycle(X, "self"), bump(2, 0.7), v, v)});
    }
    {
        auto S2 = g_reg.get("S2");
        DiffForm v = S2->parse("x*dy/z");
        regs.push_back({"S_2 diagonal", integrate(S2, stock_cycle(S2, "diag"), bump(3, 0.8), v, v)});
    }
    for (const auto& r : regs) {
        if (!r.rep.converged) {
            ok = false;
            why = r.name + " not flagged convergent";
            break;
        }
        double prev = -1.0;
        double scale = 0.0;
        for (const auto& v : r.rep.values) scale = std::max(scale, std::abs(v));
        for (size_t i = 1; i < r.rep.values.size(); ++i) {
            double d = std::abs(r.rep.values[i] - r.rep.values[i - 1]);
            if (prev >= 0.0 && d > prev * (1.0 + 1e-9) + 1e-13 * scale) {
                ok = false;
                why = r.name + " increments not monotone";
            }
            prev = d;
        }
    }

    double C = 0.0;
    if (ok) {
        auto S4 = g_reg.get("S4");
        DiffForm v = S4->parse("x*dy/z^2");
        std::vector<double> grid;
        for (int i = 0; i <= 12; ++i) grid.push_back(0.01 * std::pow(100.0, i / 12.0));
        FamilyScan scan =
            family_scan(S4, stock_cycle(S4, "diag-family"), bump(3, 0.8), v, v, grid);
        C = scan.bound_constant;
        if (!scan.all_converged) {
            ok = false;
            why = "family scan has non-convergent rows";
        }
        if (ok && !(scan.sup_abs < 1e9) && scan.sup_abs == scan.sup_abs) {
            ok = false;
            why = "family scan unbounded";
        }
        for (const auto& row : scan.rows) {
            if (!(std::abs(row.value) <= C * row.mass * (1.0 + 1e-9))) {
                ok = false;
                why = "mass bound violated at t=" + std::to_string(row.t);
            }
        }
    }
    std::ostringstream d;
    d << "single constant C = " << C;
    report(8, "absolute convergence (monotone Cauchy epsilon tables) and family boundedness", ok,
           ok ? d.str() : why);
}

void criterion9() {
    bool ok = true;
    std::string why;
    int checked = 0;

    // every monomial query behind criteria 1-2: curve35 q = 0,1 and S_k q = 2
    // run through decide_monomial and must agree with the brute-force oracle;
    // the S_k q = 1 sweep candidates are cross-checked against the final seed
    // membership verdicts.
    std::vector<std::pair<std::string, int>> decide_scopes = {{"curve35", 0}, {"curve35", 1}};
    for (int k = 2; k <= 8; ++k) decide_scopes.push_back({"S" + std::to_string(k), 2});
    for (const auto& [id, q] : decide_scopes) {
        auto X = g_reg.get(id);
        for (const auto& cand : alpha_sweep_candidates(*X, q)) {
            bool fast = decide_monomial(*X, cand).level == AlphaLevel::InAlphaDecidedMonomial;
            bool slow = tst::oracle_in_alpha(*X, cand);
            ++checked;
            if (fast != slow) {
                ok = false;
                why = id + " q=" + std::to_string(q) + " form " + X->print(cand);
                break;
            }
        }
        if (!ok) break;
    }
    if (ok) {
        // S_k q = 1 queries never reach decide_monomial (the dz generator is
        // not monomial); the seed verdicts are cross-checked against the
        // mixed-generator brute-force certificate search instead
        for (int k = 2; k <= 8 && ok; ++k) {
            auto S = g_reg.get("S" + std::to_string(k));
            FormModule a1 = g_engine.module_of(S, g_engine.seed(S, 1));
            for (const auto& cand : alpha_sweep_candidates(*S, 1)) {
                bool in_seed = a1.contains(S->to_ambient(cand)).member;
                bool slow = tst::oracle_in_alpha_deg2(*S, cand);
                ++checked;
                if (in_seed != slow) {
                    ok = false;
                    why = "S" + std::to_string(k) + " q=1 form " + S->print(cand);
                    break;
                }
            }
        }
    }
    report(9, "decide_monomial agrees with the brute-force certificate oracle (100%)", ok,
           ok ? std::to_string(checked) + " queries" : why);
}

} // namespace

int main() {
    std::cout << "acceptance suite" << std::endl;
    try {
        criterion1();
        criterion2();
        criterion3();
        criterion4();
        criterion5();
        criterion6();
        criterion7();
        criterion8();
        criterion9();
    } catch (const std::exception& e) {
        std::cout << "FAIL  unexpected exception: " << e.what() << std::endl;
        ++g_failures;
    }
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASS" : std::to_string(g_failures) + " FAILURES")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
