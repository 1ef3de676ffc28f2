#include "core/closure.hpp"

#include "core/polyhedron.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>

namespace betaforms {

namespace {

SymElement sym_power(const DiffForm& f, int n) {
    SymElement base = sym_of_form(f);
    SymElement out = base;
    for (int i = 1; i < n; ++i) out = sym_mul(out, base);
    return out;
}

// parse a scalar (degree-0) expression against a chart
MeroFunction parse_scalar(const std::string& text, const Chart& ch) {
    DiffForm f = parse_form(text, ch);
    if (f.q != 0) throw std::invalid_argument("expected a scalar expression: " + text);
    if (f.is_zero()) return MeroFunction::zero(ch.ctx);
    return f.comps.begin()->second;
}

} // namespace

CertCheck verify_certificate(const Variety& X, const DiffForm& omega_in, const DependenceCertificate& cert) {
    const Chart& ch = X.ambient_chart();
    DiffForm omega = X.to_ambient(omega_in);
    int q = omega.q;
    if (cert.degree < 1) throw std::invalid_argument("certificate degree must be >= 1");

    // resolve bindings and check they are torsion-free sections of matching degree
    std::map<std::string, DiffForm> bound;
    const FormModule& om = X.omega_module(q);
    for (const auto& [name, text] : cert.bindings) {
        DiffForm g = X.to_ambient(X.parse(text));
        if (g.q != q)
            throw std::invalid_argument("bound generator '" + name + "' has degree " +
                                        std::to_string(g.q) + ", expected " + std::to_string(q));
        if (!om.contains(g).member)
            return {false, "bound generator '" + name + "' is not a torsion-free section"};
        bound.emplace(name, std::move(g));
    }

    SymElement P = sym_power(omega, cert.degree);
    for (const auto& [h, terms] : cert.parts) {
        if (h < 1 || h > cert.degree)
            throw std::invalid_argument("S_h index out of range: " + std::to_string(h));
        SymElement Sh;
        Sh.h = h;
        for (const auto& t : terms) {
            if (static_cast<int>(t.factors.size()) != h)
                throw std::invalid_argument("S_" + std::to_string(h) + " term has wrong product length");
            MeroFunction coeff = parse_scalar(t.coeff_text, ch);
            if (coeff.has_denominator())
                return {false, "S_" + std::to_string(h) + " coefficient is not holomorphic: " + t.coeff_text};
            SymElement prod;
            bool first = true;
            for (const auto& name : t.factors) {
                auto it = bound.find(name);
                if (it == bound.end())
                    throw std::invalid_argument("unresolved generator name '" + name + "'");
                SymElement f = sym_of_form(it->second);
                prod = first ? f : sym_mul(prod, f);
                first = false;
            }
            Sh = sym_add(Sh, sym_scale(prod, coeff));
        }
        SymElement term = (h == cert.degree) ? Sh : sym_mul(Sh, sym_power(omega, cert.degree - h));
        P = sym_add(P, term);
    }
    if (!sym_zero(ch, P)) return {false, "P(omega) does not vanish"};
    return {true, ""};
}

DependenceCertificate parse_certificate_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    DependenceCertificate c;
    c.degree = j.at("degree").get<int>();
    for (auto it = j.at("bindings").begin(); it != j.at("bindings").end(); ++it)
        c.bindings.emplace_back(it.key(), it.value().get<std::string>());
    std::sort(c.bindings.begin(), c.bindings.end());
    for (const auto& part : j.at("S")) {
        int h = part.at("h").get<int>();
        for (const auto& t : part.at("terms")) {
            DependenceCertificate::Term term;
            term.coeff_text = t.at("coeff").get<std::string>();
            term.factors = t.at("product").get<std::vector<std::string>>();
            c.parts[h].push_back(std::move(term));
        }
    }
    return c;
}

std::string certificate_form_text(const std::string& json_text) {
    return nlohmann::json::parse(json_text).at("form").get<std::string>();
}

std::string certificate_variety_id(const std::string& json_text) {
    return nlohmann::json::parse(json_text).at("variety").get<std::string>();
}

std::optional<long> arc_order(const Variety& X, const DiffForm& f_in, const ArcSpec& arc) {
    const Chart& ch = X.chart_for(arc.coords);
    DiffForm f = arc.coords == Coords::Parameter ? X.to_cover(X.to_canonical(f_in)) : X.to_ambient(f_in);
    size_t nv = ch.ctx->names.size();
    if (arc.weights.size() != nv) throw std::invalid_argument("arc weight length mismatch");
    CtxPtr tctx = make_ctx({"t"});
    std::vector<Polynomial> images;
    for (size_t i = 0; i < nv; ++i) {
        Rational c = arc.coeffs.empty() ? Rational(1) : arc.coeffs[i];
        Expo e{arc.weights[i]};
        images.push_back(Polynomial::monomial(tctx, e, c));
    }
    std::optional<long> best;
    for (const auto& [I, m] : f.comps) {
        Polynomial num = m.num().substitute(images, tctx);
        if (num.is_zero()) continue;
        long ord_num = num.terms().begin()->first[0]; // lowest t power (sorted map)
        long ord_den = 0;
        for (size_t i = 0; i < nv; ++i) ord_den += static_cast<long>(m.den()[i]) * arc.weights[i];
        long ord = ord_num - ord_den;
        for (int i : I) ord += arc.weights[i];
        if (!best || ord < *best) best = ord;
    }
    return best;
}

std::optional<bool> refute_by_arc(const Variety& X, const DiffForm& omega,
                                  const std::vector<DiffForm>& gens, const ArcSpec& arc) {
    auto ow = arc_order(X, omega, arc);
    std::optional<long> gmin;
    for (const auto& g : gens) {
        auto og = arc_order(X, g, arc);
        if (og && (!gmin || *og < *gmin)) gmin = og;
    }
    if (!ow && !gmin) return std::nullopt; // arc kills everything: no verdict
    if (!ow) return false;                 // omega dies, generators do not: no obstruction
    if (!gmin) return std::nullopt;
    return *ow < *gmin;
}

std::vector<ArcSpec> stock_arcs(const Variety& X) {
    std::vector<ArcSpec> out;
    const Chart* cc = X.cover_chart();
    if (!cc) return out;
    size_t nv = cc->ctx->names.size();
    ArcSpec diag;
    diag.description = "diagonal arc on the cover";
    diag.coords = Coords::Parameter;
    diag.weights.assign(nv, 1);
    out.push_back(diag);
    for (size_t i = 0; i < nv && nv > 1; ++i) {
        ArcSpec axis;
        axis.description = "axis arc on the cover: " + cc->ctx->names[i];
        axis.coords = Coords::Parameter;
        axis.weights.assign(nv, 0);
        axis.weights[i] = 1;
        out.push_back(axis);
    }
    return out;
}

std::string to_string(AlphaLevel l) {
    switch (l) {
        case AlphaLevel::InOmegaTorsionFree: return "InOmegaTorsionFree";
        case AlphaLevel::InAlphaCertified: return "InAlphaCertified";
        case AlphaLevel::InAlphaDecidedMonomial: return "InAlphaDecidedMonomial";
        case AlphaLevel::NotInAlphaRefuted: return "NotInAlphaRefuted";
        case AlphaLevel::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

struct MonomialData {
    std::vector<int> tuple; // cover differential indices
    Expo expo;              // coefficient Laurent exponent
};

std::optional<MonomialData> as_monomial(const DiffForm& cover_form) {
    if (cover_form.comps.size() != 1) return std::nullopt;
    const auto& [I, m] = *cover_form.comps.begin();
    if (!m.num().is_monomial()) return std::nullopt;
    MonomialData d;
    d.tuple = I;
    d.expo = expo_sub(m.num().terms().begin()->first, m.den());
    return d;
}

QVec to_qvec(const Expo& e) {
    QVec v;
    for (int x : e) v.push_back(Rational(x));
    return v;
}

} // namespace

MembershipVerdict decide_monomial(const Variety& X, const DiffForm& omega) {
    if (!X.parametrized() || X.monoid_gens().empty())
        throw std::invalid_argument("decide_monomial needs a monomial parametrization");
    DiffForm w = X.to_cover(X.to_canonical(omega));
    auto cand = as_monomial(w);
    if (!cand) throw std::invalid_argument("decide_monomial: form is not monomial");
    if (!X.deck_invariant(w))
        return {AlphaLevel::NotInAlphaRefuted, "not deck-invariant", std::nullopt, ""};

    // generators of the same species (same basis tuple)
    std::vector<QVec> hull;
    int max_entry = 2;
    for (const auto& g : X.omega_torsionfree(w.q)) {
        auto gm = as_monomial(g);
        if (!gm) throw std::invalid_argument("decide_monomial: torsion-free generators are not monomial");
        if (gm->tuple == cand->tuple) {
            hull.push_back(to_qvec(gm->expo));
            for (int x : gm->expo) max_entry = std::max(max_entry, std::abs(x));
        }
    }
    std::vector<QVec> rays;
    for (const auto& r : X.monoid_gens()) rays.push_back(to_qvec(r));
    QVec p = to_qvec(cand->expo);
    for (int x : cand->expo) max_entry = std::max(max_entry, std::abs(x));

    bool lp = hull_cone_member_lp(p, hull, rays);
    bool en = hull_cone_member_enum(p, hull, rays);
    if (lp != en) throw std::logic_error("Newton polyhedron deciders disagree; this is a bug");

    if (lp) {
        return {AlphaLevel::InAlphaDecidedMonomial,
                "exponent lies in the Newton polyhedron of the torsion-free generators", std::nullopt, ""};
    }
    auto sep = separating_weights(p, hull, rays, max_entry + 2);
    MembershipVerdict v;
    v.level = AlphaLevel::NotInAlphaRefuted;
    v.evidence = "separating weight vector";
    if (sep) {
        ArcSpec arc;
        arc.coords = Coords::Parameter;
        arc.weights = *sep;
        arc.description = "arc from separating weights";
        v.arc = std::move(arc);
    } else {
        v.notes = "no small integer separating weight found; LP verdict stands";
    }
    return v;
}

namespace {

// degree vector of a multihomogeneous cover form (coefficient exponent plus 1
// per differential index); nullopt when terms disagree
std::optional<Expo> degree_vector(const DiffForm& f, int nv) {
    std::optional<Expo> dv;
    for (const auto& [I, m] : f.comps) {
        for (const auto& [e, c] : m.num().terms()) {
            (void)c;
            Expo d = expo_sub(e, m.den());
            for (int i : I) d[i] += 1;
            if (!dv) dv = d;
            else if (*dv != d) return std::nullopt;
        }
    }
    if (!dv) dv = Expo(nv, 0);
    return dv;
}

bool nonneg(const Expo& e) {
    for (int x : e)
        if (x < 0) return false;
    return true;
}

} // namespace

std::optional<DependenceCertificate> search_degree2_certificate(const Variety& X, const DiffForm& omega) {
    if (!X.parametrized()) return std::nullopt;
    const Chart& cc = *X.cover_chart();
    int nv = cc.dim();
    DiffForm w = X.to_cover(X.to_canonical(omega));
    auto wd = degree_vector(w, nv);
    if (!wd) return std::nullopt;

    std::vector<DiffForm> gens = X.omega_torsionfree(w.q);
    std::vector<Expo> gd;
    for (const auto& g : gens) {
        auto d = degree_vector(g, nv);
        if (!d) return std::nullopt;
        gd.push_back(*d);
    }

    SymElement w2 = sym_mul(sym_of_form(w), sym_of_form(w));
    auto coeff_ok = [&](const Expo& mu) { return nonneg(mu) && X.class_of(mu) == 0; };

    // P(w) = w^2 + c1 t^mu1 g_i w + c2 t^mu2 g_j g_l = 0, unknown rational c1, c2
    for (size_t pick = 0; pick <= gens.size(); ++pick) {
        bool use_s1 = pick < gens.size();
        size_t i = pick;
        Expo mu1;
        SymElement A1;
        if (use_s1) {
            mu1 = expo_sub(*wd, gd[i]);
            if (!coeff_ok(mu1)) continue;
            A1 = sym_mul(sym_of_form(w),
                         sym_scale(sym_of_form(gens[i]), MeroFunction(Polynomial::monomial(cc.ctx, mu1))));
        }
        for (size_t j = 0; j < gens.size(); ++j) {
            for (size_t l = j; l < gens.size(); ++l) {
                Expo mu2 = expo_sub(expo_sub(expo_add(*wd, *wd), gd[j]), gd[l]);
                if (!coeff_ok(mu2)) continue;
                SymElement A2 = sym_scale(sym_mul(sym_of_form(gens[j]), sym_of_form(gens[l])),
                                          MeroFunction(Polynomial::monomial(cc.ctx, mu2)));

                // one linear equation per Sym basis key; quasi-homogeneity makes
                // every entry a single monomial with a shared exponent per key
                std::map<std::vector<std::vector<int>>, std::array<MeroFunction, 3>> rows;
                auto note = [&](const SymElement& s, int slot) {
                    for (const auto& [k, m] : s.terms) rows[k][slot] = m;
                };
                note(w2, 0);
                if (use_s1) note(A1, 1);
                note(A2, 2);

                std::vector<std::array<Rational, 3>> eqs;
                bool bad = false;
                for (auto& [key, r] : rows) {
                    (void)key;
                    const MeroFunction* ref = nullptr;
                    for (int s = 0; s < 3 && !ref; ++s)
                        if (!r[s].is_zero()) ref = &r[s];
                    if (!ref) continue;
                    std::array<Rational, 3> row{Rational(0), Rational(0), Rational(0)};
                    for (int s = 0; s < 3; ++s) {
                        if (r[s].is_zero()) continue;
                        if (!r[s].num().is_monomial()) { bad = true; break; }
                        Expo es = expo_sub(r[s].num().terms().begin()->first, r[s].den());
                        Expo er = expo_sub(ref->num().terms().begin()->first, ref->den());
                        if (es != er) { bad = true; break; }
                        row[s] = r[s].num().terms().begin()->second / ref->num().terms().begin()->second;
                    }
                    if (bad) break;
                    eqs.push_back(row);
                }
                if (bad || eqs.empty()) continue;

                // exact solve for (c1, c2) with full consistency check
                Rational c1(0), c2(0);
                {
                    std::vector<std::array<Rational, 3>> sys; // a*c1 + b*c2 = rhs
                    for (const auto& r : eqs)
                        sys.push_back({use_s1 ? r[1] : Rational(0), r[2], -r[0]});
                    // echelon on two columns
                    int p1 = -1;
                    for (size_t r = 0; r < sys.size(); ++r)
                        if (!sys[r][0].is_zero()) { p1 = static_cast<int>(r); break; }
                    if (p1 >= 0) {
                        auto piv = sys[p1];
                        for (size_t r = 0; r < sys.size(); ++r) {
                            if (static_cast<int>(r) == p1 || sys[r][0].is_zero()) continue;
                            Rational f = sys[r][0] / piv[0];
                            for (int s = 0; s < 3; ++s) sys[r][s] -= f * piv[s];
                        }
                    }
                    int p2 = -1;
                    for (size_t r = 0; r < sys.size(); ++r)
                        if (static_cast<int>(r) != p1 && !sys[r][1].is_zero()) { p2 = static_cast<int>(r); break; }
                    if (p2 >= 0) c2 = sys[p2][2] / sys[p2][1];
                    if (p1 >= 0) c1 = (sys[p1][2] - sys[p1][1] * c2) / sys[p1][0];
                }
                bool consistent = true;
                for (const auto& r : eqs)
                    if (!(r[0] + c1 * r[1] + c2 * r[2]).is_zero()) { consistent = false; break; }
                if (!consistent) continue;
                if (c2.is_zero() && c1.is_zero()) continue; // w^2 = 0 handled elsewhere

                DependenceCertificate cert;
                cert.degree = 2;
                auto bind_name = [](size_t gi) { return "tf" + std::to_string(gi); };
                std::vector<size_t> used = {j, l};
                if (use_s1 && !c1.is_zero()) used.push_back(i);
                std::sort(used.begin(), used.end());
                used.erase(std::unique(used.begin(), used.end()), used.end());
                for (size_t gi : used)
                    cert.bindings.emplace_back(bind_name(gi), X.print(X.to_ambient(gens[gi])));
                auto scalar_text = [&](const Expo& mu, const Rational& c) {
                    MeroFunction amb = X.mero_cover_to_ambient(
                        MeroFunction(Polynomial::monomial(cc.ctx, mu, c)));
                    DiffForm f0 = form_zero(0, Coords::Ambient);
                    f0.add({}, amb);
                    return print_form(f0, X.ambient_chart());
                };
                if (use_s1 && !c1.is_zero()) {
                    DependenceCertificate::Term t;
                    t.coeff_text = scalar_text(mu1, c1);
                    t.factors = {bind_name(i)};
                    cert.parts[1].push_back(std::move(t));
                }
                if (!c2.is_zero()) {
                    DependenceCertificate::Term t;
                    t.coeff_text = scalar_text(mu2, c2);
                    t.factors = {bind_name(j), bind_name(l)};
                    cert.parts[2].push_back(std::move(t));
                }
                CertCheck chk = verify_certificate(X, omega, cert);
                if (chk.ok) return cert;
            }
        }
    }
    return std::nullopt;
}

MembershipVerdict classify_alpha(const Variety& X, const DiffForm& omega,
                                 const DependenceCertificate* cert) {
    DiffForm amb = X.to_ambient(omega);
    const FormModule& om = X.omega_module(amb.q);
    if (om.contains(amb).member)
        return {AlphaLevel::InOmegaTorsionFree, "torsion-free module membership", std::nullopt, ""};
    if (cert) {
        CertCheck c = verify_certificate(X, omega, *cert);
        if (c.ok) return {AlphaLevel::InAlphaCertified, "supplied certificate verifies", std::nullopt, ""};
    }
    if (X.parametrized() && !X.monoid_gens().empty()) {
        bool monomial_setting = true;
        for (const auto& g : X.omega_torsionfree(amb.q))
            if (!as_monomial(g)) monomial_setting = false;
        DiffForm cov = X.to_cover(amb);
        if (monomial_setting && as_monomial(cov)) {
            return decide_monomial(X, cov);
        }
        if (search_degree2_certificate(X, omega))
            return {AlphaLevel::InAlphaCertified, "degree-2 certificate found by bounded search",
                    std::nullopt, ""};
    }
    // stock refutation arcs against the torsion-free generators
    std::vector<DiffForm> gens;
    for (const auto& g : om.gens()) gens.push_back(g);
    for (const auto& arc : stock_arcs(X)) {
        auto r = refute_by_arc(X, omega, gens, arc);
        if (r && *r) {
            MembershipVerdict v;
            v.level = AlphaLevel::NotInAlphaRefuted;
            v.evidence = arc.description;
            v.arc = arc;
            return v;
        }
    }
    MembershipVerdict v;
    v.level = AlphaLevel::Unknown;
    v.notes = "no certificate supplied and no decision procedure applies";
    return v;
}

std::vector<DiffForm> alpha_sweep_candidates(const Variety& X, int q) {
    std::vector<DiffForm> out;
    if (!X.parametrized() || X.monoid_gens().empty()) return out;
    const Chart& cc = *X.cover_chart();
    int nv = cc.dim();

    Expo box(nv, 0);
    auto grow = [&](const DiffForm& g) {
        for (const auto& [I, m] : g.comps) {
            (void)I;
            for (const auto& [e, c] : m.num().terms()) {
                (void)c;
                box = expo_lcm(box, expo_sub(e, m.den()));
            }
        }
    };
    for (const auto& g : X.omega_torsionfree(q)) grow(g);
    for (const auto& g : X.L_cover_generators(q)) grow(g);
    Expo monoid_max(nv, 0);
    for (const auto& g : X.monoid_gens()) monoid_max = expo_lcm(monoid_max, g);
    box = expo_add(box, monoid_max);

    struct Cand {
        int totdeg;
        Expo e;
        std::vector<int> tuple;
    };
    std::vector<Cand> cands;
    for (const auto& I : basis_tuples(cc, q)) {
        int cls = X.class_of_tuple(I);
        Expo e(nv, 0);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == nv) {
                if ((X.class_of(e) + cls) % X.deck_order() != 0) return;
                cands.push_back({total_degree(e), e, I});
                return;
            }
            for (int x = 0; x <= box[pos]; ++x) {
                e[pos] = x;
                rec(pos + 1);
            }
            e[pos] = 0;
        };
        rec(0);
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.totdeg != b.totdeg) return a.totdeg < b.totdeg;
        if (a.e != b.e) return a.e < b.e;
        return a.tuple < b.tuple;
    });
    for (const auto& c : cands) {
        DiffForm f = form_zero(q, Coords::Parameter);
        f.add(c.tuple, MeroFunction(Polynomial::monomial(cc.ctx, c.e)));
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<DiffForm> alpha_seed(const Variety& X, int q) {
    std::vector<DiffForm> gens;
    for (const auto& g : X.omega_torsionfree(q)) gens.push_back(X.to_canonical(g));
    if (X.has_declared_seeds()) {
        for (const auto& g : X.alpha_seed_declared(q)) gens.push_back(X.to_canonical(g));
        return gens;
    }
    if (!X.parametrized() || X.monoid_gens().empty()) return gens;

    bool monomial_setting = true;
    for (const auto& g : X.omega_torsionfree(q))
        if (!as_monomial(g)) monomial_setting = false;

    std::vector<DiffForm> kept_ambient;
    for (const auto& g : gens) kept_ambient.push_back(X.to_ambient(g));

    for (const auto& cand : alpha_sweep_candidates(X, q)) {
        DiffForm amb = X.to_ambient(cand);
        FormModule current(&X.ambient_chart(), q, kept_ambient);
        if (current.contains(amb).member) continue;
        bool in_alpha = false;
        if (monomial_setting) {
            in_alpha = decide_monomial(X, cand).level == AlphaLevel::InAlphaDecidedMonomial;
        } else {
            in_alpha = search_degree2_certificate(X, cand).has_value();
        }
        if (in_alpha) {
            kept_ambient.push_back(amb);
            gens.push_back(X.to_canonical(cand));
        }
    }
    return gens;
}

} // namespace betaforms
