#include "core/beta.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace betaforms {

std::string to_string(Rung r) {
    switch (r) {
        case Rung::Yes: return "yes";
        case Rung::No: return "no";
        case Rung::Unknown: return "unknown";
    }
    return "?";
}

namespace {

// lift a form on the factor of A x C to the product (the disc coordinate is
// appended at the end of both variable lists, so indices are stable)
DiffForm lift_to_product(const Variety& prod, const Variety& factor, const DiffForm& f) {
    const Chart& from = factor.chart_for(f.coords);
    const Chart& to = prod.chart_for(f.coords);
    int nn = static_cast<int>(to.ctx->names.size());
    std::vector<int> varmap;
    for (const auto& name : from.ctx->names) {
        int i = to.ctx->index_of(name);
        if (i < 0) throw std::logic_error("product lift: missing variable " + name);
        varmap.push_back(i);
    }
    DiffForm out = form_zero(f.q, f.coords);
    for (const auto& [I, m] : f.comps) {
        Polynomial num = Polynomial::zero(to.ctx);
        for (const auto& [e, c] : m.num().terms()) {
            Expo ne(nn, 0);
            for (size_t i = 0; i < e.size(); ++i) ne[varmap[i]] = e[i];
            num.add_term(ne, c);
        }
        Expo den(nn, 0);
        for (size_t i = 0; i < m.den().size(); ++i) den[varmap[i]] = m.den()[i];
        std::vector<int> key;
        for (int i : I) key.push_back(varmap[i]);
        std::sort(key.begin(), key.end());
        out.add(key, MeroFunction(std::move(num), std::move(den)));
    }
    return out;
}

} // namespace

bool BetaEngine::seeds_complete(const VarietyPtr& X) const {
    if (X->is_product()) {
        VarietyPtr a = reg_.find(X->data().product_factor);
        return a && seeds_complete(a);
    }
    return !X->has_declared_seeds();
}

const GradedGeneratorSet& BetaEngine::seed(const VarietyPtr& X, int q) {
    return alpha_level(X, q, 0);
}

std::vector<DiffForm> BetaEngine::ambient_gens(const VarietyPtr& X, const GradedGeneratorSet& s) const {
    std::vector<DiffForm> out;
    out.reserve(s.gens.size());
    for (const auto& g : s.gens) out.push_back(X->to_ambient(g));
    return out;
}

FormModule BetaEngine::module_of(const VarietyPtr& X, const GradedGeneratorSet& s) const {
    return FormModule(&X->ambient_chart(), s.q, ambient_gens(X, s));
}

const GradedGeneratorSet& BetaEngine::alpha_level(const VarietyPtr& X, int q, int p) {
    if (q < 0 || q > X->dim()) throw std::invalid_argument("degree out of range");
    if (p < 0) p = 0;
    auto key = std::make_tuple(X->id(), q, p);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = levels_.find(key);
        if (it != levels_.end()) return it->second;
    }
    GradedGeneratorSet s = build_level(X, q, p);
    std::lock_guard<std::mutex> lk(mu_);
    auto [pos, ok] = levels_.emplace(key, std::move(s));
    (void)ok;
    return pos->second;
}

GradedGeneratorSet BetaEngine::build_level(const VarietyPtr& X, int q, int p) {
    GradedGeneratorSet out;
    out.variety = X->id();
    out.q = q;
    out.level = p;

    if (p == 0) {
        if (X->is_product()) {
            VarietyPtr a = reg_.get(X->data().product_factor);
            // product rule: alpha^q(A x C) = alpha^q(A) + alpha^{q-1}(A) ^ dv
            const Chart& pc = X->canonical_chart();
            int disc = pc.ctx->index_of(X->data().product_disc);
            if (disc < 0) throw std::logic_error("product disc coordinate missing from chart");
            DiffForm dv = form_dvar(pc, disc);
            dv.coords = pc.coords;
            if (q <= a->dim()) {
                const GradedGeneratorSet& sa = seed(a, q);
                for (size_t i = 0; i < sa.gens.size(); ++i) {
                    out.gens.push_back(X->to_canonical(lift_to_product(*X, *a, sa.gens[i])));
                    out.provenance.push_back("factor:" + sa.provenance[i]);
                }
            }
            if (q >= 1 && q - 1 <= a->dim()) {
                const GradedGeneratorSet& sa = seed(a, q - 1);
                for (size_t i = 0; i < sa.gens.size(); ++i) {
                    DiffForm lifted = X->to_canonical(lift_to_product(*X, *a, sa.gens[i]));
                    out.gens.push_back(wedge(pc, lifted, dv));
                    out.provenance.push_back("factor:" + sa.provenance[i] + "^d" +
                                             X->data().product_disc);
                }
            }
            return out;
        }
        std::vector<DiffForm> omega = X->omega_torsionfree(q);
        std::vector<DiffForm> gens = alpha_seed(*X, q);
        for (size_t i = 0; i < gens.size(); ++i) {
            out.gens.push_back(gens[i]);
            out.provenance.push_back(i < omega.size() ? "omega" : "alpha-seed");
        }
        return out;
    }

    // level p from level p-1 across the degrees r <= q
    const Chart& ch = X->canonical_chart();
    std::vector<const GradedGeneratorSet*> lower(q + 1);
    for (int r = 0; r <= q; ++r) lower[r] = &alpha_level(X, r, p - 1);

    struct Cand {
        DiffForm f;
        std::string prov;
    };
    std::vector<Cand> cands;
    // carry the previous level first (monotonicity by construction)
    for (size_t i = 0; i < lower[q]->gens.size(); ++i)
        cands.push_back({lower[q]->gens[i], lower[q]->provenance[i]});
    for (int r = 0; r <= q; ++r) {
        const auto& A = *lower[r];
        const auto& B = *lower[q - r];
        for (size_t i = 0; i < A.gens.size(); ++i)
            for (size_t j = 0; j < B.gens.size(); ++j) {
                DiffForm w = wedge(ch, A.gens[i], B.gens[j]);
                if (w.is_zero()) continue;
                std::ostringstream prov;
                prov << "wedge(" << r << ":" << i << "," << q - r << ":" << j << ")";
                cands.push_back({std::move(w), prov.str()});
            }
    }
    for (int r = 0; r <= q - 1; ++r) {
        const auto& A = *lower[r];
        const auto& B = *lower[q - r - 1];
        for (size_t i = 0; i < A.gens.size(); ++i)
            for (size_t j = 0; j < B.gens.size(); ++j) {
                DiffForm db = exterior_d(ch, B.gens[j]);
                if (db.is_zero()) continue;
                DiffForm w = wedge(ch, A.gens[i], db);
                if (w.is_zero()) continue;
                std::ostringstream prov;
                prov << "g^dg(" << r << ":" << i << "," << q - r - 1 << ":" << j << ")";
                cands.push_back({std::move(w), prov.str()});
            }
    }

    GradedGeneratorSet out2;
    out2.variety = X->id();
    out2.q = q;
    out2.level = p;
    std::vector<DiffForm> kept_ambient;
    for (const auto& c : cands) {
        DiffForm amb = X->to_ambient(c.f);
        if (!kept_ambient.empty()) {
            FormModule current(&X->ambient_chart(), q, kept_ambient);
            if (current.contains(amb).member) continue;
        } else if (amb.is_zero()) {
            continue;
        }
        kept_ambient.push_back(std::move(amb));
        out2.gens.push_back(c.f);
        out2.provenance.push_back(c.prov);
    }
    return out2;
}

BetaResult BetaEngine::beta(const VarietyPtr& X, int q, int cap) {
    if (cap < 0) cap = q + 2;
    if (cap < q) throw std::invalid_argument("level cap must be at least q");

    // iterate jointly over degrees <= q until all stabilize from P to P+1
    int stable_at = -1;
    for (int p = 0; p <= cap; ++p) {
        bool all_equal = true;
        for (int r = q; r >= 0 && all_equal; --r) {
            const GradedGeneratorSet& cur = alpha_level(X, r, p);
            const GradedGeneratorSet& nxt = alpha_level(X, r, p + 1);
            FormModule mc = module_of(X, cur);
            FormModule mn = module_of(X, nxt);
            if (!mc.equals(mn)) all_equal = false;
        }
        if (all_equal) {
            stable_at = p;
            break;
        }
    }
    if (stable_at < 0)
        throw std::runtime_error("no stabilization of the level recursion by the cap on " + X->id() +
                                 " at degree " + std::to_string(q) +
                                 "; this contradicts the filtration bound and indicates an invalid seed");

    FormModule stable = module_of(X, alpha_level(X, q, stable_at));
    int pstar = stable_at;
    for (int p = 0; p <= stable_at; ++p) {
        if (module_of(X, alpha_level(X, q, p)).equals(stable)) {
            pstar = p;
            break;
        }
    }
    int bound = X->normal() && q >= 1 ? std::max(q - 1, 0) : q;
    if (pstar > bound)
        throw std::runtime_error("stabilization level " + std::to_string(pstar) + " exceeds the bound " +
                                 std::to_string(bound) + " on " + X->id());

    BetaResult res;
    res.gens = alpha_level(X, q, pstar);
    res.gens.level = pstar;
    res.pstar = pstar;
    return res;
}

ClassificationReport BetaEngine::classify(const VarietyPtr& X, const DiffForm& f,
                                          const DependenceCertificate* cert, int cap) {
    ClassificationReport rep;
    rep.variety = X->id();
    rep.q = f.q;
    rep.form_text = X->print(f);
    if (cap < 0) cap = f.q + 2;
    rep.level_cap = cap;

    DiffForm amb = X->to_ambient(f);
    bool complete = seeds_complete(X);

    rep.in_omega = X->omega_module(f.q).contains(amb).member ? Rung::Yes : Rung::No;

    if (rep.in_omega == Rung::Yes) {
        rep.in_alpha = Rung::Yes;
        rep.alpha_evidence = "torsion-free module membership";
    } else {
        FormModule alpha0 = module_of(X, seed(X, f.q));
        if (alpha0.contains(amb).member) {
            rep.in_alpha = Rung::Yes;
            rep.alpha_evidence = "membership in the alpha generator module";
        } else {
            MembershipVerdict v = classify_alpha(*X, f, cert);
            switch (v.level) {
                case AlphaLevel::InOmegaTorsionFree:
                case AlphaLevel::InAlphaCertified:
                case AlphaLevel::InAlphaDecidedMonomial:
                    rep.in_alpha = Rung::Yes;
                    rep.alpha_evidence = v.evidence;
                    break;
                case AlphaLevel::NotInAlphaRefuted:
                    rep.in_alpha = Rung::No;
                    rep.alpha_evidence = v.evidence;
                    break;
                case AlphaLevel::Unknown:
                    rep.in_alpha = complete ? Rung::No : Rung::Unknown;
                    rep.alpha_evidence = complete ? "not in the computed (complete) alpha module"
                                                  : "declared seeds only: " + v.notes;
                    break;
            }
        }
    }

    BetaResult b = beta(X, f.q, cap);
    FormModule bm = module_of(X, b.gens);
    bool in_beta_module = bm.contains(amb).member;
    if (in_beta_module) {
        rep.in_beta = Rung::Yes;
        rep.beta_evidence = "membership in the stabilized level module (p* = " +
                            std::to_string(b.pstar) + ")";
        for (int p = 0; p <= b.pstar; ++p) {
            if (module_of(X, alpha_level(X, f.q, p)).contains(amb).member) {
                rep.min_level = p;
                break;
            }
        }
    } else {
        rep.in_beta = complete ? Rung::No : Rung::Unknown;
        rep.beta_evidence = complete ? "not in the computed beta module"
                                     : "not in the module generated by the declared levels";
    }

    auto L = X->L_contains(f);
    if (L.has_value()) {
        rep.in_L = *L ? Rung::Yes : Rung::No;
        rep.L_evidence = X->parametrized() ? "holomorphic deck-invariant pullback test"
                                           : "declared L presentation membership";
    } else {
        rep.in_L = Rung::Unknown;
        rep.L_evidence = "no L data for this variety";
    }

    // ladder monotonicity: yes at a rung implies yes above it
    if (rep.in_alpha == Rung::Yes && rep.in_beta == Rung::No)
        throw std::logic_error("inconsistent ladder: alpha yes but beta no");
    if (rep.in_beta == Rung::Yes && rep.in_L == Rung::No)
        throw std::logic_error("inconsistent ladder: beta yes but L no");
    return rep;
}

PullbackLevelReport BetaEngine::check_pullback_levels(const MapSpec& f, int max_level) {
    PullbackLevelReport rep;
    rep.map_name = f.name;
    int qmax = std::min(f.source->dim(), f.target->dim());
    for (int p = 0; p <= max_level; ++p) {
        for (int q = 0; q <= qmax; ++q) {
            const GradedGeneratorSet& tgt = alpha_level(f.target, q, p);
            FormModule src = module_of(f.source, alpha_level(f.source, q, p));
            for (size_t i = 0; i < tgt.gens.size(); ++i) {
                DiffForm pulled = pullback(f, tgt.gens[i]);
                bool ok = pulled.is_zero() || src.contains(f.source->to_ambient(pulled)).member;
                rep.rows.push_back({p, f.target->print(tgt.gens[i]), ok});
                if (!ok) rep.all_preserved = false;
            }
        }
    }
    // wedge/d commutation on the level-0 generators
    const Chart& sc = f.source->canonical_chart();
    const Chart& tc = f.target->canonical_chart();
    for (int q = 1; q <= qmax; ++q) {
        const GradedGeneratorSet& tgt = alpha_level(f.target, q, 0);
        for (const auto& g : tgt.gens) {
            DiffForm dg = exterior_d(tc, g);
            if (f.target->dim() >= g.q + 1) {
                DiffForm lhs = pullback(f, dg);
                DiffForm rhs = exterior_d(sc, pullback(f, g));
                if (!form_equal(sc, lhs, rhs)) rep.wedge_d_commute = false;
            }
            for (const auto& h : alpha_level(f.target, 0, 0).gens) {
                DiffForm lhs = pullback(f, wedge(tc, h, g));
                DiffForm rhs = wedge(sc, pullback(f, h), pullback(f, g));
                if (!form_equal(sc, lhs, rhs)) rep.wedge_d_commute = false;
            }
        }
    }
    return rep;
}

} // namespace betaforms
