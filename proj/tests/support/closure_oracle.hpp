#pragma once

// Independent brute-force oracle for the monomial integral-dependence
// decision. No Newton polyhedra, no linear programming, no symmetric-algebra
// machinery: a candidate passes iff some bounded-degree pure relation
//   omega^h = (monoid monomial) * g_{i1} ... g_{ih}
// exists over same-species monomial generators, where monoid membership is
// decided by exhaustive non-negative integer combinations.

#include "core/closure.hpp"

#include "oracles.hpp"
#include "core/variety.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace tst {

using namespace betaforms;

// m = sum n_i * gens_i with n_i >= 0 integers, by depth-first search
inline bool oracle_in_monoid(const Expo& m, const std::vector<Expo>& gens) {
    for (int x : m)
        if (x < 0) return false;
    if (total_degree(m) == 0) return true;
    std::function<bool(size_t, Expo)> rec = [&](size_t i, Expo rest) -> bool {
        for (int x : rest)
            if (x < 0) return false;
        if (total_degree(rest) == 0) return true;
        if (i == gens.size()) return false;
        const Expo& g = gens[i];
        int cap = 0;
        for (size_t j = 0; j < rest.size(); ++j)
            if (g[j] > 0) cap = std::max(cap, rest[j] / g[j] + 1);
        if (total_degree(g) == 0) return rec(i + 1, rest);
        for (int n = 0; n <= cap; ++n) {
            Expo r2 = rest;
            bool neg = false;
            for (size_t j = 0; j < r2.size(); ++j) {
                r2[j] -= n * g[j];
                if (r2[j] < 0) neg = true;
            }
            if (!neg && rec(i + 1, r2)) return true;
            if (neg) break;
        }
        return false;
    };
    return rec(0, m);
}

struct OracleQuery {
    std::vector<int> tuple;
    Expo expo;
};

inline std::optional<OracleQuery> oracle_monomial_data(const Variety& X, const DiffForm& cover_form) {
    if (cover_form.comps.size() != 1) return std::nullopt;
    const auto& [I, m] = *cover_form.comps.begin();
    if (!m.num().is_monomial()) return std::nullopt;
    OracleQuery q;
    q.tuple = I;
    q.expo = expo_sub(m.num().terms().begin()->first, m.den());
    (void)X;
    return q;
}

// --- mixed-generator oracle for 1-form candidates --------------------------
// Symmetric squares expanded by hand over (component, component) keys; the
// scalar unknowns are recovered from row ratios and the relation is then
// re-expanded and checked as a full polynomial identity.

using Sym2 = std::map<std::pair<int, int>, Polynomial>;

inline std::map<int, Polynomial> oracle_components(const DiffForm& f, const CtxPtr& ctx) {
    std::map<int, Polynomial> out;
    for (const auto& [I, m] : f.comps) {
        if (I.size() != 1) throw std::invalid_argument("oracle: expected a 1-form");
        if (m.has_denominator()) throw std::invalid_argument("oracle: expected holomorphic data");
        out[I[0]] = m.num();
    }
    (void)ctx;
    return out;
}

inline Sym2 oracle_sym2(const std::map<int, Polynomial>& A, const std::map<int, Polynomial>& B,
                        const CtxPtr& ctx) {
    Sym2 out;
    for (const auto& [i, p] : A) {
        for (const auto& [j, q] : B) {
            auto key = std::minmax(i, j);
            auto it = out.find(key);
            if (it == out.end()) out.emplace(key, p * q);
            else it->second += p * q;
        }
    }
    (void)ctx;
    return out;
}

inline Sym2 oracle_sym2_scale(Sym2 s, const Polynomial& c) {
    for (auto& [k, p] : s) p = p * c;
    return s;
}

inline Sym2 oracle_sym2_add(Sym2 a, const Sym2& b) {
    for (const auto& [k, p] : b) {
        auto it = a.find(k);
        if (it == a.end()) a.emplace(k, p);
        else it->second += p;
    }
    return a;
}

inline bool oracle_sym2_zero(const Sym2& s) {
    for (const auto& [k, p] : s) {
        (void)k;
        if (!p.is_zero()) return false;
    }
    return true;
}

inline std::optional<Expo> oracle_degree_vector(const std::map<int, Polynomial>& comps, int nv) {
    (void)nv;
    std::optional<Expo> dv;
    for (const auto& [i, p] : comps) {
        for (const auto& [e, c] : p.terms()) {
            (void)c;
            Expo d = e;
            d[i] += 1;
            if (!dv) dv = d;
            else if (*dv != d) return std::nullopt;
        }
    }
    return dv;
}

// degree-1 dependence (module membership, decided by a truncated-degree
// linear solve over the cover for deck-invariant data) or single-term
// degree-2 dependence over the torsion-free generators, mixed components
// allowed
inline bool oracle_in_alpha_deg2(const Variety& X, const DiffForm& candidate) {
    const Chart& cc = *X.cover_chart();
    int nv = cc.dim();
    DiffForm cov = X.to_cover(X.to_canonical(candidate));
    if (!X.deck_invariant(cov)) return false;
    auto W = oracle_components(cov, cc.ctx);
    auto Wd = oracle_degree_vector(W, nv);
    if (!Wd) return false;

    std::vector<std::map<int, Polynomial>> gens;
    std::vector<Expo> gd;
    for (const auto& g : X.omega_torsionfree(cov.q)) {
        auto comps = oracle_components(g, cc.ctx);
        auto d = oracle_degree_vector(comps, nv);
        if (!d) return false;
        gens.push_back(std::move(comps));
        gd.push_back(*d);
    }
    const std::vector<Expo>& monoid = X.monoid_gens();

    // degree 1: module membership over the cover ring (valid for invariant
    // data on a quotient cover), via exact truncated linear algebra
    {
        int ncomp = nv;
        auto to_vec = [&](const std::map<int, Polynomial>& comps) {
            ModVec v = modvec_zero(cc.ctx, ncomp);
            for (const auto& [c, p] : comps) v.comp[c] = p;
            return v;
        };
        ModVec target = to_vec(W);
        std::vector<ModVec> gvecs;
        for (const auto& g : gens) gvecs.push_back(to_vec(g));
        int maxdeg = total_degree(*Wd) + 2;
        if (oracle_linalg_membership(target, gvecs, {}, cc.ctx, ncomp, maxdeg)) return true;
    }

    // degree 2: W^2 + c1 m1 g_i W + c2 m2 g_j g_l = 0
    Sym2 W2 = oracle_sym2(W, W, cc.ctx);
    for (size_t i = 0; i <= gens.size(); ++i) {
        bool use1 = i < gens.size();
        Expo m1;
        Sym2 A1;
        if (use1) {
            m1 = expo_sub(*Wd, gd[i]);
            if (!oracle_in_monoid(m1, monoid)) continue;
            std::map<int, Polynomial> gi;
            for (const auto& [c, p] : gens[i]) gi[c] = p.mul_term(m1, Rational(1));
            A1 = oracle_sym2(gi, W, cc.ctx);
        }
        for (size_t j = 0; j < gens.size(); ++j) {
            for (size_t l = j; l < gens.size(); ++l) {
                Expo m2 = expo_sub(expo_sub(expo_add(*Wd, *Wd), gd[j]), gd[l]);
                if (!oracle_in_monoid(m2, monoid)) continue;
                std::map<int, Polynomial> gj;
                for (const auto& [c, p] : gens[j]) gj[c] = p.mul_term(m2, Rational(1));
                Sym2 A2 = oracle_sym2(gj, gens[l], cc.ctx);

                // collect scalar rows (key, monomial) -> (w, a, b)
                struct Row {
                    Rational w, a, b;
                };
                std::map<std::pair<std::pair<int, int>, Expo>, Row> rows;
                auto note = [&](const Sym2& s, int slot) {
                    for (const auto& [k, p] : s)
                        for (const auto& [e, c] : p.terms()) {
                            Row& r = rows[{k, e}];
                            (slot == 0 ? r.w : slot == 1 ? r.a : r.b) += c;
                        }
                };
                note(W2, 0);
                if (use1) note(A1, 1);
                note(A2, 2);

                // candidate constants from every pair of rows, then re-expand
                std::vector<Row> rv;
                for (const auto& [k, r] : rows) {
                    (void)k;
                    rv.push_back(r);
                }
                auto attempt = [&](const Rational& c1, const Rational& c2) {
                    Sym2 P = W2;
                    if (use1) P = oracle_sym2_add(P, oracle_sym2_scale(A1, Polynomial::constant(cc.ctx, c1)));
                    P = oracle_sym2_add(P, oracle_sym2_scale(A2, Polynomial::constant(cc.ctx, c2)));
                    return oracle_sym2_zero(P);
                };
                for (size_t r1 = 0; r1 < rv.size(); ++r1) {
                    for (size_t r2 = r1; r2 < rv.size(); ++r2) {
                        const Row& A = rv[r1];
                        const Row& B = rv[r2];
                        Rational det = A.a * B.b - A.b * B.a;
                        Rational c1(0), c2(0);
                        if (!det.is_zero()) {
                            c1 = (-A.w * B.b + A.b * B.w) / det;
                            c2 = (-A.a * B.w + A.w * B.a) / det;
                        } else if (!A.b.is_zero() && A.a.is_zero()) {
                            c2 = -A.w / A.b;
                        } else if (!A.a.is_zero() && A.b.is_zero()) {
                            c1 = -A.w / A.a;
                        } else {
                            continue;
                        }
                        if (attempt(c1, c2)) return true;
                    }
                }
            }
        }
    }
    return false;
}

// degree <= max_degree pure-relation search
inline bool oracle_in_alpha(const Variety& X, const DiffForm& candidate, int max_degree = 4) {
    DiffForm cov = X.to_cover(X.to_canonical(candidate));
    auto cand = oracle_monomial_data(X, cov);
    if (!cand) throw std::invalid_argument("oracle needs a monomial candidate");
    if (!X.deck_invariant(cov)) return false;

    std::vector<Expo> species_gens;
    for (const auto& g : X.omega_torsionfree(cov.q)) {
        auto gm = oracle_monomial_data(X, g);
        if (!gm) throw std::invalid_argument("oracle needs monomial generators");
        if (gm->tuple == cand->tuple) species_gens.push_back(gm->expo);
    }
    const std::vector<Expo>& monoid = X.monoid_gens();

    std::function<bool(int, int, Expo)> pick = [&](int h, int start, Expo acc) -> bool {
        if (h == 0) return oracle_in_monoid(acc, monoid);
        for (size_t i = start; i < species_gens.size(); ++i) {
            Expo next = expo_sub(acc, species_gens[i]);
            if (pick(h - 1, static_cast<int>(i), next)) return true;
        }
        return false;
    };
    for (int h = 1; h <= max_degree; ++h) {
        Expo target = cand->expo;
        Expo scaled(target.size(), 0);
        for (size_t j = 0; j < target.size(); ++j) scaled[j] = h * target[j];
        if (pick(h, 0, scaled)) return true;
    }
    return false;
}

} // namespace tst
