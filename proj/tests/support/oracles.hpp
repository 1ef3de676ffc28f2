#pragma once

// Independent oracles used to cross-check the production implementations.
// Deliberately written with no shortcuts and no shared code paths: a plain
// FIFO Buchberger loop without pair criteria, and a truncated-degree linear
// solve for module membership.

#include "core/groebner.hpp"

#include <deque>
#include <map>
#include <vector>

namespace tst {

using namespace betaforms;

inline Polynomial oracle_reduce(Polynomial p, const std::vector<Polynomial>& basis,
                                const MonomialOrder& ord) {
    Polynomial rem = Polynomial::zero(p.ctx());
    while (!p.is_zero()) {
        auto [le, lc] = p.leading(ord);
        bool hit = false;
        for (const auto& g : basis) {
            if (g.is_zero()) continue;
            auto [ge, gc] = g.leading(ord);
            if (!expo_divides(ge, le)) continue;
            p -= g.mul_term(expo_sub(le, ge), lc / gc);
            hit = true;
            break;
        }
        if (!hit) {
            rem.add_term(le, lc);
            p.add_term(le, -lc);
        }
    }
    return rem;
}

// Brute-force Buchberger: every pair, FIFO, no criteria. Returns the unique
// reduced basis with unit leading coefficients, sorted by leading term.
inline std::vector<Polynomial> oracle_buchberger(std::vector<Polynomial> basis,
                                                 const MonomialOrder& ord) {
    std::erase_if(basis, [](const Polynomial& p) { return p.is_zero(); });
    std::deque<std::pair<size_t, size_t>> todo;
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = i + 1; j < basis.size(); ++j) todo.push_back({i, j});
    while (!todo.empty()) {
        auto [i, j] = todo.front();
        todo.pop_front();
        auto [ei, ci] = basis[i].leading(ord);
        auto [ej, cj] = basis[j].leading(ord);
        Expo l = expo_lcm(ei, ej);
        Polynomial s = basis[i].mul_term(expo_sub(l, ei), ci.inv())
                     - basis[j].mul_term(expo_sub(l, ej), cj.inv());
        Polynomial r = oracle_reduce(s, basis, ord);
        if (r.is_zero()) continue;
        basis.push_back(r);
        for (size_t k = 0; k + 1 < basis.size(); ++k) todo.push_back({k, basis.size() - 1});
    }
    // minimalize + fully reduce + normalize
    std::vector<Polynomial> out;
    for (size_t i = 0; i < basis.size(); ++i) {
        auto [ei, ci] = basis[i].leading(ord);
        bool redundant = false;
        for (size_t j = 0; j < basis.size(); ++j) {
            if (i == j) continue;
            auto [ej, cj] = basis[j].leading(ord);
            if (expo_divides(ej, ei) && (ej != ei || j < i)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) out.push_back(basis[i]);
    }
    for (size_t i = 0; i < out.size(); ++i) {
        std::vector<Polynomial> others;
        for (size_t j = 0; j < out.size(); ++j)
            if (j != i) others.push_back(out[j]);
        Polynomial r = oracle_reduce(out[i], others, ord);
        auto [e, c] = r.leading(ord);
        out[i] = r.scaled(c.inv());
    }
    std::sort(out.begin(), out.end(), [&](const Polynomial& a, const Polynomial& b) {
        return ord.greater(a.leading(ord).first, b.leading(ord).first);
    });
    return out;
}

// Membership of elt in the module generated by gens over Q[ctx]/(ideal), with
// all unknown coefficient polynomials truncated at total degree <= maxdeg.
// Solves the exact linear system over Q by Gaussian elimination.
inline bool oracle_linalg_membership(const ModVec& elt, const std::vector<ModVec>& gens,
                                     const std::vector<Polynomial>& ideal, const CtxPtr& ctx,
                                     int ncomp, int maxdeg) {
    // enumerate monomials of total degree <= maxdeg
    std::vector<Expo> monos;
    int nv = static_cast<int>(ctx->names.size());
    Expo cur(nv, 0);
    auto rec = [&](auto&& self, int var, int left) -> void {
        if (var == nv) {
            monos.push_back(cur);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            cur[var] = e;
            self(self, var + 1, left - e);
        }
        cur[var] = 0;
    };
    rec(rec, 0, maxdeg);

    // columns: (generator, mono) + (ideal gen, component, mono)
    std::vector<ModVec> columns;
    for (const auto& g : gens)
        for (const auto& m : monos) columns.push_back(g.mul_term(m, Rational(1)));
    for (const auto& f : ideal) {
        for (int c = 0; c < ncomp; ++c) {
            for (const auto& m : monos) {
                ModVec v = modvec_zero(ctx, ncomp);
                v.comp[c] = f.mul_term(m, Rational(1));
                columns.push_back(std::move(v));
            }
        }
    }

    // rows: (component, monomial) appearing anywhere
    std::map<std::pair<int, Expo>, size_t> rowindex;
    auto note_rows = [&](const ModVec& v) {
        for (int c = 0; c < ncomp; ++c)
            for (const auto& [e, k] : v.comp[c].terms()) {
                (void)k;
                rowindex.emplace(std::make_pair(c, e), rowindex.size());
            }
    };
    note_rows(elt);
    for (const auto& col : columns) note_rows(col);

    size_t nrows = rowindex.size(), ncols = columns.size();
    std::vector<std::vector<Rational>> a(nrows, std::vector<Rational>(ncols + 1, Rational(0)));
    for (size_t j = 0; j < ncols; ++j)
        for (int c = 0; c < ncomp; ++c)
            for (const auto& [e, k] : columns[j].comp[c].terms())
                a[rowindex[{c, e}]][j] = k;
    for (int c = 0; c < ncomp; ++c)
        for (const auto& [e, k] : elt.comp[c].terms()) a[rowindex[{c, e}]][ncols] = k;

    size_t rank = 0;
    for (size_t col = 0; col < ncols && rank < nrows; ++col) {
        size_t piv = rank;
        while (piv < nrows && a[piv][col].is_zero()) ++piv;
        if (piv == nrows) continue;
        std::swap(a[piv], a[rank]);
        Rational inv = a[rank][col].inv();
        for (size_t j = col; j <= ncols; ++j) a[rank][j] *= inv;
        for (size_t i = 0; i < nrows; ++i) {
            if (i == rank || a[i][col].is_zero()) continue;
            Rational f = a[i][col];
            for (size_t j = col; j <= ncols; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
    }
    for (size_t i = 0; i < nrows; ++i) {
        bool allzero = true;
        for (size_t j = 0; j < ncols; ++j)
            if (!a[i][j].is_zero()) {
                allzero = false;
                break;
            }
        if (allzero && !a[i][ncols].is_zero()) return false;
    }
    return true;
}

} // namespace tst
