#include "core/polyhedron.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace betaforms {

namespace {

// Phase-1 simplex with Bland's rule, exact arithmetic. Decides feasibility of
//   sum lam_i v_i + sum mu_j r_j = p,  sum lam_i = 1,  lam, mu >= 0.
bool simplex_feasible(const QVec& p, const std::vector<QVec>& hull, const std::vector<QVec>& rays) {
    size_t d = p.size();
    size_t nl = hull.size(), nr = rays.size();
    size_t rows = d + 1;
    size_t structural = nl + nr;
    size_t cols = structural + rows; // + artificials

    // rows: dimension equations then the lambda-sum row; make b >= 0
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols, Rational(0)));
    std::vector<Rational> b(rows, Rational(0));
    for (size_t r = 0; r < d; ++r) {
        for (size_t i = 0; i < nl; ++i) a[r][i] = hull[i][r];
        for (size_t j = 0; j < nr; ++j) a[r][nl + j] = rays[j][r];
        b[r] = p[r];
    }
    for (size_t i = 0; i < nl; ++i) a[d][i] = Rational(1);
    b[d] = Rational(1);
    for (size_t r = 0; r < rows; ++r) {
        if (b[r].sign() < 0) {
            for (size_t c = 0; c < structural; ++c) a[r][c] = -a[r][c];
            b[r] = -b[r];
        }
        a[r][structural + r] = Rational(1);
    }

    std::vector<size_t> basis(rows);
    for (size_t r = 0; r < rows; ++r) basis[r] = structural + r;

    // objective: minimize sum of artificials; reduced costs tracked explicitly
    auto reduced_cost = [&](size_t col) {
        // c_col - sum over rows of (c_basis[r] * a[r][col]); artificial cost 1
        Rational rc = col >= structural ? Rational(1) : Rational(0);
        for (size_t r = 0; r < rows; ++r)
            if (basis[r] >= structural) rc -= a[r][col];
        return rc;
    };
    auto objective = [&]() {
        Rational z(0);
        for (size_t r = 0; r < rows; ++r)
            if (basis[r] >= structural) z += b[r];
        return z;
    };

    while (true) {
        // Bland: smallest index with negative reduced cost
        size_t enter = cols;
        for (size_t c = 0; c < cols; ++c) {
            if (reduced_cost(c).sign() < 0) {
                enter = c;
                break;
            }
        }
        if (enter == cols) break;
        // ratio test, Bland tie-break on basis index
        size_t leave = rows;
        Rational best;
        for (size_t r = 0; r < rows; ++r) {
            if (a[r][enter].sign() <= 0) continue;
            Rational ratio = b[r] / a[r][enter];
            if (leave == rows || ratio < best ||
                (ratio == best && basis[r] < basis[leave])) {
                leave = r;
                best = ratio;
            }
        }
        if (leave == rows) throw std::logic_error("phase-1 simplex unbounded");
        // pivot
        Rational piv = a[leave][enter];
        for (size_t c = 0; c < cols; ++c) a[leave][c] /= piv;
        b[leave] /= piv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == leave || a[r][enter].is_zero()) continue;
            Rational f = a[r][enter];
            for (size_t c = 0; c < cols; ++c) a[r][c] -= f * a[leave][c];
            b[r] -= f * b[leave];
        }
        basis[leave] = enter;
    }
    return objective().is_zero();
}

// Solve M x = rhs for a column set; returns solution when the columns are
// linearly independent and the system is consistent.
std::optional<QVec> solve_exact(const std::vector<QVec>& cols, const QVec& rhs) {
    size_t rows = rhs.size(), n = cols.size();
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(n + 1, Rational(0)));
    for (size_t c = 0; c < n; ++c)
        for (size_t r = 0; r < rows; ++r) a[r][c] = cols[c][r];
    for (size_t r = 0; r < rows; ++r) a[r][n] = rhs[r];

    std::vector<int> pivot_of_col(n, -1);
    size_t rank = 0;
    for (size_t c = 0; c < n && rank < rows; ++c) {
        size_t piv = rank;
        while (piv < rows && a[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[rank]);
        Rational inv = a[rank][c].inv();
        for (size_t cc = 0; cc <= n; ++cc) a[rank][cc] *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][c].is_zero()) continue;
            Rational f = a[r][c];
            for (size_t cc = 0; cc <= n; ++cc) a[r][cc] -= f * a[rank][cc];
        }
        pivot_of_col[c] = static_cast<int>(rank);
        ++rank;
    }
    if (rank < n) return std::nullopt; // dependent columns: another subset covers this case
    for (size_t r = rank; r < rows; ++r)
        if (!a[r][n].is_zero()) return std::nullopt;
    QVec x(n, Rational(0));
    for (size_t c = 0; c < n; ++c) x[c] = a[pivot_of_col[c]][n];
    return x;
}

} // namespace

bool hull_cone_member_lp(const QVec& p, const std::vector<QVec>& hull,
                         const std::vector<QVec>& rays) {
    if (hull.empty()) return false;
    return simplex_feasible(p, hull, rays);
}

bool hull_cone_member_enum(const QVec& p, const std::vector<QVec>& hull,
                           const std::vector<QVec>& rays) {
    if (hull.empty()) return false;
    size_t d = p.size();
    size_t nl = hull.size(), nr = rays.size();
    // Caratheodory: some independent subset of size <= d+1 suffices, with at
    // least one hull point; enumerate subsets by bitmask over hull then rays.
    std::vector<size_t> idx;
    std::vector<QVec> cols;
    QVec rhs = p;
    rhs.push_back(Rational(1)); // homogenizing row: hull points get 1, rays 0

    std::vector<QVec> all;
    size_t total = nl + nr;
    for (size_t i = 0; i < nl; ++i) {
        QVec c = hull[i];
        c.push_back(Rational(1));
        all.push_back(std::move(c));
    }
    for (size_t j = 0; j < nr; ++j) {
        QVec c = rays[j];
        c.push_back(Rational(0));
        all.push_back(std::move(c));
    }

    size_t maxsz = std::min(total, d + 1);
    std::vector<size_t> pick;
    std::function<bool(size_t, size_t)> rec = [&](size_t start, size_t want) -> bool {
        if (want == 0) {
            bool has_hull = false;
            for (size_t i : pick)
                if (i < nl) has_hull = true;
            if (!has_hull) return false;
            std::vector<QVec> cols2;
            for (size_t i : pick) cols2.push_back(all[i]);
            auto sol = solve_exact(cols2, rhs);
            if (!sol) return false;
            for (const auto& x : *sol)
                if (x.sign() < 0) return false;
            return true;
        }
        for (size_t i = start; i + want <= total + 0 && i < total; ++i) {
            pick.push_back(i);
            if (rec(i + 1, want - 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    for (size_t sz = 1; sz <= maxsz; ++sz) {
        pick.clear();
        if (rec(0, sz)) return true;
    }
    return false;
}

std::optional<std::vector<int>> separating_weights(const QVec& p, const std::vector<QVec>& hull,
                                                   const std::vector<QVec>& rays, int search_bound) {
    size_t d = p.size();
    std::vector<int> w(d, 0);
    std::optional<std::vector<int>> best;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == d) {
            bool allzero = true;
            for (int x : w)
                if (x != 0) allzero = false;
            if (allzero) return;
            auto dot = [&](const QVec& v) {
                Rational s(0);
                for (size_t j = 0; j < d; ++j) s += v[j] * Rational(w[j]);
                return s;
            };
            for (const auto& r : rays)
                if (dot(r).sign() < 0) return;
            Rational wp = dot(p);
            for (const auto& v : hull)
                if (!(wp < dot(v))) return;
            if (!best) best = w;
            return;
        }
        for (int x = 0; x <= search_bound && !best; ++x) {
            w[i] = x;
            rec(i + 1);
        }
        w[i] = 0;
    };
    // increasing total weight: try small bounds first for a canonical answer
    for (int cap = 1; cap <= search_bound && !best; ++cap) {
        std::function<void(size_t, int)> rec2 = [&](size_t i, int left) {
            if (best) return;
            if (i == d) {
                if (left != 0) return;
                rec(d); // validates current w
                return;
            }
            for (int x = 0; x <= left && !best; ++x) {
                w[i] = x;
                rec2(i + 1, left - x);
            }
            w[i] = 0;
        };
        rec2(0, cap);
    }
    return best;
}

} // namespace betaforms
