#include "core/groebner.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace betaforms {

bool ModVec::is_zero() const {
    for (const auto& p : comp)
        if (!p.is_zero()) return false;
    return true;
}

ModVec ModVec::operator-() const {
    ModVec r;
    r.comp.reserve(comp.size());
    for (const auto& p : comp) r.comp.push_back(-p);
    return r;
}

ModVec& ModVec::operator+=(const ModVec& o) {
    for (size_t i = 0; i < comp.size(); ++i) comp[i] += o.comp[i];
    return *this;
}

ModVec& ModVec::operator-=(const ModVec& o) {
    for (size_t i = 0; i < comp.size(); ++i) comp[i] -= o.comp[i];
    return *this;
}

ModVec ModVec::mul_term(const Expo& e, const Rational& c) const {
    ModVec r;
    r.comp.reserve(comp.size());
    for (const auto& p : comp) r.comp.push_back(p.mul_term(e, c));
    return r;
}

ModVec ModVec::mul(const Polynomial& p) const {
    ModVec r;
    r.comp.reserve(comp.size());
    for (const auto& q : comp) r.comp.push_back(q * p);
    return r;
}

ModVec modvec_zero(const CtxPtr& ctx, int ncomp) {
    ModVec v;
    v.comp.assign(ncomp, Polynomial::zero(ctx));
    return v;
}

bool ModuleOrder::greater(const ModTerm& a, const ModTerm& b) const {
    if (a.comp != b.comp) return a.comp < b.comp;
    return mono.greater(a.expo, b.expo);
}

std::pair<ModTerm, Rational> mod_leading(const ModVec& v, const ModuleOrder& ord) {
    bool found = false;
    ModTerm best;
    Rational bc;
    for (size_t c = 0; c < v.comp.size(); ++c) {
        for (const auto& [e, k] : v.comp[c].terms()) {
            ModTerm t{static_cast<int>(c), e};
            if (!found || ord.greater(t, best)) {
                best = t;
                bc = k;
                found = true;
            }
        }
    }
    if (!found) throw std::logic_error("leading term of zero module element");
    return {best, bc};
}

namespace {

// Full normal form against an ordered divisor list; optionally accumulates the
// quotient taken against each divisor into `quot`.
template <typename Elem>
ModVec reduce_modvec(ModVec v, const std::vector<Elem>& divisors, const ModuleOrder& ord,
                     std::vector<Polynomial>* quot, const CtxPtr& ctx) {
    ModVec rem = modvec_zero(ctx, static_cast<int>(v.comp.size()));
    while (!v.is_zero()) {
        auto [lt, lc] = mod_leading(v, ord);
        bool red = false;
        for (size_t i = 0; i < divisors.size(); ++i) {
            const ModTerm& glt = divisors[i].lt;
            if (glt.comp != lt.comp || !expo_divides(glt.expo, lt.expo)) continue;
            Expo shift = expo_sub(lt.expo, glt.expo);
            Rational factor = lc / divisors[i].lc;
            v -= divisors[i].v.mul_term(shift, factor);
            if (quot) (*quot)[i].add_term(shift, factor);
            red = true;
            break;
        }
        if (!red) {
            rem.comp[lt.comp].add_term(lt.expo, lc);
            v.comp[lt.comp].add_term(lt.expo, -lc);
        }
    }
    return rem;
}

struct PlainElem {
    ModVec v;
    ModTerm lt;
    Rational lc;
};

} // namespace

Submodule::Submodule(CtxPtr ctx, int ncomp, std::vector<ModVec> gens,
                     std::vector<Polynomial> ideal, ModuleOrder ord)
    : ctx_(std::move(ctx)), ncomp_(ncomp), gens_(std::move(gens)), ideal_(std::move(ideal)), ord_(ord) {
    for (const auto& g : gens_)
        if (static_cast<int>(g.comp.size()) != ncomp_)
            throw std::invalid_argument("generator component count mismatch");
}

void Submodule::ensure_gb() const {
    std::lock_guard<std::mutex> lk(mu_);
    if (gb_) return;

    // padded input: generators first, then ideal * basis slots
    std::vector<ModVec> input = gens_;
    for (const auto& f : ideal_) {
        for (int c = 0; c < ncomp_; ++c) {
            ModVec v = modvec_zero(ctx_, ncomp_);
            v.comp[c] = f;
            input.push_back(std::move(v));
        }
    }

    std::vector<GBElem> gb;
    size_t npad = input.size();
    for (size_t i = 0; i < input.size(); ++i) {
        if (input[i].is_zero()) continue;
        GBElem e;
        e.v = input[i];
        auto [lt, lc] = mod_leading(e.v, ord_);
        e.lt = lt;
        e.lc = lc;
        e.rep.assign(npad, Polynomial::zero(ctx_));
        e.rep[i] = Polynomial::constant(ctx_, Rational(1));
        gb.push_back(std::move(e));
    }

    struct Pair {
        size_t i, j;
        ModTerm lcm;
    };
    auto make_pairs = [&](size_t j, std::deque<Pair>& pairs) {
        for (size_t i = 0; i < j; ++i) {
            if (gb[i].lt.comp != gb[j].lt.comp) continue;
            // product criterion is only valid in the rank-one (ideal) case
            if (ncomp_ == 1 && ideal_.empty() && expo_disjoint(gb[i].lt.expo, gb[j].lt.expo)) continue;
            pairs.push_back({i, j, ModTerm{gb[i].lt.comp, expo_lcm(gb[i].lt.expo, gb[j].lt.expo)}});
        }
    };

    std::deque<Pair> pairs;
    for (size_t j = 0; j < gb.size(); ++j) make_pairs(j, pairs);

    while (!pairs.empty()) {
        // normal selection: smallest lcm first (deterministic)
        auto best = pairs.begin();
        for (auto it = std::next(pairs.begin()); it != pairs.end(); ++it)
            if (ord_.greater(best->lcm, it->lcm)) best = it;
        Pair pr = *best;
        pairs.erase(best);

        const GBElem& f = gb[pr.i];
        const GBElem& g = gb[pr.j];
        ModVec s = f.v.mul_term(expo_sub(pr.lcm.expo, f.lt.expo), f.lc.inv());
        s -= g.v.mul_term(expo_sub(pr.lcm.expo, g.lt.expo), g.lc.inv());
        std::vector<Polynomial> rep(npad, Polynomial::zero(ctx_));
        for (size_t k = 0; k < npad; ++k) {
            rep[k] = f.rep[k].mul_term(expo_sub(pr.lcm.expo, f.lt.expo), f.lc.inv())
                   - g.rep[k].mul_term(expo_sub(pr.lcm.expo, g.lt.expo), g.lc.inv());
        }

        std::vector<Polynomial> quot(gb.size(), Polynomial::zero(ctx_));
        ModVec r = reduce_modvec(s, gb, ord_, &quot, ctx_);
        if (r.is_zero()) continue;
        for (size_t k = 0; k < npad; ++k)
            for (size_t d = 0; d < gb.size(); ++d)
                if (!quot[d].is_zero()) rep[k] -= quot[d] * gb[d].rep[k];

        GBElem ne;
        ne.v = std::move(r);
        auto [lt, lc] = mod_leading(ne.v, ord_);
        ne.lt = lt;
        ne.lc = lc;
        ne.rep = std::move(rep);
        gb.push_back(std::move(ne));
        make_pairs(gb.size() - 1, pairs);
    }

    // inter-reduce: drop elements whose lead is divisible by another lead,
    // then fully reduce tails and normalize lead coefficients to 1.
    std::vector<GBElem> minimal;
    for (size_t i = 0; i < gb.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < gb.size(); ++j) {
            if (i == j) continue;
            if (gb[j].lt.comp == gb[i].lt.comp && expo_divides(gb[j].lt.expo, gb[i].lt.expo)) {
                if (expo_divides(gb[i].lt.expo, gb[j].lt.expo) && j > i) continue; // equal leads: keep first
                redundant = true;
                break;
            }
        }
        if (!redundant) minimal.push_back(gb[i]);
    }
    for (size_t i = 0; i < minimal.size(); ++i) {
        std::vector<GBElem> others;
        for (size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        std::vector<Polynomial> quot(others.size(), Polynomial::zero(ctx_));
        ModVec r = reduce_modvec(minimal[i].v, others, ord_, &quot, ctx_);
        std::vector<Polynomial> rep = minimal[i].rep;
        {
            size_t oi = 0;
            for (size_t j = 0; j < minimal.size(); ++j) {
                if (j == i) continue;
                if (!quot[oi].is_zero())
                    for (size_t k = 0; k < npad; ++k) rep[k] -= quot[oi] * minimal[j].rep[k];
                ++oi;
            }
        }
        auto [lt, lc] = mod_leading(r, ord_);
        Rational inv = lc.inv();
        minimal[i].v = r.mul_term(Expo(lt.expo.size(), 0), inv);
        for (auto& p : rep) p = p.scaled(inv);
        minimal[i].rep = std::move(rep);
        minimal[i].lt = lt;
        minimal[i].lc = Rational(1);
    }
    std::sort(minimal.begin(), minimal.end(),
              [&](const GBElem& a, const GBElem& b) { return ord_.greater(a.lt, b.lt); });
    gb_ = std::move(minimal);
}

ModVec Submodule::reduce_tracked(const ModVec& v, std::vector<Polynomial>* acc) const {
    ensure_gb();
    std::vector<Polynomial> quot(gb_->size(), Polynomial::zero(ctx_));
    ModVec r = reduce_modvec(v, *gb_, ord_, &quot, ctx_);
    if (acc) {
        size_t npad = gens_.size() + ideal_.size() * ncomp_;
        acc->assign(npad, Polynomial::zero(ctx_));
        for (size_t d = 0; d < gb_->size(); ++d)
            if (!quot[d].is_zero())
                for (size_t k = 0; k < npad; ++k) (*acc)[k] += quot[d] * (*gb_)[d].rep[k];
    }
    return r;
}

ModVec Submodule::reduce(const ModVec& v) const {
    return reduce_tracked(v, nullptr);
}

MembershipResult Submodule::contains(const ModVec& v, bool want_witness) const {
    MembershipResult res;
    if (v.is_zero()) {
        res.member = true;
        if (want_witness) res.witness.assign(gens_.size(), Polynomial::zero(ctx_));
        return res;
    }
    std::vector<Polynomial> acc;
    ModVec r = reduce_tracked(v, want_witness ? &acc : nullptr);
    res.member = r.is_zero();
    if (res.member && want_witness) {
        res.witness.assign(acc.begin(), acc.begin() + gens_.size());
    }
    return res;
}

bool Submodule::contains_all(const std::vector<ModVec>& vs) const {
    for (const auto& v : vs)
        if (!contains(v).member) return false;
    return true;
}

bool Submodule::equals(const Submodule& other) const {
    return contains_all(other.gens_) && other.contains_all(gens_);
}

std::vector<ModVec> Submodule::basis_vectors() const {
    ensure_gb();
    std::vector<ModVec> out;
    out.reserve(gb_->size());
    for (const auto& e : *gb_) out.push_back(e.v);
    return out;
}

std::vector<Polynomial> groebner_basis(const std::vector<Polynomial>& gens, const MonomialOrder& ord) {
    CtxPtr ctx;
    for (const auto& g : gens)
        if (!g.is_zero()) { ctx = g.ctx(); break; }
    if (!ctx) {
        if (gens.empty()) return {};
        ctx = gens.front().ctx();
        return {}; // all zero: the zero ideal
    }
    std::vector<ModVec> mv;
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        ModVec v;
        v.comp = {g};
        mv.push_back(std::move(v));
    }
    Submodule sub(ctx, 1, std::move(mv), {}, ModuleOrder{ord});
    std::vector<Polynomial> out;
    for (const auto& v : sub.basis_vectors()) out.push_back(v.comp[0]);
    return out;
}

Polynomial normal_form(const Polynomial& p, const std::vector<Polynomial>& basis, const MonomialOrder& ord) {
    if (p.is_zero()) return p;
    CtxPtr ctx = p.ctx();
    std::vector<PlainElem> divs;
    for (const auto& b : basis) {
        if (b.is_zero()) continue;
        PlainElem e;
        e.v.comp = {b};
        auto [le, lc] = b.leading(ord);
        e.lt = ModTerm{0, le};
        e.lc = lc;
        divs.push_back(std::move(e));
    }
    ModVec v;
    v.comp = {p};
    ModVec r = reduce_modvec(v, divs, ModuleOrder{ord}, nullptr, ctx);
    return r.comp[0];
}

const std::vector<Polynomial>& IdealPresentation::basis(const MonomialOrder& ord) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto& cache = ord.tag == OrderTag::Degrevlex ? degrevlex_cache_ : lex_cache_;
    if (!cache) cache = groebner_basis(gens_, ord);
    return *cache;
}

Polynomial IdealPresentation::nf(const Polynomial& p, const MonomialOrder& ord) const {
    if (gens_.empty()) return p;
    return normal_form(p, basis(ord), ord);
}

bool IdealPresentation::contains(const Polynomial& p, const MonomialOrder& ord) const {
    return nf(p, ord).is_zero();
}

} // namespace betaforms
