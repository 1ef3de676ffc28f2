#pragma once

#include "core/polynomial.hpp"

#include <mutex>
#include <optional>
#include <vector>

namespace betaforms {

// Element of a free module A^ncomp over the polynomial ring.
struct ModVec {
    std::vector<Polynomial> comp;

    bool is_zero() const;
    ModVec operator-() const;
    ModVec& operator+=(const ModVec& o);
    ModVec& operator-=(const ModVec& o);
    ModVec mul_term(const Expo& e, const Rational& c) const;
    ModVec mul(const Polynomial& p) const;
    friend bool operator==(const ModVec& a, const ModVec& b) { return a.comp == b.comp; }
};

ModVec modvec_zero(const CtxPtr& ctx, int ncomp);

// Module monomial: basis slot plus exponent.
struct ModTerm {
    int comp = 0;
    Expo expo;
};

// Position-over-term: lower component index dominates, ties by the scalar order.
struct ModuleOrder {
    MonomialOrder mono;
    bool greater(const ModTerm& a, const ModTerm& b) const;
};

std::pair<ModTerm, Rational> mod_leading(const ModVec& v, const ModuleOrder& ord);

// Reduced Groebner basis of an ideal; deterministic and unique for the order.
std::vector<Polynomial> groebner_basis(const std::vector<Polynomial>& gens, const MonomialOrder& ord);

// Remainder of multivariate division by a (not necessarily reduced) basis.
Polynomial normal_form(const Polynomial& p, const std::vector<Polynomial>& basis, const MonomialOrder& ord);

struct MembershipResult {
    bool member = false;
    // member: coefficients per original generator (module part only, not ideal padding)
    std::vector<Polynomial> witness;
};

// Submodule of A^ncomp where A = Q[ctx] or Q[ctx]/ideal. Quotient rings are
// handled by padding the generator list with ideal multiples of each slot.
class Submodule {
public:
    Submodule(CtxPtr ctx, int ncomp, std::vector<ModVec> gens,
              std::vector<Polynomial> ideal = {},
              ModuleOrder ord = {MonomialOrder{OrderTag::Degrevlex}});

    int ncomp() const { return ncomp_; }
    const std::vector<ModVec>& gens() const { return gens_; }
    const std::vector<Polynomial>& ideal() const { return ideal_; }

    ModVec reduce(const ModVec& v) const;
    MembershipResult contains(const ModVec& v, bool want_witness = false) const;
    bool contains_all(const std::vector<ModVec>& vs) const;
    bool equals(const Submodule& other) const;

    // Reduced Groebner basis vectors (computed on first use).
    std::vector<ModVec> basis_vectors() const;

private:
    struct GBElem {
        ModVec v;
        ModTerm lt;
        Rational lc;
        std::vector<Polynomial> rep; // in terms of padded generator list
    };
    void ensure_gb() const;
    ModVec reduce_tracked(const ModVec& v, std::vector<Polynomial>* acc) const;

    CtxPtr ctx_;
    int ncomp_;
    std::vector<ModVec> gens_;
    std::vector<Polynomial> ideal_;
    ModuleOrder ord_;
    mutable std::mutex mu_;
    mutable std::optional<std::vector<GBElem>> gb_;
};

// Ideal with per-order basis cache (fills on first use, then read-only).
class IdealPresentation {
public:
    IdealPresentation() = default;
    IdealPresentation(CtxPtr ctx, std::vector<Polynomial> gens)
        : ctx_(std::move(ctx)), gens_(std::move(gens)) {}

    const CtxPtr& ctx() const { return ctx_; }
    const std::vector<Polynomial>& gens() const { return gens_; }
    const std::vector<Polynomial>& basis(const MonomialOrder& ord) const;
    Polynomial nf(const Polynomial& p, const MonomialOrder& ord = {}) const;
    bool contains(const Polynomial& p, const MonomialOrder& ord = {}) const;

private:
    CtxPtr ctx_;
    std::vector<Polynomial> gens_;
    mutable std::mutex mu_;
    mutable std::optional<std::vector<Polynomial>> degrevlex_cache_;
    mutable std::optional<std::vector<Polynomial>> lex_cache_;
};

} // namespace betaforms
