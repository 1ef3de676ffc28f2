#pragma once

#include "core/groebner.hpp"
#include "core/mero.hpp"

#include <map>
#include <memory>
#include <vector>

namespace betaforms {

enum class Coords { Ambient, Parameter };

// A coordinate chart in which forms are computed: the ring variables, which of
// them carry an independent differential, expansions for eliminated
// differentials (from the defining equation), the variables allowed in
// denominators, and the defining ideal for normal forms.
struct Chart {
    CtxPtr ctx;
    Coords coords = Coords::Ambient;
    std::vector<int> diff_vars;
    std::map<int, std::vector<MeroFunction>> elim; // var -> expansion over diff_vars
    Expo pole_mask;                                // 1 where denominators are allowed
    std::shared_ptr<const IdealPresentation> ideal;

    int dim() const { return static_cast<int>(diff_vars.size()); }
    bool has_ideal() const { return ideal && !ideal->gens().empty(); }
    MeroFunction nf(const MeroFunction& f) const;
    bool mero_zero(const MeroFunction& f) const;
    bool mero_equal(const MeroFunction& a, const MeroFunction& b) const;
    bool pole_ok(const Expo& den) const;
    int diff_pos(int var) const; // index into diff_vars, -1 if not kept
};

// Meromorphic differential form of pure degree q in a chart. Components are
// keyed by strictly increasing tuples of chart diff-var indices; zero
// components are absent. q = 0 uses the single empty key.
struct DiffForm {
    int q = 0;
    Coords coords = Coords::Ambient;
    std::map<std::vector<int>, MeroFunction> comps;

    bool is_zero() const { return comps.empty(); }
    void add(const std::vector<int>& key, const MeroFunction& f);
};

DiffForm form_zero(int q, Coords c);
DiffForm form_function(const Chart& chart, MeroFunction f);
DiffForm form_dvar(const Chart& chart, int var); // d of a coordinate, expanding eliminations
DiffForm form_neg(const DiffForm& u);
DiffForm form_add(const DiffForm& u, const DiffForm& v);
DiffForm form_sub(const DiffForm& u, const DiffForm& v);
DiffForm form_scale(const DiffForm& u, const Rational& c);
DiffForm form_mul_mero(const DiffForm& u, const MeroFunction& f);
DiffForm wedge(const Chart& chart, const DiffForm& u, const DiffForm& v);
DiffForm exterior_d(const Chart& chart, const DiffForm& u);
DiffForm form_nf(const Chart& chart, const DiffForm& u);
bool form_equal(const Chart& chart, const DiffForm& u, const DiffForm& v);
int merge_sign(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& merged);

// index tuples of length q over the chart's kept differentials, lex order
std::vector<std::vector<int>> basis_tuples(const Chart& chart, int q);

// O_X-submodule of meromorphic q-forms given by a generator list. Membership
// and equality clear denominators against a common monomial and reduce over
// the quotient ring (position-over-term Groebner).
class FormModule {
public:
    FormModule(const Chart* chart, int q, std::vector<DiffForm> gens);

    int q() const { return q_; }
    const std::vector<DiffForm>& gens() const { return gens_; }
    const Chart& chart() const { return *chart_; }

    MembershipResult contains(const DiffForm& v, bool want_witness = false) const;
    bool equals(const FormModule& other) const;
    // Drops generators lying in the span of the others (stable, first kept).
    std::vector<DiffForm> minimal_generators() const;

private:
    const Submodule& at_den(const Expo& d) const;
    ModVec clear_form(const DiffForm& f, const Expo& d) const;

    const Chart* chart_;
    int q_;
    std::vector<DiffForm> gens_;
    Expo gens_den_;
    std::vector<std::vector<int>> tuples_;
    mutable std::mutex mu_;
    mutable std::map<Expo, std::shared_ptr<Submodule>> cache_;
};

// Element of Sym^h of the meromorphic q-forms: formal commuting products of
// model basis q-covectors with meromorphic coefficients.
struct SymElement {
    int h = 0;
    std::map<std::vector<std::vector<int>>, MeroFunction> terms; // sorted multiset keys

    bool structurally_zero() const { return terms.empty(); }
};

SymElement sym_of_form(const DiffForm& u);
SymElement sym_add(const SymElement& a, const SymElement& b);
SymElement sym_mul(const SymElement& a, const SymElement& b);
SymElement sym_scale(const SymElement& a, const MeroFunction& f);
SymElement sym_neg(const SymElement& a);
bool sym_zero(const Chart& chart, const SymElement& s);

} // namespace betaforms
