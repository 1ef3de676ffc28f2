#pragma once

#include "core/formparse.hpp"
#include "core/forms.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace betaforms {

struct Parametrization {
    CtxPtr cover_ctx;
    std::vector<Polynomial> components; // one per ambient variable, over cover_ctx
    bool monomial = false;
};

// Diagonal action of a cyclic group on the cover: a_i -> zeta^{weights[i]} a_i.
struct DeckGroup {
    int order = 1;
    std::vector<int> weights;
};

struct GoldenEntry {
    std::string key;                // e.g. "alpha.q1", "omega0"
    std::vector<std::string> forms; // form grammar texts (ambient coordinates)
    std::string comment;
};

// Raw description of a singular space; validated and compiled by Variety::make.
struct VarietyData {
    std::string id;
    std::vector<std::string> ambient_vars;
    std::vector<Polynomial> equations;      // at most one (hypersurface) or none (smooth affine)
    int dim = 0;
    std::vector<Polynomial> singular_locus; // ideal generators; Jacobian ideal if empty and singular
    std::vector<std::string> pole_vars;
    std::string elim_var;                   // ambient differential eliminated in the model
    bool normal = false;
    std::optional<Parametrization> param;
    std::optional<DeckGroup> deck;
    std::map<int, std::vector<std::string>> L_presentation;   // q -> ambient form texts
    std::map<int, std::vector<std::string>> alpha_seed_decl;  // q -> declared seed texts (registry data)
    std::vector<GoldenEntry> golden;
    std::string product_factor; // set for product varieties
    std::string product_disc;   // disc coordinate name
};

class Variety {
public:
    static std::shared_ptr<const Variety> make(VarietyData d);

    const VarietyData& data() const { return d_; }
    const std::string& id() const { return d_.id; }
    int dim() const { return d_.dim; }
    bool normal() const { return d_.normal; }
    bool parametrized() const { return d_.param.has_value(); }
    bool is_product() const { return !d_.product_factor.empty(); }

    const Chart& ambient_chart() const { return ambient_; }
    const Chart* cover_chart() const { return cover_ ? &*cover_ : nullptr; }
    const Chart& canonical_chart() const { return cover_ ? *cover_ : ambient_; }
    const Chart& chart_for(Coords c) const;

    const IdealPresentation& ideal() const { return *ideal_; }

    // Parses in ambient or cover names (tried in that order) and returns the
    // form in the chart it parsed in.
    DiffForm parse(const std::string& text) const;
    // Same, then converted to the canonical chart.
    DiffForm parse_canonical(const std::string& text) const;
    std::string print(const DiffForm& f) const;

    DiffForm to_cover(const DiffForm& ambient_form) const;
    DiffForm to_ambient(const DiffForm& form) const; // identity on ambient forms
    DiffForm to_canonical(const DiffForm& f) const;

    // Torsion-free Kahler q-forms: membership module over the ambient chart.
    const FormModule& omega_module(int q) const;
    // The presentation in canonical coordinates (cover pullbacks of the
    // coordinate differentials when a parametrization exists).
    std::vector<DiffForm> omega_torsionfree(int q) const;

    // L^q: holomorphic pullback + deck invariance on parametrized varieties,
    // declared presentation otherwise. nullopt = not decidable here.
    std::optional<bool> L_contains(const DiffForm& f) const;
    bool has_L_module(int q) const;
    const FormModule* L_module(int q) const; // ambient chart; null if unavailable
    std::vector<DiffForm> L_cover_generators(int q) const; // parametrized only

    // Deck / monoid data (parametrized varieties).
    int deck_order() const { return d_.deck ? d_.deck->order : 1; }
    const std::vector<Expo>& monoid_gens() const { return monoid_gens_; }
    int class_of(const Expo& cover_expo) const;
    int class_of_tuple(const std::vector<int>& tuple) const;
    bool deck_invariant(const DiffForm& cover_form) const;
    // Writes an invariant Laurent cover monomial as a signed ambient exponent
    // vector (negative entries only on pole variables). Throws if impossible.
    Expo ambient_of_invariant(const Expo& laurent_expo) const;
    // Termwise version for a whole coefficient function.
    MeroFunction mero_cover_to_ambient(const MeroFunction& f) const;

    // Declared alpha seeds (registry data; empty when none).
    std::vector<DiffForm> alpha_seed_declared(int q) const;
    bool has_declared_seeds() const { return !d_.alpha_seed_decl.empty(); }

    // Locus function used for the epsilon cutoff in numeric integration.
    Polynomial cutoff_function() const;

private:
    Variety() = default;
    void build_charts();
    void validate() const;

    VarietyData d_;
    Chart ambient_;
    std::optional<Chart> cover_;
    std::shared_ptr<IdealPresentation> ideal_;
    std::vector<Expo> monoid_gens_;
    std::vector<int> cover_weights_;
    mutable std::mutex mu_;
    mutable std::map<int, std::shared_ptr<FormModule>> omega_cache_;
    mutable std::map<int, std::shared_ptr<FormModule>> L_cache_;
    mutable std::map<Expo, std::optional<Expo>> mono_section_cache_;
};

using VarietyPtr = std::shared_ptr<const Variety>;

// Builtin construction: "curve35", "S<k>" (k>=2), "M<k>" (k>=1), "F<n>" (n>=3),
// "line", "plane". Throws std::invalid_argument for unknown names/parameters.
VarietyPtr builtin_variety(const std::string& name);

// A x C with one extra smooth coordinate.
VarietyPtr product_with_disc(const VarietyPtr& a, const std::string& disc_name);

// Append-only store; get() falls back to builtin names and registers them.
class Registry {
public:
    Registry();
    VarietyPtr get(const std::string& id);
    VarietyPtr find(const std::string& id) const; // no builtin fallback
    void add(VarietyPtr v);
    std::vector<std::string> ids() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, VarietyPtr> map_;
};

} // namespace betaforms
