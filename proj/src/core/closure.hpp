#pragma once

#include "core/pullback.hpp"
#include "core/variety.hpp"

#include <optional>
#include <string>
#include <vector>

namespace betaforms {

// Monic dependence relation P(z) = z^k + sum S_h z^{k-h} with S_h built from
// polynomial multiples of h-fold products of named torsion-free generators.
struct DependenceCertificate {
    struct Term {
        std::string coeff_text;           // scalar expression; must be holomorphic
        std::vector<std::string> factors; // h generator names
    };
    int degree = 0;
    std::vector<std::pair<std::string, std::string>> bindings; // name -> form text
    std::map<int, std::vector<Term>> parts;                    // h -> terms
};

struct CertCheck {
    bool ok = false;
    std::string reason;
};

// True iff every S_h is a valid symmetric-power element over Omega^q/torsion
// and P(omega) reduces to zero in the model. Throws on unresolved generator
// names or degree mismatches.
CertCheck verify_certificate(const Variety& X, const DiffForm& omega, const DependenceCertificate& cert);

// Certificate JSON: {"variety": id, "form": text, "degree": k,
//   "bindings": {name: form text},
//   "S": [{"h": h, "terms": [{"coeff": text, "product": [names]}]}]}
DependenceCertificate parse_certificate_json(const std::string& json_text);
std::string certificate_form_text(const std::string& json_text);  // the "form" field
std::string certificate_variety_id(const std::string& json_text); // the "variety" field

// Monomial disc arc into a chart: variable i |-> coeff_i * t^{weight_i}.
struct ArcSpec {
    std::string description;
    Coords coords = Coords::Parameter;
    std::vector<int> weights;
    std::vector<Rational> coeffs; // empty = all ones
};

// Weighted vanishing order of a form along the arc: min over components of
// ord_t(coefficient restricted to the arc) + sum of weights over the
// component's differential indices. nullopt when the form dies on the arc.
std::optional<long> arc_order(const Variety& X, const DiffForm& f, const ArcSpec& arc);

// Sound one-way test: ord(omega) < min over generators => omega is not
// integral over the module they generate. nullopt = no verdict (everything
// died on the arc).
std::optional<bool> refute_by_arc(const Variety& X, const DiffForm& omega,
                                  const std::vector<DiffForm>& gens, const ArcSpec& arc);

std::vector<ArcSpec> stock_arcs(const Variety& X);

enum class AlphaLevel {
    InOmegaTorsionFree,
    InAlphaCertified,
    InAlphaDecidedMonomial,
    NotInAlphaRefuted,
    Unknown,
};
std::string to_string(AlphaLevel l);

struct MembershipVerdict {
    AlphaLevel level = AlphaLevel::Unknown;
    std::string evidence;
    std::optional<ArcSpec> arc;
    std::string notes;
};

// Newton-polyhedron decision for a monomial form against the monomial
// torsion-free generators of a parametrized variety. Exact LP and a
// Caratheodory enumeration both run; disagreement is a hard error.
// Throws std::invalid_argument when the inputs are not monomial.
MembershipVerdict decide_monomial(const Variety& X, const DiffForm& omega);

// Bounded certificate search used for alpha seeds where the generator module
// is not monomial: membership, then degree-2 relations with forced
// quasi-homogeneous coefficients. Returns the certificate found.
std::optional<DependenceCertificate> search_degree2_certificate(const Variety& X, const DiffForm& omega);

// Full dispatcher: torsion-free membership, supplied certificate, monomial
// decision, stock refutation arcs, else Unknown.
MembershipVerdict classify_alpha(const Variety& X, const DiffForm& omega,
                                 const DependenceCertificate* cert = nullptr);

// Alpha seed generators (canonical chart): declared registry seeds when
// present, otherwise Omega/torsion plus the certified monomial sweep.
std::vector<DiffForm> alpha_seed(const Variety& X, int q);

// Sweep candidates (cover chart monomial forms) considered by alpha_seed, in
// decision order. Exposed for the oracle-agreement acceptance check.
std::vector<DiffForm> alpha_sweep_candidates(const Variety& X, int q);

} // namespace betaforms
