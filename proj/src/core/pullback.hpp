#pragma once

#include "core/variety.hpp"

namespace betaforms {

// Polynomial map between registered varieties, f : source -> target, with a
// rational witness point certifying f(X) is not inside the singular set of
// the target.
struct MapSpec {
    std::string name;
    VarietyPtr source;
    VarietyPtr target;
    std::vector<Polynomial> components;  // over the source ambient context
    std::vector<Rational> witness;       // source ambient coordinates
};

// Validates the defining-equation and witness conditions.
MapSpec make_map(std::string name, VarietyPtr source, VarietyPtr target,
                 std::vector<Polynomial> components, std::vector<Rational> witness);

MapSpec identity_map(const VarietyPtr& v);

// g after f (f : X -> Y, g : Y -> Z).
MapSpec compose_map(const MapSpec& g, const MapSpec& f);

// Substitution pullback; the result lives in the source's canonical chart.
// Throws if a target pole monomial pulls back to a zero divisor (image inside
// the pole locus) or cannot be represented over the source.
DiffForm pullback(const MapSpec& f, const DiffForm& u_on_target);

// Restriction along a registered inclusion (e.g. a slice): the same
// substitution with the slice equations.
DiffForm restrict_form(const MapSpec& inclusion, const DiffForm& u);

// Known maps: "qk:<k>" (plane -> S_k), "fermat:<n>" (F_n -> S_n, even n),
// "pi:<k>" (S_k x C -> M_k), "slice:<k>" (S_k -> M_k, v = 1),
// "sliceqk:<k>" (the composition slice . q_k), "id:<variety>".
MapSpec builtin_map(const std::string& token, Registry& reg);

// A rational point on the variety, used as the default map witness.
std::vector<Rational> default_witness(const VarietyPtr& v);

} // namespace betaforms
