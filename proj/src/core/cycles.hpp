#pragma once

#include "core/variety.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace betaforms {

// One parametrized piece of a cycle: a polynomial map from a disc (possibly
// with a formal family parameter) into the cover or ambient space.
struct Patch {
    Coords coords = Coords::Parameter;
    CtxPtr domain;                      // disc parameter first, optional family parameter second
    std::vector<Polynomial> components; // one per chart variable
    double radius = 1.0;
    int multiplicity = 1;
    int family_var = -1;                // index into domain, -1 when absent
};

struct CycleSpec {
    std::string variety;
    int dim = 1;
    std::vector<Patch> patches;
};

enum class BumpClass { C0, C1 };

// rho(x) = B(sum |x_j - c_j|^2 / R^2) with B(s) = (1-s)+ or (1-s)+^2.
struct CutoffSpec {
    BumpClass smoothness = BumpClass::C1;
    std::vector<std::complex<double>> center; // ambient coordinates
    double radius = 1.0;

    double value(double s2_over_r2) const;
    double derivative(double s2_over_r2) const; // dB/ds (C1 only)
};

// Validates a cycle against its variety: components satisfy the defining
// equations identically (family parameter treated formally) and no patch maps
// entirely into the singular locus.
void validate_cycle(const Variety& X, const CycleSpec& c);

// Cycle JSON schema:
// {"variety": id, "dim": 1, "patches": [{"coords": "cover"|"ambient",
//   "params": ["a"] or ["a","T"], "family": "T"?, "components": [...],
//   "radius": r, "multiplicity": m}]}
CycleSpec parse_cycle_json(const std::string& text, Registry& reg);

// Stock one-patch cycles used by the reproduction suite:
//   "self"      identity patch on the cover (curve35, line, plane)
//   "diag"      a -> (a, a) through the cover (S_k)
//   "diag-family" a -> (a, T a) through the cover (S_k), family parameter T
//   "axis-line" t -> (t, 0, 0) in ambient coordinates (S_k)
CycleSpec stock_cycle(const VarietyPtr& X, const std::string& name);

} // namespace betaforms
