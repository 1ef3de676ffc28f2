#pragma once

#include "core/cycles.hpp"
#include "core/pullback.hpp"

#include <complex>
#include <vector>

namespace betaforms {

struct QuadOptions {
    int n_radial = 48;
    int n_angular = 96;
    int eps_count = 10;
    double eps_max = 1e-1;
    double eps_min = 1e-6;
    double tol = 1e-5; // relative stability tolerance for the extrapolated limit
};

struct IntegralReport {
    std::vector<double> eps;
    std::vector<std::complex<double>> values; // one per epsilon
    std::complex<double> limit{0.0, 0.0};     // Richardson-extrapolated
    bool converged = false;
    double quad_error = 0.0; // difference against a refined quadrature
    double mass = 0.0;       // integral of |rho| h^p over the cycle
    int n_radial = 0;
    int n_angular = 0;
};

// integral of rho . u ^ conj(v) over the cycle, with the (i/2)^p volume
// normalization that makes the u = v case a non-negative real number.
IntegralReport integrate(const VarietyPtr& X, const CycleSpec& cycle, const CutoffSpec& rho,
                         const DiffForm& u, const DiffForm& v, const QuadOptions& opt = {});

struct StokesReport {
    IntegralReport report; // the integral of d(rho . u ^ conj v)
    double residual = 0.0; // |extrapolated limit|
};

// | integral of d(rho . u ^ conj v) | for u of degree p-1, v of degree p.
// Requires the C1 cutoff tag.
StokesReport stokes_residual(const VarietyPtr& X, const CycleSpec& cycle, const CutoffSpec& rho,
                             const DiffForm& u, const DiffForm& v, const QuadOptions& opt = {});

struct FamilyRow {
    double t = 0.0;
    std::complex<double> value{0.0, 0.0};
    double mass = 0.0;
    bool converged = false;
};

struct FamilyScan {
    std::vector<FamilyRow> rows;
    double sup_abs = 0.0;
    double bound_constant = 0.0; // C with |phi(t)| <= C . mass(t) across the grid
    bool all_converged = false;
};

FamilyScan family_scan(const VarietyPtr& X, const CycleSpec& family_cycle, const CutoffSpec& rho,
                       const DiffForm& u, const DiffForm& v, const std::vector<double>& grid,
                       const QuadOptions& opt = {});

struct DirectImageReport {
    IntegralReport source;   // integral of f*(rho) . f^(u) ^ conj f^(v) over Z
    IntegralReport target;   // integral of rho . u ^ conj v over f_*(Z)/degree
    int covering_degree = 1;
    double rel_diff = 0.0;   // |source - degree*target| / max(|degree*target|, eps)
};

DirectImageReport direct_image_check(const MapSpec& f, const CycleSpec& source_cycle,
                                     const CycleSpec& image_cycle, int covering_degree,
                                     const CutoffSpec& rho, const DiffForm& u, const DiffForm& v,
                                     const QuadOptions& opt = {});

} // namespace betaforms
