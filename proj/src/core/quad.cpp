#include "core/quad.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace betaforms {

namespace {

using Cplx = std::complex<double>;

struct GaussRule {
    std::vector<double> x, w; // nodes and weights on [-1, 1]
};

GaussRule gauss_legendre(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int k = 0; k < n; ++k) {
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            // Legendre P_n(x) and P_n'(x) by recurrence
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.x[k] = x;
        r.w[k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

Cplx eval_mero(const MeroFunction& f, const std::vector<Cplx>& pt) {
    return f.eval(pt);
}

// Everything precomputed to evaluate one patch numerically.
struct PatchEval {
    const Variety* X = nullptr;
    const Patch* patch = nullptr;
    std::vector<Polynomial> dchart;    // d(chart components)/d(disc param)
    std::vector<Polynomial> amb;       // ambient composite of the patch
    std::vector<Polynomial> damb;      // d(amb)/d(disc param)
    std::vector<Polynomial> rho_amb;   // point fed to the cutoff (may go through a map)
    std::vector<Polynomial> drho_amb;  // not used by rho itself; kept for Stokes
    Polynomial cutoff_comp;            // cutoff function along the patch
    // radial exclusion |c| r^e > eps when cutoff_comp is a monomial in the disc var
    bool radial = false;
    int radial_exp = 0;
    Polynomial radial_coeff; // in the family variable only

    PatchEval(const Variety& Xv, const Patch& p, const MapSpec* through_map) : X(&Xv), patch(&p) {
        for (const auto& comp : p.components) dchart.push_back(comp.derivative(0));
        if (p.coords == Coords::Parameter) {
            for (const auto& comp : Xv.data().param->components)
                amb.push_back(comp.substitute(p.components, p.domain));
        } else {
            amb = p.components;
        }
        for (const auto& comp : amb) damb.push_back(comp.derivative(0));
        if (through_map) {
            for (const auto& comp : through_map->components)
                rho_amb.push_back(comp.substitute(amb, p.domain));
        } else {
            rho_amb = amb;
        }
        for (const auto& comp : rho_amb) drho_amb.push_back(comp.derivative(0));

        Polynomial cf = Xv.cutoff_function();
        cutoff_comp = cf.is_zero() ? Polynomial::zero(p.domain) : cf.substitute(amb, p.domain);
        if (!cutoff_comp.is_zero() && cutoff_comp.is_monomial()) {
            auto [e, c] = *cutoff_comp.terms().begin();
            radial = true;
            radial_exp = e[0];
            Expo rest = e;
            rest[0] = 0;
            radial_coeff = Polynomial::monomial(p.domain, rest, c);
        }
    }

    std::vector<Cplx> domain_point(Cplx z, double t) const {
        std::vector<Cplx> pt(patch->domain->names.size(), Cplx(0.0, 0.0));
        pt[0] = z;
        if (patch->family_var >= 0) pt[patch->family_var] = Cplx(t, 0.0);
        return pt;
    }

    std::vector<Cplx> chart_point(const std::vector<Cplx>& dp) const {
        std::vector<Cplx> w;
        w.reserve(patch->components.size());
        for (const auto& comp : patch->components) w.push_back(comp.eval(dp));
        return w;
    }
};

// value of a 1-form through the patch: sum over kept differentials of
// f_i(chart point) * d(chart_i)/d(zeta)
Cplx form_value(const PatchEval& pe, const DiffForm& f, const std::vector<Cplx>& dp,
                const std::vector<Cplx>& w) {
    Cplx acc(0.0, 0.0);
    for (const auto& [I, m] : f.comps) {
        Cplx dpart(1.0, 0.0);
        for (int i : I) dpart *= pe.dchart[i].eval(dp);
        acc += eval_mero(m, w) * dpart;
    }
    return acc;
}

double rho_s(const PatchEval& pe, const CutoffSpec& rho, const std::vector<Cplx>& dp) {
    double s = 0.0;
    for (size_t j = 0; j < pe.rho_amb.size(); ++j) {
        Cplx d = pe.rho_amb[j].eval(dp);
        if (j < rho.center.size()) d -= rho.center[j];
        s += std::norm(d);
    }
    return s / (rho.radius * rho.radius);
}

// complex derivative of s(zeta) (the bump argument) along the patch
Cplx rho_s_dz(const PatchEval& pe, const CutoffSpec& rho, const std::vector<Cplx>& dp) {
    Cplx acc(0.0, 0.0);
    for (size_t j = 0; j < pe.rho_amb.size(); ++j) {
        Cplx d = pe.rho_amb[j].eval(dp);
        if (j < rho.center.size()) d -= rho.center[j];
        acc += std::conj(d) * pe.drho_amb[j].eval(dp);
    }
    return acc / (rho.radius * rho.radius);
}

using Integrand = std::function<Cplx(const PatchEval&, const std::vector<Cplx>& domain_pt,
                                     const std::vector<Cplx>& chart_pt)>;

// bump argument as a function of the patch radius, when it is rotation
// invariant: s(r) = (const_part + sum coeff_i r^{e_i}) / R^2, increasing
struct RadialBump {
    double const_part = 0.0;
    std::vector<std::pair<double, int>> terms;

    double s_of(double r) const {
        double s = const_part;
        for (const auto& [c, e] : terms) s += c * std::pow(r, e);
        return s;
    }
    // largest radius with s <= limit (bisection; monotone increasing)
    double edge(double limit, double rmax) const {
        if (s_of(0.0) >= limit) return 0.0;
        if (s_of(rmax) <= limit) return rmax;
        double lo = 0.0, hi = rmax;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (s_of(mid) <= limit ? lo : hi) = mid;
        }
        return lo;
    }
};

// detects a rotation-invariant bump along the patch: every component feeding
// rho must be a monomial in the disc variable with zero matching center, or
// constant in the disc variable
std::optional<RadialBump> radial_bump(const PatchEval& pe, const CutoffSpec& rho, double t) {
    RadialBump rb;
    double R2 = rho.radius * rho.radius;
    int fam = pe.patch->family_var;
    for (size_t j = 0; j < pe.rho_amb.size(); ++j) {
        const Polynomial& comp = pe.rho_amb[j];
        Cplx center = j < rho.center.size() ? rho.center[j] : Cplx(0.0, 0.0);
        if (comp.is_zero() || (comp.is_monomial() && comp.terms().begin()->first[0] == 0)) {
            // constant in the disc variable
            std::vector<Cplx> dp = pe.domain_point(Cplx(0.0, 0.0), t);
            rb.const_part += std::norm(comp.eval(dp) - center) / R2;
            continue;
        }
        if (!comp.is_monomial()) return std::nullopt;
        if (std::abs(center) != 0.0) return std::nullopt;
        auto [e, c] = *comp.terms().begin();
        for (size_t k = 1; k < e.size(); ++k)
            if (e[k] > 0 && static_cast<int>(k) != fam) return std::nullopt;
        double coeff = c.to_double();
        if (fam >= 0) coeff *= std::pow(t, e[fam]);
        rb.terms.push_back({coeff * coeff / R2, 2 * e[0]});
    }
    return rb;
}

// integral over the patch disc with the epsilon exclusion; the quadrature
// domain is clipped to the bump support when the bump is rotation invariant,
// otherwise a fixed composite-panel rule is used across the kink
Cplx patch_integral(const PatchEval& pe, const CutoffSpec& rho, double eps, double t, int nr,
                    int na, const Integrand& F) {
    double R = pe.patch->radius;
    double r0 = 0.0;
    bool indicator = false;
    if (!pe.cutoff_comp.is_zero() && eps > 0.0) {
        if (pe.radial) {
            double c = std::abs(pe.radial_coeff.eval(std::vector<Cplx>(
                pe.patch->domain->names.size(), Cplx(t, 0.0))));
            if (c > 0.0 && pe.radial_exp > 0)
                r0 = std::min(R, std::pow(eps / c, 1.0 / pe.radial_exp));
        } else {
            indicator = true;
        }
    }
    double r_hi = R;
    int panels = 6;
    if (auto rb = radial_bump(pe, rho, t)) {
        r_hi = rb->edge(1.0, R);
        panels = 1; // integrand is smooth on [r0, r_hi]
    }
    if (r_hi <= r0) return Cplx(0.0, 0.0);

    int per_panel = std::max(8, nr / panels);
    GaussRule g = gauss_legendre(per_panel);
    Cplx acc(0.0, 0.0);
    for (int pnl = 0; pnl < panels; ++pnl) {
        double a = r0 + (r_hi - r0) * pnl / panels;
        double b = r0 + (r_hi - r0) * (pnl + 1) / panels;
        for (int k = 0; k < per_panel; ++k) {
            double r = 0.5 * (b + a) + 0.5 * (b - a) * g.x[k];
            double wr = 0.5 * (b - a) * g.w[k] * r;
            for (int j = 0; j < na; ++j) {
                double th = 2.0 * M_PI * j / na;
                Cplx z = std::polar(r, th);
                std::vector<Cplx> dp = pe.domain_point(z, t);
                if (indicator && std::abs(pe.cutoff_comp.eval(dp)) <= eps) continue;
                std::vector<Cplx> w = pe.chart_point(dp);
                acc += F(pe, dp, w) * (wr * 2.0 * M_PI / na);
            }
        }
    }
    return acc * static_cast<double>(pe.patch->multiplicity);
}

struct EvalContext {
    std::vector<PatchEval> patches;
};

EvalContext make_context(const VarietyPtr& X, const CycleSpec& cycle, const MapSpec* through_map) {
    validate_cycle(*X, cycle);
    EvalContext ctx;
    for (const auto& p : cycle.patches) ctx.patches.push_back(PatchEval(*X, p, through_map));
    return ctx;
}

DiffForm to_patch_chart(const VarietyPtr& X, const DiffForm& f, Coords coords) {
    return coords == Coords::Parameter ? X->to_cover(X->to_canonical(f)) : X->to_ambient(f);
}

IntegralReport run_integral(const EvalContext& ctx, const CutoffSpec& rho, const Integrand& F,
                            double t, const QuadOptions& opt, bool with_mass) {
    IntegralReport rep;
    rep.n_radial = opt.n_radial;
    rep.n_angular = opt.n_angular;
    double ratio = std::pow(opt.eps_min / opt.eps_max, 1.0 / std::max(1, opt.eps_count - 1));
    for (int i = 0; i < opt.eps_count; ++i) rep.eps.push_back(opt.eps_max * std::pow(ratio, i));

    for (double e : rep.eps) {
        Cplx acc(0.0, 0.0);
        for (const auto& pe : ctx.patches) acc += patch_integral(pe, rho, e, t, opt.n_radial, opt.n_angular, F);
        rep.values.push_back(acc);
    }
    // refined quadrature at the smallest epsilon for the error estimate
    {
        Cplx acc(0.0, 0.0);
        for (const auto& pe : ctx.patches)
            acc += patch_integral(pe, rho, rep.eps.back(), t, opt.n_radial * 3 / 2, opt.n_angular * 3 / 2, F);
        rep.quad_error = std::abs(acc - rep.values.back());
    }
    // iterated Aitken extrapolation; exact on geometric tails, and the
    // sweeps clean up the subdominant scales
    auto aitken = [](std::vector<Cplx> seq) {
        double scale = 0.0;
        for (const auto& v : seq) scale = std::max(scale, std::abs(v));
        for (int sweep = 0; sweep < 3 && seq.size() >= 3; ++sweep) {
            std::vector<Cplx> next;
            for (size_t i = 0; i + 2 < seq.size(); ++i) {
                Cplx d1 = seq[i + 1] - seq[i];
                Cplx d2 = seq[i + 2] - seq[i + 1];
                Cplx dd = d2 - d1;
                if (std::abs(dd) < 1e-14 * std::max(1.0, scale)) {
                    next.push_back(seq[i + 2]);
                } else {
                    next.push_back(seq[i + 2] - d2 * d2 / dd);
                }
            }
            seq = std::move(next);
        }
        return seq.back();
    };
    rep.limit = rep.values.size() >= 3 ? aitken(rep.values) : rep.values.back();

    // convergence: increments decrease monotonically and the extrapolated
    // limit is stable under dropping the last epsilon level
    bool mono = true;
    {
        double scale = 0.0;
        for (const auto& v : rep.values) scale = std::max(scale, std::abs(v));
        double noise = 1e-13 * std::max(1.0, scale);
        double prev = -1.0;
        for (size_t i = 1; i < rep.values.size(); ++i) {
            double d = std::abs(rep.values[i] - rep.values[i - 1]);
            if (prev >= 0.0 && d > prev * (1.0 + 1e-9) + noise) mono = false;
            prev = d;
        }
    }
    if (rep.values.size() >= 4) {
        std::vector<Cplx> head(rep.values.begin(), rep.values.end() - 1);
        double drift = std::abs(rep.limit - aitken(head));
        double bar = std::max(opt.tol * std::max(1.0, std::abs(rep.limit)),
                              8.0 * rep.quad_error + 1e-13);
        rep.converged = mono && drift <= bar;
    } else {
        rep.converged = mono;
    }
    if (with_mass) {
        Integrand M = [&rho](const PatchEval& pe, const std::vector<Cplx>& dp,
                             const std::vector<Cplx>& w) -> Cplx {
            (void)w;
            double r = rho.value(rho_s(pe, rho, dp));
            double h = 0.0;
            for (const auto& dcomp : pe.damb) h += std::norm(dcomp.eval(dp));
            return Cplx(std::abs(r) * h, 0.0);
        };
        Cplx acc(0.0, 0.0);
        for (const auto& pe : ctx.patches) acc += patch_integral(pe, rho, 0.0, t, opt.n_radial, opt.n_angular, M);
        rep.mass = acc.real();
    }
    return rep;
}

} // namespace

IntegralReport integrate(const VarietyPtr& X, const CycleSpec& cycle, const CutoffSpec& rho,
                         const DiffForm& u, const DiffForm& v, const QuadOptions& opt) {
    if (u.q != cycle.dim || v.q != cycle.dim)
        throw std::invalid_argument("integrate: form degrees must equal the cycle dimension");
    for (const auto& p : cycle.patches)
        if (p.family_var >= 0)
            throw std::invalid_argument("family cycles are integrated through family_scan");
    EvalContext ctx = make_context(X, cycle, nullptr);
    // one converted form per patch chart
    std::vector<DiffForm> ups, vps;
    for (const auto& p : cycle.patches) {
        ups.push_back(to_patch_chart(X, u, p.coords));
        vps.push_back(to_patch_chart(X, v, p.coords));
    }
    // all patches share the conversion by chart kind; evaluate per patch index
    IntegralReport total;
    bool first = true;
    for (size_t pi = 0; pi < ctx.patches.size(); ++pi) {
        const DiffForm& up = ups[pi];
        const DiffForm& vp = vps[pi];
        Integrand F = [&rho, &up, &vp](const PatchEval& pe, const std::vector<Cplx>& dp,
                                       const std::vector<Cplx>& w) -> Cplx {
            double r = rho.value(rho_s(pe, rho, dp));
            if (r == 0.0) return Cplx(0.0, 0.0);
            Cplx U = form_value(pe, up, dp, w);
            Cplx V = form_value(pe, vp, dp, w);
            return r * U * std::conj(V);
        };
        EvalContext single;
        single.patches.push_back(ctx.patches[pi]);
        IntegralReport rep = run_integral(single, rho, F, 0.0, opt, true);
        if (first) {
            total = rep;
            first = false;
        } else {
            for (size_t i = 0; i < total.values.size(); ++i) total.values[i] += rep.values[i];
            total.limit += rep.limit;
            total.mass += rep.mass;
            total.quad_error += rep.quad_error;
            total.converged = total.converged && rep.converged;
        }
    }
    return total;
}

StokesReport stokes_residual(const VarietyPtr& X, const CycleSpec& cycle, const CutoffSpec& rho,
                             const DiffForm& u, const DiffForm& v, const QuadOptions& opt) {
    if (rho.smoothness != BumpClass::C1)
        throw std::invalid_argument("Stokes runs need a C1 cutoff");
    if (u.q != cycle.dim - 1 || v.q != cycle.dim)
        throw std::invalid_argument("stokes_residual: need deg u = p-1 and deg v = p");
    EvalContext ctx = make_context(X, cycle, nullptr);

    StokesReport out;
    bool first = true;
    for (size_t pi = 0; pi < ctx.patches.size(); ++pi) {
        Coords pc = cycle.patches[pi].coords;
        const Chart& chart = X->chart_for(pc);
        DiffForm up = to_patch_chart(X, u, pc);
        DiffForm vp = to_patch_chart(X, v, pc);
        // symbolic derivative data for U' = sum over chart vars of df/dvar * dcomp_var
        MeroFunction uf = up.is_zero() ? MeroFunction::zero(chart.ctx) : up.comps.begin()->second;
        std::vector<MeroFunction> dudvar;
        for (size_t vi = 0; vi < chart.ctx->names.size(); ++vi)
            dudvar.push_back(uf.derivative(static_cast<int>(vi)));
        std::vector<Polynomial> dcomp_all;
        for (const auto& comp : cycle.patches[pi].components) dcomp_all.push_back(comp.derivative(0));

        Integrand F = [&rho, &vp, &uf, &dudvar, &dcomp_all](const PatchEval& pe,
                                                            const std::vector<Cplx>& dp,
                                                            const std::vector<Cplx>& w) -> Cplx {
            double s = rho_s(pe, rho, dp);
            double r = rho.value(s);
            double dB = rho.derivative(s);
            Cplx U = eval_mero(uf, w);
            Cplx V = form_value(pe, vp, dp, w);
            Cplx drho = dB * rho_s_dz(pe, rho, dp);
            Cplx Uprime(0.0, 0.0);
            for (size_t vi = 0; vi < dudvar.size(); ++vi)
                if (!dudvar[vi].is_zero()) Uprime += eval_mero(dudvar[vi], w) * dcomp_all[vi].eval(dp);
            Cplx integrand = (drho * U + Cplx(r, 0.0) * Uprime) * std::conj(V);
            return integrand * Cplx(0.0, -2.0); // dzeta ^ dzeta-bar = -2i dA
        };
        EvalContext single;
        single.patches.push_back(ctx.patches[pi]);
        IntegralReport rep = run_integral(single, rho, F, 0.0, opt, false);
        if (first) {
            out.report = rep;
            first = false;
        } else {
            for (size_t i = 0; i < out.report.values.size(); ++i)
                out.report.values[i] += rep.values[i];
            out.report.limit += rep.limit;
            out.report.quad_error += rep.quad_error;
            out.report.converged = out.report.converged && rep.converged;
        }
    }
    out.residual = std::abs(out.report.limit);
    return out;
}

FamilyScan family_scan(const VarietyPtr& X, const CycleSpec& family_cycle, const CutoffSpec& rho,
                       const DiffForm& u, const DiffForm& v, const std::vector<double>& grid,
                       const QuadOptions& opt) {
    EvalContext ctx = make_context(X, family_cycle, nullptr);
    std::vector<DiffForm> ups, vps;
    for (const auto& p : family_cycle.patches) {
        ups.push_back(to_patch_chart(X, u, p.coords));
        vps.push_back(to_patch_chart(X, v, p.coords));
    }
    FamilyScan scan;
    scan.all_converged = true;
    for (double t : grid) {
        // the exclusion radius must stay inside the patch: scale the epsilon
        // window by the cutoff coefficient along the patch at this t
        QuadOptions topt = opt;
        {
            double cap = opt.eps_max;
            for (const auto& pe : ctx.patches) {
                if (pe.cutoff_comp.is_zero() || !pe.radial) continue;
                std::vector<Cplx> fp(pe.patch->domain->names.size(), Cplx(t, 0.0));
                double c = std::abs(pe.radial_coeff.eval(fp));
                if (c > 0.0)
                    cap = std::min(cap, 0.5 * c * std::pow(0.9 * pe.patch->radius, pe.radial_exp));
            }
            if (cap < opt.eps_max) {
                topt.eps_min = cap * (opt.eps_min / opt.eps_max);
                topt.eps_max = cap;
            }
        }
        FamilyRow row;
        row.t = t;
        Cplx acc(0.0, 0.0);
        double mass = 0.0;
        bool conv = true;
        for (size_t pi = 0; pi < ctx.patches.size(); ++pi) {
            const DiffForm& up = ups[pi];
            const DiffForm& vp = vps[pi];
            Integrand F = [&rho, &up, &vp](const PatchEval& pe, const std::vector<Cplx>& dp,
                                           const std::vector<Cplx>& w) -> Cplx {
                double r = rho.value(rho_s(pe, rho, dp));
                if (r == 0.0) return Cplx(0.0, 0.0);
                return r * form_value(pe, up, dp, w) * std::conj(form_value(pe, vp, dp, w));
            };
            EvalContext single;
            single.patches.push_back(ctx.patches[pi]);
            IntegralReport rep = run_integral(single, rho, F, t, topt, true);
            acc += rep.limit;
            mass += rep.mass;
            conv = conv && rep.converged;
        }
        row.value = acc;
        row.mass = mass;
        row.converged = conv;
        scan.rows.push_back(row);
        scan.sup_abs = std::max(scan.sup_abs, std::abs(acc));
        if (mass > 0.0) scan.bound_constant = std::max(scan.bound_constant, std::abs(acc) / mass);
        scan.all_converged = scan.all_converged && conv;
    }
    return scan;
}

DirectImageReport direct_image_check(const MapSpec& f, const CycleSpec& source_cycle,
                                     const CycleSpec& image_cycle, int covering_degree,
                                     const CutoffSpec& rho, const DiffForm& u, const DiffForm& v,
                                     const QuadOptions& opt) {
    DirectImageReport rep;
    rep.covering_degree = covering_degree;
    DiffForm fu = pullback(f, u);
    DiffForm fv = pullback(f, v);

    // source side: rho goes through the map
    EvalContext ctx = make_context(f.source, source_cycle, &f);
    IntegralReport src;
    bool first = true;
    for (size_t pi = 0; pi < ctx.patches.size(); ++pi) {
        Coords pc = source_cycle.patches[pi].coords;
        DiffForm up = to_patch_chart(f.source, fu, pc);
        DiffForm vp = to_patch_chart(f.source, fv, pc);
        Integrand F = [&rho, &up, &vp](const PatchEval& pe, const std::vector<Cplx>& dp,
                                       const std::vector<Cplx>& w) -> Cplx {
            double r = rho.value(rho_s(pe, rho, dp));
            if (r == 0.0) return Cplx(0.0, 0.0);
            return r * form_value(pe, up, dp, w) * std::conj(form_value(pe, vp, dp, w));
        };
        EvalContext single;
        single.patches.push_back(ctx.patches[pi]);
        IntegralReport r1 = run_integral(single, rho, F, 0.0, opt, true);
        if (first) {
            src = r1;
            first = false;
        } else {
            for (size_t i = 0; i < src.values.size(); ++i) src.values[i] += r1.values[i];
            src.limit += r1.limit;
            src.mass += r1.mass;
            src.converged = src.converged && r1.converged;
        }
    }
    rep.source = src;
    rep.target = integrate(f.target, image_cycle, rho, u, v, opt);

    Cplx lhs = rep.source.limit;
    Cplx rhs = static_cast<double>(covering_degree) * rep.target.limit;
    double denom = std::max(std::abs(rhs), 1e-12);
    rep.rel_diff = std::abs(lhs - rhs) / denom;
    return rep;
}

} // namespace betaforms
