#include "core/cycles.hpp"

#include <json.hpp>

#include <stdexcept>

namespace betaforms {

double CutoffSpec::value(double s) const {
    if (s >= 1.0) return 0.0;
    double t = 1.0 - s;
    return smoothness == BumpClass::C0 ? t : t * t;
}

double CutoffSpec::derivative(double s) const {
    if (s >= 1.0) return 0.0;
    if (smoothness == BumpClass::C0)
        throw std::logic_error("C0 bump has no derivative; Stokes runs need the C1 tag");
    return -2.0 * (1.0 - s);
}

void validate_cycle(const Variety& X, const CycleSpec& c) {
    if (c.dim != 1)
        throw std::invalid_argument("only 1-dimensional cycles are supported numerically");
    if (c.patches.empty()) throw std::invalid_argument("cycle has no patches");
    for (const auto& p : c.patches) {
        const Chart& ch = X.chart_for(p.coords);
        if (p.components.size() != ch.ctx->names.size())
            throw std::invalid_argument("patch component count does not match the chart");
        // ambient image of the patch, symbolically
        std::vector<Polynomial> amb;
        if (p.coords == Coords::Parameter) {
            for (const auto& comp : X.data().param->components)
                amb.push_back(comp.substitute(p.components, p.domain));
        } else {
            amb = p.components;
        }
        for (const auto& eq : X.data().equations) {
            Polynomial residual = eq.substitute(amb, p.domain);
            if (!residual.is_zero())
                throw std::invalid_argument("patch does not land on " + X.id() +
                                            ": residual " + residual.str());
        }
        // no patch component inside the singular locus
        bool inside_singular = !X.data().singular_locus.empty();
        for (const auto& g : X.data().singular_locus)
            if (!g.substitute(amb, p.domain).is_zero()) inside_singular = false;
        if (inside_singular)
            throw std::invalid_argument("patch lies inside the singular locus of " + X.id());
        if (p.radius <= 0) throw std::invalid_argument("patch radius must be positive");
        if (p.multiplicity == 0) throw std::invalid_argument("zero multiplicity patch");
    }
}

CycleSpec parse_cycle_json(const std::string& text, Registry& reg) {
    nlohmann::json j = nlohmann::json::parse(text);
    CycleSpec c;
    c.variety = j.at("variety").get<std::string>();
    c.dim = j.value("dim", 1);
    VarietyPtr X = reg.get(c.variety);
    for (const auto& pj : j.at("patches")) {
        Patch p;
        std::string coords = pj.value("coords", "cover");
        p.coords = coords == "ambient" ? Coords::Ambient : Coords::Parameter;
        std::vector<std::string> params = pj.at("params").get<std::vector<std::string>>();
        p.domain = make_ctx(params);
        std::string family = pj.value("family", "");
        if (!family.empty()) {
            p.family_var = p.domain->index_of(family);
            if (p.family_var < 0) throw std::invalid_argument("family parameter not among params");
        }
        const Chart& ch = X->chart_for(p.coords);
        for (const auto& comp : pj.at("components")) {
            DiffForm f = parse_form(comp.get<std::string>(), Chart{p.domain, Coords::Ambient,
                                                                    {}, {}, Expo(params.size(), 0),
                                                                    nullptr});
            if (f.q != 0 || (!f.is_zero() && f.comps.begin()->second.has_denominator()))
                throw std::invalid_argument("patch components must be polynomials: " +
                                            comp.get<std::string>());
            p.components.push_back(f.is_zero() ? Polynomial::zero(p.domain)
                                               : f.comps.begin()->second.num());
        }
        (void)ch;
        p.radius = pj.value("radius", 1.0);
        p.multiplicity = pj.value("multiplicity", 1);
        c.patches.push_back(std::move(p));
    }
    validate_cycle(*X, c);
    return c;
}

CycleSpec stock_cycle(const VarietyPtr& X, const std::string& name) {
    CycleSpec c;
    c.variety = X->id();
    c.dim = 1;
    Patch p;
    if (name == "self") {
        if (!X->parametrized() || X->dim() != 1)
            throw std::invalid_argument("'self' needs a parametrized curve");
        p.coords = Coords::Parameter;
        p.domain = make_ctx({"s"});
        p.components = {Polynomial::variable(p.domain, 0)};
    } else if (name == "diag") {
        if (!X->parametrized() || X->dim() != 2)
            throw std::invalid_argument("'diag' needs a parametrized surface");
        p.coords = Coords::Parameter;
        p.domain = make_ctx({"s"});
        Polynomial s = Polynomial::variable(p.domain, 0);
        p.components = {s, s};
    } else if (name == "diag-family") {
        if (!X->parametrized() || X->dim() != 2)
            throw std::invalid_argument("'diag-family' needs a parametrized surface");
        p.coords = Coords::Parameter;
        p.domain = make_ctx({"s", "T"});
        Polynomial s = Polynomial::variable(p.domain, 0);
        Polynomial T = Polynomial::variable(p.domain, 1);
        p.components = {s, T * s};
        p.family_var = 1;
    } else if (name == "axis-line") {
        p.coords = Coords::Ambient;
        p.domain = make_ctx({"s"});
        Polynomial s = Polynomial::variable(p.domain, 0);
        p.components = {s, Polynomial::zero(p.domain), Polynomial::zero(p.domain)};
    } else {
        throw std::invalid_argument("unknown stock cycle: " + name);
    }
    c.patches.push_back(std::move(p));
    validate_cycle(*X, c);
    return c;
}

} // namespace betaforms
