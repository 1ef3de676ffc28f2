#include "core/pullback.hpp"

#include <cctype>
#include <stdexcept>

namespace betaforms {

MapSpec make_map(std::string name, VarietyPtr source, VarietyPtr target,
                 std::vector<Polynomial> components, std::vector<Rational> witness) {
    MapSpec f;
    f.name = std::move(name);
    f.source = std::move(source);
    f.target = std::move(target);
    f.components = std::move(components);
    f.witness = std::move(witness);

    const auto& tvars = f.target->data().ambient_vars;
    if (f.components.size() != tvars.size())
        throw std::invalid_argument("map needs one component per target ambient variable");
    // target equations pull back into the source ideal
    const CtxPtr& sctx = f.source->ambient_chart().ctx;
    for (const auto& eq : f.target->data().equations) {
        Polynomial pulled = eq.substitute(f.components, sctx);
        if (!f.source->ideal().contains(pulled))
            throw std::invalid_argument("map '" + f.name + "' does not land on the target variety");
    }
    // witness: on the source, mapped outside the singular set of the target
    if (f.witness.size() != f.source->data().ambient_vars.size())
        throw std::invalid_argument("witness point has wrong length");
    for (const auto& eq : f.source->data().equations)
        if (!eq.eval(f.witness).is_zero())
            throw std::invalid_argument("witness point is not on the source variety");
    std::vector<Rational> image;
    for (const auto& c : f.components) image.push_back(c.eval(f.witness));
    bool outside = f.target->data().singular_locus.empty();
    for (const auto& g : f.target->data().singular_locus)
        if (!g.eval(image).is_zero()) outside = true;
    if (!outside)
        throw std::invalid_argument("witness maps into the singular set of the target; f(X) may lie in S(Y)");
    return f;
}

MapSpec identity_map(const VarietyPtr& v) {
    const CtxPtr& ctx = v->ambient_chart().ctx;
    std::vector<Polynomial> comps;
    for (size_t i = 0; i < ctx->names.size(); ++i)
        comps.push_back(Polynomial::variable(ctx, static_cast<int>(i)));
    std::vector<Rational> w = default_witness(v);
    return make_map("id:" + v->id(), v, v, std::move(comps), std::move(w));
}

MapSpec compose_map(const MapSpec& g, const MapSpec& f) {
    if (f.target->id() != g.source->id())
        throw std::invalid_argument("compose: inner target differs from outer source");
    const CtxPtr& sctx = f.source->ambient_chart().ctx;
    std::vector<Polynomial> comps;
    for (const auto& gj : g.components) comps.push_back(gj.substitute(f.components, sctx));
    return make_map(g.name + "." + f.name, f.source, g.target, std::move(comps), f.witness);
}

DiffForm pullback(const MapSpec& f, const DiffForm& u_on_target) {
    const Chart& tch = f.target->ambient_chart();
    const Chart& sch = f.source->ambient_chart();
    DiffForm u = f.target->to_ambient(u_on_target);

    // pullbacks of the target's kept coordinate differentials, as source forms
    std::map<int, DiffForm> dcomp;
    for (int j : tch.diff_vars) {
        DiffForm cj = form_function(sch, MeroFunction(f.components[j]));
        dcomp[j] = exterior_d(sch, cj);
    }

    DiffForm out = form_zero(u.q, Coords::Ambient);
    for (const auto& [J, coeff] : u.comps) {
        Polynomial num = coeff.num().substitute(f.components, sch.ctx);
        // denominator: target pole monomial -> product of source components
        MeroFunction pulled = MeroFunction(num);
        for (size_t v = 0; v < coeff.den().size(); ++v) {
            int e = coeff.den()[v];
            if (e == 0) continue;
            const Polynomial& cv = f.components[v];
            Polynomial cv_nf = f.source->ideal().nf(cv);
            if (cv_nf.is_zero())
                throw std::invalid_argument(
                    "denominator pulls back to a zero divisor: image of '" + f.name +
                    "' lies in the pole locus of " + tch.ctx->names[v]);
            if (!cv_nf.is_monomial())
                throw std::invalid_argument(
                    "denominator variable " + tch.ctx->names[v] +
                    " pulls back to a non-monomial; form not representable over the source");
            auto [me, mc] = *cv_nf.terms().begin();
            for (int rep = 0; rep < e; ++rep) pulled = pulled.mul_laurent(expo_sub(Expo(me.size(), 0), me));
            pulled = pulled.scaled(mc.pow(e).inv());
        }
        DiffForm piece = form_function(sch, pulled);
        for (int j : J) piece = wedge(sch, piece, dcomp.at(j));
        out = form_add(out, piece);
    }
    out = form_nf(sch, out);
    if (!f.source->parametrized()) {
        for (const auto& [k, m] : out.comps) {
            (void)k;
            if (!sch.pole_ok(m.den()))
                throw std::invalid_argument("pullback has poles outside the source's declared pole set");
        }
    }
    return f.source->to_canonical(out);
}

DiffForm restrict_form(const MapSpec& inclusion, const DiffForm& u) {
    return pullback(inclusion, u);
}

namespace {

int parse_int(const std::string& s, const std::string& token) {
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("bad map token: " + token);
    if (s.empty()) throw std::invalid_argument("bad map token: " + token);
    return std::stoi(s);
}

} // namespace

std::vector<Rational> default_witness(const VarietyPtr& v) {
    // a simple rational point on each registered variety, away from the
    // singular locus of any relevant target
    const auto& id = v->id();
    const auto& vars = v->data().ambient_vars;
    if (id == "curve35") return {Rational(1), Rational(1)};
    if (id == "line") return {Rational(1)};
    if (id == "plane") return {Rational(1), Rational(1)};
    if (id.size() > 1 && id[0] == 'S' && id.back() != 'C') {
        return {Rational(1), Rational(1), Rational(1)}; // xy = z^k at (1,1,1)
    }
    if (id.size() > 2 && id.substr(id.size() - 2) == "xC") {
        std::vector<Rational> w(vars.size(), Rational(1));
        return w;
    }
    if (id[0] == 'M') return {Rational(1), Rational(1), Rational(1), Rational(1)};
    if (id[0] == 'F') {
        // a^n - b^n = z^n at (1, 1, 0)? z = 0 is fine only off the singular set;
        // use b = 0: (1, 0, 1) satisfies 1 - 0 = 1
        return {Rational(1), Rational(0), Rational(1)};
    }
    return std::vector<Rational>(vars.size(), Rational(1));
}

MapSpec builtin_map(const std::string& token, Registry& reg) {
    auto colon = token.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("map token needs ':': " + token);
    std::string kind = token.substr(0, colon);
    std::string arg = token.substr(colon + 1);

    if (kind == "id") {
        return identity_map(reg.get(arg));
    }
    if (kind == "qk") {
        int k = parse_int(arg, token);
        VarietyPtr plane = reg.get("plane");
        VarietyPtr sk = reg.get("S" + arg);
        const CtxPtr& ctx = plane->ambient_chart().ctx;
        Polynomial a = Polynomial::variable(ctx, 0), b = Polynomial::variable(ctx, 1);
        return make_map(token, plane, sk, {a.pow(k), b.pow(k), a * b}, {Rational(1), Rational(1)});
    }
    if (kind == "fermat") {
        int n = parse_int(arg, token);
        if (n % 2 != 0) throw std::invalid_argument("fermat:<n> map needs even n");
        int p = n / 2;
        VarietyPtr fn = reg.get("F" + arg);
        VarietyPtr sn = reg.get("S" + arg);
        const CtxPtr& ctx = fn->ambient_chart().ctx;
        Polynomial a = Polynomial::variable(ctx, 0), b = Polynomial::variable(ctx, 1),
                   z = Polynomial::variable(ctx, 2);
        // (a,b,z) -> (x,y,z) = (a^p - b^p, a^p + b^p, z); xy = a^n - b^n = z^n
        return make_map(token, fn, sn, {a.pow(p) - b.pow(p), a.pow(p) + b.pow(p), z},
                        {Rational(1), Rational(0), Rational(1)});
    }
    if (kind == "pi") {
        // S_k x C -> M_k, ((x,y,z),v) -> (xv, y, z, v)
        VarietyPtr src = reg.get("S" + arg + "xC");
        VarietyPtr mk = reg.get("M" + arg);
        const CtxPtr& ctx = src->ambient_chart().ctx;
        Polynomial x = Polynomial::variable(ctx, 0), y = Polynomial::variable(ctx, 1),
                   z = Polynomial::variable(ctx, 2), v = Polynomial::variable(ctx, 3);
        return make_map(token, src, mk, {x * v, y, z, v},
                        {Rational(1), Rational(1), Rational(1), Rational(1)});
    }
    if (kind == "slice") {
        // S_k -> M_k, v = 1
        VarietyPtr sk = reg.get("S" + arg);
        VarietyPtr mk = reg.get("M" + arg);
        const CtxPtr& ctx = sk->ambient_chart().ctx;
        Polynomial x = Polynomial::variable(ctx, 0), y = Polynomial::variable(ctx, 1),
                   z = Polynomial::variable(ctx, 2);
        return make_map(token, sk, mk, {x, y, z, Polynomial::constant(ctx, Rational(1))},
                        {Rational(1), Rational(1), Rational(1)});
    }
    if (kind == "sliceqk") {
        MapSpec inner = builtin_map("qk:" + arg, reg);
        MapSpec outer = builtin_map("slice:" + arg, reg);
        return compose_map(outer, inner);
    }
    throw std::invalid_argument("unknown map token: " + token);
}

} // namespace betaforms
