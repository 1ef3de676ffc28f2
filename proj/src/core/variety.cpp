#include "core/variety.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace betaforms {

namespace {

Polynomial recontext(const Polynomial& p, const CtxPtr& new_ctx, const std::vector<int>& varmap) {
    Polynomial r = Polynomial::zero(new_ctx);
    int nn = static_cast<int>(new_ctx->names.size());
    for (const auto& [e, c] : p.terms()) {
        Expo ne(nn, 0);
        for (size_t i = 0; i < e.size(); ++i) ne[varmap[i]] = e[i];
        r.add_term(ne, c);
    }
    return r;
}

Polynomial det_poly(const std::vector<std::vector<Polynomial>>& m, const CtxPtr& ctx) {
    size_t n = m.size();
    if (n == 0) return Polynomial::constant(ctx, Rational(1));
    if (n == 1) return m[0][0];
    Polynomial acc = Polynomial::zero(ctx);
    for (size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<Polynomial>> sub;
        for (size_t r = 1; r < n; ++r) {
            std::vector<Polynomial> row;
            for (size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            sub.push_back(std::move(row));
        }
        Polynomial term = m[0][j] * det_poly(sub, ctx);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

// divide f by a one-term mero function (c*x^e / x^d)
MeroFunction divide_by_monomial(const MeroFunction& f, const MeroFunction& g) {
    if (g.is_zero() || !g.num().is_monomial())
        throw std::logic_error("pivot is not a monomial; chart solve unsupported");
    auto [e, c] = *g.num().terms().begin();
    Expo shift = expo_sub(g.den(), e);
    return f.mul_laurent(shift).scaled(c.inv());
}

} // namespace

const Chart& Variety::chart_for(Coords c) const {
    if (c == Coords::Parameter) {
        if (!cover_) throw std::logic_error("variety has no parameter chart: " + id());
        return *cover_;
    }
    return ambient_;
}

std::shared_ptr<const Variety> Variety::make(VarietyData d) {
    auto v = std::shared_ptr<Variety>(new Variety());
    v->d_ = std::move(d);
    v->build_charts();
    v->validate();
    return v;
}

void Variety::build_charts() {
    CtxPtr ctx;
    if (!d_.equations.empty()) ctx = d_.equations.front().ctx();
    else if (!d_.singular_locus.empty()) ctx = d_.singular_locus.front().ctx();
    else ctx = make_ctx(d_.ambient_vars);
    if (ctx->names != d_.ambient_vars)
        throw std::invalid_argument("ambient variable list does not match polynomial context");

    if (d_.equations.size() > 1)
        throw std::invalid_argument("only hypersurfaces are supported (at most one equation)");

    ideal_ = std::make_shared<IdealPresentation>(ctx, d_.equations);

    ambient_.ctx = ctx;
    ambient_.coords = Coords::Ambient;
    ambient_.ideal = ideal_;
    int nv = static_cast<int>(ctx->names.size());
    ambient_.pole_mask.assign(nv, 0);
    for (const auto& pv : d_.pole_vars) {
        int i = ctx->index_of(pv);
        if (i < 0) throw std::invalid_argument("pole variable not in ambient context: " + pv);
        ambient_.pole_mask[i] = 1;
    }

    int elim = -1;
    if (!d_.elim_var.empty()) {
        elim = ctx->index_of(d_.elim_var);
        if (elim < 0) throw std::invalid_argument("eliminated variable not in context: " + d_.elim_var);
        if (d_.equations.empty())
            throw std::invalid_argument("cannot eliminate a differential without an equation");
    }
    for (int i = 0; i < nv; ++i)
        if (i != elim) ambient_.diff_vars.push_back(i);

    if (elim >= 0) {
        const Polynomial& f = d_.equations.front();
        Polynomial dfe = f.derivative(elim);
        if (dfe.is_zero() || !dfe.is_monomial())
            throw std::invalid_argument("d(f)/d(elim) must be a nonzero monomial");
        auto [me, mc] = *dfe.terms().begin();
        for (size_t i = 0; i < me.size(); ++i)
            if (me[i] > 0 && ambient_.pole_mask[i] == 0)
                throw std::invalid_argument("d(f)/d(elim) must be supported on pole variables");
        std::vector<MeroFunction> expansion;
        for (int vkept : ambient_.diff_vars) {
            Polynomial dfv = f.derivative(vkept);
            expansion.push_back(MeroFunction(dfv.scaled(-mc.inv()), me));
        }
        ambient_.elim[elim] = std::move(expansion);
    }

    if (d_.param) {
        cover_.emplace();
        cover_->ctx = d_.param->cover_ctx;
        cover_->coords = Coords::Parameter;
        int cn = static_cast<int>(cover_->ctx->names.size());
        for (int i = 0; i < cn; ++i) cover_->diff_vars.push_back(i);
        cover_->pole_mask.assign(cn, 1); // Laurent coefficients allowed on the cover
        cover_weights_.assign(cn, 0);
        if (d_.deck) {
            if (static_cast<int>(d_.deck->weights.size()) != cn)
                throw std::invalid_argument("deck weight count must match cover variables");
            for (int i = 0; i < cn; ++i) {
                int w = d_.deck->weights[i] % d_.deck->order;
                if (w < 0) w += d_.deck->order;
                cover_weights_[i] = w;
            }
        }
        bool mono = true;
        monoid_gens_.clear();
        for (const auto& comp : d_.param->components) {
            if (!comp.is_monomial()) {
                mono = false;
                break;
            }
        }
        if (mono) {
            for (const auto& comp : d_.param->components)
                monoid_gens_.push_back(comp.terms().begin()->first);
        }
        d_.param->monomial = mono;
    }
}

void Variety::validate() const {
    const CtxPtr& actx = ambient_.ctx;
    if (d_.param) {
        if (static_cast<int>(d_.param->components.size()) != static_cast<int>(actx->names.size()))
            throw std::invalid_argument("parametrization needs one component per ambient variable");
        for (const auto& f : d_.equations) {
            Polynomial pulled = f.substitute(d_.param->components, d_.param->cover_ctx);
            if (!pulled.is_zero())
                throw std::invalid_argument("parametrization does not satisfy the defining equation of " +
                                            id() + ": residual " + pulled.str());
        }
        if (static_cast<int>(d_.param->cover_ctx->names.size()) != d_.dim)
            throw std::invalid_argument("cover dimension must equal the variety dimension");
        // generic finiteness: the kept-differential Jacobian block is nonsingular
        std::vector<std::vector<Polynomial>> m;
        for (int j : ambient_.diff_vars) {
            std::vector<Polynomial> row;
            for (int i = 0; i < d_.dim; ++i) row.push_back(d_.param->components[j].derivative(i));
            m.push_back(std::move(row));
        }
        if (det_poly(m, d_.param->cover_ctx).is_zero())
            throw std::invalid_argument("parametrization is degenerate (singular Jacobian block)");
        // monomial parametrizations must be deck-invariant
        for (const auto& e : monoid_gens_)
            if (class_of(e) != 0)
                throw std::invalid_argument("parametrization components must be deck-invariant");
    }
    for (const auto& pv : d_.pole_vars) {
        Polynomial p = Polynomial::variable(actx, actx->index_of(pv));
        if (ideal_->contains(p))
            throw std::invalid_argument("pole variable lies in the defining ideal: " + pv);
    }
    // declared data must parse; parametrized L generators must pull back holomorphically
    for (const auto& [q, texts] : d_.L_presentation) {
        for (const auto& t : texts) {
            DiffForm f = parse_form(t, ambient_);
            if (f.q != q) throw std::invalid_argument("L presentation degree mismatch: " + t);
            if (parametrized()) {
                DiffForm c = to_cover(f);
                for (const auto& [k, g] : c.comps) {
                    (void)k;
                    if (g.has_denominator())
                        throw std::invalid_argument("L generator does not pull back holomorphically: " + t);
                }
            }
        }
    }
    for (const auto& [q, texts] : d_.alpha_seed_decl)
        for (const auto& t : texts)
            if (parse_form(t, ambient_).q != q)
                throw std::invalid_argument("alpha seed degree mismatch: " + t);
}

DiffForm Variety::parse(const std::string& text) const {
    try {
        return parse_form(text, ambient_);
    } catch (const FormParseError& ambient_err) {
        if (cover_) {
            try {
                return parse_form(text, *cover_);
            } catch (const FormParseError&) {
                throw ambient_err;
            }
        }
        throw;
    }
}

DiffForm Variety::parse_canonical(const std::string& text) const {
    return to_canonical(parse(text));
}

std::string Variety::print(const DiffForm& f) const {
    return print_form(f, chart_for(f.coords));
}

DiffForm Variety::to_canonical(const DiffForm& f) const {
    if (cover_) return f.coords == Coords::Parameter ? form_nf(*cover_, f) : to_cover(f);
    if (f.coords == Coords::Parameter)
        throw std::logic_error("parameter-coordinate form on an unparametrized variety");
    return form_nf(ambient_, f);
}

DiffForm Variety::to_cover(const DiffForm& ambient_form) const {
    if (!d_.param) throw std::logic_error("variety has no parametrization: " + id());
    if (ambient_form.coords == Coords::Parameter) return ambient_form;
    const CtxPtr& cctx = d_.param->cover_ctx;
    int cn = static_cast<int>(cctx->names.size());

    // pullbacks of the kept coordinate differentials
    std::map<int, DiffForm> dpull;
    for (int j : ambient_.diff_vars) {
        DiffForm df = form_zero(1, Coords::Parameter);
        for (int i = 0; i < cn; ++i)
            df.add({i}, MeroFunction(d_.param->components[j].derivative(i)));
        dpull[j] = std::move(df);
    }

    DiffForm out = form_zero(ambient_form.q, Coords::Parameter);
    for (const auto& [J, f] : ambient_form.comps) {
        // coefficient pullback: numerator substitution, monomial denominator mapped
        Polynomial num = f.num().substitute(d_.param->components, cctx);
        Expo den(cn, 0);
        Rational scale(1);
        for (size_t v = 0; v < f.den().size(); ++v) {
            int e = f.den()[v];
            if (e == 0) continue;
            const Polynomial& comp = d_.param->components[v];
            if (!comp.is_monomial())
                throw std::logic_error("pole variable with non-monomial parametrization component");
            auto [me, mc] = *comp.terms().begin();
            for (int i = 0; i < cn; ++i) den[i] += e * me[i];
            scale *= mc.pow(e);
        }
        MeroFunction coeff(num.scaled(scale.inv()), den);
        DiffForm piece = form_function(*cover_, coeff);
        piece.coords = Coords::Parameter;
        for (int j : J) piece = wedge(*cover_, piece, dpull.at(j));
        out = form_add(out, piece);
    }
    return form_nf(*cover_, out);
}

int Variety::class_of(const Expo& cover_expo) const {
    int order = deck_order();
    if (order <= 1) return 0;
    long acc = 0;
    for (size_t i = 0; i < cover_expo.size(); ++i) acc += static_cast<long>(cover_weights_[i]) * cover_expo[i];
    long m = acc % order;
    if (m < 0) m += order;
    return static_cast<int>(m);
}

int Variety::class_of_tuple(const std::vector<int>& tuple) const {
    int order = deck_order();
    if (order <= 1) return 0;
    long acc = 0;
    for (int i : tuple) acc += cover_weights_[i];
    long m = acc % order;
    if (m < 0) m += order;
    return static_cast<int>(m);
}

bool Variety::deck_invariant(const DiffForm& cover_form) const {
    if (deck_order() <= 1) return true;
    for (const auto& [I, f] : cover_form.comps) {
        int ci = class_of_tuple(I);
        for (const auto& [e, c] : f.num().terms()) {
            (void)c;
            Expo laurent = expo_sub(e, f.den());
            int cl = class_of(laurent) + ci;
            if (cl % deck_order() != 0) return false;
        }
    }
    return true;
}

Expo Variety::ambient_of_invariant(const Expo& laurent_expo) const {
    if (!d_.param || !d_.param->monomial)
        throw std::logic_error("invariant monomial section needs a monomial parametrization");
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = mono_section_cache_.find(laurent_expo);
        if (it != mono_section_cache_.end()) {
            if (!it->second)
                throw std::invalid_argument("monomial is not a function on the variety");
            return *it->second;
        }
    }
    int na = static_cast<int>(d_.ambient_vars.size());
    int cn = static_cast<int>(laurent_expo.size());
    int maxabs = 0;
    for (int x : laurent_expo) maxabs = std::max(maxabs, std::abs(x));
    int budget = maxabs + deck_order() + 4;

    std::vector<int> pole_idx, free_idx;
    for (int i = 0; i < na; ++i)
        (ambient_.pole_mask[i] ? pole_idx : free_idx).push_back(i);

    Expo result;
    bool found = false;
    std::function<void(size_t, Expo&, Expo&)> try_free = [&](size_t fi, Expo& rem, Expo& sol) {
        if (found) return;
        for (int r : rem)
            if (r < 0) return; // only pole variables may go negative, and they are fixed
        if (fi == free_idx.size()) {
            for (int r : rem)
                if (r != 0) return;
            result = sol;
            found = true;
            return;
        }
        int var = free_idx[fi];
        const Expo& g = monoid_gens_[var];
        int cap = budget;
        for (int j = 0; j < cn; ++j)
            if (g[j] > 0) cap = std::min(cap, rem[j] / g[j]);
        for (int n = 0; n <= cap && !found; ++n) {
            sol[var] = n;
            Expo r2 = rem;
            for (int j = 0; j < cn; ++j) r2[j] -= n * g[j];
            try_free(fi + 1, r2, sol);
        }
        sol[var] = 0;
    };

    // iterative deepening on total pole usage: fewest poles first, then
    // lexicographically smallest exponents (deterministic canonical choice)
    for (int pole_budget = 0; pole_budget <= budget && !found; ++pole_budget) {
        std::function<void(size_t, int, Expo&, Expo&)> try_pole = [&](size_t pi, int used, Expo& rem,
                                                                      Expo& sol) {
            if (found) return;
            if (pi == pole_idx.size()) {
                if (used == pole_budget) try_free(0, rem, sol);
                return;
            }
            int var = pole_idx[pi];
            const Expo& g = monoid_gens_[var];
            for (int n = -(pole_budget - used); n <= budget && !found; ++n) {
                int cost = n < 0 ? -n : 0;
                if (used + cost > pole_budget) continue;
                sol[var] = n;
                Expo r2 = rem;
                for (int j = 0; j < cn; ++j) r2[j] -= n * g[j];
                try_pole(pi + 1, used + cost, r2, sol);
            }
            sol[var] = 0;
        };
        Expo rem = laurent_expo;
        Expo sol(na, 0);
        try_pole(0, 0, rem, sol);
    }

    std::lock_guard<std::mutex> lk(mu_);
    if (!found) {
        mono_section_cache_.emplace(laurent_expo, std::nullopt);
        throw std::invalid_argument("monomial is not a function on the variety");
    }
    mono_section_cache_.emplace(laurent_expo, result);
    return result;
}

DiffForm Variety::to_ambient(const DiffForm& form) const {
    if (form.coords == Coords::Ambient) return form_nf(ambient_, form);
    if (!d_.param) throw std::logic_error("parameter form on unparametrized variety");
    if (!deck_invariant(form))
        throw std::invalid_argument("form is not deck-invariant; not defined on " + id());
    const CtxPtr& cctx = d_.param->cover_ctx;
    int cn = static_cast<int>(cctx->names.size());
    int q = form.q;

    if (q == 0) {
        DiffForm out = form_zero(0, Coords::Ambient);
        auto it = form.comps.find({});
        if (it == form.comps.end()) return out;
        out.add({}, mero_cover_to_ambient(it->second));
        return form_nf(ambient_, out);
    }

    // pullback matrix restricted to kept differentials
    std::vector<int> kept = ambient_.diff_vars;
    std::vector<std::vector<Polynomial>> P;
    for (int j : kept) {
        std::vector<Polynomial> row;
        for (int i = 0; i < cn; ++i) row.push_back(d_.param->components[j].derivative(i));
        P.push_back(std::move(row));
    }
    auto tuples_amb = basis_tuples(ambient_, q);
    auto tuples_cov = basis_tuples(*cover_, q);
    size_t n = tuples_amb.size();
    if (tuples_cov.size() != n) throw std::logic_error("model rank mismatch");

    // D[I][J] = coefficient of da_I in pullback(dxi_J)
    std::vector<std::vector<MeroFunction>> A(n, std::vector<MeroFunction>(n));
    for (size_t jj = 0; jj < n; ++jj) {
        for (size_t ii = 0; ii < n; ++ii) {
            std::vector<std::vector<Polynomial>> minor;
            for (int jv : tuples_amb[jj]) {
                int jrow = -1;
                for (size_t r = 0; r < kept.size(); ++r)
                    if (kept[r] == jv) jrow = static_cast<int>(r);
                std::vector<Polynomial> row;
                for (int iv : tuples_cov[ii]) row.push_back(P[jrow][iv]);
                minor.push_back(std::move(row));
            }
            A[ii][jj] = MeroFunction(det_poly(minor, cctx));
        }
    }
    std::vector<MeroFunction> rhs(n, MeroFunction::zero(cctx));
    for (size_t ii = 0; ii < n; ++ii) {
        auto it = form.comps.find(tuples_cov[ii]);
        if (it != form.comps.end()) rhs[ii] = it->second;
    }

    // Gaussian elimination; pivots must be single-term (monomial) coefficients
    std::vector<int> rowperm(n);
    for (size_t i = 0; i < n; ++i) rowperm[i] = static_cast<int>(i);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = n;
        for (size_t r = col; r < n; ++r) {
            const MeroFunction& cand = A[r][col];
            if (!cand.is_zero() && cand.num().is_monomial()) {
                piv = r;
                break;
            }
        }
        if (piv == n) throw std::logic_error("model solve: no monomial pivot (unsupported variety)");
        std::swap(A[piv], A[col]);
        std::swap(rhs[piv], rhs[col]);
        MeroFunction p = A[col][col];
        for (size_t c2 = 0; c2 < n; ++c2) A[col][c2] = divide_by_monomial(A[col][c2], p);
        rhs[col] = divide_by_monomial(rhs[col], p);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col].is_zero()) continue;
            MeroFunction f = A[r][col];
            for (size_t c2 = 0; c2 < n; ++c2) A[r][c2] = A[r][c2] - f * A[col][c2];
            rhs[r] = rhs[r] - f * rhs[col];
        }
    }

    DiffForm out = form_zero(q, Coords::Ambient);
    for (size_t jj = 0; jj < n; ++jj) {
        if (rhs[jj].is_zero()) continue;
        out.add(tuples_amb[jj], mero_cover_to_ambient(rhs[jj]));
    }
    DiffForm red = form_nf(ambient_, out);
    for (const auto& [k, f] : red.comps) {
        (void)k;
        if (!ambient_.pole_ok(f.den()))
            throw std::invalid_argument("converted form has poles outside the declared pole set");
    }
    return red;
}

MeroFunction Variety::mero_cover_to_ambient(const MeroFunction& f) const {
    const CtxPtr& actx = ambient_.ctx;
    MeroFunction acc = MeroFunction::zero(actx);
    for (const auto& [e, c] : f.num().terms()) {
        Expo laurent = expo_sub(e, f.den());
        Expo amb = ambient_of_invariant(laurent);
        Expo up(actx->names.size(), 0), down(actx->names.size(), 0);
        Rational scale = c;
        for (size_t i = 0; i < amb.size(); ++i) {
            if (amb[i] >= 0) up[i] = amb[i];
            else down[i] = -amb[i];
            // account for non-unit monomial coefficients in the parametrization
            const Polynomial& comp = d_.param->components[i];
            Rational mc = comp.terms().begin()->second;
            if (!mc.is_one()) scale *= mc.pow(-amb[i]);
        }
        acc = acc + MeroFunction(Polynomial::monomial(actx, up, scale), down);
    }
    return acc;
}

const FormModule& Variety::omega_module(int q) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = omega_cache_.find(q);
    if (it != omega_cache_.end()) return *it->second;
    std::vector<DiffForm> gens;
    // wedges of all ambient coordinate differentials (eliminated one expanded)
    int nv = static_cast<int>(ambient_.ctx->names.size());
    std::vector<int> idx;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(idx.size()) == q) {
            DiffForm g = form_function(ambient_, MeroFunction::constant(ambient_.ctx, Rational(1)));
            for (int v : idx) g = wedge(ambient_, g, form_dvar(ambient_, v));
            if (!g.is_zero()) gens.push_back(std::move(g));
            return;
        }
        for (int v = start; v < nv; ++v) {
            idx.push_back(v);
            rec(v + 1);
            idx.pop_back();
        }
    };
    rec(0);
    auto mod = std::make_shared<FormModule>(&ambient_, q, std::move(gens));
    auto [pos, ok] = omega_cache_.emplace(q, std::move(mod));
    (void)ok;
    return *pos->second;
}

std::vector<DiffForm> Variety::omega_torsionfree(int q) const {
    if (q > dim()) throw std::invalid_argument("degree exceeds dimension");
    if (!parametrized()) {
        std::vector<DiffForm> out;
        for (const auto& g : omega_module(q).gens()) out.push_back(g);
        return out;
    }
    // pullbacks of d(ambient coordinates) wedged on the cover
    const CtxPtr& cctx = d_.param->cover_ctx;
    int cn = static_cast<int>(cctx->names.size());
    std::vector<DiffForm> dpull;
    int nv = static_cast<int>(ambient_.ctx->names.size());
    for (int j = 0; j < nv; ++j) {
        DiffForm df = form_zero(1, Coords::Parameter);
        for (int i = 0; i < cn; ++i) df.add({i}, MeroFunction(d_.param->components[j].derivative(i)));
        dpull.push_back(std::move(df));
    }
    std::vector<DiffForm> gens;
    std::vector<int> idx;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(idx.size()) == q) {
            DiffForm g = form_function(*cover_, MeroFunction::constant(cctx, Rational(1)));
            g.coords = Coords::Parameter;
            for (int v : idx) g = wedge(*cover_, g, dpull[v]);
            if (!g.is_zero()) gens.push_back(std::move(g));
            return;
        }
        for (int v = start; v < nv; ++v) {
            idx.push_back(v);
            rec(v + 1);
            idx.pop_back();
        }
    };
    rec(0);
    return gens;
}

std::vector<DiffForm> Variety::L_cover_generators(int q) const {
    if (!parametrized() || !d_.param->monomial)
        throw std::logic_error("L generators need a monomial parametrization");
    const Chart& cc = *cover_;
    int cn = cc.dim();
    // box: componentwise max over monoid generators
    Expo box(cn, 0);
    for (const auto& g : monoid_gens_) box = expo_lcm(box, g);
    std::vector<DiffForm> out;
    for (const auto& I : basis_tuples(cc, q)) {
        int needed = (deck_order() - class_of_tuple(I)) % deck_order();
        // enumerate exponents in the box, minimal under monoid translation
        std::vector<Expo> minimals;
        Expo e(cn, 0);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == cn) {
                if (class_of(e) != needed) return;
                for (const auto& g : monoid_gens_)
                    if (expo_divides(g, e) && total_degree(g) > 0) return;
                minimals.push_back(e);
                return;
            }
            for (int x = 0; x <= box[pos]; ++x) {
                e[pos] = x;
                rec(pos + 1);
            }
            e[pos] = 0;
        };
        rec(0);
        std::sort(minimals.begin(), minimals.end(), [](const Expo& a, const Expo& b) {
            int da = total_degree(a), db = total_degree(b);
            if (da != db) return da < db;
            return a < b;
        });
        for (const auto& m : minimals) {
            DiffForm f = form_zero(q, Coords::Parameter);
            f.add(I, MeroFunction(Polynomial::monomial(cc.ctx, m)));
            out.push_back(std::move(f));
        }
    }
    return out;
}

bool Variety::has_L_module(int q) const {
    if (parametrized() && d_.param->monomial) return true;
    return d_.L_presentation.count(q) > 0;
}

const FormModule* Variety::L_module(int q) const {
    if (!has_L_module(q)) return nullptr;
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = L_cache_.find(q);
        if (it != L_cache_.end()) return it->second.get();
    }
    std::vector<DiffForm> gens;
    if (parametrized() && d_.param->monomial) {
        for (const auto& g : L_cover_generators(q)) gens.push_back(to_ambient(g));
    } else {
        for (const auto& t : d_.L_presentation.at(q)) gens.push_back(parse_form(t, ambient_));
    }
    auto mod = std::make_shared<FormModule>(&ambient_, q, std::move(gens));
    std::lock_guard<std::mutex> lk(mu_);
    auto [pos, ok] = L_cache_.emplace(q, std::move(mod));
    (void)ok;
    return pos->second.get();
}

std::optional<bool> Variety::L_contains(const DiffForm& f) const {
    if (parametrized()) {
        DiffForm c = f.coords == Coords::Parameter ? form_nf(*cover_, f) : to_cover(f);
        if (!deck_invariant(c)) return false;
        for (const auto& [k, g] : c.comps) {
            (void)k;
            if (g.has_denominator()) return false;
        }
        return true;
    }
    if (d_.L_presentation.count(f.q)) {
        const FormModule* m = L_module(f.q);
        return m->contains(to_ambient(f)).member;
    }
    return std::nullopt;
}

std::vector<DiffForm> Variety::alpha_seed_declared(int q) const {
    std::vector<DiffForm> out;
    auto it = d_.alpha_seed_decl.find(q);
    if (it == d_.alpha_seed_decl.end()) return out;
    for (const auto& t : it->second) out.push_back(parse_form(t, ambient_));
    return out;
}

Polynomial Variety::cutoff_function() const {
    Expo e(ambient_.ctx->names.size(), 0);
    bool any = false;
    for (size_t i = 0; i < e.size(); ++i)
        if (ambient_.pole_mask[i]) {
            e[i] = 1;
            any = true;
        }
    if (!any) return Polynomial::zero(ambient_.ctx);
    return Polynomial::monomial(ambient_.ctx, e);
}

namespace {

VarietyData curve35_data() {
    VarietyData d;
    d.id = "curve35";
    d.ambient_vars = {"x", "y"};
    CtxPtr ctx = make_ctx(d.ambient_vars);
    Polynomial x = Polynomial::variable(ctx, 0), y = Polynomial::variable(ctx, 1);
    d.equations = {x.pow(3) - y.pow(5)};
    d.dim = 1;
    d.singular_locus = {x, y};
    d.pole_vars = {"x"};
    d.elim_var = "x"; // df/dx = 3x^2
    d.normal = false;
    Parametrization p;
    p.cover_ctx = make_ctx({"t"});
    Polynomial t = Polynomial::variable(p.cover_ctx, 0);
    p.components = {t.pow(5), t.pow(3)};
    d.param = std::move(p);
    d.deck = DeckGroup{1, {0}};
    d.golden = {
        {"alpha0", {"1", "y^2/x", "y^4/x^2", "y^3/x", "y^4/x"}, ""},
        {"alpha1_extra", {"y^2*dy/x"}, ""},
        {"beta1", {"y^2*dx/x^2"},
         "single O-generator shorthand; the level-1 module equals L^1 and needs {dt, t dt, t^2 dt}"},
        {"omega0_string", {"L0 + O.y/x^2"}, "comparison data only; no operation computes this sheaf"},
        {"omega1_string", {"Omega1/torsion + O.dy/x^2"}, "comparison data only"},
    };
    return d;
}

VarietyData sk_data(int k) {
    VarietyData d;
    int m = k / 2;
    d.id = "S" + std::to_string(k);
    d.ambient_vars = {"x", "y", "z"};
    CtxPtr ctx = make_ctx(d.ambient_vars);
    Polynomial x = Polynomial::variable(ctx, 0), y = Polynomial::variable(ctx, 1),
               z = Polynomial::variable(ctx, 2);
    d.equations = {x * y - z.pow(k)};
    d.dim = 2;
    d.singular_locus = {x, y, z};
    d.pole_vars = {"z"};
    d.elim_var = "z";
    d.normal = true;
    Parametrization p;
    p.cover_ctx = make_ctx({"a", "b"});
    Polynomial a = Polynomial::variable(p.cover_ctx, 0), b = Polynomial::variable(p.cover_ctx, 1);
    p.components = {a.pow(k), b.pow(k), a * b};
    d.param = std::move(p);
    d.deck = DeckGroup{k, {1, k - 1}};
    auto zs = [&](int e) { return e == 0 ? std::string() : "/z^" + std::to_string(e); };
    d.golden = {
        {"alpha1_extra", {"x*dy" + zs(m)}, ""},
        {"alpha2_extra", {"dx^dy" + zs(m - 1)}, ""},
        {"beta2_extra", {"dx^dy" + zs(m)}, ""},
        {"L2_extra", {"dx^dy" + zs(k - 1)}, ""},
    };
    return d;
}

VarietyData mk_data(int k) {
    VarietyData d;
    int m = k / 2;
    d.id = "M" + std::to_string(k);
    d.ambient_vars = {"x", "y", "u", "v"};
    CtxPtr ctx = make_ctx(d.ambient_vars);
    Polynomial x = Polynomial::variable(ctx, 0), y = Polynomial::variable(ctx, 1),
               u = Polynomial::variable(ctx, 2), v = Polynomial::variable(ctx, 3);
    d.equations = {x * y - u.pow(k) * v};
    d.dim = 3;
    d.singular_locus = {x, y, u};
    d.pole_vars = {"u"};
    d.elim_var = "v"; // df/dv = -u^k
    d.normal = true;
    auto us = [&](int e) { return e == 0 ? std::string() : "/u^" + std::to_string(e); };
    std::string omega_m = "x*dy" + us(m);
    std::string w = "x*dy^dv" + us(m);
    d.alpha_seed_decl = {
        {1, {omega_m}},
        {2, {w}},
        {3, {"x*dy^du^dv" + us(m)}},
    };
    d.golden = {
        {"omega_m", {omega_m}, ""},
        {"w", {w}, ""},
    };
    return d;
}

VarietyData fermat_data(int n) {
    VarietyData d;
    d.id = "F" + std::to_string(n);
    d.ambient_vars = {"a", "b", "z"};
    CtxPtr ctx = make_ctx(d.ambient_vars);
    Polynomial a = Polynomial::variable(ctx, 0), b = Polynomial::variable(ctx, 1),
               z = Polynomial::variable(ctx, 2);
    d.equations = {a.pow(n) - b.pow(n) - z.pow(n)};
    d.dim = 2;
    d.singular_locus = {a, b, z};
    d.pole_vars = {"z"};
    d.elim_var = "z";
    d.normal = true;
    int p = n / 2;
    std::vector<std::string> q2;
    auto ab = [&](int e) { return "a^" + std::to_string(e) + "*b^" + std::to_string(e); };
    if (n % 2 == 0) {
        q2.push_back(ab(p) + "*da^db/z^" + std::to_string(2 * p - 1));
        q2.push_back(ab(p - 1) + "*da^db" + (p == 1 ? "" : "/z^" + std::to_string(p - 1)));
    } else {
        q2.push_back(ab(p) + "*da^db/z^" + std::to_string(2 * p));
    }
    d.alpha_seed_decl = {{2, q2}};
    if (n % 2 == 0) {
        // image of the certified 1-form x.dy/z^p under the cover of S_n;
        // integrally dependent (pull back its dependence relation) but not a
        // torsion-free section
        std::string ps = std::to_string(p), p1 = std::to_string(p - 1);
        std::string tau = "(a^" + ps + "-b^" + ps + ")*(a^" + p1 + "*da+b^" + p1 + "*db)/z^" + ps;
        d.alpha_seed_decl[1] = {tau};
    }
    d.golden = {{"alpha2_extra", q2, ""}};
    return d;
}

VarietyData affine_data(const std::string& id, std::vector<std::string> vars) {
    VarietyData d;
    d.id = id;
    d.ambient_vars = std::move(vars);
    CtxPtr ctx = make_ctx(d.ambient_vars);
    d.dim = static_cast<int>(d.ambient_vars.size());
    d.normal = true;
    Parametrization p;
    std::vector<std::string> cnames;
    for (const auto& v : d.ambient_vars) cnames.push_back(v);
    p.cover_ctx = make_ctx(cnames);
    for (size_t i = 0; i < cnames.size(); ++i)
        p.components.push_back(Polynomial::variable(p.cover_ctx, static_cast<int>(i)));
    d.param = std::move(p);
    d.deck = DeckGroup{1, std::vector<int>(d.ambient_vars.size(), 0)};
    return d;
}

} // namespace

VarietyPtr builtin_variety(const std::string& name) {
    if (name == "curve35") return Variety::make(curve35_data());
    if (name == "line") return Variety::make(affine_data("line", {"t"}));
    if (name == "plane") return Variety::make(affine_data("plane", {"a", "b"}));
    auto num_after = [&](char c) -> int {
        if (name.size() < 2 || name[0] != c) return -1;
        for (size_t i = 1; i < name.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
        return std::stoi(name.substr(1));
    };
    if (int k = num_after('S'); k >= 0) {
        if (k < 2) throw std::invalid_argument("S(k) needs k >= 2");
        return Variety::make(sk_data(k));
    }
    if (int k = num_after('M'); k >= 0) {
        if (k < 1) throw std::invalid_argument("M(k) needs k >= 1");
        return Variety::make(mk_data(k));
    }
    if (int n = num_after('F'); n >= 0) {
        if (n < 3) throw std::invalid_argument("Fermat(n) needs n >= 3");
        return Variety::make(fermat_data(n));
    }
    throw std::invalid_argument("unknown builtin variety: " + name);
}

VarietyPtr product_with_disc(const VarietyPtr& a, const std::string& disc_name) {
    const VarietyData& src = a->data();
    for (const auto& v : src.ambient_vars)
        if (v == disc_name)
            throw std::invalid_argument("disc coordinate collides with an ambient variable: " + disc_name);
    VarietyData d;
    d.id = src.id + "xC";
    d.ambient_vars = src.ambient_vars;
    d.ambient_vars.push_back(disc_name);
    CtxPtr ctx = make_ctx(d.ambient_vars);
    std::vector<int> varmap;
    for (size_t i = 0; i < src.ambient_vars.size(); ++i) varmap.push_back(static_cast<int>(i));
    for (const auto& f : src.equations) d.equations.push_back(recontext(f, ctx, varmap));
    d.dim = src.dim + 1;
    for (const auto& f : src.singular_locus) d.singular_locus.push_back(recontext(f, ctx, varmap));
    d.pole_vars = src.pole_vars;
    d.elim_var = src.elim_var;
    d.normal = src.normal;
    if (src.param) {
        Parametrization p;
        std::vector<std::string> cn = src.param->cover_ctx->names;
        cn.push_back(disc_name);
        p.cover_ctx = make_ctx(cn);
        std::vector<int> cmap;
        for (size_t i = 0; i + 1 < cn.size(); ++i) cmap.push_back(static_cast<int>(i));
        for (const auto& comp : src.param->components)
            p.components.push_back(recontext(comp, p.cover_ctx, cmap));
        p.components.push_back(Polynomial::variable(p.cover_ctx, static_cast<int>(cn.size()) - 1));
        d.param = std::move(p);
        DeckGroup g;
        g.order = src.deck ? src.deck->order : 1;
        g.weights = src.deck ? src.deck->weights : std::vector<int>(cn.size() - 1, 0);
        g.weights.push_back(0);
        d.deck = std::move(g);
    }
    d.product_factor = src.id;
    d.product_disc = disc_name;
    return Variety::make(std::move(d));
}

Registry::Registry() = default;

VarietyPtr Registry::find(const std::string& id) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = map_.find(id);
    return it == map_.end() ? nullptr : it->second;
}

void Registry::add(VarietyPtr v) {
    std::lock_guard<std::mutex> lk(mu_);
    map_[v->id()] = std::move(v);
}

VarietyPtr Registry::get(const std::string& id) {
    if (auto v = find(id)) return v;
    if (id.size() > 2 && id.substr(id.size() - 2) == "xC") {
        VarietyPtr factor = get(id.substr(0, id.size() - 2));
        VarietyPtr prod = product_with_disc(factor, "v");
        add(prod);
        return prod;
    }
    VarietyPtr v = builtin_variety(id);
    add(v);
    return v;
}

std::vector<std::string> Registry::ids() const {
    std::lock_guard<std::mutex> lk(mu_);
    std::vector<std::string> out;
    for (const auto& [k, v] : map_) {
        (void)v;
        out.push_back(k);
    }
    return out;
}

} // namespace betaforms
