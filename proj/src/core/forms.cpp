#include "core/forms.hpp"

#include <algorithm>
#include <stdexcept>

namespace betaforms {

MeroFunction Chart::nf(const MeroFunction& f) const {
    if (!has_ideal() || f.is_zero()) return f;
    return MeroFunction(ideal->nf(f.num()), f.den());
}

bool Chart::mero_zero(const MeroFunction& f) const {
    if (f.is_zero()) return true;
    if (!has_ideal()) return false;
    return ideal->nf(f.num()).is_zero();
}

bool Chart::mero_equal(const MeroFunction& a, const MeroFunction& b) const {
    return mero_zero(a - b);
}

bool Chart::pole_ok(const Expo& den) const {
    for (size_t i = 0; i < den.size(); ++i)
        if (den[i] > 0 && pole_mask[i] == 0) return false;
    return true;
}

int Chart::diff_pos(int var) const {
    for (size_t i = 0; i < diff_vars.size(); ++i)
        if (diff_vars[i] == var) return static_cast<int>(i);
    return -1;
}

void DiffForm::add(const std::vector<int>& key, const MeroFunction& f) {
    if (f.is_zero()) return;
    auto it = comps.find(key);
    if (it == comps.end()) {
        comps.emplace(key, f);
    } else {
        it->second = it->second + f;
        if (it->second.is_zero()) comps.erase(it);
    }
}

DiffForm form_zero(int q, Coords c) {
    DiffForm f;
    f.q = q;
    f.coords = c;
    return f;
}

DiffForm form_function(const Chart& chart, MeroFunction f) {
    DiffForm r = form_zero(0, chart.coords);
    r.add({}, std::move(f));
    return r;
}

DiffForm form_dvar(const Chart& chart, int var) {
    DiffForm r = form_zero(1, chart.coords);
    int pos = chart.diff_pos(var);
    if (pos >= 0) {
        r.add({var}, MeroFunction::constant(chart.ctx, Rational(1)));
        return r;
    }
    auto it = chart.elim.find(var);
    if (it == chart.elim.end()) throw std::invalid_argument("no differential for variable");
    for (size_t j = 0; j < it->second.size(); ++j)
        r.add({chart.diff_vars[j]}, it->second[j]);
    return r;
}

DiffForm form_neg(const DiffForm& u) {
    DiffForm r = form_zero(u.q, u.coords);
    for (const auto& [k, f] : u.comps) r.comps.emplace(k, -f);
    return r;
}

DiffForm form_add(const DiffForm& u, const DiffForm& v) {
    if (u.q != v.q) throw std::invalid_argument("degree mismatch in form addition");
    DiffForm r = u;
    for (const auto& [k, f] : v.comps) r.add(k, f);
    return r;
}

DiffForm form_sub(const DiffForm& u, const DiffForm& v) {
    return form_add(u, form_neg(v));
}

DiffForm form_scale(const DiffForm& u, const Rational& c) {
    DiffForm r = form_zero(u.q, u.coords);
    if (c.is_zero()) return r;
    for (const auto& [k, f] : u.comps) r.comps.emplace(k, f.scaled(c));
    return r;
}

DiffForm form_mul_mero(const DiffForm& u, const MeroFunction& f) {
    DiffForm r = form_zero(u.q, u.coords);
    if (f.is_zero()) return r;
    for (const auto& [k, g] : u.comps) r.add(k, g * f);
    return r;
}

// sign of sorting a++b (both strictly increasing, disjoint); 0 if they collide
int merge_sign(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& merged) {
    merged.clear();
    int inversions = 0;
    for (int x : b) {
        int above = 0;
        for (int y : a) {
            if (y == x) return 0;
            if (y > x) ++above;
        }
        inversions += above;
    }
    merged = a;
    merged.insert(merged.end(), b.begin(), b.end());
    std::sort(merged.begin(), merged.end());
    return (inversions % 2 == 0) ? 1 : -1;
}

DiffForm wedge(const Chart& chart, const DiffForm& u, const DiffForm& v) {
    if (u.coords != v.coords) throw std::invalid_argument("coordinate system mismatch in wedge");
    DiffForm r = form_zero(u.q + v.q, u.coords);
    if (r.q > chart.dim()) return form_zero(u.q + v.q, u.coords);
    std::vector<int> merged;
    for (const auto& [I, f] : u.comps) {
        for (const auto& [J, g] : v.comps) {
            int s = merge_sign(I, J, merged);
            if (s == 0) continue;
            MeroFunction c = f * g;
            if (s < 0) c = -c;
            r.add(merged, c);
        }
    }
    return form_nf(chart, r);
}

DiffForm exterior_d(const Chart& chart, const DiffForm& u) {
    DiffForm r = form_zero(u.q + 1, u.coords);
    int nv = static_cast<int>(chart.ctx->names.size());
    std::vector<int> merged;
    for (const auto& [I, f] : u.comps) {
        for (int v = 0; v < nv; ++v) {
            MeroFunction fv = f.derivative(v);
            if (fv.is_zero()) continue;
            int pos = chart.diff_pos(v);
            if (pos >= 0) {
                int s = merge_sign({v}, I, merged);
                if (s == 0) continue;
                r.add(merged, s < 0 ? -fv : fv);
            } else {
                auto it = chart.elim.find(v);
                if (it == chart.elim.end())
                    throw std::logic_error("variable without differential in chart");
                for (size_t j = 0; j < it->second.size(); ++j) {
                    if (it->second[j].is_zero()) continue;
                    int s = merge_sign({chart.diff_vars[j]}, I, merged);
                    if (s == 0) continue;
                    MeroFunction c = fv * it->second[j];
                    r.add(merged, s < 0 ? -c : c);
                }
            }
        }
    }
    return form_nf(chart, r);
}

DiffForm form_nf(const Chart& chart, const DiffForm& u) {
    DiffForm r = form_zero(u.q, u.coords);
    for (const auto& [k, f] : u.comps) {
        MeroFunction g = chart.nf(f);
        if (!g.is_zero()) r.comps.emplace(k, g);
    }
    return r;
}

bool form_equal(const Chart& chart, const DiffForm& u, const DiffForm& v) {
    if (u.q != v.q) return false;
    DiffForm d = form_sub(u, v);
    for (const auto& [k, f] : d.comps) {
        (void)k;
        if (!chart.mero_zero(f)) return false;
    }
    return true;
}

std::vector<std::vector<int>> basis_tuples(const Chart& chart, int q) {
    std::vector<std::vector<int>> out;
    int n = chart.dim();
    if (q < 0 || q > n) return out;
    std::vector<int> idx(q);
    for (int i = 0; i < q; ++i) idx[i] = i;
    while (true) {
        std::vector<int> t(q);
        for (int i = 0; i < q; ++i) t[i] = chart.diff_vars[idx[i]];
        out.push_back(std::move(t));
        int i = q - 1;
        while (i >= 0 && idx[i] == n - q + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

FormModule::FormModule(const Chart* chart, int q, std::vector<DiffForm> gens)
    : chart_(chart), q_(q), gens_(std::move(gens)) {
    tuples_ = basis_tuples(*chart_, q_);
    gens_den_.assign(chart_->ctx->names.size(), 0);
    for (auto& g : gens_) {
        g = form_nf(*chart_, g);
        for (const auto& [k, f] : g.comps) {
            (void)k;
            gens_den_ = expo_lcm(gens_den_, f.den());
        }
    }
}

ModVec FormModule::clear_form(const DiffForm& f, const Expo& d) const {
    ModVec v = modvec_zero(chart_->ctx, static_cast<int>(tuples_.size()));
    for (const auto& [k, g] : f.comps) {
        auto it = std::find(tuples_.begin(), tuples_.end(), k);
        if (it == tuples_.end()) throw std::logic_error("component outside chart basis");
        v.comp[it - tuples_.begin()] = g.cleared(d);
    }
    return v;
}

const Submodule& FormModule::at_den(const Expo& d) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find(d);
    if (it != cache_.end()) return *it->second;
    std::vector<ModVec> mv;
    mv.reserve(gens_.size());
    for (const auto& g : gens_) mv.push_back(clear_form(g, d));
    std::vector<Polynomial> ideal;
    if (chart_->has_ideal()) ideal = chart_->ideal->gens();
    auto sub = std::make_shared<Submodule>(chart_->ctx, static_cast<int>(tuples_.size()),
                                           std::move(mv), std::move(ideal));
    auto [pos, ok] = cache_.emplace(d, std::move(sub));
    (void)ok;
    return *pos->second;
}

MembershipResult FormModule::contains(const DiffForm& v, bool want_witness) const {
    if (v.q != q_) throw std::invalid_argument("degree mismatch in module membership");
    DiffForm w = form_nf(*chart_, v);
    Expo d = gens_den_;
    for (const auto& [k, f] : w.comps) {
        (void)k;
        d = expo_lcm(d, f.den());
    }
    return at_den(d).contains(clear_form(w, d), want_witness);
}

bool FormModule::equals(const FormModule& other) const {
    for (const auto& g : other.gens_)
        if (!contains(g).member) return false;
    for (const auto& g : gens_)
        if (!other.contains(g).member) return false;
    return true;
}

std::vector<DiffForm> FormModule::minimal_generators() const {
    std::vector<DiffForm> kept;
    for (size_t i = 0; i < gens_.size(); ++i) {
        std::vector<DiffForm> others = kept;
        for (size_t j = i + 1; j < gens_.size(); ++j) others.push_back(gens_[j]);
        FormModule rest(chart_, q_, others);
        if (!rest.contains(gens_[i]).member) kept.push_back(gens_[i]);
    }
    return kept;
}

SymElement sym_of_form(const DiffForm& u) {
    SymElement s;
    s.h = 1;
    for (const auto& [k, f] : u.comps) s.terms.emplace(std::vector<std::vector<int>>{k}, f);
    return s;
}

SymElement sym_add(const SymElement& a, const SymElement& b) {
    if (a.structurally_zero()) return b;
    if (b.structurally_zero()) return a;
    if (a.h != b.h) throw std::invalid_argument("Sym degree mismatch");
    SymElement r = a;
    for (const auto& [k, f] : b.terms) {
        auto it = r.terms.find(k);
        if (it == r.terms.end()) {
            r.terms.emplace(k, f);
        } else {
            it->second = it->second + f;
            if (it->second.is_zero()) r.terms.erase(it);
        }
    }
    return r;
}

SymElement sym_mul(const SymElement& a, const SymElement& b) {
    SymElement r;
    r.h = a.h + b.h;
    for (const auto& [ka, fa] : a.terms) {
        for (const auto& [kb, fb] : b.terms) {
            std::vector<std::vector<int>> key = ka;
            key.insert(key.end(), kb.begin(), kb.end());
            std::sort(key.begin(), key.end());
            MeroFunction c = fa * fb;
            auto it = r.terms.find(key);
            if (it == r.terms.end()) {
                r.terms.emplace(std::move(key), c);
            } else {
                it->second = it->second + c;
                if (it->second.is_zero()) r.terms.erase(it);
            }
        }
    }
    return r;
}

SymElement sym_scale(const SymElement& a, const MeroFunction& f) {
    SymElement r;
    r.h = a.h;
    if (f.is_zero()) return r;
    for (const auto& [k, g] : a.terms) {
        MeroFunction c = g * f;
        if (!c.is_zero()) r.terms.emplace(k, c);
    }
    return r;
}

SymElement sym_neg(const SymElement& a) {
    SymElement r;
    r.h = a.h;
    for (const auto& [k, g] : a.terms) r.terms.emplace(k, -g);
    return r;
}

bool sym_zero(const Chart& chart, const SymElement& s) {
    for (const auto& [k, f] : s.terms) {
        (void)k;
        if (!chart.mero_zero(f)) return false;
    }
    return true;
}

} // namespace betaforms
