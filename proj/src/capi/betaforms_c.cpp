#include "betaforms.h"

#include "core/beta.hpp"
#include "core/quad.hpp"
#include "core/varietyio.hpp"
#include "core/verify.hpp"

#include <json.hpp>

#include <cstring>

using namespace betaforms;
using nlohmann::json;

struct bf_engine {
    Registry reg;
    BetaEngine beta{reg};
    std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename F>
char* guarded(bf_engine* e, F&& f) {
    if (!e) return nullptr;
    try {
        e->last_error.clear();
        return dup_string(f());
    } catch (const std::exception& ex) {
        e->last_error = ex.what();
        return nullptr;
    }
}

template <typename F>
int guarded_int(bf_engine* e, F&& f) {
    if (!e) return 1;
    try {
        e->last_error.clear();
        f();
        return 0;
    } catch (const std::exception& ex) {
        e->last_error = ex.what();
        return 1;
    }
}

json form_list(const Variety& X, const std::vector<DiffForm>& gens) {
    json out = json::array();
    for (const auto& g : gens) out.push_back(X.print(g));
    return out;
}

json report_json(const IntegralReport& r) {
    json j;
    j["schema"] = "betaforms/integral/1";
    j["eps"] = r.eps;
    json vals = json::array();
    for (const auto& v : r.values) vals.push_back({v.real(), v.imag()});
    j["values"] = vals;
    j["limit"] = {r.limit.real(), r.limit.imag()};
    j["converged"] = r.converged;
    j["quad_error"] = r.quad_error;
    j["mass"] = r.mass;
    j["orders"] = {r.n_radial, r.n_angular};
    return j;
}

struct NumericRequest {
    VarietyPtr X;
    CycleSpec cycle;
    CutoffSpec rho;
    DiffForm u, v;
    QuadOptions opt;
    json raw;
};

NumericRequest parse_request(bf_engine* e, const char* request_json) {
    NumericRequest r;
    r.raw = json::parse(request_json);
    r.X = e->reg.get(r.raw.at("variety").get<std::string>());
    const json& cy = r.raw.at("cycle");
    if (cy.is_string()) r.cycle = stock_cycle(r.X, cy.get<std::string>());
    else r.cycle = parse_cycle_json(cy.dump(), e->reg);
    const json& rj = r.raw.at("rho");
    for (const auto& c : rj.at("center"))
        r.rho.center.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    r.rho.radius = rj.at("radius").get<double>();
    r.rho.smoothness = rj.value("class", "C1") == "C0" ? BumpClass::C0 : BumpClass::C1;
    r.u = r.X->parse(r.raw.at("u").get<std::string>());
    r.v = r.X->parse(r.raw.at("v").get<std::string>());
    if (r.raw.contains("options")) {
        const json& o = r.raw["options"];
        r.opt.n_radial = o.value("n_radial", r.opt.n_radial);
        r.opt.n_angular = o.value("n_angular", r.opt.n_angular);
        r.opt.eps_count = o.value("eps_count", r.opt.eps_count);
        r.opt.eps_max = o.value("eps_max", r.opt.eps_max);
        r.opt.eps_min = o.value("eps_min", r.opt.eps_min);
        r.opt.tol = o.value("tol", r.opt.tol);
    }
    return r;
}

} // namespace

extern "C" {

bf_engine* bf_engine_new(void) {
    try {
        return new bf_engine();
    } catch (...) {
        return nullptr;
    }
}

void bf_engine_free(bf_engine* e) {
    delete e;
}

const char* bf_last_error(const bf_engine* e) {
    return e ? e->last_error.c_str() : "null engine";
}

void bf_string_free(char* s) {
    std::free(s);
}

int bf_variety_builtin(bf_engine* e, const char* name) {
    return guarded_int(e, [&] { e->reg.get(name); });
}

int bf_variety_load_file(bf_engine* e, const char* path, char** id_out) {
    return guarded_int(e, [&] {
        VarietyPtr v = load_variety_file(path);
        e->reg.add(v);
        if (id_out) *id_out = dup_string(v->id());
    });
}

int bf_variety_save_file(bf_engine* e, const char* id, const char* path) {
    return guarded_int(e, [&] { save_variety_file(*e->reg.get(id), path); });
}

char* bf_variety_json(bf_engine* e, const char* id) {
    return guarded(e, [&] { return variety_to_json(*e->reg.get(id)); });
}

char* bf_parse_form(bf_engine* e, const char* variety, const char* text) {
    return guarded(e, [&] {
        VarietyPtr X = e->reg.get(variety);
        return X->print(X->parse(text));
    });
}

char* bf_classify(bf_engine* e, const char* variety, const char* form, const char* cert_json,
                  int level_cap) {
    return guarded(e, [&] {
        VarietyPtr X = e->reg.get(variety);
        DiffForm f = X->parse(form);
        std::optional<DependenceCertificate> cert;
        if (cert_json) cert = parse_certificate_json(cert_json);
        ClassificationReport r =
            e->beta.classify(X, f, cert ? &*cert : nullptr, level_cap);
        json j;
        j["schema"] = "betaforms/classify/1";
        j["variety"] = r.variety;
        j["form"] = r.form_text;
        j["q"] = r.q;
        j["omega"] = to_string(r.in_omega);
        j["alpha"] = {{"verdict", to_string(r.in_alpha)}, {"evidence", r.alpha_evidence}};
        j["beta"] = {{"verdict", to_string(r.in_beta)}, {"evidence", r.beta_evidence}};
        j["L"] = {{"verdict", to_string(r.in_L)}, {"evidence", r.L_evidence}};
        if (r.min_level) j["min_level"] = *r.min_level;
        j["level_cap"] = r.level_cap;
        j["orders"] = {{"ideal", "degrevlex"}, {"module", "position-over-term/degrevlex"}};
        return j.dump(2);
    });
}

char* bf_beta(bf_engine* e, const char* variety, int q, int cap) {
    return guarded(e, [&] {
        VarietyPtr X = e->reg.get(variety);
        BetaResult b = e->beta.beta(X, q, cap);
        json j;
        j["schema"] = "betaforms/beta/1";
        j["variety"] = X->id();
        j["q"] = q;
        j["pstar"] = b.pstar;
        j["generators"] = form_list(*X, b.gens.gens);
        j["provenance"] = b.gens.provenance;
        j["orders"] = {{"ideal", "degrevlex"}, {"module", "position-over-term/degrevlex"}};
        return j.dump(2);
    });
}

char* bf_alpha_level(bf_engine* e, const char* variety, int q, int p) {
    return guarded(e, [&] {
        VarietyPtr X = e->reg.get(variety);
        const GradedGeneratorSet& s = e->beta.alpha_level(X, q, p);
        json j;
        j["schema"] = "betaforms/level/1";
        j["variety"] = X->id();
        j["q"] = q;
        j["p"] = p;
        j["generators"] = form_list(*X, s.gens);
        j["provenance"] = s.provenance;
        j["orders"] = {{"ideal", "degrevlex"}, {"module", "position-over-term/degrevlex"}};
        return j.dump(2);
    });
}

char* bf_verify_certificate(bf_engine* e, const char* cert_json) {
    return guarded(e, [&] {
        std::string text = cert_json;
        VarietyPtr X = e->reg.get(certificate_variety_id(text));
        DependenceCertificate cert = parse_certificate_json(text);
        DiffForm f = X->parse(certificate_form_text(text));
        CertCheck c = verify_certificate(*X, f, cert);
        json j;
        j["schema"] = "betaforms/certcheck/1";
        j["variety"] = X->id();
        j["form"] = certificate_form_text(text);
        j["verifies"] = c.ok;
        if (!c.ok) j["reason"] = c.reason;
        return j.dump(2);
    });
}

char* bf_check_pullback(bf_engine* e, const char* map_token, int max_level) {
    return guarded(e, [&] {
        MapSpec m = builtin_map(map_token, e->reg);
        PullbackLevelReport r = e->beta.check_pullback_levels(m, max_level);
        json j;
        j["schema"] = "betaforms/pullback/1";
        j["map"] = r.map_name;
        j["all_preserved"] = r.all_preserved;
        j["wedge_d_commute"] = r.wedge_d_commute;
        json rows = json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"level", row.level}, {"generator", row.generator},
                            {"preserved", row.preserved}});
        j["rows"] = rows;
        return j.dump(2);
    });
}

char* bf_verify_paper(bf_engine* e, const char* fixtures_dir, const char* scope,
                      int* failures_out) {
    return guarded(e, [&] {
        VerifyReport rep = verify_paper(e->beta, e->reg, fixtures_dir, scope ? scope : "all");
        if (failures_out) {
            int fails = 0;
            for (const auto& r : rep.rows)
                if (!r.pass) ++fails;
            *failures_out = fails;
        }
        return verify_json(rep);
    });
}

char* bf_integrate(bf_engine* e, const char* request_json) {
    return guarded(e, [&] {
        NumericRequest r = parse_request(e, request_json);
        IntegralReport rep = integrate(r.X, r.cycle, r.rho, r.u, r.v, r.opt);
        return report_json(rep).dump(2);
    });
}

char* bf_stokes(bf_engine* e, const char* request_json) {
    return guarded(e, [&] {
        NumericRequest r = parse_request(e, request_json);
        StokesReport rep = stokes_residual(r.X, r.cycle, r.rho, r.u, r.v, r.opt);
        json j = report_json(rep.report);
        j["schema"] = "betaforms/stokes/1";
        j["residual"] = rep.residual;
        return j.dump(2);
    });
}

char* bf_family_scan(bf_engine* e, const char* request_json) {
    return guarded(e, [&] {
        NumericRequest r = parse_request(e, request_json);
        std::vector<double> grid = r.raw.at("grid").get<std::vector<double>>();
        FamilyScan scan = family_scan(r.X, r.cycle, r.rho, r.u, r.v, grid, r.opt);
        json j;
        j["schema"] = "betaforms/family/1";
        json rows = json::array();
        for (const auto& row : scan.rows)
            rows.push_back({{"t", row.t},
                            {"re", row.value.real()},
                            {"im", row.value.imag()},
                            {"mass", row.mass},
                            {"converged", row.converged}});
        j["rows"] = rows;
        j["sup_abs"] = scan.sup_abs;
        j["bound_constant"] = scan.bound_constant;
        j["all_converged"] = scan.all_converged;
        return j.dump(2);
    });
}

char* bf_direct_image(bf_engine* e, const char* request_json) {
    return guarded(e, [&] {
        // u, v and rho live on the map target; the cycle lives on the source
        json raw = json::parse(request_json);
        MapSpec m = builtin_map(raw.at("map").get<std::string>(), e->reg);
        auto cycle_of = [&](const json& cj, const VarietyPtr& X) {
            if (cj.is_string()) return stock_cycle(X, cj.get<std::string>());
            return parse_cycle_json(cj.dump(), e->reg);
        };
        CycleSpec src = cycle_of(raw.at("cycle"), m.source);
        CycleSpec img = cycle_of(raw.at("image_cycle"), m.target);
        CutoffSpec rho;
        const json& rj = raw.at("rho");
        for (const auto& c : rj.at("center"))
            rho.center.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
        rho.radius = rj.at("radius").get<double>();
        rho.smoothness = rj.value("class", "C1") == "C0" ? BumpClass::C0 : BumpClass::C1;
        DiffForm u = m.target->parse(raw.at("u").get<std::string>());
        DiffForm v = m.target->parse(raw.at("v").get<std::string>());
        QuadOptions opt;
        if (raw.contains("options")) {
            const json& o = raw["options"];
            opt.n_radial = o.value("n_radial", opt.n_radial);
            opt.n_angular = o.value("n_angular", opt.n_angular);
            opt.eps_count = o.value("eps_count", opt.eps_count);
            opt.eps_max = o.value("eps_max", opt.eps_max);
            opt.eps_min = o.value("eps_min", opt.eps_min);
            opt.tol = o.value("tol", opt.tol);
        }
        int degree = raw.value("degree", 1);
        DirectImageReport rep = direct_image_check(m, src, img, degree, rho, u, v, opt);
        json j;
        j["schema"] = "betaforms/direct-image/1";
        j["map"] = m.name;
        j["degree"] = degree;
        j["source"] = report_json(rep.source);
        j["target"] = report_json(rep.target);
        j["rel_diff"] = rep.rel_diff;
        return j.dump(2);
    });
}

} // extern "C"
