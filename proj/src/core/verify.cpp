#include "core/verify.hpp"

#include "core/closure.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace betaforms {

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open fixture: " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string rungs(const ClassificationReport& r) {
    std::ostringstream os;
    os << "omega:" << to_string(r.in_omega) << " alpha:" << to_string(r.in_alpha)
       << " beta:" << to_string(r.in_beta) << " L:" << to_string(r.in_L);
    return os.str();
}

// builds the module named by a fixture "set" descriptor
FormModule named_module(BetaEngine& eng, const VarietyPtr& X, const nlohmann::json& set) {
    std::string kind = set.at("set").get<std::string>();
    int q = set.at("q").get<int>();
    if (kind == "alpha") return eng.module_of(X, eng.seed(X, q));
    if (kind == "beta") return eng.module_of(X, eng.beta(X, q).gens);
    if (kind == "level") return eng.module_of(X, eng.alpha_level(X, q, set.at("p").get<int>()));
    if (kind == "omega") {
        std::vector<DiffForm> gens;
        for (const auto& g : X->omega_module(q).gens()) gens.push_back(g);
        return FormModule(&X->ambient_chart(), q, gens);
    }
    if (kind == "L") {
        const FormModule* L = X->L_module(q);
        if (!L) throw std::runtime_error("no L module for " + X->id());
        std::vector<DiffForm> gens;
        for (const auto& g : L->gens()) gens.push_back(g);
        return FormModule(&X->ambient_chart(), q, gens);
    }
    throw std::runtime_error("unknown set kind: " + kind);
}

FormModule forms_module(const VarietyPtr& X, int q, const nlohmann::json& rhs) {
    std::vector<DiffForm> gens;
    if (rhs.value("include-omega", false))
        for (const auto& g : X->omega_module(q).gens()) gens.push_back(g);
    for (const auto& t : rhs.value("forms", std::vector<std::string>{}))
        gens.push_back(X->to_ambient(X->parse(t)));
    return FormModule(&X->ambient_chart(), q, gens);
}

VerifyRow run_row(BetaEngine& eng, Registry& reg, const std::filesystem::path& fixdir,
                  const nlohmann::json& row) {
    VerifyRow out;
    out.id = row.at("id").get<std::string>();
    std::string kind = row.at("kind").get<std::string>();

    auto getX = [&]() { return reg.get(row.at("variety").get<std::string>()); };
    auto getform = [&](const VarietyPtr& X) {
        DiffForm f = X->parse(row.at("form").get<std::string>());
        if (row.value("d-of", false)) {
            const Chart& ch = X->chart_for(f.coords);
            f = exterior_d(ch, f);
        }
        return f;
    };

    if (kind == "module-equal") {
        VarietyPtr X = getX();
        int q = row.at("lhs").at("q").get<int>();
        FormModule lhs = named_module(eng, X, row.at("lhs"));
        FormModule rhs = row.contains("rhs-set") ? named_module(eng, X, row.at("rhs-set"))
                                                 : forms_module(X, q, row.at("rhs"));
        bool eq = lhs.equals(rhs);
        out.expected = "module equality";
        out.computed = eq ? "equal" : "different";
        out.pass = eq;
    } else if (kind == "member" || kind == "not-member") {
        VarietyPtr X = getX();
        FormModule mod = named_module(eng, X, row.at("set"));
        bool member = mod.contains(X->to_ambient(getform(X))).member;
        out.expected = kind == "member" ? "member" : "not a member";
        out.computed = member ? "member" : "not a member";
        out.pass = member == (kind == "member");
    } else if (kind == "stabilizes") {
        VarietyPtr X = getX();
        BetaResult b = eng.beta(X, row.at("q").get<int>());
        int want = row.at("pstar").get<int>();
        out.expected = "p* = " + std::to_string(want);
        out.computed = "p* = " + std::to_string(b.pstar);
        out.pass = b.pstar == want;
    } else if (kind == "cert-verifies") {
        std::string text = slurp(fixdir / row.at("cert-file").get<std::string>());
        VarietyPtr X = reg.get(certificate_variety_id(text));
        DependenceCertificate cert = parse_certificate_json(text);
        DiffForm f = X->parse(certificate_form_text(text));
        CertCheck c = verify_certificate(*X, f, cert);
        out.expected = "certificate verifies";
        out.computed = c.ok ? "verifies" : "fails: " + c.reason;
        out.pass = c.ok;
    } else if (kind == "arc-refutes") {
        VarietyPtr X = getX();
        DiffForm f = getform(X);
        std::vector<DiffForm> gens;
        std::string against = row.value("against", "alpha");
        if (against == "alpha") gens = alpha_seed(*X, f.q);
        else
            for (const auto& g : X->omega_module(f.q).gens()) gens.push_back(g);
        auto arcs = stock_arcs(*X);
        if (arcs.empty()) throw std::runtime_error("no stock arcs on " + X->id());
        auto verdict = refute_by_arc(*X, f, gens, arcs.front());
        out.expected = "refuted by the diagonal arc";
        out.computed = !verdict ? "no verdict" : (*verdict ? "refuted" : "not refuted");
        out.pass = verdict && *verdict;
    } else if (kind == "pullback-arc-refutes") {
        MapSpec m = builtin_map(row.at("map").get<std::string>(), reg);
        DiffForm f = m.target->parse(row.at("form").get<std::string>());
        if (row.value("d-of", false)) f = exterior_d(m.target->chart_for(f.coords), f);
        DiffForm pulled = pullback(m, f);
        std::vector<DiffForm> gens = alpha_seed(*m.source, pulled.q);
        auto arcs = stock_arcs(*m.source);
        auto verdict = refute_by_arc(*m.source, pulled, gens, arcs.front());
        out.expected = "restriction refuted out of alpha";
        out.computed = !verdict ? "no verdict" : (*verdict ? "refuted" : "not refuted");
        out.pass = verdict && *verdict;
    } else if (kind == "pullback-member") {
        MapSpec m = builtin_map(row.at("map").get<std::string>(), reg);
        DiffForm f = m.target->parse(row.at("form").get<std::string>());
        DiffForm pulled = pullback(m, f);
        int p = row.value("level", 0);
        FormModule mod = eng.module_of(m.source, eng.alpha_level(m.source, pulled.q, p));
        bool member = mod.contains(m.source->to_ambient(pulled)).member;
        out.expected = "pullback lands in level " + std::to_string(p);
        out.computed = member ? "member" : "not a member";
        out.pass = member;
    } else if (kind == "pullback-equals") {
        MapSpec m = builtin_map(row.at("map").get<std::string>(), reg);
        DiffForm f = m.target->parse(row.at("form").get<std::string>());
        DiffForm pulled = pullback(m, f);
        DiffForm expect = m.source->parse_canonical(row.at("expect").get<std::string>());
        bool eq = form_equal(m.source->canonical_chart(), pulled, expect);
        out.expected = row.at("expect").get<std::string>();
        out.computed = m.source->print(pulled);
        out.pass = eq;
    } else if (kind == "L-member" || kind == "L-not-member") {
        VarietyPtr X = getX();
        auto r = X->L_contains(getform(X));
        out.expected = kind == "L-member" ? "in L" : "not in L";
        if (!r) {
            out.computed = "undecidable";
            out.pass = false;
        } else {
            out.computed = *r ? "in L" : "not in L";
            out.pass = *r == (kind == "L-member");
        }
    } else if (kind == "classify") {
        VarietyPtr X = getX();
        ClassificationReport r = eng.classify(X, getform(X));
        std::ostringstream want;
        bool ok = true;
        for (const char* rung : {"omega", "alpha", "beta", "L"}) {
            if (!row.contains(rung)) continue;
            std::string expect = row.at(rung).get<std::string>();
            Rung got = rung == std::string("omega")   ? r.in_omega
                       : rung == std::string("alpha") ? r.in_alpha
                       : rung == std::string("beta")  ? r.in_beta
                                                      : r.in_L;
            want << rung << ":" << expect << " ";
            if (to_string(got) != expect) ok = false;
        }
        out.expected = want.str();
        out.computed = rungs(r);
        out.pass = ok;
    } else if (kind == "pullback-classify") {
        MapSpec m = builtin_map(row.at("map").get<std::string>(), reg);
        DiffForm f = m.target->parse(row.at("form").get<std::string>());
        if (row.value("d-of", false)) f = exterior_d(m.target->chart_for(f.coords), f);
        DiffForm pulled = pullback(m, f);
        ClassificationReport r = eng.classify(m.source, pulled);
        std::string expect = row.at("alpha").get<std::string>();
        out.expected = "alpha:" + expect;
        out.computed = rungs(r);
        out.pass = to_string(r.in_alpha) == expect;
    } else if (kind == "golden-note") {
        out.expected = row.at("note").get<std::string>();
        out.computed = "recorded (comparison data only; outside the symbolic model)";
        out.pass = true;
    } else {
        throw std::runtime_error("unknown fixture row kind: " + kind);
    }
    return out;
}

} // namespace

VerifyReport verify_paper(BetaEngine& eng, Registry& reg, const std::string& fixtures_dir,
                          const std::string& scope) {
    namespace fs = std::filesystem;
    VerifyReport rep;
    fs::path dir = fs::path(fixtures_dir) / "paper";
    if (!fs::exists(dir)) throw std::runtime_error("fixture directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::string stem = f.stem().string();
        if (scope != "all" && stem != scope) continue;
        nlohmann::json j = nlohmann::json::parse(slurp(f));
        for (const auto& row : j.at("rows")) {
            VerifyRow r;
            try {
                r = run_row(eng, reg, fs::path(fixtures_dir), row);
            } catch (const std::exception& e2) {
                r.id = row.value("id", stem);
                r.expected = "no error";
                r.computed = std::string("error: ") + e2.what();
                r.pass = false;
            }
            rep.all_pass = rep.all_pass && r.pass;
            rep.rows.push_back(std::move(r));
        }
    }
    if (rep.rows.empty()) throw std::runtime_error("no fixture rows matched scope '" + scope + "'");
    return rep;
}

std::string verify_table(const VerifyReport& rep) {
    size_t w1 = 4, w2 = 8;
    for (const auto& r : rep.rows) {
        w1 = std::max(w1, r.id.size());
        w2 = std::max(w2, r.expected.size());
    }
    std::ostringstream os;
    for (const auto& r : rep.rows) {
        os << (r.pass ? "PASS  " : "FAIL  ");
        os << r.id;
        os << std::string(w1 - r.id.size() + 2, ' ');
        os << r.expected;
        os << std::string(w2 - r.expected.size() + 2, ' ');
        os << r.computed << "\n";
    }
    os << (rep.all_pass ? "all rows pass" : "FAILURES present") << " (" << rep.rows.size()
       << " rows)\n";
    return os.str();
}

std::string verify_json(const VerifyReport& rep) {
    nlohmann::json j;
    j["schema"] = "betaforms/verify/1";
    j["all_pass"] = rep.all_pass;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"id", r.id}, {"expected", r.expected}, {"computed", r.computed}, {"pass", r.pass}});
    j["rows"] = rows;
    return j.dump(2);
}

} // namespace betaforms
