// Command-line front end for the betaforms engine. Talks to the shared
// library exclusively through the C API.

#include <betaforms.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitInputError = 2;

struct Engine {
    bf_engine* e = nullptr;
    Engine() : e(bf_engine_new()) {}
    ~Engine() { bf_engine_free(e); }
};

struct Str {
    char* p = nullptr;
    ~Str() { bf_string_free(p); }
    explicit operator bool() const { return p != nullptr; }
    std::string get() const { return p ? std::string(p) : std::string(); }
};

int input_error(bf_engine* e, const std::string& what) {
    std::cerr << "error: " << what;
    const char* msg = bf_last_error(e);
    if (msg && *msg) std::cerr << ": " << msg;
    std::cerr << "\n";
    return kExitInputError;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload << "\n";
        return;
    }
    std::ofstream out(out_path);
    out << payload;
}

std::string fixtures_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("BETAFORMS_FIXTURES")) return env;
    return "fixtures";
}

// classification JSON -> a short human table
std::string classify_text(const std::string& payload) {
    json j = json::parse(payload);
    std::ostringstream os;
    os << j["variety"].get<std::string>() << " : " << j["form"].get<std::string>() << "\n";
    os << "  omega/torsion  " << j["omega"].get<std::string>() << "\n";
    os << "  alpha          " << j["alpha"]["verdict"].get<std::string>() << "  ("
       << j["alpha"]["evidence"].get<std::string>() << ")\n";
    if (j.contains("min_level")) os << "  first level    " << j["min_level"].get<int>() << "\n";
    os << "  beta           " << j["beta"]["verdict"].get<std::string>() << "  ("
       << j["beta"]["evidence"].get<std::string>() << ")\n";
    os << "  L              " << j["L"]["verdict"].get<std::string>() << "  ("
       << j["L"]["evidence"].get<std::string>() << ")\n";
    return os.str();
}

std::string family_csv(const std::string& payload) {
    json j = json::parse(payload);
    std::ostringstream os;
    os << "t,re,im,mass,converged\n";
    for (const auto& row : j["rows"]) {
        os << row["t"].get<double>() << "," << row["re"].get<double>() << ","
           << row["im"].get<double>() << "," << row["mass"].get<double>() << ","
           << (row["converged"].get<bool>() ? 1 : 0) << "\n";
    }
    return os.str();
}

json rho_json(const std::string& rho_spec) {
    // "c1,c2,...:radius[:C0|C1]" with complex centers as re or re+imj
    json out;
    out["class"] = "C1";
    std::string spec = rho_spec;
    size_t colon = spec.rfind(":C");
    if (colon != std::string::npos) {
        out["class"] = spec.substr(colon + 1);
        spec = spec.substr(0, colon);
    }
    size_t sep = spec.rfind(':');
    if (sep == std::string::npos) throw std::runtime_error("rho needs 'centers:radius'");
    out["radius"] = std::stod(spec.substr(sep + 1));
    json centers = json::array();
    std::stringstream ss(spec.substr(0, sep));
    std::string part;
    while (std::getline(ss, part, ',')) centers.push_back({std::stod(part), 0.0});
    out["center"] = centers;
    return out;
}

json cycle_json(bf_engine*, const std::string& cycle_flag) {
    if (!cycle_flag.empty() && cycle_flag.front() == '@') return json::parse(slurp(cycle_flag.substr(1)));
    return json(cycle_flag);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"singularity invariants of hypersurfaces: torsion-free forms, "
                 "integral-closure levels, the stabilized filtration, and numeric "
                 "cycle integration"};
    app.require_subcommand(1);

    Engine eng;
    if (!eng.e) {
        std::cerr << "error: engine initialization failed\n";
        return kExitInputError;
    }

    std::string variety, form_text, cert_path, map_token, out_path, fixdir_flag;
    std::string cycle_flag = "self", rho_flag = "0,0:0.7", u_text, v_text, grid_flag;
    std::string image_cycle_flag, scope = "all", export_what;
    bool as_json = false;
    int q = 1, level = 0, level_cap = -1, max_level = 1, degree = 1;
    double eps_min = 1e-6, tol = 1e-5;

    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--json", as_json, "emit the JSON report");
        sub->add_option("--out", out_path, "write the report to a file");
    };

    auto* classify = app.add_subcommand("classify", "inclusion-lattice ladder for a form");
    classify->add_option("--variety", variety)->required();
    classify->add_option("--form", form_text)->required();
    classify->add_option("--cert", cert_path, "dependence certificate JSON file");
    classify->add_option("--level-cap", level_cap);
    add_common(classify);

    auto* beta = app.add_subcommand("beta", "stabilized filtration generators and p*");
    beta->add_option("--variety", variety)->required();
    beta->add_option("--q", q)->required();
    beta->add_option("--level-cap", level_cap);
    add_common(beta);

    auto* levels = app.add_subcommand("levels", "generators of one filtration level");
    levels->add_option("--variety", variety)->required();
    levels->add_option("--q", q)->required();
    levels->add_option("--p", level)->required();
    add_common(levels);

    auto* pbc = app.add_subcommand("pullback-check", "level preservation along a named map");
    pbc->add_option("--map", map_token)->required();
    pbc->add_option("--max-level", max_level);
    add_common(pbc);

    auto* integ = app.add_subcommand("integrate", "cycle integral of rho.u^conj(v)");
    integ->add_option("--variety", variety)->required();
    integ->add_option("--cycle", cycle_flag, "stock cycle name or @file.json");
    integ->add_option("--rho", rho_flag, "bump 'c1,c2,..:radius[:C1]'");
    integ->add_option("--u", u_text)->required();
    integ->add_option("--v", v_text)->required();
    integ->add_option("--eps-min", eps_min);
    integ->add_option("--tol", tol);
    add_common(integ);

    auto* stokes = app.add_subcommand("stokes", "residual of the Stokes identity");
    stokes->add_option("--variety", variety)->required();
    stokes->add_option("--cycle", cycle_flag);
    stokes->add_option("--rho", rho_flag);
    stokes->add_option("--u", u_text)->required();
    stokes->add_option("--v", v_text)->required();
    stokes->add_option("--eps-min", eps_min);
    stokes->add_option("--tol", tol);
    add_common(stokes);

    auto* family = app.add_subcommand("family", "integral scan over a cycle family");
    family->add_option("--variety", variety)->required();
    family->add_option("--cycle", cycle_flag, "family stock cycle or @file.json");
    family->add_option("--rho", rho_flag);
    family->add_option("--u", u_text)->required();
    family->add_option("--v", v_text)->required();
    family->add_option("--grid", grid_flag, "comma-separated parameter values")->required();
    bool family_csv_flag = false;
    family->add_flag("--csv", family_csv_flag, "emit CSV (t,re,im,mass,converged)");
    add_common(family);

    auto* dimg = app.add_subcommand("direct-image", "change-of-variables check along a map");
    dimg->add_option("--map", map_token)->required();
    dimg->add_option("--cycle", cycle_flag, "source cycle");
    dimg->add_option("--image-cycle", image_cycle_flag, "image cycle")->required();
    dimg->add_option("--degree", degree);
    dimg->add_option("--rho", rho_flag);
    dimg->add_option("--u", u_text)->required();
    dimg->add_option("--v", v_text)->required();
    add_common(dimg);

    auto* verify = app.add_subcommand("verify-paper", "run the reproduction suite");
    verify->add_option("--scope", scope, "all | curve35 | sk | mk | fermat | product");
    verify->add_option("--fixtures", fixdir_flag, "fixture directory");
    add_common(verify);

    auto* exp = app.add_subcommand("export", "export a variety spec or file");
    exp->add_option("--variety", variety)->required();
    exp->add_option("--what", export_what, "'json' or 'variety'")->required();
    exp->add_option("--out", out_path);
    exp->add_flag("--json", as_json);

    auto* load = app.add_subcommand("load", "load and validate a .variety file");
    load->add_option("--file", form_text)->required();
    add_common(load);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) {
            std::string cert;
            if (!cert_path.empty()) cert = slurp(cert_path);
            Str r{bf_classify(eng.e, variety.c_str(), form_text.c_str(),
                              cert.empty() ? nullptr : cert.c_str(), level_cap)};
            if (!r) return input_error(eng.e, "classify failed");
            emit(as_json ? r.get() : classify_text(r.get()), out_path);
            return kExitOk;
        }
        if (beta->parsed()) {
            Str r{bf_beta(eng.e, variety.c_str(), q, level_cap)};
            if (!r) return input_error(eng.e, "beta failed");
            if (as_json) {
                emit(r.get(), out_path);
            } else {
                json j = json::parse(r.get());
                std::ostringstream os;
                os << "p* = " << j["pstar"].get<int>() << "\n";
                for (const auto& g : j["generators"]) os << "  " << g.get<std::string>() << "\n";
                emit(os.str(), out_path);
            }
            return kExitOk;
        }
        if (levels->parsed()) {
            Str r{bf_alpha_level(eng.e, variety.c_str(), q, level)};
            if (!r) return input_error(eng.e, "levels failed");
            emit(r.get(), out_path);
            return kExitOk;
        }
        if (pbc->parsed()) {
            Str r{bf_check_pullback(eng.e, map_token.c_str(), max_level)};
            if (!r) return input_error(eng.e, "pullback-check failed");
            json j = json::parse(r.get());
            bool ok = j["all_preserved"].get<bool>() && j["wedge_d_commute"].get<bool>();
            emit(as_json ? r.get()
                         : (std::string(ok ? "PASS" : "FAIL") + " " + j["map"].get<std::string>()),
                 out_path);
            return ok ? kExitOk : kExitVerifyFailure;
        }
        if (integ->parsed() || stokes->parsed() || family->parsed()) {
            json req;
            req["variety"] = variety;
            req["cycle"] = cycle_json(eng.e, cycle_flag);
            req["rho"] = rho_json(rho_flag);
            req["u"] = u_text;
            req["v"] = v_text;
            req["options"] = {{"eps_min", eps_min}, {"tol", tol}};
            if (family->parsed()) {
                json grid = json::array();
                std::stringstream ss(grid_flag);
                std::string part;
                while (std::getline(ss, part, ',')) grid.push_back(std::stod(part));
                req["grid"] = grid;
                Str r{bf_family_scan(eng.e, req.dump().c_str())};
                if (!r) return input_error(eng.e, "family scan failed");
                emit(family_csv_flag ? family_csv(r.get()) : r.get(), out_path);
                return kExitOk;
            }
            Str r{integ->parsed() ? bf_integrate(eng.e, req.dump().c_str())
                                  : bf_stokes(eng.e, req.dump().c_str())};
            if (!r) return input_error(eng.e, "integration failed");
            emit(r.get(), out_path);
            return kExitOk;
        }
        if (dimg->parsed()) {
            json req;
            req["map"] = map_token;
            req["cycle"] = cycle_json(eng.e, cycle_flag);
            req["image_cycle"] = cycle_json(eng.e, image_cycle_flag);
            req["degree"] = degree;
            req["rho"] = rho_json(rho_flag);
            req["u"] = u_text;
            req["v"] = v_text;
            Str r{bf_direct_image(eng.e, req.dump().c_str())};
            if (!r) return input_error(eng.e, "direct-image failed");
            emit(r.get(), out_path);
            return kExitOk;
        }
        if (verify->parsed()) {
            int failures = 0;
            Str r{bf_verify_paper(eng.e, fixtures_dir(fixdir_flag).c_str(), scope.c_str(), &failures)};
            if (!r) return input_error(eng.e, "verify-paper failed");
            if (as_json) {
                emit(r.get(), out_path);
            } else {
                json j = json::parse(r.get());
                std::ostringstream os;
                for (const auto& row : j["rows"])
                    os << (row["pass"].get<bool>() ? "PASS  " : "FAIL  ")
                       << row["id"].get<std::string>() << "  expected[" << row["expected"].get<std::string>()
                       << "]  computed[" << row["computed"].get<std::string>() << "]\n";
                os << (failures == 0 ? "all rows pass\n" : std::to_string(failures) + " failures\n");
                emit(os.str(), out_path);
            }
            return failures == 0 ? kExitOk : kExitVerifyFailure;
        }
        if (exp->parsed()) {
            if (export_what == "json") {
                Str r{bf_variety_json(eng.e, variety.c_str())};
                if (!r) return input_error(eng.e, "export failed");
                emit(r.get(), out_path);
            } else if (export_what == "variety") {
                if (out_path.empty()) return input_error(eng.e, "export variety needs --out");
                if (bf_variety_save_file(eng.e, variety.c_str(), out_path.c_str()) != 0)
                    return input_error(eng.e, "export failed");
            } else {
                return input_error(eng.e, "unknown export kind: " + export_what);
            }
            return kExitOk;
        }
        if (load->parsed()) {
            char* id = nullptr;
            if (bf_variety_load_file(eng.e, form_text.c_str(), &id) != 0)
                return input_error(eng.e, "load failed");
            Str sid{id};
            std::cout << "loaded " << sid.get() << "\n";
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
