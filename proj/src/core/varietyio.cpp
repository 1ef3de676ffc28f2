#include "core/varietyio.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace betaforms {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + msg);
}

// scalar-polynomial parser reusing the form grammar on a bare chart
Polynomial parse_poly(const std::string& text, const CtxPtr& ctx, const std::string& origin, int line) {
    Chart bare;
    bare.ctx = ctx;
    bare.coords = Coords::Ambient;
    bare.pole_mask.assign(ctx->names.size(), 0);
    try {
        DiffForm f = parse_form(text, bare);
        if (f.q != 0) fail(origin, line, "expected a polynomial, got a form of degree " + std::to_string(f.q));
        if (f.is_zero()) return Polynomial::zero(ctx);
        const MeroFunction& m = f.comps.begin()->second;
        if (m.has_denominator()) fail(origin, line, "expected a polynomial, found a denominator");
        return m.num();
    } catch (const FormParseError& e) {
        fail(origin, line, std::string("bad polynomial '") + text + "': " + e.what());
    }
}

} // namespace

VarietyPtr load_variety_text(const std::string& text, const std::string& origin) {
    VarietyData d;
    CtxPtr ctx;
    std::optional<Parametrization> param;
    std::optional<DeckGroup> deck;
    std::string section;
    std::map<std::string, std::string> param_lines;
    int lineno = 0;

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "unterminated section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));

        if (section == "variety") {
            if (key == "name") d.id = val;
            else if (key == "variables") {
                d.ambient_vars = split(val, ' ');
                std::erase_if(d.ambient_vars, [](const std::string& s) { return s.empty(); });
                ctx = make_ctx(d.ambient_vars);
            } else if (key == "equations") {
                if (!ctx) fail(origin, lineno, "variables must come before equations");
                for (const auto& t : split(val, ';'))
                    if (!t.empty()) d.equations.push_back(parse_poly(t, ctx, origin, lineno));
            } else if (key == "dimension") {
                d.dim = std::stoi(val);
            } else if (key == "normal") {
                d.normal = val == "true" || val == "1" || val == "yes";
            } else if (key == "pole-variables") {
                d.pole_vars = split(val, ' ');
                std::erase_if(d.pole_vars, [](const std::string& s) { return s.empty(); });
            } else if (key == "eliminated") {
                d.elim_var = val;
            } else if (key == "singular-locus") {
                if (!ctx) fail(origin, lineno, "variables must come before singular-locus");
                for (const auto& t : split(val, ';'))
                    if (!t.empty()) d.singular_locus.push_back(parse_poly(t, ctx, origin, lineno));
            } else {
                fail(origin, lineno, "unknown key in [variety]: " + key);
            }
        } else if (section == "parametrization") {
            if (key == "parameters") {
                param.emplace();
                auto names = split(val, ' ');
                std::erase_if(names, [](const std::string& s) { return s.empty(); });
                param->cover_ctx = make_ctx(names);
            } else {
                param_lines[key] = val;
            }
        } else if (section == "deck") {
            if (!deck) deck.emplace();
            if (key == "order") deck->order = std::stoi(val);
            else if (key == "weights") {
                for (const auto& w : split(val, ' '))
                    if (!w.empty()) deck->weights.push_back(std::stoi(w));
            } else fail(origin, lineno, "unknown key in [deck]: " + key);
        } else if (section == "L-presentation" || section == "alpha-seeds") {
            if (key.size() < 2 || key[0] != 'q') fail(origin, lineno, "expected qN = forms");
            int q = std::stoi(key.substr(1));
            auto& target = section == "L-presentation" ? d.L_presentation[q] : d.alpha_seed_decl[q];
            for (const auto& t : split(val, ';'))
                if (!t.empty()) target.push_back(t);
        } else if (section == "golden") {
            GoldenEntry g;
            g.key = key;
            std::string body = val;
            size_t bar = body.find('|');
            if (bar != std::string::npos) {
                g.comment = trim(body.substr(bar + 1));
                body = body.substr(0, bar);
            }
            for (const auto& t : split(body, ';'))
                if (!t.empty()) g.forms.push_back(t);
            d.golden.push_back(std::move(g));
        } else {
            fail(origin, lineno, "content outside a known section");
        }
    }
    if (d.id.empty()) fail(origin, lineno, "missing name");
    if (!ctx) fail(origin, lineno, "missing variables");
    if (param) {
        for (const auto& vn : d.ambient_vars) {
            auto it = param_lines.find(vn);
            if (it == param_lines.end())
                fail(origin, lineno, "parametrization misses the component for " + vn);
            param->components.push_back(parse_poly(it->second, param->cover_ctx, origin, lineno));
        }
        d.param = std::move(param);
    }
    d.deck = std::move(deck);
    return Variety::make(std::move(d)); // full validation happens here
}

VarietyPtr load_variety_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open variety file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_variety_text(ss.str(), path);
}

std::string save_variety_text(const Variety& v) {
    const VarietyData& d = v.data();
    std::ostringstream os;
    os << "[variety]\n";
    os << "name = " << d.id << "\n";
    os << "variables =";
    for (const auto& n : d.ambient_vars) os << " " << n;
    os << "\n";
    if (!d.equations.empty()) {
        os << "equations = ";
        for (size_t i = 0; i < d.equations.size(); ++i)
            os << (i ? "; " : "") << d.equations[i].str();
        os << "\n";
    }
    os << "dimension = " << d.dim << "\n";
    os << "normal = " << (d.normal ? "true" : "false") << "\n";
    if (!d.pole_vars.empty()) {
        os << "pole-variables =";
        for (const auto& n : d.pole_vars) os << " " << n;
        os << "\n";
    }
    if (!d.elim_var.empty()) os << "eliminated = " << d.elim_var << "\n";
    if (!d.singular_locus.empty()) {
        os << "singular-locus = ";
        for (size_t i = 0; i < d.singular_locus.size(); ++i)
            os << (i ? "; " : "") << d.singular_locus[i].str();
        os << "\n";
    }
    if (d.param) {
        os << "\n[parametrization]\n";
        os << "parameters =";
        for (const auto& n : d.param->cover_ctx->names) os << " " << n;
        os << "\n";
        for (size_t i = 0; i < d.ambient_vars.size(); ++i)
            os << d.ambient_vars[i] << " = " << d.param->components[i].str() << "\n";
    }
    if (d.deck) {
        os << "\n[deck]\n";
        os << "order = " << d.deck->order << "\n";
        os << "weights =";
        for (int w : d.deck->weights) os << " " << w;
        os << "\n";
    }
    if (!d.L_presentation.empty()) {
        os << "\n[L-presentation]\n";
        for (const auto& [q, forms] : d.L_presentation) {
            os << "q" << q << " = ";
            for (size_t i = 0; i < forms.size(); ++i) os << (i ? "; " : "") << forms[i];
            os << "\n";
        }
    }
    if (!d.alpha_seed_decl.empty()) {
        os << "\n[alpha-seeds]\n";
        for (const auto& [q, forms] : d.alpha_seed_decl) {
            os << "q" << q << " = ";
            for (size_t i = 0; i < forms.size(); ++i) os << (i ? "; " : "") << forms[i];
            os << "\n";
        }
    }
    if (!d.golden.empty()) {
        os << "\n[golden]\n";
        for (const auto& g : d.golden) {
            os << g.key << " = ";
            for (size_t i = 0; i < g.forms.size(); ++i) os << (i ? "; " : "") << g.forms[i];
            if (!g.comment.empty()) os << " | " << g.comment;
            os << "\n";
        }
    }
    return os.str();
}

void save_variety_file(const Variety& v, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write variety file: " + path);
    out << save_variety_text(v);
}

std::string variety_to_json(const Variety& v) {
    const VarietyData& d = v.data();
    nlohmann::json j;
    j["schema"] = "betaforms/variety/1";
    j["name"] = d.id;
    j["variables"] = d.ambient_vars;
    std::vector<std::string> eqs;
    for (const auto& e : d.equations) eqs.push_back(e.str());
    j["equations"] = eqs;
    j["dimension"] = d.dim;
    j["normal"] = d.normal;
    j["pole_variables"] = d.pole_vars;
    if (!d.elim_var.empty()) j["eliminated"] = d.elim_var;
    std::vector<std::string> sing;
    for (const auto& s : d.singular_locus) sing.push_back(s.str());
    j["singular_locus"] = sing;
    if (d.param) {
        nlohmann::json p;
        p["parameters"] = d.param->cover_ctx->names;
        nlohmann::json comps;
        for (size_t i = 0; i < d.ambient_vars.size(); ++i)
            comps[d.ambient_vars[i]] = d.param->components[i].str();
        p["components"] = comps;
        j["parametrization"] = p;
    }
    if (d.deck) {
        j["deck"] = {{"order", d.deck->order}, {"weights", d.deck->weights}};
    }
    for (const auto& [q, forms] : d.L_presentation) j["L"]["q" + std::to_string(q)] = forms;
    for (const auto& [q, forms] : d.alpha_seed_decl) j["alpha_seeds"]["q" + std::to_string(q)] = forms;
    for (const auto& g : d.golden) {
        nlohmann::json e;
        e["forms"] = g.forms;
        if (!g.comment.empty()) e["comment"] = g.comment;
        j["golden"][g.key] = e;
    }
    return j.dump(2);
}

} // namespace betaforms
