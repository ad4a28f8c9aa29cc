#include "singlim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace singlim {

using nlohmann::json;

namespace {

const std::vector<std::string> kGroups = {"identities", "inequalities", "duhamel", "max_reg", "rates"};

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        require(known, "unknown key '" + key + "' in " + where);
    }
}

double number(const json& j, const std::string& what) {
    require(j.is_number(), what + " must be a number");
    const double x = j.get<double>();
    require(std::isfinite(x), what + " must be finite");
    return x;
}

std::vector<double> numbers(const json& j, const std::string& what) {
    require(j.is_array(), what + " must be an array");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(number(x, what + " entry"));
    return out;
}

int count(const json& j, const std::string& what) {
    require(j.is_number_integer(), what + " must be an integer");
    const auto v = j.get<long long>();
    require(v > 0 && v <= 10'000'000, what + " out of range");
    return static_cast<int>(v);
}

SpectrumSpec parse_spectrum(const json& j, const std::string& where) {
    require(j.is_object(), where + " must be an object");
    reject_unknown(j, {"preset", "eigenvalues"}, where);
    SpectrumSpec s;
    require(j.contains("preset") != j.contains("eigenvalues"), where + " needs exactly one of preset, eigenvalues");
    if (j.contains("preset")) {
        require(j["preset"].is_string(), where + ".preset must be a string");
        s.preset = j["preset"].get<std::string>();
    } else {
        s.eigenvalues = numbers(j["eigenvalues"], where + ".eigenvalues");
    }
    return s;
}

DataSpec parse_data(const json& j, const std::string& where) {
    require(j.is_object(), where + " must be an object");
    reject_unknown(j, {"values", "family", "p"}, where);
    DataSpec d;
    if (j.contains("values")) {
        require(!j.contains("family") && !j.contains("p"), where + ": values excludes family and p");
        d.values = numbers(j["values"], where + ".values");
        return d;
    }
    require(j.contains("family") && j["family"].is_string(), where + " needs values or family");
    const auto family = j["family"].get<std::string>();
    if (family == "decay") {
        require(j.contains("p"), where + ": decay family needs p");
        d.kind = DataSpec::Kind::decay;
        d.p = number(j["p"], where + ".p");
    } else if (family == "il0") {
        require(!j.contains("p"), where + ": il0 family takes no p");
        d.kind = DataSpec::Kind::il0;
    } else {
        throw ConfigError(where + ": unknown data family '" + family + "'");
    }
    return d;
}

std::vector<Comparison> parse_comparisons(const json& j, const std::string& where) {
    require(j.is_array(), where + " must be an array");
    std::vector<Comparison> out;
    for (const auto& x : j) {
        require(x.is_string(), where + " entries must be strings");
        const auto c = parse_comparison(x.get<std::string>());
        require(c.has_value(), where + ": unknown comparison '" + x.get<std::string>() + "'");
        out.push_back(*c);
    }
    return out;
}

json comparisons_json(const std::vector<Comparison>& cs) {
    json out = json::array();
    for (auto c : cs) out.push_back(std::string(to_string(c)));
    return out;
}

json data_json(const DataSpec& d) {
    switch (d.kind) {
        case DataSpec::Kind::values:
            return json{{"values", d.values}};
        case DataSpec::Kind::decay:
            return json{{"family", "decay"}, {"p", d.p}};
        case DataSpec::Kind::il0:
            return json{{"family", "il0"}};
    }
    return json{};
}

bool safe_name(const std::string& name) {
    if (name.empty() || name == "." || name == "..") return false;
    for (char c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) return false;
    }
    return true;
}

}  // namespace

const std::vector<std::string>& check_groups() { return kGroups; }

const std::vector<PresetInfo>& spectrum_presets() {
    static const std::vector<PresetInfo> presets = {
        {"single-mode", "lambda = {1}"},
        {"three-mode", "lambda = {0, 1, 4}, includes the kernel mode"},
        {"dirichlet-32", "lambda_k = (k pi)^2, k = 1..32"},
        {"neumann-33", "lambda_k = (k pi)^2, k = 0..32, includes the kernel mode"},
    };
    return presets;
}

const std::vector<PresetInfo>& data_families() {
    static const std::vector<PresetInfo> families = {
        {"decay-p", "c_i = (1 + i)^{-p}, i = 0..n-1; {\"family\": \"decay\", \"p\": p}"},
        {"il0", "u1 = -A u0, no initial layer; {\"family\": \"il0\"} (u1 only)"},
        {"explicit", "coefficients listed per mode; {\"values\": [...]}"},
    };
    return families;
}

Spectrum build_spectrum(const SpectrumSpec& s) {
    if (s.preset.empty()) return Spectrum(s.eigenvalues);
    std::vector<double> ev;
    if (s.preset == "single-mode") {
        ev = {1.0};
    } else if (s.preset == "three-mode") {
        ev = {0.0, 1.0, 4.0};
    } else if (s.preset == "dirichlet-32" || s.preset == "neumann-33") {
        for (int k = s.preset == "neumann-33" ? 0 : 1; k <= 32; ++k) {
            ev.push_back(std::pow(k * std::numbers::pi, 2));
        }
    } else {
        throw ConfigError("unknown spectrum preset '" + s.preset + "'");
    }
    return Spectrum(std::move(ev));
}

SpecVector build_data(const DataSpec& d, const Spectrum& spec, const SpecVector* u0) {
    switch (d.kind) {
        case DataSpec::Kind::values:
            if (d.values.size() != spec.size()) {
                throw ConfigError("data has " + std::to_string(d.values.size()) + " values for " +
                                  std::to_string(spec.size()) + " modes");
            }
            return SpecVector(d.values);
        case DataSpec::Kind::decay: {
            SpecVector out(spec.size());
            for (std::size_t i = 0; i < spec.size(); ++i) out[i] = std::pow(1.0 + static_cast<double>(i), -d.p);
            return out;
        }
        case DataSpec::Kind::il0:
            if (u0 == nullptr) throw ConfigError("the il0 family only applies to u1");
            return -1.0 * apply_power(spec, 1.0, *u0);
    }
    throw ConfigError("unknown data kind");
}

ExperimentConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    require(j.is_object(), "config must be a JSON object");
    reject_unknown(j,
                   {"schema", "problems", "epsilons", "grid", "checks", "comparisons", "tolerances",
                    "synthetic_exponent", "output_dir"},
                   "config");
    require(j.contains("schema") && j["schema"] == kConfigSchema,
            "config schema must be \"" + std::string(kConfigSchema) + "\"");

    ExperimentConfig cfg;
    require(j.contains("problems") && j["problems"].is_array() && !j["problems"].empty(),
            "config needs a nonempty problems array");
    std::set<std::string> names;
    for (std::size_t k = 0; k < j["problems"].size(); ++k) {
        const json& p = j["problems"][k];
        const std::string where = "problems[" + std::to_string(k) + "]";
        require(p.is_object(), where + " must be an object");
        reject_unknown(p, {"name", "spectrum", "u0", "u1", "comparisons"}, where);
        ProblemSpec ps;
        require(p.contains("name") && p["name"].is_string(), where + " needs a name");
        ps.name = p["name"].get<std::string>();
        require(safe_name(ps.name), where + ": name may only use letters, digits, '-', '_' and '.'");
        require(names.insert(ps.name).second, "duplicate problem name '" + ps.name + "'");
        require(p.contains("spectrum") && p.contains("u0") && p.contains("u1"), where + " needs spectrum, u0, u1");
        ps.spectrum = parse_spectrum(p["spectrum"], where + ".spectrum");
        ps.u0 = parse_data(p["u0"], where + ".u0");
        ps.u1 = parse_data(p["u1"], where + ".u1");
        require(ps.u0.kind != DataSpec::Kind::il0, where + ".u0: the il0 family only applies to u1");
        if (p.contains("comparisons")) ps.comparisons = parse_comparisons(p["comparisons"], where + ".comparisons");
        try {
            const Spectrum spec = build_spectrum(ps.spectrum);
            const SpecVector u0 = build_data(ps.u0, spec);
            const SpecVector u1 = build_data(ps.u1, spec, &u0);
            make_problem(spec, 1.0, u0, u1);
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
        cfg.problems.push_back(std::move(ps));
    }

    require(j.contains("epsilons"), "config needs epsilons");
    cfg.epsilons = numbers(j["epsilons"], "epsilons");
    require(!cfg.epsilons.empty(), "epsilons must be nonempty");
    for (double e : cfg.epsilons) require(e > 0.0 && e <= 1.0, "epsilon values must lie in (0, 1]");

    if (j.contains("grid")) {
        const json& g = j["grid"];
        require(g.is_object(), "grid must be an object");
        reject_unknown(g, {"t_max", "linear_count", "log_count", "log_floor"}, "grid");
        if (g.contains("t_max")) cfg.grid.t_max = number(g["t_max"], "grid.t_max");
        if (g.contains("linear_count")) cfg.grid.linear_count = count(g["linear_count"], "grid.linear_count");
        if (g.contains("log_count")) cfg.grid.log_count = count(g["log_count"], "grid.log_count");
        if (g.contains("log_floor")) cfg.grid.log_floor = number(g["log_floor"], "grid.log_floor");
        require(cfg.grid.t_max > 0.0, "grid.t_max must be positive");
        require(cfg.grid.log_floor > 0.0 && cfg.grid.log_floor < 1.0, "grid.log_floor must lie in (0, 1)");
    }

    if (j.contains("checks")) {
        require(j["checks"].is_array(), "checks must be an array");
        for (const auto& c : j["checks"]) {
            require(c.is_string(), "checks entries must be strings");
            const auto name = c.get<std::string>();
            require(std::find(kGroups.begin(), kGroups.end(), name) != kGroups.end(),
                    "unknown check group '" + name + "'");
            cfg.checks.push_back(name);
        }
    } else {
        cfg.checks = kGroups;
    }

    if (j.contains("comparisons")) cfg.comparisons = parse_comparisons(j["comparisons"], "comparisons");

    if (j.contains("tolerances")) {
        require(j["tolerances"].is_object(), "tolerances must be an object");
        for (const auto& [key, value] : j["tolerances"].items()) {
            cfg.tolerances[key] = number(value, "tolerances." + key);
        }
        try {
            Tolerances check(cfg.tolerances);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }

    if (j.contains("synthetic_exponent")) cfg.synthetic_exponent = number(j["synthetic_exponent"], "synthetic_exponent");
    if (j.contains("output_dir")) {
        require(j["output_dir"].is_string(), "output_dir must be a string");
        cfg.output_dir = j["output_dir"].get<std::string>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    json j;
    j["schema"] = kConfigSchema;
    json problems = json::array();
    for (const auto& p : cfg.problems) {
        json pj;
        pj["name"] = p.name;
        pj["spectrum"] = p.spectrum.preset.empty() ? json{{"eigenvalues", p.spectrum.eigenvalues}}
                                                   : json{{"preset", p.spectrum.preset}};
        pj["u0"] = data_json(p.u0);
        pj["u1"] = data_json(p.u1);
        if (p.comparisons) pj["comparisons"] = comparisons_json(*p.comparisons);
        problems.push_back(std::move(pj));
    }
    j["problems"] = std::move(problems);
    j["epsilons"] = cfg.epsilons;
    j["grid"] = {{"t_max", cfg.grid.t_max},
                 {"linear_count", cfg.grid.linear_count},
                 {"log_count", cfg.grid.log_count},
                 {"log_floor", cfg.grid.log_floor}};
    j["checks"] = cfg.checks;
    j["comparisons"] = comparisons_json(cfg.comparisons);
    j["tolerances"] = json::object();
    for (const auto& [key, value] : cfg.tolerances) j["tolerances"][key] = value;
    j["synthetic_exponent"] = cfg.synthetic_exponent;
    j["output_dir"] = cfg.output_dir;
    return j.dump(2) + "\n";
}

}  // namespace singlim
