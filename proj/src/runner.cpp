#include "singlim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <cmath>
#include <limits>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace singlim {

using nlohmann::json;

namespace {

bool selected(const ExperimentConfig& cfg, std::string_view group) {
    return std::find(cfg.checks.begin(), cfg.checks.end(), group) != cfg.checks.end();
}

void prefix_all(std::vector<CheckReport>& reports, const std::string& prefix) {
    for (auto& r : reports) r.id = prefix + r.id;
}

CheckReport precondition_failure(std::string id, const std::string& message) {
    CheckReport r;
    r.id = std::move(id);
    r.pass = false;
    r.margin = -std::numeric_limits<double>::infinity();
    r.tolerance = 0.0;
    r.note = "precondition: " + message;
    return r;
}

json number_json(double x) {
    // JSON has no infinities; they only appear as margins of unmeasurable checks.
    if (!std::isfinite(x)) return nullptr;
    return x;
}

TimeGrid max_reg_grid(const GridParams& params, const Spectrum& spec, const std::vector<double>& eps) {
    GridParams p = params;
    p.t_max = std::max(p.t_max, integration_horizon(spec));
    return TimeGrid::standard(p, eps);
}

}  // namespace

std::vector<ProblemInstance> instantiate(const ExperimentConfig& cfg) {
    std::vector<ProblemInstance> out;
    for (const auto& p : cfg.problems) {
        ProblemInstance inst{p.name, build_spectrum(p.spectrum), {}, {}, p.comparisons.value_or(cfg.comparisons)};
        inst.u0 = build_data(p.u0, inst.spec);
        inst.u1 = build_data(p.u1, inst.spec, &inst.u0);
        out.push_back(std::move(inst));
    }
    return out;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_eps(double eps) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", eps);
    return buf;
}

std::string trajectory_csv(const ProblemInstance& p, double eps, const GridParams& grid) {
    const ProblemData pd = make_problem(p.spec, eps, p.u0, p.u1);
    const TimeGrid g = problem_grid(grid, p.spec, eps);
    const ProfileFunction u = exact_solution(pd);
    const ProfileFunction v = parabolic_profile(pd);
    const ProfileFunction theta = theta_layer(pd);
    const ProfileFunction second = main_expansion_profile(pd);

    std::string out = "t,norm_u,norm_v,norm_theta,err_order0,err_theta,err_order2\n";
    for (double t : g.times()) {
        const SpecVector ut = u(t);
        const SpecVector vt = v(t);
        const SpecVector th = theta(t);
        const double row[] = {t,
                              norm(ut),
                              norm(vt),
                              norm(th),
                              norm(ut - vt),
                              norm(ut - vt - th),
                              norm(ut - second(t))};
        for (std::size_t k = 0; k < std::size(row); ++k) {
            if (k > 0) out += ',';
            out += format_number(row[k]);
        }
        out += '\n';
    }
    return out;
}

std::vector<OutputFile> simulate_outputs(const ExperimentConfig& cfg) {
    std::vector<OutputFile> files;
    const auto problems = instantiate(cfg);
    const bool nested = problems.size() > 1;
    for (const auto& p : problems) {
        for (double eps : cfg.epsilons) {
            const std::string name = "trajectory_eps" + format_eps(eps) + ".csv";
            files.push_back({nested ? p.name + "/" + name : name, trajectory_csv(p, eps, cfg.grid)});
        }
    }
    return files;
}

std::vector<CheckReport> run_verification(const ExperimentConfig& cfg) {
    const Tolerances tol(cfg.tolerances);
    std::vector<CheckReport> all;
    auto append = [&all](std::vector<CheckReport> v, const std::string& prefix) {
        prefix_all(v, prefix);
        all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    };

    for (const auto& p : instantiate(cfg)) {
        for (double eps : cfg.epsilons) {
            const std::string prefix = p.name + "/eps=" + format_eps(eps) + "/";
            const ProblemData pd = make_problem(p.spec, eps, p.u0, p.u1);
            const TimeGrid g = problem_grid(cfg.grid, p.spec, eps);
            if (selected(cfg, "identities")) append(identity_checks(pd, g, tol), prefix);
            if (selected(cfg, "inequalities")) {
                std::vector<CheckReport> v = energy_inequality_checks(pd, g, tol);
                v.push_back(kisynski_explicit_bound(pd, g, tol));
                for (auto& r : l2_remark_bounds(pd, g, std::nullopt, tol)) v.push_back(std::move(r));
                for (auto& r : resolvent_bound_checks(pd, tol)) v.push_back(std::move(r));
                append(std::move(v), prefix);
            }
            if (selected(cfg, "duhamel")) append(duhamel_residual(pd, g, tol), prefix);
        }
        if (selected(cfg, "max_reg")) {
            const TimeGrid g = max_reg_grid(cfg.grid, p.spec, cfg.epsilons);
            append(max_reg_checks(p.spec, p.u0, g, "u0", tol), p.name + "/");
            append(max_reg_checks(p.spec, p.u1, g, "u1", tol), p.name + "/");
        }
        if (selected(cfg, "rates") && !p.comparisons.empty()) {
            for (auto c : p.comparisons) {
                const std::string id = p.name + "/rate_" + std::string(to_string(c));
                if (cfg.epsilons.size() < 3) {
                    all.push_back(precondition_failure(id, "rate fits need at least 3 eps values"));
                    continue;
                }
                try {
                    const auto e = run_rate_experiment(p.spec, p.u0, p.u1, cfg.epsilons, c, cfg.grid,
                                                       cfg.synthetic_exponent);
                    all.push_back(rate_check(e, c, "", tol));
                    all.back().id = id;
                } catch (const std::invalid_argument& ex) {
                    all.push_back(precondition_failure(id, ex.what()));
                }
            }
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return all;
}

std::string report_json(const std::vector<CheckReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back({{"id", r.id},
                       {"pass", r.pass},
                       {"margin", number_json(r.margin)},
                       {"tolerance", number_json(r.tolerance)},
                       {"note", r.note}});
    }
    return arr.dump(2) + "\n";
}

std::vector<RateOutcome> run_rates(const ExperimentConfig& cfg) {
    if (cfg.epsilons.size() < 3) throw ConfigError("rates need at least 3 eps values");
    const Tolerances tol(cfg.tolerances);
    std::vector<RateOutcome> out;
    for (const auto& p : instantiate(cfg)) {
        for (auto c : p.comparisons) {
            RateOutcome o{p.name, c, std::nullopt, {}};
            const std::string id = p.name + "/rate_" + std::string(to_string(c));
            try {
                o.experiment =
                    run_rate_experiment(p.spec, p.u0, p.u1, cfg.epsilons, c, cfg.grid, cfg.synthetic_exponent);
                o.report = rate_check(*o.experiment, c, "", tol);
                o.report.id = id;
            } catch (const std::invalid_argument& ex) {
                o.report = precondition_failure(id, ex.what());
            }
            out.push_back(std::move(o));
        }
    }
    return out;
}

std::vector<OutputFile> rate_outputs(const std::vector<RateOutcome>& outcomes, bool per_problem_dirs) {
    std::vector<OutputFile> files;
    for (const auto& o : outcomes) {
        if (!o.experiment) continue;
        const std::string dir = per_problem_dirs ? o.problem + "/" : "";
        const std::string stem = dir + "rates_" + std::string(to_string(o.comparison));
        std::string csv = "epsilon,error\n";
        const auto& curve = o.experiment->curve;
        for (std::size_t k = 0; k < curve.eps.size(); ++k) {
            csv += format_number(curve.eps[k]) + "," + format_number(curve.error[k]) + "\n";
        }
        files.push_back({stem + ".csv", std::move(csv)});
        const auto& fit = o.experiment->fit;
        json j = {{"comparison", std::string(to_string(o.comparison))},
                  {"slope", fit.slope},
                  {"intercept", fit.intercept},
                  {"r2", fit.r2},
                  {"expected_exponent", o.experiment->expected_exponent},
                  {"points_used", fit.points_used},
                  {"pass", o.report.pass}};
        files.push_back({stem + ".json", j.dump(2) + "\n"});
    }
    return files;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize_config(cfg)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string manifest_json(const ExperimentConfig& cfg, const std::vector<std::string>& files) {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde != nullptr && *sde != '\0') {
        char* end = nullptr;
        const long long v = std::strtoll(sde, &end, 10);
        if (end != nullptr && *end == '\0' && v >= 0) now = static_cast<std::time_t>(v);
    }
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));

    std::vector<std::string> sorted = files;
    std::sort(sorted.begin(), sorted.end());
    json j = {{"tool", "singlim"},
              {"version", std::string(kToolVersion)},
              {"config_hash", std::string("fnv1a64:") + hash},
              {"timestamp", stamp},
              {"files", sorted}};
    return j.dump(2) + "\n";
}

void write_outputs(const std::string& dir, const std::vector<OutputFile>& files, const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    auto write = [](const fs::path& path, const std::string& contents) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
        out << contents;
        out.close();
        if (!out) throw IoError("failed writing '" + path.string() + "'");
    };
    std::vector<std::string> names;
    for (const auto& f : files) {
        write(fs::path(dir) / f.path, f.contents);
        names.push_back(f.path);
    }
    write(fs::path(dir) / "manifest.json", manifest_json(cfg, names));
}

}  // namespace singlim
