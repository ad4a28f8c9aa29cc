#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "singlim/config.hpp"
#include "singlim/runner.hpp"

namespace {

using namespace singlim;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::string resolve_out(const std::string& flag, const ExperimentConfig& cfg) {
    if (!flag.empty()) return flag;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    throw ConfigError("no output directory: pass --out or set output_dir");
}

int count_failures(const std::vector<CheckReport>& reports) {
    int failed = 0;
    for (const auto& r : reports) {
        if (!r.pass) {
            ++failed;
            std::cerr << "FAIL " << r.id << ": " << r.note << "\n";
        }
    }
    return failed;
}

int cmd_presets() {
    std::cout << "spectrum presets:\n";
    for (const auto& p : spectrum_presets()) {
        const Spectrum spec = build_spectrum(SpectrumSpec{p.name, {}});
        std::printf("  %-13s %s; %zu modes, first eigenvalue %.8g, largest %.8g\n", p.name.c_str(),
                    p.description.c_str(), spec.size(), spec[0], spec.max_eigenvalue());
    }
    std::cout << "data families:\n";
    for (const auto& f : data_families()) std::printf("  %-13s %s\n", f.name.c_str(), f.description.c_str());
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out) {
    const ExperimentConfig cfg = load_config(config_path);
    write_outputs(resolve_out(out, cfg), simulate_outputs(cfg), cfg);
    return 0;
}

int cmd_verify(const std::string& config_path, const std::string& out) {
    const ExperimentConfig cfg = load_config(config_path);
    const auto reports = run_verification(cfg);
    const std::string text = report_json(reports);
    const std::string dir = out.empty() ? cfg.output_dir : out;
    if (dir.empty()) {
        std::cout << text;
    } else {
        write_outputs(dir, {{"report.json", text}}, cfg);
    }
    const int failed = count_failures(reports);
    std::cerr << reports.size() << " checks, " << failed << " failed\n";
    return failed == 0 ? 0 : kExitFailure;
}

int cmd_rates(const std::string& config_path, const std::string& out) {
    const ExperimentConfig cfg = load_config(config_path);
    const auto outcomes = run_rates(cfg);
    const std::string dir = resolve_out(out, cfg);
    write_outputs(dir, rate_outputs(outcomes, cfg.problems.size() > 1), cfg);
    std::vector<CheckReport> reports;
    for (const auto& o : outcomes) {
        reports.push_back(o.report);
        if (o.experiment) {
            std::printf("%s %s slope %.6f intercept %.6f r2 %.6f\n", o.problem.c_str(),
                        std::string(to_string(o.comparison)).c_str(), o.experiment->fit.slope,
                        o.experiment->fit.intercept, o.experiment->fit.r2);
        }
    }
    return count_failures(reports) == 0 ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-form experiments for eps u'' + A u + u' = 0 and its parabolic limit"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out;

    auto* simulate = app.add_subcommand("simulate", "write trajectory tables for every eps");
    simulate->add_option("--config", config_path, "experiment config (JSON)")->required();
    simulate->add_option("--out", out, "output directory");

    auto* verify = app.add_subcommand("verify", "run the identity, inequality and rate checks");
    verify->add_option("--config", config_path, "experiment config (JSON)")->required();
    verify->add_option("--out", out, "output directory; report goes to stdout without it");

    auto* rates = app.add_subcommand("rates", "fit convergence rates over the eps list");
    rates->add_option("--config", config_path, "experiment config (JSON)")->required();
    rates->add_option("--out", out, "output directory");

    auto* presets = app.add_subcommand("presets", "list spectrum presets and data families");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*presets) return cmd_presets();
        if (*simulate) return cmd_simulate(config_path, out);
        if (*verify) return cmd_verify(config_path, out);
        if (*rates) return cmd_rates(config_path, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
