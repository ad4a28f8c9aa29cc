#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "singlim/config.hpp"
#include "singlim/verification.hpp"

namespace singlim {

inline constexpr std::string_view kToolVersion = "1.0.0";

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProblemInstance {
    std::string name;
    Spectrum spec;
    SpecVector u0;
    SpecVector u1;
    std::vector<Comparison> comparisons;
};

std::vector<ProblemInstance> instantiate(const ExperimentConfig& cfg);

/// 17 significant digits.
std::string format_number(double x);
/// Short form used in identifiers and file names.
std::string format_eps(double eps);

/// A file to be written, path relative to the output directory.
struct OutputFile {
    std::string path;
    std::string contents;
};

/// Columns t,norm_u,norm_v,norm_theta,err_order0,err_theta,err_order2 on the
/// layer-refined grid of `eps`.
std::string trajectory_csv(const ProblemInstance& p, double eps, const GridParams& grid);
std::vector<OutputFile> simulate_outputs(const ExperimentConfig& cfg);

/// Every selected check for every problem and eps, sorted by id.
std::vector<CheckReport> run_verification(const ExperimentConfig& cfg);
std::string report_json(const std::vector<CheckReport>& reports);

struct RateOutcome {
    std::string problem;
    Comparison comparison;
    std::optional<RateExperiment> experiment;
    CheckReport report;
};

/// Throws ConfigError with fewer than 3 eps values. Unmet data requirements
/// become failed reports without an experiment.
std::vector<RateOutcome> run_rates(const ExperimentConfig& cfg);
std::vector<OutputFile> rate_outputs(const std::vector<RateOutcome>& outcomes, bool per_problem_dirs);

/// FNV-1a 64 of the canonical config text.
std::uint64_t config_hash(const ExperimentConfig& cfg);
/// Timestamp from SOURCE_DATE_EPOCH when set, else the current time.
std::string manifest_json(const ExperimentConfig& cfg, const std::vector<std::string>& files);

/// Writes the files and manifest.json into dir. Throws IoError.
void write_outputs(const std::string& dir, const std::vector<OutputFile>& files, const ExperimentConfig& cfg);

}  // namespace singlim
