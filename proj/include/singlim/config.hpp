#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "singlim/spectral.hpp"
#include "singlim/verification.hpp"

namespace singlim {

inline constexpr std::string_view kConfigSchema = "singlim.config/v1";

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SpectrumSpec {
    /// Preset name; empty when `eigenvalues` is used.
    std::string preset;
    std::vector<double> eigenvalues;

    friend bool operator==(const SpectrumSpec&, const SpectrumSpec&) = default;
};

struct DataSpec {
    enum class Kind { values, decay, il0 };
    Kind kind = Kind::values;
    std::vector<double> values;
    /// Exponent of the decay family c_i = (1 + i)^{-p}.
    double p = 0.0;

    friend bool operator==(const DataSpec&, const DataSpec&) = default;
};

struct ProblemSpec {
    std::string name;
    SpectrumSpec spectrum;
    DataSpec u0;
    DataSpec u1;
    /// Overrides ExperimentConfig::comparisons for this problem.
    std::optional<std::vector<Comparison>> comparisons;

    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

struct ExperimentConfig {
    std::vector<ProblemSpec> problems;
    std::vector<double> epsilons;
    GridParams grid;
    /// Subset of check_groups().
    std::vector<std::string> checks;
    std::vector<Comparison> comparisons;
    std::map<std::string, double> tolerances;
    double synthetic_exponent = 2.0;
    std::string output_dir;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// "identities", "inequalities", "duhamel", "max_reg", "rates".
const std::vector<std::string>& check_groups();

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);
/// Canonical JSON text (sorted keys, two-space indent, trailing newline).
std::string serialize_config(const ExperimentConfig& cfg);

struct PresetInfo {
    std::string name;
    std::string description;
};
const std::vector<PresetInfo>& spectrum_presets();
const std::vector<PresetInfo>& data_families();

Spectrum build_spectrum(const SpectrumSpec& s);
/// u1 may reference u0 through the "il0" family (u1 = -A u0).
SpecVector build_data(const DataSpec& d, const Spectrum& spec, const SpecVector* u0 = nullptr);

}  // namespace singlim
