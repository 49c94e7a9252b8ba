#pragma once

// INI-style experiment configuration.
//
// Sections and keys carry their units in the key name (power_w, waist_mm, ...).
// Every key is documented in README.md. Unknown keys are rejected so a typo
// never silently falls back to a default.

#include <iosfwd>
#include <string>
#include <vector>

#include "thermolase/harness.hpp"

namespace thermolase::config {

struct TissuePreset {
    std::string name;
    thermal::TissueProperties properties;
};

// Built-in tissue presets: gelatin, liver, bone, muscle.
const std::vector<TissuePreset>& tissue_presets();

// Throws ConfigError if `name` is not a preset.
thermal::TissueProperties preset(const std::string& name);

// Default configuration: gelatin preset and the default beam.
harness::ExperimentConfig default_config();

struct LoadedConfig {
    harness::ExperimentConfig base;
    // One entry per [sweep] condition; empty when the file has no [sweep] section.
    std::vector<harness::ExperimentConfig> conditions;
};

// Throws ConfigError naming the section.key (or the line on syntax errors).
LoadedConfig parse(std::istream& in, const std::string& origin = "<config>");
LoadedConfig load(const std::string& path);

// Resolved configuration as INI text; parse(write_ini(c)) reproduces c exactly.
std::string write_ini(const harness::ExperimentConfig& config);

}  // namespace thermolase::config
