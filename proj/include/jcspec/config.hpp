#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "jcspec/analysis.hpp"

namespace jcspec {

/// Flat run configuration; rates are ratios to g, with the cavity given as
/// its energy damping rate 2 kappa / g.
struct RunConfig {
    double omega_over_g = 0.0;
    double two_kappa_over_g = 0.0;
    double gamma_over_g = 0.03;
    int fock_dim = 20;
    Frame frame = Frame::Displaced;
    double delta_min = -3.0;
    double delta_max = 3.0;
    int delta_points = 2001;
    double tau_max = 400.0;
    double dt = 0.02;
    SpectrumMethod method = SpectrumMethod::Resolvent;
    double min_prominence_log = kDefaultProminenceLog;

    /// Throws ConfigError naming the first violated bound.
    void validate() const;

    ModelParams params() const;
    PipelineSettings settings() const;
};

/// Parses a JSON document with the keys of RunConfig. omega_over_g and
/// two_kappa_over_g are required; unknown keys are rejected. `overrides`
/// holds "key=value" strings applied on top of the document.
RunConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

const char* method_name(SpectrumMethod method);

}  // namespace jcspec
