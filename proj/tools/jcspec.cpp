#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jcspec/commands.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigFailure = 2, kNumericalFailure = 3, kAmbiguous = 4 };

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw jcspec::ConfigError("--values: '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw jcspec::ConfigError("--values must list at least one value");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonance fluorescence of the driven, damped Jaynes-Cummings molecule"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;

    auto* spectrum = app.add_subcommand("spectrum", "Fluorescence spectrum and labeled peaks");
    spectrum->add_option("--config", config_path, "JSON run configuration")->required();
    spectrum->add_option("--set", overrides, "Override a config key, key=value")->take_all();
    spectrum->add_option("--out", out_dir, "Output directory")->required();

    auto* eigen = app.add_subcommand("eigen", "Quasi-energy ladder of the effective Hamiltonian");
    eigen->add_option("--config", config_path, "JSON run configuration")->required();
    eigen->add_option("--set", overrides, "Override a config key, key=value")->take_all();
    eigen->add_option("--out", out_dir, "Output directory")->required();

    std::string vary;
    std::string values;
    auto* sweep = app.add_subcommand("sweep", "Peak-height ratios along a parameter sweep");
    sweep->add_option("--config", config_path, "JSON run configuration")->required();
    sweep->add_option("--set", overrides, "Override a config key, key=value")->take_all();
    sweep->add_option("--vary", vary, "kappa (values are 2 kappa/g) or omega")
        ->required()
        ->check(CLI::IsMember({"kappa", "omega"}));
    sweep->add_option("--values", values, "Comma-separated values")->required();
    sweep->add_option("--out", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigFailure;
    }

    try {
        const jcspec::RunConfig config = jcspec::load_config(config_path, overrides);
        if (spectrum->parsed()) {
            jcspec::run_spectrum(config, out_dir);
        } else if (eigen->parsed()) {
            jcspec::run_eigen(config, out_dir);
        } else {
            const auto parameter =
                vary == "kappa" ? jcspec::SweepParameter::Kappa : jcspec::SweepParameter::Omega;
            const std::vector<double> list = parse_values(values);
            jcspec::run_sweep(config, parameter, list, out_dir);
        }
    } catch (const jcspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const jcspec::AmbiguityError& e) {
        std::cerr << "ambiguity: " << e.what() << '\n';
        return kAmbiguous;
    } catch (const jcspec::PreconditionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const jcspec::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kOk;
}
