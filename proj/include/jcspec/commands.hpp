#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "jcspec/config.hpp"

namespace jcspec {

inline constexpr double kMethodTolerance = 0.01;
inline constexpr int kEigenMaxManifold = 6;

/// Number formatting shared by every CSV writer: 9 significant digits.
std::string format_value(double x);

/// spectrum.csv and peaks.csv; methods_check.txt as well when the method is
/// both, failing with NumericalError above kMethodTolerance.
void run_spectrum(const RunConfig& config, const std::filesystem::path& out_dir);

/// eigen.csv: quasi-energy ladder of the effective Hamiltonian for n <= 6.
void run_eigen(const RunConfig& config, const std::filesystem::path& out_dir);

/// sweep.csv. Kappa values are 2 kappa / g like the config key. Rows that fail
/// are written as nan and reported after the file is complete.
void run_sweep(const RunConfig& config, SweepParameter vary, std::span<const double> values,
               const std::filesystem::path& out_dir);

}  // namespace jcspec
