#include "jcspec/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace jcspec {

namespace {

void write_file(const std::filesystem::path& out_dir, const char* name, const std::string& text) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const std::filesystem::path path = out_dir / name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw ConfigError("cannot write " + path.string());
}

std::string optional_value(const std::optional<double>& x) {
    return x ? format_value(*x) : std::string("nan");
}

}  // namespace

std::string format_value(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

void run_spectrum(const RunConfig& config, const std::filesystem::path& out_dir) {
    const PipelineResult result = run_pipeline(config.settings());

    std::ostringstream spectrum;
    spectrum << "delta_over_g,intensity,log10_intensity\n";
    const Eigen::VectorXd logs = result.spectrum.log10_intensity();
    for (Index k = 0; k < result.spectrum.delta.size(); ++k) {
        spectrum << format_value(result.spectrum.delta(k)) << ','
                 << format_value(result.spectrum.intensity(k)) << ',' << format_value(logs(k)) << '\n';
    }

    std::ostringstream peaks;
    peaks << "label,delta_over_g,height,log10_height\n";
    for (const Peak& p : result.peaks.peaks) {
        peaks << (p.label == PeakLabel::Unassigned ? "unassigned" : label_name(p.label)) << ','
              << format_value(p.delta) << ',' << format_value(p.height) << ','
              << format_value(p.log_height) << '\n';
    }

    write_file(out_dir, "spectrum.csv", spectrum.str());
    write_file(out_dir, "peaks.csv", peaks.str());

    if (result.method_deviation) {
        const double dev = *result.method_deviation;
        const bool ok = dev <= kMethodTolerance;
        std::ostringstream check;
        check << "max_relative_deviation " << format_value(dev) << '\n'
              << "tolerance " << format_value(kMethodTolerance) << '\n'
              << "status " << (ok ? "PASS" : "FAIL") << '\n';
        write_file(out_dir, "methods_check.txt", check.str());
        if (!ok) {
            throw NumericalError("fft and resolvent spectra differ by " + format_value(dev) +
                                 " (tolerance " + format_value(kMethodTolerance) + ")");
        }
    }
}

void run_eigen(const RunConfig& config, const std::filesystem::path& out_dir) {
    const std::vector<LadderEntry> ladder =
        quasi_energy_ladder(config.params(), config.fock_dim, kEigenMaxManifold);
    std::ostringstream out;
    out << "n,branch,analytic,numeric,abs_diff\n";
    for (const LadderEntry& e : ladder) {
        out << e.n << ',' << branch_name(e.branch) << ',' << format_value(e.analytic) << ','
            << format_value(e.numeric) << ',' << format_value(e.abs_diff()) << '\n';
    }
    write_file(out_dir, "eigen.csv", out.str());
}

void run_sweep(const RunConfig& config, SweepParameter vary, std::span<const double> values,
               const std::filesystem::path& out_dir) {
    for (double v : values) {
        RunConfig probe = config;
        (vary == SweepParameter::Kappa ? probe.two_kappa_over_g : probe.omega_over_g) = v;
        probe.validate();
    }
    const std::vector<SweepRow> rows = enhancement_sweep(config.settings(), vary, values);
    const char* param = vary == SweepParameter::Kappa ? "two_kappa_over_g" : "omega_over_g";

    std::ostringstream out;
    out << "swept_param,swept_value,height_b_over_a,height_c_over_a\n";
    std::string failures;
    for (const SweepRow& row : rows) {
        out << param << ',' << format_value(row.value) << ',' << optional_value(row.height_b_over_a)
            << ',' << optional_value(row.height_c_over_a) << '\n';
        if (!row.error.empty()) {
            if (!failures.empty()) failures += "; ";
            failures += std::string(param) + "=" + format_value(row.value) + ": " + row.error;
        }
    }
    write_file(out_dir, "sweep.csv", out.str());
    if (!failures.empty()) throw NumericalError("sweep rows failed: " + failures);
}

}  // namespace jcspec
