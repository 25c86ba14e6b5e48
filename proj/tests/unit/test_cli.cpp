#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "jcspec/commands.hpp"

using namespace jcspec;
namespace fs = std::filesystem;

namespace {

const char* const kSmall =
    R"({"omega_over_g": 1.0, "two_kappa_over_g": 0.1, "fock_dim": 8, "delta_points": 301})";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("jcspec_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(JCSPEC_TOOL) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults and overrides") {
    const RunConfig c = parse_config(R"({"omega_over_g": 2.5, "two_kappa_over_g": 0.03})");
    CHECK(c.gamma_over_g == 0.03);
    CHECK(c.fock_dim == 20);
    CHECK(c.frame == Frame::Displaced);
    CHECK(c.delta_min == -3.0);
    CHECK(c.delta_max == 3.0);
    CHECK(c.delta_points == 2001);
    CHECK(c.tau_max == 400.0);
    CHECK(c.dt == 0.02);
    CHECK(c.method == SpectrumMethod::Resolvent);
    CHECK(c.min_prominence_log == 0.3);
    CHECK(c.params().kappa == 0.015);

    const RunConfig o = parse_config(R"({"omega_over_g": 2.5, "two_kappa_over_g": 0.03})",
                                     {"frame=lab", "fock_dim=30", "method=both", "gamma_over_g=0.1"});
    CHECK(o.frame == Frame::Lab);
    CHECK(o.fock_dim == 30);
    CHECK(o.method == SpectrumMethod::Both);
    CHECK(o.gamma_over_g == 0.1);
}

TEST_CASE("config violations") {
    auto rejects = [](const std::string& text) {
        CHECK_THROWS_AS(parse_config(text), ConfigError);
    };
    rejects("not json");
    rejects(R"({"two_kappa_over_g": 0.03})");
    rejects(R"({"omega_over_g": 1, "two_kappa_over_g": 0.03, "speed": 3})");
    rejects(R"({"omega_over_g": 1, "two_kappa_over_g": 0.03, "delta_points": 2})");
    rejects(R"({"omega_over_g": 1, "two_kappa_over_g": 0.03, "dt": 0})");
    rejects(R"({"omega_over_g": 1, "two_kappa_over_g": 0.03, "tau_max": -1})");
    rejects(R"({"omega_over_g": 1, "two_kappa_over_g": 0.03, "frame": "rotating"})");
    rejects(R"({"omega_over_g": 1, "two_kappa_over_g": 0.03, "method": "guess"})");
    rejects(R"({"omega_over_g": 1, "two_kappa_over_g": 0.03, "fock_dim": 2.5})");
    try {
        parse_config(R"({"omega_over_g": 2.6666666666666665, "two_kappa_over_g": 0.8})");
        FAIL("validity bound not enforced");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("kappa < g^2/(2*Omega)") != std::string::npos);
    }
}

TEST_CASE("number formatting") {
    CHECK(format_value(1.0 / 3.0) == "0.333333333");
    CHECK(format_value(-0.0) == "0");
    CHECK(format_value(1234567891234.0) == "1.23456789e+12");
}

TEST_CASE("spectrum files") {
    const fs::path out = scratch("spectrum");
    run_spectrum(parse_config(kSmall), out);
    CHECK(first_line(out / "spectrum.csv") == "delta_over_g,intensity,log10_intensity");
    CHECK(first_line(out / "peaks.csv") == "label,delta_over_g,height,log10_height");
    CHECK_FALSE(fs::exists(out / "methods_check.txt"));

    std::ifstream in(out / "spectrum.csv");
    std::string line;
    int rows = -1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 301);
    CHECK(slurp(out / "peaks.csv").find("\na,") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical output") {
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    run_spectrum(parse_config(kSmall), a);
    run_spectrum(parse_config(kSmall), b);
    CHECK(slurp(a / "spectrum.csv") == slurp(b / "spectrum.csv"));
    CHECK(slurp(a / "peaks.csv") == slurp(b / "peaks.csv"));
}

TEST_CASE("method cross-check file") {
    const fs::path out = scratch("both");
    run_spectrum(parse_config(kSmall, {"method=both"}), out);
    const std::string check = slurp(out / "methods_check.txt");
    CHECK(check.find("max_relative_deviation") != std::string::npos);
    CHECK(check.find("status PASS") != std::string::npos);
}

TEST_CASE("lossless cavity writes no labeled forbidden peaks") {
    const fs::path out = scratch("lossless");
    run_spectrum(parse_config(R"({"omega_over_g": 1.0, "two_kappa_over_g": 0.0, "fock_dim": 8, "delta_points": 301})"), out);
    const std::string peaks = slurp(out / "peaks.csv");
    CHECK(peaks.find("\nb,") == std::string::npos);
    CHECK(peaks.find("\nc,") == std::string::npos);
}

TEST_CASE("eigen file") {
    const fs::path out = scratch("eigen");
    run_eigen(parse_config(R"({"omega_over_g": 2.6666666666666665, "two_kappa_over_g": 0.0})"), out);
    std::ifstream in(out / "eigen.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,branch,analytic,numeric,abs_diff");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        const double diff = std::stod(line.substr(line.rfind(',') + 1));
        CHECK(diff < 1e-8);
    }
    CHECK(rows == 13);
}

TEST_CASE("sweep file") {
    const fs::path out = scratch("sweep");
    const std::vector<double> values{0.1, 0.2};
    run_sweep(parse_config(kSmall), SweepParameter::Kappa, values, out);
    std::ifstream in(out / "sweep.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "swept_param,swept_value,height_b_over_a,height_c_over_a");
    std::getline(in, line);
    CHECK(line.rfind("two_kappa_over_g,0.1,", 0) == 0);
}

TEST_CASE("exit codes") {
    const fs::path dir = scratch("exit");
    std::ofstream(dir / "bad.json") << R"({"omega_over_g": 2.6666666666666665, "two_kappa_over_g": 0.8})";
    std::ofstream(dir / "ok.json") << kSmall;
    const std::string out = " --out " + (dir / "out").string();
    CHECK(run_tool("spectrum --config " + (dir / "bad.json").string() + out) == 2);
    CHECK(run_tool("spectrum --config " + (dir / "missing.json").string() + out) == 2);
    CHECK(run_tool("spectrum --config " + (dir / "ok.json").string() + " --set delta_points=2" + out) == 2);
    CHECK(run_tool("sweep --config " + (dir / "ok.json").string() + " --vary gamma --values 1" + out) == 2);
    CHECK(run_tool("eigen --config " + (dir / "ok.json").string() + out) == 0);
    CHECK(fs::exists(dir / "out" / "eigen.csv"));
}

}
