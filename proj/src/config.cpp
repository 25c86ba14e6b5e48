#include "jcspec/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace jcspec {

namespace {

using nlohmann::json;

const char* const kKnownKeys[] = {"omega_over_g", "two_kappa_over_g", "gamma_over_g", "fock_dim",
                                  "frame",        "delta_min",        "delta_max",    "delta_points",
                                  "tau_max",      "dt",               "method",       "min_prominence_log"};

bool known_key(const std::string& key) {
    for (const char* k : kKnownKeys) {
        if (key == k) return true;
    }
    return false;
}

double read_real(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_number()) throw ConfigError(std::string(key) + " must be a number");
    return v.get<double>();
}

int read_int(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (x == std::floor(x) && std::abs(x) < 1e9) return static_cast<int>(x);
    }
    throw ConfigError(std::string(key) + " must be an integer");
}

std::string read_string(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_string()) throw ConfigError(std::string(key) + " must be a string");
    return v.get<std::string>();
}

// "key=value"; value is read as a JSON literal when it parses as one, else as a string.
void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    doc[key] = value;
}

}  // namespace

const char* method_name(SpectrumMethod method) {
    switch (method) {
        case SpectrumMethod::Resolvent: return "resolvent";
        case SpectrumMethod::Fft: return "fft";
        case SpectrumMethod::Both: return "both";
    }
    return "?";
}

void RunConfig::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(omega_over_g) || omega_over_g < 0.0) throw ConfigError("omega_over_g must be >= 0");
    if (!finite(two_kappa_over_g) || two_kappa_over_g < 0.0) {
        throw ConfigError("two_kappa_over_g must be >= 0");
    }
    if (!finite(gamma_over_g) || gamma_over_g < 0.0) throw ConfigError("gamma_over_g must be >= 0");
    const double bound = 2.0 * omega_over_g * field_decay_rate(two_kappa_over_g);
    if (!(bound < 1.0)) {
        std::ostringstream msg;
        msg << "2*omega_over_g*kappa/g = " << bound
            << " violates the validity bound kappa < g^2/(2*Omega), i.e. 2*Omega*kappa/g^2 < 1";
        throw ConfigError(msg.str());
    }
    if (fock_dim < 2) throw ConfigError("fock_dim must be >= 2");
    if (delta_points < 3) throw ConfigError("delta_points must be >= 3");
    if (!finite(delta_min) || !finite(delta_max) || !(delta_max > delta_min)) {
        throw ConfigError("delta_max must exceed delta_min");
    }
    if (!finite(dt) || !(dt > 0.0)) throw ConfigError("dt must be > 0");
    if (!finite(tau_max) || !(tau_max > 0.0)) throw ConfigError("tau_max must be > 0");
    if (!(tau_max >= 2.0 * dt)) throw ConfigError("tau_max must span at least two steps of dt");
    if (!finite(min_prominence_log) || min_prominence_log < 0.0) {
        throw ConfigError("min_prominence_log must be >= 0");
    }
}

ModelParams RunConfig::params() const {
    return ModelParams::from_ratios(omega_over_g, two_kappa_over_g, gamma_over_g);
}

PipelineSettings RunConfig::settings() const {
    PipelineSettings s;
    s.params = params();
    s.fock_dim = fock_dim;
    s.frame = frame;
    s.delta_min = delta_min;
    s.delta_max = delta_max;
    s.delta_points = delta_points;
    s.tau_max = tau_max;
    s.dt = dt;
    s.method = method;
    s.min_prominence_log = min_prominence_log;
    return s;
}

RunConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides) {
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("configuration is not valid JSON");
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    for (const std::string& o : overrides) apply_override(doc, o);
    for (const auto& item : doc.items()) {
        if (!known_key(item.key())) throw ConfigError("unknown configuration key '" + item.key() + "'");
    }
    for (const char* key : {"omega_over_g", "two_kappa_over_g"}) {
        if (!doc.contains(key)) throw ConfigError(std::string("missing required key ") + key);
    }

    RunConfig c;
    c.omega_over_g = read_real(doc, "omega_over_g");
    c.two_kappa_over_g = read_real(doc, "two_kappa_over_g");
    if (doc.contains("gamma_over_g")) c.gamma_over_g = read_real(doc, "gamma_over_g");
    if (doc.contains("fock_dim")) c.fock_dim = read_int(doc, "fock_dim");
    if (doc.contains("frame")) {
        const std::string f = read_string(doc, "frame");
        if (f == "displaced") {
            c.frame = Frame::Displaced;
        } else if (f == "lab") {
            c.frame = Frame::Lab;
        } else {
            throw ConfigError("frame must be 'displaced' or 'lab', got '" + f + "'");
        }
    }
    if (doc.contains("delta_min")) c.delta_min = read_real(doc, "delta_min");
    if (doc.contains("delta_max")) c.delta_max = read_real(doc, "delta_max");
    if (doc.contains("delta_points")) c.delta_points = read_int(doc, "delta_points");
    if (doc.contains("tau_max")) c.tau_max = read_real(doc, "tau_max");
    if (doc.contains("dt")) c.dt = read_real(doc, "dt");
    if (doc.contains("method")) {
        const std::string m = read_string(doc, "method");
        if (m == "resolvent") {
            c.method = SpectrumMethod::Resolvent;
        } else if (m == "fft") {
            c.method = SpectrumMethod::Fft;
        } else if (m == "both") {
            c.method = SpectrumMethod::Both;
        } else {
            throw ConfigError("method must be 'resolvent', 'fft' or 'both', got '" + m + "'");
        }
    }
    if (doc.contains("min_prominence_log")) c.min_prominence_log = read_real(doc, "min_prominence_log");
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read configuration file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), overrides);
}

}  // namespace jcspec
