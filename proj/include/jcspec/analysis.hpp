#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jcspec/model.hpp"
#include "jcspec/spectrum.hpp"

namespace jcspec {

/// Peak labels of the fluorescence ladder:
/// a -> g', b -> sqrt(2) g', c -> 2 g', d -> (sqrt(2) - 1) g'.
enum class PeakLabel { A, B, C, D, Unassigned };

const char* label_name(PeakLabel label);
/// Position of a label in units of g'; throws for Unassigned.
double ladder_multiple(PeakLabel label);

struct Peak {
    double delta = 0.0;
    double height = 0.0;      // normalized linear intensity
    double log_height = 0.0;  // log10(height)
    PeakLabel label = PeakLabel::Unassigned;
};

struct PeakSet {
    std::vector<Peak> peaks;  // sorted by delta

    /// The peak carrying label on the side of the given sign (+1 or -1).
    std::optional<Peak> find(PeakLabel label, int sign = +1) const;
};

inline constexpr double kDefaultProminenceLog = 0.3;
inline constexpr double kDefaultLabelTolerance = 0.02;

/// Local maxima of log10 intensity over a 5-point window whose log
/// prominence exceeds min_prominence_log, refined by a 3-point parabola on
/// log intensity. A null spectrum has no peaks.
PeakSet find_peaks(const Spectrum& spectrum, double min_prominence_log = kDefaultProminenceLog);

/// Labels the peak nearest to +-multiple * g' within tolerance, separately per
/// sign. Two peaks inside one window raise AmbiguityError.
PeakSet classify_peaks(PeakSet peaks, double g_prime, double tolerance = kDefaultLabelTolerance);

enum class SpectrumMethod { Resolvent, Fft, Both };

struct PipelineSettings {
    ModelParams params;
    int fock_dim = 20;
    Frame frame = Frame::Displaced;
    double delta_min = -3.0;
    double delta_max = 3.0;
    Index delta_points = 2001;
    double tau_max = 400.0;
    double dt = 0.02;
    SpectrumMethod method = SpectrumMethod::Resolvent;
    double min_prominence_log = kDefaultProminenceLog;
    double label_tolerance = kDefaultLabelTolerance;
    PropagationOptions propagation;
};

/// Steady state with the automatic truncation raise: fock_dim grows by 10
/// while the population of the top two Fock levels exceeds 1e-8.
inline constexpr double kTopFockPopulation = 1e-8;
inline constexpr int kMaxPipelineFockDim = kMaxFockDim;
/// The fft path doubles tau_max at most this many times when the tail is too large.
inline constexpr int kMaxTauRaises = 3;

double top_fock_population(const DensityMatrix& rho, int levels = 2);

struct PipelineResult {
    int fock_dim_used = 0;
    double g_prime = 0.0;
    DensityMatrix rho_ss;
    Spectrum spectrum;                        // resolvent unless method == Fft
    std::optional<Spectrum> fft_spectrum;     // method == Fft or Both
    std::optional<double> method_deviation;   // method == Both
    PeakSet peaks;
};

/// Steady state, spectrum and labeled peaks for one parameter set.
PipelineResult run_pipeline(const PipelineSettings& settings);

enum class SweepParameter { Kappa, Omega };

struct SweepRow {
    double value = 0.0;                  // Omega/g or 2 kappa/g
    std::optional<double> height_b_over_a;
    std::optional<double> height_c_over_a;
    std::string error;                   // empty when the row succeeded
};

/// Runs the pipeline per value. For SweepParameter::Kappa the values are
/// cavity damping rates 2 kappa / g. Heights are taken on the positive-detuning
/// side. Failing rows record their error and the sweep continues.
std::vector<SweepRow> enhancement_sweep(const PipelineSettings& base, SweepParameter vary,
                                        std::span<const double> values);

}  // namespace jcspec
