#include "jcspec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iostream>
#include <string>

namespace jcspec {

const char* label_name(PeakLabel label) {
    switch (label) {
        case PeakLabel::A: return "a";
        case PeakLabel::B: return "b";
        case PeakLabel::C: return "c";
        case PeakLabel::D: return "d";
        case PeakLabel::Unassigned: break;
    }
    return "-";
}

double ladder_multiple(PeakLabel label) {
    switch (label) {
        case PeakLabel::A: return 1.0;
        case PeakLabel::B: return std::sqrt(2.0);
        case PeakLabel::C: return 2.0;
        case PeakLabel::D: return std::sqrt(2.0) - 1.0;
        case PeakLabel::Unassigned: break;
    }
    throw PreconditionError("unassigned peaks have no ladder position");
}

std::optional<Peak> PeakSet::find(PeakLabel label, int sign) const {
    for (const Peak& p : peaks) {
        if (p.label == label && (p.delta > 0.0) == (sign > 0)) return p;
    }
    return std::nullopt;
}

PeakSet find_peaks(const Spectrum& spectrum, double min_prominence_log) {
    PeakSet out;
    if (spectrum.is_null) return out;
    const Eigen::VectorXd y = spectrum.log10_intensity();
    const Eigen::VectorXd& x = spectrum.delta;
    const Index n = y.size();

    for (Index i = 2; i + 2 < n; ++i) {
        // Ties resolve to the leftmost point of a plateau.
        if (!(y(i) >= y(i - 1) && y(i) >= y(i - 2) && y(i) > y(i + 1) && y(i) > y(i + 2))) continue;

        double left_min = y(i);
        for (Index k = i - 1; k >= 0 && y(k) <= y(i); --k) left_min = std::min(left_min, y(k));
        double right_min = y(i);
        for (Index k = i + 1; k < n && y(k) <= y(i); ++k) right_min = std::min(right_min, y(k));
        const double prominence = y(i) - std::max(left_min, right_min);
        if (prominence < min_prominence_log) continue;

        Peak p;
        const double curvature = y(i - 1) - 2.0 * y(i) + y(i + 1);
        double shift = 0.0;
        if (curvature < 0.0) shift = 0.5 * (y(i - 1) - y(i + 1)) / curvature;
        const double step = x(i + 1) - x(i);
        p.delta = x(i) + shift * step;
        p.log_height = y(i) - 0.25 * (y(i - 1) - y(i + 1)) * shift;
        p.height = std::pow(10.0, p.log_height);
        out.peaks.push_back(p);
    }
    return out;
}

PeakSet classify_peaks(PeakSet peaks, double g_prime, double tolerance) {
    for (Peak& p : peaks.peaks) p.label = PeakLabel::Unassigned;
    for (PeakLabel label : {PeakLabel::A, PeakLabel::B, PeakLabel::C, PeakLabel::D}) {
        for (int sign : {+1, -1}) {
            const double target = sign * ladder_multiple(label) * g_prime;
            Peak* match = nullptr;
            for (Peak& p : peaks.peaks) {
                if (std::abs(p.delta - target) > tolerance) continue;
                if (match != nullptr) {
                    throw AmbiguityError("two peaks (Delta = " + std::to_string(match->delta) +
                                         ", " + std::to_string(p.delta) +
                                         ") compete for label " + label_name(label) +
                                         " at Delta = " + std::to_string(target));
                }
                match = &p;
            }
            if (match != nullptr) match->label = label;
        }
    }
    return peaks;
}

double top_fock_population(const DensityMatrix& rho, int levels) {
    const HilbertSpec& spec = rho.spec();
    double total = 0.0;
    for (int n = spec.fock_dim() - levels; n < spec.fock_dim(); ++n) {
        for (AtomLevel s : {AtomLevel::Excited, AtomLevel::Ground}) {
            const Index k = spec.index(n, s);
            total += rho.matrix()(k, k).real();
        }
    }
    return total;
}

namespace {

Spectrum fft_with_tail_raise(const Superoperator& l, const DensityMatrix& rho,
                             const PipelineSettings& settings, const Eigen::VectorXd& grid) {
    double tau_max = settings.tau_max;
    for (int attempt = 0;; ++attempt) {
        const CorrelationSeries corr =
            two_time_correlation(l, rho, tau_max, settings.dt, settings.propagation);
        try {
            return spectrum_fft(corr, grid);
        } catch (const NumericalError&) {
            if (attempt == kMaxTauRaises) throw;
        }
        tau_max *= 2.0;
        std::clog << "jcspec: correlation tail too large, raising tau_max to " << tau_max << '\n';
    }
}

}  // namespace

PipelineResult run_pipeline(const PipelineSettings& settings) {
    const double gp = g_prime(settings.params);

    int fock = settings.fock_dim;
    for (;;) {
        const HilbertSpec spec = build_space(fock);
        const Superoperator l = build_liouvillian(settings.params, spec, settings.frame);
        DensityMatrix rho = steady_state(l);
        const double top = top_fock_population(rho);
        if (top > kTopFockPopulation) {
            if (fock + kConvergenceStep > kMaxPipelineFockDim) {
                throw NumericalError("steady state still populates the top Fock levels (" +
                                     std::to_string(top) + ") at fock_dim " + std::to_string(fock));
            }
            fock += kConvergenceStep;
            std::clog << "jcspec: raising fock_dim to " << fock << '\n';
            continue;
        }

        const Eigen::VectorXd grid =
            uniform_grid(settings.delta_min, settings.delta_max, settings.delta_points);
        std::optional<Spectrum> resolvent;
        std::optional<Spectrum> fft;
        if (settings.method != SpectrumMethod::Fft) resolvent = spectrum_resolvent(l, rho, grid);
        if (settings.method != SpectrumMethod::Resolvent) fft = fft_with_tail_raise(l, rho, settings, grid);

        std::optional<double> deviation;
        if (resolvent && fft) deviation = max_relative_deviation(*fft, *resolvent);

        Spectrum main = resolvent ? *resolvent : *fft;
        PeakSet peaks = classify_peaks(find_peaks(main, settings.min_prominence_log), gp,
                                       settings.label_tolerance);
        return PipelineResult{fock,          gp,   std::move(rho), std::move(main),
                              std::move(fft), deviation, std::move(peaks)};
    }
}

namespace {

SweepRow sweep_row(PipelineSettings settings, SweepParameter vary, double value) {
    SweepRow row;
    row.value = value;
    if (vary == SweepParameter::Kappa) {
        settings.params.kappa = field_decay_rate(value);
    } else {
        settings.params.omega = value;
    }
    try {
        const PipelineResult result = run_pipeline(settings);
        const auto a = result.peaks.find(PeakLabel::A);
        if (!a) {
            row.error = "peak a not detected";
            return row;
        }
        if (const auto b = result.peaks.find(PeakLabel::B)) row.height_b_over_a = b->height / a->height;
        if (const auto c = result.peaks.find(PeakLabel::C)) row.height_c_over_a = c->height / a->height;
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

std::vector<SweepRow> enhancement_sweep(const PipelineSettings& base, SweepParameter vary,
                                        std::span<const double> values) {
    std::vector<std::future<SweepRow>> pending;
    pending.reserve(values.size());
    for (double value : values) {
        pending.push_back(std::async(std::launch::async, sweep_row, base, vary, value));
    }
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (auto& row : pending) rows.push_back(row.get());
    return rows;
}

}  // namespace jcspec
