#pragma once

#include <Eigen/Dense>

#include "jcspec/liouvillian.hpp"

namespace jcspec {

/// C(tau) = <s+(tau) s-(0)>_ss on a uniform delay grid tau_k = k * dt.
struct CorrelationSeries {
    double dt = 0.0;
    Vector values;        // C(tau_k)
    cplx coherent_offset; // <s+>_ss <s->_ss

    Index size() const { return values.size(); }
    double tau(Index k) const { return static_cast<double>(k) * dt; }
    double tau_max() const { return tau(size() - 1); }
};

/// Quantum regression: C(tau) = Tr[s+ exp(L tau)(s- rho_ss)]. The atomic
/// operators commute with D(alpha), so the same formula serves both frames.
/// Throws NumericalError when rho_ss is not stationary (residual > 1e-6).
CorrelationSeries two_time_correlation(const Superoperator& l, const DensityMatrix& rho_ss,
                                       double tau_max, double dt,
                                       const PropagationOptions& options = {});

/// Incoherent fluorescence spectrum on a detuning grid Delta = omega - omega_0
/// (units of g). Intensities are normalized so their maximum is 1 unless the
/// spectrum is null (raw peak below kNullSpectrumLevel), in which case the raw
/// values are kept and is_null is set.
struct Spectrum {
    Eigen::VectorXd delta;
    Eigen::VectorXd intensity;
    double normalization = 0.0;  // raw peak value before normalization
    bool is_null = false;

    Eigen::VectorXd log10_intensity() const;
};

inline constexpr double kNullSpectrumLevel = 1e-10;
/// Floor used when taking log10 of non-positive numerical dust.
inline constexpr double kLogFloor = 1e-16;

/// Wraps raw spectral values; normalization is idempotent.
Spectrum make_spectrum(Eigen::VectorXd delta, Eigen::VectorXd raw);
Spectrum normalize(Spectrum s);

Eigen::VectorXd uniform_grid(double lo, double hi, Index points);

/// Fraction of the peak |C - offset| that the tail may still carry at tau_max.
inline constexpr double kTailTolerance = 1e-6;

/// S(Delta) = Re int_0^inf dtau exp(-i Delta tau) [C(tau) - <s+><s->], by the
/// trapezoidal rule with the first Euler-Maclaurin end correction.
/// Throws NumericalError when the tail exceeds kTailTolerance of the peak.
Spectrum spectrum_fft(const CorrelationSeries& corr, const Eigen::VectorXd& delta_grid);

/// S(Delta) = Re Tr[s+ (i Delta - L)^-1 (s- rho_ss - <s-> rho_ss)], one
/// Hessenberg-structured solve per grid point. Throws NumericalError naming
/// Delta when a solve is singular.
Spectrum spectrum_resolvent(const Superoperator& l, const DensityMatrix& rho_ss,
                            const Eigen::VectorXd& delta_grid);

/// max |a - b| / |b| over interior grid points where b exceeds floor * max(b).
double max_relative_deviation(const Spectrum& a, const Spectrum& b, double floor = 1e-6);

}  // namespace jcspec
