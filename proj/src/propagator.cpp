#include "jcspec/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jcspec {

namespace {

// Largest absolute column sum.
double norm1(const SparseGenerator& g) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(g.cols());
    for (Index row = 0; row < g.outerSize(); ++row) {
        for (SparseGenerator::InnerIterator it(g, row); it; ++it) col(it.col()) += std::abs(it.value());
    }
    return col.size() == 0 ? 0.0 : col.maxCoeff();
}

// Taylor substeps are sized so that ||L h||_1 <= kTaylorTheta.
constexpr double kTaylorTheta = 2.0;
constexpr int kTaylorMaxTerms = 80;

}  // namespace

Propagator::Propagator(const SparseGenerator& generator, double step, PropagationOptions options)
    : generator_(generator), step_(step), options_(options), norm1_(norm1(generator)) {
    if (!(step > 0.0)) throw PreconditionError("propagator step must be > 0");
}

void Propagator::advance(Vector& v) const { advance(v, step_); }

void Propagator::advance(Vector& v, double duration) const {
    if (duration == 0.0 || norm1_ == 0.0) return;
    if (options_.method == PropagationMethod::Exponential) {
        taylor(v, duration);
    } else {
        dormand_prince(v, duration);
    }
}

void Propagator::taylor(Vector& v, double duration) const {
    const int substeps = std::max(1, static_cast<int>(std::ceil(norm1_ * duration / kTaylorTheta)));
    const double h = duration / substeps;
    Vector term(v.size());
    for (int s = 0; s < substeps; ++s) {
        term = v;
        int quiet = 0;
        for (int k = 1; k <= kTaylorMaxTerms; ++k) {
            term = (generator_ * term) * (h / k);
            v += term;
            const double scale = v.lpNorm<Eigen::Infinity>();
            quiet = term.lpNorm<Eigen::Infinity>() <= 1e-17 * scale ? quiet + 1 : 0;
            if (quiet == 2) break;
        }
    }
}

void Propagator::dormand_prince(Vector& v, double duration) const {
    // Dormand-Prince 5(4) tableau; the generator is time independent so the
    // nodes c_i are not needed.
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double elapsed = 0.0;
    double h = std::min(duration, 1.0 / norm1_);
    Vector k1 = generator_ * v;
    while (duration - elapsed > 1e-13 * duration) {
        h = std::min(h, duration - elapsed);
        if (h < options_.min_step) {
            throw NumericalError("adaptive propagation: step size " + std::to_string(h) +
                                 " fell below the minimum " + std::to_string(options_.min_step));
        }
        const Vector k2 = generator_ * (v + h * (a21 * k1));
        const Vector k3 = generator_ * (v + h * (a31 * k1 + a32 * k2));
        const Vector k4 = generator_ * (v + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vector k5 = generator_ * (v + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vector k6 =
            generator_ * (v + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Vector next = v + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Vector k7 = generator_ * next;
        const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double sum = 0.0;
        for (Index i = 0; i < v.size(); ++i) {
            const double scale =
                options_.atol + options_.rtol * std::max(std::abs(v(i)), std::abs(next(i)));
            sum += std::norm(err(i) / scale);
        }
        const double err_norm = std::sqrt(sum / static_cast<double>(v.size()));
        if (!std::isfinite(err_norm)) {
            throw NumericalError("adaptive propagation: non-finite error estimate");
        }
        if (err_norm <= 1.0) {
            elapsed += h;
            v = std::move(next);
            k1 = std::move(k7);
        }
        const double factor = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
    }
}

}  // namespace jcspec
