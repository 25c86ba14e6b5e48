#include "jcspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jcspec/propagator.hpp"

namespace jcspec {

namespace {

using RealMatrix = Eigen::MatrixXd;
using RowMajorReal = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Linear functional M -> Tr(op M) acting on column-stacked M.
Vector trace_functional(const Matrix& op) { return vectorize(op.transpose()); }

// Orthonormal basis of Hermitian D x D matrices: E_ii, then for i < j
// X_ij = (E_ij + E_ji)/sqrt2 and Y_ij = i (E_ij - E_ji)/sqrt2. A Lindblad
// generator maps Hermitian to Hermitian, so it is real in this basis.
class HermitianBasis {
public:
    explicit HermitianBasis(Index dim) : dim_(dim), offdiag_(Eigen::MatrixXi::Constant(dim, dim, -1)) {
        Index k = dim;
        for (Index i = 0; i < dim; ++i) {
            for (Index j = i + 1; j < dim; ++j) offdiag_(i, j) = k++;
        }
        pairs_ = k - dim;
    }

    Index size() const { return dim_ * dim_; }
    Index x_index(Index i, Index j) const { return offdiag_(i, j); }
    Index y_index(Index i, Index j) const { return offdiag_(i, j) + pairs_; }

    // Complex coordinates c_k = Tr(B_k M) of a column-stacked matrix.
    Vector coordinates(const Vector& vec_m) const {
        Vector c = Vector::Zero(size());
        for (Index col = 0; col < dim_; ++col) {
            for (Index row = 0; row < dim_; ++row) add_entry(c, row, col, vec_m(col * dim_ + row));
        }
        return c;
    }

    void add_entry(Vector& c, Index row, Index col, cplx value) const {
        if (row == col) {
            c(row) += value;
        } else if (row < col) {
            c(x_index(row, col)) += value * M_SQRT1_2;
            c(y_index(row, col)) += -kI * value * M_SQRT1_2;
        } else {
            c(x_index(col, row)) += value * M_SQRT1_2;
            c(y_index(col, row)) += kI * value * M_SQRT1_2;
        }
    }

    // Nonzero entries of vec(B_k) as (position, value).
    std::vector<std::pair<Index, cplx>> element(Index k) const {
        if (k < dim_) return {{k * (dim_ + 1), 1.0}};
        const bool is_y = k >= dim_ + pairs_;
        const Index key = is_y ? k - pairs_ : k;
        for (Index i = 0; i < dim_; ++i) {
            for (Index j = i + 1; j < dim_; ++j) {
                if (offdiag_(i, j) != key) continue;
                const cplx upper = is_y ? cplx{0.0, M_SQRT1_2} : cplx{M_SQRT1_2, 0.0};
                const cplx lower = is_y ? -upper : upper;
                return {{j * dim_ + i, upper}, {i * dim_ + j, lower}};
            }
        }
        return {};
    }

private:
    Index dim_;
    Eigen::MatrixXi offdiag_;
    Index pairs_ = 0;
};

RealMatrix real_generator(const Superoperator& l, const HermitianBasis& basis) {
    const Index n = basis.size();
    const Index d = l.spec().dim();
    const Eigen::SparseMatrix<cplx, Eigen::ColMajor> cols(l.sparse());
    RealMatrix out = RealMatrix::Zero(n, n);
    Vector c(n);
    for (Index k = 0; k < n; ++k) {
        c.setZero();
        for (const auto& [pos, weight] : basis.element(k)) {
            for (Eigen::SparseMatrix<cplx, Eigen::ColMajor>::InnerIterator it(cols, pos); it; ++it) {
                const Index p = it.row();
                basis.add_entry(c, p % d, p / d, it.value() * weight);
            }
        }
        out.col(k) = c.real();
    }
    return out;
}

// f^T (i delta - H)^-1 b for upper Hessenberg H by Gaussian elimination with
// adjacent-row pivoting. U is never stored: the transposed triangular solve
// U^T u = f is folded into the elimination sweep.
cplx hessenberg_resolvent(const RowMajorReal& h, double delta, const Vector& b, const Vector& f,
                          Vector& cur, Vector& nxt, Vector& acc) {
    const Index n = h.rows();
    const cplx shift{0.0, delta};
    acc.setZero();

    auto load_row = [&](Vector& dst, Index row, Index from) {
        const double* src = h.data() + row * n;
        for (Index k = from; k < n; ++k) dst(k) = -src[k];
        dst(row) += shift;
    };

    cplx result{};
    // Row j of U is final; fold it into U^T u = f and into f^T z = u^T y.
    auto finalize = [&](Index j, const Vector& u_row, cplx rhs) {
        const cplx diag = u_row(j);
        if (diag == cplx{}) return false;
        const cplx u = (f(j) - acc(j)) / diag;
        for (Index k = j + 1; k < n; ++k) acc(k) += u * u_row(k);
        result += u * rhs;
        return true;
    };

    load_row(cur, 0, 0);
    cplx cur_b = b(0);
    for (Index j = 0; j + 1 < n; ++j) {
        load_row(nxt, j + 1, j);
        const cplx nxt_b = b(j + 1);
        if (std::abs(nxt(j)) > std::abs(cur(j))) {
            const cplx m = cur(j) / nxt(j);
            for (Index k = j + 1; k < n; ++k) cur(k) -= m * nxt(k);
            if (!finalize(j, nxt, nxt_b)) return {std::nan(""), 0.0};
            cur_b -= m * nxt_b;
        } else {
            const cplx m = nxt(j) / cur(j);
            for (Index k = j + 1; k < n; ++k) nxt(k) -= m * cur(k);
            if (!finalize(j, cur, cur_b)) return {std::nan(""), 0.0};
            cur_b = nxt_b - m * cur_b;
            std::swap(cur, nxt);
        }
    }
    if (!finalize(n - 1, cur, cur_b)) return {std::nan(""), 0.0};
    return result;
}

}  // namespace

Eigen::VectorXd Spectrum::log10_intensity() const {
    return intensity.unaryExpr([](double v) { return std::log10(std::max(v, kLogFloor)); });
}

Spectrum make_spectrum(Eigen::VectorXd delta, Eigen::VectorXd raw) {
    Spectrum s;
    s.delta = std::move(delta);
    s.intensity = std::move(raw);
    s.normalization = s.intensity.size() ? s.intensity.maxCoeff() : 0.0;
    s.is_null = !(s.normalization > kNullSpectrumLevel);
    if (!s.is_null) s.intensity /= s.normalization;
    return s;
}

Spectrum normalize(Spectrum s) {
    if (s.is_null || s.intensity.size() == 0) return s;
    const double peak = s.intensity.maxCoeff();
    if (peak == 1.0) return s;
    s.intensity /= peak;
    s.normalization *= peak;
    return s;
}

Eigen::VectorXd uniform_grid(double lo, double hi, Index points) {
    if (points < 2 || !(hi > lo)) throw PreconditionError("grid needs >= 2 points and hi > lo");
    Eigen::VectorXd out(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (Index k = 0; k < points; ++k) out(k) = lo + step * static_cast<double>(k);
    return out;
}

CorrelationSeries two_time_correlation(const Superoperator& l, const DensityMatrix& rho_ss,
                                       double tau_max, double dt,
                                       const PropagationOptions& options) {
    require_same_spec(l.spec(), rho_ss.spec());
    if (!(dt > 0.0) || !(tau_max > 0.0)) throw PreconditionError("tau_max and dt must be > 0");
    const double residual = stationarity_residual(l, rho_ss);
    if (residual > 1e-6) {
        throw NumericalError("two_time_correlation: state is not stationary, residual " +
                             std::to_string(residual));
    }

    const AtomicOperators s = atomic_operators(l.spec());
    const Vector read = trace_functional(s.raise.matrix());
    const Index steps = static_cast<Index>(std::llround(tau_max / dt));

    CorrelationSeries out;
    out.dt = dt;
    out.coherent_offset = rho_ss.expectation(s.raise) * rho_ss.expectation(s.lower);
    out.values.resize(steps + 1);

    Vector v = vectorize(s.lower.matrix() * rho_ss.matrix());
    const Propagator stepper(l.sparse(), dt, options);
    out.values(0) = read.transpose() * v;
    for (Index k = 1; k <= steps; ++k) {
        stepper.advance(v);
        out.values(k) = read.transpose() * v;
    }
    return out;
}

Spectrum spectrum_fft(const CorrelationSeries& corr, const Eigen::VectorXd& delta_grid) {
    const Index m = corr.size();
    if (m < 3) throw PreconditionError("spectrum_fft: correlation needs at least 3 samples");
    const Vector f = corr.values.array() - corr.coherent_offset;
    const double h = corr.dt;

    const double peak = f.cwiseAbs().maxCoeff();
    if (!(peak > 0.0)) return make_spectrum(delta_grid, Eigen::VectorXd::Zero(delta_grid.size()));
    const Index tail_from = std::max<Index>(0, m - std::max<Index>(3, m / 100));
    const double tail = f.tail(m - tail_from).cwiseAbs().maxCoeff();
    if (tail > kTailTolerance * peak) {
        throw NumericalError("spectrum_fft: tail |C - offset| at tau_max = " +
                             std::to_string(corr.tau_max()) + " is " + std::to_string(tail / peak) +
                             " of the peak; raise tau_max");
    }

    // One-sided second-order derivatives at both ends.
    const cplx df0 = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
    const cplx dfT = (3.0 * f(m - 1) - 4.0 * f(m - 2) + f(m - 3)) / (2.0 * h);
    const double tau_end = corr.tau_max();

    Eigen::VectorXd raw(delta_grid.size());
    for (Index g = 0; g < delta_grid.size(); ++g) {
        const double delta = delta_grid(g);
        const cplx step = std::polar(1.0, -delta * h);
        cplx phase{1.0, 0.0};
        cplx sum = 0.5 * f(0);
        for (Index k = 1; k < m - 1; ++k) {
            phase *= step;
            sum += phase * f(k);
        }
        const cplx end_phase = std::polar(1.0, -delta * tau_end);
        sum += 0.5 * end_phase * f(m - 1);
        const cplx dF0 = df0 - kI * delta * f(0);
        const cplx dFT = end_phase * (dfT - kI * delta * f(m - 1));
        const cplx integral = h * sum + (h * h / 12.0) * (dF0 - dFT);
        raw(g) = integral.real();
    }
    return make_spectrum(delta_grid, std::move(raw));
}

Spectrum spectrum_resolvent(const Superoperator& l, const DensityMatrix& rho_ss,
                            const Eigen::VectorXd& delta_grid) {
    require_same_spec(l.spec(), rho_ss.spec());
    const double residual = stationarity_residual(l, rho_ss);
    if (residual > 1e-6) {
        throw NumericalError("spectrum_resolvent: state is not stationary, residual " +
                             std::to_string(residual));
    }

    const Index d = l.spec().dim();
    const HermitianBasis basis(d);
    const Index n = basis.size();
    const AtomicOperators s = atomic_operators(l.spec());

    const cplx lower_mean = rho_ss.expectation(s.lower);
    const Vector source =
        vectorize(s.lower.matrix() * rho_ss.matrix() - lower_mean * rho_ss.matrix());
    const Vector source_c = basis.coordinates(source);
    if (source_c.cwiseAbs().maxCoeff() == 0.0) {
        return make_spectrum(delta_grid, Eigen::VectorXd::Zero(delta_grid.size()));
    }

    // Tr-row deflation: L' = L - rho_ss Tr(.) acts as L on traceless vectors
    // and moves the stationary eigenvalue from 0 to -1.
    RealMatrix gen = real_generator(l, basis);
    const Eigen::VectorXd rho_c = basis.coordinates(vectorize(rho_ss.matrix())).real();
    gen.leftCols(d) -= rho_c * Eigen::RowVectorXd::Ones(d);

    // Tr(s+ B_k) for every basis element.
    Vector read(n);
    {
        const Vector functional = trace_functional(s.raise.matrix());
        for (Index k = 0; k < n; ++k) {
            cplx acc{};
            for (const auto& [pos, weight] : basis.element(k)) acc += functional(pos) * weight;
            read(k) = acc;
        }
    }

    Eigen::HessenbergDecomposition<RealMatrix> hess(gen);
    const RowMajorReal h = hess.matrixH();
    auto rotate = [&](const Vector& v) {
        Eigen::VectorXd re = v.real();
        Eigen::VectorXd im = v.imag();
        re.applyOnTheLeft(hess.matrixQ().transpose());
        im.applyOnTheLeft(hess.matrixQ().transpose());
        Vector out(v.size());
        out.real() = re;
        out.imag() = im;
        return out;
    };
    const Vector b = rotate(source_c);
    const Vector f = rotate(read);

    Vector cur(n), nxt(n), acc(n);
    Eigen::VectorXd raw(delta_grid.size());
    for (Index g = 0; g < delta_grid.size(); ++g) {
        const cplx value = hessenberg_resolvent(h, delta_grid(g), b, f, cur, nxt, acc);
        if (!std::isfinite(value.real())) {
            throw NumericalError("spectrum_resolvent: singular solve at Delta = " +
                                 std::to_string(delta_grid(g)));
        }
        raw(g) = value.real();
    }
    return make_spectrum(delta_grid, std::move(raw));
}

double max_relative_deviation(const Spectrum& a, const Spectrum& b, double floor) {
    if (a.intensity.size() != b.intensity.size()) {
        throw PreconditionError("spectra live on different grids");
    }
    const Index n = b.intensity.size();
    const double threshold = floor * b.intensity.maxCoeff();
    double worst = 0.0;
    for (Index k = 1; k + 1 < n; ++k) {
        const double ref = b.intensity(k);
        if (ref <= threshold) continue;
        worst = std::max(worst, std::abs(a.intensity(k) - ref) / std::abs(ref));
    }
    return worst;
}

}  // namespace jcspec
