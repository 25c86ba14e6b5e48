#include "jcspec/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "jcspec/propagator.hpp"

namespace jcspec {

namespace {

using Triplet = Eigen::Triplet<cplx>;
using ColSparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

// Appends the triplets of rho -> A rho B, i.e. (B^T (x) A).
void add_sandwich(std::vector<Triplet>& out, const Matrix& a, const Matrix& b) {
    const Index d = a.rows();
    for (Index l = 0; l < d; ++l) {
        for (Index j = 0; j < d; ++j) {
            const cplx blj = b(l, j);
            if (blj == cplx{}) continue;
            for (Index k = 0; k < d; ++k) {
                for (Index i = 0; i < d; ++i) {
                    const cplx aik = a(i, k);
                    if (aik == cplx{}) continue;
                    out.emplace_back(j * d + i, l * d + k, blj * aik);
                }
            }
        }
    }
}

Index diagonal_position(Index i, Index dim) { return i * (dim + 1); }

}  // namespace

const char* frame_name(Frame frame) { return frame == Frame::Lab ? "lab" : "displaced"; }

Vector vectorize(const Matrix& rho) {
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unvectorize(const Vector& v, Index dim) {
    if (v.size() != dim * dim) throw SpecMismatch("vector length is not dim^2");
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

DensityMatrix::DensityMatrix(HilbertSpec spec, Matrix matrix)
    : spec_(spec), matrix_(std::move(matrix)) {
    if (matrix_.rows() != spec_.dim() || matrix_.cols() != spec_.dim()) {
        throw SpecMismatch("density matrix shape does not match the Hilbert space");
    }
}

DensityMatrix DensityMatrix::pure(const HilbertSpec& spec, const Vector& state) {
    if (state.size() != spec.dim()) throw SpecMismatch("state dimension does not match the space");
    const Vector psi = state / state.norm();
    return DensityMatrix(spec, psi * psi.adjoint());
}

cplx DensityMatrix::expectation(const Operator& op) const {
    require_same_spec(spec_, op.spec());
    return jcspec::expectation(op, matrix_);
}

StateDiagnostics DensityMatrix::diagnostics() const {
    StateDiagnostics d;
    d.trace_error = std::abs(matrix_.trace() - 1.0);
    d.hermiticity_residue = anti_hermitian_residue(matrix_);
    const Matrix sym = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues().minCoeff();
    return d;
}

void DensityMatrix::require_valid() const {
    const StateDiagnostics d = diagnostics();
    if (d.hermiticity_residue > 1e-10 || d.trace_error > 1e-10 || d.min_eigenvalue < -1e-8) {
        throw NumericalError("invalid density matrix: trace error " + std::to_string(d.trace_error) +
                             ", Hermiticity residue " + std::to_string(d.hermiticity_residue) +
                             ", min eigenvalue " + std::to_string(d.min_eigenvalue));
    }
}

Superoperator::Superoperator(HilbertSpec spec, Frame frame, SparseGenerator generator)
    : spec_(spec), frame_(frame), generator_(std::move(generator)) {
    const Index n = spec_.dim() * spec_.dim();
    if (generator_.rows() != n || generator_.cols() != n) {
        throw SpecMismatch("superoperator size does not match dim^2");
    }
}

Matrix Superoperator::dense() const { return Matrix(generator_); }

Matrix Superoperator::apply(const Matrix& rho) const {
    return unvectorize(generator_ * vectorize(rho), spec_.dim());
}

double Superoperator::trace_residual() const {
    const Index d = spec_.dim();
    Vector functional = Vector::Zero(size());
    for (Index i = 0; i < d; ++i) {
        for (SparseGenerator::InnerIterator it(generator_, diagonal_position(i, d)); it; ++it) {
            functional(it.col()) += it.value();
        }
    }
    return functional.cwiseAbs().maxCoeff();
}

Superoperator lindblad_generator(const Operator& h, std::span<const Dissipator> dissipators,
                                 Frame frame) {
    const HilbertSpec& spec = h.spec();
    const Index d = spec.dim();
    const Matrix id = Matrix::Identity(d, d);

    std::vector<Triplet> triplets;
    add_sandwich(triplets, -kI * h.matrix(), id);
    add_sandwich(triplets, id, kI * h.matrix());
    for (const Dissipator& diss : dissipators) {
        require_same_spec(spec, diss.jump.spec());
        if (diss.rate == 0.0) continue;
        const Matrix& c = diss.jump.matrix();
        const Matrix cdc = c.adjoint() * c;
        add_sandwich(triplets, 2.0 * diss.rate * c, c.adjoint());
        add_sandwich(triplets, -diss.rate * cdc, id);
        add_sandwich(triplets, id, -diss.rate * cdc);
    }

    SparseGenerator gen(d * d, d * d);
    gen.setFromTriplets(triplets.begin(), triplets.end());
    gen.prune(cplx{}, 0.0);
    gen.makeCompressed();
    return Superoperator(spec, frame, std::move(gen));
}

Superoperator build_liouvillian(const ModelParams& params, const HilbertSpec& spec, Frame frame) {
    params.require_physical();
    const Operator a = annihilation(spec);
    const AtomicOperators s = atomic_operators(spec);

    Operator h = hamiltonian(params, spec, Drive::None);
    if (frame == Frame::Lab) {
        if (params.omega != 0.0) h += (kI * params.omega) * (s.raise - s.lower);
    } else {
        const double eps = -params.kappa * params.alpha();
        if (eps != 0.0) h += (kI * eps) * (a.adjoint() - a);
    }

    const Dissipator dissipators[] = {{s.lower, 0.5 * params.gamma}, {a, params.kappa}};
    return lindblad_generator(h, dissipators, frame);
}

double stationarity_residual(const Superoperator& l, const DensityMatrix& rho) {
    require_same_spec(l.spec(), rho.spec());
    return (l.sparse() * vectorize(rho.matrix())).cwiseAbs().maxCoeff();
}

namespace {

DensityMatrix finish_state(const HilbertSpec& spec, const Vector& v) {
    Matrix rho = unvectorize(v, spec.dim());
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace();
    return DensityMatrix(spec, std::move(rho));
}

// Largest eigenvalue of (M^H M)^-1 by power iteration, i.e. 1 / sigma_min(M)^2.
double smallest_singular_value(Eigen::SparseLU<ColSparse>& lu, Index n) {
    Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    double lambda = 0.0;
    for (int iter = 0; iter < 12; ++iter) {
        const Vector u = lu.adjoint().solve(v);
        Vector w = lu.solve(u);
        const double norm = w.norm();
        if (!std::isfinite(norm)) return 0.0;
        lambda = norm;
        v = w / norm;
    }
    return 1.0 / std::sqrt(lambda);
}

// Eigenvector of the eigenvalue of L closest to zero by shifted inverse iteration.
Vector null_vector_by_inverse_iteration(const Superoperator& l) {
    const Index n = l.size();
    ColSparse shifted = ColSparse(l.sparse());
    ColSparse shift(n, n);
    shift.setIdentity();
    shifted -= cplx{-1e-9, 0.0} * shift;
    Eigen::SparseLU<ColSparse> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success) throw NumericalError("steady state: shifted factorization failed");
    Vector v = vectorize(Matrix::Identity(l.spec().dim(), l.spec().dim()));
    for (int iter = 0; iter < 6; ++iter) {
        v = lu.solve(v);
        v /= v.norm();
    }
    return v;
}

}  // namespace

DensityMatrix steady_state(const Superoperator& l) {
    const HilbertSpec& spec = l.spec();
    const Index d = spec.dim();
    const Index n = l.size();

    // Row 0 is the equation for rho(0,0); replace it with the trace condition.
    ColSparse bordered(n, n);
    {
        std::vector<Triplet> triplets;
        triplets.reserve(static_cast<std::size_t>(l.sparse().nonZeros() + d));
        for (Index row = 1; row < n; ++row) {
            for (SparseGenerator::InnerIterator it(l.sparse(), row); it; ++it) {
                triplets.emplace_back(row, it.col(), it.value());
            }
        }
        for (Index i = 0; i < d; ++i) triplets.emplace_back(0, diagonal_position(i, d), 1.0);
        bordered.setFromTriplets(triplets.begin(), triplets.end());
        bordered.makeCompressed();
    }

    Eigen::SparseLU<ColSparse> lu;
    lu.compute(bordered);
    if (lu.info() != Eigen::Success) {
        throw DegenerateSteadyState("steady state: bordered system is singular, null space of L "
                                    "has dimension > 1");
    }
    const double sigma_min = smallest_singular_value(lu, n);
    if (sigma_min < 1e-10) {
        throw DegenerateSteadyState("steady state: smallest singular value of the bordered system " +
                                    std::to_string(sigma_min) +
                                    " < 1e-10, null space of L has dimension > 1");
    }

    Vector rhs = Vector::Zero(n);
    rhs(0) = 1.0;
    Vector x = lu.solve(rhs);
    // One step of iterative refinement.
    x += lu.solve(rhs - bordered * x);

    DensityMatrix rho = finish_state(spec, x);
    if (stationarity_residual(l, rho) > 1e-8) {
        rho = finish_state(spec, null_vector_by_inverse_iteration(l));
        const double residual = stationarity_residual(l, rho);
        if (residual > 1e-8) {
            throw NumericalError("steady state: residual " + std::to_string(residual) +
                                 " after inverse-iteration fallback");
        }
    }
    return rho;
}

void PropagationReport::record(const StateDiagnostics& d, double initial_trace_error) {
    max_trace_drift = std::max(max_trace_drift, std::abs(d.trace_error - initial_trace_error));
    max_hermiticity_residue = std::max(max_hermiticity_residue, d.hermiticity_residue);
    min_eigenvalue = std::min(min_eigenvalue, d.min_eigenvalue);
    ++samples;
}

PropagationResult propagate(const Superoperator& l, const DensityMatrix& rho0, double t, double dt,
                            const PropagationOptions& options) {
    require_same_spec(l.spec(), rho0.spec());
    if (!(dt > 0.0)) throw PreconditionError("propagate: dt must be > 0");
    if (!(t >= 0.0)) throw PreconditionError("propagate: t must be >= 0");

    const StateDiagnostics initial = rho0.diagnostics();
    PropagationReport report;
    report.record(initial, initial.trace_error);
    if (t == 0.0) return {rho0, report};

    const Propagator stepper(l.sparse(), std::min(dt, t), options);
    Vector v = vectorize(rho0.matrix());
    double elapsed = 0.0;
    const double tolerance = 1e-12 * t;
    while (t - elapsed > tolerance) {
        const double h = std::min(stepper.step_size(), t - elapsed);
        if (h == stepper.step_size()) {
            stepper.advance(v);
        } else {
            stepper.advance(v, h);
        }
        elapsed += h;
        report.record(DensityMatrix(l.spec(), unvectorize(v, l.spec().dim())).diagnostics(),
                      initial.trace_error);
    }
    return {DensityMatrix(l.spec(), unvectorize(v, l.spec().dim())), report};
}

}  // namespace jcspec
