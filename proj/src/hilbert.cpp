#include "jcspec/hilbert.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace jcspec {

namespace {

// Lift a cavity-only N x N matrix to the joint space: A (x) I_atom.
Matrix lift_cavity(const Matrix& cavity) {
    const Index n = cavity.rows();
    Matrix out = Matrix::Zero(2 * n, 2 * n);
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const cplx v = cavity(i, j);
            if (v == cplx{}) continue;
            out(2 * i, 2 * j) = v;
            out(2 * i + 1, 2 * j + 1) = v;
        }
    }
    return out;
}

Matrix cavity_lowering(int fock_dim) {
    Matrix a = Matrix::Zero(fock_dim, fock_dim);
    for (int n = 1; n < fock_dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

}  // namespace

HilbertSpec::HilbertSpec(int fock_dim) : fock_dim_(fock_dim) {
    if (fock_dim < 2) {
        throw PreconditionError("fock_dim must be >= 2, got " + std::to_string(fock_dim));
    }
}

Index HilbertSpec::index(int photons, AtomLevel level) const {
    if (photons < 0 || photons >= fock_dim_) {
        throw PreconditionError("photon number " + std::to_string(photons) +
                                " outside truncated space of dimension " +
                                std::to_string(fock_dim_));
    }
    return 2 * static_cast<Index>(photons) + static_cast<Index>(level);
}

HilbertSpec build_space(int fock_dim) { return HilbertSpec(fock_dim); }

Operator::Operator(HilbertSpec spec, Matrix matrix) : spec_(spec), matrix_(std::move(matrix)) {
    if (matrix_.rows() != spec_.dim() || matrix_.cols() != spec_.dim()) {
        throw SpecMismatch("operator matrix is " + std::to_string(matrix_.rows()) + "x" +
                           std::to_string(matrix_.cols()) + ", space needs " +
                           std::to_string(spec_.dim()));
    }
}

Operator Operator::adjoint() const { return Operator(spec_, matrix_.adjoint()); }

Operator& Operator::operator+=(const Operator& other) {
    require_same_spec(spec_, other.spec_);
    matrix_ += other.matrix_;
    return *this;
}

Operator& Operator::operator-=(const Operator& other) {
    require_same_spec(spec_, other.spec_);
    matrix_ -= other.matrix_;
    return *this;
}

Operator& Operator::operator*=(cplx scale) {
    matrix_ *= scale;
    return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
    require_same_spec(lhs.spec(), rhs.spec());
    return Operator(lhs.spec(), lhs.matrix() * rhs.matrix());
}

void require_same_spec(const HilbertSpec& a, const HilbertSpec& b) {
    if (!(a == b)) {
        throw SpecMismatch("Hilbert space mismatch: fock_dim " + std::to_string(a.fock_dim()) +
                           " vs " + std::to_string(b.fock_dim()));
    }
}

Operator identity(const HilbertSpec& spec) {
    return Operator(spec, Matrix::Identity(spec.dim(), spec.dim()));
}

Operator annihilation(const HilbertSpec& spec) {
    return Operator(spec, lift_cavity(cavity_lowering(spec.fock_dim())));
}

Operator creation(const HilbertSpec& spec) { return annihilation(spec).adjoint(); }

Operator number(const HilbertSpec& spec) {
    const Operator a = annihilation(spec);
    return a.adjoint() * a;
}

AtomicOperators atomic_operators(const HilbertSpec& spec) {
    Matrix lower = Matrix::Zero(spec.dim(), spec.dim());
    for (int n = 0; n < spec.fock_dim(); ++n) {
        lower(spec.index(n, AtomLevel::Ground), spec.index(n, AtomLevel::Excited)) = 1.0;
    }
    Operator sm(spec, std::move(lower));
    Operator sp = sm.adjoint();
    Operator sz = sp * sm - sm * sp;
    return {std::move(sm), std::move(sp), std::move(sz)};
}

bool displacement_within_truncation(const HilbertSpec& spec, cplx alpha, double safety) {
    return std::norm(alpha) <= safety * spec.fock_dim();
}

Operator displacement(const HilbertSpec& spec, cplx alpha, double safety) {
    if (!displacement_within_truncation(spec, alpha, safety)) {
        std::clog << "jcspec: warning: |alpha|^2 = " << std::norm(alpha)
                  << " exceeds the truncation guideline " << safety * spec.fock_dim()
                  << " for fock_dim " << spec.fock_dim() << '\n';
    }
    if (alpha == cplx{}) return identity(spec);
    const Matrix a = cavity_lowering(spec.fock_dim());
    const Matrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
    return Operator(spec, lift_cavity(generator.exp()));
}

Operator adjoint(const Operator& a) { return a.adjoint(); }

Operator multiply(const Operator& a, const Operator& b) { return a * b; }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

cplx expectation(const Operator& a, const Vector& state) {
    if (state.size() != a.spec().dim()) throw SpecMismatch("state dimension does not match operator");
    return state.dot(a.matrix() * state);
}

cplx expectation(const Operator& a, const Matrix& rho) {
    if (rho.rows() != a.spec().dim() || rho.cols() != a.spec().dim()) {
        throw SpecMismatch("density matrix dimension does not match operator");
    }
    return (a.matrix() * rho).trace();
}

Vector basis_state(const HilbertSpec& spec, int photons, AtomLevel level) {
    Vector v = Vector::Zero(spec.dim());
    v(spec.index(photons, level)) = 1.0;
    return v;
}

double anti_hermitian_residue(const Matrix& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace jcspec
