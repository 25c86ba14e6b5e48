#pragma once

#include <complex>

#include <Eigen/Dense>

#include "jcspec/errors.hpp"

namespace jcspec {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};

/// Atomic level. The numeric value is the atomic slot s in the joint index.
enum class AtomLevel : int { Excited = 0, Ground = 1 };

/// Truncated cavity Fock space (|0>..|N-1>) tensored with a two-level atom.
///
/// Joint basis index k = 2 * n_c + s with n_c the photon number and
/// s = 0 for the excited state |+>, s = 1 for the ground state |->.
/// Operators on the cavity therefore read A (x) I_atom in Kronecker order.
class HilbertSpec {
public:
    explicit HilbertSpec(int fock_dim);

    int fock_dim() const { return fock_dim_; }
    Index dim() const { return 2 * static_cast<Index>(fock_dim_); }
    Index index(int photons, AtomLevel level) const;

    friend bool operator==(const HilbertSpec&, const HilbertSpec&) = default;

private:
    int fock_dim_;
};

HilbertSpec build_space(int fock_dim);

/// Dense operator on the joint space, tagged with the space it lives on.
class Operator {
public:
    Operator(HilbertSpec spec, Matrix matrix);

    const HilbertSpec& spec() const { return spec_; }
    const Matrix& matrix() const { return matrix_; }

    Operator adjoint() const;

    Operator& operator+=(const Operator& other);
    Operator& operator-=(const Operator& other);
    Operator& operator*=(cplx scale);

    friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
    friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
    friend Operator operator*(Operator lhs, cplx scale) { return lhs *= scale; }
    friend Operator operator*(cplx scale, Operator rhs) { return rhs *= scale; }
    friend Operator operator*(const Operator& lhs, const Operator& rhs);

private:
    HilbertSpec spec_;
    Matrix matrix_;
};

/// Throws SpecMismatch unless both specs are identical.
void require_same_spec(const HilbertSpec& a, const HilbertSpec& b);

Operator identity(const HilbertSpec& spec);
Operator annihilation(const HilbertSpec& spec);
Operator creation(const HilbertSpec& spec);
Operator number(const HilbertSpec& spec);

struct AtomicOperators {
    Operator lower;  // sigma_-
    Operator raise;  // sigma_+
    Operator z;      // [sigma_+, sigma_-]
};

AtomicOperators atomic_operators(const HilbertSpec& spec);

/// Default truncation guideline: |alpha|^2 <= fock_dim / 4.
inline constexpr double kDisplacementSafety = 0.25;

bool displacement_within_truncation(const HilbertSpec& spec, cplx alpha,
                                    double safety = kDisplacementSafety);

/// exp(alpha a^dagger - conj(alpha) a) (x) I_atom from the truncated
/// generator. Unitary to rounding for any alpha; accurate as a displacement
/// only while displacement_within_truncation holds. Outside that bound a
/// warning goes to std::clog and the matrix is still returned.
Operator displacement(const HilbertSpec& spec, cplx alpha,
                      double safety = kDisplacementSafety);

Operator adjoint(const Operator& a);
Operator multiply(const Operator& a, const Operator& b);
Operator commutator(const Operator& a, const Operator& b);

/// <psi|A|psi> for a normalized state vector.
cplx expectation(const Operator& a, const Vector& state);
/// Tr(A rho) for a density matrix given as a raw matrix on the same space.
cplx expectation(const Operator& a, const Matrix& rho);

/// |n_c>|level> as a unit vector.
Vector basis_state(const HilbertSpec& spec, int photons, AtomLevel level);

/// Largest |entry| of A - A^dagger.
double anti_hermitian_residue(const Matrix& a);

}  // namespace jcspec
