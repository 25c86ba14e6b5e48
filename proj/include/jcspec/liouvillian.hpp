#pragma once

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "jcspec/hilbert.hpp"
#include "jcspec/model.hpp"

namespace jcspec {

using SparseGenerator = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

enum class Frame {
    Lab,        // atom-driven master equation as written in the interaction picture
    Displaced,  // rho~ = D^+(alpha) rho D(alpha), alpha = Omega / g
};

const char* frame_name(Frame frame);

/// Vectorization is column stacking: vec(rho)[j * D + i] = rho(i, j), which is
/// Eigen's native layout. A rho B maps to (B^T (x) A) vec(rho).
Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v, Index dim);

struct StateDiagnostics {
    double trace_error = 0.0;          // |Tr rho - 1|
    double hermiticity_residue = 0.0;  // max |rho - rho^+|
    double min_eigenvalue = 0.0;
};

class DensityMatrix {
public:
    /// Shape-checked only; call diagnostics() or require_valid() for the
    /// physical invariants.
    DensityMatrix(HilbertSpec spec, Matrix matrix);

    static DensityMatrix pure(const HilbertSpec& spec, const Vector& state);

    const HilbertSpec& spec() const { return spec_; }
    const Matrix& matrix() const { return matrix_; }

    cplx expectation(const Operator& op) const;
    cplx trace() const { return matrix_.trace(); }
    StateDiagnostics diagnostics() const;

    /// Throws NumericalError unless Hermitian to 1e-10, unit trace to 1e-10
    /// and min eigenvalue >= -1e-8.
    void require_valid() const;

private:
    HilbertSpec spec_;
    Matrix matrix_;
};

/// Jump operator C with rate r, contributing r (2 C rho C^+ - C^+C rho - rho C^+C).
struct Dissipator {
    Operator jump;
    double rate = 0.0;
};

/// Vectorized Lindblad generator acting on column-stacked density matrices.
class Superoperator {
public:
    Superoperator(HilbertSpec spec, Frame frame, SparseGenerator generator);

    const HilbertSpec& spec() const { return spec_; }
    Frame frame() const { return frame_; }
    const SparseGenerator& sparse() const { return generator_; }
    Matrix dense() const;
    Index size() const { return generator_.rows(); }

    Vector apply(const Vector& vec_rho) const { return generator_ * vec_rho; }
    Matrix apply(const Matrix& rho) const;

    /// max |(Tr^T L)_k|; zero for a trace-preserving generator.
    double trace_residual() const;

private:
    HilbertSpec spec_;
    Frame frame_;
    SparseGenerator generator_;
};

/// L rho = -i [H, rho] + sum_k r_k (2 C_k rho C_k^+ - C_k^+ C_k rho - rho C_k^+ C_k).
Superoperator lindblad_generator(const Operator& h, std::span<const Dissipator> dissipators,
                                 Frame frame = Frame::Lab);

/// The damped, atom-driven master equation.
///
/// Lab frame: H = i g (a^+ s- - a s+) + i Omega (s+ - s-), atomic jump s- at
/// rate gamma / 2 and cavity jump a at rate kappa.
///
/// Displaced frame: conjugating by D(alpha) with alpha = Omega / g removes the
/// atom drive, and the cavity jump a + alpha splits into the jump a plus the
/// coherent term i eps (a^+ - a) with eps = -Omega kappa / g. That sign is
/// fixed by the lab/displaced steady-state consistency test; the effective
/// Hamiltonian with +Omega kappa / g is unitarily equivalent (parity).
Superoperator build_liouvillian(const ModelParams& params, const HilbertSpec& spec, Frame frame);

/// Unique fixed point of L with unit trace, from the bordered system
/// {L rho = 0, Tr rho = 1}. Throws DegenerateSteadyState when the bordered
/// matrix is numerically singular (null space of L larger than one).
DensityMatrix steady_state(const Superoperator& l);

/// Largest |entry| of L vec(rho).
double stationarity_residual(const Superoperator& l, const DensityMatrix& rho);

enum class PropagationMethod {
    Exponential,  // exp(L h) v by scaled Taylor series, to rounding
    Adaptive,     // Dormand-Prince 5(4) with error control
};

struct PropagationOptions {
    PropagationMethod method = PropagationMethod::Exponential;
    double rtol = 1e-11;
    double atol = 1e-13;
    double min_step = 1e-9;
};

/// Worst values seen over every output step of a propagation.
struct PropagationReport {
    double max_trace_drift = 0.0;
    double max_hermiticity_residue = 0.0;
    double min_eigenvalue = 1.0;
    int samples = 0;

    void record(const StateDiagnostics& d, double initial_trace_error);
};

struct PropagationResult {
    DensityMatrix state;
    PropagationReport report;
};

/// exp(L t) rho0, advanced in output steps of dt (the last step is shortened
/// to land on t). Diagnostics are taken after every output step.
PropagationResult propagate(const Superoperator& l, const DensityMatrix& rho0, double t, double dt,
                            const PropagationOptions& options = {});

}  // namespace jcspec
