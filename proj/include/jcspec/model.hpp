#pragma once

#include <vector>

#include "jcspec/hilbert.hpp"

namespace jcspec {

/// Converts the cavity energy damping rate (2 kappa, the config
/// convention) to the field decay rate kappa used everywhere internally.
/// This is the only place the factor of two is applied.
inline double field_decay_rate(double cavity_damping_rate) { return 0.5 * cavity_damping_rate; }

/// Physical rates with hbar = 1. All frequencies are in units of g.
struct ModelParams {
    double g = 1.0;
    double omega = 0.0;    // classical Rabi frequency driving the atom
    double epsilon = 0.0;  // cavity drive amplitude, cavity-drive variant only
    double gamma = 0.0;    // atomic free-space decay rate
    double kappa = 0.0;    // cavity field decay rate (energy rate is 2 kappa)

    /// Builds params from ratios to g:
    /// Omega/g, 2kappa/g and gamma/g, with g = 1.
    static ModelParams from_ratios(double omega_over_g, double two_kappa_over_g,
                                   double gamma_over_g);

    /// Coherent amplitude of the displaced frame, Omega / g.
    double alpha() const { return omega / g; }
    /// Cavity drive seen in the displaced frame, Omega kappa / g.
    double effective_drive() const { return omega * kappa / g; }
    /// 2 Omega kappa / g^2; the quasi-energy ladder exists only below 1.
    double validity_ratio() const { return 2.0 * omega * kappa / (g * g); }
    bool valid_for_quasi_energy() const { return validity_ratio() < 1.0; }

    /// Throws PreconditionError for negative rates or g <= 0.
    void require_physical() const;
};

enum class Drive {
    Atom,       // i g (a^+ s- - a s+) + i Omega (s+ - s-)
    Cavity,     // i g (a^+ s- - a s+) + i epsilon (a^+ - a)
    Effective,  // cavity form with epsilon -> Omega kappa / g
    None,       // bare resonant interaction
};

Operator hamiltonian(const ModelParams& params, const HilbertSpec& spec, Drive drive);

enum class Branch { Upper, Lower, Ground };

const char* branch_name(Branch branch);

/// +-sqrt(n) g (1 - (2 eps / g)^2)^(3/4). Throws InvalidRegime when 2 eps / g >= 1.
double quasi_energy(int n, Branch branch, double g, double eps);

/// g' = g (1 - (2 Omega kappa / g^2)^2)^(3/4).
double g_prime(const ModelParams& params);

struct DressedState {
    int manifold = 0;
    Branch branch = Branch::Ground;
    double energy = 0.0;
    Vector amplitudes;
};

/// Displaced dressed states of the atom-driven, undamped system:
///   phi_0    = D(alpha) |0,->
///   phi_n^+- = D(alpha) (|n-1,+> +- i |n,->) / sqrt(2),   energy +-sqrt(n) g (g = 1).
DressedState dressed_state_analytic(int n, Branch branch, double alpha, const HilbertSpec& spec);

struct Eigenpair {
    double energy = 0.0;
    Vector state;
};

/// Full spectrum of a Hermitian operator, ascending, orthonormal eigenvectors.
/// Throws PreconditionError when the anti-Hermitian residue exceeds 1e-10.
std::vector<Eigenpair> eigen(const Operator& h);

/// <bra| sigma_- |ket>.
cplx transition_element(const DressedState& bra, const DressedState& ket, const HilbertSpec& spec);

struct Channel {
    int photons = 0;
    cplx amplitude;
};

struct ChannelDecomposition {
    std::vector<Channel> channels;
    cplx total;
};

/// Splits <bra|sigma_-|ket> into the bare channels |n,+> -> |n,->:
/// A_n = <bra|n,-> <n,+|ket>, summed over every retained photon number.
ChannelDecomposition channel_amplitudes(const DressedState& bra, const DressedState& ket,
                                        const HilbertSpec& spec);

/// First-order forms of the cavity-driven eigenstates, as used to pick the
/// numeric eigenvectors (eps in units of g, not normalized):
///   chi_0   ~ |0,-> - eps |0,+>
///   chi_2^+ ~ |1,+> - 2 sqrt(2) eps (|0,+> + sqrt(2) |2,+>)
Vector perturbative_ground(double eps, const HilbertSpec& spec);
Vector perturbative_upper_two(double eps, const HilbertSpec& spec);

/// Picks the eigenpair within energy_window of target whose state has the
/// largest overlap with reference. Throws AmbiguityError when the runner-up
/// is within 0.05 in squared overlap, NumericalError when nothing is in the
/// window.
std::size_t identify_state(const std::vector<Eigenpair>& spectrum, double target,
                           const Vector& reference, double energy_window = 1e-3);

/// |<chi_0| sigma_- |chi_2^+>|^2 from the numeric eigenstates of the effective
/// Hamiltonian, with the truncation convergence policy applied.
double forbidden_strength(const ModelParams& params, const HilbertSpec& spec);

struct LadderEntry {
    int n = 0;
    Branch branch = Branch::Ground;
    double analytic = 0.0;
    double numeric = 0.0;
    double abs_diff() const;
};

/// Truncation convergence policy: eigenvalues accepted once they move by
/// less than this between fock_dim and fock_dim + kConvergenceStep.
inline constexpr double kConvergenceShift = 1e-6;
inline constexpr int kConvergenceStep = 10;
inline constexpr int kMaxFockDim = 120;

/// Analytic quasi-energies of the effective Hamiltonian against the nearest
/// numeric eigenvalues for n = 0..max_n. fock_dim is raised in steps of
/// kConvergenceStep until every matched eigenvalue is converged.
std::vector<LadderEntry> quasi_energy_ladder(const ModelParams& params, int fock_dim, int max_n);

}  // namespace jcspec
