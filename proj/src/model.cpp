#include "jcspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace jcspec {

ModelParams ModelParams::from_ratios(double omega_over_g, double two_kappa_over_g,
                                     double gamma_over_g) {
    ModelParams p;
    p.g = 1.0;
    p.omega = omega_over_g;
    p.kappa = field_decay_rate(two_kappa_over_g);
    p.gamma = gamma_over_g;
    return p;
}

void ModelParams::require_physical() const {
    if (!(g > 0.0)) throw PreconditionError("coupling g must be positive");
    if (omega < 0.0 || epsilon < 0.0 || gamma < 0.0 || kappa < 0.0) {
        throw PreconditionError("rates omega, epsilon, gamma, kappa must be >= 0");
    }
}

Operator hamiltonian(const ModelParams& params, const HilbertSpec& spec, Drive drive) {
    params.require_physical();
    const Operator a = annihilation(spec);
    const Operator ad = a.adjoint();
    const AtomicOperators s = atomic_operators(spec);

    Operator h = (kI * params.g) * (ad * s.lower - a * s.raise);
    switch (drive) {
    case Drive::None:
        break;
    case Drive::Atom:
        if (params.omega != 0.0) h += (kI * params.omega) * (s.raise - s.lower);
        break;
    case Drive::Cavity:
        if (params.epsilon != 0.0) h += (kI * params.epsilon) * (ad - a);
        break;
    case Drive::Effective:
        if (params.effective_drive() != 0.0) h += (kI * params.effective_drive()) * (ad - a);
        break;
    }
    return h;
}

const char* branch_name(Branch branch) {
    switch (branch) {
    case Branch::Upper: return "+";
    case Branch::Lower: return "-";
    case Branch::Ground: return "ground";
    }
    return "?";
}

double quasi_energy(int n, Branch branch, double g, double eps) {
    if (n < 0) throw PreconditionError("manifold index must be >= 0");
    const double ratio = 2.0 * eps / g;
    if (ratio >= 1.0) {
        throw InvalidRegime("quasi-energy ladder undefined for 2 eps / g = " +
                            std::to_string(ratio) + " >= 1 (requires kappa < g^2 / 2 Omega)");
    }
    const double magnitude = std::sqrt(static_cast<double>(n)) * g *
                             std::pow(1.0 - ratio * ratio, 0.75);
    return branch == Branch::Lower ? -magnitude : magnitude;
}

double g_prime(const ModelParams& params) {
    return quasi_energy(1, Branch::Upper, params.g, params.effective_drive());
}

DressedState dressed_state_analytic(int n, Branch branch, double alpha, const HilbertSpec& spec) {
    if (branch == Branch::Ground ? n != 0 : n < 1) {
        throw PreconditionError("ground branch exists only for n = 0, +/- only for n >= 1");
    }
    if (n + 1 >= spec.fock_dim()) {
        throw PreconditionError("manifold " + std::to_string(n) +
                                " needs fock_dim > " + std::to_string(n + 1));
    }

    DressedState out;
    out.manifold = n;
    out.branch = branch;
    Vector bare = Vector::Zero(spec.dim());
    if (branch == Branch::Ground) {
        bare(spec.index(0, AtomLevel::Ground)) = 1.0;
    } else {
        const double sign = branch == Branch::Upper ? 1.0 : -1.0;
        bare(spec.index(n - 1, AtomLevel::Excited)) = M_SQRT1_2;
        bare(spec.index(n, AtomLevel::Ground)) = sign * kI * M_SQRT1_2;
        out.energy = sign * std::sqrt(static_cast<double>(n));
    }
    out.amplitudes = alpha == 0.0 ? bare : Vector(displacement(spec, alpha).matrix() * bare);
    return out;
}

std::vector<Eigenpair> eigen(const Operator& h) {
    const double residue = anti_hermitian_residue(h.matrix());
    if (residue > 1e-10) {
        throw PreconditionError("eigen requires a Hermitian operator, residue " +
                                std::to_string(residue));
    }
    const Matrix sym = 0.5 * (h.matrix() + h.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");

    std::vector<Eigenpair> out(static_cast<std::size_t>(sym.rows()));
    for (Index k = 0; k < sym.rows(); ++k) {
        out[static_cast<std::size_t>(k)] = {solver.eigenvalues()(k), solver.eigenvectors().col(k)};
    }
    return out;
}

cplx transition_element(const DressedState& bra, const DressedState& ket, const HilbertSpec& spec) {
    if (bra.amplitudes.size() != spec.dim() || ket.amplitudes.size() != spec.dim()) {
        throw SpecMismatch("dressed state does not live on the given space");
    }
    const Operator sm = atomic_operators(spec).lower;
    return bra.amplitudes.dot(sm.matrix() * ket.amplitudes);
}

ChannelDecomposition channel_amplitudes(const DressedState& bra, const DressedState& ket,
                                        const HilbertSpec& spec) {
    if (bra.amplitudes.size() != spec.dim() || ket.amplitudes.size() != spec.dim()) {
        throw SpecMismatch("dressed state does not live on the given space");
    }
    ChannelDecomposition out;
    for (int n = 0; n < spec.fock_dim(); ++n) {
        const cplx to_ground = std::conj(bra.amplitudes(spec.index(n, AtomLevel::Ground)));
        const cplx from_excited = ket.amplitudes(spec.index(n, AtomLevel::Excited));
        const cplx amplitude = to_ground * from_excited;
        out.channels.push_back({n, amplitude});
        out.total += amplitude;
    }
    return out;
}

Vector perturbative_ground(double eps, const HilbertSpec& spec) {
    Vector v = Vector::Zero(spec.dim());
    v(spec.index(0, AtomLevel::Ground)) = 1.0;
    v(spec.index(0, AtomLevel::Excited)) = -eps;
    return v;
}

Vector perturbative_upper_two(double eps, const HilbertSpec& spec) {
    Vector v = Vector::Zero(spec.dim());
    const double c = 2.0 * std::sqrt(2.0) * eps;
    v(spec.index(1, AtomLevel::Excited)) = 1.0;
    v(spec.index(0, AtomLevel::Excited)) = -c;
    v(spec.index(2, AtomLevel::Excited)) = -c * std::sqrt(2.0);
    return v;
}

std::size_t identify_state(const std::vector<Eigenpair>& spectrum, double target,
                           const Vector& reference, double energy_window) {
    const double ref_norm = reference.squaredNorm();
    std::size_t best = spectrum.size();
    double best_overlap = -1.0;
    double runner_up = -1.0;
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        if (std::abs(spectrum[k].energy - target) > energy_window) continue;
        const double overlap = std::norm(spectrum[k].state.dot(reference)) / ref_norm;
        if (overlap > best_overlap) {
            runner_up = best_overlap;
            best_overlap = overlap;
            best = k;
        } else if (overlap > runner_up) {
            runner_up = overlap;
        }
    }
    if (best == spectrum.size()) {
        throw NumericalError("no eigenvalue within " + std::to_string(energy_window) + " of " +
                             std::to_string(target));
    }
    if (runner_up >= 0.0 && best_overlap - runner_up < 0.05) {
        throw AmbiguityError("two eigenstates near energy " + std::to_string(target) +
                             " overlap the reference within 0.05 of each other");
    }
    return best;
}

namespace {

struct ForbiddenPair {
    double ground_energy;
    double upper_energy;
    double strength;
};

ForbiddenPair forbidden_pair(const ModelParams& params, const HilbertSpec& spec) {
    const double eps = params.effective_drive() / params.g;
    const auto spectrum = eigen(hamiltonian(params, spec, Drive::Effective));
    const std::size_t i0 = identify_state(spectrum, 0.0, perturbative_ground(eps, spec));
    const std::size_t i2 =
        identify_state(spectrum, quasi_energy(2, Branch::Upper, params.g, params.effective_drive()),
                       perturbative_upper_two(eps, spec));
    const Operator sm = atomic_operators(spec).lower;
    const cplx element = spectrum[i0].state.dot(sm.matrix() * spectrum[i2].state);
    return {spectrum[i0].energy, spectrum[i2].energy, std::norm(element)};
}

}  // namespace

double forbidden_strength(const ModelParams& params, const HilbertSpec& spec) {
    params.require_physical();
    if (!params.valid_for_quasi_energy()) {
        throw InvalidRegime("forbidden_strength requires 2 Omega kappa / g^2 < 1");
    }
    for (int n = spec.fock_dim(); n <= kMaxFockDim; n += kConvergenceStep) {
        const ForbiddenPair coarse = forbidden_pair(params, HilbertSpec(n));
        const ForbiddenPair fine = forbidden_pair(params, HilbertSpec(n + kConvergenceStep));
        if (std::abs(coarse.ground_energy - fine.ground_energy) < kConvergenceShift &&
            std::abs(coarse.upper_energy - fine.upper_energy) < kConvergenceShift) {
            return coarse.strength;
        }
    }
    throw NumericalError("forbidden_strength: eigenstates not converged below fock_dim " +
                         std::to_string(kMaxFockDim));
}

double LadderEntry::abs_diff() const { return std::abs(analytic - numeric); }

namespace {

std::vector<LadderEntry> ladder_at(const ModelParams& params, int fock_dim, int max_n) {
    const auto spectrum = eigen(hamiltonian(params, HilbertSpec(fock_dim), Drive::Effective));
    auto nearest = [&](double target) {
        double best = spectrum.front().energy;
        for (const auto& pair : spectrum) {
            if (std::abs(pair.energy - target) < std::abs(best - target)) best = pair.energy;
        }
        return best;
    };
    std::vector<LadderEntry> out;
    const double eps = params.effective_drive();
    for (int n = 0; n <= max_n; ++n) {
        for (Branch b : {Branch::Upper, Branch::Lower}) {
            if (n == 0 && b == Branch::Lower) continue;
            const Branch branch = n == 0 ? Branch::Ground : b;
            const double analytic = quasi_energy(n, branch, params.g, eps);
            out.push_back({n, branch, analytic, nearest(analytic)});
        }
    }
    return out;
}

}  // namespace

std::vector<LadderEntry> quasi_energy_ladder(const ModelParams& params, int fock_dim, int max_n) {
    params.require_physical();
    if (max_n < 0) throw PreconditionError("max_n must be >= 0");
    if (!params.valid_for_quasi_energy()) {
        throw InvalidRegime("quasi-energy ladder requires 2 Omega kappa / g^2 < 1");
    }
    for (int n = std::max(fock_dim, max_n + 2); n <= kMaxFockDim; n += kConvergenceStep) {
        auto coarse = ladder_at(params, n, max_n);
        const auto fine = ladder_at(params, n + kConvergenceStep, max_n);
        bool converged = true;
        for (std::size_t k = 0; k < coarse.size(); ++k) {
            converged = converged && std::abs(coarse[k].numeric - fine[k].numeric) < kConvergenceShift;
        }
        if (converged) return coarse;
    }
    throw NumericalError("quasi-energy ladder not converged below fock_dim " +
                         std::to_string(kMaxFockDim));
}

}  // namespace jcspec
