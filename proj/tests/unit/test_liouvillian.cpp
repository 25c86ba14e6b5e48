#include <doctest.h>

#include <cmath>

#include "jcspec/liouvillian.hpp"
#include "oracles.hpp"

using namespace jcspec;

namespace {

DensityMatrix projector(const HilbertSpec& spec, const Vector& state) {
    return DensityMatrix::pure(spec, state);
}

Superoperator spontaneous_emission(const HilbertSpec& spec, double gamma) {
    const Operator h(spec, Matrix::Zero(spec.dim(), spec.dim()));
    const Dissipator d[] = {{atomic_operators(spec).lower, 0.5 * gamma}};
    return lindblad_generator(h, d);
}

}  // namespace

TEST_SUITE("liouvillian") {

TEST_CASE("vectorization is column stacking") {
    Matrix m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    const Vector v = vectorize(m);
    CHECK(v(1) == cplx(3.0));
    CHECK(v(2) == cplx(2.0));
    CHECK(unvectorize(v, 2) == m);
    CHECK_THROWS_AS(unvectorize(v, 3), SpecMismatch);
}

TEST_CASE("generator matches the dense master equation") {
    const HilbertSpec spec = build_space(4);
    const ModelParams p = ModelParams::from_ratios(0.7, 0.2, 0.1);
    const Superoperator l = build_liouvillian(p, spec, Frame::Lab);

    Matrix rho = Matrix::Random(spec.dim(), spec.dim());
    rho = rho * rho.adjoint();
    const Matrix h = hamiltonian(p, spec, Drive::Atom).matrix();
    const Matrix sm = atomic_operators(spec).lower.matrix();
    const Matrix a = annihilation(spec).matrix();
    auto diss = [&](const Matrix& c, double r) {
        return r * (2.0 * c * rho * c.adjoint() - c.adjoint() * c * rho - rho * c.adjoint() * c);
    };
    const Matrix expected = -kI * (h * rho - rho * h) + diss(sm, p.gamma / 2) + diss(a, p.kappa);
    CHECK((l.apply(rho) - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(l.trace_residual() < 1e-14);
}

TEST_CASE("stationary states of the lossless and undriven limits") {
    SUBCASE("pure cavity decay leaves the vacuum ground state") {
        const HilbertSpec spec = build_space(6);
        const Operator h(spec, Matrix::Zero(spec.dim(), spec.dim()));
        const Dissipator d[] = {{annihilation(spec), 0.3}};
        const Superoperator l = lindblad_generator(h, d);
        const DensityMatrix rho = projector(spec, basis_state(spec, 0, AtomLevel::Ground));
        CHECK(stationarity_residual(l, rho) == 0.0);
        CHECK_THROWS_AS(steady_state(l), DegenerateSteadyState);
    }
    SUBCASE("coherent state with ground atom is dark in the lab frame") {
        const HilbertSpec spec = build_space(30);
        const double alpha = 1.5;
        const ModelParams p = ModelParams::from_ratios(alpha, 0.0, 0.05);
        const Superoperator l = build_liouvillian(p, spec, Frame::Lab);
        const Vector coh = displacement(spec, alpha).matrix() * basis_state(spec, 0, AtomLevel::Ground);
        CHECK(stationarity_residual(l, projector(spec, coh)) < 1e-8);
    }
    SUBCASE("vacuum ground state is dark in the displaced frame") {
        const HilbertSpec spec = build_space(10);
        const Superoperator l =
            build_liouvillian(ModelParams::from_ratios(8.0 / 3.0, 0.0, 0.05), spec, Frame::Displaced);
        CHECK(stationarity_residual(l, projector(spec, basis_state(spec, 0, AtomLevel::Ground))) < 1e-10);
    }
}

TEST_CASE("steady states") {
    SUBCASE("lossless cavity: coherent state times ground atom") {
        const HilbertSpec spec = build_space(30);
        const double alpha = 1.5;
        const DensityMatrix rho =
            steady_state(build_liouvillian(ModelParams::from_ratios(alpha, 0.0, 0.1), spec, Frame::Lab));
        Vector coh(spec.dim());
        coh.setZero();
        for (int n = 0; n < spec.fock_dim(); ++n) {
            coh(spec.index(n, AtomLevel::Ground)) = oracle::coherent_amplitude(alpha, n);
        }
        CHECK(coh.dot(rho.matrix() * coh).real() > 1.0 - 1e-8);
    }
    SUBCASE("undriven decay to the ground state") {
        const HilbertSpec spec = build_space(6);
        const DensityMatrix rho =
            steady_state(build_liouvillian(ModelParams::from_ratios(0.0, 0.1, 0.05), spec, Frame::Lab));
        const Matrix expected = projector(spec, basis_state(spec, 0, AtomLevel::Ground)).matrix();
        CHECK((rho.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("figure parameters agree with long-time propagation") {
        const HilbertSpec spec = build_space(20);
        const Superoperator l =
            build_liouvillian(ModelParams::from_ratios(8.0 / 3.0, 0.03, 0.03), spec, Frame::Displaced);
        const DensityMatrix rho = steady_state(l);
        rho.require_valid();
        const AtomicOperators s = atomic_operators(spec);
        CHECK((s.raise * s.lower).matrix().cwiseProduct(rho.matrix().transpose()).sum().real() > 0.0);

        const DensityMatrix start = projector(spec, basis_state(spec, 0, AtomLevel::Ground));
        // Slowest relaxation rate is about 0.015, so t = 200 still leaves ~5e-2 of the transient.
        const PropagationResult late = propagate(l, start, 1000.0, 5.0);
        CHECK((late.state.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("frames agree after conjugation by the displacement") {
    const ModelParams p = ModelParams::from_ratios(0.5, 0.03, 0.03);
    const HilbertSpec spec = build_space(20);
    const DensityMatrix lab = steady_state(build_liouvillian(p, spec, Frame::Lab));
    const DensityMatrix displaced = steady_state(build_liouvillian(p, spec, Frame::Displaced));
    const Matrix d = displacement(spec, p.alpha()).matrix();
    const Matrix back = d.adjoint() * lab.matrix() * d;
    CHECK((back - displaced.matrix()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("propagation") {
    const HilbertSpec spec = build_space(3);
    const DensityMatrix excited = projector(spec, basis_state(spec, 0, AtomLevel::Excited));

    SUBCASE("t = 0 returns the input bit for bit") {
        const Superoperator l = spontaneous_emission(spec, 0.3);
        CHECK(propagate(l, excited, 0.0, 0.1).state.matrix() == excited.matrix());
    }
    SUBCASE("zero generator leaves the state alone") {
        const Superoperator l(spec, Frame::Lab, SparseGenerator(spec.dim() * spec.dim(), spec.dim() * spec.dim()));
        CHECK(propagate(l, excited, 5.0, 0.1).state.matrix() == excited.matrix());
    }
    for (PropagationMethod method : {PropagationMethod::Exponential, PropagationMethod::Adaptive}) {
        CAPTURE(static_cast<int>(method));
        PropagationOptions options;
        options.method = method;
        const double gamma = 0.4;
        const Superoperator l = spontaneous_emission(spec, gamma);
        const PropagationResult r = propagate(l, excited, 1.0 / gamma, 0.07, options);
        const double pop = r.state.matrix()(spec.index(0, AtomLevel::Excited), spec.index(0, AtomLevel::Excited)).real();
        CHECK(std::abs(pop - oracle::excited_population(gamma, 1.0 / gamma)) < 1e-6);
        CHECK(r.report.max_trace_drift < 1e-8);
        CHECK(r.report.max_hermiticity_residue < 1e-8);
        CHECK(r.report.min_eigenvalue >= -1e-8);
        CHECK(r.report.samples > 10);
    }
    SUBCASE("methods agree on the driven, damped model") {
        const HilbertSpec big = build_space(10);
        const Superoperator l =
            build_liouvillian(ModelParams::from_ratios(1.0, 0.1, 0.05), big, Frame::Displaced);
        const DensityMatrix start = projector(big, basis_state(big, 0, AtomLevel::Ground));
        PropagationOptions adaptive;
        adaptive.method = PropagationMethod::Adaptive;
        const Matrix a = propagate(l, start, 10.0, 0.5).state.matrix();
        const Matrix b = propagate(l, start, 10.0, 0.5, adaptive).state.matrix();
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("preconditions") {
        const Superoperator l = spontaneous_emission(spec, 0.3);
        CHECK_THROWS_AS(propagate(l, excited, 1.0, 0.0), PreconditionError);
        CHECK_THROWS_AS(propagate(l, excited, -1.0, 0.1), PreconditionError);
    }
}

TEST_CASE("density matrix checks") {
    const HilbertSpec spec = build_space(2);
    Matrix m = Matrix::Identity(spec.dim(), spec.dim()) / 4.0;
    DensityMatrix(spec, m).require_valid();
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix(spec, m).require_valid(), NumericalError);
    CHECK_THROWS_AS(DensityMatrix(spec, Matrix::Identity(3, 3)), SpecMismatch);
}

}
