#include <doctest.h>

#include "jcspec/hilbert.hpp"
#include "oracles.hpp"

using namespace jcspec;

TEST_SUITE("hilbert") {

TEST_CASE("space dimension is twice the Fock dimension") {
    CHECK(build_space(2).dim() == 4);
    CHECK(build_space(20).dim() == 40);
    CHECK_THROWS_AS(build_space(1), PreconditionError);
}

TEST_CASE("joint index puts the atom slot last") {
    const HilbertSpec spec = build_space(5);
    CHECK(spec.index(0, AtomLevel::Excited) == 0);
    CHECK(spec.index(0, AtomLevel::Ground) == 1);
    CHECK(spec.index(3, AtomLevel::Ground) == 7);
}

TEST_CASE("annihilation matrix elements") {
    const HilbertSpec spec = build_space(6);
    const Operator a = annihilation(spec);
    auto k = [&](int n, AtomLevel s) { return spec.index(n, s); };
    CHECK(std::abs(a.matrix()(k(0, AtomLevel::Ground), k(1, AtomLevel::Ground)) - 1.0) == 0.0);
    CHECK(a.matrix()(k(2, AtomLevel::Excited), k(3, AtomLevel::Excited)).real() ==
          doctest::Approx(1.7320508).epsilon(1e-8));
    for (AtomLevel s : {AtomLevel::Excited, AtomLevel::Ground}) {
        CHECK((a.matrix() * basis_state(spec, 0, s)).norm() == 0.0);
    }
    const Operator ad = creation(spec);
    for (int n = 0; n + 1 < spec.fock_dim(); ++n) {
        CHECK(ad.matrix()(k(n + 1, AtomLevel::Ground), k(n, AtomLevel::Ground)).real() ==
              std::sqrt(n + 1.0));
    }
}

TEST_CASE("atomic operators") {
    const HilbertSpec spec = build_space(8);
    const AtomicOperators s = atomic_operators(spec);
    const Vector lowered = s.lower.matrix() * basis_state(spec, 5, AtomLevel::Excited);
    CHECK((lowered - basis_state(spec, 5, AtomLevel::Ground)).norm() == 0.0);
    const Matrix anti = (s.raise * s.lower + s.lower * s.raise).matrix();
    CHECK((anti - Matrix::Identity(spec.dim(), spec.dim())).norm() == 0.0);
    CHECK((s.lower * s.lower).matrix().norm() == 0.0);
    CHECK((adjoint(s.lower).matrix() - s.raise.matrix()).norm() == 0.0);

    Eigen::SelfAdjointEigenSolver<Matrix> z(s.z.matrix());
    int plus = 0, minus = 0;
    for (double v : z.eigenvalues()) {
        plus += v == 1.0;
        minus += v == -1.0;
    }
    CHECK(plus == spec.fock_dim());
    CHECK(minus == spec.fock_dim());
}

TEST_CASE("canonical commutator below the truncation edge") {
    const HilbertSpec spec = build_space(10);
    const Matrix c = commutator(annihilation(spec), creation(spec)).matrix();
    for (int n = 0; n + 1 < spec.fock_dim(); ++n) {
        for (AtomLevel s : {AtomLevel::Excited, AtomLevel::Ground}) {
            const Index k = spec.index(n, s);
            CHECK(std::abs(c(k, k) - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("number expectation") {
    const HilbertSpec spec = build_space(6);
    CHECK(expectation(number(spec), basis_state(spec, 3, AtomLevel::Ground)).real() ==
          doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("displacement") {
    SUBCASE("zero amplitude is the identity") {
        const HilbertSpec spec = build_space(12);
        CHECK((displacement(spec, 0.0).matrix() - identity(spec).matrix()).norm() == 0.0);
    }
    SUBCASE("unitary") {
        const HilbertSpec spec = build_space(30);
        const Matrix d = displacement(spec, 1.0).matrix();
        const Matrix r = d.adjoint() * d - Matrix::Identity(spec.dim(), spec.dim());
        CHECK(r.cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("coherent amplitudes") {
        const HilbertSpec spec = build_space(30);
        const Vector coh = displacement(spec, 0.5).matrix() * basis_state(spec, 0, AtomLevel::Ground);
        for (int n = 0; n <= 5; ++n) {
            const cplx amp = coh(spec.index(n, AtomLevel::Ground));
            CHECK(std::abs(amp - oracle::coherent_amplitude(0.5, n)) < 1e-10);
        }
    }
    SUBCASE("inverse within the guideline") {
        const HilbertSpec spec = build_space(20);
        const double alpha = 0.999 * std::sqrt(20.0 * kDisplacementSafety);
        CHECK(displacement_within_truncation(spec, alpha));
        CHECK_FALSE(displacement_within_truncation(spec, alpha * 1.02));
        const Matrix prod = displacement(spec, alpha).matrix() * displacement(spec, -alpha).matrix();
        CHECK((prod - Matrix::Identity(spec.dim(), spec.dim())).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("operators on different spaces do not mix") {
    CHECK_THROWS_AS(annihilation(build_space(3)) + annihilation(build_space(4)), SpecMismatch);
    CHECK_THROWS_AS(multiply(identity(build_space(3)), identity(build_space(4))), SpecMismatch);
}

}
