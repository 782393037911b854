#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lazyens/density.hpp"
#include "lazyens/eigen.hpp"
#include "lazyens/matrix.hpp"
#include "support/oracles.hpp"

using namespace lazyens;
using testsupport::eig2_closed;
using testsupport::eig3_closed;
using testsupport::random_hermitian;
using testsupport::random_unitary;

namespace {

double reconstruction_residual(const HermitianMatrix& m, const SpectralDecomposition& spec) {
    ComplexMatrix diff = spec.reconstruct();
    diff -= m.matrix();
    return diff.frobenius_norm();
}

}  // namespace

TEST_CASE("validate_density accepts the maximally mixed state") {
    ComplexMatrix m(2);
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    const DensityMatrix rho = validate_density(m);
    CHECK(rho.lambda_min() == Catch::Approx(0.5).margin(1e-14));
    CHECK(rho.eigenvalues().size() == 2);
}

TEST_CASE("validate_density rejects a zero eigenvalue as degenerate") {
    ComplexMatrix m(2);
    m(0, 0) = 1.0;
    try {
        validate_density(m);
        FAIL("expected degenerate error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::degenerate);
    }
}

TEST_CASE("validate_density rejects a non-unit trace") {
    ComplexMatrix m(2);
    m(0, 0) = 0.7;
    m(1, 1) = 0.4;
    try {
        validate_density(m);
        FAIL("expected trace error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::not_unit_trace);
    }
}

TEST_CASE("validate_density rejects non-Hermitian and negative inputs") {
    ComplexMatrix skew(2);
    skew(0, 1) = Complex(0.0, 1.0);
    skew(1, 0) = Complex(0.0, 1.0);  // conj would need -i
    try {
        validate_density(skew);
        FAIL("expected hermiticity error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::not_hermitian);
    }

    ComplexMatrix neg(2);
    neg(0, 0) = 1.2;
    neg(1, 1) = -0.2;
    try {
        validate_density(neg);
        FAIL("expected positivity error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::not_positive);
    }
}

TEST_CASE("eigh sorts a diagonal matrix and permutes the basis") {
    const std::vector<double> d{3.0, 1.0};
    const SpectralDecomposition spec = eigh(HermitianMatrix::diagonal(d));
    CHECK(spec.eigenvalues[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(spec.eigenvalues[1] == Catch::Approx(3.0).margin(1e-14));
    CHECK(std::abs(spec.eigenvectors(0, 1)) == Catch::Approx(1.0).margin(1e-14));
    CHECK(std::abs(spec.eigenvectors(1, 0)) == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("eigh handles the fully degenerate spectrum") {
    const HermitianMatrix id(ComplexMatrix::identity(5));
    const SpectralDecomposition spec = eigh(id);
    for (double lam : spec.eigenvalues) CHECK(lam == Catch::Approx(1.0).margin(1e-14));
    CHECK(reconstruction_residual(id, spec) <= 1e-10);
    CHECK(spec.eigenvectors.unitarity_defect() <= 1e-10);
}

TEST_CASE("eigh matches the characteristic-polynomial roots for n <= 3") {
    Xoshiro256PlusPlus rng(101);
    for (int rep = 0; rep < 20; ++rep) {
        const HermitianMatrix m2 = random_hermitian(2, rng);
        const std::vector<double> closed2 = eig2_closed(m2.matrix());
        const SpectralDecomposition spec2 = eigh(m2);
        for (int k = 0; k < 2; ++k)
            CHECK(spec2.eigenvalues[k] == Catch::Approx(closed2[k]).margin(1e-12));

        const HermitianMatrix m3 = random_hermitian(3, rng);
        const std::vector<double> closed3 = eig3_closed(m3.matrix());
        const SpectralDecomposition spec3 = eigh(m3);
        for (int k = 0; k < 3; ++k)
            CHECK(spec3.eigenvalues[k] == Catch::Approx(closed3[k]).margin(1e-10));
    }
}

TEST_CASE("eigh reconstruction and unitarity over random matrices") {
    Xoshiro256PlusPlus rng(202);
    for (std::size_t n : {1, 2, 5, 9, 16}) {
        const HermitianMatrix m = random_hermitian(n, rng, 3.0);
        const SpectralDecomposition spec = eigh(m);
        CHECK(std::is_sorted(spec.eigenvalues.begin(), spec.eigenvalues.end()));
        CHECK(reconstruction_residual(m, spec) <=
              1e-10 * std::max(1.0, m.frobenius_norm()));
        CHECK(spec.eigenvectors.unitarity_defect() <= 1e-10);
    }
}

TEST_CASE("conjugate by identity and by a permutation") {
    Xoshiro256PlusPlus rng(303);
    const HermitianMatrix b = random_hermitian(3, rng);
    const HermitianMatrix same = conjugate(b, ComplexMatrix::identity(3));
    ComplexMatrix diff = same.matrix() - b.matrix();
    CHECK(diff.frobenius_norm() <= 1e-12);

    ComplexMatrix swap(2);
    swap(0, 1) = 1.0;
    swap(1, 0) = 1.0;
    const HermitianMatrix diag = HermitianMatrix::diagonal(std::vector<double>{2.0, 7.0});
    const HermitianMatrix swapped = conjugate(diag, swap);
    CHECK(swapped(0, 0).real() == Catch::Approx(7.0));
    CHECK(swapped(1, 1).real() == Catch::Approx(2.0));
}

TEST_CASE("conjugation preserves eigenvalues") {
    Xoshiro256PlusPlus rng(404);
    for (int rep = 0; rep < 10; ++rep) {
        const HermitianMatrix m = random_hermitian(4, rng);
        const ComplexMatrix u = random_unitary(4, rng);
        const std::vector<double> before = eigh(m).eigenvalues;
        const std::vector<double> after = eigh(conjugate(m, u)).eigenvalues;
        for (int k = 0; k < 4; ++k)
            CHECK(after[k] == Catch::Approx(before[k]).margin(1e-9));
    }
}

TEST_CASE("conjugate rejects a non-unitary map") {
    const HermitianMatrix m = HermitianMatrix::diagonal(std::vector<double>{1.0, 2.0});
    ComplexMatrix not_u(2);
    not_u(0, 0) = 2.0;
    not_u(1, 1) = 1.0;
    try {
        conjugate(m, not_u);
        FAIL("expected not_unitary");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::not_unitary);
    }
}

TEST_CASE("validate_density accepts exactly the valid random constructions") {
    Xoshiro256PlusPlus rng(505);
    for (int rep = 0; rep < 10; ++rep) {
        // positive case: valid spectrum in a random basis
        const DensityMatrix rho = testsupport::random_density(4, 0.05, rng);
        CHECK(rho.lambda_min() >= 0.05 - 1e-12);
        double sum = 0.0;
        for (double lam : rho.eigenvalues()) sum += lam;
        CHECK(sum == Catch::Approx(1.0).margin(1e-10));

        // negative case: bump the trace off one
        ComplexMatrix off = rho.matrix().matrix();
        off(0, 0) += 0.01;
        CHECK_THROWS_AS(validate_density(off), Error);
    }
}
