#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lazyens/eigen.hpp"
#include "lazyens/errors.hpp"
#include "lazyens/matrix.hpp"

namespace lazyens {

struct DensityTolerances {
    double hermitian = 1e-12;
    double trace = 1e-10;
    double positivity = 1e-10;  // eigenvalues may undershoot zero by this much
    double degeneracy = 1e-10;  // smallest eigenvalue must exceed this
};

/// Validated density matrix: Hermitian, positive, unit trace, with its
/// spectral decomposition cached (eigenvalues ascending) and the smallest
/// eigenvalue exposed for the solver's nondegeneracy precondition.
class DensityMatrix {
public:
    std::size_t dim() const noexcept { return matrix_.dim(); }
    const HermitianMatrix& matrix() const noexcept { return matrix_; }
    const SpectralDecomposition& spectral() const noexcept { return spectral_; }
    const std::vector<double>& eigenvalues() const noexcept { return spectral_.eigenvalues; }
    const ComplexMatrix& basis() const noexcept { return spectral_.eigenvectors; }
    double lambda_min() const noexcept { return lambda_min_; }

    static DensityMatrix maximally_mixed(std::size_t n) {
        std::vector<double> lam(n, 1.0 / static_cast<double>(n));
        return from_spectrum(lam, ComplexMatrix::identity(n));
    }

    /// Trusted construction from spectral data known to be valid (ascending
    /// eigenvalues summing to one, unitary basis). Used where the result is
    /// valid by construction, e.g. ensemble averages.
    static DensityMatrix from_spectrum(std::vector<double> eigenvalues, ComplexMatrix basis) {
        SpectralDecomposition spec{std::move(eigenvalues), std::move(basis)};
        HermitianMatrix m(spec.reconstruct(), 1e-10);
        const double lmin = spec.eigenvalues.front();
        return DensityMatrix(std::move(m), std::move(spec), lmin);
    }

    friend DensityMatrix validate_density(const ComplexMatrix&, const DensityTolerances&);

private:
    DensityMatrix(HermitianMatrix m, SpectralDecomposition spec, double lmin)
        : matrix_(std::move(m)), spectral_(std::move(spec)), lambda_min_(lmin) {}

    HermitianMatrix matrix_;
    SpectralDecomposition spectral_;
    double lambda_min_;
};

/// Checks Hermiticity, unit trace, positivity and nondegeneracy, in that
/// order; error messages carry the offending quantity.
inline DensityMatrix validate_density(const ComplexMatrix& m,
                                      const DensityTolerances& tol = {}) {
    HermitianMatrix h(m, tol.hermitian);  // throws not_hermitian

    const double tr = h.trace_real();
    if (std::abs(tr - 1.0) > tol.trace)
        throw Error(ErrorCode::not_unit_trace, "trace = " + std::to_string(tr));

    SpectralDecomposition spec = eigh(h);
    const double lmin = spec.eigenvalues.front();
    if (lmin < -tol.positivity)
        throw Error(ErrorCode::not_positive,
                    "smallest eigenvalue = " + std::to_string(lmin));
    if (lmin <= tol.degeneracy)
        throw Error(ErrorCode::degenerate,
                    "smallest eigenvalue = " + std::to_string(lmin) +
                        " is at or below the degeneracy floor " +
                        std::to_string(tol.degeneracy));

    return DensityMatrix(std::move(h), std::move(spec), lmin);
}

inline DensityMatrix validate_density(const ComplexMatrix& m, double degeneracy_tol) {
    DensityTolerances tol;
    tol.degeneracy = degeneracy_tol;
    return validate_density(m, tol);
}

}  // namespace lazyens
