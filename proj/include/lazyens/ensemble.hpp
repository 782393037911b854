#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "lazyens/density.hpp"
#include "lazyens/eigen.hpp"
#include "lazyens/errors.hpp"
#include "lazyens/matrix.hpp"
#include "lazyens/partition.hpp"

namespace lazyens {

/// The continuous ensemble with density μ(φ) = e^{-⟨φ|B|φ⟩} / Z(B) on unit
/// vectors. Carries the Hermitian parameter B, its spectral data, log Z(B),
/// and the absorbed parameter B' = B + log Z(B)·I for which Z(B') = 1.
/// μ is unchanged by B -> B + c·I, so B and B' describe the same ensemble.
class LazyEnsemble {
public:
    explicit LazyEnsemble(HermitianMatrix b)
        : parameter_(std::move(b)),
          spectral_(eigh(parameter_)),
          log_z_(log_partition(spectral_.eigenvalues)),
          absorbed_(parameter_.add_scaled_identity(log_z_)) {}

    static LazyEnsemble uniform(std::size_t n) {
        return LazyEnsemble(HermitianMatrix::zero(n));
    }

    std::size_t dim() const noexcept { return parameter_.dim(); }
    const HermitianMatrix& parameter() const noexcept { return parameter_; }
    const HermitianMatrix& absorbed_parameter() const noexcept { return absorbed_; }
    const SpectralDecomposition& spectral() const noexcept { return spectral_; }
    double log_z() const noexcept { return log_z_; }

private:
    HermitianMatrix parameter_;
    SpectralDecomposition spectral_;  // of B
    double log_z_;
    HermitianMatrix absorbed_;
};

/// ∫ μ(φ) |φ⟩⟨φ| dφ = U diag(g) U†, with g the partition gradient at B's
/// eigenvalues. Valid by construction: g is positive and sums to one.
inline DensityMatrix ensemble_average(const LazyEnsemble& ens) {
    std::vector<double> g = partition_gradient(ens.spectral().eigenvalues);
    // the gradient of an ascending b is descending; ascending order for the
    // DensityMatrix spectral convention
    const std::size_t n = g.size();
    std::vector<double> lam(n);
    ComplexMatrix basis(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = n - 1 - k;
        lam[k] = g[src];
        for (std::size_t i = 0; i < n; ++i) basis(i, k) = ens.spectral().eigenvectors(i, src);
    }
    return DensityMatrix::from_spectrum(std::move(lam), std::move(basis));
}

struct KLValue {
    double nats = 0.0;
};

/// Kullback–Leibler distance of the ensemble from the uniform (unit-density)
/// distribution: S(μ‖μ0) = E_μ[ln μ] = -Tr(Bρ) - log Z(B), where ρ is the
/// ensemble average. Nonnegative; zero exactly for the uniform ensemble; and
/// invariant under B -> B + c·I.
inline KLValue kl_from_uniform(const LazyEnsemble& ens, const DensityMatrix& rho,
                               double match_tol = 1e-6) {
    if (rho.dim() != ens.dim()) throw Error(ErrorCode::bad_input, "dimension mismatch");
    ComplexMatrix diff = ensemble_average(ens).matrix().matrix() - rho.matrix().matrix();
    const double mismatch = diff.frobenius_norm();
    if (mismatch > match_tol)
        throw Error(ErrorCode::mismatched_state,
                    "rho is not the ensemble average (Frobenius mismatch " +
                        std::to_string(mismatch) + ")");
    const double kl = -ens.parameter().trace_product(rho.matrix()) - ens.log_z();
    return KLValue{kl};
}

/// The dual functional Z∞(Y) = ∫ e^{⟨φ|Y|φ⟩} dφ - Tr(Yρ) on the reduced
/// space: y holds Y's eigenvalues and lambda holds ρ's spectrum (a
/// probability vector, aligned with y). Strictly convex; its unique minimum
/// is the ensemble parameter via B = -Y.
inline double dual_objective(std::span<const double> y, std::span<const double> lambda) {
    if (y.size() != lambda.size()) throw Error(ErrorCode::bad_input, "dimension mismatch");
    double linear = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) linear += y[k] * lambda[k];
    return std::exp(log_simplex_exp_average(y)) - linear;
}

}  // namespace lazyens
