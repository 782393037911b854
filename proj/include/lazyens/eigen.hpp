#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lazyens/errors.hpp"
#include "lazyens/matrix.hpp"

namespace lazyens {

struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // unitary, eigenvectors in columns

    std::size_t dim() const noexcept { return eigenvectors.dim(); }

    /// U diag(λ) U†
    ComplexMatrix reconstruct() const {
        const std::size_t n = dim();
        ComplexMatrix out(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Complex s = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    s += eigenvectors(i, k) * eigenvalues[k] * std::conj(eigenvectors(j, k));
                out(i, j) = s;
            }
        return out;
    }
};

struct EighOptions {
    double tol = 1e-14;   // stop when off-diagonal norm <= tol * max(1, ||A||_F)
    int max_sweeps = 60;  // a Hermitian input converges in far fewer
};

namespace detail {

inline double offdiag_norm(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each pivot (p,q) is annihilated by the unitary J embedding the 2x2 block
/// [[c e^{iθ}, s e^{iθ}], [-s, c]], where e^{iθ} is the phase of a_pq and
/// (c,s) is the classical symmetric Jacobi rotation for the phase-stripped
/// real block. A <- J† A J, V <- V J. Quadratic convergence once the
/// off-diagonal mass is small; unconditionally stable.
inline SpectralDecomposition eigh(const HermitianMatrix& m, const EighOptions& opts = {}) {
    const std::size_t n = m.dim();
    ComplexMatrix a = m.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double stop = opts.tol * std::max(1.0, a.frobenius_norm());

    bool converged = detail::offdiag_norm(a) <= stop;
    for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                const Complex phase = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // tan of the rotation angle: smaller root of t^2 + 2τt - 1 = 0
                const double tau = (aqq - app) / (2.0 * r);
                double t;
                if (std::isinf(tau)) {
                    t = 0.0;
                } else {
                    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex jpp = c * phase, jpq = s * phase;  // J columns p,q in rows p,q
                const Complex jqp = -s, jqq = c;

                // A <- J† A J (rows then columns), V <- V J
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex xp = a(p, j), xq = a(q, j);
                    a(p, j) = std::conj(jpp) * xp + std::conj(jqp) * xq;
                    a(q, j) = std::conj(jpq) * xp + std::conj(jqq) * xq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex xp = a(i, p), xq = a(i, q);
                    a(i, p) = xp * jpp + xq * jqp;
                    a(i, q) = xp * jpq + xq * jqq;
                    const Complex vp = v(i, p), vq = v(i, q);
                    v(i, p) = vp * jpp + vq * jqp;
                    v(i, q) = vp * jpq + vq * jqq;
                }
                // annihilated by construction; clear roundoff residue
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);
            }
        }
        converged = detail::offdiag_norm(a) <= stop;
    }
    if (!converged)
        throw Error(ErrorCode::no_convergence,
                    "Jacobi eigensolver did not converge in " +
                        std::to_string(opts.max_sweeps) + " sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const double di = a(i, i).real(), dj = a(j, j).real();
        if (di != dj) return di < dj;
        return i < j;  // deterministic tie-breaking
    });

    SpectralDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

}  // namespace lazyens
