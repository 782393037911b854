#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "lazyens/density.hpp"
#include "lazyens/ensemble.hpp"
#include "lazyens/errors.hpp"
#include "lazyens/partition.hpp"

namespace lazyens {

struct SolveOptions {
    double tol = 1e-10;       // ∞-norm of the dual gradient in the reduced space
    int max_iter = 200;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    double degeneracy_floor = 1e-10;
    std::vector<double> initial_y;  // empty: start at y = 0
};

struct SolveReport {
    int iterations = 0;
    double grad_norm = std::numeric_limits<double>::infinity();
    double dual_value = 0.0;  // Z∞ at the final iterate
    bool converged = false;
    // spectrum of Y = -B and the existence bounds it must satisfy
    double y_min = 0.0;
    double y_max = 0.0;
    double spread_limit = 0.0;       // 2 / λ_min(ρ)
    bool bounds_sign_ok = false;     // y_min ≤ 0 ≤ y_max, slack 1e-9
    bool bounds_spread_ok = false;   // y_max - y_min ≤ spread_limit, slack 1e-9
};

struct SolveResult {
    LazyEnsemble ensemble;
    SolveReport report;
};

/// Raised when the Newton iteration hits its cap; carries the last iterate.
class SolveNoConvergence : public Error {
public:
    SolveNoConvergence(SolveResult partial, const std::string& message)
        : Error(ErrorCode::no_convergence, message), partial_(std::move(partial)) {}

    const SolveResult& partial() const noexcept { return partial_; }

private:
    SolveResult partial_;
};

namespace detail {

// Cholesky solve of the SPD system a x = rhs; nullopt when a pivot fails.
inline std::optional<std::vector<double>> cholesky_solve(RealMatrix a,
                                                         std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j][k] * a[j][k];
        if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
        a[j][j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
            a[i][j] = s / a[j][j];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = rhs[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i][k] * rhs[k];
        rhs[i] = s / a[i][i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = rhs[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a[k][ii] * rhs[k];
        rhs[ii] = s / a[ii][ii];
    }
    return rhs;
}

inline double dual_value_or_inf(const std::vector<double>& y,
                                const std::vector<double>& lambda) {
    double linear = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) linear += y[k] * lambda[k];
    try {
        return std::exp(log_simplex_exp_average(y)) - linear;
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();  // off the representable range
    }
}

}  // namespace detail

/// Finds the ensemble parameter B for a nondegenerate ρ: the unique minimum
/// of the strictly convex dual Z∞(Y) = ∫e^{⟨φ|Y|φ⟩}dφ - Tr(Yρ) satisfies
/// ∫e^{⟨φ|Y|φ⟩}|φ⟩⟨φ|dφ = ρ, and B = -Y.
///
/// The ensemble-average map commutes with unitary conjugation and the dual
/// is strictly convex, so the optimizer shares ρ's eigenbasis; the search
/// runs over Y's eigenvalues only (safeguarded Newton with backtracking,
/// started at y = 0) and B is reconstructed in ρ's basis. At the optimum
/// Z(B) = 1 automatically, so B coincides with its absorbed form up to the
/// solve tolerance.
inline SolveResult solve(const DensityMatrix& rho, const SolveOptions& opts = {}) {
    if (rho.lambda_min() <= opts.degeneracy_floor)
        throw Error(ErrorCode::degenerate,
                    "smallest eigenvalue " + std::to_string(rho.lambda_min()) +
                        " is at or below the degeneracy floor");
    if (!(opts.tol > 0.0)) throw Error(ErrorCode::bad_input, "tol must be positive");

    const std::vector<double>& lambda = rho.eigenvalues();
    const std::size_t n = lambda.size();

    std::vector<double> y(n, 0.0);
    if (!opts.initial_y.empty()) {
        if (opts.initial_y.size() != n)
            throw Error(ErrorCode::bad_input, "initial iterate has wrong dimension");
        y = opts.initial_y;
    }
    double value = detail::dual_value_or_inf(y, lambda);
    std::vector<double> grad(n);
    double grad_inf = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;

    std::vector<double> b(n);
    for (int iter = 0; iter <= opts.max_iter; ++iter) {
        iterations = iter;
        for (std::size_t k = 0; k < n; ++k) b[k] = -y[k];
        const PartitionValue part = evaluate_partition(b, /*with_hessian=*/true);
        const double z = std::exp(part.log_z);

        grad_inf = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            grad[k] = z * part.gradient[k] - lambda[k];
            grad_inf = std::max(grad_inf, std::abs(grad[k]));
        }
        if (grad_inf <= opts.tol) {
            converged = true;
            break;
        }
        if (iter == opts.max_iter) break;

        // Newton system (Z·S)Δ = -grad with S = Hess(logZ) + g gᵀ the second
        // moment matrix; gradient fallback when the factorization fails
        RealMatrix s = *part.hessian;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s[i][j] += part.gradient[i] * part.gradient[j];
        std::vector<double> rhs(n);
        for (std::size_t k = 0; k < n; ++k) rhs[k] = -grad[k] / z;
        std::optional<std::vector<double>> step = detail::cholesky_solve(std::move(s), rhs);

        // inside the quadratic basin the per-step decrease of the objective
        // falls below double resolution, so the Armijo test cannot certify
        // it; take the full Newton step there and let the gradient contract
        if (step && grad_inf <= 1e-6) {
            for (std::size_t k = 0; k < n; ++k) y[k] += (*step)[k];
            value = detail::dual_value_or_inf(y, lambda);
            continue;
        }

        bool accepted = false;
        const double slack = 4e-16 * std::max(1.0, std::abs(value));  // objective roundoff
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            std::vector<double> dir;
            if (attempt == 0 && step) {
                dir = *step;
            } else {
                dir.resize(n);
                for (std::size_t k = 0; k < n; ++k) dir[k] = -grad[k];
            }
            double slope = 0.0;
            for (std::size_t k = 0; k < n; ++k) slope += grad[k] * dir[k];
            if (!(slope < 0.0)) continue;

            double alpha = 1.0;
            std::vector<double> trial(n);
            while (alpha >= 1e-16) {
                for (std::size_t k = 0; k < n; ++k) trial[k] = y[k] + alpha * dir[k];
                const double trial_value = detail::dual_value_or_inf(trial, lambda);
                if (trial_value <= value + opts.armijo_c * alpha * slope + slack) {
                    y = trial;
                    value = trial_value;
                    accepted = true;
                    break;
                }
                alpha *= opts.backtrack;
            }
        }
        if (!accepted) break;  // stalled; reported as no convergence below
    }

    const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
    SolveReport report;
    report.iterations = iterations;
    report.grad_norm = grad_inf;
    report.dual_value = value;
    report.converged = converged;
    report.y_min = *ymin_it;
    report.y_max = *ymax_it;
    report.spread_limit = 2.0 / rho.lambda_min();
    report.bounds_sign_ok = (report.y_min <= 1e-9) && (report.y_max >= -1e-9);
    report.bounds_spread_ok = (report.y_max - report.y_min) <= report.spread_limit + 1e-9;

    // B = U diag(-y) U† in ρ's eigenbasis (the -y here are not sorted)
    const ComplexMatrix& u = rho.basis();
    ComplexMatrix b_raw(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += u(i, k) * (-y[k]) * std::conj(u(j, k));
            b_raw(i, j) = sum;
        }
    const double b_scale = std::max({1.0, std::abs(report.y_min), std::abs(report.y_max)});
    HermitianMatrix b_matrix(std::move(b_raw), 1e-10 * b_scale);
    SolveResult result{LazyEnsemble(std::move(b_matrix)), report};

    if (!converged)
        throw SolveNoConvergence(std::move(result),
                                 "dual gradient norm " + std::to_string(grad_inf) +
                                     " above tolerance after " +
                                     std::to_string(iterations) + " iterations");
    return result;
}

inline SolveResult solve(const DensityMatrix& rho, double tol, int max_iter = 200) {
    SolveOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    return solve(rho, opts);
}

}  // namespace lazyens
