#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lazyens/errors.hpp"

namespace lazyens {

/// Gibbs probabilities p_k ∝ e^{-beta A_k}, computed with the usual max-shift
/// so any finite beta is safe.
inline std::vector<double> gibbs_probs(std::span<const double> values, double beta) {
    if (values.empty()) throw Error(ErrorCode::bad_input, "empty value set");
    if (!std::isfinite(beta)) throw Error(ErrorCode::bad_input, "beta must be finite");
    std::vector<double> s(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k]))
            throw Error(ErrorCode::bad_input, "values must be finite");
        s[k] = -beta * values[k];
    }
    const double smax = *std::max_element(s.begin(), s.end());
    double z = 0.0;
    for (double& w : s) {
        w = std::exp(w - smax);
        z += w;
    }
    for (double& w : s) w /= z;
    return s;
}

struct GibbsDie {
    std::vector<double> values;
    double beta = 0.0;
    std::vector<double> probs;

    double mean() const {
        double m = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k) m += values[k] * probs[k];
        return m;
    }
};

namespace detail {

struct MeanVar {
    double mean;
    double var;
};

inline MeanVar die_mean_var(std::span<const double> values, double beta) {
    std::vector<double> p = gibbs_probs(values, beta);
    double m = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        m += values[k] * p[k];
        m2 += values[k] * values[k] * p[k];
    }
    return {m, std::max(0.0, m2 - m * m)};
}

}  // namespace detail

/// Solves Σ A_k e^{-βA_k} / Σ e^{-βA_k} = M for the temperature parameter β.
/// The mean is strictly decreasing in β, so a geometrically grown bracket
/// always exists for a mean strictly inside the hull of the values; inside
/// the bracket a Newton step is taken when it helps and bisection otherwise.
inline GibbsDie solve_beta(std::span<const double> values, double mean, double tol = 1e-12,
                           int max_iter = 200) {
    if (values.size() < 2) throw Error(ErrorCode::bad_input, "need at least two values");
    if (!std::isfinite(mean)) throw Error(ErrorCode::bad_input, "mean must be finite");
    const auto [vmin_it, vmax_it] = std::minmax_element(values.begin(), values.end());
    const double vmin = *vmin_it, vmax = *vmax_it;
    if (vmin == vmax) throw Error(ErrorCode::degenerate_values, "all values are equal");
    if (!(vmin < mean && mean < vmax))
        throw Error(ErrorCode::infeasible_mean,
                    "mean " + std::to_string(mean) + " outside the open interval (" +
                        std::to_string(vmin) + ", " + std::to_string(vmax) + ")");

    const auto f = [&](double beta) { return detail::die_mean_var(values, beta); };

    // f.mean decreasing: find lo with mean above target, hi with mean below
    double lo = -1.0, hi = 1.0;
    for (int grow = 0; f(lo).mean <= mean; ++grow) {
        if (grow > 60)
            throw Error(ErrorCode::infeasible_mean,
                        "mean too close to the value hull for a finite beta");
        lo *= 2.0;
    }
    for (int grow = 0; f(hi).mean >= mean; ++grow) {
        if (grow > 60)
            throw Error(ErrorCode::infeasible_mean,
                        "mean too close to the value hull for a finite beta");
        hi *= 2.0;
    }

    double beta = 0.5 * (lo + hi);
    for (int iter = 0; iter < max_iter; ++iter) {
        const auto mv = f(beta);
        const double resid = mv.mean - mean;
        if (std::abs(resid) <= tol) {
            GibbsDie die{std::vector<double>(values.begin(), values.end()), beta,
                         gibbs_probs(values, beta)};
            return die;
        }
        if (resid > 0.0)
            lo = beta;  // mean still too high, beta must grow
        else
            hi = beta;
        double next = beta + resid / mv.var;  // Newton: d(mean)/dβ = -var
        if (!(mv.var > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        beta = next;
    }
    throw Error(ErrorCode::no_convergence, "temperature equation not solved to tolerance");
}

/// -Σ p_k ln p_k in nats, with 0·ln 0 = 0.
inline double shannon_entropy(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

}  // namespace lazyens
