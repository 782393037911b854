#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "lazyens/errors.hpp"

namespace lazyens {

namespace detail {

// C = A*B for dense row-major upper-triangular m x m matrices; entries below
// the diagonal are never read or written.
inline void uppertri_multiply(std::size_t m, const std::vector<double>& a,
                              const std::vector<double>& b, std::vector<double>& c) {
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double s = 0.0;
            for (std::size_t k = i; k <= j; ++k) s += a[i * m + k] * b[k * m + j];
            c[i * m + j] = s;
        }
}

// Divided difference of exp over sorted nodes y (max = 0) via the classical
// recursion. Valid only when adjacent gaps exceed 1: each subtraction then
// loses at most a constant factor, and denominators are bounded below.
inline double log_dd_exp_separated(const std::vector<double>& y) {
    const std::size_t m = y.size();
    std::vector<double> f(m);
    for (std::size_t i = 0; i < m; ++i) f[i] = std::exp(y[i]);
    for (std::size_t len = 1; len < m; ++len)
        for (std::size_t i = 0; i + len < m; ++i)
            f[i] = (f[i + 1] - f[i]) / (y[i + len] - y[i]);
    return std::log(f[0]);
}

// Divided difference of exp over sorted nodes y (max = 0) as the corner entry
// of the exponential of the bidiagonal matrix J = diag(y) + superdiag(1,..,1)
// (Opitz). exp(J/2^σ) is summed by Taylor series after scaling the spread of
// y below θ, then squared σ times. All entries of exp(J/2^σ) are positive
// divided differences, so the squarings add nonnegative terms only; the
// Taylor stage has cancellation bounded by e^{2θ}. A running log scale keeps
// the squarings away from overflow/underflow.
inline double log_dd_exp_bidiagonal(const std::vector<double>& y) {
    const std::size_t m = y.size();
    const double spread = -y.front();
    constexpr double theta = 0.5;
    int sigma = 0;
    if (spread > theta) sigma = static_cast<int>(std::ceil(std::log2(spread / theta)));
    const double scale = std::ldexp(1.0, -sigma);

    std::vector<double> a(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        a[i * m + i] = y[i] * scale;
        if (i + 1 < m) a[i * m + i + 1] = scale;
    }

    std::vector<double> f(m * m, 0.0), p(m * m, 0.0), t(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        f[i * m + i] = 1.0;
        p[i * m + i] = 1.0;
    }
    // the corner entry first appears at order m-1; with the spread at most θ
    // the tail after 24 further terms is below θ^24/24! relative
    const int terms = static_cast<int>(m) + 24;
    for (int k = 1; k <= terms; ++k) {
        uppertri_multiply(m, p, a, t);
        const double inv_k = 1.0 / static_cast<double>(k);
        for (std::size_t idx = 0; idx < m * m; ++idx) {
            t[idx] *= inv_k;
            f[idx] += t[idx];
        }
        p.swap(t);
    }

    double log_scale = 0.0;
    for (int s = 0; s < sigma; ++s) {
        uppertri_multiply(m, f, f, t);
        f.swap(t);
        double mx = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) mx = std::max(mx, f[i * m + j]);
        if (!(mx > 0.0) || !std::isfinite(mx))
            throw Error(ErrorCode::bad_input, "node spread too large for divided difference");
        const double inv = 1.0 / mx;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) f[i * m + j] *= inv;
        log_scale = 2.0 * log_scale + std::log(mx);
    }

    const double corner = f[m - 1];  // row 0, column m-1
    if (!(corner > 0.0))
        throw Error(ErrorCode::bad_input, "node spread too large for divided difference");
    return log_scale + std::log(corner);
}

}  // namespace detail

/// log of the average of e^{x·t} over the uniform probability simplex
/// {t_k >= 0, Σ t_k = 1}, i.e. log((m-1)! · exp[x_1,...,x_m]) with exp[...]
/// the divided difference of the exponential over the nodes. This is the
/// moment kernel behind the partition function: the uniform measure on the
/// complex unit sphere pushes |φ_k|² forward to exactly this simplex law.
///
/// Nodes may repeat (confluent case) and appear in any order. The maximum
/// node is factored out before exponentiation, so the result is finite
/// whenever the node spread stays below roughly 700.
inline double log_simplex_exp_average(std::span<const double> nodes) {
    const std::size_t m = nodes.size();
    if (m == 0) throw Error(ErrorCode::bad_input, "at least one node required");
    for (double x : nodes)
        if (!std::isfinite(x)) throw Error(ErrorCode::bad_input, "nodes must be finite");
    if (m == 1) return nodes[0];

    std::vector<double> y(nodes.begin(), nodes.end());
    std::sort(y.begin(), y.end());
    const double shift = y.back();
    for (double& v : y) v -= shift;
    if (y.front() == 0.0) return shift;  // all nodes coincide

    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < m; ++i) min_gap = std::min(min_gap, y[i + 1] - y[i]);

    const double log_dd = (min_gap > 1.0) ? detail::log_dd_exp_separated(y)
                                          : detail::log_dd_exp_bidiagonal(y);
    const double out = shift + std::lgamma(static_cast<double>(m)) + log_dd;
    if (!std::isfinite(out))
        throw Error(ErrorCode::bad_input, "divided difference under/overflowed");
    return out;
}

/// Divided difference of e^x over the given nodes; repeated nodes take the
/// confluent limit (m coincident nodes a give e^a/(m-1)!).
inline double divided_diff_exp(std::span<const double> nodes) {
    return std::exp(log_simplex_exp_average(nodes) -
                    std::lgamma(static_cast<double>(nodes.size())));
}

}  // namespace lazyens
