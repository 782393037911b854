#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lazyens/divided_difference.hpp"
#include "lazyens/errors.hpp"

namespace lazyens {

using EigenvalueVector = std::vector<double>;
using RealMatrix = std::vector<std::vector<double>>;

/// Moment specification E[t_{i_1}···t_{i_k} e^{-b·t}] over the uniform
/// simplex law, order k ≤ 2 (repeated index squares the coordinate). The
/// node multiset is -b plus one extra copy of -b[i] per index, so the
/// multiplicities sum to n + order; the value is a confluent divided
/// difference of exp times exact combinatorial factors fixed against the
/// quadrature oracles in the test suite.
struct SimplexMoment {
    std::vector<double> tilt;           // b
    std::vector<std::size_t> indices;   // empty, {i}, or {i,j}

    double evaluate() const {
        const std::size_t n = tilt.size();
        const std::size_t order = indices.size();
        if (order > 2) throw Error(ErrorCode::bad_input, "moment order must be <= 2");
        std::vector<double> nodes;
        nodes.reserve(n + order);
        for (double v : tilt) nodes.push_back(-v);
        double log_factor = 0.0;
        for (std::size_t i : indices) {
            if (i >= n) throw Error(ErrorCode::bad_input, "moment index out of range");
            nodes.push_back(-tilt[i]);
        }
        // E[t^m e^{-b·t}] = (Π m_k!) (n-1)!/(n+order-1)! · K(nodes) with
        // K the simplex average of exp; Π m_k! is 2 only for a squared index
        if (order >= 1) log_factor -= std::log(static_cast<double>(n));
        if (order == 2) {
            log_factor -= std::log(static_cast<double>(n + 1));
            if (indices[0] == indices[1]) log_factor += std::log(2.0);
        }
        return std::exp(log_simplex_exp_average(nodes) + log_factor);
    }
};

/// log Z(b), where Z(b) is the average of e^{-b·t} over the simplex law
/// induced by t_k = |φ_k|² under the normalized unitary-invariant measure on
/// the unit sphere. Z(0) = 1 by that normalization. Shift covariance:
/// log Z(b + c·1) = log Z(b) - c.
inline double log_partition(std::span<const double> b) {
    std::vector<double> nodes(b.begin(), b.end());
    for (double& v : nodes) v = -v;
    return log_simplex_exp_average(nodes);
}

namespace detail {

inline std::vector<double> gradient_given_logz(std::span<const double> b, double logz) {
    const std::size_t n = b.size();
    std::vector<double> nodes(n + 1);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = -b[i];
    std::vector<double> g(n);
    const double log_n = std::log(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        nodes[n] = -b[k];
        g[k] = std::exp(log_simplex_exp_average(nodes) - log_n - logz);
    }
    return g;
}

inline RealMatrix hessian_given(std::span<const double> b, double logz,
                                std::span<const double> g) {
    const std::size_t n = b.size();
    std::vector<double> nodes(n + 2);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = -b[i];
    const double log_pair = std::log(static_cast<double>(n)) +
                            std::log(static_cast<double>(n + 1));
    RealMatrix h(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            nodes[n] = -b[i];
            nodes[n + 1] = -b[j];
            double second = std::exp(log_simplex_exp_average(nodes) - log_pair - logz);
            if (i == j) second *= 2.0;
            const double cov = second - g[i] * g[j];
            h[i][j] = cov;
            h[j][i] = cov;
        }
    }
    return h;
}

}  // namespace detail

/// Eigenvalues of the ensemble average for diagonal parameter b:
/// g_k = E[t_k e^{-b·t}] / Z(b). All g_k ∈ (0,1) and Σ g_k = 1; note that
/// the raw derivative is ∂ log Z/∂b_k = -g_k.
inline std::vector<double> partition_gradient(std::span<const double> b) {
    return detail::gradient_given_logz(b, log_partition(b));
}

/// Hessian of log Z: the covariance matrix of t under the tilted simplex
/// law. Symmetric, positive semidefinite with null direction (1,...,1).
inline RealMatrix partition_hessian(std::span<const double> b) {
    const double logz = log_partition(b);
    const std::vector<double> g = detail::gradient_given_logz(b, logz);
    return detail::hessian_given(b, logz, g);
}

struct PartitionValue {
    double log_z = 0.0;
    std::vector<double> gradient;          // the g_k above
    std::optional<RealMatrix> hessian;     // of log Z, when requested
};

inline PartitionValue evaluate_partition(std::span<const double> b, bool with_hessian = false) {
    PartitionValue out;
    out.log_z = log_partition(b);
    out.gradient = detail::gradient_given_logz(b, out.log_z);
    if (with_hessian) out.hessian = detail::hessian_given(b, out.log_z, out.gradient);
    return out;
}

}  // namespace lazyens
