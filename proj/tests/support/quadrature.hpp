#pragma once

// Deterministic quadrature oracles for the simplex integrals. Kept
// independent of the divided-difference evaluation path on purpose: these
// integrate the defining expressions directly.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace testsupport {

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Nodes by Newton iteration on the Legendre recurrence.
inline GaussLegendre gauss_legendre(int npts) {
    GaussLegendre gl{std::vector<double>(npts), std::vector<double>(npts)};
    for (int i = 0; i < npts; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (npts + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= npts; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = npts * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        gl.nodes[i] = t;
        gl.weights[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return gl;
}

template <class F>
double integrate(F&& f, double a, double b, int panels, const GaussLegendre& gl) {
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (std::size_t k = 0; k < gl.nodes.size(); ++k)
            total += gl.weights[k] * f(lo + 0.5 * h * (gl.nodes[k] + 1.0));
    }
    return total * 0.5 * h;
}

// E[g(t1, 1-t1)] under the uniform probability measure on the 1-simplex,
// refined until two consecutive panel counts agree to rel_tol.
template <class F>
double simplex2_average(F&& g, double rel_tol = 1e-13) {
    const GaussLegendre gl = gauss_legendre(24);
    const auto f = [&](double t) { return g(t, 1.0 - t); };
    double prev = integrate(f, 0.0, 1.0, 1, gl);
    for (int panels = 2; panels <= 512; panels *= 2) {
        const double next = integrate(f, 0.0, 1.0, panels, gl);
        if (std::abs(next - prev) <= rel_tol * std::max(1.0, std::abs(next))) return next;
        prev = next;
    }
    throw std::runtime_error("simplex2_average did not converge");
}

// E[g(t1, t2, 1-t1-t2)] under the uniform probability measure on the
// 2-simplex: density 2 on the triangle t1, t2 >= 0, t1 + t2 <= 1.
template <class F>
double simplex3_average(F&& g, double rel_tol = 1e-12) {
    const GaussLegendre gl = gauss_legendre(24);
    const auto run = [&](int panels) {
        const auto outer = [&](double t1) {
            const auto inner = [&](double t2) { return g(t1, t2, 1.0 - t1 - t2); };
            if (t1 >= 1.0) return 0.0;
            return integrate(inner, 0.0, 1.0 - t1, panels, gl);
        };
        return 2.0 * integrate(outer, 0.0, 1.0, panels, gl);
    };
    double prev = run(1);
    for (int panels = 2; panels <= 64; panels *= 2) {
        const double next = run(panels);
        if (std::abs(next - prev) <= rel_tol * std::max(1.0, std::abs(next))) return next;
        prev = next;
    }
    throw std::runtime_error("simplex3_average did not converge");
}

}  // namespace testsupport
