#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "lazyens/ensemble.hpp"
#include "lazyens/errors.hpp"
#include "lazyens/matrix.hpp"
#include "lazyens/rng.hpp"

namespace lazyens {

struct PureState {
    std::vector<Complex> amplitudes;

    double norm_sq() const {
        double s = 0.0;
        for (const Complex& a : amplitudes) s += std::norm(a);
        return s;
    }
};

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

struct SampleOptions {
    bool keep_states = true;
    int threads = 0;  // 0: LAZYENS_THREADS env var, else 1
    std::size_t chunk_size = 8192;
};

/// A seeded batch of draws from an ensemble. Per-entry moment sums of the
/// projector average are kept (upper triangle) so empirical standard errors
/// are available without retaining the states; ⟨φ|B|φ⟩ sums feed the KL
/// estimator. Identical (seed, count, ensemble) reproduce identical batches.
struct SampleBatch {
    explicit SampleBatch(std::size_t n)
        : empirical_mean(HermitianMatrix::zero(n)),
          sum_re(n * n, 0.0),
          sum_re2(n * n, 0.0),
          sum_im(n * n, 0.0),
          sum_im2(n * n, 0.0) {}

    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::vector<double> tilt;  // eigenvalues of B (ascending), the sampled simplex tilt
    std::size_t proposals = 0;
    double accept_rate = 1.0;
    HermitianMatrix empirical_mean;  // (1/count) Σ |φ⟩⟨φ|
    std::vector<double> sum_re, sum_re2, sum_im, sum_im2;  // upper triangle incl diag
    double quad_sum = 0.0;     // Σ ⟨φ|B|φ⟩
    double quad_sum_sq = 0.0;  // Σ ⟨φ|B|φ⟩²
    std::vector<PureState> states;  // kept when requested

    std::size_t dim() const noexcept { return empirical_mean.dim(); }

    double mean_re(std::size_t i, std::size_t j) const {
        return sum_re[i * dim() + j] / static_cast<double>(count);
    }
    double mean_im(std::size_t i, std::size_t j) const {
        return sum_im[i * dim() + j] / static_cast<double>(count);
    }
    double se_re(std::size_t i, std::size_t j) const {
        return se_from_sums(sum_re[i * dim() + j], sum_re2[i * dim() + j]);
    }
    double se_im(std::size_t i, std::size_t j) const {
        return se_from_sums(sum_im[i * dim() + j], sum_im2[i * dim() + j]);
    }

private:
    double se_from_sums(double s, double s2) const {
        if (count < 2) return 0.0;
        const double cnt = static_cast<double>(count);
        const double var = std::max(0.0, (s2 - s * s / cnt) / (cnt - 1.0));
        return std::sqrt(var / cnt);
    }
};

/// Haar-uniform unit vector: n standard complex normals, normalized.
inline PureState sample_uniform_state(std::size_t n, Xoshiro256PlusPlus& rng) {
    if (n == 0) throw Error(ErrorCode::bad_input, "dimension must be >= 1");
    PureState state{std::vector<Complex>(n)};
    double nrm = 0.0;
    do {
        nrm = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto [x, y] = rng.normal_pair();
            state.amplitudes[k] = Complex(x, y);
            nrm += x * x + y * y;
        }
    } while (nrm == 0.0);
    const double inv = 1.0 / std::sqrt(nrm);
    for (Complex& a : state.amplitudes) a *= inv;
    return state;
}

inline PureState sample_uniform_state(std::size_t n, std::uint64_t seed) {
    Xoshiro256PlusPlus rng(seed);
    return sample_uniform_state(n, rng);
}

namespace detail {

struct ChunkAccum {
    explicit ChunkAccum(std::size_t n)
        : sum_re(n * n, 0.0), sum_re2(n * n, 0.0), sum_im(n * n, 0.0), sum_im2(n * n, 0.0) {}
    std::vector<double> sum_re, sum_re2, sum_im, sum_im2;
    double quad_sum = 0.0;
    double quad_sum_sq = 0.0;
    std::size_t proposals = 0;
};

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LAZYENS_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    return 1;
}

}  // namespace detail

/// Exact i.i.d. draws from μ(φ) = e^{-⟨φ|B|φ⟩}/Z(B).
///
/// In B's eigenbasis the moduli-squared t follow the tilted simplex law
/// ∝ e^{-b·t}: a uniform simplex draw (normalized exponentials) is accepted
/// with probability e^{-(b - min b)·t}, so the scheme is exact with
/// acceptance probability Z(b - min b) — never below e^{-spread(b)}. Phases
/// are independent uniform; amplitudes √t_k e^{iθ_k} are rotated into the
/// original basis.
///
/// Work is split into fixed-size chunks with per-chunk streams derived from
/// (seed, chunk index), and chunk results merge in index order, so output is
/// byte-identical for any thread count.
inline SampleBatch sample(const LazyEnsemble& ens, std::size_t count, std::uint64_t seed,
                          const SampleOptions& opts = {}) {
    if (count < 1) throw Error(ErrorCode::bad_input, "count must be >= 1");
    const std::size_t n = ens.dim();
    const std::vector<double>& b = ens.spectral().eigenvalues;
    const ComplexMatrix& u = ens.spectral().eigenvectors;

    std::vector<double> w(n);
    const double b_min = *std::min_element(b.begin(), b.end());
    for (std::size_t k = 0; k < n; ++k) w[k] = b[k] - b_min;

    const std::size_t chunk_size = std::max<std::size_t>(1, opts.chunk_size);
    const std::size_t n_chunks = (count + chunk_size - 1) / chunk_size;

    SampleBatch batch(n);
    batch.seed = seed;
    batch.count = count;
    batch.tilt = b;
    if (opts.keep_states) batch.states.resize(count);

    std::vector<detail::ChunkAccum> accums(n_chunks, detail::ChunkAccum(n));

    const auto run_chunk = [&](std::size_t c) {
        detail::ChunkAccum& acc = accums[c];
        Xoshiro256PlusPlus rng(Xoshiro256PlusPlus::stream_seed(seed, c));
        const std::size_t begin = c * chunk_size;
        const std::size_t end = std::min(count, begin + chunk_size);
        std::vector<double> t(n);
        std::vector<Complex> amp(n);
        for (std::size_t s = begin; s < end; ++s) {
            // rejection against the uniform simplex law
            while (true) {
                ++acc.proposals;
                double total = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    t[k] = rng.exponential();
                    total += t[k];
                }
                if (total <= 0.0) continue;
                double q = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    t[k] /= total;
                    q += w[k] * t[k];
                }
                if (rng.uniform01() < std::exp(-q)) break;
            }
            double quad = 0.0;  // ⟨φ|B|φ⟩ = Σ b_k t_k, exact in the eigenbasis
            for (std::size_t k = 0; k < n; ++k) quad += b[k] * t[k];
            acc.quad_sum += quad;
            acc.quad_sum_sq += quad * quad;

            for (std::size_t k = 0; k < n; ++k) {
                const double angle = 2.0 * std::numbers::pi * rng.uniform01();
                amp[k] = std::sqrt(t[k]) * Complex(std::cos(angle), std::sin(angle));
            }
            std::vector<Complex> phi = u * amp;

            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j) {
                    const Complex x = phi[i] * std::conj(phi[j]);
                    acc.sum_re[i * n + j] += x.real();
                    acc.sum_re2[i * n + j] += x.real() * x.real();
                    if (i != j) {
                        acc.sum_im[i * n + j] += x.imag();
                        acc.sum_im2[i * n + j] += x.imag() * x.imag();
                    }
                }
            if (opts.keep_states) batch.states[s] = PureState{std::move(phi)};
        }
    };

    const int threads = std::min<int>(detail::resolve_threads(opts.threads),
                                      static_cast<int>(n_chunks));
    if (threads <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int tid = 0; tid < threads; ++tid)
            pool.emplace_back([&, tid] {
                for (std::size_t c = tid; c < n_chunks; c += threads) run_chunk(c);
            });
        for (std::thread& th : pool) th.join();
    }

    // merge in chunk order: deterministic for any worker count
    for (const detail::ChunkAccum& acc : accums) {
        for (std::size_t idx = 0; idx < n * n; ++idx) {
            batch.sum_re[idx] += acc.sum_re[idx];
            batch.sum_re2[idx] += acc.sum_re2[idx];
            batch.sum_im[idx] += acc.sum_im[idx];
            batch.sum_im2[idx] += acc.sum_im2[idx];
        }
        batch.quad_sum += acc.quad_sum;
        batch.quad_sum_sq += acc.quad_sum_sq;
        batch.proposals += acc.proposals;
    }
    batch.accept_rate = static_cast<double>(count) / static_cast<double>(batch.proposals);

    ComplexMatrix mean(n);
    const double inv_count = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < n; ++i) {
        mean(i, i) = batch.sum_re[i * n + i] * inv_count;
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex v(batch.sum_re[i * n + j] * inv_count,
                            batch.sum_im[i * n + j] * inv_count);
            mean(i, j) = v;
            mean(j, i) = std::conj(v);
        }
    }
    batch.empirical_mean = HermitianMatrix(std::move(mean));
    return batch;
}

/// Sample mean and standard error of ln μ(φ) = -⟨φ|B|φ⟩ - log Z(B) over the
/// batch; for a batch drawn from `ens` this estimates the KL distance from
/// the uniform distribution.
inline MonteCarloEstimate estimate_kl(const LazyEnsemble& ens, const SampleBatch& batch) {
    if (batch.count < 1) throw Error(ErrorCode::bad_input, "empty batch");
    const double cnt = static_cast<double>(batch.count);
    const double mean_quad = batch.quad_sum / cnt;
    double se = 0.0;
    if (batch.count >= 2) {
        const double var =
            std::max(0.0, (batch.quad_sum_sq - batch.quad_sum * batch.quad_sum / cnt) /
                              (cnt - 1.0));
        se = std::sqrt(var / cnt);
    }
    return {-mean_quad - ens.log_z(), se};
}

/// Monte Carlo estimate of Z(b) = ∫ e^{-b·t(φ)} dφ, t_k = |φ_k|², by plain
/// averaging over uniform sphere draws. Independent of the divided-difference
/// evaluation path; used as its statistical oracle.
inline MonteCarloEstimate mc_partition_oracle(std::span<const double> b, std::size_t count,
                                              std::uint64_t seed,
                                              std::size_t chunk_size = 1 << 16) {
    if (count < 1) throw Error(ErrorCode::bad_input, "count must be >= 1");
    const std::size_t n = b.size();
    const std::size_t n_chunks = (count + chunk_size - 1) / chunk_size;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        Xoshiro256PlusPlus rng(Xoshiro256PlusPlus::stream_seed(seed, c));
        const std::size_t begin = c * chunk_size;
        const std::size_t end = std::min(count, begin + chunk_size);
        double chunk_sum = 0.0, chunk_sq = 0.0;
        for (std::size_t s = begin; s < end; ++s) {
            const PureState phi = sample_uniform_state(n, rng);
            double q = 0.0;
            for (std::size_t k = 0; k < n; ++k) q += b[k] * std::norm(phi.amplitudes[k]);
            const double x = std::exp(-q);
            chunk_sum += x;
            chunk_sq += x * x;
        }
        sum += chunk_sum;
        sum_sq += chunk_sq;
    }
    const double cnt = static_cast<double>(count);
    const double mean = sum / cnt;
    double se = 0.0;
    if (count >= 2) {
        const double var = std::max(0.0, (sum_sq - sum * sum / cnt) / (cnt - 1.0));
        se = std::sqrt(var / cnt);
    }
    return {mean, se};
}

/// Largest |z| over entrywise comparisons (real and imaginary parts, upper
/// triangle) between the batch's empirical mean and a reference matrix,
/// using the batch's own standard errors.
inline double max_entry_z(const SampleBatch& batch, const ComplexMatrix& reference) {
    if (reference.dim() != batch.dim())
        throw Error(ErrorCode::bad_input, "dimension mismatch");
    const std::size_t n = batch.dim();
    double worst = 0.0;
    const auto zscore = [](double diff, double se) {
        if (se > 0.0) return std::abs(diff) / se;
        return std::abs(diff) < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            worst = std::max(worst, zscore(batch.mean_re(i, j) - reference(i, j).real(),
                                           batch.se_re(i, j)));
            if (i != j)
                worst = std::max(worst, zscore(batch.mean_im(i, j) - reference(i, j).imag(),
                                               batch.se_im(i, j)));
        }
    return worst;
}

/// Two-sample version: largest |z| between the empirical means of two
/// batches with combined standard errors.
inline double max_two_sample_z(const SampleBatch& a, const SampleBatch& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::bad_input, "dimension mismatch");
    const std::size_t n = a.dim();
    double worst = 0.0;
    const auto zscore = [](double diff, double se) {
        if (se > 0.0) return std::abs(diff) / se;
        return std::abs(diff) < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double se_r = std::hypot(a.se_re(i, j), b.se_re(i, j));
            worst = std::max(worst, zscore(a.mean_re(i, j) - b.mean_re(i, j), se_r));
            if (i != j) {
                const double se_i = std::hypot(a.se_im(i, j), b.se_im(i, j));
                worst = std::max(worst, zscore(a.mean_im(i, j) - b.mean_im(i, j), se_i));
            }
        }
    return worst;
}

}  // namespace lazyens
