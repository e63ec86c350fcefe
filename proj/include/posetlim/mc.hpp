#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "posetlim/rng.hpp"

namespace posetlim {

/// Monte-Carlo value with its standard error.
struct DensityEstimate {
    double value = 0.0;
    double se = 0.0; ///< sample standard deviation / sqrt(samples)
    std::uint64_t samples = 0;
};

struct McOptions {
    std::uint64_t chunk = std::uint64_t(1) << 14; ///< samples per work chunk
    int threads = 0;                              ///< 0: POSETLIM_THREADS env, else OpenMP default
};

/// Worker count honoring the POSETLIM_THREADS cap.
inline int effective_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("POSETLIM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return int(v);
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Chunked reduction driver.
///
/// Sample i draws from its own substream Rng::substream(seed, i), so the
/// per-sample values do not depend on the chunking at all; chunk partials
/// are merged in ascending chunk index, so the merged state is bit-identical
/// between the parallel and serial runners for a fixed plan (seed, samples,
/// chunk size).
///
/// step(State&, index, Rng&) accumulates one sample; merge(State&, const State&)
/// folds a chunk partial into the left argument.
template <class State, class Step, class Merge>
State mc_reduce(std::uint64_t seed, std::uint64_t samples, State init, Step&& step,
                Merge&& merge, McOptions opt = {}) {
    const std::uint64_t chunk = std::max<std::uint64_t>(1, opt.chunk);
    const std::uint64_t nchunks = samples == 0 ? 0 : (samples + chunk - 1) / chunk;
    std::vector<State> parts(nchunks, init);

    const int threads = effective_threads(opt.threads);
    (void)threads;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (std::int64_t c = 0; c < std::int64_t(nchunks); ++c) {
        const std::uint64_t lo = std::uint64_t(c) * chunk;
        const std::uint64_t hi = std::min(samples, lo + chunk);
        State& local = parts[std::size_t(c)];
        for (std::uint64_t i = lo; i < hi; ++i) {
            Rng rng = Rng::substream(seed, i);
            step(local, i, rng);
        }
    }

    State out = std::move(init);
    for (auto& p : parts) merge(out, p);
    return out;
}

/// Serial reference for mc_reduce: identical plan and merge order, no OpenMP.
/// init must be the empty accumulator; chunk-local states start as copies of it.
template <class State, class Step, class Merge>
State mc_reduce_serial(std::uint64_t seed, std::uint64_t samples, State init, Step&& step,
                       Merge&& merge, McOptions opt = {}) {
    const std::uint64_t chunk = std::max<std::uint64_t>(1, opt.chunk);
    State out = init;
    for (std::uint64_t lo = 0; lo < samples; lo += chunk) {
        const std::uint64_t hi = std::min(samples, lo + chunk);
        State local = init;
        for (std::uint64_t i = lo; i < hi; ++i) {
            Rng rng = Rng::substream(seed, i);
            step(local, i, rng);
        }
        merge(out, local);
    }
    return out;
}

/// Running sums for a K-component sample with cross products, enough for
/// means, variances and covariances of the component means.
template <int K>
struct MomentAccum {
    std::array<double, K> sum{};
    std::array<std::array<double, K>, K> cross{};
    std::uint64_t n = 0;

    void add(const std::array<double, K>& v) {
        for (int a = 0; a < K; ++a) {
            sum[a] += v[a];
            for (int b = a; b < K; ++b) cross[a][b] += v[a] * v[b];
        }
        ++n;
    }

    void merge(const MomentAccum& other) {
        for (int a = 0; a < K; ++a) {
            sum[a] += other.sum[a];
            for (int b = a; b < K; ++b) cross[a][b] += other.cross[a][b];
        }
        n += other.n;
    }

    double mean(int a) const { return n ? sum[a] / double(n) : 0.0; }

    /// Sample covariance of components a and b.
    double cov(int a, int b) const {
        if (n < 2) return 0.0;
        if (a > b) std::swap(a, b);
        return (cross[a][b] - sum[a] * sum[b] / double(n)) / double(n - 1);
    }

    double var(int a) const { return std::max(0.0, cov(a, a)); }

    /// Standard error of the mean of component a.
    double se_mean(int a) const {
        return n ? std::sqrt(var(a) / double(n)) : 0.0;
    }

    DensityEstimate estimate(int a) const {
        return DensityEstimate{mean(a), se_mean(a), n};
    }
};

template <int K, class Fn>
MomentAccum<K> mc_moments(std::uint64_t seed, std::uint64_t samples, Fn&& fn, McOptions opt = {}) {
    return mc_reduce<MomentAccum<K>>(
        seed, samples, MomentAccum<K>{},
        [&fn](MomentAccum<K>& acc, std::uint64_t i, Rng& rng) { acc.add(fn(i, rng)); },
        [](MomentAccum<K>& a, const MomentAccum<K>& b) { a.merge(b); }, opt);
}

template <int K, class Fn>
MomentAccum<K> mc_moments_serial(std::uint64_t seed, std::uint64_t samples, Fn&& fn,
                                 McOptions opt = {}) {
    return mc_reduce_serial<MomentAccum<K>>(
        seed, samples, MomentAccum<K>{},
        [&fn](MomentAccum<K>& acc, std::uint64_t i, Rng& rng) { acc.add(fn(i, rng)); },
        [](MomentAccum<K>& a, const MomentAccum<K>& b) { a.merge(b); }, opt);
}

/// Mean and standard error of a scalar sample function fn(index, rng).
template <class Fn>
DensityEstimate mc_estimate(std::uint64_t seed, std::uint64_t samples, Fn&& fn,
                            McOptions opt = {}) {
    auto acc = mc_moments<1>(seed, samples,
                             [&fn](std::uint64_t i, Rng& rng) {
                                 return std::array<double, 1>{fn(i, rng)};
                             },
                             opt);
    return acc.estimate(0);
}

template <class Fn>
DensityEstimate mc_estimate_serial(std::uint64_t seed, std::uint64_t samples, Fn&& fn,
                                   McOptions opt = {}) {
    auto acc = mc_moments_serial<1>(seed, samples,
                                    [&fn](std::uint64_t i, Rng& rng) {
                                        return std::array<double, 1>{fn(i, rng)};
                                    },
                                    opt);
    return acc.estimate(0);
}

} // namespace posetlim
