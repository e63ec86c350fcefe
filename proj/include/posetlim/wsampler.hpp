#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "posetlim/kernel.hpp"
#include "posetlim/mc.hpp"
#include "posetlim/poset.hpp"

namespace posetlim {

/// W-random poset on {1..n}: points X_i i.i.d. from mu, independent uniform
/// thresholds xi_ij for every ordered pair, and i < j iff xi_ij < w(X_i, X_j).
///
/// Draw layout: X_i comes from substream 2i of `seed` and xi_ij from the
/// pair substream of (i,j), evaluated points first and then pairs in
/// row-major order. Because every draw has its own substream, the first k
/// rows and columns of sample_wposet(W, n, seed) coincide bit-exactly with
/// sample_wposet(W, k, seed).
///
/// The output is validated; NotAPosetError signals a weight function that
/// does not satisfy the kernel axioms.
Poset sample_wposet(const Kernel& k, int n, std::uint64_t seed);

/// Random graph order: an Erdos-Renyi graph on {1..n} with edge probability
/// p, each edge directed from the smaller to the larger endpoint, then the
/// transitive closure. Always a valid poset.
Poset gnp_order(int n, double p, Rng& rng);

/// Frequencies of labelled posets among independent P(n,W) draws, keyed by
/// the canonical bytes of the relation matrix.
struct LabelDistribution {
    int n = 0;
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;

    double frequency(const std::string& key) const {
        const auto it = counts.find(key);
        return it == counts.end() ? 0.0 : double(it->second) / double(total);
    }
};

LabelDistribution empirical_label_distribution(const Kernel& k, int n, std::uint64_t reps,
                                               std::uint64_t seed, McOptions opt = {});

/// Does r contain q placed on the label block starting at offset (0-based)?
bool contains_on_block(const Poset& r, const Poset& q, int offset);

/// Estimates P(R contains Q1 and Q2 on disjoint blocks) against the product
/// of the one-block probabilities, all from the same replicate stream. The
/// combined standard error of the difference comes from the delta method
/// with full covariances.
struct IndependenceReport {
    DensityEstimate joint;  ///< P(R contains Q1 union Q2)
    DensityEstimate first;  ///< P(R contains Q1)
    DensityEstimate second; ///< P(R contains Q2)
    double difference = 0.0;
    double combined_se = 0.0;
    bool pass = false;
};

IndependenceReport independence_test(const Kernel& k, const Poset& q1, const Poset& q2,
                                     std::uint64_t reps, std::uint64_t seed, McOptions opt = {});

} // namespace posetlim
