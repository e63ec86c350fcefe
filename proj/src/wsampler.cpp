#include "posetlim/wsampler.hpp"

#include <cmath>
#include <vector>

namespace posetlim {

namespace {

// substream ids: points on even ids, pairs tagged in the high bit
std::uint64_t point_stream(int i) { return std::uint64_t(2) * std::uint64_t(i); }
std::uint64_t pair_stream(int i, int j) {
    return (std::uint64_t(1) << 63) | (std::uint64_t(std::uint32_t(i)) << 32) |
           std::uint64_t(std::uint32_t(j));
}

} // namespace

Poset sample_wposet(const Kernel& k, int n, std::uint64_t seed) {
    if (n < 1) throw SizeError("need at least one element");
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        Rng rng = Rng::substream(seed, point_stream(i));
        pts.push_back(k.sample(rng));
    }
    BitMatrix rel(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            if (i == j) continue;
            const double wij = k.w(pts[std::size_t(i - 1)], pts[std::size_t(j - 1)]);
            Rng rng = Rng::substream(seed, pair_stream(i, j));
            if (rng.u01() < wij) rel.set(i - 1, j - 1);
        }
    if (!is_valid_order(rel))
        throw NotAPosetError("sampled relation is not a partial order; kernel axioms violated");
    return poset_from_matrix_unchecked(std::move(rel));
}

Poset gnp_order(int n, double p, Rng& rng) {
    if (n < 1) throw SizeError("need at least one vertex");
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterRangeError("edge probability must lie in [0,1]");
    BitMatrix rel(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.u01() < p) rel.set(i, j);
    rel.transitive_close();
    // orientation by label is acyclic, so the closure is a strict order
    return poset_from_matrix_unchecked(std::move(rel));
}

LabelDistribution empirical_label_distribution(const Kernel& k, int n, std::uint64_t reps,
                                               std::uint64_t seed, McOptions opt) {
    if (reps < 1) throw ParameterRangeError("need at least one replicate");
    using Counts = std::map<std::string, std::uint64_t>;
    auto counts = mc_reduce<Counts>(
        seed, reps, Counts{},
        [&](Counts& c, std::uint64_t rep, Rng&) {
            // each replicate runs the sampler under its own derived seed
            const Poset p = sample_wposet(k, n, Rng::derive_seed(seed, rep));
            ++c[p.canonical_key()];
        },
        [](Counts& a, const Counts& b) {
            for (const auto& [key, cnt] : b) a[key] += cnt;
        },
        opt);
    LabelDistribution dist;
    dist.n = n;
    dist.counts = std::move(counts);
    dist.total = reps;
    return dist;
}

bool contains_on_block(const Poset& r, const Poset& q, int offset) {
    for (int i = 1; i <= q.size(); ++i) {
        bool ok = true;
        q.rel().for_each_in_row(i - 1, [&](int j) {
            if (!r.less(offset + i, offset + j + 1)) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

IndependenceReport independence_test(const Kernel& k, const Poset& q1, const Poset& q2,
                                     std::uint64_t reps, std::uint64_t seed, McOptions opt) {
    if (reps < 1) throw ParameterRangeError("need at least one replicate");
    const int n = q1.size() + q2.size();
    auto acc = mc_moments<3>(
        seed, reps,
        [&](std::uint64_t rep, Rng&) {
            const Poset r = sample_wposet(k, n, Rng::derive_seed(seed, rep));
            const double b = contains_on_block(r, q1, 0) ? 1.0 : 0.0;
            const double c = contains_on_block(r, q2, q1.size()) ? 1.0 : 0.0;
            return std::array<double, 3>{b * c, b, c};
        },
        opt);

    IndependenceReport rep;
    rep.joint = acc.estimate(0);
    rep.first = acc.estimate(1);
    rep.second = acc.estimate(2);
    const double bbar = acc.mean(1);
    const double cbar = acc.mean(2);
    rep.difference = acc.mean(0) - bbar * cbar;
    // delta method for mean(a) - mean(b)mean(c); gradient (1, -cbar, -bbar)
    const double n_d = double(acc.n);
    const double var =
        (acc.cov(0, 0) + cbar * cbar * acc.cov(1, 1) + bbar * bbar * acc.cov(2, 2) -
         2.0 * cbar * acc.cov(0, 1) - 2.0 * bbar * acc.cov(0, 2) +
         2.0 * bbar * cbar * acc.cov(1, 2)) /
        n_d;
    rep.combined_se = std::sqrt(std::max(0.0, var));
    rep.pass = std::abs(rep.difference) <= 4.0 * rep.combined_se;
    return rep;
}

} // namespace posetlim
