#include "posetlim/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace posetlim {

namespace {

constexpr double kEnumBudget = 1e8;

/// Vertices of q in a linear extension order (predecessors first), so each
/// assignment only needs checking against already-placed vertices and only
/// in the forward direction for plain homomorphisms. Kahn's algorithm,
/// smallest label first.
std::vector<int> topo_order(const Poset& q) {
    const int n = q.size();
    std::vector<int> indeg(n, 0);
    BitMatrix pred = q.rel().transposed();
    for (int i = 0; i < n; ++i) indeg[i] = pred.row_count(i);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<bool> placed(n, false);
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int i = 0; i < n; ++i)
            if (!placed[i] && indeg[i] == 0) {
                pick = i;
                break;
            }
        placed[pick] = true;
        order.push_back(pick);
        q.rel().for_each_in_row(pick, [&](int j) { --indeg[j]; });
    }
    return order;
}

struct HomSearch {
    const Poset& q;
    const Poset& p;
    std::vector<int> order;         // q vertices, linear extension
    std::vector<int> img;           // image of q vertex, -1 if unassigned
    std::vector<bool> used;         // image occupancy (injective modes)
    std::uint64_t hits = 0;

    HomSearch(const Poset& q_, const Poset& p_)
        : q(q_), p(p_), order(topo_order(q_)), img(q_.size(), -1), used(p_.size(), false) {}

    // hom: only i <_Q j  =>  img(i) <_P img(j) must hold
    void count_hom(std::size_t depth) {
        if (depth == order.size()) {
            ++hits;
            return;
        }
        const int v = order[depth];
        for (int w = 0; w < p.size(); ++w) {
            bool ok = true;
            for (std::size_t d = 0; d < depth && ok; ++d) {
                const int u = order[d];
                if (q.rel().get(u, v) && !p.rel().get(img[u], w)) ok = false;
            }
            if (!ok) continue;
            img[v] = w;
            count_hom(depth + 1);
            img[v] = -1;
        }
    }

    template <bool Induced>
    void count_inj(std::size_t depth) {
        if (depth == order.size()) {
            ++hits;
            return;
        }
        const int v = order[depth];
        for (int w = 0; w < p.size(); ++w) {
            if (used[w]) continue;
            bool ok = true;
            for (std::size_t d = 0; d < depth && ok; ++d) {
                const int u = order[d];
                if constexpr (Induced) {
                    if (q.rel().get(u, v) != p.rel().get(img[u], w)) ok = false;
                    if (ok && q.rel().get(v, u) != p.rel().get(w, img[u])) ok = false;
                } else {
                    if (q.rel().get(u, v) && !p.rel().get(img[u], w)) ok = false;
                }
            }
            if (!ok) continue;
            img[v] = w;
            used[w] = true;
            count_inj<Induced>(depth + 1);
            used[w] = false;
            img[v] = -1;
        }
    }
};

double falling_factorial(int n, int k) {
    double f = 1.0;
    for (int i = 0; i < k; ++i) f *= double(n - i);
    return f;
}

void check_budget(double total) {
    if (total > kEnumBudget)
        throw BudgetExceededError("exact enumeration above the 1e8 assignment bound");
}

std::vector<std::pair<int, int>> related_pairs(const Poset& q) {
    std::vector<std::pair<int, int>> pairs; // 0-based ordered pairs with i <_Q j
    for (int i = 0; i < q.size(); ++i)
        q.rel().for_each_in_row(i, [&](int j) { pairs.emplace_back(i, j); });
    return pairs;
}

} // namespace

double t_exact(const Poset& q, const Poset& p) {
    // isolated vertices of q are unconstrained and cancel against the denominator
    std::vector<int> core;
    BitMatrix pred = q.rel().transposed();
    for (int i = 0; i < q.size(); ++i)
        if (q.rel().row_count(i) > 0 || pred.row_count(i) > 0) core.push_back(i + 1);
    if (core.empty()) return 1.0;

    const Poset qc = restrict_to(q, core);
    check_budget(std::pow(double(p.size()), double(qc.size())));
    HomSearch s(qc, p);
    s.count_hom(0);
    return double(s.hits) / std::pow(double(p.size()), double(qc.size()));
}

double t_inj_exact(const Poset& q, const Poset& p) {
    if (q.size() > p.size()) return 0.0;
    if (q.relation_count() == 0) return 1.0;
    check_budget(falling_factorial(p.size(), q.size()));
    HomSearch s(q, p);
    s.count_inj<false>(0);
    return double(s.hits) / falling_factorial(p.size(), q.size());
}

double t_ind_exact(const Poset& q, const Poset& p) {
    if (q.size() > p.size()) return 0.0;
    check_budget(falling_factorial(p.size(), q.size()));
    HomSearch s(q, p);
    s.count_inj<true>(0);
    return double(s.hits) / falling_factorial(p.size(), q.size());
}

DensityEstimate t_mc(const Poset& q, const Poset& p, std::uint64_t samples,
                     std::uint64_t seed, McOptions opt) {
    if (samples < 1) throw ParameterRangeError("t_mc needs at least one sample");
    const auto pairs = related_pairs(q);
    const int k = q.size();
    const int n = p.size();
    return mc_estimate(
        seed, samples,
        [&](std::uint64_t, Rng& rng) {
            int img[64];
            std::vector<int> big;
            int* v = img;
            if (k > 64) {
                big.resize(static_cast<std::size_t>(k));
                v = big.data();
            }
            for (int i = 0; i < k; ++i) v[i] = int(rng.below(std::uint64_t(n)));
            for (auto [a, b] : pairs)
                if (!p.rel().get(v[a], v[b])) return 0.0;
            return 1.0;
        },
        opt);
}

Poset sample_induced(const Poset& p, int k, SampleMode mode, Rng& rng) {
    const int n = p.size();
    if (k < 1) throw SizeError("sample size must be positive");
    std::vector<int> v(static_cast<std::size_t>(k));
    if (mode == SampleMode::WithReplacement) {
        for (int i = 0; i < k; ++i) v[i] = int(rng.below(std::uint64_t(n)));
    } else {
        if (k > n) throw SizeError("cannot sample more distinct vertices than the poset has");
        std::vector<int> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < k; ++i) {
            const int j = i + int(rng.below(std::uint64_t(n - i)));
            std::swap(pool[i], pool[j]);
            v[i] = pool[i];
        }
    }
    BitMatrix rel(k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (a != b && p.rel().get(v[a], v[b])) rel.set(a, b);
    return poset_from_matrix_unchecked(std::move(rel));
}

} // namespace posetlim
