#include "posetlim/poset.hpp"

#include <algorithm>
#include <numeric>

namespace posetlim {

bool Digraph::is_simple() const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        if (adj_.get(i, i)) return false;
        for (int j = i + 1; j < n; ++j)
            if (adj_.get(i, j) && adj_.get(j, i)) return false;
    }
    return true;
}

Poset Poset::chain(int n) {
    if (n < 1) throw SizeError("poset needs at least one element");
    BitMatrix rel(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) rel.set(i, j);
    return poset_from_matrix_unchecked(std::move(rel));
}

Digraph Poset::as_digraph() const {
    Digraph g(size());
    g.adj() = rel_;
    return g;
}

bool is_valid_order(const BitMatrix& rel) {
    const int n = rel.size();
    for (int i = 0; i < n; ++i) {
        if (rel.get(i, i)) return false;
        for (int j = i + 1; j < n; ++j)
            if (rel.get(i, j) && rel.get(j, i)) return false;
    }
    // transitive: successors of every successor of i are successors of i
    for (int i = 0; i < n; ++i) {
        bool ok = true;
        rel.for_each_in_row(i, [&](int j) {
            if (ok && !rel.row_subset(j, i)) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

Poset poset_from_matrix(BitMatrix rel) {
    if (!is_valid_order(rel))
        throw NotAPosetError("relation matrix is not a strict partial order");
    return Poset(std::move(rel), Poset::Unchecked{});
}

Poset poset_from_matrix_unchecked(BitMatrix rel) {
    return Poset(std::move(rel), Poset::Unchecked{});
}

Poset build_poset(int n, const std::vector<std::pair<int, int>>& pairs, ClosurePolicy policy) {
    if (n < 1) throw SizeError("poset needs at least one element");
    BitMatrix rel(n);
    for (auto [i, j] : pairs) {
        if (i < 1 || i > n || j < 1 || j > n)
            throw ParameterRangeError("relation label out of range 1..n");
        if (i == j) throw ParameterRangeError("strict relation cannot relate a label to itself");
        rel.set(i - 1, j - 1);
    }
    BitMatrix closed = rel;
    closed.transitive_close();
    if (closed.any_diagonal())
        throw CycleError("relations contain a directed cycle");
    if (policy == ClosurePolicy::RequireClosed && !(closed == rel))
        throw NotClosedError("relations are not transitively closed");
    return poset_from_matrix_unchecked(std::move(closed));
}

std::string witness_kind_name(WitnessKind k) {
    switch (k) {
        case WitnessKind::C1: return "C1";
        case WitnessKind::C2: return "C2";
        case WitnessKind::C3: return "C3";
        case WitnessKind::P2: return "P2";
    }
    return "?";
}

std::string ClassifyResult::to_string() const {
    if (is_poset) return "POSET";
    std::string s = "NOT-POSET witness=" + witness_kind_name(*witness) + " vertices=";
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(vertices[i]);
    }
    return s;
}

ClassifyResult classify_digraph(const Digraph& g) {
    const int n = g.size();
    ClassifyResult out;
    // loops
    for (int i = 1; i <= n; ++i) {
        if (g.edge(i, i)) {
            out.witness = WitnessKind::C1;
            out.vertices = {i};
            return out;
        }
    }
    // double edges
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (g.edge(i, j) && g.edge(j, i)) {
                out.witness = WitnessKind::C2;
                out.vertices = {i, j};
                return out;
            }
    // with no loop or double edge, a failure of transitivity x->y->z, not x->z
    // leaves exactly two possible induced subgraphs on {x,y,z}
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y) {
            if (y == x || !g.edge(x, y)) continue;
            for (int z = 1; z <= n; ++z) {
                if (z == x || z == y) continue;
                if (g.edge(y, z) && !g.edge(x, z)) {
                    out.witness = g.edge(z, x) ? WitnessKind::C3 : WitnessKind::P2;
                    out.vertices = {x, y, z};
                    return out;
                }
            }
        }
    out.is_poset = true;
    return out;
}

Poset restrict_to(const Poset& p, std::vector<int> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (labels.empty()) throw EmptySubsetError("restriction to an empty label set");
    for (int l : labels)
        if (l < 1 || l > p.size()) throw ParameterRangeError("restriction label out of range");
    const int k = int(labels.size());
    BitMatrix rel(k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (a != b && p.less(labels[a], labels[b])) rel.set(a, b);
    return poset_from_matrix_unchecked(std::move(rel));
}

Poset random_relabel(const Poset& p, Rng& rng) {
    const int n = p.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm.begin(), perm.end());
    BitMatrix rel(n);
    for (int i = 0; i < n; ++i)
        p.rel().for_each_in_row(i, [&](int j) { rel.set(perm[i], perm[j]); });
    return poset_from_matrix_unchecked(std::move(rel));
}

Poset disjoint_union(const Poset& q1, const Poset& q2) {
    const int n1 = q1.size(), n2 = q2.size();
    BitMatrix rel(n1 + n2);
    for (int i = 0; i < n1; ++i)
        q1.rel().for_each_in_row(i, [&](int j) { rel.set(i, j); });
    for (int i = 0; i < n2; ++i)
        q2.rel().for_each_in_row(i, [&](int j) { rel.set(n1 + i, n1 + j); });
    return poset_from_matrix_unchecked(std::move(rel));
}

static void check_same_size(const Poset& q, const Poset& p) {
    if (q.size() != p.size())
        throw SizeMismatchError("ground sets differ in size");
}

bool is_subposet(const Poset& q, const Poset& p) {
    check_same_size(q, p);
    for (int i = 0; i < q.size(); ++i)
        if (!q.rel().row_subset_of(p.rel(), i)) return false;
    return true;
}

bool is_induced_equal(const Poset& q, const Poset& p) {
    check_same_size(q, p);
    return q.rel() == p.rel();
}

std::vector<Poset> enumerate_extensions(const Poset& q) {
    const int n = q.size();
    std::vector<std::pair<int, int>> free_pairs; // 0-based, i < j, unrelated in q
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!q.rel().get(i, j) && !q.rel().get(j, i)) free_pairs.emplace_back(i, j);

    std::vector<Poset> out;
    BitMatrix rel = q.rel();
    // states per free pair: unrelated, i<j, j<i
    auto rec = [&](auto&& self, std::size_t idx) -> void {
        if (idx == free_pairs.size()) {
            if (is_valid_order(rel)) out.push_back(poset_from_matrix_unchecked(rel));
            return;
        }
        auto [i, j] = free_pairs[idx];
        self(self, idx + 1);
        rel.set(i, j);
        self(self, idx + 1);
        rel.set(i, j, false);
        rel.set(j, i);
        self(self, idx + 1);
        rel.set(j, i, false);
    };
    rec(rec, 0);
    return out;
}

std::vector<Poset> enumerate_all_posets(int n) {
    return enumerate_extensions(Poset(n));
}

bool are_isomorphic(const Poset& q1, const Poset& q2) {
    const int n = q1.size();
    if (n != q2.size()) return false;
    if (q1.relation_count() != q2.relation_count()) return false;

    auto degrees = [](const Poset& p) {
        const int n = p.size();
        BitMatrix t = p.rel().transposed();
        std::vector<std::pair<int, int>> d(n);
        for (int i = 0; i < n; ++i) d[i] = {p.rel().row_count(i), t.row_count(i)};
        return d;
    };
    std::vector<std::pair<int, int>> d1 = degrees(q1), d2 = degrees(q2);
    {
        auto s1 = d1, s2 = d2;
        std::sort(s1.begin(), s1.end());
        std::sort(s2.begin(), s2.end());
        if (s1 != s2) return false;
    }

    std::vector<int> img(n, -1);
    std::vector<bool> used(n, false);
    auto rec = [&](auto&& self, int v) -> bool {
        if (v == n) return true;
        for (int w = 0; w < n; ++w) {
            if (used[w] || d1[v] != d2[w]) continue;
            bool ok = true;
            for (int u = 0; u < v && ok; ++u) {
                if (q1.rel().get(u, v) != q2.rel().get(img[u], w)) ok = false;
                if (ok && q1.rel().get(v, u) != q2.rel().get(w, img[u])) ok = false;
            }
            if (!ok) continue;
            img[v] = w;
            used[w] = true;
            if (self(self, v + 1)) return true;
            used[w] = false;
            img[v] = -1;
        }
        return false;
    };
    return rec(rec, 0);
}

int comparable_count(const Poset& q) {
    const int n = q.size();
    BitMatrix t = q.rel().transposed();
    int c = 0;
    for (int i = 0; i < n; ++i)
        if (q.rel().row_count(i) > 0 || t.row_count(i) > 0) ++c;
    return c;
}

std::vector<std::pair<int, int>> transitive_reduction(const Poset& p) {
    const int n = p.size();
    BitMatrix pred = p.rel().transposed();
    std::vector<std::pair<int, int>> covers;
    for (int i = 0; i < n; ++i) {
        p.rel().for_each_in_row(i, [&](int j) {
            // cover pair iff no k with i < k < j
            if (!p.rel().rows_intersect(pred, i, j)) covers.emplace_back(i + 1, j + 1);
        });
    }
    return covers;
}

} // namespace posetlim
