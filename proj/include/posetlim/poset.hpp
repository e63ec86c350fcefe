#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "posetlim/bitmatrix.hpp"
#include "posetlim/errors.hpp"
#include "posetlim/rng.hpp"

namespace posetlim {

/// Directed graph on vertices 1..n; loops and double edges allowed.
class Digraph {
public:
    explicit Digraph(int n) : adj_(check_size(n)) {}

    int size() const { return adj_.size(); }
    /// Labels are 1-based.
    bool edge(int i, int j) const { return adj_.get(i - 1, j - 1); }
    void add_edge(int i, int j) { adj_.set(i - 1, j - 1); }
    int edge_count() const { return int(adj_.count()); }

    /// No loop and no double edge.
    bool is_simple() const;

    const BitMatrix& adj() const { return adj_; }
    BitMatrix& adj() { return adj_; }

private:
    static int check_size(int n) {
        if (n < 1) throw SizeError("digraph needs at least one vertex");
        return n;
    }
    BitMatrix adj_;
};

/// Finite labelled poset on ground set {1,...,n}. The relation matrix is
/// kept transitively closed so order queries are O(1).
class Poset {
public:
    /// The trivial poset E_n (no relations).
    explicit Poset(int n) : rel_(check_size(n)) {}

    /// The total order 1 < 2 < ... < n.
    static Poset chain(int n);

    int size() const { return rel_.size(); }
    /// Strict order query; labels are 1-based.
    bool less(int i, int j) const { return rel_.get(i - 1, j - 1); }
    /// 0-based relation matrix for tight loops.
    const BitMatrix& rel() const { return rel_; }

    int relation_count() const { return int(rel_.count()); }
    Digraph as_digraph() const;
    std::string canonical_key() const { return rel_.to_key(); }

    bool operator==(const Poset& other) const { return rel_ == other.rel_; }

private:
    struct Unchecked {};
    Poset(BitMatrix rel, Unchecked) : rel_(std::move(rel)) {}

    static int check_size(int n) {
        if (n < 1) throw SizeError("poset needs at least one element");
        return n;
    }

    BitMatrix rel_;

    friend Poset poset_from_matrix(BitMatrix rel);
    friend Poset poset_from_matrix_unchecked(BitMatrix rel);
};

/// Strict-partial-order axiom check: irreflexive, asymmetric, transitive.
bool is_valid_order(const BitMatrix& rel);

/// Wraps a relation matrix after validating the order axioms.
Poset poset_from_matrix(BitMatrix rel);
/// For internal construction sites that guarantee validity themselves.
Poset poset_from_matrix_unchecked(BitMatrix rel);

enum class ClosurePolicy { RequireClosed, TakeClosure };

/// Builds a poset from 1-based strict relations. Under TakeClosure the
/// transitive closure of the pairs is taken (CycleError if that would break
/// irreflexivity); under RequireClosed non-closed input is rejected.
Poset build_poset(int n, const std::vector<std::pair<int, int>>& pairs, ClosurePolicy policy);

enum class WitnessKind { C1, C2, C3, P2 };

std::string witness_kind_name(WitnessKind k);

struct ClassifyResult {
    bool is_poset = false;
    std::optional<WitnessKind> witness;
    std::vector<int> vertices; ///< 1-based labels realizing the witness

    std::string to_string() const;
};

/// Decides whether the edge relation is a strict partial order; if not,
/// returns the first induced C1, C2, C3 or P2 in lexicographic vertex order.
ClassifyResult classify_digraph(const Digraph& g);

/// Induced subposet on the given 1-based labels, relabelled 1..|A| in
/// ascending label order.
Poset restrict_to(const Poset& p, std::vector<int> labels);

/// Uniformly random relabelling.
Poset random_relabel(const Poset& p, Rng& rng);

/// Q1 and Q2 side by side, Q2's labels shifted past Q1's; no cross relations.
Poset disjoint_union(const Poset& q1, const Poset& q2);

/// Relation containment, labelwise; both posets must have the same size.
bool is_subposet(const Poset& q, const Poset& p);
/// Relation equality, labelwise; both posets must have the same size.
bool is_induced_equal(const Poset& q, const Poset& p);

/// All labelled posets on the same ground set whose relation contains Q's.
std::vector<Poset> enumerate_extensions(const Poset& q);

/// All labelled posets on {1..n}; enumerate_extensions of E_n.
std::vector<Poset> enumerate_all_posets(int n);

/// Backtracking isomorphism test with degree-sequence pruning. Worst case
/// O(n!), intended for n <= 12.
bool are_isomorphic(const Poset& q1, const Poset& q2);

/// Number of elements comparable to at least one other element.
int comparable_count(const Poset& q);

/// Cover pairs (1-based): i < j with no k strictly between.
std::vector<std::pair<int, int>> transitive_reduction(const Poset& p);

} // namespace posetlim
