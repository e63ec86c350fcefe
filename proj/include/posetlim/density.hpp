#pragma once

#include <cstdint>

#include "posetlim/mc.hpp"
#include "posetlim/poset.hpp"
#include "posetlim/rng.hpp"

namespace posetlim {

/// Fraction of all maps Q -> P that preserve the strict order. Exact
/// backtracking enumeration; vertices of Q with no relations contribute the
/// same factor |P| to numerator and denominator and are skipped, the
/// remaining branched search is bounded by 1e8 assignments
/// (BudgetExceededError beyond). Hit counts and map totals fit 53 bits at
/// that budget, so the only rounding in the result is the final division.
double t_exact(const Poset& q, const Poset& p);

/// Fraction of injective maps Q -> P that preserve the order; 0 when |Q| > |P|.
double t_inj_exact(const Poset& q, const Poset& p);

/// Fraction of injective maps realizing Q as an induced subposet of P;
/// 0 when |Q| > |P|.
double t_ind_exact(const Poset& q, const Poset& p);

/// Monte-Carlo estimate of t_exact: each sample maps Q to uniform vertices
/// of P with replacement and tests the order constraints.
DensityEstimate t_mc(const Poset& q, const Poset& p, std::uint64_t samples,
                     std::uint64_t seed, McOptions opt = {});

enum class SampleMode { WithReplacement, WithoutReplacement };

/// The labelled poset P(v_1,...,v_k) on uniformly sampled vertices. With
/// replacement, repeated vertices become incomparable copies.
Poset sample_induced(const Poset& p, int k, SampleMode mode, Rng& rng);

} // namespace posetlim
