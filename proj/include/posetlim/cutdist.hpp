#pragma once

#include <cstdint>
#include <vector>

#include "posetlim/kernel.hpp"
#include "posetlim/step.hpp"

namespace posetlim {

/// Bound pair for the cut distance between two finite-type functions.
/// lower is certified (counting-lemma quotients of exact densities); upper
/// is the cut norm of the difference overlaid by the witnessing coupling,
/// minimized heuristically, so upper >= delta is guaranteed only while the
/// overlay norm is evaluated exactly (at most exact_norm_limit active parts).
struct CutDistanceBounds {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<std::vector<double>> coupling; ///< N1 x N2, row sums mass1, column sums mass2
};

struct DeltaCutOptions {
    int restarts = 32;
    int exact_norm_limit = 24;  ///< active parts for exact overlay norm
    int pivot_limit = 16;       ///< pivot search only when N1+N2-1 <= this
    int heuristic_starts = 8;   ///< random starts of the alternating ascent
    int max_pivot_rounds = 200; ///< accepted pivots per restart
    int threads = 0;
};

/// Minimizes the cut norm of the coupled difference over transportation-
/// polytope vertices: an alignment-preconditioned north-west start plus
/// random vertex restarts, each improved by cycle pivots. Deterministic for
/// fixed seed and exactly symmetric under argument swap. Requires
/// N1 * N2 <= 1e4.
CutDistanceBounds delta_cut_upper(const StepFunction& w1, const StepFunction& w2,
                                  std::uint64_t seed, DeltaCutOptions opt = {});

/// Certified lower bound: max over the family of |t(F,W1) - t(F,W2)| / m(F).
/// Inputs must have values in [0,1]; every F must be simple with at least
/// one edge.
double delta_cut_lower(const StepFunction& w1, const StepFunction& w2,
                       const std::vector<Digraph>& family);

/// Nontrivial posets on up to 3 elements plus the D1 and D3 probes.
const std::vector<Digraph>& default_test_family();

/// Part permutation sigma: part i of the input becomes part sigma[i].
StepFunction permute_parts(const StepFunction& f, const std::vector<int>& sigma);
StepKernel permute_parts(const StepKernel& k, const std::vector<int>& sigma);

struct ConvergeRow {
    int n = 0;
    int rep = 0;
    double t_inj = 0.0; ///< t_inj of the 2-chain in the sampled poset
    double delta_upper = 0.0;
    double delta_lower = 0.0;
};

/// For each size n and replicate: sample P(n,W), take its step kernel and
/// record the cut-distance bounds against the target plus the 2-chain
/// density gap carrier.
std::vector<ConvergeRow> converge_experiment(const Kernel& sampler, const StepKernel& target,
                                             const std::vector<int>& sizes, int reps,
                                             std::uint64_t seed, DeltaCutOptions opt = {});

} // namespace posetlim
