#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "posetlim/mc.hpp"
#include "posetlim/poset.hpp"
#include "posetlim/rng.hpp"
#include "posetlim/step.hpp"

namespace posetlim {

/// Point of an ordered probability space. Coordinates are private to the
/// kernel that sampled the point; the library never compares points across
/// kernels. Negative tags are reserved (the thinning wrapper marks its
/// isolated atom with tag -1).
struct Point {
    std::array<double, 3> v{};
    int tag = 0;
};

/// A kernel on an ordered probability space: a sampler for mu, the strict
/// order predicate, and the pair weight into [0,1]. Implementations are
/// immutable and safe to share across threads.
class Kernel {
public:
    virtual ~Kernel() = default;
    virtual Point sample(Rng& rng) const = 0;
    virtual bool less(const Point& x, const Point& y) const = 0;
    virtual double w(const Point& x, const Point& y) const = 0;
    virtual std::string name() const = 0;
};

using KernelPtr = std::shared_ptr<const Kernel>;

/// Two-point space {0,1} with 0 < 1 and weight p on the ordered pair.
KernelPtr two_point(double p);
/// Uniform measure on a finite poset with the indicator weight.
KernelPtr from_poset_kernel(const Poset& p);
/// [0,1] with the standard order and the indicator weight. The measure must
/// be atomless for samples to be totally ordered; the uniform sampler
/// satisfies this at floating precision, and the ~n^2 * 2^-53 chance of a
/// collision only produces one incomparable pair.
KernelPtr total_unit();
/// Weight identically 0; nothing is ever related.
KernelPtr trivial_kernel();
/// [0,1]^2 with the strict product order and the indicator weight.
KernelPtr product2d();
/// Closed subintervals of [0,1] ordered by complete precedence; default
/// sampler sorts two independent uniforms.
KernelPtr interval_kernel();
KernelPtr interval_kernel(std::function<std::pair<double, double>(Rng&)> sampler,
                          std::string name = "interval(custom)");
/// [0,1] with the standard order and weight 1{y - x > 1/a}; identically 0
/// when a <= 1, the full indicator as a -> infinity.
KernelPtr threshold(double a);
/// Strict 0/1 kernel from an arbitrary sampler and order predicate.
KernelPtr indicator_kernel(std::function<Point(Rng&)> sampler,
                           std::function<bool(const Point&, const Point&)> less,
                           std::string name);
/// View of a finite-type kernel: parts sampled by mass.
KernelPtr step_as_kernel(const StepKernel& k);
/// Candidate with a weight but no order; for the limit test only, not a kernel.
KernelPtr constant_candidate(double c);
/// Weight-only view of a step function (order predicate always false).
KernelPtr step_function_candidate(const StepFunction& f);

/// Thinning: an isolated atom of mass 1-s is adjoined to the space and the
/// weight vanishes on every pair touching it.
KernelPtr thin(KernelPtr base, double s);

struct AxiomWitness {
    Point x, y, z;
    std::string check;
};

/// Tally of sampled kernel-axiom violations.
struct AxiomReport {
    std::uint64_t triples_checked = 0;
    std::uint64_t w1_violations = 0;
    std::uint64_t w2_violations = 0;
    std::uint64_t order_violations = 0;
    std::vector<AxiomWitness> w1_examples;    // up to 10
    std::vector<AxiomWitness> w2_examples;    // up to 10
    std::vector<AxiomWitness> order_examples; // up to 10

    bool pass() const {
        return w1_violations == 0 && w2_violations == 0 && order_violations == 0;
    }
};

/// Samples independent triples and tallies violations of the two kernel
/// axioms and of the strict-order axioms on the sampled points. tol widens
/// the premises: a two-step violation means w(x,z) < 1 - tol while both
/// premises exceed tol.
AxiomReport check_axioms(const Kernel& k, std::uint64_t triples, std::uint64_t seed,
                         double tol = 0.0, McOptions opt = {});

/// Monte-Carlo estimate of the density integral: per sample, |Q| points are
/// drawn i.i.d. and the product of weights over related pairs is averaged.
DensityEstimate t_kernel_mc(const Poset& q, const Kernel& k, std::uint64_t samples,
                            std::uint64_t seed, McOptions opt = {});
/// Serial reference of t_kernel_mc (same plan, no OpenMP).
DensityEstimate t_kernel_mc_serial(const Poset& q, const Kernel& k, std::uint64_t samples,
                                   std::uint64_t seed, McOptions opt = {});

/// Three-vertex probes: edges {12,23}, {12,23,13}, {12,23,31}.
Digraph digraph_d1();
Digraph digraph_d2();
Digraph digraph_d3();

/// Empirical test that a weight function is (equivalent to) a kernel: the
/// two-step gap t(D1)-t(D2) and the cycle density t(D3) must both vanish.
struct PosetLimitReport {
    DensityEstimate d1, d2, d3;
    DensityEstimate gap; ///< single-stream estimate of t(D1) - t(D2), nonnegative
    bool pass = false;
};

PosetLimitReport poset_limit_test(const Kernel& candidate, std::uint64_t samples,
                                  std::uint64_t seed, McOptions opt = {});

} // namespace posetlim
