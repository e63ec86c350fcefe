#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "posetlim/density.hpp"
#include "posetlim/kernel.hpp"

using namespace posetlim;

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

/// Oracle for t(chain_k, total): of the k! rank orders of k distinct
/// uniforms, exactly one is increasing.
double chain_in_total_oracle(int k) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) perm[std::size_t(i)] = i;
    int increasing = 0, total = 0;
    // enumerate permutations
    do {
        ++total;
        bool inc = true;
        for (int i = 0; i + 1 < k; ++i)
            if (perm[std::size_t(i)] > perm[std::size_t(i + 1)]) inc = false;
        increasing += inc;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(total == int(factorial(k)));
    return double(increasing) / double(total);
}

} // namespace

TEST_CASE("built-in kernels pass the axiom check") {
    const std::vector<KernelPtr> kernels = {
        two_point(0.7),
        from_poset_kernel(Poset::chain(3)),
        total_unit(),
        trivial_kernel(),
        product2d(),
        interval_kernel(),
        threshold(2.0),
        threshold(0.5),
        thin(two_point(0.5), 0.3),
        step_as_kernel(step_two_point(0.4)),
    };
    for (const auto& k : kernels) {
        const AxiomReport rep = check_axioms(*k, 100000, 99, 0.0);
        INFO(k->name());
        CHECK(rep.pass());
        CHECK(rep.triples_checked == 100000);
    }
}

TEST_CASE("a broken weight is caught by the two-step axiom") {
    // half-weight on the standard order of [0,1]: premises of the two-step
    // rule hold on a positive-measure set while the composite stays 0.5
    const auto broken = indicator_kernel(
        [](Rng& rng) { return Point{{rng.u01()}, 0}; },
        [](const Point& x, const Point& y) { return x.v[0] < y.v[0]; }, "broken");
    struct HalfKernel final : Kernel {
        KernelPtr base;
        explicit HalfKernel(KernelPtr b) : base(std::move(b)) {}
        Point sample(Rng& rng) const override { return base->sample(rng); }
        bool less(const Point& x, const Point& y) const override { return base->less(x, y); }
        double w(const Point& x, const Point& y) const override {
            return base->less(x, y) ? 0.5 : 0.0;
        }
        std::string name() const override { return "half"; }
    };
    const HalfKernel half(broken);
    const AxiomReport rep = check_axioms(half, 20000, 5, 0.0);
    CHECK(rep.w2_violations > 0);
    CHECK(rep.w1_violations == 0);
    CHECK(rep.order_violations == 0);
    CHECK_FALSE(rep.pass());
    CHECK(rep.w2_examples.size() == 10);
}

TEST_CASE("check_axioms flags a broken order") {
    // "less" that is not transitive: cyclic distance order on [0,1)
    const auto cyclic = indicator_kernel(
        [](Rng& rng) { return Point{{rng.u01()}, 0}; },
        [](const Point& x, const Point& y) {
            const double d = y.v[0] - x.v[0];
            return d > 0 ? d < 0.4 : d + 1.0 < 0.4;
        },
        "cyclic");
    const AxiomReport rep = check_axioms(*cyclic, 20000, 6, 0.0);
    CHECK(rep.order_violations > 0);
}

TEST_CASE("interval kernel with a custom sampler") {
    // fixed-width intervals [u, u+1/4] clipped to [0,1]
    const auto k = interval_kernel(
        [](Rng& rng) {
            const double u = 0.75 * rng.u01();
            return std::make_pair(u, u + 0.25);
        },
        "interval(fixed-width)");
    CHECK(check_axioms(*k, 20000, 3, 0.0).pass());
    // two such intervals are ordered iff the left endpoints differ by > 1/4:
    // P(|u1 - u2| > 1/4 in a fixed direction) = (2/3)^2 / 2 = 2/9
    const auto est = t_kernel_mc(Poset::chain(2), *k, 300000, 4);
    CHECK(std::abs(est.value - 2.0 / 9) <= 4.0 * est.se + 1e-3);

    const auto bad = interval_kernel(
        [](Rng& rng) { return std::make_pair(rng.u01() + 0.5, 0.1); }, "inverted");
    Rng rng(1);
    CHECK_THROWS_AS(bad->sample(rng), ParameterRangeError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(two_point(1.5), ParameterRangeError);
    CHECK_THROWS_AS(two_point(-0.1), ParameterRangeError);
    CHECK_THROWS_AS(threshold(0.0), ParameterRangeError);
    CHECK_THROWS_AS(thin(two_point(0.5), 1.2), ParameterRangeError);
}

TEST_CASE("t_kernel_mc two-point density") {
    const Poset chain2 = Poset::chain(2);
    for (double p : {0.2, 0.5, 0.9}) {
        const auto est = t_kernel_mc(chain2, *two_point(p), 400000, 11);
        CHECK(std::abs(est.value - p / 4) <= std::max(3.0 * est.se, 0.002));
    }
}

TEST_CASE("t_kernel_mc chain in the total order kernel") {
    for (int k = 2; k <= 4; ++k) {
        const double truth = chain_in_total_oracle(k);
        CHECK(truth == doctest::Approx(1.0 / factorial(k)).epsilon(1e-15));
        const auto est = t_kernel_mc(Poset::chain(k), *total_unit(), 400000, 21);
        CHECK(std::abs(est.value - truth) <= std::max(4.0 * est.se, 1e-3));
    }
}

TEST_CASE("t_kernel_mc product order density") {
    // both coordinate sequences must be increasing independently, so the
    // k-chain density is (1/k!)^2
    const auto k2 = t_kernel_mc(Poset::chain(2), *product2d(), 400000, 61);
    CHECK(std::abs(k2.value - 0.25) <= 4.0 * k2.se);
    const auto k3 = t_kernel_mc(Poset::chain(3), *product2d(), 400000, 62);
    CHECK(std::abs(k3.value - 1.0 / 36) <= 4.0 * k3.se);
}

TEST_CASE("t_kernel_mc interval order density") {
    // with sorted pairs of uniforms, I1 before I2 means the two points of
    // I2 are the top two of four: 2!*2!/4! = 1/6
    const auto est = t_kernel_mc(Poset::chain(2), *interval_kernel(), 400000, 63);
    CHECK(std::abs(est.value - 1.0 / 6) <= 4.0 * est.se);
}

TEST_CASE("t_kernel_mc trivial kernel is exactly zero") {
    const auto est = t_kernel_mc(Poset::chain(2), *trivial_kernel(), 1000, 3);
    CHECK(est.value == 0.0);
    CHECK(est.se == 0.0);
    const auto one = t_kernel_mc(Poset(3), *trivial_kernel(), 1000, 3);
    CHECK(one.value == 1.0);
}

TEST_CASE("threshold at or below 1 is the zero kernel") {
    const auto est = t_kernel_mc(Poset::chain(2), *threshold(1.0), 10000, 4);
    CHECK(est.value == 0.0);
    // large parameter approaches the total kernel
    const auto big = t_kernel_mc(Poset::chain(2), *threshold(1e9), 200000, 4);
    CHECK(std::abs(big.value - 0.5) <= 5.0 * big.se + 1e-3);
}

TEST_CASE("from_poset kernel matches finite densities") {
    const Poset p = build_poset(4, {{1, 2}, {2, 3}}, ClosurePolicy::TakeClosure);
    const auto k = from_poset_kernel(p);
    for (const Poset& q : {Poset::chain(2), Poset::chain(3), Poset(2)}) {
        const double truth = t_exact(q, p);
        const auto est = t_kernel_mc(q, *k, 200000, 31);
        CHECK(std::abs(est.value - truth) <= 4.0 * est.se + 1e-9);
    }
}

TEST_CASE("step kernel MC agrees with the exact sum") {
    const StepKernel k = step_two_point(0.35);
    const auto kern = step_as_kernel(k);
    for (const Poset& q : {Poset::chain(2), Poset::chain(3),
                           build_poset(3, {{1, 2}, {1, 3}}, ClosurePolicy::TakeClosure)}) {
        const double exact = t_kernel_exact_step(q, k);
        const auto est = t_kernel_mc(q, *kern, 300000, 77);
        CHECK(std::abs(est.value - exact) <= 4.0 * est.se + 1e-9);
    }
}

TEST_CASE("thinning scales densities by s^comparables") {
    const std::vector<KernelPtr> bases = {two_point(0.5), total_unit()};
    const Poset v_poset = build_poset(3, {{1, 2}, {1, 3}}, ClosurePolicy::TakeClosure);
    const std::vector<Poset> patterns = {Poset::chain(2), Poset::chain(3), v_poset};
    for (const auto& base : bases) {
        for (const Poset& q : patterns) {
            const int vt = comparable_count(q);
            const auto base_est = t_kernel_mc(q, *base, 300000, 101);
            for (double s : {0.0, 0.3, 1.0}) {
                const auto thin_est = t_kernel_mc(q, *thin(base, s), 300000, 202);
                const double expect = std::pow(s, vt) * base_est.value;
                const double combined =
                    std::sqrt(std::pow(s, 2.0 * vt) * base_est.se * base_est.se +
                              thin_est.se * thin_est.se);
                INFO(base->name(), " s=", s);
                CHECK(std::abs(thin_est.value - expect) <= 4.0 * combined + 1e-12);
                if (s == 0.0) CHECK(thin_est.value == 0.0);
            }
        }
    }
}

TEST_CASE("nested thinning composes multiplicatively") {
    const Poset chain2 = Poset::chain(2);
    const auto once = t_kernel_mc(chain2, *thin(two_point(0.5), 0.25), 400000, 7);
    const auto twice = t_kernel_mc(chain2, *thin(thin(two_point(0.5), 0.5), 0.5), 400000, 8);
    const double combined = std::sqrt(once.se * once.se + twice.se * twice.se);
    CHECK(std::abs(once.value - twice.value) <= 4.0 * combined);
}

TEST_CASE("poset_limit_test verdicts") {
    const auto constant = constant_candidate(0.5);
    const auto bad = poset_limit_test(*constant, 100000, 12);
    CHECK_FALSE(bad.pass);
    CHECK(bad.d3.value == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(bad.d3.se == 0.0);

    const auto good_tp = poset_limit_test(*two_point(0.5), 100000, 12);
    CHECK(good_tp.pass);
    CHECK(good_tp.gap.value == 0.0);
    CHECK(good_tp.d3.value == 0.0);

    const auto good_thr = poset_limit_test(*threshold(2.0), 100000, 12);
    CHECK(good_thr.pass);

    // a step function candidate with no order attached
    const auto cand = step_function_candidate(step_two_point(0.8).as_function());
    CHECK(poset_limit_test(*cand, 100000, 13).pass);
}

TEST_CASE("special digraph probes") {
    CHECK(digraph_d1().edge_count() == 2);
    CHECK(digraph_d2().edge_count() == 3);
    CHECK(digraph_d3().edge_count() == 3);
    CHECK(classify_digraph(digraph_d2()).is_poset);
    CHECK_FALSE(classify_digraph(digraph_d1()).is_poset);
    CHECK_FALSE(classify_digraph(digraph_d3()).is_poset);
}
