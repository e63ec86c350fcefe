#include "posetlim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace posetlim {

namespace {

struct TwoPointKernel final : Kernel {
    double p;
    explicit TwoPointKernel(double p_) : p(p_) {}
    Point sample(Rng& rng) const override { return Point{{rng.u01() < 0.5 ? 0.0 : 1.0}, 0}; }
    bool less(const Point& x, const Point& y) const override {
        return x.v[0] == 0.0 && y.v[0] == 1.0;
    }
    double w(const Point& x, const Point& y) const override { return less(x, y) ? p : 0.0; }
    std::string name() const override { return "two_point:" + std::to_string(p); }
};

struct IndicatorKernel final : Kernel {
    std::function<Point(Rng&)> sampler;
    std::function<bool(const Point&, const Point&)> order;
    std::string label;
    IndicatorKernel(std::function<Point(Rng&)> s, std::function<bool(const Point&, const Point&)> o,
                    std::string n)
        : sampler(std::move(s)), order(std::move(o)), label(std::move(n)) {}
    Point sample(Rng& rng) const override { return sampler(rng); }
    bool less(const Point& x, const Point& y) const override { return order(x, y); }
    double w(const Point& x, const Point& y) const override { return order(x, y) ? 1.0 : 0.0; }
    std::string name() const override { return label; }
};

struct TrivialKernel final : Kernel {
    Point sample(Rng& rng) const override { return Point{{rng.u01()}, 0}; }
    bool less(const Point&, const Point&) const override { return false; }
    double w(const Point&, const Point&) const override { return 0.0; }
    std::string name() const override { return "trivial"; }
};

struct ThresholdKernel final : Kernel {
    double inv_a;
    explicit ThresholdKernel(double a) : inv_a(1.0 / a) {}
    Point sample(Rng& rng) const override { return Point{{rng.u01()}, 0}; }
    bool less(const Point& x, const Point& y) const override { return x.v[0] < y.v[0]; }
    double w(const Point& x, const Point& y) const override {
        return (y.v[0] - x.v[0] > inv_a) ? 1.0 : 0.0;
    }
    std::string name() const override { return "threshold:" + std::to_string(1.0 / inv_a); }
};

struct StepViewKernel final : Kernel {
    std::vector<double> cumulative;
    StepKernel step;
    explicit StepViewKernel(StepKernel k) : step(std::move(k)) {
        cumulative.reserve(step.mass.size());
        double acc = 0.0;
        for (double m : step.mass) {
            acc += m;
            cumulative.push_back(acc);
        }
        cumulative.back() = 1.0;
    }
    Point sample(Rng& rng) const override {
        const double u = rng.u01();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const int part = int(it - cumulative.begin());
        return Point{{double(std::min(part, step.parts() - 1))}, 0};
    }
    bool less(const Point& x, const Point& y) const override {
        return step.part_order.get(int(x.v[0]), int(y.v[0]));
    }
    double w(const Point& x, const Point& y) const override {
        return step.values[std::size_t(x.v[0])][std::size_t(y.v[0])];
    }
    std::string name() const override { return "step:" + std::to_string(step.parts()); }
};

struct ConstantCandidate final : Kernel {
    double c;
    explicit ConstantCandidate(double c_) : c(c_) {}
    Point sample(Rng& rng) const override { return Point{{rng.u01()}, 0}; }
    bool less(const Point&, const Point&) const override { return false; }
    double w(const Point&, const Point&) const override { return c; }
    std::string name() const override { return "constant:" + std::to_string(c); }
};

struct StepFunctionCandidate final : Kernel {
    std::vector<double> cumulative;
    StepFunction f;
    explicit StepFunctionCandidate(StepFunction f_) : f(std::move(f_)) {
        double acc = 0.0;
        for (double m : f.mass) {
            acc += m;
            cumulative.push_back(acc);
        }
        cumulative.back() = 1.0;
    }
    Point sample(Rng& rng) const override {
        const double u = rng.u01();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        return Point{{double(std::min(int(it - cumulative.begin()), f.parts() - 1))}, 0};
    }
    bool less(const Point&, const Point&) const override { return false; }
    double w(const Point& x, const Point& y) const override {
        return f.values[std::size_t(x.v[0])][std::size_t(y.v[0])];
    }
    std::string name() const override { return "step_function:" + std::to_string(f.parts()); }
};

struct ThinKernel final : Kernel {
    KernelPtr base;
    double s;
    ThinKernel(KernelPtr b, double s_) : base(std::move(b)), s(s_) {}
    Point sample(Rng& rng) const override {
        if (rng.u01() < s) return base->sample(rng);
        Point star;
        star.tag = -1;
        return star;
    }
    bool less(const Point& x, const Point& y) const override {
        if (x.tag < 0 || y.tag < 0) return false;
        return base->less(x, y);
    }
    double w(const Point& x, const Point& y) const override {
        if (x.tag < 0 || y.tag < 0) return 0.0;
        return base->w(x, y);
    }
    std::string name() const override {
        return "thin(" + base->name() + "," + std::to_string(s) + ")";
    }
};

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterRangeError(std::string(what) + " must lie in [0,1]");
}

} // namespace

KernelPtr two_point(double p) {
    check_probability(p, "p");
    return std::make_shared<TwoPointKernel>(p);
}

KernelPtr from_poset_kernel(const Poset& p) {
    auto rel = std::make_shared<BitMatrix>(p.rel());
    const int n = p.size();
    return indicator_kernel(
        [n](Rng& rng) { return Point{{double(rng.below(std::uint64_t(n)))}, 0}; },
        [rel](const Point& x, const Point& y) { return rel->get(int(x.v[0]), int(y.v[0])); },
        "from_poset:" + std::to_string(n));
}

KernelPtr total_unit() {
    return indicator_kernel([](Rng& rng) { return Point{{rng.u01()}, 0}; },
                            [](const Point& x, const Point& y) { return x.v[0] < y.v[0]; },
                            "total");
}

KernelPtr trivial_kernel() { return std::make_shared<TrivialKernel>(); }

KernelPtr product2d() {
    return indicator_kernel(
        [](Rng& rng) {
            const double a = rng.u01();
            const double b = rng.u01();
            return Point{{a, b}, 0};
        },
        [](const Point& x, const Point& y) { return x.v[0] < y.v[0] && x.v[1] < y.v[1]; },
        "product2d");
}

KernelPtr interval_kernel() {
    return interval_kernel(
        [](Rng& rng) {
            double a = rng.u01();
            double b = rng.u01();
            if (b < a) std::swap(a, b);
            return std::make_pair(a, b);
        },
        "interval");
}

KernelPtr interval_kernel(std::function<std::pair<double, double>(Rng&)> sampler,
                          std::string name) {
    auto sample = [sampler = std::move(sampler)](Rng& rng) {
        const auto [a, b] = sampler(rng);
        if (b < a) throw ParameterRangeError("interval sampler returned x > y");
        return Point{{a, b}, 0};
    };
    // interval (x1,y1) precedes (x2,y2) when it lies entirely to the left
    return indicator_kernel(std::move(sample),
                            [](const Point& x, const Point& y) { return x.v[1] < y.v[0]; },
                            std::move(name));
}

KernelPtr threshold(double a) {
    if (!(a > 0.0)) throw ParameterRangeError("threshold parameter must be positive (or inf)");
    return std::make_shared<ThresholdKernel>(a);
}

KernelPtr indicator_kernel(std::function<Point(Rng&)> sampler,
                           std::function<bool(const Point&, const Point&)> less,
                           std::string name) {
    return std::make_shared<IndicatorKernel>(std::move(sampler), std::move(less), std::move(name));
}

KernelPtr step_as_kernel(const StepKernel& k) { return std::make_shared<StepViewKernel>(k); }

KernelPtr constant_candidate(double c) {
    check_probability(c, "constant weight");
    return std::make_shared<ConstantCandidate>(c);
}

KernelPtr step_function_candidate(const StepFunction& f) {
    for (const auto& row : f.values)
        for (double v : row) check_probability(v, "candidate weight");
    return std::make_shared<StepFunctionCandidate>(f);
}

KernelPtr thin(KernelPtr base, double s) {
    check_probability(s, "thinning probability");
    return std::make_shared<ThinKernel>(std::move(base), s);
}

namespace {

struct AxiomState {
    std::uint64_t triples = 0;
    std::uint64_t w1 = 0, w2 = 0, order = 0;
    std::vector<AxiomWitness> ex_w1, ex_w2, ex_order;

    void merge(const AxiomState& o) {
        triples += o.triples;
        w1 += o.w1;
        w2 += o.w2;
        order += o.order;
        auto take = [](std::vector<AxiomWitness>& dst, const std::vector<AxiomWitness>& src) {
            for (const auto& w : src) {
                if (dst.size() >= 10) break;
                dst.push_back(w);
            }
        };
        take(ex_w1, o.ex_w1);
        take(ex_w2, o.ex_w2);
        take(ex_order, o.ex_order);
    }
};

void note(std::vector<AxiomWitness>& dst, const Point& x, const Point& y, const Point& z,
          const char* what) {
    if (dst.size() < 10) dst.push_back({x, y, z, what});
}

} // namespace

AxiomReport check_axioms(const Kernel& k, std::uint64_t triples, std::uint64_t seed, double tol,
                         McOptions opt) {
    if (triples < 1) throw ParameterRangeError("need at least one triple");
    if (tol < 0.0) throw ParameterRangeError("tolerance must be nonnegative");

    auto state = mc_reduce<AxiomState>(
        seed, triples, AxiomState{},
        [&](AxiomState& st, std::uint64_t, Rng& rng) {
            const Point pts[3] = {k.sample(rng), k.sample(rng), k.sample(rng)};
            ++st.triples;

            bool w1_bad = false, w2_bad = false, order_bad = false;
            for (int a = 0; a < 3 && !order_bad; ++a)
                if (k.less(pts[a], pts[a])) order_bad = true; // irreflexive
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    if (a == b) continue;
                    if (k.w(pts[a], pts[b]) > tol && !k.less(pts[a], pts[b])) w1_bad = true;
                    if (b > a && k.less(pts[a], pts[b]) && k.less(pts[b], pts[a]))
                        order_bad = true; // asymmetric
                }
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    if (b == a) continue;
                    for (int c = 0; c < 3; ++c) {
                        if (c == a || c == b) continue;
                        if (k.less(pts[a], pts[b]) && k.less(pts[b], pts[c]) &&
                            !k.less(pts[a], pts[c]))
                            order_bad = true; // transitive
                        if (k.w(pts[a], pts[b]) > tol && k.w(pts[b], pts[c]) > tol &&
                            k.w(pts[a], pts[c]) < 1.0 - tol)
                            w2_bad = true;
                    }
                }
            if (w1_bad) {
                ++st.w1;
                note(st.ex_w1, pts[0], pts[1], pts[2], "w1");
            }
            if (w2_bad) {
                ++st.w2;
                note(st.ex_w2, pts[0], pts[1], pts[2], "w2");
            }
            if (order_bad) {
                ++st.order;
                note(st.ex_order, pts[0], pts[1], pts[2], "order");
            }
        },
        [](AxiomState& a, const AxiomState& b) { a.merge(b); }, opt);

    AxiomReport rep;
    rep.triples_checked = state.triples;
    rep.w1_violations = state.w1;
    rep.w2_violations = state.w2;
    rep.order_violations = state.order;
    rep.w1_examples = std::move(state.ex_w1);
    rep.w2_examples = std::move(state.ex_w2);
    rep.order_examples = std::move(state.ex_order);
    return rep;
}

namespace {

std::vector<std::pair<int, int>> related_pairs(const Poset& q) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < q.size(); ++i)
        q.rel().for_each_in_row(i, [&](int j) { pairs.emplace_back(i, j); });
    return pairs;
}

template <class Runner>
DensityEstimate t_kernel_mc_impl(const Poset& q, const Kernel& k, std::uint64_t samples,
                                 std::uint64_t seed, McOptions opt, Runner runner) {
    if (samples < 1) throw ParameterRangeError("need at least one sample");
    const auto pairs = related_pairs(q);
    const int kq = q.size();
    auto acc = runner(seed, samples, [&](std::uint64_t, Rng& rng) {
        std::vector<Point> pts;
        pts.reserve(static_cast<std::size_t>(kq));
        for (int i = 0; i < kq; ++i) pts.push_back(k.sample(rng));
        double prod = 1.0;
        for (auto [a, b] : pairs) {
            prod *= k.w(pts[std::size_t(a)], pts[std::size_t(b)]);
            if (prod == 0.0) break;
        }
        return std::array<double, 1>{prod};
    });
    auto est = acc.estimate(0);
    est.value = std::min(1.0, std::max(0.0, est.value));
    (void)opt;
    return est;
}

} // namespace

DensityEstimate t_kernel_mc(const Poset& q, const Kernel& k, std::uint64_t samples,
                            std::uint64_t seed, McOptions opt) {
    return t_kernel_mc_impl(q, k, samples, seed, opt, [&](std::uint64_t s, std::uint64_t n, auto fn) {
        return mc_moments<1>(s, n, fn, opt);
    });
}

DensityEstimate t_kernel_mc_serial(const Poset& q, const Kernel& k, std::uint64_t samples,
                                   std::uint64_t seed, McOptions opt) {
    return t_kernel_mc_impl(q, k, samples, seed, opt, [&](std::uint64_t s, std::uint64_t n, auto fn) {
        return mc_moments_serial<1>(s, n, fn, opt);
    });
}

Digraph digraph_d1() {
    Digraph g(3);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    return g;
}

Digraph digraph_d2() {
    Digraph g = digraph_d1();
    g.add_edge(1, 3);
    return g;
}

Digraph digraph_d3() {
    Digraph g = digraph_d1();
    g.add_edge(3, 1);
    return g;
}

PosetLimitReport poset_limit_test(const Kernel& candidate, std::uint64_t samples,
                                  std::uint64_t seed, McOptions opt) {
    if (samples < 1) throw ParameterRangeError("need at least one sample");
    // components: t(D1), t(D2), t(D3), and the pointwise gap w12*w23*(1-w13)
    auto acc = mc_moments<4>(
        seed, samples,
        [&](std::uint64_t, Rng& rng) {
            const Point x1 = candidate.sample(rng);
            const Point x2 = candidate.sample(rng);
            const Point x3 = candidate.sample(rng);
            const double w12 = candidate.w(x1, x2);
            const double w23 = candidate.w(x2, x3);
            const double w13 = candidate.w(x1, x3);
            const double w31 = candidate.w(x3, x1);
            const double d1 = w12 * w23;
            return std::array<double, 4>{d1, d1 * w13, d1 * w31, d1 * (1.0 - w13)};
        },
        opt);

    PosetLimitReport rep;
    rep.d1 = acc.estimate(0);
    rep.d2 = acc.estimate(1);
    rep.d3 = acc.estimate(2);
    rep.gap = acc.estimate(3);
    rep.pass = rep.gap.value <= 4.0 * rep.gap.se && rep.d3.value <= 4.0 * rep.d3.se;
    return rep;
}

} // namespace posetlim
