#include "posetlim/step.hpp"

#include <cmath>
#include <cstdlib>

namespace posetlim {

namespace {

constexpr double kMassTol = 1e-12;
constexpr int kCutNormPartLimit = 24;
constexpr double kEnumBudget = 1e8;

void check_shape(const std::vector<double>& mass,
                 const std::vector<std::vector<double>>& values) {
    const std::size_t n = mass.size();
    if (n == 0) throw ParameterRangeError("step function needs at least one part");
    if (values.size() != n)
        throw ParameterRangeError("value matrix size does not match part count");
    for (const auto& row : values)
        if (row.size() != n)
            throw ParameterRangeError("value matrix must be square");
    double total = 0.0;
    for (double m : mass) {
        if (!(m >= 0.0)) throw ParameterRangeError("part masses must be nonnegative");
        total += m;
    }
    if (std::abs(total - 1.0) > kMassTol)
        throw ParameterRangeError("part masses must sum to 1");
}

} // namespace

StepFunction::StepFunction(std::vector<double> mass_, std::vector<std::vector<double>> values_)
    : mass(std::move(mass_)), values(std::move(values_)) {
    check_shape(mass, values);
}

StepKernel::StepKernel(std::vector<double> mass_, std::vector<std::vector<double>> values_,
                       BitMatrix part_order_)
    : mass(std::move(mass_)), values(std::move(values_)), part_order(std::move(part_order_)) {
    check_shape(mass, values);
    const int n = parts();
    if (part_order.size() != n)
        throw ParameterRangeError("part order size does not match part count");
    if (!is_valid_order(part_order))
        throw NotAPosetError("part order is not a strict partial order");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = values[std::size_t(i)][std::size_t(j)];
            if (v < 0.0 || v > 1.0)
                throw ParameterRangeError("kernel values must lie in [0,1]");
            if (v > 0.0 && !part_order.get(i, j))
                throw ParameterRangeError("positive value on an unordered part pair");
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (values[std::size_t(i)][std::size_t(j)] <= 0.0) continue;
            for (int k = 0; k < n; ++k)
                if (values[std::size_t(j)][std::size_t(k)] > 0.0 &&
                    values[std::size_t(i)][std::size_t(k)] != 1.0)
                    throw ParameterRangeError(
                        "positive two-step chain must force the composite value to 1");
        }
}

StepKernel step_two_point(double p) {
    if (p < 0.0 || p > 1.0) throw ParameterRangeError("p must lie in [0,1]");
    BitMatrix order(2);
    order.set(0, 1);
    return StepKernel({0.5, 0.5}, {{0.0, p}, {0.0, 0.0}}, std::move(order));
}

StepKernel step_from_poset(const Poset& p) {
    const int n = p.size();
    std::vector<double> mass(static_cast<std::size_t>(n), 1.0 / double(n));
    std::vector<std::vector<double>> values(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
        p.rel().for_each_in_row(i, [&](int j) { values[std::size_t(i)][std::size_t(j)] = 1.0; });
    return StepKernel(std::move(mass), std::move(values), p.rel());
}

namespace {

/// Weighted matrix M[i][j] = values[i][j] * mass[i] * mass[j].
std::vector<std::vector<double>> weighted(const StepFunction& f) {
    const int n = f.parts();
    std::vector<std::vector<double>> m(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m[std::size_t(i)][std::size_t(j)] =
                f.values[std::size_t(i)][std::size_t(j)] * f.mass[std::size_t(i)] * f.mass[std::size_t(j)];
    return m;
}

void check_part_limit(int n) {
    if (n > kCutNormPartLimit)
        throw BudgetExceededError("exact cut norm limited to 24 parts");
}

/// Shared enumeration core: walks all S masks in Gray-code order keeping
/// column sums incremental, hands (mask, colsum) to the visitor.
template <class Visit>
void for_all_subsets(const std::vector<std::vector<double>>& m, Visit&& visit) {
    const int n = int(m.size());
    std::vector<double> col(static_cast<std::size_t>(n), 0.0);
    visit(std::uint32_t(0), col);
    std::uint32_t gray = 0;
    const std::uint64_t total = std::uint64_t(1) << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        const std::uint32_t next = std::uint32_t(k ^ (k >> 1));
        const std::uint32_t flipped = gray ^ next;
        const int bit = __builtin_ctz(flipped);
        const double sign = (next & flipped) ? 1.0 : -1.0;
        for (int j = 0; j < n; ++j) col[std::size_t(j)] += sign * m[std::size_t(bit)][std::size_t(j)];
        gray = next;
        visit(next, col);
    }
}

} // namespace

double cut_norm_rect(const StepFunction& f) {
    check_part_limit(f.parts());
    const auto m = weighted(f);
    double best = 0.0;
    for_all_subsets(m, [&](std::uint32_t, const std::vector<double>& col) {
        double pos = 0.0, neg = 0.0;
        for (double c : col) {
            if (c > 0.0) pos += c;
            else neg += c;
        }
        best = std::max(best, std::max(pos, -neg));
    });
    return best;
}

CutNormWitness cut_norm_rect_witness(const StepFunction& f) {
    check_part_limit(f.parts());
    const int n = f.parts();
    const auto m = weighted(f);
    CutNormWitness out;
    // plain ascending mask order keeps the smallest-S tie rule
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << n); ++s) {
        std::vector<double> col(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i)
            if ((s >> i) & 1)
                for (int j = 0; j < n; ++j) col[std::size_t(j)] += m[std::size_t(i)][std::size_t(j)];
        double pos = 0.0, neg = 0.0;
        std::uint32_t t_pos = 0, t_neg = 0;
        for (int j = 0; j < n; ++j) {
            if (col[std::size_t(j)] > 0.0) {
                pos += col[std::size_t(j)];
                t_pos |= std::uint32_t(1) << j;
            } else if (col[std::size_t(j)] < 0.0) {
                neg += col[std::size_t(j)];
                t_neg |= std::uint32_t(1) << j;
            }
        }
        if (pos > out.value) out = {pos, std::uint32_t(s), t_pos};
        if (-neg > out.value) out = {-neg, std::uint32_t(s), t_neg};
    }
    return out;
}

double cut_norm_func(const StepFunction& f) {
    check_part_limit(f.parts());
    const auto m = weighted(f);
    const int n = f.parts();
    // f_i = +1 on mask bits, -1 off; optimal g is the sign of the column sum
    std::vector<double> col(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) col[std::size_t(j)] -= m[std::size_t(i)][std::size_t(j)];
    auto score = [&] {
        double total = 0.0;
        for (double c : col) total += std::abs(c);
        return total;
    };
    double best = score();
    std::uint32_t gray = 0;
    for (std::uint64_t k = 1; k < (std::uint64_t(1) << n); ++k) {
        const std::uint32_t next = std::uint32_t(k ^ (k >> 1));
        const std::uint32_t flipped = gray ^ next;
        const int bit = __builtin_ctz(flipped);
        const double sign = (next & flipped) ? 2.0 : -2.0;
        for (int j = 0; j < n; ++j) col[std::size_t(j)] += sign * m[std::size_t(bit)][std::size_t(j)];
        gray = next;
        best = std::max(best, score());
    }
    return best;
}

double step_integral(const StepFunction& f) {
    double total = 0.0;
    const auto m = weighted(f);
    for (const auto& row : m)
        for (double v : row) total += v;
    return total;
}

double step_l1_norm(const StepFunction& f) {
    double total = 0.0;
    const auto m = weighted(f);
    for (const auto& row : m)
        for (double v : row) total += std::abs(v);
    return total;
}

double t_step_digraph(const Digraph& f, const StepFunction& w) {
    if (!f.is_simple())
        throw ParameterRangeError("density only defined for simple digraphs");
    const int k = f.size();
    const int n = w.parts();
    if (std::pow(double(n), double(k)) > kEnumBudget)
        throw BudgetExceededError("step density enumeration above the 1e8 bound");

    std::vector<std::pair<int, int>> edges; // 0-based
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k; ++j)
            if (i != j && f.edge(i, j)) edges.emplace_back(i - 1, j - 1);

    std::vector<int> assign(static_cast<std::size_t>(k), 0);
    double total = 0.0;
    // depth-first over assignments with running products, pruned at zero
    auto rec = [&](auto&& self, int depth, double weight) -> void {
        if (weight == 0.0) return;
        if (depth == k) {
            total += weight;
            return;
        }
        for (int c = 0; c < n; ++c) {
            assign[std::size_t(depth)] = c;
            double wgt = weight * w.mass[std::size_t(c)];
            for (auto [a, b] : edges) {
                if (wgt == 0.0) break;
                if (a == depth && b < depth)
                    wgt *= w.values[std::size_t(c)][std::size_t(assign[std::size_t(b)])];
                else if (b == depth && a < depth)
                    wgt *= w.values[std::size_t(assign[std::size_t(a)])][std::size_t(c)];
                else if (a == depth && b == depth)
                    wgt = 0.0;
            }
            self(self, depth + 1, wgt);
        }
    };
    rec(rec, 0, 1.0);
    return total;
}

double t_kernel_exact_step(const Poset& q, const StepKernel& w) {
    return t_step_digraph(q.as_digraph(), w.as_function());
}

} // namespace posetlim
