#include "posetlim/cutdist.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <tuple>

#include "posetlim/density.hpp"
#include "posetlim/wsampler.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace posetlim {

namespace {

struct Cell {
    int i, j;
    double mass;
};

using Matrix = std::vector<std::vector<double>>;

Matrix zero_matrix(int rows, int cols) {
    return Matrix(static_cast<std::size_t>(rows), std::vector<double>(static_cast<std::size_t>(cols), 0.0));
}

std::vector<Cell> active_cells(const Matrix& c) {
    std::vector<Cell> cells;
    for (int i = 0; i < int(c.size()); ++i)
        for (int j = 0; j < int(c[std::size_t(i)].size()); ++j)
            if (c[std::size_t(i)][std::size_t(j)] > 0.0)
                cells.push_back({i, j, c[std::size_t(i)][std::size_t(j)]});
    return cells;
}

/// Exact rectangular cut norm over the listed parts, Gray-code enumeration.
double exact_norm(const std::vector<std::vector<double>>& m) {
    const int n = int(m.size());
    std::vector<double> col(static_cast<std::size_t>(n), 0.0);
    double best = 0.0;
    std::uint32_t gray = 0;
    const std::uint64_t total = std::uint64_t(1) << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        const std::uint32_t next = std::uint32_t(k ^ (k >> 1));
        const std::uint32_t flipped = gray ^ next;
        const int bit = __builtin_ctz(flipped);
        const double sign = (next & flipped) ? 1.0 : -1.0;
        for (int j = 0; j < n; ++j) col[std::size_t(j)] += sign * m[std::size_t(bit)][std::size_t(j)];
        gray = next;
        double pos = 0.0, neg = 0.0;
        for (double c : col) {
            if (c > 0.0) pos += c;
            else neg += c;
        }
        best = std::max(best, std::max(pos, -neg));
    }
    return best;
}

/// Alternating subset ascent; a lower bound on the exact norm, used beyond
/// the exact enumeration limit.
double heuristic_norm(const std::vector<std::vector<double>>& m, std::uint64_t norm_seed,
                      int starts) {
    const int n = int(m.size());
    std::vector<char> in_s(static_cast<std::size_t>(n));
    std::vector<double> col(static_cast<std::size_t>(n)), row(static_cast<std::size_t>(n));
    double best = 0.0;

    auto run = [&](double sign) {
        for (int iter = 0; iter < 64; ++iter) {
            for (int t = 0; t < n; ++t) {
                double acc = 0.0;
                for (int s = 0; s < n; ++s)
                    if (in_s[std::size_t(s)]) acc += m[std::size_t(s)][std::size_t(t)];
                col[std::size_t(t)] = acc;
            }
            double v = 0.0;
            for (int t = 0; t < n; ++t)
                if (sign * col[std::size_t(t)] > 0.0) v += sign * col[std::size_t(t)];
            best = std::max(best, v);
            for (int s = 0; s < n; ++s) {
                double acc = 0.0;
                for (int t = 0; t < n; ++t)
                    if (sign * col[std::size_t(t)] > 0.0) acc += m[std::size_t(s)][std::size_t(t)];
                row[std::size_t(s)] = acc;
            }
            bool changed = false;
            for (int s = 0; s < n; ++s) {
                const char want = sign * row[std::size_t(s)] > 0.0 ? 1 : 0;
                if (want != in_s[std::size_t(s)]) {
                    in_s[std::size_t(s)] = want;
                    changed = true;
                }
            }
            if (!changed) break;
        }
    };

    for (int start = 0; start < starts + 2; ++start) {
        if (start == 0) {
            std::fill(in_s.begin(), in_s.end(), 1);
        } else if (start == 1) {
            for (int s = 0; s < n; ++s) {
                double acc = 0.0;
                for (int t = 0; t < n; ++t) acc += m[std::size_t(s)][std::size_t(t)];
                in_s[std::size_t(s)] = acc > 0.0 ? 1 : 0;
            }
        } else {
            Rng rng = Rng::substream(norm_seed, std::uint64_t(start));
            for (int s = 0; s < n; ++s) in_s[std::size_t(s)] = rng.u01() < 0.5 ? 1 : 0;
        }
        auto saved = in_s;
        run(1.0);
        in_s = saved;
        run(-1.0);
    }
    return best;
}

/// Cut norm of the coupled difference restricted to the active cells.
double overlay_norm(const Matrix& c, const Matrix& va, const Matrix& vb,
                    const DeltaCutOptions& opt, std::uint64_t norm_seed) {
    const auto cells = active_cells(c);
    const int a = int(cells.size());
    std::vector<std::vector<double>> m(static_cast<std::size_t>(a), std::vector<double>(static_cast<std::size_t>(a)));
    for (int x = 0; x < a; ++x)
        for (int y = 0; y < a; ++y) {
            const double diff = va[std::size_t(cells[std::size_t(x)].i)][std::size_t(cells[std::size_t(y)].i)] -
                                vb[std::size_t(cells[std::size_t(x)].j)][std::size_t(cells[std::size_t(y)].j)];
            m[std::size_t(x)][std::size_t(y)] = diff * cells[std::size_t(x)].mass * cells[std::size_t(y)].mass;
        }
    if (a <= opt.exact_norm_limit) return exact_norm(m);
    return heuristic_norm(m, norm_seed, opt.heuristic_starts);
}

Matrix northwest_corner(const std::vector<double>& rows, const std::vector<double>& cols) {
    Matrix c = zero_matrix(int(rows.size()), int(cols.size()));
    std::vector<double> r = rows, s = cols;
    std::size_t i = 0, j = 0;
    while (i < r.size() && j < s.size()) {
        if (r[i] <= s[j]) {
            c[i][j] += r[i];
            s[j] -= r[i];
            r[i] = 0.0;
            ++i;
        } else {
            c[i][j] += s[j];
            r[i] -= s[j];
            s[j] = 0.0;
            ++j;
        }
    }
    return c;
}

/// Random vertex: greedy fill over a shuffled cell order. Each step zeroes a
/// row or a column, so the support stays acyclic.
Matrix random_vertex(const std::vector<double>& rows, const std::vector<double>& cols, Rng& rng) {
    const int n1 = int(rows.size()), n2 = int(cols.size());
    std::vector<int> order(static_cast<std::size_t>(n1) * std::size_t(n2));
    for (int k = 0; k < int(order.size()); ++k) order[std::size_t(k)] = k;
    rng.shuffle(order.begin(), order.end());
    Matrix c = zero_matrix(n1, n2);
    std::vector<double> r = rows, s = cols;
    for (int k : order) {
        const int i = k / n2, j = k % n2;
        const double theta = std::min(r[std::size_t(i)], s[std::size_t(j)]);
        if (theta <= 0.0) continue;
        c[std::size_t(i)][std::size_t(j)] += theta;
        r[std::size_t(i)] -= theta;
        s[std::size_t(j)] -= theta;
        if (r[std::size_t(i)] <= s[std::size_t(j)])
            r[std::size_t(i)] = std::max(0.0, r[std::size_t(i)]);
        else
            s[std::size_t(j)] = std::max(0.0, s[std::size_t(j)]);
    }
    return c;
}

/// Pivot: adding the zero cell (i,j) closes exactly one alternating cycle
/// with the support; move the largest feasible mass around it. Returns false
/// when i and j sit in different support components.
bool pivot_cycle(Matrix& c, int pi, int pj) {
    const int n1 = int(c.size()), n2 = int(c[0].size());
    // BFS over the bipartite support graph from row pi to column pj
    std::vector<int> row_parent(static_cast<std::size_t>(n1), -2), col_parent(static_cast<std::size_t>(n2), -2);
    row_parent[std::size_t(pi)] = -1;
    std::deque<std::pair<bool, int>> queue; // (is_row, index)
    queue.emplace_back(true, pi);
    while (!queue.empty() && col_parent[std::size_t(pj)] == -2) {
        auto [is_row, idx] = queue.front();
        queue.pop_front();
        if (is_row) {
            for (int j = 0; j < n2; ++j)
                if (c[std::size_t(idx)][std::size_t(j)] > 0.0 && col_parent[std::size_t(j)] == -2) {
                    col_parent[std::size_t(j)] = idx;
                    queue.emplace_back(false, j);
                }
        } else {
            for (int i = 0; i < n1; ++i)
                if (c[std::size_t(i)][std::size_t(idx)] > 0.0 && row_parent[std::size_t(i)] == -2) {
                    row_parent[std::size_t(i)] = idx;
                    queue.emplace_back(true, i);
                }
        }
    }
    if (col_parent[std::size_t(pj)] == -2) return false;

    // path pj <- row <- col <- ... <- pi; minus cells are (row, parent col)
    std::vector<std::pair<int, int>> minus, plus;
    int j = pj;
    while (true) {
        const int i = col_parent[std::size_t(j)];
        minus.emplace_back(i, j);
        if (i == pi) break;
        j = row_parent[std::size_t(i)];
        plus.emplace_back(i, j);
    }
    double theta = c[std::size_t(minus[0].first)][std::size_t(minus[0].second)];
    for (auto [i2, j2] : minus) theta = std::min(theta, c[std::size_t(i2)][std::size_t(j2)]);
    if (theta <= 0.0) return false;
    c[std::size_t(pi)][std::size_t(pj)] += theta;
    for (auto [i2, j2] : plus) c[std::size_t(i2)][std::size_t(j2)] += theta;
    for (auto [i2, j2] : minus) {
        c[std::size_t(i2)][std::size_t(j2)] -= theta;
        if (c[std::size_t(i2)][std::size_t(j2)] <= 0.0) c[std::size_t(i2)][std::size_t(j2)] = 0.0;
    }
    return true;
}

struct RestartResult {
    double norm = 0.0;
    Matrix coupling;
};

RestartResult run_restart(const StepFunction& a, const StepFunction& b, int restart,
                          std::uint64_t seed, const DeltaCutOptions& opt,
                          std::uint64_t norm_seed) {
    Matrix c;
    if (restart == 0) {
        c = northwest_corner(a.mass, b.mass);
    } else {
        Rng rng = Rng::substream(seed, std::uint64_t(restart));
        c = random_vertex(a.mass, b.mass, rng);
    }
    double norm = overlay_norm(c, a.values, b.values, opt, norm_seed);

    if (a.parts() + b.parts() - 1 <= opt.pivot_limit) {
        int accepted = 0;
        bool improved = true;
        while (improved && accepted < opt.max_pivot_rounds) {
            improved = false;
            for (int i = 0; i < a.parts() && accepted < opt.max_pivot_rounds; ++i)
                for (int j = 0; j < b.parts() && accepted < opt.max_pivot_rounds; ++j) {
                    if (c[std::size_t(i)][std::size_t(j)] > 0.0) continue;
                    Matrix trial = c;
                    if (!pivot_cycle(trial, i, j)) continue;
                    const double trial_norm =
                        overlay_norm(trial, a.values, b.values, opt, norm_seed);
                    if (trial_norm < norm - 1e-15) {
                        c = std::move(trial);
                        norm = trial_norm;
                        improved = true;
                        ++accepted;
                    }
                }
        }
    }
    return {norm, std::move(c)};
}

/// Ascending sort key for alignment preconditioning: unweighted value row
/// and column sums, then mass, then the full rows for tie-breaking.
std::vector<int> precondition_order(const StepFunction& f) {
    const int n = f.parts();
    std::vector<double> row_sum(static_cast<std::size_t>(n), 0.0), col_sum(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            row_sum[std::size_t(i)] += f.values[std::size_t(i)][std::size_t(j)];
            col_sum[std::size_t(j)] += f.values[std::size_t(i)][std::size_t(j)];
        }
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[std::size_t(i)] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        const auto kx = std::make_tuple(row_sum[std::size_t(x)], col_sum[std::size_t(x)],
                                        f.mass[std::size_t(x)]);
        const auto ky = std::make_tuple(row_sum[std::size_t(y)], col_sum[std::size_t(y)],
                                        f.mass[std::size_t(y)]);
        if (kx != ky) return kx < ky;
        if (f.values[std::size_t(x)] != f.values[std::size_t(y)])
            return f.values[std::size_t(x)] < f.values[std::size_t(y)];
        return x < y;
    });
    return order;
}

StepFunction apply_order(const StepFunction& f, const std::vector<int>& order) {
    const int n = f.parts();
    std::vector<double> mass(static_cast<std::size_t>(n));
    Matrix values = zero_matrix(n, n);
    for (int i = 0; i < n; ++i) {
        mass[std::size_t(i)] = f.mass[std::size_t(order[std::size_t(i)])];
        for (int j = 0; j < n; ++j)
            values[std::size_t(i)][std::size_t(j)] =
                f.values[std::size_t(order[std::size_t(i)])][std::size_t(order[std::size_t(j)])];
    }
    return StepFunction(std::move(mass), std::move(values));
}

bool canonical_before(const StepFunction& x, const StepFunction& y) {
    if (x.parts() != y.parts()) return x.parts() < y.parts();
    if (x.mass != y.mass) return x.mass < y.mass;
    return x.values < y.values;
}

} // namespace

CutDistanceBounds delta_cut_upper(const StepFunction& w1, const StepFunction& w2,
                                  std::uint64_t seed, DeltaCutOptions opt) {
    if (std::int64_t(w1.parts()) * std::int64_t(w2.parts()) > 10000)
        throw BudgetExceededError("coupling search limited to N1*N2 <= 1e4");

    const bool swapped = canonical_before(w2, w1);
    const StepFunction& first = swapped ? w2 : w1;
    const StepFunction& second = swapped ? w1 : w2;

    const auto order_a = precondition_order(first);
    const auto order_b = precondition_order(second);
    const StepFunction a = apply_order(first, order_a);
    const StepFunction b = apply_order(second, order_b);

    const std::uint64_t norm_seed = Rng::derive_seed(seed, 0x6e6f726dULL);
    const int restarts = std::max(1, opt.restarts);
    std::vector<RestartResult> results(static_cast<std::size_t>(restarts));

    const int threads = effective_threads(opt.threads);
    (void)threads;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (int r = 0; r < restarts; ++r)
        results[std::size_t(r)] = run_restart(a, b, r, seed, opt, norm_seed);

    int best = 0;
    for (int r = 1; r < restarts; ++r)
        if (results[std::size_t(r)].norm < results[std::size_t(best)].norm) best = r;

    // undo the preconditioning permutations, then the argument swap
    const Matrix& sorted = results[std::size_t(best)].coupling;
    Matrix c = zero_matrix(first.parts(), second.parts());
    for (int i = 0; i < first.parts(); ++i)
        for (int j = 0; j < second.parts(); ++j)
            c[std::size_t(order_a[std::size_t(i)])][std::size_t(order_b[std::size_t(j)])] =
                sorted[std::size_t(i)][std::size_t(j)];

    CutDistanceBounds bounds;
    bounds.upper = results[std::size_t(best)].norm;
    if (swapped) {
        Matrix t = zero_matrix(second.parts(), first.parts());
        for (int i = 0; i < first.parts(); ++i)
            for (int j = 0; j < second.parts(); ++j)
                t[std::size_t(j)][std::size_t(i)] = c[std::size_t(i)][std::size_t(j)];
        bounds.coupling = std::move(t);
    } else {
        bounds.coupling = std::move(c);
    }
    return bounds;
}

double delta_cut_lower(const StepFunction& w1, const StepFunction& w2,
                       const std::vector<Digraph>& family) {
    for (const auto* f : {&w1, &w2})
        for (const auto& row : f->values)
            for (double v : row)
                if (v < 0.0 || v > 1.0)
                    throw ParameterRangeError("lower bound needs values in [0,1]");
    double lower = 0.0;
    for (const Digraph& f : family) {
        const int m = f.edge_count();
        if (m == 0) continue;
        const double gap = std::abs(t_step_digraph(f, w1) - t_step_digraph(f, w2));
        lower = std::max(lower, gap / double(m));
    }
    return lower;
}

const std::vector<Digraph>& default_test_family() {
    static const std::vector<Digraph> family = [] {
        std::vector<Digraph> fam;
        {
            Digraph chain2(2);
            chain2.add_edge(1, 2);
            fam.push_back(chain2);
        }
        {
            Digraph chain2_pt(3);
            chain2_pt.add_edge(1, 2);
            fam.push_back(chain2_pt);
        }
        {
            Digraph chain3(3);
            chain3.add_edge(1, 2);
            chain3.add_edge(2, 3);
            chain3.add_edge(1, 3);
            fam.push_back(chain3);
        }
        {
            Digraph fork(3); // one element below two
            fork.add_edge(1, 2);
            fork.add_edge(1, 3);
            fam.push_back(fork);
        }
        {
            Digraph join(3); // two elements below one
            join.add_edge(1, 3);
            join.add_edge(2, 3);
            fam.push_back(join);
        }
        fam.push_back(digraph_d1());
        fam.push_back(digraph_d3());
        return fam;
    }();
    return family;
}

StepFunction permute_parts(const StepFunction& f, const std::vector<int>& sigma) {
    const int n = f.parts();
    std::vector<double> mass(static_cast<std::size_t>(n));
    Matrix values = zero_matrix(n, n);
    for (int i = 0; i < n; ++i) {
        mass[std::size_t(sigma[std::size_t(i)])] = f.mass[std::size_t(i)];
        for (int j = 0; j < n; ++j)
            values[std::size_t(sigma[std::size_t(i)])][std::size_t(sigma[std::size_t(j)])] =
                f.values[std::size_t(i)][std::size_t(j)];
    }
    return StepFunction(std::move(mass), std::move(values));
}

StepKernel permute_parts(const StepKernel& k, const std::vector<int>& sigma) {
    const int n = k.parts();
    std::vector<double> mass(static_cast<std::size_t>(n));
    Matrix values = zero_matrix(n, n);
    BitMatrix order(n);
    for (int i = 0; i < n; ++i) {
        mass[std::size_t(sigma[std::size_t(i)])] = k.mass[std::size_t(i)];
        for (int j = 0; j < n; ++j) {
            values[std::size_t(sigma[std::size_t(i)])][std::size_t(sigma[std::size_t(j)])] =
                k.values[std::size_t(i)][std::size_t(j)];
            if (k.part_order.get(i, j))
                order.set(sigma[std::size_t(i)], sigma[std::size_t(j)]);
        }
    }
    return StepKernel(std::move(mass), std::move(values), std::move(order));
}

std::vector<ConvergeRow> converge_experiment(const Kernel& sampler, const StepKernel& target,
                                             const std::vector<int>& sizes, int reps,
                                             std::uint64_t seed, DeltaCutOptions opt) {
    if (reps < 1) throw ParameterRangeError("need at least one replicate");
    const Poset chain2 = Poset::chain(2);
    const StepFunction target_fn = target.as_function();
    std::vector<ConvergeRow> rows;
    for (int n : sizes) {
        for (int rep = 0; rep < reps; ++rep) {
            const std::uint64_t s =
                Rng::derive_seed(Rng::derive_seed(seed, std::uint64_t(n)), std::uint64_t(rep));
            const Poset p = sample_wposet(sampler, n, s);
            const StepKernel wp = step_from_poset(p);
            ConvergeRow row;
            row.n = n;
            row.rep = rep;
            row.t_inj = t_inj_exact(chain2, p);
            row.delta_upper =
                delta_cut_upper(wp.as_function(), target_fn, Rng::derive_seed(s, 1), opt).upper;
            row.delta_lower = delta_cut_lower(wp.as_function(), target_fn, default_test_family());
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace posetlim
