#pragma once

#include <cstdint>
#include <vector>

#include "posetlim/poset.hpp"

namespace posetlim {

/// Finite-type function on a probability space: a partition into N parts
/// with masses summing to 1 and one value per part pair. Values are
/// unrestricted reals so differences of kernels fit here too.
struct StepFunction {
    std::vector<double> mass;
    std::vector<std::vector<double>> values;

    StepFunction(std::vector<double> mass_, std::vector<std::vector<double>> values_);

    int parts() const { return int(mass.size()); }
};

/// Finite-type kernel: step function with values in [0,1] and a strict
/// order on parts. Positive values only occur on ordered part pairs, and a
/// positive two-step chain forces the composite value to 1.
struct StepKernel {
    std::vector<double> mass;
    std::vector<std::vector<double>> values;
    BitMatrix part_order;

    StepKernel(std::vector<double> mass_, std::vector<std::vector<double>> values_,
               BitMatrix part_order_);

    int parts() const { return int(mass.size()); }
    StepFunction as_function() const { return StepFunction(mass, values); }
};

/// Two-part step form of the two-point kernel: masses 1/2, value p on the
/// single ordered pair.
StepKernel step_two_point(double p);

/// Step kernel of a finite poset: one part per element, uniform masses,
/// 0/1 values from the relation.
StepKernel step_from_poset(const Poset& p);

/// Rectangular cut norm: max over part subsets S, T of
/// |sum_{i in S, j in T} values[i][j] mass[i] mass[j]|. Exact subset
/// enumeration, parts <= 24.
double cut_norm_rect(const StepFunction& f);

struct CutNormWitness {
    double value = 0.0;
    std::uint32_t s_mask = 0;
    std::uint32_t t_mask = 0;
};

/// cut_norm_rect with the maximizing subsets; ties resolved toward the
/// smallest S mask.
CutNormWitness cut_norm_rect_witness(const StepFunction& f);

/// Functional cut norm: sup over |f|,|g| <= 1 of the bilinear form. The
/// optimum sits at sign vectors, enumerated exactly; parts <= 24.
double cut_norm_func(const StepFunction& f);

/// sum values[i][j] mass[i] mass[j]
double step_integral(const StepFunction& f);
/// sum |values[i][j]| mass[i] mass[j]
double step_l1_norm(const StepFunction& f);

/// Density of a simple digraph in a step function:
/// sum over part assignments c of prod mass[c(i)] prod_{edges ij} values[c(i)][c(j)].
/// Enumeration bound N^|F| <= 1e8.
double t_step_digraph(const Digraph& f, const StepFunction& w);

/// Poset density in a step kernel; the finite-sum form of the density
/// integral.
double t_kernel_exact_step(const Poset& q, const StepKernel& w);

} // namespace posetlim
