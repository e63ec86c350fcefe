#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "posetlim/cutdist.hpp"
#include "posetlim/kernel.hpp"
#include "posetlim/poset.hpp"
#include "posetlim/step.hpp"

namespace posetlim {

inline constexpr const char* kVersion = "0.1.0";

/// Poset file: {"n": int, "relations": [[i,j],...]} with 1-based labels.
/// The reader closes the relation transitively by default; RequireClosed
/// rejects non-closed input.
Poset read_poset_json(const std::string& path, ClosurePolicy policy = ClosurePolicy::TakeClosure);

/// Writes the transitive reduction (cover pairs) plus a "closed": false
/// marker; the default reader policy restores the full order.
void write_poset_json(const std::string& path, const Poset& p);

/// Digraph file: same shape as the poset file, edges taken literally
/// (loops allowed, no closure).
Digraph read_digraph_json(const std::string& path);

/// Step kernel file: {"mass":[...], "values":[[...]], "order":[[...]]}.
StepKernel read_step_kernel_json(const std::string& path);
void write_step_kernel_json(const std::string& path, const StepKernel& k);
/// Step function file: same without the order (an "order" key is ignored).
StepFunction read_step_function_json(const std::string& path);

std::string bounds_to_json(const CutDistanceBounds& b);

/// Kernel addressing by name:params, e.g. two_point:0.5, threshold:2,
/// total, trivial, product2d, interval, from_poset:path.json, step:path.json,
/// constant:0.5, thin:<base-spec>:0.3.
KernelPtr parse_kernel_spec(const std::string& spec);

/// Exact finite-type form of a kernel spec when one exists (two_point,
/// trivial, from_poset, step files, and thinnings of those).
std::optional<StepKernel> step_form_of_spec(const std::string& spec);

/// Floats in CSV output carry 12 significant digits.
std::string format_double(double v);

/// Minimal RFC-4180 writer; one header row, then data rows.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}
    void add_row(std::vector<std::string> row);
    std::string str() const;
    void write_file(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::uint64_t fnv1a_file(const std::string& path);

/// Run manifest: command line, seed, version, timestamp and one digest row
/// per output file. Everything except the timestamp row is reproducible.
void write_manifest_csv(const std::string& path, const std::string& command,
                        std::uint64_t seed,
                        const std::vector<std::pair<std::string, std::uint64_t>>& digests);

/// Tiny self-contained SVG line chart (one polyline per series).
void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::vector<double>& xs,
                          const std::vector<std::pair<std::string, std::vector<double>>>& series);

} // namespace posetlim
