#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "posetlim/cutdist.hpp"
#include "posetlim/density.hpp"
#include "posetlim/io.hpp"
#include "posetlim/kernel.hpp"
#include "posetlim/wsampler.hpp"

namespace fs = std::filesystem;
using namespace posetlim;

namespace {

std::string join_argv(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

void print_density_csv(const DensityEstimate& est) {
    CsvWriter csv({"value", "stderr", "samples"});
    csv.add_row({format_double(est.value), format_double(est.se), std::to_string(est.samples)});
    std::fputs(csv.str().c_str(), stdout);
}

struct SampleArgs {
    std::string kernel;
    int n = 10;
    int reps = 1;
    std::uint64_t seed = 0;
    std::string out_dir;
};

int run_sample(const SampleArgs& a, const std::string& command) {
    const KernelPtr k = parse_kernel_spec(a.kernel);
    fs::create_directories(a.out_dir);
    std::vector<std::pair<std::string, std::uint64_t>> digests;
    for (int rep = 0; rep < a.reps; ++rep) {
        const Poset p = sample_wposet(*k, a.n, Rng::derive_seed(a.seed, std::uint64_t(rep)));
        char name[64];
        std::snprintf(name, sizeof(name), "poset_%04d.json", rep);
        const std::string path = (fs::path(a.out_dir) / name).string();
        write_poset_json(path, p);
        digests.emplace_back(name, fnv1a_file(path));
    }
    write_manifest_csv((fs::path(a.out_dir) / "manifest.csv").string(), command, a.seed, digests);
    std::printf("wrote %d posets to %s\n", a.reps, a.out_dir.c_str());
    return 0;
}

struct DensityArgs {
    std::string q_path, p_path;
    std::string mode = "exact";
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    bool require_closed = false;
};

int run_density(const DensityArgs& a) {
    const auto policy =
        a.require_closed ? ClosurePolicy::RequireClosed : ClosurePolicy::TakeClosure;
    const Poset q = read_poset_json(a.q_path, policy);
    const Poset p = read_poset_json(a.p_path, policy);
    DensityEstimate est;
    if (a.mode == "exact") {
        est = {t_exact(q, p), 0.0, 0};
    } else if (a.mode == "inj") {
        est = {t_inj_exact(q, p), 0.0, 0};
    } else if (a.mode == "ind") {
        est = {t_ind_exact(q, p), 0.0, 0};
    } else if (a.mode == "mc") {
        est = t_mc(q, p, a.samples, a.seed);
    } else {
        throw ParameterRangeError("mode must be one of exact|inj|ind|mc");
    }
    print_density_csv(est);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"poset limit toolkit: sampling, densities, kernels, cut distance"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // sample
    SampleArgs sample_args;
    auto* cmd_sample = app.add_subcommand("sample", "draw W-random posets, one JSON per replicate");
    cmd_sample->add_option("--kernel", sample_args.kernel, "kernel spec, e.g. two_point:0.5")
        ->required();
    cmd_sample->add_option("--n", sample_args.n, "poset size")->required();
    cmd_sample->add_option("--reps", sample_args.reps, "replicates")->default_val(1);
    cmd_sample->add_option("--seed", sample_args.seed, "random seed")->default_val(0);
    cmd_sample->add_option("--out", sample_args.out_dir, "output directory")->required();

    // density
    DensityArgs density_args;
    auto* cmd_density = app.add_subcommand("density", "density of one finite poset in another");
    cmd_density->add_option("--q", density_args.q_path, "pattern poset JSON")->required();
    cmd_density->add_option("--p", density_args.p_path, "host poset JSON")->required();
    cmd_density->add_option("--mode", density_args.mode, "exact|inj|ind|mc")->default_val("exact");
    cmd_density->add_option("--samples", density_args.samples, "MC samples")->default_val(100000);
    cmd_density->add_option("--seed", density_args.seed, "random seed")->default_val(0);
    cmd_density->add_flag("--require-closed", density_args.require_closed,
                          "reject non-closed relation files");

    // kernel-density
    std::string kd_q, kd_kernel;
    std::uint64_t kd_samples = 1000000, kd_seed = 0;
    bool kd_exact_step = false;
    auto* cmd_kd = app.add_subcommand("kernel-density", "density of a poset in a kernel");
    cmd_kd->add_option("--q", kd_q, "pattern poset JSON")->required();
    cmd_kd->add_option("--kernel", kd_kernel, "kernel spec")->required();
    cmd_kd->add_option("--samples", kd_samples, "MC samples")->default_val(1000000);
    cmd_kd->add_option("--seed", kd_seed, "random seed")->default_val(0);
    cmd_kd->add_flag("--exact-step", kd_exact_step,
                     "exact finite-type sum instead of Monte Carlo");

    // check-kernel
    std::string ck_kernel;
    std::uint64_t ck_triples = 100000, ck_seed = 0;
    double ck_tol = 0.0;
    auto* cmd_ck = app.add_subcommand("check-kernel", "sampled kernel axiom check");
    cmd_ck->add_option("--kernel", ck_kernel, "kernel spec")->required();
    cmd_ck->add_option("--triples", ck_triples, "sampled triples")->default_val(100000);
    cmd_ck->add_option("--seed", ck_seed, "random seed")->default_val(0);
    cmd_ck->add_option("--tol", ck_tol,
                       "violation tolerance (built-ins are exact; almost-everywhere "
                       "modified kernels may need 1e-9)")
        ->default_val(0.0);

    // classify
    std::string cl_digraph;
    auto* cmd_cl = app.add_subcommand("classify", "is a digraph a poset; witness if not");
    cmd_cl->add_option("--digraph", cl_digraph, "digraph JSON")->required();

    // cutdist
    std::string cd_w1, cd_w2, cd_out;
    int cd_restarts = 32;
    std::uint64_t cd_seed = 0;
    auto* cmd_cd = app.add_subcommand("cutdist", "cut distance bounds between step functions");
    cmd_cd->add_option("--w1", cd_w1, "first step function/kernel JSON")->required();
    cmd_cd->add_option("--w2", cd_w2, "second step function/kernel JSON")->required();
    cmd_cd->add_option("--restarts", cd_restarts, "coupling search restarts")->default_val(32);
    cmd_cd->add_option("--seed", cd_seed, "random seed")->default_val(0);
    cmd_cd->add_option("--out", cd_out, "also write the JSON result here");

    // converge
    std::string cv_kernel, cv_sizes = "20,50,100,200", cv_csv, cv_svg;
    int cv_reps = 3, cv_restarts = 32;
    std::uint64_t cv_seed = 0;
    auto* cmd_cv = app.add_subcommand("converge", "sampled posets against their limit kernel");
    cmd_cv->add_option("--kernel", cv_kernel, "kernel spec with a finite-type form")->required();
    cmd_cv->add_option("--sizes", cv_sizes, "comma separated sizes")->default_val("20,50,100,200");
    cmd_cv->add_option("--reps", cv_reps, "replicates per size")->default_val(3);
    cmd_cv->add_option("--seed", cv_seed, "random seed")->default_val(0);
    cmd_cv->add_option("--restarts", cv_restarts, "coupling search restarts")->default_val(32);
    cmd_cv->add_option("--csv", cv_csv, "output CSV path")->required();
    cmd_cv->add_option("--svg", cv_svg, "optional line chart");

    // gnp-order
    int gnp_n = 100;
    double gnp_p = 0.1;
    std::uint64_t gnp_seed = 0;
    std::string gnp_out;
    auto* cmd_gnp = app.add_subcommand("gnp-order", "random graph order");
    cmd_gnp->add_option("--n", gnp_n, "vertices")->required();
    cmd_gnp->add_option("--p", gnp_p, "edge probability")->required();
    cmd_gnp->add_option("--seed", gnp_seed, "random seed")->default_val(0);
    cmd_gnp->add_option("--out", gnp_out, "write the poset JSON here");

    // thin
    std::string th_kernel, th_q;
    double th_s = 1.0;
    std::uint64_t th_samples = 1000000, th_seed = 0;
    auto* cmd_th = app.add_subcommand("thin", "density under a thinned kernel");
    cmd_th->add_option("--kernel", th_kernel, "base kernel spec")->required();
    cmd_th->add_option("--s", th_s, "survival probability")->required();
    cmd_th->add_option("--q", th_q, "pattern poset JSON")->required();
    cmd_th->add_option("--samples", th_samples, "MC samples")->default_val(1000000);
    cmd_th->add_option("--seed", th_seed, "random seed")->default_val(0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_sample->parsed()) return run_sample(sample_args, join_argv(argc, argv));
        if (cmd_density->parsed()) return run_density(density_args);

        if (cmd_kd->parsed()) {
            const Poset q = read_poset_json(kd_q);
            if (kd_exact_step) {
                const auto step = step_form_of_spec(kd_kernel);
                if (!step)
                    throw ParameterRangeError("kernel spec has no exact finite-type form");
                print_density_csv({t_kernel_exact_step(q, *step), 0.0, 0});
            } else {
                const KernelPtr k = parse_kernel_spec(kd_kernel);
                print_density_csv(t_kernel_mc(q, *k, kd_samples, kd_seed));
            }
            return 0;
        }

        if (cmd_ck->parsed()) {
            const KernelPtr k = parse_kernel_spec(ck_kernel);
            const AxiomReport rep = check_axioms(*k, ck_triples, ck_seed, ck_tol);
            if (rep.pass()) {
                std::printf("PASS (%llu triples)\n",
                            static_cast<unsigned long long>(rep.triples_checked));
            } else {
                std::printf("FAIL w1=%llu w2=%llu order=%llu (%llu triples)\n",
                            static_cast<unsigned long long>(rep.w1_violations),
                            static_cast<unsigned long long>(rep.w2_violations),
                            static_cast<unsigned long long>(rep.order_violations),
                            static_cast<unsigned long long>(rep.triples_checked));
            }
            return 0;
        }

        if (cmd_cl->parsed()) {
            const Digraph g = read_digraph_json(cl_digraph);
            std::printf("%s\n", classify_digraph(g).to_string().c_str());
            return 0;
        }

        if (cmd_cd->parsed()) {
            const StepFunction w1 = read_step_function_json(cd_w1);
            const StepFunction w2 = read_step_function_json(cd_w2);
            DeltaCutOptions opt;
            opt.restarts = cd_restarts;
            CutDistanceBounds b = delta_cut_upper(w1, w2, cd_seed, opt);
            bool in_range = true;
            for (const auto* f : {&w1, &w2})
                for (const auto& row : f->values)
                    for (double v : row)
                        if (v < 0.0 || v > 1.0) in_range = false;
            if (in_range) {
                b.lower = delta_cut_lower(w1, w2, default_test_family());
            } else {
                std::fprintf(stderr, "values outside [0,1]; certified lower bound skipped\n");
            }
            const std::string body = bounds_to_json(b);
            std::printf("%s\n", body.c_str());
            if (!cd_out.empty()) {
                std::ofstream out(cd_out);
                out << body << "\n";
            }
            return 0;
        }

        if (cmd_cv->parsed()) {
            const auto step = step_form_of_spec(cv_kernel);
            if (!step)
                throw ParameterRangeError(
                    "kernel spec has no exact finite-type form; use two_point/trivial/"
                    "from_poset/step/thin");
            const KernelPtr sampler = parse_kernel_spec(cv_kernel);
            std::vector<int> sizes;
            for (const auto& tok : [&] {
                     std::vector<std::string> parts;
                     std::string cur;
                     for (char c : cv_sizes) {
                         if (c == ',') {
                             parts.push_back(cur);
                             cur.clear();
                         } else
                             cur.push_back(c);
                     }
                     parts.push_back(cur);
                     return parts;
                 }())
                sizes.push_back(std::stoi(tok));
            DeltaCutOptions opt;
            opt.restarts = cv_restarts;
            const auto rows = converge_experiment(*sampler, *step, sizes, cv_reps, cv_seed, opt);
            CsvWriter csv({"n", "rep", "t_inj_estimate", "delta_upper", "delta_lower"});
            for (const auto& row : rows)
                csv.add_row({std::to_string(row.n), std::to_string(row.rep),
                             format_double(row.t_inj), format_double(row.delta_upper),
                             format_double(row.delta_lower)});
            csv.write_file(cv_csv);
            if (!cv_svg.empty()) {
                std::vector<double> xs;
                std::vector<double> uppers, lowers;
                for (int n : sizes) {
                    double up = 0.0, lo = 0.0;
                    int cnt = 0;
                    for (const auto& row : rows)
                        if (row.n == n) {
                            up += row.delta_upper;
                            lo += row.delta_lower;
                            ++cnt;
                        }
                    xs.push_back(n);
                    uppers.push_back(up / std::max(1, cnt));
                    lowers.push_back(lo / std::max(1, cnt));
                }
                write_line_chart_svg(cv_svg, "cut distance bounds vs n", xs,
                                     {{"upper", uppers}, {"lower", lowers}});
            }
            std::printf("wrote %zu rows to %s\n", rows.size(), cv_csv.c_str());
            return 0;
        }

        if (cmd_gnp->parsed()) {
            Rng rng(gnp_seed);
            const Poset p = gnp_order(gnp_n, gnp_p, rng);
            const double t_chain2 =
                double(p.relation_count()) / (double(gnp_n) * double(gnp_n));
            CsvWriter csv({"n", "p", "relations", "t_chain2"});
            csv.add_row({std::to_string(gnp_n), format_double(gnp_p),
                         std::to_string(p.relation_count()), format_double(t_chain2)});
            std::fputs(csv.str().c_str(), stdout);
            if (!gnp_out.empty()) write_poset_json(gnp_out, p);
            return 0;
        }

        if (cmd_th->parsed()) {
            const Poset q = read_poset_json(th_q);
            const KernelPtr k = thin(parse_kernel_spec(th_kernel), th_s);
            print_density_csv(t_kernel_mc(q, *k, th_samples, th_seed));
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
