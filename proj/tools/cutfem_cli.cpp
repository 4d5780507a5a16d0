// Command-line driver for convergence and cut-position robustness studies.

#include "cutfem/experiment.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>

namespace {

bool in_range(const std::optional<double>& v, double lo, double hi) {
    return v && *v >= lo && *v <= hi;
}

cutfem::Vec3 parse_vec3(const std::vector<double>& v, const char* what) {
    if (v.size() != 3) throw CLI::ValidationError(what, "expects three comma-separated values");
    return {v[0], v[1], v[2]};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cut finite element solver for the coupled bulk-surface model problem on a sphere"};
    app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");

    cutfem::RunConfig cfg;
    std::string mode = "convergence";
    std::string cond = "auto";
    std::vector<double> center{0.0, 0.0, 0.0};
    std::vector<double> box_origin{-1.5, -1.5, -1.5};
    std::vector<double> box_extents{3.0, 3.0, 3.0};
    std::uint64_t jitter_seed = 0;
    bool check = false;

    app.add_option("--mode", mode, "convergence | robustness")
        ->check(CLI::IsMember({"convergence", "robustness"}))
        ->capture_default_str();
    app.add_option("--h0", cfg.h0, "coarsest mesh size (fixed size for robustness)")->capture_default_str();
    app.add_option("--levels", cfg.levels, "number of halvings of h0")->capture_default_str();
    app.add_option("--h-list", cfg.h_list, "explicit mesh sizes, overriding --h0/--levels")->delimiter(',');
    app.add_option("--tau-b", cfg.coeffs.tau_B, "bulk ghost-penalty weight")->capture_default_str();
    app.add_option("--tau-s", cfg.coeffs.tau_S, "surface ghost-penalty weight")->capture_default_str();
    app.add_option("--kb", cfg.coeffs.k_B, "bulk conductivity")->capture_default_str();
    app.add_option("--ks", cfg.coeffs.k_S, "surface conductivity")->capture_default_str();
    app.add_option("--bb", cfg.coeffs.b_B, "bulk exchange coefficient")->capture_default_str();
    app.add_option("--bs", cfg.coeffs.b_S, "surface exchange coefficient")->capture_default_str();
    app.add_option("--center", center, "sphere center x,y,z")->delimiter(',')->expected(3);
    app.add_option("--radius", cfg.radius, "sphere radius")->capture_default_str();
    app.add_option("--box-origin", box_origin, "background box origin x,y,z")->delimiter(',')->expected(3);
    app.add_option("--box-extents", box_extents, "background box extents x,y,z")->delimiter(',')->expected(3);
    auto* seed_opt = app.add_option("--jitter-seed", jitter_seed, "seed for sphere-center offsets");
    app.add_option("--jitter-amp", cfg.jitter_amp, "offset amplitude per axis (< h0/2)")->capture_default_str();
    app.add_option("--jitter-count", cfg.jitter_count, "number of offsets")->capture_default_str();
    app.add_option("--csv", cfg.csv_path, "CSV output path");
    app.add_option("--vtk", cfg.vtk_prefix, "VTK output prefix");
    app.add_option("--matrix", cfg.matrix_prefix, "Matrix Market output prefix");
    app.add_option("--cond", cond, "condition number: dense | iterative | auto | off")
        ->check(CLI::IsMember({"dense", "iterative", "auto", "off"}))
        ->capture_default_str();
    app.add_option("--dense-limit", cfg.dense_limit, "largest system solved densely in auto mode")
        ->capture_default_str();
    app.add_flag("--check", check,
                 "exit nonzero unless final-level EOCs are in [1.7,2.3] (L2) and [0.8,1.2] (H1), or, in robustness "
                 "mode, the kappa max/min ratio is <= 10 and L2 errors vary by <= 3x");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.center = parse_vec3(center, "--center");
        cfg.box_origin = parse_vec3(box_origin, "--box-origin");
        cfg.box_extents = parse_vec3(box_extents, "--box-extents");
        cfg.cond = cutfem::parse_cond_mode(cond);
        if (seed_opt->count() > 0) cfg.jitter_seed = jitter_seed;

        if (mode == "convergence") {
            const auto results = cutfem::run_convergence_study(cfg, &std::cout);
            std::vector<cutfem::ConvergenceRecord> records;
            for (const auto& r : results) records.push_back(r.record);
            std::cout << '\n';
            cutfem::write_csv(std::cout, records);
            if (check) {
                const auto& last = records.back();
                const bool ok = in_range(last.eocL2_B, 1.7, 2.3) && in_range(last.eocL2_S, 1.7, 2.3) &&
                                in_range(last.eocH1_B, 0.8, 1.2) && in_range(last.eocH1_S, 0.8, 1.2);
                std::cout << (ok ? "check passed\n" : "check FAILED\n");
                return ok ? 0 : 1;
            }
        } else {
            const auto res = cutfem::run_robustness_sweep(cfg, &std::cout);
            std::cout << "kappa max/min = " << res.kappa_ratio << "  L2_B max/min = " << res.l2_ratio_B
                      << "  L2_S max/min = " << res.l2_ratio_S << '\n';
            if (check) {
                const bool ok = (cfg.cond == cutfem::CondMode::Off || res.kappa_ratio <= 10.0) &&
                                res.l2_ratio_B <= 3.0 && res.l2_ratio_S <= 3.0;
                std::cout << (ok ? "check passed\n" : "check FAILED\n");
                return ok ? 0 : 1;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
