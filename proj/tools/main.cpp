// Command-line driver: single experiments and the temporal/spatial
// mesh-refinement studies.
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acnc/errors.hpp"
#include "acnc/experiments.hpp"

namespace {

void print_rows(const std::vector<acnc::ConvergenceRow>& rows, const char* label) {
    std::printf("%-12s %-12s %-14s %-10s %-14s %-10s\n", label, "fine", "err_l2", "rate_l2",
                "err_h1", "rate_h1");
    for (const auto& r : rows) {
        std::printf("%-12.6g %-12.6g %-14.6e ", r.coarse, r.fine, r.err_l2);
        std::isnan(r.rate_l2) ? std::printf("%-10s ", "-") : std::printf("%-10.6f ", r.rate_l2);
        std::printf("%-14.6e ", r.err_h1);
        std::isnan(r.rate_h1) ? std::printf("%-10s\n", "-") : std::printf("%-10.6f\n", r.rate_h1);
    }
}

int run_cmd(const std::string& config_path, const std::string& out_dir) {
    acnc::ExperimentConfig cfg = acnc::parse_config(config_path);
    cfg.out_dir = out_dir;
    const acnc::RunResult result = acnc::run_experiment(cfg);
    const auto& first = result.series.front();
    const auto& last = result.series.back();
    std::printf("steps: %ld  t: %.6g\n", last.step, last.t);
    std::printf("volume: %.12g -> %.12g (drift %.3e)\n", first.volume, last.volume,
                last.volume - first.volume);
    std::printf("energy (modified): %.12g -> %.12g\n", first.energy_modified, last.energy_modified);
    std::printf("energy (original): %.12g -> %.12g\n", first.energy_original, last.energy_original);
    std::printf("max residual ratio: %.3e\n", result.max_residual_ratio);
    if (!out_dir.empty()) std::printf("wrote %s/timeseries.csv and snapshots\n", out_dir.c_str());
    return 0;
}

int converge_time_cmd(const std::string& config_path, double dt_max, int levels,
                      const std::string& out_dir, bool paper_exact) {
    acnc::ExperimentConfig cfg = acnc::parse_config(config_path);
    if (paper_exact) {
        cfg.n = 256;
        cfg.t_end = 1.0;
    }
    std::vector<double> dts;
    for (int k = 0; k < levels; ++k) dts.push_back(dt_max * std::pow(0.5, k));
    const auto rows = acnc::converge_time(cfg, dts);
    print_rows(rows, "coarse_dt");
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        acnc::write_convergence(rows, out_dir + "/convergence_time.csv");
        std::printf("wrote %s/convergence_time.csv\n", out_dir.c_str());
    }
    return 0;
}

int converge_space_cmd(const std::string& config_path, int n_min, int levels,
                       const std::string& out_dir, bool paper_exact) {
    acnc::ExperimentConfig cfg = acnc::parse_config(config_path);
    if (paper_exact) {
        cfg.dt = 1e-4;
        cfg.t_end = 1.0;
    }
    std::vector<int> ns;
    for (int k = 0; k < levels; ++k) ns.push_back(n_min << k);
    const auto rows = acnc::converge_space(cfg, ns);
    print_rows(rows, "coarse_h");
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        acnc::write_convergence(rows, out_dir + "/convergence_space.csv");
        std::printf("wrote %s/convergence_space.csv\n", out_dir.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-difference solver for Allen-Cahn equations with nonlocal volume constraints"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    double dt_max = 0.1;
    int levels_t = 6;
    int n_min = 8;
    int levels_s = 5;
    bool paper_exact = false;

    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("--config", config_path, "key = value config file")->required();
    run->add_option("--out", out_dir, "output directory (default ./out)")->default_val("out");

    auto* ct = app.add_subcommand("converge-time", "temporal refinement study at fixed grid");
    ct->add_option("--config", config_path)->required();
    ct->add_option("--dt-max", dt_max, "coarsest time step")->default_val(0.1);
    ct->add_option("--levels", levels_t, "number of halvings")->default_val(6);
    ct->add_option("--out", out_dir, "directory for the CSV table");
    ct->add_flag("--paper-exact", paper_exact, "n = 256, T = 1 (long; not for CI)");

    auto* cs = app.add_subcommand("converge-space", "spatial refinement study at fixed dt");
    cs->add_option("--config", config_path)->required();
    cs->add_option("--n-min", n_min, "coarsest grid")->default_val(8);
    cs->add_option("--levels", levels_s, "number of doublings")->default_val(5);
    cs->add_option("--out", out_dir, "directory for the CSV table");
    cs->add_flag("--paper-exact", paper_exact, "dt = 1e-4, T = 1 (long; not for CI)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_cmd(config_path, out_dir);
        if (ct->parsed()) return converge_time_cmd(config_path, dt_max, levels_t, out_dir, paper_exact);
        if (cs->parsed()) return converge_space_cmd(config_path, n_min, levels_s, out_dir, paper_exact);
    } catch (const acnc::InvariantViolation& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return 2;
    } catch (const acnc::NonpositiveRadicand& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return 2;
    } catch (const acnc::NoConvergence& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const acnc::SingularCapacitance& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
