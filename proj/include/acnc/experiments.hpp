// Initial conditions, experiment driver, and the temporal/spatial
// mesh-refinement harnesses with rate computation.
#pragma once

#include <string>
#include <vector>

#include "acnc/iofmt.hpp"
#include "acnc/schemes.hpp"

namespace acnc {

enum class ICKind { Cosine, Drops, FromFile };

struct ExperimentConfig {
    ModelParams params;
    int n = 128;
    double dt = 1e-3;
    double t_end = 1.0;
    ICKind ic = ICKind::Cosine;
    std::string ic_path;       // used when ic == FromFile
    std::string out_dir;       // empty -> no files written
    long snapshot_every = 0;   // 0 -> no intermediate snapshots
    double solver_tol = 1e-10;

    // Throws std::invalid_argument unless dt > 0, n >= 2, t_end is 0 or an
    // integer multiple of dt (>= dt), and params validate.
    void validate() const;
    long step_count() const;  // round(t_end / dt)
};

// Parses the flat key = value config format. Unknown keys raise FormatError.
ExperimentConfig parse_config(const std::string& path);

// phi(x,y) = 1/2 + 1/2 cos(4 pi x) cos(4 pi y) at cell centers, bc applied.
Field ic_cosine(const Grid& g);

// Four nearly tangent drops of radius 0.2 with tanh transition layers of
// half-width delta = 0.01; first matching branch wins, bc applied.
Field ic_drops(const Grid& g);

struct RunResult {
    SchemeState final_state;
    std::vector<TimeSeriesRecord> series;  // includes the step-0 record
    double max_residual_ratio = 0.0;       // max res_max / (1 + ||phi||_2) over all steps
};

// Builds the IC, initializes the auxiliaries, advances to t_end and (when
// out_dir is set) writes timeseries.csv plus field snapshots.
RunResult run_experiment(const ExperimentConfig& cfg);

// Temporal Cauchy refinement at fixed grid: runs each dt to t_end, errors are
// norms of consecutive-run differences at the final time, rates are log2 of
// consecutive error ratios. dts must halve strictly.
std::vector<ConvergenceRow> converge_time(const ExperimentConfig& cfg, const std::vector<double>& dts);

// Spatial Cauchy refinement at fixed dt: ns must double strictly; the finer
// solution is restricted to the coarser grid by 2x2 cell averaging.
std::vector<ConvergenceRow> converge_space(const ExperimentConfig& cfg, const std::vector<int>& ns);

// rate_k = log2(errs[k] / errs[k+1]); throws NonpositiveError on errs <= 0.
std::vector<double> rates_from_errors(const std::vector<double>& errs);

// 2x2 cell averaging onto a grid of half the resolution; exact for the
// quadrature, so quad(restrict(f)) == quad(f) up to rounding.
Field restrict_to_coarse(const Field& fine);

}  // namespace acnc
