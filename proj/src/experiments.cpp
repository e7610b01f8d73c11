#include "acnc/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <string>

#include "acnc/errors.hpp"

namespace acnc {

void ExperimentConfig::validate() const {
    params.validate();
    if (n < 2) throw std::invalid_argument("config: n must be >= 2");
    if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
    if (!(solver_tol > 0.0)) throw std::invalid_argument("config: solver_tol must be positive");
    if (snapshot_every < 0) throw std::invalid_argument("config: snapshot_every must be >= 0");
    if (t_end != 0.0) {
        if (t_end < dt) throw std::invalid_argument("config: t_end must be 0 or >= dt");
        const double steps = t_end / dt;
        if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
            throw std::invalid_argument("config: t_end must be an integer multiple of dt");
        }
    }
    if (ic == ICKind::FromFile && ic_path.empty()) {
        throw std::invalid_argument("config: ic = file:<path> needs a path");
    }
}

long ExperimentConfig::step_count() const { return std::lround(t_end / dt); }

ExperimentConfig parse_config(const std::string& path) {
    ExperimentConfig cfg;
    for (const auto& [key, value] : parse_key_values(path)) {
        try {
            if (key == "gamma1") cfg.params.gamma1 = std::stod(value);
            else if (key == "gamma2") cfg.params.gamma2 = std::stod(value);
            else if (key == "mobility") cfg.params.mobility = std::stod(value);
            else if (key == "eta") cfg.params.eta = std::stod(value);
            else if (key == "c0") cfg.params.c0 = std::stod(value);
            else if (key == "constraint") {
                if (value == "classic") cfg.params.constraint = Constraint::Classic;
                else if (value == "penalty") cfg.params.constraint = Constraint::Penalty;
                else if (value == "lagrange") cfg.params.constraint = Constraint::Lagrange;
                else throw FormatError(path + ": constraint must be classic|penalty|lagrange, got '" + value + "'");
            } else if (key == "method") {
                if (value == "eq") cfg.params.method = Method::EQ;
                else if (value == "sav") cfg.params.method = Method::SAV;
                else throw FormatError(path + ": method must be eq|sav, got '" + value + "'");
            } else if (key == "n") cfg.n = std::stoi(value);
            else if (key == "dt") cfg.dt = std::stod(value);
            else if (key == "t_end") cfg.t_end = std::stod(value);
            else if (key == "ic") {
                if (value == "cosine") cfg.ic = ICKind::Cosine;
                else if (value == "drops") cfg.ic = ICKind::Drops;
                else if (value.rfind("file:", 0) == 0) {
                    cfg.ic = ICKind::FromFile;
                    cfg.ic_path = value.substr(5);
                } else {
                    throw FormatError(path + ": ic must be cosine|drops|file:<path>, got '" + value + "'");
                }
            } else if (key == "snapshot_every") cfg.snapshot_every = std::stol(value);
            else if (key == "solver_tol") cfg.solver_tol = std::stod(value);
            else throw FormatError(path + ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw FormatError(path + ": cannot parse value '" + value + "' for key '" + key + "'");
        }
    }
    return cfg;
}

Field ic_cosine(const Grid& g) {
    constexpr double four_pi = 4.0 * std::numbers::pi;
    Field f(g);
    for (int i = 1; i <= g.n; ++i) {
        for (int j = 1; j <= g.n; ++j) {
            f(i, j) = 0.5 + 0.5 * std::cos(four_pi * g.x(i)) * std::cos(four_pi * g.x(j));
        }
    }
    apply_neumann_bc(f);
    return f;
}

Field ic_drops(const Grid& g) {
    constexpr double delta = 0.01;
    constexpr double radius = 0.2;
    const double cx[4] = {0.3 - delta, 0.7 + delta, 0.3 - delta, 0.7 + delta};
    const double cy[4] = {0.3 - delta, 0.3 - delta, 0.7 + delta, 0.7 + delta};
    Field f(g);
    for (int i = 1; i <= g.n; ++i) {
        for (int j = 1; j <= g.n; ++j) {
            const double x = g.x(i);
            const double y = g.x(j);
            double r[4];
            for (int k = 0; k < 4; ++k) {
                r[k] = std::hypot(x - cx[k], y - cy[k]);
            }
            double v = 0.0;
            if (r[0] <= radius - delta || r[1] <= radius - delta || r[2] <= radius - delta ||
                r[3] <= radius - delta) {
                v = 1.0;
            } else {
                // transition annuli in listed order; first match wins
                for (int k = 0; k < 4; ++k) {
                    if (r[k] > radius - delta && r[k] < radius + delta) {
                        v = std::tanh((radius + delta - r[k]) / delta);
                        break;
                    }
                }
            }
            f(i, j) = v;
        }
    }
    apply_neumann_bc(f);
    return f;
}

namespace {

Field build_ic(const ExperimentConfig& cfg) {
    const Grid g(cfg.n);
    switch (cfg.ic) {
        case ICKind::Cosine:
            return ic_cosine(g);
        case ICKind::Drops:
            return ic_drops(g);
        case ICKind::FromFile: {
            auto [f, t] = read_field(cfg.ic_path);
            (void)t;
            if (f.n() != cfg.n) {
                throw std::invalid_argument("ic file '" + cfg.ic_path + "' has n = " +
                                            std::to_string(f.n()) + ", config wants " +
                                            std::to_string(cfg.n));
            }
            return std::move(f);
        }
    }
    throw std::logic_error("unreachable ic kind");
}

std::string snapshot_path(const std::string& dir, long step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "phi_%06ld.dat", step);
    return dir + "/" + buf;
}

TimeSeriesRecord to_record(const StepReport& rep) {
    return {rep.step, rep.t, rep.volume, rep.energy_modified, rep.energy_original, rep.cg_iters};
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const bool writing = !cfg.out_dir.empty();
    if (writing) std::filesystem::create_directories(cfg.out_dir);

    SchemeState state = init_state(build_ic(cfg), cfg.params);
    const EnergyPair e0 = discrete_energy(state, cfg.params);

    RunResult result{std::move(state), {}, 0.0};
    result.series.push_back({0, 0.0, result.final_state.v0, e0.modified, e0.original, 0});
    if (writing) write_field(result.final_state.phi, 0.0, snapshot_path(cfg.out_dir, 0));

    const SolverOptions opts{cfg.solver_tol};
    const long total = cfg.step_count();
    auto observer = [&](const StepReport& rep) {
        result.series.push_back(to_record(rep));
        result.max_residual_ratio =
            std::max(result.max_residual_ratio, rep.res_max() / (1.0 + rep.phi_norm_l2));
    };

    long done = 0;
    while (done < total) {
        const long chunk =
            cfg.snapshot_every > 0 ? std::min(cfg.snapshot_every, total - done) : total - done;
        result.final_state =
            advance(std::move(result.final_state), cfg.params, cfg.dt, chunk, observer, opts);
        done += chunk;
        if (writing && cfg.snapshot_every > 0 && done < total) {
            write_field(result.final_state.phi, done * cfg.dt, snapshot_path(cfg.out_dir, done));
        }
    }

    if (writing) {
        write_field(result.final_state.phi, total * cfg.dt, snapshot_path(cfg.out_dir, total));
        write_timeseries(result.series, cfg.out_dir + "/timeseries.csv");
    }
    return result;
}

std::vector<double> rates_from_errors(const std::vector<double>& errs) {
    for (double e : errs) {
        if (!(e > 0.0)) {
            throw NonpositiveError("rates_from_errors: error entries must be positive, got " +
                                   std::to_string(e));
        }
    }
    std::vector<double> rates;
    for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
        rates.push_back(std::log2(errs[k] / errs[k + 1]));
    }
    return rates;
}

Field restrict_to_coarse(const Field& fine) {
    const int nf = fine.n();
    if (nf % 2 != 0) throw std::invalid_argument("restrict_to_coarse: fine n must be even");
    Field coarse{Grid(nf / 2)};
    for (int i = 1; i <= nf / 2; ++i) {
        for (int j = 1; j <= nf / 2; ++j) {
            coarse(i, j) = 0.25 * (fine(2 * i - 1, 2 * j - 1) + fine(2 * i, 2 * j - 1) +
                                   fine(2 * i - 1, 2 * j) + fine(2 * i, 2 * j));
        }
    }
    apply_neumann_bc(coarse);
    return coarse;
}

namespace {

// Refinement-study errors at the finest pairs approach 1e-9; the inner
// solves must sit well below that.
constexpr double kStudyTol = 1e-12;

ConvergenceRow make_row(double coarse, double fine, double el2, double eh1,
                        const ConvergenceRow* prev) {
    ConvergenceRow row{coarse, fine, el2, std::nan(""), eh1, std::nan("")};
    if (prev != nullptr) {
        if (prev->err_l2 > 0.0 && el2 > 0.0) row.rate_l2 = std::log2(prev->err_l2 / el2);
        if (prev->err_h1 > 0.0 && eh1 > 0.0) row.rate_h1 = std::log2(prev->err_h1 / eh1);
    }
    return row;
}

}  // namespace

std::vector<ConvergenceRow> converge_time(const ExperimentConfig& cfg,
                                          const std::vector<double>& dts) {
    if (dts.size() < 2) throw std::invalid_argument("converge_time: need at least two dt values");
    for (std::size_t k = 0; k + 1 < dts.size(); ++k) {
        if (std::abs(dts[k + 1] - 0.5 * dts[k]) > 1e-12 * dts[k]) {
            throw std::invalid_argument("converge_time: dts must halve strictly");
        }
    }
    std::vector<Field> finals;
    for (double dt : dts) {
        ExperimentConfig run = cfg;
        run.dt = dt;
        run.out_dir.clear();
        run.snapshot_every = 0;
        run.solver_tol = std::min(cfg.solver_tol, kStudyTol);
        finals.push_back(run_experiment(run).final_state.phi);
    }
    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
        Field diff = lincomb(1.0, finals[k], -1.0, finals[k + 1]);
        apply_neumann_bc(diff);
        rows.push_back(make_row(dts[k], dts[k + 1], norm(diff, NormKind::L2),
                                norm(diff, NormKind::H1), rows.empty() ? nullptr : &rows.back()));
    }
    return rows;
}

std::vector<ConvergenceRow> converge_space(const ExperimentConfig& cfg, const std::vector<int>& ns) {
    if (ns.size() < 2) throw std::invalid_argument("converge_space: need at least two n values");
    for (std::size_t k = 0; k + 1 < ns.size(); ++k) {
        if (ns[k + 1] != 2 * ns[k]) {
            throw std::invalid_argument("converge_space: ns must double strictly");
        }
    }
    if (cfg.ic == ICKind::FromFile) {
        throw std::invalid_argument("converge_space: file initial conditions fix n");
    }
    std::vector<Field> finals;
    for (int n : ns) {
        ExperimentConfig run = cfg;
        run.n = n;
        run.out_dir.clear();
        run.snapshot_every = 0;
        run.solver_tol = std::min(cfg.solver_tol, kStudyTol);
        finals.push_back(run_experiment(run).final_state.phi);
    }
    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
        Field diff = lincomb(1.0, restrict_to_coarse(finals[k + 1]), -1.0, finals[k]);
        apply_neumann_bc(diff);
        rows.push_back(make_row(1.0 / ns[k], 1.0 / ns[k + 1], norm(diff, NormKind::L2),
                                norm(diff, NormKind::H1), rows.empty() ? nullptr : &rows.back()));
    }
    return rows;
}

}  // namespace acnc
