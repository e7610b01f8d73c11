// Bit-stable text serialization: time series, convergence tables, field
// snapshots and key = value config files.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "acnc/grid.hpp"

namespace acnc {

struct TimeSeriesRecord {
    long step = 0;
    double t = 0.0;
    double volume = 0.0;
    double energy_modified = 0.0;
    double energy_original = 0.0;
    int cg_iters = 0;
};

// One row of a mesh-refinement table. `coarse`/`fine` hold the consecutive
// dt or h values; rates are NaN on the first row (rendered as "-").
struct ConvergenceRow {
    double coarse = 0.0;
    double fine = 0.0;
    double err_l2 = 0.0;
    double rate_l2 = 0.0;
    double err_h1 = 0.0;
    double rate_h1 = 0.0;
};

// CSV with header step,t,volume,energy_modified,energy_original,cg_iters;
// reals carry 17 significant digits, LF line endings.
void write_timeseries(const std::vector<TimeSeriesRecord>& records, const std::string& path);
std::vector<TimeSeriesRecord> read_timeseries(const std::string& path);

// Text snapshot: line 1 is "# n h t", then n rows of n interior values in
// row-major order. read_field validates the header, checks the value count
// and reapplies the Neumann bc.
void write_field(const Field& f, double t, const std::string& path);
std::pair<Field, double> read_field(const std::string& path);

// CSV with header coarse,fine,err_l2,rate_l2,err_h1,rate_h1; NaN rates
// render as "-" to match the usual table layout.
void write_convergence(const std::vector<ConvergenceRow>& rows, const std::string& path);
std::vector<ConvergenceRow> read_convergence(const std::string& path);

// Flat "key = value" file; '#' starts a comment, blank lines are skipped.
// Returns pairs in file order. Throws FormatError on a line without '='.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& path);

}  // namespace acnc
