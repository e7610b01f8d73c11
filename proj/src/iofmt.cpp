#include "acnc/iofmt.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "acnc/errors.hpp"

namespace acnc {

namespace {

// 17 significant digits round-trip a 64-bit real exactly.
std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_rate(double v) { return std::isnan(v) ? "-" : fmt_real(v); }

double parse_rate(const std::string& s) {
    return s == "-" ? std::nan("") : std::strtod(s.c_str(), nullptr);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "' for reading");
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void expect_header(std::istream& in, const std::string& expected, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ": empty file, expected header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected) {
        throw FormatError(path + ": bad header '" + line + "', expected '" + expected + "'");
    }
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

static const char* kTimeSeriesHeader = "step,t,volume,energy_modified,energy_original,cg_iters";

void write_timeseries(const std::vector<TimeSeriesRecord>& records, const std::string& path) {
    auto out = open_out(path);
    out << kTimeSeriesHeader << "\n";
    for (const auto& r : records) {
        out << r.step << ',' << fmt_real(r.t) << ',' << fmt_real(r.volume) << ','
            << fmt_real(r.energy_modified) << ',' << fmt_real(r.energy_original) << ','
            << r.cg_iters << "\n";
    }
    if (!out) throw FormatError("write failed on '" + path + "'");
}

std::vector<TimeSeriesRecord> read_timeseries(const std::string& path) {
    auto in = open_in(path);
    expect_header(in, kTimeSeriesHeader, path);
    std::vector<TimeSeriesRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cols = split_csv(line);
        if (cols.size() != 6) {
            throw FormatError(path + ": expected 6 columns, got " + std::to_string(cols.size()));
        }
        TimeSeriesRecord r;
        r.step = std::strtol(cols[0].c_str(), nullptr, 10);
        r.t = std::strtod(cols[1].c_str(), nullptr);
        r.volume = std::strtod(cols[2].c_str(), nullptr);
        r.energy_modified = std::strtod(cols[3].c_str(), nullptr);
        r.energy_original = std::strtod(cols[4].c_str(), nullptr);
        r.cg_iters = static_cast<int>(std::strtol(cols[5].c_str(), nullptr, 10));
        records.push_back(r);
    }
    return records;
}

void write_field(const Field& f, double t, const std::string& path) {
    auto out = open_out(path);
    const int n = f.n();
    out << "# " << n << ' ' << fmt_real(f.grid().h) << ' ' << fmt_real(t) << "\n";
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (j > 1) out << ' ';
            out << fmt_real(f(i, j));
        }
        out << "\n";
    }
    if (!out) throw FormatError("write failed on '" + path + "'");
}

std::pair<Field, double> read_field(const std::string& path) {
    auto in = open_in(path);
    std::string header;
    if (!std::getline(in, header)) throw FormatError(path + ": empty file");
    std::istringstream hs(header);
    std::string hash;
    int n = 0;
    double h = 0.0, t = 0.0;
    if (!(hs >> hash >> n >> h >> t) || hash != "#" || n < 2) {
        throw FormatError(path + ": malformed header '" + header + "'");
    }
    if (std::abs(h * n - 1.0) > 1e-12) {
        throw FormatError(path + ": header spacing " + fmt_real(h) + " inconsistent with n = " +
                          std::to_string(n));
    }
    Field f{Grid(n)};
    const long expected = static_cast<long>(n) * n;
    long count = 0;
    double v = 0.0;
    while (count < expected && (in >> v)) {
        f(static_cast<int>(count / n) + 1, static_cast<int>(count % n) + 1) = v;
        ++count;
    }
    if (count != expected) {
        throw FormatError(path + ": expected " + std::to_string(expected) + " values, found " +
                          std::to_string(count));
    }
    if (in >> v) {
        throw FormatError(path + ": expected " + std::to_string(expected) +
                          " values, found trailing data");
    }
    apply_neumann_bc(f);
    return {std::move(f), t};
}

static const char* kConvergenceHeader = "coarse,fine,err_l2,rate_l2,err_h1,rate_h1";

void write_convergence(const std::vector<ConvergenceRow>& rows, const std::string& path) {
    auto out = open_out(path);
    out << kConvergenceHeader << "\n";
    for (const auto& r : rows) {
        out << fmt_real(r.coarse) << ',' << fmt_real(r.fine) << ',' << fmt_real(r.err_l2) << ','
            << fmt_rate(r.rate_l2) << ',' << fmt_real(r.err_h1) << ',' << fmt_rate(r.rate_h1)
            << "\n";
    }
    if (!out) throw FormatError("write failed on '" + path + "'");
}

std::vector<ConvergenceRow> read_convergence(const std::string& path) {
    auto in = open_in(path);
    expect_header(in, kConvergenceHeader, path);
    std::vector<ConvergenceRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cols = split_csv(line);
        if (cols.size() != 6) {
            throw FormatError(path + ": expected 6 columns, got " + std::to_string(cols.size()));
        }
        ConvergenceRow r;
        r.coarse = std::strtod(cols[0].c_str(), nullptr);
        r.fine = std::strtod(cols[1].c_str(), nullptr);
        r.err_l2 = std::strtod(cols[2].c_str(), nullptr);
        r.rate_l2 = parse_rate(cols[3]);
        r.err_h1 = std::strtod(cols[4].c_str(), nullptr);
        r.rate_h1 = parse_rate(cols[5]);
        rows.push_back(r);
    }
    return rows;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw FormatError(path + ":" + std::to_string(lineno) + ": expected 'key = value', got '" +
                              line + "'");
        }
        pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return pairs;
}

}  // namespace acnc
