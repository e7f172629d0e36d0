#include "gridbo/results.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gridbo {

namespace {

bool float_eq(double a, double b) {
    return a == b || (std::isnan(a) && std::isnan(b));
}

std::vector<std::string> split_csv_line(const std::string& line) {
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

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_field_double(const std::string& origin, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        fail(origin, line, "bad numeric field: " + v);
    }
}

}  // namespace

std::string format_float17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

bool ResultRow::operator==(const ResultRow& o) const {
    return experiment == o.experiment && function == o.function &&
           algorithm == o.algorithm && solver == o.solver && seed == o.seed &&
           t == o.t && x.size() == o.x.size() &&
           [&] {
               for (Eigen::Index i = 0; i < x.size(); ++i) {
                   if (!float_eq(x[i], o.x[i])) return false;
               }
               return true;
           }() &&
           float_eq(y, o.y) && float_eq(r, o.r) && float_eq(R, o.R) &&
           float_eq(eta_hat, o.eta_hat) && float_eq(beta, o.beta) &&
           float_eq(gamma, o.gamma) && float_eq(solve_ms, o.solve_ms) &&
           n_evals == o.n_evals;
}

std::vector<ResultRow> trace_to_rows(const RunTrace& trace,
                                     const std::string& experiment) {
    std::vector<ResultRow> rows;
    rows.reserve(trace.rows.size());
    for (const IterationRecord& rec : trace.rows) {
        ResultRow row;
        row.experiment = experiment;
        row.function = trace.objective;
        row.algorithm = trace.algorithm;
        row.solver = trace.solver;
        row.seed = trace.seed;
        row.t = rec.t;
        row.x = rec.x;
        row.y = rec.y;
        row.r = rec.regret;
        row.R = rec.cum_regret;
        row.eta_hat = rec.eta_hat;
        row.beta = rec.beta;
        row.gamma = rec.gamma;
        row.solve_ms = rec.solve_seconds * 1e3;
        row.n_evals = rec.n_evals;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string results_csv_header(int dim) {
    std::string h = "experiment,function,algorithm,solver,seed,t";
    for (int j = 0; j < dim; ++j) h += ",x" + std::to_string(j);
    h += ",y,r_t,R_t,eta_hat,beta_t,gamma_t,solve_ms,n_evals";
    return h;
}

std::string serialize_results_csv(const std::vector<ResultRow>& rows, int dim) {
    std::string out = results_csv_header(dim);
    out += '\n';
    for (const ResultRow& row : rows) {
        if (row.x.size() > dim) {
            throw std::invalid_argument("serialize_results_csv: row dimension " +
                                        std::to_string(row.x.size()) +
                                        " exceeds column count " + std::to_string(dim));
        }
        out += row.experiment;
        out += ',';
        out += row.function;
        out += ',';
        out += row.algorithm;
        out += ',';
        out += row.solver;
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        out += std::to_string(row.t);
        for (int j = 0; j < dim; ++j) {
            out += ',';
            if (j < row.x.size()) out += format_float17(row.x[j]);
        }
        out += ',';
        out += format_float17(row.y);
        out += ',';
        out += format_float17(row.r);
        out += ',';
        out += format_float17(row.R);
        out += ',';
        if (!std::isnan(row.eta_hat)) out += format_float17(row.eta_hat);
        out += ',';
        out += format_float17(row.beta);
        out += ',';
        out += format_float17(row.gamma);
        out += ',';
        out += format_float17(row.solve_ms);
        out += ',';
        out += std::to_string(row.n_evals);
        out += '\n';
    }
    return out;
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows,
                       int dim) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize_results_csv(rows, dim);
}

std::vector<ResultRow> parse_results_csv(const std::string& text,
                                         const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument(origin + ": empty results file");
    }
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 14 || header[0] != "experiment") {
        throw std::invalid_argument(origin + ": unrecognized results header");
    }
    // locate required columns by name so schema errors name the column
    const char* required[] = {"experiment", "function", "algorithm", "solver",
                              "seed",       "t",        "y",         "r_t",
                              "R_t",        "eta_hat",  "beta_t",    "gamma_t",
                              "solve_ms",   "n_evals"};
    for (const char* col : required) {
        bool found = false;
        for (const std::string& h : header) {
            if (h == col) { found = true; break; }
        }
        if (!found) {
            throw std::invalid_argument(origin + ": missing column '" +
                                        std::string(col) + "'");
        }
    }
    const int dim = static_cast<int>(header.size()) - 14;
    for (int j = 0; j < dim; ++j) {
        if (header[6 + j] != "x" + std::to_string(j)) {
            throw std::invalid_argument(origin + ": coordinate columns must be x0..x" +
                                        std::to_string(dim - 1));
        }
    }

    std::vector<ResultRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size()) {
            fail(origin, lineno, "expected " + std::to_string(header.size()) +
                                     " fields, got " + std::to_string(f.size()));
        }
        ResultRow row;
        row.experiment = f[0];
        row.function = f[1];
        row.algorithm = f[2];
        row.solver = f[3];
        row.seed = static_cast<std::uint64_t>(
            std::stoull(f[4]));
        row.t = static_cast<int>(parse_field_double(origin, lineno, f[5]));
        int d = dim;
        while (d > 0 && f[6 + d - 1].empty()) --d;
        row.x.resize(d);
        for (int j = 0; j < d; ++j) {
            row.x[j] = parse_field_double(origin, lineno, f[6 + j]);
        }
        int c = 6 + dim;
        row.y = parse_field_double(origin, lineno, f[c++]);
        row.r = parse_field_double(origin, lineno, f[c++]);
        row.R = parse_field_double(origin, lineno, f[c++]);
        row.eta_hat = f[c].empty() ? std::numeric_limits<double>::quiet_NaN()
                                   : parse_field_double(origin, lineno, f[c]);
        ++c;
        row.beta = parse_field_double(origin, lineno, f[c++]);
        row.gamma = parse_field_double(origin, lineno, f[c++]);
        row.solve_ms = parse_field_double(origin, lineno, f[c++]);
        row.n_evals = static_cast<long>(parse_field_double(origin, lineno, f[c++]));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_results_csv(buf.str(), path);
}

int max_dim(const std::vector<ResultRow>& rows) {
    int d = 0;
    for (const ResultRow& row : rows) {
        d = std::max(d, static_cast<int>(row.x.size()));
    }
    return d;
}

}  // namespace gridbo
