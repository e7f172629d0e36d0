#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gridbo/metrics.hpp"

namespace gridbo {

/// One iteration of one run, in interchange form. x holds that run's actual
/// dimension; writers pad to the file's column count with empty cells.
struct ResultRow {
    std::string experiment;
    std::string function;
    std::string algorithm;
    std::string solver;
    std::uint64_t seed = 0;
    int t = 0;
    Eigen::VectorXd x;
    double y = 0.0;
    double r = 0.0;  // instantaneous regret
    double R = 0.0;  // cumulative regret
    double eta_hat = std::numeric_limits<double>::quiet_NaN();  // NaN = not measured
    double beta = 0.0;
    double gamma = 0.0;
    double solve_ms = 0.0;
    long n_evals = 0;

    bool operator==(const ResultRow& o) const;
};

std::vector<ResultRow> trace_to_rows(const RunTrace& trace, const std::string& experiment);

/// Header: experiment,function,algorithm,solver,seed,t,x0..x{dim-1},y,r_t,R_t,
/// eta_hat,beta_t,gamma_t,solve_ms,n_evals. Floats carry 17 significant
/// digits; unmeasured eta_hat and unused coordinates are empty cells.
std::string results_csv_header(int dim);
std::string serialize_results_csv(const std::vector<ResultRow>& rows, int dim);
void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows,
                       int dim);

std::vector<ResultRow> parse_results_csv(const std::string& text,
                                         const std::string& origin = "<string>");
std::vector<ResultRow> read_results_csv(const std::string& path);

/// Largest x-dimension over the rows (0 for an empty set).
int max_dim(const std::vector<ResultRow>& rows);

std::string format_float17(double x);

}  // namespace gridbo
