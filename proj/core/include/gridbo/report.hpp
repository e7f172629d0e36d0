#pragma once

#include <string>
#include <vector>

#include "gridbo/metrics.hpp"
#include "gridbo/results.hpp"

namespace gridbo {

struct CurveSummary {
    std::vector<int> t;
    std::vector<double> median;
    std::vector<double> q25;
    std::vector<double> q75;
};

/// Aggregate over the seeds of one (function, algorithm, solver) group.
struct GroupSummary {
    std::string function;
    std::string algorithm;
    std::string solver;
    int n_seeds = 0;
    double median_final_regret = 0.0;  // R_T
    double q25_final_regret = 0.0;
    double q75_final_regret = 0.0;
    double median_total_solve_ms = 0.0;
    double median_simple_regret = 0.0;
    SublinearityReport sublinearity;  // computed on the median R_t curve
    CurveSummary regret_curve;
};

struct Summary {
    std::vector<GroupSummary> groups;  // in order of first appearance
};

Summary summarize_results(const std::vector<ResultRow>& rows);

/// Writes summary.csv and plots/*.svg (median/IQR regret curves per function,
/// solve-time bars). The SVGs are self-contained and embed their source data
/// as structured comments.
void write_summary_files(const Summary& summary, const std::string& out_dir);

std::string render_summary_table(const Summary& summary);

/// Median and interquartile bounds of v (v is copied; empty input throws).
double median_of(std::vector<double> v);
double quantile_of(std::vector<double> v, double q);

/// Full summarize pipeline over a results directory. Returns the summary;
/// throws if results.csv is absent or malformed.
Summary summarize_dir(const std::string& results_dir);

}  // namespace gridbo
