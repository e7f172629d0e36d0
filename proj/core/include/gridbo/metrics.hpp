#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gridbo/gp.hpp"
#include "gridbo/solvers.hpp"

namespace gridbo {

/// Per-iteration accuracy accounting. eta holds the measured accuracy ratios
/// (NaN when measurement is off); eta_floor the configured worst-case floors.
struct InaccuracyLedger {
    std::vector<double> eta;        // measured eta_hat, in (0, 1]
    std::vector<double> eta_floor;  // configured worst-case floor eta_tilde
    std::vector<double> m_worst;    // running sum of (1 - eta_floor)
    std::vector<double> m_measured; // running sum of (1 - eta_hat)
    std::vector<double> beta;
    std::vector<double> gamma;

    void append(double eta_hat, double eta_tilde, double beta_t, double gamma_t);
};

struct IterationRecord {
    int t = 0;
    Eigen::VectorXd x;
    double y = 0.0;         // possibly noisy observation
    double f_value = 0.0;   // noise-free objective value at x
    double regret = 0.0;    // instantaneous
    double cum_regret = 0.0;
    double eta_hat = std::numeric_limits<double>::quiet_NaN();
    double beta = 0.0;
    double gamma = 0.0;     // realized info gain after this iteration's update
    double solve_seconds = 0.0;
    double build_seconds = 0.0;  // TS sampling cost; zero for UCB
    long n_evals = 0;
};

struct RunTrace {
    std::string objective;
    std::string algorithm;
    std::string solver;
    std::uint64_t seed = 0;
    double f_star = 0.0;
    int n_init = 0;
    std::vector<IterationRecord> rows;

    double cumulative_regret() const {
        return rows.empty() ? 0.0 : rows.back().cum_regret;
    }
};

double instantaneous_regret(double f_star, double f_xt);

/// Realized information gain of each posterior in the chain.
std::vector<double> realized_info_gain(const std::vector<GpPosterior>& chain);

/// f_star minus the best noise-free value among the selected points.
double simple_regret(const RunTrace& trace);

struct SublinearityReport {
    std::vector<double> avg_regret_at_quartiles;  // R_t / t at T/4, T/2, 3T/4, T
    double loglog_slope = 0.0;  // fit of log R_t vs log t over the final half
    bool sublinear_consistent = false;
};

SublinearityReport sublinearity_diagnostic(const std::vector<double>& cum_regret);

/// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gridbo
