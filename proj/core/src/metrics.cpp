#include "gridbo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gridbo {

void InaccuracyLedger::append(double eta_hat, double eta_tilde, double beta_t,
                              double gamma_t) {
    eta.push_back(eta_hat);
    eta_floor.push_back(eta_tilde);
    const double prev_worst = m_worst.empty() ? 0.0 : m_worst.back();
    const double prev_measured = m_measured.empty() ? 0.0 : m_measured.back();
    m_worst.push_back(prev_worst + (1.0 - eta_tilde));
    m_measured.push_back(prev_measured +
                         (std::isnan(eta_hat) ? 0.0 : (1.0 - eta_hat)));
    beta.push_back(beta_t);
    gamma.push_back(gamma_t);
}

double instantaneous_regret(double f_star, double f_xt) { return f_star - f_xt; }

std::vector<double> realized_info_gain(const std::vector<GpPosterior>& chain) {
    std::vector<double> gamma;
    gamma.reserve(chain.size());
    for (const auto& gp : chain) gamma.push_back(gp.info_gain());
    return gamma;
}

double simple_regret(const RunTrace& trace) {
    if (trace.rows.empty()) throw std::invalid_argument("simple_regret: empty trace");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& row : trace.rows) best = std::max(best, row.f_value);
    return trace.f_star - best;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("regression_slope: need >= 2 paired points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SublinearityReport sublinearity_diagnostic(const std::vector<double>& cum_regret) {
    const std::size_t T = cum_regret.size();
    if (T < 10) throw std::invalid_argument("sublinearity_diagnostic: need >= 10 points");
    SublinearityReport report;
    for (double q : {0.25, 0.5, 0.75, 1.0}) {
        const std::size_t t = std::max<std::size_t>(1, static_cast<std::size_t>(q * T));
        report.avg_regret_at_quartiles.push_back(cum_regret[t - 1] /
                                                 static_cast<double>(t));
    }
    std::vector<double> lx, ly;
    for (std::size_t t = T / 2; t < T; ++t) {
        if (cum_regret[t] > 0.0) {
            lx.push_back(std::log(static_cast<double>(t + 1)));
            ly.push_back(std::log(cum_regret[t]));
        }
    }
    if (lx.size() >= 2) {
        report.loglog_slope = regression_slope(lx, ly);
    }
    const double half = cum_regret[T / 2 - 1] / static_cast<double>(T / 2);
    const double full = cum_regret[T - 1] / static_cast<double>(T);
    report.sublinear_consistent = report.loglog_slope < 0.98 && full < half;
    return report;
}

}  // namespace gridbo
