#include "gridbo/acquisition.hpp"

#include <cmath>
#include <stdexcept>

namespace gridbo {

double beta_value(const BetaSchedule& schedule, int t, double gamma_prev) {
    if (t < 1) throw std::invalid_argument("beta_value: t must be >= 1");
    if (gamma_prev < 0.0) throw std::invalid_argument("beta_value: gamma_prev must be >= 0");
    if (schedule.kind == BetaKind::Practical) {
        return std::sqrt(std::log(static_cast<double>(t) + 2.0));
    }
    const double log_term = std::log(schedule.delta_divisor / schedule.delta);
    return schedule.norm_bound +
           schedule.noise_scale * std::sqrt(2.0 * (gamma_prev + 1.0 + log_term));
}

double ucb_shift(double norm_bound) {
    if (norm_bound < 0.0) throw std::invalid_argument("ucb_shift: B must be >= 0");
    return norm_bound;
}

double ts_shift(int grid_size, double delta, double beta, double v, double norm_bound) {
    if (grid_size < 1) throw std::invalid_argument("ts_shift: grid_size must be >= 1");
    if (delta <= 0.0 || delta > 1.0) throw std::invalid_argument("ts_shift: delta out of range");
    const double log_term = std::log(static_cast<double>(grid_size) / delta);
    return (1.0 + std::sqrt(2.0 * std::max(0.0, log_term))) * (beta + v) + norm_bound;
}

Eigen::VectorXd Acquisition::gradient(const Eigen::VectorXd&) const {
    throw std::invalid_argument("acquisition does not expose a gradient");
}

double UcbSurface::value(const Eigen::VectorXd& x) const {
    const auto [mean, var] = gp_->mean_var(x);
    return mean + beta_ * std::sqrt(var) + shift_;
}

Eigen::VectorXd UcbSurface::value_batch(const Eigen::MatrixXd& points) const {
    Eigen::VectorXd mean, var;
    gp_->mean_var_batch(points, mean, var);
    return (mean.array() + beta_ * var.array().max(0.0).sqrt() + shift_).matrix();
}

Eigen::VectorXd UcbSurface::gradient(const Eigen::VectorXd& x) const {
    const auto local = gp_->mean_var_grad(x);
    const double sigma = std::sqrt(local.var);
    if (sigma < 1e-12 || beta_ == 0.0) return local.grad_mean;
    // d sigma / dx = grad_var / (2 sigma)
    return local.grad_mean + (beta_ / (2.0 * sigma)) * local.grad_var;
}

double ucb_value(const GpPosterior& gp, double beta, double shift,
                 const Eigen::VectorXd& x) {
    if (beta < 0.0) throw std::invalid_argument("ucb_value: beta must be >= 0");
    return UcbSurface(gp, beta, shift).value(x);
}

TsSample ts_build(const GpPosterior& gp, Eigen::MatrixXd grid, double beta,
                  double v_tilde, double delta, double norm_bound, RngStream& rng) {
    if (v_tilde < 0.0) throw std::invalid_argument("ts_build: v_tilde must be >= 0");
    TsSample ts;
    ts.beta = beta;
    ts.v_tilde = v_tilde;
    ts.shift = ts_shift(static_cast<int>(grid.rows()), delta, beta, v_tilde, norm_bound);
    ts.values = gp.sample_on_grid(
        grid, [&](const Eigen::VectorXd&, double sigma) { return beta * sigma + v_tilde; },
        rng);
    ts.values.array() += ts.shift;
    ts.grid = std::move(grid);
    return ts;
}

}  // namespace gridbo
