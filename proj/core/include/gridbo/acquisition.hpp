#pragma once

#include <Eigen/Dense>

#include "gridbo/gp.hpp"

namespace gridbo {

enum class BetaKind { Theoretical, Practical };

/// Exploration-multiplier schedule. Theoretical:
/// beta_t = B + R * sqrt(2 * (gamma_{t-1} + 1 + log(divisor / delta))).
/// Practical: beta_t = sqrt(log(t + 2)).
struct BetaSchedule {
    BetaKind kind = BetaKind::Practical;
    double norm_bound = 1.0;  // B
    double noise_scale = 0.0;  // R
    double delta = 0.1;
    int delta_divisor = 1;  // 1, 2 or 3
};

double beta_value(const BetaSchedule& schedule, int t, double gamma_prev);

/// Nonnegativity shift for the UCB surface: the RKHS norm bound B.
double ucb_shift(double norm_bound);

/// Nonnegativity shift for a TS grid sample:
/// (1 + sqrt(2 log(grid_size / delta))) * (beta + v) + B.
double ts_shift(int grid_size, double delta, double beta, double v, double norm_bound);

/// Evaluatable acquisition surface. Grid solvers use value_batch; local-search
/// solvers use value and, when available, gradient.
class Acquisition {
public:
    virtual ~Acquisition() = default;
    virtual double value(const Eigen::VectorXd& x) const = 0;
    virtual Eigen::VectorXd value_batch(const Eigen::MatrixXd& points) const {
        Eigen::VectorXd out(points.rows());
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
            out[i] = value(points.row(i).transpose());
        }
        return out;
    }
    virtual bool has_gradient() const { return false; }
    virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
};

/// UCB surface mu + beta * sigma + shift with analytic gradient.
class UcbSurface final : public Acquisition {
public:
    UcbSurface(const GpPosterior& gp, double beta, double shift)
        : gp_(&gp), beta_(beta), shift_(shift) {}

    double value(const Eigen::VectorXd& x) const override;
    Eigen::VectorXd value_batch(const Eigen::MatrixXd& points) const override;
    bool has_gradient() const override { return true; }
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;

    double beta() const { return beta_; }
    double shift() const { return shift_; }

private:
    const GpPosterior* gp_;
    double beta_;
    double shift_;
};

double ucb_value(const GpPosterior& gp, double beta, double shift,
                 const Eigen::VectorXd& x);

/// TS acquisition: one posterior sample over a finite grid, with per-point
/// std beta * sigma + v_tilde. Values are stored shifted by `shift`.
struct TsSample {
    Eigen::MatrixXd grid;
    Eigen::VectorXd values;  // shifted sample values
    double beta = 0.0;
    double v_tilde = 0.0;
    double shift = 0.0;
};

TsSample ts_build(const GpPosterior& gp, Eigen::MatrixXd grid, double beta,
                  double v_tilde, double delta, double norm_bound, RngStream& rng);

}  // namespace gridbo
