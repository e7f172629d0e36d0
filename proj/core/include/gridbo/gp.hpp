#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>

#include "gridbo/kernels.hpp"
#include "gridbo/rng.hpp"

namespace gridbo {

/// Exact GP posterior over observations (X, y) with homoscedastic noise
/// variance tau. Immutable from the caller's perspective: updated() returns a
/// new posterior. The Cholesky factor of (K + tau I) is extended by one
/// bordered row per update and rebuilt from scratch every 64 updates to cap
/// drift.
class GpPosterior {
public:
    GpPosterior(KernelSpec kernel, double noise, Eigen::MatrixXd X0,
                Eigen::VectorXd y0);

    GpPosterior updated(const Eigen::VectorXd& x_new, double y_new) const;

    std::pair<double, double> mean_var(const Eigen::VectorXd& x) const;

    void mean_var_batch(const Eigen::MatrixXd& queries, Eigen::VectorXd& mean,
                        Eigen::VectorXd& var) const;

    struct LocalExpansion {
        double mean;
        double var;
        Eigen::VectorXd grad_mean;
        Eigen::VectorXd grad_var;
    };
    LocalExpansion mean_var_grad(const Eigen::VectorXd& x) const;

    /// One draw from the multivariate normal over the grid rows with mean
    /// mu(grid) and covariance D * Corr * D, where Corr is the posterior
    /// correlation and D = diag(scale_fn(x_i, sigma_i)). Grid points whose
    /// posterior std is (numerically) zero contribute their mean only.
    Eigen::VectorXd sample_on_grid(
        const Eigen::MatrixXd& grid,
        const std::function<double(const Eigen::VectorXd&, double)>& scale_fn,
        RngStream& rng) const;

    /// Realized information gain 0.5 * log det(I + tau^{-1} K) of the current
    /// dataset, read off the Cholesky diagonal.
    double info_gain() const;

    Eigen::Index size() const { return y_.size(); }
    int dim() const { return static_cast<int>(X_.cols()); }
    const Eigen::MatrixXd& X() const { return X_; }
    const Eigen::VectorXd& y() const { return y_; }
    const Eigen::MatrixXd& chol() const { return chol_; }
    const KernelSpec& kernel() const { return kernel_; }
    double noise() const { return noise_; }

private:
    void refactor();
    // threshold below which a negative computed variance is a bug, not rounding
    double variance_error_floor() const;

    KernelSpec kernel_;
    double noise_;
    Eigen::MatrixXd X_;
    Eigen::VectorXd y_;
    Eigen::MatrixXd chol_;   // lower triangular factor of K + tau I (+ jitter)
    Eigen::VectorXd alpha_;  // (K + tau I)^{-1} y
    int updates_since_refactor_ = 0;
};

/// Factors a symmetric PSD matrix, retrying with diagonal jitter
/// 1e-10, 1e-8, 1e-6 before giving up. Returns the lower factor.
Eigen::MatrixXd cholesky_with_jitter(Eigen::MatrixXd A);

}  // namespace gridbo
