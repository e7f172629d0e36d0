#pragma once

#include <Eigen/Dense>

namespace gridbo {

enum class KernelFamily { SquaredExponential, Matern };

/// Stationary kernel with fixed hyperparameters. Lengthscale may be a single
/// value (isotropic) or one value per input dimension (ARD). With
/// output_scale = 1 the kernel satisfies k(x, x) <= 1 everywhere.
struct KernelSpec {
    KernelFamily family = KernelFamily::Matern;
    Eigen::VectorXd lengthscale = Eigen::VectorXd::Ones(1);
    double smoothness = 2.5;  // Matern nu; only 3/2, 5/2, 7/2 supported
    double output_scale = 1.0;

    static KernelSpec squared_exponential(double lengthscale);
    static KernelSpec matern(double nu, double lengthscale);

    /// Matern with nu < 2 is outside the smoothness range the regret theory
    /// covers; runs record this flag in their metadata.
    bool within_theory() const;
    void validate() const;
};

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y);

/// Gradient of k(x, y) with respect to x. Zero at x == y for all supported
/// kernels (stationary maximum).
Eigen::VectorXd kernel_grad(const KernelSpec& spec, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y);

/// Gram matrix over the rows of X.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X);

/// Cross-covariance matrix: entry (i, j) = k(X.row(i), Z.row(j)).
Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& X,
                           const Eigen::MatrixXd& Z);

}  // namespace gridbo
