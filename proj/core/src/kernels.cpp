#include "gridbo/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace gridbo {

namespace {

void check_dims(const KernelSpec& spec, Eigen::Index dx, Eigen::Index dy) {
    if (dx != dy) throw std::invalid_argument("kernel: point dimensions differ");
    if (spec.lengthscale.size() != 1 && spec.lengthscale.size() != dx) {
        throw std::invalid_argument("kernel: lengthscale size does not match point dimension");
    }
}

// scaled squared distance sum_i ((x_i - y_i) / l_i)^2
double scaled_sq_dist(const KernelSpec& spec, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y) {
    if (spec.lengthscale.size() == 1) {
        return (x - y).squaredNorm() / (spec.lengthscale[0] * spec.lengthscale[0]);
    }
    return ((x - y).array() / spec.lengthscale.array()).square().sum();
}

double matern_of_r(double nu, double r) {
    const double a = std::sqrt(2.0 * nu);
    const double ar = a * r;
    const double e = std::exp(-ar);
    if (nu == 1.5) return (1.0 + ar) * e;
    if (nu == 2.5) return (1.0 + ar + ar * ar / 3.0) * e;
    // nu == 3.5
    return (1.0 + ar + 0.4 * ar * ar + ar * ar * ar / 15.0) * e;
}

// d k / d r divided by r; finite at r = 0 for nu >= 3/2
double matern_dr_over_r(double nu, double r) {
    const double a = std::sqrt(2.0 * nu);
    const double ar = a * r;
    const double e = std::exp(-ar);
    if (nu == 1.5) return -a * a * e;
    if (nu == 2.5) return -(a * a / 3.0) * (1.0 + ar) * e;
    return -a * a * (0.2 + 0.2 * ar + ar * ar / 15.0) * e;
}

}  // namespace

KernelSpec KernelSpec::squared_exponential(double lengthscale) {
    KernelSpec s;
    s.family = KernelFamily::SquaredExponential;
    s.lengthscale = Eigen::VectorXd::Constant(1, lengthscale);
    return s;
}

KernelSpec KernelSpec::matern(double nu, double lengthscale) {
    KernelSpec s;
    s.family = KernelFamily::Matern;
    s.smoothness = nu;
    s.lengthscale = Eigen::VectorXd::Constant(1, lengthscale);
    return s;
}

bool KernelSpec::within_theory() const {
    return family == KernelFamily::SquaredExponential || smoothness >= 2.0;
}

void KernelSpec::validate() const {
    if ((lengthscale.array() <= 0.0).any()) {
        throw std::invalid_argument("kernel: lengthscale must be positive");
    }
    if (output_scale <= 0.0) throw std::invalid_argument("kernel: output_scale must be positive");
    if (family == KernelFamily::Matern && smoothness != 1.5 && smoothness != 2.5 &&
        smoothness != 3.5) {
        throw std::invalid_argument("kernel: Matern smoothness must be 3/2, 5/2 or 7/2");
    }
}

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
    check_dims(spec, x.size(), y.size());
    const double r2 = scaled_sq_dist(spec, x, y);
    if (spec.family == KernelFamily::SquaredExponential) {
        return spec.output_scale * std::exp(-0.5 * r2);
    }
    return spec.output_scale * matern_of_r(spec.smoothness, std::sqrt(r2));
}

Eigen::VectorXd kernel_grad(const KernelSpec& spec, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& y) {
    check_dims(spec, x.size(), y.size());
    Eigen::ArrayXd inv_l2(x.size());
    if (spec.lengthscale.size() == 1) {
        inv_l2.setConstant(1.0 / (spec.lengthscale[0] * spec.lengthscale[0]));
    } else {
        inv_l2 = spec.lengthscale.array().square().inverse();
    }
    const Eigen::ArrayXd diff = (x - y).array();
    const double r2 = (diff.square() * inv_l2).sum();
    if (spec.family == KernelFamily::SquaredExponential) {
        const double k = spec.output_scale * std::exp(-0.5 * r2);
        return (-k * diff * inv_l2).matrix();
    }
    const double r = std::sqrt(r2);
    const double factor = spec.output_scale * matern_dr_over_r(spec.smoothness, r);
    return (factor * diff * inv_l2).matrix();
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& X) {
    if (X.rows() == 0) throw std::invalid_argument("gram_matrix: empty point set");
    Eigen::MatrixXd K = cross_gram(spec, X, X);
    // enforce exact symmetry against floating-point drift in the distance sums
    K = ((K + K.transpose()) / 2.0).eval();
    K.diagonal().setConstant(spec.output_scale);
    return K;
}

Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& X,
                           const Eigen::MatrixXd& Z) {
    if (X.cols() != Z.cols()) throw std::invalid_argument("cross_gram: dimension mismatch");
    const Eigen::Index d = X.cols();
    if (spec.lengthscale.size() != 1 && spec.lengthscale.size() != d) {
        throw std::invalid_argument("cross_gram: lengthscale size does not match");
    }
    Eigen::MatrixXd Xs = X, Zs = Z;
    if (spec.lengthscale.size() == 1) {
        Xs /= spec.lengthscale[0];
        Zs /= spec.lengthscale[0];
    } else {
        for (Eigen::Index j = 0; j < d; ++j) {
            Xs.col(j) /= spec.lengthscale[j];
            Zs.col(j) /= spec.lengthscale[j];
        }
    }
    const Eigen::VectorXd xn = Xs.rowwise().squaredNorm();
    const Eigen::VectorXd zn = Zs.rowwise().squaredNorm();
    Eigen::MatrixXd D = -2.0 * Xs * Zs.transpose();
    D.colwise() += xn;
    D.rowwise() += zn.transpose();
    D = D.cwiseMax(0.0);
    if (spec.family == KernelFamily::SquaredExponential) {
        return spec.output_scale * (-0.5 * D.array()).exp().matrix();
    }
    const double nu = spec.smoothness;
    return D.unaryExpr([&](double r2) {
        return spec.output_scale * matern_of_r(nu, std::sqrt(r2));
    });
}

}  // namespace gridbo
