#include "gridbo/gp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gridbo {

namespace {
constexpr double kJitterLadder[] = {1e-10, 1e-8, 1e-6};
constexpr int kRefactorPeriod = 64;
}  // namespace

Eigen::MatrixXd cholesky_with_jitter(Eigen::MatrixXd A) {
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    for (double jitter : kJitterLadder) {
        Eigen::MatrixXd Aj = A;
        Aj.diagonal().array() += jitter;
        llt.compute(Aj);
        if (llt.info() == Eigen::Success) return llt.matrixL();
    }
    throw std::runtime_error("cholesky_with_jitter: factorization failed after jitter ladder");
}

GpPosterior::GpPosterior(KernelSpec kernel, double noise, Eigen::MatrixXd X0,
                         Eigen::VectorXd y0)
    : kernel_(std::move(kernel)), noise_(noise), X_(std::move(X0)), y_(std::move(y0)) {
    kernel_.validate();
    if (noise_ <= 0.0) throw std::invalid_argument("GpPosterior: noise must be positive");
    if (X_.rows() != y_.size()) {
        throw std::invalid_argument("GpPosterior: X and y sizes disagree");
    }
    refactor();
}

void GpPosterior::refactor() {
    const Eigen::Index n = y_.size();
    if (n == 0) {
        chol_.resize(0, 0);
        alpha_.resize(0);
        updates_since_refactor_ = 0;
        return;
    }
    Eigen::MatrixXd A = gram_matrix(kernel_, X_);
    A.diagonal().array() += noise_;
    chol_ = cholesky_with_jitter(std::move(A));
    alpha_ = chol_.triangularView<Eigen::Lower>().solve(y_);
    chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
    updates_since_refactor_ = 0;
}

GpPosterior GpPosterior::updated(const Eigen::VectorXd& x_new, double y_new) const {
    if (X_.cols() > 0 && x_new.size() != X_.cols()) {
        throw std::invalid_argument("GpPosterior::updated: dimension mismatch");
    }
    GpPosterior next(*this);
    const Eigen::Index n = y_.size();
    next.X_.conservativeResize(n + 1, x_new.size());
    next.X_.row(n) = x_new.transpose();
    next.y_.conservativeResize(n + 1);
    next.y_[n] = y_new;

    if (n == 0 || updates_since_refactor_ + 1 >= kRefactorPeriod) {
        next.refactor();
        return next;
    }
    // bordered extension of the lower factor
    Eigen::VectorXd k12(n);
    for (Eigen::Index i = 0; i < n; ++i) k12[i] = kernel_eval(kernel_, X_.row(i).transpose(), x_new);
    const double k22 = kernel_.output_scale + noise_;
    Eigen::VectorXd l12 = chol_.triangularView<Eigen::Lower>().solve(k12);
    const double pivot = k22 - l12.squaredNorm();
    if (pivot <= 1e-12) {
        next.refactor();  // refactor applies the jitter ladder if needed
        return next;
    }
    next.chol_.conservativeResize(n + 1, n + 1);
    next.chol_.row(n).head(n) = l12.transpose();
    next.chol_.col(n).head(n).setZero();
    next.chol_(n, n) = std::sqrt(pivot);
    next.alpha_ = next.chol_.triangularView<Eigen::Lower>().solve(next.y_);
    next.chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(next.alpha_);
    next.updates_since_refactor_ = updates_since_refactor_ + 1;
    return next;
}

double GpPosterior::variance_error_floor() const {
    // rounding in the variance scales with the conditioning of K + tau I
    const double n = static_cast<double>(y_.size());
    return std::max(1e-10, 1e-13 * (1.0 + n) / noise_ * 1e-3);
}

std::pair<double, double> GpPosterior::mean_var(const Eigen::VectorXd& x) const {
    Eigen::VectorXd mean(1), var(1);
    Eigen::MatrixXd q(1, x.size());
    q.row(0) = x.transpose();
    mean_var_batch(q, mean, var);
    return {mean[0], var[0]};
}

void GpPosterior::mean_var_batch(const Eigen::MatrixXd& queries, Eigen::VectorXd& mean,
                                 Eigen::VectorXd& var) const {
    const Eigen::Index m = queries.rows();
    const double prior_var = kernel_.output_scale;
    if (y_.size() == 0) {
        mean = Eigen::VectorXd::Zero(m);
        var = Eigen::VectorXd::Constant(m, prior_var);
        return;
    }
    const Eigen::MatrixXd Kxq = cross_gram(kernel_, X_, queries);  // n x m
    mean = Kxq.transpose() * alpha_;
    Eigen::MatrixXd V = chol_.triangularView<Eigen::Lower>().solve(Kxq);
    var = (prior_var - V.colwise().squaredNorm().array()).matrix();
    const double floor = -variance_error_floor();
    for (Eigen::Index i = 0; i < m; ++i) {
        if (var[i] < 0.0) {
            if (var[i] < floor) {
                throw std::runtime_error("GpPosterior: posterior variance below rounding floor");
            }
            var[i] = 0.0;
        }
    }
}

GpPosterior::LocalExpansion GpPosterior::mean_var_grad(const Eigen::VectorXd& x) const {
    LocalExpansion out;
    const Eigen::Index n = y_.size(), d = x.size();
    if (n == 0) {
        out.mean = 0.0;
        out.var = kernel_.output_scale;
        out.grad_mean = Eigen::VectorXd::Zero(d);
        out.grad_var = Eigen::VectorXd::Zero(d);
        return out;
    }
    Eigen::VectorXd k(n);
    Eigen::MatrixXd J(d, n);  // column i = d k(x, x_i) / d x
    for (Eigen::Index i = 0; i < n; ++i) {
        k[i] = kernel_eval(kernel_, x, X_.row(i).transpose());
        J.col(i) = kernel_grad(kernel_, x, X_.row(i).transpose());
    }
    out.mean = k.dot(alpha_);
    out.grad_mean = J * alpha_;
    Eigen::VectorXd w = chol_.triangularView<Eigen::Lower>().solve(k);
    chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(w);  // (K+tau I)^{-1} k
    double var = kernel_.output_scale - k.dot(w);
    if (var < 0.0) {
        if (var < -variance_error_floor()) {
            throw std::runtime_error("GpPosterior: posterior variance below rounding floor");
        }
        var = 0.0;
    }
    out.var = var;
    out.grad_var = -2.0 * (J * w);
    return out;
}

Eigen::VectorXd GpPosterior::sample_on_grid(
    const Eigen::MatrixXd& grid,
    const std::function<double(const Eigen::VectorXd&, double)>& scale_fn,
    RngStream& rng) const {
    const Eigen::Index m = grid.rows();
    if (m == 0) throw std::invalid_argument("sample_on_grid: empty grid");

    Eigen::VectorXd mean, var;
    mean_var_batch(grid, mean, var);
    Eigen::VectorXd sigma = var.cwiseMax(0.0).cwiseSqrt();

    // posterior covariance over the grid
    Eigen::MatrixXd cov = gram_matrix(kernel_, grid);
    if (y_.size() > 0) {
        const Eigen::MatrixXd Kxg = cross_gram(kernel_, X_, grid);
        const Eigen::MatrixXd V = chol_.triangularView<Eigen::Lower>().solve(Kxg);
        cov.noalias() -= V.transpose() * V;
        cov = ((cov + cov.transpose()) / 2.0).eval();
    }

    constexpr double kSigmaEps = 1e-9;
    Eigen::VectorXd scale(m);
    Eigen::VectorXd ratio(m);  // scale_i / sigma_i, zero where sigma vanishes
    bool degenerate_all = true;
    for (Eigen::Index i = 0; i < m; ++i) {
        scale[i] = scale_fn(grid.row(i).transpose(), sigma[i]);
        if (scale[i] < 0.0) throw std::invalid_argument("sample_on_grid: negative scale");
        ratio[i] = (sigma[i] > kSigmaEps) ? scale[i] / sigma[i] : 0.0;
        if (ratio[i] != 0.0) degenerate_all = false;
    }
    if (degenerate_all) return mean;

    // rescale posterior correlations to the requested marginal scales
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) cov(i, j) *= ratio[i] * ratio[j];
        cov(i, i) = scale[i] * scale[i] * (ratio[i] != 0.0 ? 1.0 : 0.0);
    }

    // factor the scaled covariance; zero rows make it singular, so factor the
    // active block only
    std::vector<Eigen::Index> active;
    active.reserve(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (ratio[i] != 0.0) active.push_back(i);
    }
    Eigen::MatrixXd cov_a(active.size(), active.size());
    for (std::size_t a = 0; a < active.size(); ++a) {
        for (std::size_t b = 0; b < active.size(); ++b) {
            cov_a(a, b) = cov(active[a], active[b]);
        }
    }
    const Eigen::MatrixXd L = cholesky_with_jitter(std::move(cov_a));
    Eigen::VectorXd z(active.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
    const Eigen::VectorXd dev = L.triangularView<Eigen::Lower>() * z;
    Eigen::VectorXd sample = mean;
    for (std::size_t a = 0; a < active.size(); ++a) sample[active[a]] += dev[a];
    return sample;
}

double GpPosterior::info_gain() const {
    const Eigen::Index n = y_.size();
    if (n == 0) return 0.0;
    // det(I + tau^{-1} K) = det(K + tau I) / tau^n
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) log_det += 2.0 * std::log(chol_(i, i));
    return 0.5 * (log_det - n * std::log(noise_));
}

}  // namespace gridbo
