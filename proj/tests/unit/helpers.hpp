#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>

#include "gridbo/acquisition.hpp"

namespace gridbo::testing {

/// Wraps plain callables as an acquisition surface for solver tests.
class FunctionAcquisition final : public Acquisition {
public:
    using ValueFn = std::function<double(const Eigen::VectorXd&)>;
    using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

    explicit FunctionAcquisition(ValueFn value, GradFn grad = nullptr)
        : value_(std::move(value)), grad_(std::move(grad)) {}

    double value(const Eigen::VectorXd& x) const override { return value_(x); }
    bool has_gradient() const override { return static_cast<bool>(grad_); }
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override {
        if (!grad_) return Acquisition::gradient(x);
        return grad_(x);
    }

private:
    ValueFn value_;
    GradFn grad_;
};

}  // namespace gridbo::testing
