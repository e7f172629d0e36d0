#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "gridbo/kernels.hpp"
#include "gridbo/rng.hpp"
#include "gridbo/solvers.hpp"

namespace gridbo {

/// Benchmark objective in maximization orientation (classical minimization
/// test functions are negated). f_star is the known maximum, x_star the known
/// maximizers, abs_bound an upper bound on sup |f| over the domain (used for
/// nonnegativity shifts when no RKHS norm bound is available).
struct ObjectiveSpec {
    std::string name;
    BoxDomain domain;
    double f_star = 0.0;
    std::vector<Eigen::VectorXd> x_star;
    double abs_bound = 1.0;
    std::function<double(const Eigen::VectorXd&)> fn;

    double evaluate(const Eigen::VectorXd& x) const;
};

struct NoiseModel {
    enum class Kind { None, Gaussian };
    Kind kind = Kind::None;
    double noise_scale = 0.0;  // R, std dev; Gaussian(R) is R-sub-Gaussian
};

double observe(const ObjectiveSpec& obj, const NoiseModel& noise,
               const Eigen::VectorXd& x, RngStream& rng);

ObjectiveSpec branin();
ObjectiveSpec rastrigin3();
ObjectiveSpec hartmann3();
ObjectiveSpec hartmann4();
ObjectiveSpec levy5();
ObjectiveSpec hartmann6();

/// Builds f(x) = sum_i w_i k(x, c_i) with RKHS norm scaled to weight_bound
/// (when the raw norm exceeds it). Centers drawn uniformly in the domain; the
/// maximum is located by a dense low-discrepancy probe plus simplex
/// refinement and stored in the spec.
ObjectiveSpec synthetic_rkhs(const KernelSpec& kernel, int n_centers,
                             double weight_bound, const BoxDomain& domain,
                             RngStream& rng);

/// Lookup by name used by experiment plans; "synthetic-rkhs-11d" builds the
/// deterministic 11-dimensional instance used in the ablation study.
ObjectiveSpec objective_by_name(const std::string& name);

}  // namespace gridbo
