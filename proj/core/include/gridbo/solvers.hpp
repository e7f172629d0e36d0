#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>

#include "gridbo/acquisition.hpp"
#include "gridbo/rng.hpp"

namespace gridbo {

/// Axis-aligned box search space.
struct BoxDomain {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
    Eigen::VectorXd clip(Eigen::VectorXd x) const;
    double side(int j) const { return hi[j] - lo[j]; }

    static BoxDomain cube(int d, double lo, double hi);
};

enum class SolverKind {
    UniformGrid,
    FixedGrid,
    MultiStartSimplex,
    MultiStartGradient,
    ReferenceOracle
};

std::string solver_name(SolverKind kind);

struct SolverSpec {
    SolverKind kind = SolverKind::UniformGrid;
    int grid_coefficient = 100;  // UniformGrid size = coefficient * t
    int fixed_size = 100;
    int n_starts = 0;  // 0 means the default 10 * d
    int max_inner_iters = 200;
    double inner_tol = 1e-8;
    int oracle_size = 100000;  // ReferenceOracle candidate count
};

struct SolverResult {
    Eigen::VectorXd x;
    double value = 0.0;  // shifted acquisition at x
    long n_evals = 0;
    double wall_seconds = 0.0;
    std::optional<Eigen::MatrixXd> grid;  // retained for fill-distance diagnostics
};

/// n fresh independent uniform points in the box, one per row.
Eigen::MatrixXd draw_uniform_grid(const BoxDomain& domain, int n, RngStream& rng);

/// Index of the maximum entry; ties resolve to the lowest index.
Eigen::Index argmax_lowest_index(const Eigen::VectorXd& values);

SolverResult solve_uniform_grid(const Acquisition& acq, const BoxDomain& domain, int t,
                                int grid_coefficient, RngStream& rng);

SolverResult solve_fixed_grid(const Acquisition& acq, const BoxDomain& domain, int size,
                              RngStream& rng);

SolverResult solve_multistart_simplex(const Acquisition& acq, const BoxDomain& domain,
                                      int n_starts, int max_inner_iters, double inner_tol,
                                      RngStream& rng);

SolverResult solve_multistart_gradient(const Acquisition& acq, const BoxDomain& domain,
                                       int n_starts, int max_inner_iters, double inner_tol,
                                       RngStream& rng);

/// Estimate of the acquisition maximum over a dense low-discrepancy set plus
/// any extra candidate points (pass everything the solvers touched so that the
/// measured accuracy ratio never exceeds one).
double reference_max(const Acquisition& acq, const BoxDomain& domain, int oracle_size,
                     const std::optional<Eigen::MatrixXd>& extra_points = std::nullopt,
                     double extra_value_floor = -std::numeric_limits<double>::infinity());

/// Monte Carlo fill distance: max over uniform probes of the distance to the
/// nearest grid point. probe_size <= 0 selects the default 10 * |grid|.
double fill_distance(const Eigen::MatrixXd& grid, const BoxDomain& domain,
                     int probe_size, RngStream& rng);

/// Dispatch on SolverSpec. t is the BO iteration index (drives the growing
/// grid). ReferenceOracle picks the best point of the dense oracle set.
SolverResult run_solver(const Acquisition& acq, const BoxDomain& domain,
                        const SolverSpec& spec, int t, RngStream& rng);

}  // namespace gridbo
