#include "gridbo/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gridbo/sobol.hpp"

namespace gridbo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

SolverResult scan_grid(const Acquisition& acq, Eigen::MatrixXd grid,
                       Clock::time_point start) {
    const Eigen::VectorXd values = acq.value_batch(grid);
    const Eigen::Index best = argmax_lowest_index(values);
    SolverResult result;
    result.x = grid.row(best).transpose();
    result.value = values[best];
    result.n_evals = grid.rows();
    result.grid = std::move(grid);
    result.wall_seconds = seconds_since(start);
    return result;
}

}  // namespace

bool BoxDomain::contains(const Eigen::VectorXd& x, double tol) const {
    if (x.size() != lo.size()) return false;
    return (x.array() >= lo.array() - tol).all() && (x.array() <= hi.array() + tol).all();
}

Eigen::VectorXd BoxDomain::clip(Eigen::VectorXd x) const {
    return x.cwiseMax(lo).cwiseMin(hi);
}

BoxDomain BoxDomain::cube(int d, double lo_v, double hi_v) {
    return {Eigen::VectorXd::Constant(d, lo_v), Eigen::VectorXd::Constant(d, hi_v)};
}

std::string solver_name(SolverKind kind) {
    switch (kind) {
        case SolverKind::UniformGrid: return "uniform-grid";
        case SolverKind::FixedGrid: return "fixed-grid";
        case SolverKind::MultiStartSimplex: return "nelder-mead";
        case SolverKind::MultiStartGradient: return "gradient-multistart";
        case SolverKind::ReferenceOracle: return "reference-oracle";
    }
    return "unknown";
}

Eigen::MatrixXd draw_uniform_grid(const BoxDomain& domain, int n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("draw_uniform_grid: n must be >= 1");
    const int d = domain.dim();
    Eigen::MatrixXd grid(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) grid(i, j) = rng.uniform(domain.lo[j], domain.hi[j]);
    }
    return grid;
}

Eigen::Index argmax_lowest_index(const Eigen::VectorXd& values) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

SolverResult solve_uniform_grid(const Acquisition& acq, const BoxDomain& domain, int t,
                                int grid_coefficient, RngStream& rng) {
    if (t < 1) throw std::invalid_argument("solve_uniform_grid: t must be >= 1");
    if (grid_coefficient < 1) {
        throw std::invalid_argument("solve_uniform_grid: grid coefficient must be >= 1");
    }
    const auto start = Clock::now();
    return scan_grid(acq, draw_uniform_grid(domain, grid_coefficient * t, rng), start);
}

SolverResult solve_fixed_grid(const Acquisition& acq, const BoxDomain& domain, int size,
                              RngStream& rng) {
    if (size < 1) throw std::invalid_argument("solve_fixed_grid: size must be >= 1");
    const auto start = Clock::now();
    return scan_grid(acq, draw_uniform_grid(domain, size, rng), start);
}

SolverResult solve_multistart_simplex(const Acquisition& acq, const BoxDomain& domain,
                                      int n_starts, int max_inner_iters, double inner_tol,
                                      RngStream& rng) {
    if (n_starts < 1) throw std::invalid_argument("solve_multistart_simplex: n_starts >= 1");
    const auto start_time = Clock::now();
    const int d = domain.dim();
    long n_evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++n_evals;
        return acq.value(x);
    };

    SolverResult best;
    best.value = -std::numeric_limits<double>::infinity();

    const Eigen::MatrixXd starts = draw_uniform_grid(domain, n_starts, rng);
    for (int s = 0; s < n_starts; ++s) {
        const Eigen::VectorXd x0 = starts.row(s).transpose();
        // initial simplex: x0 plus a 5% step along each axis, clipped to the box
        std::vector<Eigen::VectorXd> verts(d + 1, x0);
        std::vector<double> fv(d + 1);
        for (int j = 0; j < d; ++j) {
            Eigen::VectorXd v = x0;
            const double step = 0.05 * domain.side(j);
            v[j] = (v[j] + step <= domain.hi[j]) ? v[j] + step : v[j] - step;
            verts[j + 1] = v;
        }
        for (int j = 0; j <= d; ++j) fv[j] = eval(verts[j]);

        for (int iter = 0; iter < max_inner_iters; ++iter) {
            // sort ascending by value; we maximize, so the worst vertex is first
            std::vector<int> order(d + 1);
            for (int j = 0; j <= d; ++j) order[j] = j;
            std::sort(order.begin(), order.end(),
                      [&](int a, int b) { return fv[a] < fv[b]; });
            const int worst = order[0], second_worst = order[1], top = order[d];
            if (fv[top] - fv[worst] < inner_tol) break;

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
            for (int j = 0; j <= d; ++j) {
                if (j != worst) centroid += verts[j];
            }
            centroid /= d;

            const Eigen::VectorXd refl = domain.clip(centroid + (centroid - verts[worst]));
            const double f_refl = eval(refl);
            if (f_refl > fv[top]) {
                const Eigen::VectorXd exp_pt =
                    domain.clip(centroid + 2.0 * (centroid - verts[worst]));
                const double f_exp = eval(exp_pt);
                if (f_exp > f_refl) {
                    verts[worst] = exp_pt;
                    fv[worst] = f_exp;
                } else {
                    verts[worst] = refl;
                    fv[worst] = f_refl;
                }
            } else if (f_refl > fv[second_worst]) {
                verts[worst] = refl;
                fv[worst] = f_refl;
            } else {
                const Eigen::VectorXd contr =
                    domain.clip(centroid + 0.5 * (verts[worst] - centroid));
                const double f_contr = eval(contr);
                if (f_contr > fv[worst]) {
                    verts[worst] = contr;
                    fv[worst] = f_contr;
                } else {
                    for (int j = 0; j <= d; ++j) {
                        if (j == top) continue;
                        verts[j] = domain.clip(verts[top] + 0.5 * (verts[j] - verts[top]));
                        fv[j] = eval(verts[j]);
                    }
                }
            }
        }
        for (int j = 0; j <= d; ++j) {
            if (fv[j] > best.value) {
                best.value = fv[j];
                best.x = verts[j];
            }
        }
    }
    best.n_evals = n_evals;
    best.wall_seconds = seconds_since(start_time);
    return best;
}

SolverResult solve_multistart_gradient(const Acquisition& acq, const BoxDomain& domain,
                                       int n_starts, int max_inner_iters, double inner_tol,
                                       RngStream& rng) {
    if (!acq.has_gradient()) {
        throw std::invalid_argument("solve_multistart_gradient: acquisition has no gradient");
    }
    if (n_starts < 1) throw std::invalid_argument("solve_multistart_gradient: n_starts >= 1");
    const auto start_time = Clock::now();
    long n_evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++n_evals;
        return acq.value(x);
    };
    const double scale = (domain.hi - domain.lo).norm();

    SolverResult best;
    best.value = -std::numeric_limits<double>::infinity();

    const Eigen::MatrixXd starts = draw_uniform_grid(domain, n_starts, rng);
    for (int s = 0; s < n_starts; ++s) {
        Eigen::VectorXd x = starts.row(s).transpose();
        double fx = eval(x);
        for (int iter = 0; iter < max_inner_iters; ++iter) {
            const Eigen::VectorXd g = acq.gradient(x);
            const double gnorm = g.norm();
            if (gnorm < inner_tol) break;
            // projected ascent step with backtracking line search
            double step = 0.1 * scale / gnorm;
            bool improved = false;
            for (int bt = 0; bt < 30; ++bt) {
                const Eigen::VectorXd cand = domain.clip(x + step * g);
                const double fc = eval(cand);
                const double gain = g.dot(cand - x);
                if (fc > fx + 1e-4 * gain && fc > fx) {
                    const double moved = (cand - x).norm();
                    x = cand;
                    fx = fc;
                    improved = true;
                    if (moved < inner_tol * scale) iter = max_inner_iters;  // converged
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
        if (fx > best.value) {
            best.value = fx;
            best.x = x;
        }
    }
    best.n_evals = n_evals;
    best.wall_seconds = seconds_since(start_time);
    return best;
}

double reference_max(const Acquisition& acq, const BoxDomain& domain, int oracle_size,
                     const std::optional<Eigen::MatrixXd>& extra_points,
                     double extra_value_floor) {
    if (oracle_size < 1) throw std::invalid_argument("reference_max: oracle_size >= 1");
    double best = extra_value_floor;
    constexpr int kChunk = 8192;
    SobolSequence seq(domain.dim());
    int remaining = oracle_size;
    while (remaining > 0) {
        const int n = std::min(kChunk, remaining);
        Eigen::MatrixXd pts(n, domain.dim());
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd u = seq.next();
            pts.row(i) =
                (domain.lo.array() + (domain.hi - domain.lo).array() * u.array()).matrix();
        }
        best = std::max(best, acq.value_batch(pts).maxCoeff());
        remaining -= n;
    }
    if (extra_points && extra_points->rows() > 0) {
        best = std::max(best, acq.value_batch(*extra_points).maxCoeff());
    }
    return best;
}

double fill_distance(const Eigen::MatrixXd& grid, const BoxDomain& domain,
                     int probe_size, RngStream& rng) {
    if (grid.rows() == 0) throw std::invalid_argument("fill_distance: empty grid");
    if (probe_size <= 0) probe_size = 10 * static_cast<int>(grid.rows());
    const Eigen::VectorXd gn = grid.rowwise().squaredNorm();
    double worst = 0.0;
    constexpr int kChunk = 4096;
    int remaining = probe_size;
    while (remaining > 0) {
        const int n = std::min(kChunk, remaining);
        const Eigen::MatrixXd probes = draw_uniform_grid(domain, n, rng);
        Eigen::MatrixXd d2 = -2.0 * probes * grid.transpose();
        d2.colwise() += probes.rowwise().squaredNorm();
        d2.rowwise() += gn.transpose();
        worst = std::max(worst, d2.rowwise().minCoeff().maxCoeff());
        remaining -= n;
    }
    return std::sqrt(std::max(0.0, worst));
}

SolverResult run_solver(const Acquisition& acq, const BoxDomain& domain,
                        const SolverSpec& spec, int t, RngStream& rng) {
    const int n_starts = spec.n_starts > 0 ? spec.n_starts : 10 * domain.dim();
    switch (spec.kind) {
        case SolverKind::UniformGrid:
            return solve_uniform_grid(acq, domain, t, spec.grid_coefficient, rng);
        case SolverKind::FixedGrid:
            return solve_fixed_grid(acq, domain, spec.fixed_size, rng);
        case SolverKind::MultiStartSimplex:
            return solve_multistart_simplex(acq, domain, n_starts, spec.max_inner_iters,
                                            spec.inner_tol, rng);
        case SolverKind::MultiStartGradient:
            return solve_multistart_gradient(acq, domain, n_starts, spec.max_inner_iters,
                                             spec.inner_tol, rng);
        case SolverKind::ReferenceOracle: {
            const auto start = Clock::now();
            SolverResult result =
                scan_grid(acq, sobol_points_in_box(spec.oracle_size, domain.lo, domain.hi),
                          start);
            result.grid.reset();  // oracle grids are large; not kept for diagnostics
            return result;
        }
    }
    throw std::logic_error("run_solver: unknown solver kind");
}

}  // namespace gridbo
