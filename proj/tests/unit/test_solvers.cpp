#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "gridbo/metrics.hpp"
#include "gridbo/solvers.hpp"
#include "helpers.hpp"

using namespace gridbo;
using gridbo::testing::FunctionAcquisition;

namespace {

BoxDomain unit_box(int d) { return BoxDomain::cube(d, 0.0, 1.0); }

// concave quadratic peaked at x0 with value peak
FunctionAcquisition quadratic(const Eigen::VectorXd& x0, double peak) {
    return FunctionAcquisition(
        [x0, peak](const Eigen::VectorXd& x) {
            return peak - (x - x0).squaredNorm();
        },
        [x0](const Eigen::VectorXd& x) {
            return Eigen::VectorXd(-2.0 * (x - x0));
        });
}

}  // namespace

TEST_CASE("uniform grid solver") {
    const BoxDomain box = unit_box(2);

    SUBCASE("constant acquisition returns the first drawn point") {
        const FunctionAcquisition acq([](const Eigen::VectorXd&) { return 3.0; });
        RngStream rng(1), rng_copy(1);
        const SolverResult r = solve_uniform_grid(acq, box, 4, 10, rng);
        const Eigen::MatrixXd expected_grid = draw_uniform_grid(box, 40, rng_copy);
        CHECK(r.value == 3.0);
        CHECK((r.x - expected_grid.row(0).transpose()).norm() == 0.0);
    }

    SUBCASE("grid size is exactly c * t") {
        const FunctionAcquisition acq(
            [](const Eigen::VectorXd& x) { return x.sum(); });
        RngStream rng(2);
        const SolverResult r = solve_uniform_grid(acq, box, 7, 100, rng);
        CHECK(r.n_evals == 700);
        REQUIRE(r.grid.has_value());
        CHECK(r.grid->rows() == 700);
    }

    SUBCASE("matches a brute-force scan of its own grid and finds the target") {
        Eigen::VectorXd x0(2);
        x0 << 0.4, 0.7;
        const FunctionAcquisition acq([x0](const Eigen::VectorXd& x) {
            return -(x - x0).norm();
        });
        RngStream rng(3);
        const SolverResult r = solve_uniform_grid(acq, box, 41, 100, rng);  // 4100 pts
        REQUIRE(r.grid.has_value());
        Eigen::Index best = 0;
        double best_v = -1e300;
        for (Eigen::Index i = 0; i < r.grid->rows(); ++i) {
            const double v = acq.value(r.grid->row(i).transpose());
            if (v > best_v) {
                best_v = v;
                best = i;
            }
        }
        CHECK(r.value == best_v);
        CHECK((r.x - r.grid->row(best).transpose()).norm() == 0.0);
        CHECK((r.x - x0).norm() < 0.05);
    }

    SUBCASE("grids are identical across same-seed calls, disjoint across t") {
        const FunctionAcquisition acq(
            [](const Eigen::VectorXd& x) { return x[0]; });
        RngStream a(9), b(9);
        const SolverResult ra = solve_uniform_grid(acq, box, 3, 10, a);
        const SolverResult rb = solve_uniform_grid(acq, box, 3, 10, b);
        CHECK((*ra.grid - *rb.grid).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("fixed grid solver") {
    const BoxDomain box = unit_box(3);
    const FunctionAcquisition acq(
        [](const Eigen::VectorXd& x) { return -x.squaredNorm(); });

    SUBCASE("size one returns the single drawn point") {
        RngStream rng(4), rng2(4);
        const SolverResult r = solve_fixed_grid(acq, box, 1, rng);
        const Eigen::MatrixXd g = draw_uniform_grid(box, 1, rng2);
        CHECK((r.x - g.row(0).transpose()).norm() == 0.0);
        CHECK(r.n_evals == 1);
    }

    SUBCASE("deterministic and scan-consistent") {
        RngStream r1(5), r2(5);
        const SolverResult a = solve_fixed_grid(acq, box, 64, r1);
        const SolverResult b = solve_fixed_grid(acq, box, 64, r2);
        CHECK((a.x - b.x).norm() == 0.0);
        CHECK(a.value == b.value);
        const Eigen::VectorXd vals = acq.value_batch(*a.grid);
        CHECK(a.value == vals[argmax_lowest_index(vals)]);
    }
}

TEST_CASE("multi-start simplex solver") {
    const BoxDomain box = unit_box(2);
    Eigen::VectorXd x0(2);
    x0 << 0.3, 0.6;
    const FunctionAcquisition acq = quadratic(x0, 5.0);

    SUBCASE("finds an interior concave peak") {
        RngStream rng(6);
        const SolverResult r = solve_multistart_simplex(acq, box, 5, 200, 1e-10, rng);
        CHECK((r.x - x0).norm() < 1e-3);
        CHECK(box.contains(r.x));
    }

    SUBCASE("zero inner iterations degrades to a scan of the start stencils") {
        RngStream rng(7), rng2(7);
        const SolverResult r = solve_multistart_simplex(acq, box, 8, 0, 1e-8, rng);
        // the initial simplex vertices are still evaluated, so the result is
        // at least as good as the best start point itself
        const Eigen::MatrixXd starts = draw_uniform_grid(box, 8, rng2);
        const Eigen::VectorXd vals = acq.value_batch(starts);
        CHECK(r.value >= vals[argmax_lowest_index(vals)]);
        CHECK(box.contains(r.x));
    }

    SUBCASE("never worse than the best start") {
        for (int seed = 0; seed < 10; ++seed) {
            RngStream rng(100 + seed), rng2(100 + seed);
            const SolverResult r =
                solve_multistart_simplex(acq, box, 4, 50, 1e-8, rng);
            const Eigen::MatrixXd starts = draw_uniform_grid(box, 4, rng2);
            const Eigen::VectorXd vals = acq.value_batch(starts);
            CHECK(r.value >= vals.maxCoeff());
        }
    }
}

TEST_CASE("multi-start gradient solver") {
    const BoxDomain box = unit_box(2);
    Eigen::VectorXd x0(2);
    x0 << 0.25, 0.8;

    SUBCASE("converges to the analytic peak") {
        const FunctionAcquisition acq = quadratic(x0, 2.0);
        RngStream rng(8);
        const SolverResult r =
            solve_multistart_gradient(acq, box, 5, 500, 1e-12, rng);
        CHECK((r.x - x0).norm() < 1e-5);
    }

    SUBCASE("acquisitions without gradients are rejected") {
        const FunctionAcquisition no_grad(
            [](const Eigen::VectorXd& x) { return x.sum(); });
        RngStream rng(9);
        CHECK_THROWS_AS(
            (void)solve_multistart_gradient(no_grad, box, 2, 10, 1e-8, rng),
            std::invalid_argument);
    }

    SUBCASE("analytic gradient of the test surface matches finite differences") {
        const FunctionAcquisition acq = quadratic(x0, 2.0);
        RngStream rng(10);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd x(2);
            x << rng.uniform(), rng.uniform();
            const Eigen::VectorXd g = acq.gradient(x);
            const double h = 1e-6;
            for (int j = 0; j < 2; ++j) {
                Eigen::VectorXd xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                const double fd = (acq.value(xp) - acq.value(xm)) / (2 * h);
                CHECK(std::abs(g[j] - fd) < 1e-4);
            }
        }
    }

    SUBCASE("stays inside the box") {
        // peak outside the box pulls iterates to the boundary
        Eigen::VectorXd outside(2);
        outside << 1.5, -0.5;
        const FunctionAcquisition acq = quadratic(outside, 1.0);
        RngStream rng(11);
        const SolverResult r =
            solve_multistart_gradient(acq, box, 4, 200, 1e-10, rng);
        CHECK(box.contains(r.x, 1e-12));
        CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r.x[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    }
}

TEST_CASE("reference oracle") {
    const BoxDomain box = unit_box(2);

    SUBCASE("constant acquisition returns the constant") {
        const FunctionAcquisition acq([](const Eigen::VectorXd&) { return 4.2; });
        CHECK(reference_max(acq, box, 100) == 4.2);
    }

    SUBCASE("dominates every solver value on the same surface") {
        Eigen::VectorXd x0(2);
        x0 << 0.42, 0.17;
        const FunctionAcquisition acq = quadratic(x0, 1.0);
        RngStream rng(12);
        const SolverResult grid = solve_uniform_grid(acq, box, 5, 50, rng);
        const double ref = reference_max(acq, box, 4096, grid.grid, grid.value);
        CHECK(ref >= grid.value);
        // unimodal analytic max is peak value 1.0
        CHECK(ref <= 1.0);
        CHECK(ref > 1.0 - 1e-3);
    }
}

TEST_CASE("fill distance") {
    SUBCASE("single mid-point grid on the unit interval") {
        BoxDomain line = BoxDomain::cube(1, 0.0, 1.0);
        Eigen::MatrixXd grid(1, 1);
        grid << 0.5;
        RngStream rng(13);
        const double h = fill_distance(grid, line, 20000, rng);
        CHECK(h <= 0.5);
        CHECK(h > 0.49);
    }

    SUBCASE("probing the grid itself gives zero") {
        BoxDomain box = unit_box(2);
        RngStream rng(14);
        const Eigen::MatrixXd grid = draw_uniform_grid(box, 50, rng);
        // distance from each grid point to the grid is zero; estimator is a max
        // over probes drawn from the same stream state, so rebuild with probes
        // equal to grid by direct computation
        double max_min = 0.0;
        for (int i = 0; i < grid.rows(); ++i) {
            double best = 1e300;
            for (int j = 0; j < grid.rows(); ++j) {
                best = std::min(best,
                                (grid.row(i) - grid.row(j)).norm());
            }
            max_min = std::max(max_min, best);
        }
        CHECK(max_min == 0.0);
    }

    SUBCASE("two-dimensional decay rate is near -1/2") {
        BoxDomain box = unit_box(2);
        std::vector<double> log_t, log_h;
        for (int p = 4; p <= 10; ++p) {
            const int t = 1 << p;
            double acc = 0.0;
            for (int seed = 0; seed < 50; ++seed) {
                RngStream grid_rng = substream(900, p, seed);
                RngStream probe_rng = substream(901, p, seed);
                const Eigen::MatrixXd grid = draw_uniform_grid(box, t, grid_rng);
                acc += fill_distance(grid, box, 4 * t, probe_rng);
            }
            log_t.push_back(std::log(static_cast<double>(t)));
            log_h.push_back(std::log(acc / 50.0));
        }
        const double slope = regression_slope(log_t, log_h);
        CHECK(slope > -0.65);
        CHECK(slope < -0.35);
    }
}

TEST_CASE("run_solver dispatch honors the spec defaults") {
    const BoxDomain box = unit_box(2);
    Eigen::VectorXd x0(2);
    x0 << 0.6, 0.3;
    const FunctionAcquisition acq = quadratic(x0, 1.0);

    SolverSpec spec;
    spec.kind = SolverKind::UniformGrid;
    spec.grid_coefficient = 30;
    RngStream rng(15);
    const SolverResult r = run_solver(acq, box, spec, 2, rng);
    CHECK(r.n_evals == 60);
    CHECK(box.contains(r.x));

    SolverSpec oracle;
    oracle.kind = SolverKind::ReferenceOracle;
    oracle.oracle_size = 2000;
    RngStream rng2(16);
    const SolverResult ro = run_solver(acq, box, oracle, 1, rng2);
    CHECK(ro.value > 1.0 - 1e-2);
}

TEST_CASE("solver names are stable identifiers") {
    CHECK(solver_name(SolverKind::UniformGrid) == "uniform-grid");
    CHECK(solver_name(SolverKind::FixedGrid) == "fixed-grid");
    CHECK(solver_name(SolverKind::MultiStartSimplex) == "nelder-mead");
    CHECK(solver_name(SolverKind::MultiStartGradient) == "gradient-multistart");
    CHECK(solver_name(SolverKind::ReferenceOracle) == "reference-oracle");
}
