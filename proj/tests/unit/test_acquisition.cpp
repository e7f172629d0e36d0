#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gridbo/acquisition.hpp"
#include "gridbo/rng.hpp"
#include "gridbo/solvers.hpp"

using namespace gridbo;

namespace {

Eigen::MatrixXd random_points(int n, int d, RngStream& rng) {
    Eigen::MatrixXd X(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
    return X;
}

Eigen::VectorXd random_vector(int n, RngStream& rng) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
    return v;
}

}  // namespace

TEST_CASE("beta schedule values") {
    BetaSchedule th{BetaKind::Theoretical, 1.0, 1.0, 0.1, 1};

    SUBCASE("noise-free theoretical schedule degenerates to B") {
        BetaSchedule nf = th;
        nf.noise_scale = 0.0;
        nf.norm_bound = 2.5;
        for (int t : {1, 5, 50}) CHECK(beta_value(nf, t, 3.0) == 2.5);
    }

    SUBCASE("theoretical plug-in value") {
        // B + R sqrt(2 (gamma + 1 + log(1/delta))) at gamma = 0, delta = 0.1
        const double expected = 1.0 + std::sqrt(2.0 * (1.0 + std::log(10.0)));
        CHECK(beta_value(th, 3, 0.0) ==
              doctest::Approx(3.5700525648297723).epsilon(1e-14));
        CHECK(beta_value(th, 3, 0.0) == doctest::Approx(expected).epsilon(1e-14));
    }

    SUBCASE("divisor selects log(2/delta) and log(3/delta)") {
        BetaSchedule d2 = th, d3 = th;
        d2.delta_divisor = 2;
        d3.delta_divisor = 3;
        CHECK(beta_value(d2, 1, 0.5) ==
              doctest::Approx(1.0 + std::sqrt(2.0 * (0.5 + 1.0 + std::log(20.0))))
                  .epsilon(1e-14));
        CHECK(beta_value(d3, 1, 0.5) ==
              doctest::Approx(1.0 + std::sqrt(2.0 * (0.5 + 1.0 + std::log(30.0))))
                  .epsilon(1e-14));
    }

    SUBCASE("practical schedule") {
        BetaSchedule pr{BetaKind::Practical, 0.0, 0.0, 0.1, 1};
        CHECK(beta_value(pr, 1, 123.0) ==
              doctest::Approx(1.0481470739682051).epsilon(1e-14));
        CHECK(beta_value(pr, 10, 0.0) ==
              doctest::Approx(std::sqrt(std::log(12.0))).epsilon(1e-14));
    }

    SUBCASE("theoretical schedule is nondecreasing along nondecreasing gamma") {
        double prev = 0.0;
        double gamma = 0.0;
        for (int t = 1; t <= 40; ++t) {
            gamma += 0.3;  // realized info gain only grows
            const double b = beta_value(th, t, gamma);
            CHECK(b >= prev);
            prev = b;
        }
    }
}

TEST_CASE("shift constants") {
    CHECK(ucb_shift(1.0) == 1.0);
    CHECK(ucb_shift(0.0) == 0.0);

    // grid_size=1, delta=1 boundary: log term vanishes
    CHECK(ts_shift(1, 1.0, 2.0, 0.5, 1.0) == doctest::Approx(3.5).epsilon(1e-14));
    // plug-in value: (1 + sqrt(2 log 1000)) * 2 + 1
    const double expected = (1.0 + std::sqrt(2.0 * std::log(1000.0))) * 2.0 + 1.0;
    CHECK(ts_shift(100, 0.1, 2.0, 0.0, 1.0) ==
          doctest::Approx(10.433844377699677).epsilon(1e-14));
    CHECK(ts_shift(100, 0.1, 2.0, 0.0, 1.0) ==
          doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("ucb surface recomposition and gradient") {
    const KernelSpec se = KernelSpec::squared_exponential(0.8);
    RngStream rng(7);
    GpPosterior gp(se, 1e-3, random_points(3, 2, rng), random_vector(3, rng));

    SUBCASE("beta 0, shift 0 equals the posterior mean") {
        const UcbSurface surface(gp, 0.0, 0.0);
        for (int i = 0; i < 20; ++i) {
            const Eigen::VectorXd x = random_points(1, 2, rng).row(0);
            CHECK(surface.value(x) ==
                  doctest::Approx(gp.mean_var(x).first).epsilon(1e-12));
        }
    }

    SUBCASE("prior surface is flat at beta") {
        GpPosterior prior(se, 1e-3, Eigen::MatrixXd(0, 2), Eigen::VectorXd(0));
        const UcbSurface surface(prior, 2.0, 0.0);
        for (int i = 0; i < 10; ++i) {
            const Eigen::VectorXd x = random_points(1, 2, rng).row(0);
            CHECK(surface.value(x) == doctest::Approx(2.0).epsilon(1e-12));
        }
    }

    SUBCASE("decomposition: value - shift - mean = beta * sigma") {
        const UcbSurface surface(gp, 1.7, 3.0);
        for (int i = 0; i < 50; ++i) {
            const Eigen::VectorXd x = random_points(1, 2, rng).row(0);
            const auto [m, v] = gp.mean_var(x);
            CHECK(std::abs(surface.value(x) - 3.0 - m - 1.7 * std::sqrt(v)) <
                  1e-12);
            CHECK(surface.value(x) ==
                  doctest::Approx(ucb_value(gp, 1.7, 3.0, x)).epsilon(1e-14));
        }
    }

    SUBCASE("batch equals pointwise") {
        const UcbSurface surface(gp, 1.1, 0.5);
        const Eigen::MatrixXd Q = random_points(30, 2, rng);
        const Eigen::VectorXd batch = surface.value_batch(Q);
        for (int i = 0; i < 30; ++i) {
            CHECK(std::abs(batch[i] - surface.value(Q.row(i).transpose())) <
                  1e-12);
        }
    }

    SUBCASE("analytic gradient matches finite differences") {
        const UcbSurface surface(gp, 1.3, 0.0);
        REQUIRE(surface.has_gradient());
        const double h = 1e-6;
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::VectorXd x = random_points(1, 2, rng).row(0);
            const Eigen::VectorXd g = surface.gradient(x);
            for (int j = 0; j < 2; ++j) {
                Eigen::VectorXd xp = x, xm = x;
                xp[j] += h;
                xm[j] -= h;
                const double fd = (surface.value(xp) - surface.value(xm)) / (2 * h);
                CHECK(std::abs(g[j] - fd) < 1e-4);
            }
        }
    }
}

TEST_CASE("shift invariance of the argmax over any candidate set") {
    const KernelSpec se = KernelSpec::squared_exponential(0.6);
    RngStream rng(19);
    GpPosterior gp(se, 1e-3, random_points(8, 2, rng), random_vector(8, rng));
    const Eigen::MatrixXd cands = random_points(200, 2, rng);
    const UcbSurface raw(gp, 1.5, 0.0);
    for (double shift : {0.0, 1.0, 17.5}) {
        const UcbSurface shifted(gp, 1.5, shift);
        CHECK(argmax_lowest_index(raw.value_batch(cands)) ==
              argmax_lowest_index(shifted.value_batch(cands)));
    }
}

TEST_CASE("ts_build stores a shifted sample with the requested marginal law") {
    const KernelSpec se = KernelSpec::squared_exponential(1.0);
    RngStream rng(29);
    GpPosterior gp(se, 1e-2, random_points(5, 2, rng), random_vector(5, rng));
    const Eigen::MatrixXd grid = random_points(6, 2, rng);

    SUBCASE("beta 0 and v 0 gives the posterior means plus shift") {
        RngStream draw(3);
        const TsSample ts = ts_build(gp, grid, 0.0, 0.0, 0.1, 1.0, draw);
        Eigen::VectorXd mean, var;
        gp.mean_var_batch(grid, mean, var);
        for (int i = 0; i < 6; ++i) {
            CHECK(ts.values[i] ==
                  doctest::Approx(mean[i] + ts.shift).epsilon(1e-12));
        }
        CHECK(ts.shift ==
              doctest::Approx(ts_shift(6, 0.1, 0.0, 0.0, 1.0)).epsilon(1e-14));
    }

    SUBCASE("enlarged-variance marginal moments at a fixed grid point") {
        // eta floor 0.5 with B = 2 gives v = 2; marginal std beta*sigma + 2
        const double beta = 1.4, v_tilde = 2.0;
        Eigen::VectorXd mean, var;
        gp.mean_var_batch(grid, mean, var);
        const double target_std = beta * std::sqrt(var[2]) + v_tilde;

        RngStream draw(77);
        const int n = 100000;
        double s = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
            const TsSample ts = ts_build(gp, grid, beta, v_tilde, 0.1, 2.0, draw);
            const double u = ts.values[2] - ts.shift;
            s += u;
            s2 += u * u;
        }
        const double emp_mean = s / n;
        const double emp_std = std::sqrt(s2 / n - emp_mean * emp_mean);
        CHECK(std::abs(emp_mean - mean[2]) < 0.02 * target_std);
        CHECK(std::abs(emp_std - target_std) < 0.02 * target_std);
    }

    SUBCASE("plain TS is the v = 0 case of the enlarged sampler") {
        RngStream d1(9), d2(9);
        const TsSample plain = ts_build(gp, grid, 1.2, 0.0, 0.1, 1.0, d1);
        const TsSample enlarged_zero = ts_build(gp, grid, 1.2, 0.0, 0.1, 1.0, d2);
        for (int i = 0; i < 6; ++i) {
            CHECK(plain.values[i] == enlarged_zero.values[i]);
        }
        CHECK(plain.v_tilde == 0.0);
    }
}
