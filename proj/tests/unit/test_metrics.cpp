#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "gridbo/metrics.hpp"
#include "gridbo/objectives.hpp"
#include "gridbo/rng.hpp"

using namespace gridbo;

namespace {

RunTrace trace_from_values(double f_star, const std::vector<double>& f_values) {
    RunTrace trace;
    trace.f_star = f_star;
    double cum = 0.0;
    int t = 0;
    for (double f : f_values) {
        IterationRecord rec;
        rec.t = ++t;
        rec.f_value = f;
        rec.y = f;
        rec.regret = instantaneous_regret(f_star, f);
        cum += rec.regret;
        rec.cum_regret = cum;
        trace.rows.push_back(rec);
    }
    return trace;
}

}  // namespace

TEST_CASE("instantaneous regret identities") {
    CHECK(instantaneous_regret(3.0, 3.0) == 0.0);
    CHECK(instantaneous_regret(3.0, 1.25) == 1.75);
    // f* is the max, so regret is never negative for in-range values
    const ObjectiveSpec b = branin();
    REQUIRE(!b.x_star.empty());
    CHECK(instantaneous_regret(b.f_star, b.evaluate(b.x_star[0])) >= 0.0);
    CHECK(instantaneous_regret(b.f_star, b.evaluate(b.x_star[0])) < 1e-6);
}

TEST_CASE("simple regret properties") {
    const RunTrace trace = trace_from_values(2.0, {0.0, 1.5, 1.0, 1.9});

    SUBCASE("equals f_star minus the best value seen") {
        CHECK(simple_regret(trace) == doctest::Approx(0.1).epsilon(1e-14));
    }

    SUBCASE("bounded by the average cumulative regret") {
        const double T = static_cast<double>(trace.rows.size());
        CHECK(simple_regret(trace) <= trace.cumulative_regret() / T + 1e-14);
    }

    SUBCASE("monotone in the horizon") {
        double prev = 1e300;
        RunTrace partial;
        partial.f_star = trace.f_star;
        for (const IterationRecord& rec : trace.rows) {
            partial.rows.push_back(rec);
            const double sr = simple_regret(partial);
            CHECK(sr <= prev);
            prev = sr;
        }
    }
}

TEST_CASE("realized information gain") {
    const KernelSpec se = KernelSpec::squared_exponential(1.0);

    SUBCASE("single observation with unit kernel and noise") {
        // 0.5 * log(1 + 1/tau) with tau = 1: half log 2
        Eigen::MatrixXd X(1, 1);
        X << 0.3;
        Eigen::VectorXd y(1);
        y << 0.7;
        GpPosterior gp(se, 1.0, X, y);
        CHECK(gp.info_gain() ==
              doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
    }

    SUBCASE("vanishes as the noise dominates") {
        Eigen::MatrixXd X(3, 1);
        X << 0.1, 0.5, 0.9;
        Eigen::VectorXd y = Eigen::VectorXd::Zero(3);
        GpPosterior gp(se, 1e8, X, y);
        CHECK(gp.info_gain() < 1e-6);
        CHECK(gp.info_gain() >= 0.0);
    }

    SUBCASE("matches the dense log-determinant on a five-point chain") {
        RngStream rng(31);
        std::vector<GpPosterior> chain;
        Eigen::MatrixXd X(1, 2);
        X << rng.uniform(), rng.uniform();
        Eigen::VectorXd y(1);
        y << rng.normal();
        chain.emplace_back(se, 0.01, X, y);
        for (int t = 1; t < 5; ++t) {
            Eigen::VectorXd x(2);
            x << rng.uniform(), rng.uniform();
            chain.push_back(chain.back().updated(x, rng.normal()));
        }
        const std::vector<double> gains = realized_info_gain(chain);
        REQUIRE(gains.size() == 5);
        for (int t = 0; t < 5; ++t) {
            const Eigen::MatrixXd& Xt = chain[t].X();
            const Eigen::MatrixXd K = gram_matrix(se, Xt);
            const Eigen::MatrixXd M =
                Eigen::MatrixXd::Identity(t + 1, t + 1) + K / 0.01;
            const double dense = 0.5 * std::log(M.determinant());
            CHECK(gains[t] == doctest::Approx(dense).epsilon(1e-8));
            if (t > 0) CHECK(gains[t] >= gains[t - 1] - 1e-12);
        }
    }
}

TEST_CASE("sublinearity diagnostic") {
    auto cum_regret_from = [](int T, auto rt) {
        std::vector<double> cum;
        double acc = 0.0;
        for (int t = 1; t <= T; ++t) {
            acc += rt(t);
            cum.push_back(acc);
        }
        return cum;
    };

    SUBCASE("linear regret R_t = t is flagged") {
        std::vector<double> cum;
        for (int t = 1; t <= 200; ++t) cum.push_back(static_cast<double>(t));
        const SublinearityReport rep = sublinearity_diagnostic(cum);
        CHECK_FALSE(rep.sublinear_consistent);
        CHECK(rep.loglog_slope == doctest::Approx(1.0).epsilon(1e-6));
        REQUIRE(rep.avg_regret_at_quartiles.size() == 4);
        for (double a : rep.avg_regret_at_quartiles) {
            CHECK(a == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    SUBCASE("square-root regret passes with slope near one half") {
        std::vector<double> cum;
        for (int t = 1; t <= 400; ++t) cum.push_back(std::sqrt(t));
        const SublinearityReport rep = sublinearity_diagnostic(cum);
        CHECK(rep.sublinear_consistent);
        CHECK(rep.loglog_slope == doctest::Approx(0.5).epsilon(0.02));
        // average regret decreases quartile to quartile
        for (int i = 1; i < 4; ++i) {
            CHECK(rep.avg_regret_at_quartiles[i] <
                  rep.avg_regret_at_quartiles[i - 1]);
        }
    }

    SUBCASE("logarithmic regret passes") {
        const std::vector<double> cum =
            cum_regret_from(400, [](int t) { return 1.0 / t; });
        // cum ~ log t
        const SublinearityReport rep = sublinearity_diagnostic(cum);
        CHECK(rep.sublinear_consistent);
        CHECK(rep.loglog_slope < 0.3);
    }

    SUBCASE("too-short input is rejected") {
        std::vector<double> cum{1.0, 2.0};
        CHECK_THROWS(sublinearity_diagnostic(cum));
    }
}

TEST_CASE("regression slope") {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 - 2.0 * v);
    CHECK(regression_slope(x, y) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("inaccuracy ledger accounting") {
    InaccuracyLedger ledger;
    ledger.append(1.0, 1.0, 0.5, 0.1);
    ledger.append(0.8, 0.75, 0.6, 0.2);
    ledger.append(0.9, 0.75, 0.7, 0.3);

    REQUIRE(ledger.eta.size() == 3);
    // M_t accumulates 1 - eta for both the floor and the measurement
    CHECK(ledger.m_worst[0] == doctest::Approx(0.0));
    CHECK(ledger.m_worst[1] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(ledger.m_worst[2] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ledger.m_measured[2] ==
          doctest::Approx(0.2 + 0.1).epsilon(1e-12));

    // both accumulators are nondecreasing and bounded by t
    for (std::size_t t = 0; t < ledger.eta.size(); ++t) {
        CHECK(ledger.m_worst[t] <= static_cast<double>(t + 1));
        CHECK(ledger.m_measured[t] <= static_cast<double>(t + 1));
        if (t > 0) {
            CHECK(ledger.m_worst[t] >= ledger.m_worst[t - 1]);
            CHECK(ledger.m_measured[t] >= ledger.m_measured[t - 1]);
        }
    }
}
