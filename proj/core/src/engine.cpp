#include "gridbo/engine.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "gridbo/sobol.hpp"

namespace gridbo {

namespace {

using Clock = std::chrono::steady_clock;

// substream tags within one run
enum : std::uint64_t { kTagNoise = 1, kTagGrid = 2, kTagTsDraw = 3, kTagSolver = 4 };

}  // namespace

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::UCB: return "ucb";
        case Algorithm::TS: return "ts";
        case Algorithm::TSEnlarged: return "ts-enlarged";
    }
    return "unknown";
}

double EtaFloorSchedule::at(int t) const {
    if (kind == Kind::Constant) return constant;
    return 1.0 - 1.0 / std::sqrt(static_cast<double>(t) + 1.0);
}

void BoConfig::validate() const {
    kernel.validate();
    if (tau <= 0.0) throw std::invalid_argument("BoConfig: tau must be positive");
    if (n_init < 1) throw std::invalid_argument("BoConfig: n_init must be >= 1");
    if (horizon < 1) throw std::invalid_argument("BoConfig: horizon must be >= 1");
    if (!objective.fn) throw std::invalid_argument("BoConfig: objective not set");
    const bool is_ts = algorithm == Algorithm::TS || algorithm == Algorithm::TSEnlarged;
    if (is_ts && solver.kind != SolverKind::UniformGrid &&
        solver.kind != SolverKind::FixedGrid) {
        throw std::invalid_argument(
            "BoConfig: TS sample paths exist only on a grid; use a grid solver");
    }
    if (algorithm == Algorithm::TSEnlarged) {
        if (effective_norm_bound() <= 0.0) {
            throw std::invalid_argument("BoConfig: enlarged-variance TS requires B > 0");
        }
        if (eta_floor.kind == EtaFloorSchedule::Kind::Constant &&
            (eta_floor.constant <= 0.0 || eta_floor.constant > 1.0)) {
            throw std::invalid_argument("BoConfig: eta floor must lie in (0, 1]");
        }
    }
}

Eigen::MatrixXd init_design(const BoxDomain& domain, int n_init, std::uint64_t) {
    if (n_init < 1) throw std::invalid_argument("init_design: n_init must be >= 1");
    return sobol_points_in_box(n_init, domain.lo, domain.hi);
}

RunTrace run_bo(const BoConfig& cfg) {
    cfg.validate();
    const BoxDomain& domain = cfg.objective.domain;
    const double B = cfg.effective_norm_bound();
    const bool is_ts = cfg.algorithm == Algorithm::TS || cfg.algorithm == Algorithm::TSEnlarged;

    RunTrace trace;
    trace.objective = cfg.objective.name;
    trace.algorithm = algorithm_name(cfg.algorithm);
    trace.solver = solver_name(cfg.solver.kind);
    trace.seed = cfg.seed;
    trace.f_star = cfg.objective.f_star;
    trace.n_init = cfg.n_init;
    trace.rows.reserve(cfg.horizon);

    RngStream noise_rng = substream(cfg.seed, kTagNoise);
    const Eigen::MatrixXd X0 = init_design(domain, cfg.n_init, cfg.seed);
    Eigen::VectorXd y0(cfg.n_init);
    for (int i = 0; i < cfg.n_init; ++i) {
        y0[i] = observe(cfg.objective, cfg.noise, X0.row(i).transpose(), noise_rng);
    }
    GpPosterior gp(cfg.kernel, cfg.tau, X0, y0);

    double cum_regret = 0.0;
    for (int t = 1; t <= cfg.horizon; ++t) {
        try {
            const double gamma_prev = gp.info_gain();
            const double beta = beta_value(cfg.beta_schedule, t, gamma_prev);

            IterationRecord row;
            row.t = t;
            row.beta = beta;

            SolverResult result;
            if (is_ts) {
                const int grid_size = cfg.solver.kind == SolverKind::UniformGrid
                                          ? cfg.solver.grid_coefficient * t
                                          : cfg.solver.fixed_size;
                RngStream grid_rng = substream(cfg.seed, kTagGrid, t);
                Eigen::MatrixXd grid = draw_uniform_grid(domain, grid_size, grid_rng);
                const double eta_tilde = cfg.eta_floor.at(t);
                const double v_tilde = cfg.algorithm == Algorithm::TSEnlarged
                                           ? (1.0 / eta_tilde - 1.0) * B
                                           : 0.0;
                const auto build_start = Clock::now();
                RngStream draw_rng = substream(cfg.seed, kTagTsDraw, t);
                const TsSample ts =
                    ts_build(gp, std::move(grid), beta, v_tilde, cfg.ts_delta, B, draw_rng);
                row.build_seconds =
                    std::chrono::duration<double>(Clock::now() - build_start).count();
                const Eigen::Index best = argmax_lowest_index(ts.values);
                result.x = ts.grid.row(best).transpose();
                result.value = ts.values[best];
                result.n_evals = ts.grid.rows();
                result.wall_seconds =
                    std::chrono::duration<double>(Clock::now() - build_start).count();
                if (cfg.measure_eta) {
                    // the TS sample exists only on its decision set, over which
                    // the argmax scan is exact
                    row.eta_hat = 1.0;
                }
            } else {
                const UcbSurface surface(gp, beta, ucb_shift(B));
                RngStream solver_rng = substream(cfg.seed, kTagSolver, t);
                result = run_solver(surface, domain, cfg.solver, t, solver_rng);
                if (cfg.measure_eta) {
                    const double ref = reference_max(surface, domain, cfg.oracle_size,
                                                     result.grid, result.value);
                    row.eta_hat = result.value / ref;
                }
            }

            row.x = result.x;
            row.solve_seconds = result.wall_seconds;
            row.n_evals = result.n_evals;
            row.f_value = cfg.objective.evaluate(result.x);
            row.y = cfg.noise.kind == NoiseModel::Kind::None
                        ? row.f_value
                        : row.f_value + cfg.noise.noise_scale * noise_rng.normal();
            row.regret = instantaneous_regret(cfg.objective.f_star, row.f_value);
            cum_regret += row.regret;
            row.cum_regret = cum_regret;

            gp = gp.updated(result.x, row.y);
            row.gamma = gp.info_gain();
            trace.rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            throw std::runtime_error("run_bo: iteration " + std::to_string(t) + " (" +
                                     trace.objective + "/" + trace.solver +
                                     "): " + e.what());
        }
    }
    return trace;
}

ReplicateSet run_replicates(const BoConfig& cfg, int n_reps, int parallelism) {
    if (n_reps < 1) throw std::invalid_argument("run_replicates: n_reps >= 1");
    if (parallelism < 1) parallelism = 1;

    std::vector<RunTrace> traces(n_reps);
    std::vector<std::string> errors(n_reps);
    std::vector<char> failed(n_reps, 0);
    std::atomic<int> next{0};

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_reps) return;
            BoConfig rep_cfg = cfg;
            rep_cfg.seed = cfg.seed + static_cast<std::uint64_t>(i);
            try {
                traces[i] = run_bo(rep_cfg);
            } catch (const std::exception& e) {
                failed[i] = 1;
                errors[i] = e.what();
            }
        }
    };

    if (parallelism == 1 || n_reps == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int n_threads = std::min(parallelism, n_reps);
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    ReplicateSet out;
    for (int i = 0; i < n_reps; ++i) {
        if (failed[i]) {
            out.failures.emplace_back(i, errors[i]);
        } else {
            out.traces.push_back(std::move(traces[i]));
        }
    }
    return out;
}

}  // namespace gridbo
