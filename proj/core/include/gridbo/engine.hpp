#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridbo/acquisition.hpp"
#include "gridbo/metrics.hpp"
#include "gridbo/objectives.hpp"
#include "gridbo/solvers.hpp"

namespace gridbo {

enum class Algorithm { UCB, TS, TSEnlarged };

std::string algorithm_name(Algorithm a);

/// Worst-case accuracy floor schedule, known to the algorithm (drives the
/// enlarged-variance term of robust TS).
struct EtaFloorSchedule {
    enum class Kind { Constant, OneMinusInvSqrt };
    Kind kind = Kind::Constant;
    double constant = 1.0;

    double at(int t) const;
};

struct BoConfig {
    Algorithm algorithm = Algorithm::UCB;
    KernelSpec kernel;
    double tau = 1e-6;
    BetaSchedule beta_schedule;
    SolverSpec solver;
    EtaFloorSchedule eta_floor;
    ObjectiveSpec objective;
    NoiseModel noise;
    double norm_bound = 0.0;  // B; 0 means "use objective.abs_bound"
    double ts_delta = 0.1;    // delta in the TS nonnegativity shift
    int n_init = 1;
    int horizon = 1;  // T
    std::uint64_t seed = 0;
    int oracle_size = 100000;
    bool measure_eta = false;

    void validate() const;
    double effective_norm_bound() const {
        return norm_bound > 0.0 ? norm_bound : objective.abs_bound;
    }
};

/// First n points of an unscrambled Sobol sequence mapped into the box. The
/// seed is accepted for interface stability; the unscrambled sequence does not
/// consume randomness, so the design is identical across seeds.
Eigen::MatrixXd init_design(const BoxDomain& domain, int n_init, std::uint64_t seed);

RunTrace run_bo(const BoConfig& cfg);

/// Replicate i runs with seed cfg.seed + i. Results are ordered by replicate
/// index; execution order (parallel or not) does not change them. Failed
/// replicates are reported in `failures` and omitted from the result list.
struct ReplicateSet {
    std::vector<RunTrace> traces;
    std::vector<std::pair<int, std::string>> failures;  // replicate index, message
};

ReplicateSet run_replicates(const BoConfig& cfg, int n_reps, int parallelism);

}  // namespace gridbo
