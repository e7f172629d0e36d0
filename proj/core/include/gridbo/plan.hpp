#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridbo/engine.hpp"

namespace gridbo {

/// One experiment arm: everything needed to build a BoConfig except the
/// replicate seed. Stored fully resolved so that serialization round-trips
/// losslessly.
struct PlanEntry {
    std::string experiment;  // row label in results.csv
    std::string objective;
    Algorithm algorithm = Algorithm::UCB;

    SolverSpec solver;

    BetaSchedule beta;
    std::string kernel_family = "matern";  // "matern" | "squared-exponential"
    double kernel_smoothness = 2.5;
    double lengthscale_factor = 0.2;  // lengthscale = factor x domain side, per dim

    double tau = 1e-6;
    double noise_scale = 0.0;  // 0 = noise-free observations
    double norm_bound = 0.0;   // 0 = use the objective's bound
    double ts_delta = 0.1;
    EtaFloorSchedule eta_floor;

    int n_reps = 1;
    int horizon = 1;
    int n_init = 1;
    bool measure_eta = false;
    int oracle_size = 100000;

    /// Resolves this entry against the named objective for one replicate.
    BoConfig to_config(std::uint64_t seed) const;
};

struct ExperimentPlan {
    std::string name;
    std::uint64_t seed = 0;
    std::string out_dir;  // optional; CLI --out overrides
    std::vector<PlanEntry> entries;
};

/// Parses the sectioned key-value plan format. Unknown keys, bad values and
/// missing required fields raise std::invalid_argument with the line number.
ExperimentPlan parse_plan_text(const std::string& text,
                               const std::string& origin = "<string>");
ExperimentPlan parse_plan(const std::string& path);

/// Inverse of parse_plan_text: parse(serialize(p)) == p field-for-field.
std::string serialize_plan(const ExperimentPlan& plan);

/// Built-in plans: "paper-sec5", "paper-appB-fixedgrid", "paper-appB-smallinit".
/// Throws for unknown names.
ExperimentPlan builtin_plan(const std::string& name);
std::vector<std::string> builtin_plan_names();

/// Resolves `ref` as a built-in plan name first, then as a file path.
ExperimentPlan load_plan(const std::string& ref);

}  // namespace gridbo
