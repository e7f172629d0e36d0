#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridbo/plan.hpp"
#include "gridbo/results.hpp"

namespace gridbo {

struct RunStatus {
    std::string experiment;
    std::uint64_t seed = 0;
    std::string trace_file;  // relative to the results directory
    bool skipped = false;    // completed by an earlier invocation
    bool failed = false;
    std::string error;
};

struct ExecutionReport {
    std::string out_dir;
    std::vector<RunStatus> runs;

    int n_completed() const;
    int n_skipped() const;
    int n_failed() const;
    bool all_failed() const;
};

/// FNV-1a hash of an entry's fully resolved serialization plus the base seed;
/// identifies a (configuration, seed) pair across invocations.
std::uint64_t entry_hash(const PlanEntry& entry, std::uint64_t plan_seed);

/// Runs every (entry, replicate) of the plan, skipping pairs whose trace file
/// already exists with the full horizon. Writes per-run trace CSVs under
/// out_dir/runs/, a merged results.csv, and manifest.json. parallelism <= 0
/// selects single-threaded execution.
ExecutionReport execute_plan(const ExperimentPlan& plan, int parallelism,
                             const std::string& out_dir);

}  // namespace gridbo
