// Command-line front end: run experiment plans, summarize result
// directories, list the built-in plans, validate plan files.

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "gridbo/plan.hpp"
#include "gridbo/report.hpp"
#include "gridbo/runner.hpp"

namespace {

int default_workers() {
    if (const char* env = std::getenv("BO_WORKERS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring malformed BO_WORKERS='" << env << "'\n";
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

int cmd_run(const std::string& plan_ref, int workers, std::string out_dir,
            bool seed_given, std::uint64_t seed) {
    gridbo::ExperimentPlan plan = gridbo::load_plan(plan_ref);
    if (const char* env = std::getenv("BO_SEED")) {
        try {
            plan.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring malformed BO_SEED='" << env << "'\n";
        }
    }
    if (seed_given) plan.seed = seed;  // --seed beats the environment
    if (out_dir.empty()) out_dir = plan.out_dir;
    if (out_dir.empty()) out_dir = "results/" + plan.name;

    std::cout << "plan '" << plan.name << "': " << plan.entries.size()
              << " arms, seed " << plan.seed << ", " << workers << " worker(s)\n";
    const gridbo::ExecutionReport report =
        gridbo::execute_plan(plan, workers, out_dir);
    std::cout << "completed " << report.n_completed() << ", skipped "
              << report.n_skipped() << ", failed " << report.n_failed() << "\n";
    for (const gridbo::RunStatus& run : report.runs) {
        if (run.failed) {
            std::cerr << "FAILED " << run.experiment << " seed " << run.seed << ": "
                      << run.error << "\n";
        }
    }
    std::cout << "results: " << report.out_dir << "/results.csv\n";
    return report.all_failed() ? 1 : 0;
}

int cmd_summarize(const std::string& dir) {
    const gridbo::Summary summary = gridbo::summarize_dir(dir);
    std::cout << gridbo::render_summary_table(summary);
    std::cout << "wrote " << dir << "/summary.csv and " << dir << "/plots/\n";
    return 0;
}

int cmd_validate(const std::string& path) {
    const gridbo::ExperimentPlan plan = gridbo::load_plan(path);
    std::cout << "ok: plan '" << plan.name << "' with " << plan.entries.size()
              << " arm(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian optimization experiment runner"};
    app.require_subcommand(1);

    std::string plan_ref, out_dir, dir, plan_path;
    int workers = default_workers();
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "Execute a plan (built-in name or file)");
    run->add_option("plan", plan_ref, "Plan name or file")->required();
    run->add_option("--workers", workers, "Parallel runs");
    run->add_option("--out", out_dir, "Results directory");
    auto* seed_opt = run->add_option("--seed", seed, "Override the plan seed");

    auto* summ = app.add_subcommand("summarize", "Summarize a results directory");
    summ->add_option("dir", dir, "Results directory")->required();

    auto* list = app.add_subcommand("list-plans", "List built-in plans");

    auto* val = app.add_subcommand("validate", "Validate a plan file");
    val->add_option("plan", plan_path, "Plan name or file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(plan_ref, workers, out_dir, seed_opt->count() > 0, seed);
        }
        if (summ->parsed()) return cmd_summarize(dir);
        if (list->parsed()) {
            for (const std::string& name : gridbo::builtin_plan_names()) {
                std::cout << name << "\n";
            }
            return 0;
        }
        if (val->parsed()) return cmd_validate(plan_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
