#include "gridbo/plan.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gridbo/objectives.hpp"

namespace gridbo {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        fail(origin, line, "bad numeric value for '" + key + "': " + v);
    }
}

long long parse_int(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        fail(origin, line, "bad integer value for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& origin, int line, const std::string& key,
                const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(origin, line, "bad boolean value for '" + key + "': " + v);
}

Algorithm parse_algorithm(const std::string& origin, int line, const std::string& v) {
    if (v == "ucb") return Algorithm::UCB;
    if (v == "ts") return Algorithm::TS;
    if (v == "ts-enlarged") return Algorithm::TSEnlarged;
    fail(origin, line, "unknown algorithm: " + v);
}

SolverKind parse_solver(const std::string& origin, int line, const std::string& v) {
    if (v == "uniform-grid") return SolverKind::UniformGrid;
    if (v == "fixed-grid") return SolverKind::FixedGrid;
    if (v == "nelder-mead") return SolverKind::MultiStartSimplex;
    if (v == "gradient-multistart") return SolverKind::MultiStartGradient;
    if (v == "reference-oracle") return SolverKind::ReferenceOracle;
    fail(origin, line, "unknown solver: " + v);
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void apply_entry_key(PlanEntry& e, const std::string& origin, int line,
                     const std::string& key, const std::string& v) {
    if (key == "experiment") e.experiment = v;
    else if (key == "objective") e.objective = v;
    else if (key == "algorithm") e.algorithm = parse_algorithm(origin, line, v);
    else if (key == "solver") e.solver.kind = parse_solver(origin, line, v);
    else if (key == "grid_coefficient")
        e.solver.grid_coefficient = static_cast<int>(parse_int(origin, line, key, v));
    else if (key == "fixed_size")
        e.solver.fixed_size = static_cast<int>(parse_int(origin, line, key, v));
    else if (key == "n_starts")
        e.solver.n_starts = static_cast<int>(parse_int(origin, line, key, v));
    else if (key == "max_inner_iters")
        e.solver.max_inner_iters = static_cast<int>(parse_int(origin, line, key, v));
    else if (key == "inner_tol") e.solver.inner_tol = parse_double(origin, line, key, v);
    else if (key == "beta") {
        if (v == "practical") e.beta.kind = BetaKind::Practical;
        else if (v == "theoretical") e.beta.kind = BetaKind::Theoretical;
        else fail(origin, line, "unknown beta schedule: " + v);
    } else if (key == "beta_delta") e.beta.delta = parse_double(origin, line, key, v);
    else if (key == "beta_divisor")
        e.beta.delta_divisor = static_cast<int>(parse_int(origin, line, key, v));
    else if (key == "kernel") {
        if (v != "matern" && v != "squared-exponential")
            fail(origin, line, "unknown kernel family: " + v);
        e.kernel_family = v;
    } else if (key == "smoothness") e.kernel_smoothness = parse_double(origin, line, key, v);
    else if (key == "lengthscale_factor")
        e.lengthscale_factor = parse_double(origin, line, key, v);
    else if (key == "tau") e.tau = parse_double(origin, line, key, v);
    else if (key == "noise_scale") e.noise_scale = parse_double(origin, line, key, v);
    else if (key == "norm_bound") e.norm_bound = parse_double(origin, line, key, v);
    else if (key == "ts_delta") e.ts_delta = parse_double(origin, line, key, v);
    else if (key == "eta_floor") {
        if (v == "constant") e.eta_floor.kind = EtaFloorSchedule::Kind::Constant;
        else if (v == "one-minus-inv-sqrt")
            e.eta_floor.kind = EtaFloorSchedule::Kind::OneMinusInvSqrt;
        else fail(origin, line, "unknown eta_floor schedule: " + v);
    } else if (key == "eta_floor_constant")
        e.eta_floor.constant = parse_double(origin, line, key, v);
    else if (key == "n_reps") e.n_reps = static_cast<int>(parse_int(origin, line, key, v));
    else if (key == "horizon") e.horizon = static_cast<int>(parse_int(origin, line, key, v));
    else if (key == "n_init") e.n_init = static_cast<int>(parse_int(origin, line, key, v));
    else if (key == "measure_eta") e.measure_eta = parse_bool(origin, line, key, v);
    else if (key == "oracle_size")
        e.oracle_size = static_cast<int>(parse_int(origin, line, key, v));
    else fail(origin, line, "unknown key in [run] section: " + key);
}

void validate_entry(const PlanEntry& e, const std::string& origin, int line) {
    if (e.experiment.empty()) fail(origin, line, "[run] section missing 'experiment'");
    if (e.objective.empty()) fail(origin, line, "[run] section missing 'objective'");
    if (e.horizon < 1) fail(origin, line, "'horizon' must be >= 1");
    if (e.n_init < 1) fail(origin, line, "'n_init' must be >= 1");
    if (e.n_reps < 1) fail(origin, line, "'n_reps' must be >= 1");
    if (e.solver.grid_coefficient < 1) fail(origin, line, "'grid_coefficient' must be >= 1");
    if (e.solver.fixed_size < 1) fail(origin, line, "'fixed_size' must be >= 1");
    if (e.lengthscale_factor <= 0) fail(origin, line, "'lengthscale_factor' must be > 0");
    if (e.tau <= 0) fail(origin, line, "'tau' must be > 0");
    // resolve the objective now so bad names carry plan-file context
    try {
        (void)objective_by_name(e.objective);
    } catch (const std::exception& ex) {
        fail(origin, line, ex.what());
    }
    // full config validation (TS + local solver etc.)
    try {
        e.to_config(0).validate();
    } catch (const std::exception& ex) {
        fail(origin, line, ex.what());
    }
}

}  // namespace

BoConfig PlanEntry::to_config(std::uint64_t seed) const {
    BoConfig cfg;
    cfg.algorithm = algorithm;
    cfg.objective = objective_by_name(objective);

    const int d = cfg.objective.domain.dim();
    KernelSpec kernel;
    kernel.family = kernel_family == "matern" ? KernelFamily::Matern
                                              : KernelFamily::SquaredExponential;
    kernel.smoothness = kernel_smoothness;
    kernel.lengthscale.resize(d);
    for (int j = 0; j < d; ++j) {
        kernel.lengthscale[j] = lengthscale_factor * cfg.objective.domain.side(j);
    }
    cfg.kernel = kernel;

    cfg.tau = tau;
    cfg.solver = solver;
    cfg.norm_bound = norm_bound;
    cfg.ts_delta = ts_delta;
    cfg.eta_floor = eta_floor;
    cfg.noise.kind = noise_scale > 0 ? NoiseModel::Kind::Gaussian : NoiseModel::Kind::None;
    cfg.noise.noise_scale = noise_scale;

    cfg.beta_schedule = beta;
    cfg.beta_schedule.norm_bound = cfg.effective_norm_bound();
    cfg.beta_schedule.noise_scale = noise_scale;

    cfg.n_init = n_init;
    cfg.horizon = horizon;
    cfg.seed = seed;
    cfg.oracle_size = oracle_size;
    cfg.measure_eta = measure_eta;
    return cfg;
}

ExperimentPlan parse_plan_text(const std::string& text, const std::string& origin) {
    ExperimentPlan plan;
    std::istringstream in(text);
    std::string raw;
    int line = 0;

    enum class Section { None, Plan, Run } section = Section::None;
    PlanEntry current;
    int entry_line = 0;
    bool have_entry = false;

    auto flush_entry = [&] {
        if (!have_entry) return;
        validate_entry(current, origin, entry_line);
        plan.entries.push_back(current);
        have_entry = false;
    };

    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(origin, line, "unterminated section header");
            const std::string name = trim(s.substr(1, s.size() - 2));
            if (name == "plan") {
                flush_entry();
                section = Section::Plan;
            } else if (name == "run") {
                flush_entry();
                section = Section::Run;
                current = PlanEntry{};
                entry_line = line;
                have_entry = true;
            } else {
                fail(origin, line, "unknown section [" + name + "]");
            }
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(origin, line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(origin, line, "empty key");

        switch (section) {
            case Section::None:
                fail(origin, line, "key outside any section: " + key);
            case Section::Plan:
                if (key == "name") plan.name = value;
                else if (key == "seed")
                    plan.seed = static_cast<std::uint64_t>(
                        parse_int(origin, line, key, value));
                else if (key == "out_dir") plan.out_dir = value;
                else fail(origin, line, "unknown key in [plan] section: " + key);
                break;
            case Section::Run:
                apply_entry_key(current, origin, line, key, value);
                break;
        }
    }
    flush_entry();
    if (plan.name.empty()) fail(origin, line, "plan has no [plan] name");
    return plan;
}

ExperimentPlan parse_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open plan file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_plan_text(buf.str(), path);
}

std::string serialize_plan(const ExperimentPlan& plan) {
    std::ostringstream out;
    out << "[plan]\n";
    out << "name = " << plan.name << "\n";
    out << "seed = " << plan.seed << "\n";
    if (!plan.out_dir.empty()) out << "out_dir = " << plan.out_dir << "\n";
    for (const PlanEntry& e : plan.entries) {
        out << "\n[run]\n";
        out << "experiment = " << e.experiment << "\n";
        out << "objective = " << e.objective << "\n";
        out << "algorithm = " << algorithm_name(e.algorithm) << "\n";
        out << "solver = " << solver_name(e.solver.kind) << "\n";
        out << "grid_coefficient = " << e.solver.grid_coefficient << "\n";
        out << "fixed_size = " << e.solver.fixed_size << "\n";
        out << "n_starts = " << e.solver.n_starts << "\n";
        out << "max_inner_iters = " << e.solver.max_inner_iters << "\n";
        out << "inner_tol = " << fmt_double(e.solver.inner_tol) << "\n";
        out << "beta = "
            << (e.beta.kind == BetaKind::Practical ? "practical" : "theoretical") << "\n";
        out << "beta_delta = " << fmt_double(e.beta.delta) << "\n";
        out << "beta_divisor = " << e.beta.delta_divisor << "\n";
        out << "kernel = " << e.kernel_family << "\n";
        out << "smoothness = " << fmt_double(e.kernel_smoothness) << "\n";
        out << "lengthscale_factor = " << fmt_double(e.lengthscale_factor) << "\n";
        out << "tau = " << fmt_double(e.tau) << "\n";
        out << "noise_scale = " << fmt_double(e.noise_scale) << "\n";
        out << "norm_bound = " << fmt_double(e.norm_bound) << "\n";
        out << "ts_delta = " << fmt_double(e.ts_delta) << "\n";
        out << "eta_floor = "
            << (e.eta_floor.kind == EtaFloorSchedule::Kind::Constant
                    ? "constant"
                    : "one-minus-inv-sqrt")
            << "\n";
        out << "eta_floor_constant = " << fmt_double(e.eta_floor.constant) << "\n";
        out << "n_reps = " << e.n_reps << "\n";
        out << "horizon = " << e.horizon << "\n";
        out << "n_init = " << e.n_init << "\n";
        out << "measure_eta = " << (e.measure_eta ? "true" : "false") << "\n";
        out << "oracle_size = " << e.oracle_size << "\n";
    }
    return out.str();
}

namespace {

struct StudyFunction {
    const char* objective;
    int n_init;
    int horizon;
    int dim;
};

// Section 5.1 protocol: init sizes 10d, horizons per function.
constexpr StudyFunction kStudyFunctions[] = {
    {"branin", 20, 80, 2},       {"rastrigin3", 30, 100, 3},
    {"hartmann3", 30, 100, 3},   {"hartmann4", 40, 100, 4},
    {"levy5", 50, 150, 5},       {"hartmann6", 60, 200, 6},
};

constexpr SolverKind kStudySolvers[] = {
    SolverKind::UniformGrid,
    SolverKind::FixedGrid,
    SolverKind::MultiStartSimplex,
    SolverKind::MultiStartGradient,
};

PlanEntry study_entry(const StudyFunction& fn, SolverKind solver, int n_init,
                      const std::string& prefix) {
    PlanEntry e;
    e.objective = fn.objective;
    e.algorithm = Algorithm::UCB;
    e.solver.kind = solver;
    e.experiment = prefix + "/" + fn.objective + "/" + solver_name(solver);
    e.beta.kind = BetaKind::Practical;
    e.kernel_family = "matern";
    e.kernel_smoothness = 2.5;
    e.n_reps = 20;
    e.horizon = fn.horizon;
    e.n_init = n_init;
    return e;
}

}  // namespace

ExperimentPlan builtin_plan(const std::string& name) {
    ExperimentPlan plan;
    plan.name = name;
    plan.seed = 20240501;
    if (name == "paper-sec5") {
        for (const auto& fn : kStudyFunctions) {
            for (SolverKind solver : kStudySolvers) {
                plan.entries.push_back(study_entry(fn, solver, fn.n_init, "sec5"));
            }
        }
        return plan;
    }
    if (name == "paper-appB-fixedgrid") {
        // growing c*t grid vs fixed 100-point grid on the 11-D surrogate task
        for (SolverKind solver : {SolverKind::UniformGrid, SolverKind::FixedGrid}) {
            PlanEntry e;
            e.objective = "synthetic-rkhs-11d";
            e.algorithm = Algorithm::UCB;
            e.solver.kind = solver;
            e.experiment = std::string("appB-grid/synthetic-rkhs-11d/") +
                           solver_name(solver);
            e.beta.kind = BetaKind::Practical;
            e.kernel_family = "squared-exponential";
            e.n_reps = 20;
            e.horizon = 100;
            e.n_init = 110;  // 10d
            plan.entries.push_back(e);
        }
        return plan;
    }
    if (name == "paper-appB-smallinit") {
        for (const auto& fn : kStudyFunctions) {
            for (SolverKind solver : kStudySolvers) {
                plan.entries.push_back(
                    study_entry(fn, solver, 5 * fn.dim, "appB-smallinit"));
            }
        }
        return plan;
    }
    throw std::invalid_argument("unknown built-in plan: " + name);
}

std::vector<std::string> builtin_plan_names() {
    return {"paper-sec5", "paper-appB-fixedgrid", "paper-appB-smallinit"};
}

ExperimentPlan load_plan(const std::string& ref) {
    for (const std::string& name : builtin_plan_names()) {
        if (ref == name) return builtin_plan(name);
    }
    return parse_plan(ref);
}

}  // namespace gridbo
