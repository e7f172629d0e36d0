#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gridbo/report.hpp"
#include "gridbo/runner.hpp"

using namespace gridbo;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "missing file " << p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentPlan tiny_plan() {
    const char* text = R"([plan]
name = tiny
seed = 77

[run]
experiment = tiny/branin/uniform-grid
objective = branin
solver = uniform-grid
grid_coefficient = 20
n_reps = 2
horizon = 5
n_init = 3
measure_eta = true
oracle_size = 500
)";
    return parse_plan_text(text, "tiny.plan");
}

struct TempDir {
    fs::path path;
    TempDir(const char* tag) {
        path = fs::temp_directory_path() /
               (std::string("gridbo-test-") + tag + "-" +
                std::to_string(::getpid()));
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// strip the timing column so reruns compare on science content only
std::string drop_solve_ms(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        // solve_ms is the second-to-last comma-separated field
        const std::size_t last = line.rfind(',');
        if (last == std::string::npos) continue;
        const std::size_t prev = line.rfind(',', last - 1);
        out << line.substr(0, prev) << line.substr(last) << "\n";
    }
    return out.str();
}

}  // namespace

TEST_CASE("entry hash identifies resolved configurations") {
    const ExperimentPlan plan = tiny_plan();
    PlanEntry e = plan.entries[0];
    const std::uint64_t h = entry_hash(e, plan.seed);
    CHECK(h == entry_hash(e, plan.seed));  // stable
    CHECK(h != entry_hash(e, plan.seed + 1));
    PlanEntry changed = e;
    changed.horizon += 1;
    CHECK(h != entry_hash(changed, plan.seed));
}

TEST_CASE("execute_plan writes traces, merged results and a manifest") {
    const ExperimentPlan plan = tiny_plan();
    TempDir tmp("exec");
    const std::string out = (tmp.path / "a").string();

    const ExecutionReport rep = execute_plan(plan, 1, out);
    CHECK(rep.n_completed() == 2);
    CHECK(rep.n_skipped() == 0);
    CHECK(rep.n_failed() == 0);

    const std::vector<ResultRow> rows =
        read_results_csv((fs::path(out) / "results.csv").string());
    CHECK(rows.size() == 2 * 5);  // two seeds, horizon five
    for (const ResultRow& row : rows) {
        CHECK(row.experiment == "tiny/branin/uniform-grid");
        CHECK((row.seed == 77 || row.seed == 78));
    }
    CHECK(fs::exists(fs::path(out) / "manifest.json"));
    // one trace file per replicate
    int traces = 0;
    for (const auto& entry : fs::directory_iterator(fs::path(out) / "runs")) {
        (void)entry;
        ++traces;
    }
    CHECK(traces == 2);

    SUBCASE("a second invocation skips completed work and changes no byte") {
        const std::string before_results = slurp(fs::path(out) / "results.csv");
        const std::string before_manifest = slurp(fs::path(out) / "manifest.json");
        const ExecutionReport again = execute_plan(plan, 1, out);
        CHECK(again.n_skipped() == 2);
        CHECK(again.n_completed() == 0);
        CHECK(slurp(fs::path(out) / "results.csv") == before_results);
        CHECK(slurp(fs::path(out) / "manifest.json") == before_manifest);
    }

    SUBCASE("a fresh parallel run reproduces everything but the timings") {
        const std::string out_b = (tmp.path / "b").string();
        (void)execute_plan(plan, 2, out_b);
        CHECK(drop_solve_ms(slurp(fs::path(out) / "results.csv")) ==
              drop_solve_ms(slurp(fs::path(out_b) / "results.csv")));
    }

    SUBCASE("summarize_dir reads the directory back") {
        const Summary s = summarize_dir(out);
        REQUIRE(s.groups.size() == 1);
        CHECK(s.groups[0].function == "branin");
        CHECK(s.groups[0].n_seeds == 2);
        CHECK(s.groups[0].regret_curve.t.size() == 5);
    }
}

namespace {

// synthetic rows for two arms with known regret laws: R_t = t and R_t = sqrt(t)
std::vector<ResultRow> synthetic_rows(int T, int n_seeds) {
    std::vector<ResultRow> rows;
    for (int variant = 0; variant < 2; ++variant) {
        for (int seed = 0; seed < n_seeds; ++seed) {
            double cum = 0.0;
            for (int t = 1; t <= T; ++t) {
                ResultRow row;
                row.experiment = variant == 0 ? "syn/linear" : "syn/sqrt";
                row.function = "synthetic";
                row.algorithm = "ucb";
                row.solver = variant == 0 ? "linear" : "sqrt";
                row.seed = static_cast<std::uint64_t>(seed);
                row.t = t;
                row.x = Eigen::VectorXd::Zero(1);
                const double target = variant == 0
                                          ? static_cast<double>(t)
                                          : std::sqrt(static_cast<double>(t));
                row.r = target - cum;
                cum = target;
                row.R = cum + 0.01 * seed;  // small seed-dependent offset
                row.y = -row.r;
                row.solve_ms = 1.0 + variant;
                row.n_evals = 10;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

}  // namespace

TEST_CASE("summary separates sublinear from linear regret growth") {
    const Summary s = summarize_results(synthetic_rows(64, 5));
    REQUIRE(s.groups.size() == 2);
    const GroupSummary& linear = s.groups[0];
    const GroupSummary& sqrt_g = s.groups[1];
    CHECK(linear.solver == "linear");
    CHECK_FALSE(linear.sublinearity.sublinear_consistent);
    CHECK(sqrt_g.sublinearity.sublinear_consistent);
    CHECK(linear.median_final_regret > sqrt_g.median_final_regret);
    // median over seeds 0..4 of R_T + 0.01*seed is the seed-2 value
    CHECK(linear.median_final_regret == doctest::Approx(64.02).epsilon(1e-12));
    CHECK(sqrt_g.median_final_regret == doctest::Approx(8.02).epsilon(1e-12));
    // per-iteration medians follow the common curve
    CHECK(linear.regret_curve.median[9] == doctest::Approx(10.02).epsilon(1e-9));
    CHECK(linear.median_total_solve_ms == doctest::Approx(64.0).epsilon(1e-12));
    CHECK(sqrt_g.median_total_solve_ms == doctest::Approx(128.0).epsilon(1e-12));

    const std::string table = render_summary_table(s);
    CHECK(table.find("linear") != std::string::npos);
    CHECK(table.find("sqrt") != std::string::npos);
}

TEST_CASE("summary files embed their own data in the plots") {
    const Summary s = summarize_results(synthetic_rows(32, 3));
    TempDir tmp("plots");
    write_summary_files(s, tmp.path.string());
    CHECK(fs::exists(tmp.path / "summary.csv"));
    const fs::path svg = tmp.path / "plots" / "regret_synthetic.svg";
    REQUIRE(fs::exists(svg));
    const std::string body = slurp(svg);
    CHECK(body.find("<svg") != std::string::npos);
    CHECK(body.find("series") != std::string::npos);
    // the embedded series data reproduces the summary's final median exactly
    CHECK(body.find(format_float17(s.groups[0].regret_curve.median.back())) !=
          std::string::npos);
    CHECK(fs::exists(tmp.path / "plots" / "solve_time.svg"));

    const std::string summary_csv = slurp(tmp.path / "summary.csv");
    CHECK(summary_csv.find("median_RT") != std::string::npos);
    CHECK(summary_csv.find("sqrt") != std::string::npos);
}

TEST_CASE("quantile helpers") {
    std::vector<double> v{4.0, 1.0, 3.0, 2.0};
    CHECK(median_of(v) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(quantile_of(v, 0.0) == 1.0);
    CHECK(quantile_of(v, 1.0) == 4.0);
    CHECK(quantile_of(v, 0.25) == doctest::Approx(1.75).epsilon(1e-14));
    CHECK_THROWS(median_of({}));
}
