#include "gridbo/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace gridbo {

namespace fs = std::filesystem;

namespace {

// Okabe-Ito palette; distinguishable in print and for common color blindness.
constexpr const char* kPalette[] = {"#0072B2", "#D55E00", "#009E73", "#CC79A7",
                                    "#E69F00", "#56B4E9", "#F0E442", "#000000"};
constexpr int kPaletteSize = 8;

struct SeedSeries {
    std::vector<int> t;
    std::vector<double> R;
    std::vector<double> r;
    double total_solve_ms = 0.0;
};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Maps data coordinates into a pixel viewport (y axis flipped).
struct Frame {
    double x0, x1, y0, y1;          // data range
    double px0, px1, py0, py1;      // pixel range (py0 = bottom)

    double X(double x) const {
        return px0 + (x - x0) / (x1 - x0 + 1e-300) * (px1 - px0);
    }
    double Y(double y) const {
        return py0 - (y - y0) / (y1 - y0 + 1e-300) * (py0 - py1);
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void axes(std::ostringstream& svg, const Frame& f, const std::string& x_label,
          const std::string& y_label) {
    svg << "<line x1='" << num(f.px0) << "' y1='" << num(f.py0) << "' x2='"
        << num(f.px1) << "' y2='" << num(f.py0)
        << "' stroke='#333' stroke-width='1'/>\n";
    svg << "<line x1='" << num(f.px0) << "' y1='" << num(f.py0) << "' x2='"
        << num(f.px0) << "' y2='" << num(f.py1)
        << "' stroke='#333' stroke-width='1'/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        svg << "<text x='" << num(f.X(xv)) << "' y='" << num(f.py0 + 16)
            << "' font-size='10' text-anchor='middle'>" << num(xv) << "</text>\n";
        svg << "<text x='" << num(f.px0 - 6) << "' y='" << num(f.Y(yv) + 3)
            << "' font-size='10' text-anchor='end'>" << num(yv) << "</text>\n";
    }
    svg << "<text x='" << num((f.px0 + f.px1) / 2) << "' y='" << num(f.py0 + 32)
        << "' font-size='11' text-anchor='middle'>" << esc(x_label) << "</text>\n";
    svg << "<text x='14' y='" << num((f.py0 + f.py1) / 2)
        << "' font-size='11' text-anchor='middle' transform='rotate(-90 14 "
        << num((f.py0 + f.py1) / 2) << ")'>" << esc(y_label) << "</text>\n";
}

}  // namespace

double quantile_of(std::vector<double> v, double q) {
    if (v.empty()) throw std::invalid_argument("quantile of empty set");
    std::sort(v.begin(), v.end());
    const double pos = q * (static_cast<double>(v.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double w = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - w) + v[hi] * w;
}

double median_of(std::vector<double> v) { return quantile_of(std::move(v), 0.5); }

Summary summarize_results(const std::vector<ResultRow>& rows) {
    // group key -> seed -> series, preserving first-appearance order of groups
    struct Key {
        std::string function, algorithm, solver;
        bool operator<(const Key& o) const {
            return std::tie(function, algorithm, solver) <
                   std::tie(o.function, o.algorithm, o.solver);
        }
    };
    std::map<Key, std::map<std::uint64_t, SeedSeries>> groups;
    std::vector<Key> order;
    for (const ResultRow& row : rows) {
        const Key key{row.function, row.algorithm, row.solver};
        if (groups.find(key) == groups.end()) order.push_back(key);
        SeedSeries& s = groups[key][row.seed];
        s.t.push_back(row.t);
        s.R.push_back(row.R);
        s.r.push_back(row.r);
        s.total_solve_ms += row.solve_ms;
    }

    Summary summary;
    for (const Key& key : order) {
        const auto& by_seed = groups[key];
        GroupSummary g;
        g.function = key.function;
        g.algorithm = key.algorithm;
        g.solver = key.solver;
        g.n_seeds = static_cast<int>(by_seed.size());

        // common horizon across seeds
        int horizon = std::numeric_limits<int>::max();
        for (const auto& [seed, s] : by_seed) {
            int tmax = 0;
            for (int t : s.t) tmax = std::max(tmax, t);
            horizon = std::min(horizon, tmax);
        }

        std::map<int, std::vector<double>> R_at;
        std::vector<double> finals, totals, simples;
        for (const auto& [seed, s] : by_seed) {
            double simple = std::numeric_limits<double>::infinity();
            double final_R = 0.0;
            for (std::size_t i = 0; i < s.t.size(); ++i) {
                if (s.t[i] <= horizon) R_at[s.t[i]].push_back(s.R[i]);
                simple = std::min(simple, s.r[i]);
                if (s.t[i] == horizon) final_R = s.R[i];
            }
            finals.push_back(final_R);
            totals.push_back(s.total_solve_ms);
            simples.push_back(simple);
        }

        for (const auto& [t, values] : R_at) {
            if (static_cast<int>(values.size()) != g.n_seeds) continue;
            g.regret_curve.t.push_back(t);
            g.regret_curve.median.push_back(median_of(values));
            g.regret_curve.q25.push_back(quantile_of(values, 0.25));
            g.regret_curve.q75.push_back(quantile_of(values, 0.75));
        }

        g.median_final_regret = median_of(finals);
        g.q25_final_regret = quantile_of(finals, 0.25);
        g.q75_final_regret = quantile_of(finals, 0.75);
        g.median_total_solve_ms = median_of(totals);
        g.median_simple_regret = median_of(simples);
        if (g.regret_curve.median.size() >= 10) {
            g.sublinearity = sublinearity_diagnostic(g.regret_curve.median);
        }
        summary.groups.push_back(std::move(g));
    }
    return summary;
}

std::string render_summary_table(const Summary& summary) {
    std::ostringstream out;
    out << "function,algorithm,solver,n_seeds,median_RT,q25_RT,q75_RT,"
           "median_total_solve_ms,median_simple_regret,sublinear_flag,"
           "loglog_slope\n";
    for (const GroupSummary& g : summary.groups) {
        out << g.function << ',' << g.algorithm << ',' << g.solver << ','
            << g.n_seeds << ',' << format_float17(g.median_final_regret) << ','
            << format_float17(g.q25_final_regret) << ','
            << format_float17(g.q75_final_regret) << ','
            << format_float17(g.median_total_solve_ms) << ','
            << format_float17(g.median_simple_regret) << ','
            << (g.sublinearity.sublinear_consistent ? "true" : "false") << ','
            << format_float17(g.sublinearity.loglog_slope) << '\n';
    }
    return out.str();
}

namespace {

void write_regret_svg(const fs::path& path, const std::string& function,
                      const std::vector<const GroupSummary*>& groups) {
    double y_max = 0.0;
    int t_max = 1;
    for (const GroupSummary* g : groups) {
        for (std::size_t i = 0; i < g->regret_curve.t.size(); ++i) {
            t_max = std::max(t_max, g->regret_curve.t[i]);
            y_max = std::max(y_max, g->regret_curve.q75[i]);
        }
    }
    if (y_max <= 0.0) y_max = 1.0;

    const Frame f{0, static_cast<double>(t_max), 0, y_max * 1.05,
                  56, 560, 360, 20};
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='720' height='400'>\n";
    svg << "<!-- cumulative-regret summary for " << esc(function)
        << "; series data below are the plotted numbers -->\n";
    for (const GroupSummary* g : groups) {
        svg << "<!-- series " << esc(g->algorithm) << "/" << esc(g->solver)
            << " t,median,q25,q75\n";
        for (std::size_t i = 0; i < g->regret_curve.t.size(); ++i) {
            svg << g->regret_curve.t[i] << ','
                << format_float17(g->regret_curve.median[i]) << ','
                << format_float17(g->regret_curve.q25[i]) << ','
                << format_float17(g->regret_curve.q75[i]) << "\n";
        }
        svg << "-->\n";
    }
    axes(svg, f, "iteration t", "cumulative regret R_t");

    int ci = 0;
    for (const GroupSummary* g : groups) {
        const char* color = kPalette[ci % kPaletteSize];
        const CurveSummary& c = g->regret_curve;
        if (!c.t.empty()) {
            // IQR band: forward along q75, back along q25
            svg << "<polygon fill='" << color << "' opacity='0.15' points='";
            for (std::size_t i = 0; i < c.t.size(); ++i) {
                svg << num(f.X(c.t[i])) << ',' << num(f.Y(c.q75[i])) << ' ';
            }
            for (std::size_t i = c.t.size(); i-- > 0;) {
                svg << num(f.X(c.t[i])) << ',' << num(f.Y(c.q25[i])) << ' ';
            }
            svg << "'/>\n";
            svg << "<polyline fill='none' stroke='" << color
                << "' stroke-width='1.6' points='";
            for (std::size_t i = 0; i < c.t.size(); ++i) {
                svg << num(f.X(c.t[i])) << ',' << num(f.Y(c.median[i])) << ' ';
            }
            svg << "'/>\n";
        }
        const double ly = 30 + 16.0 * ci;
        svg << "<line x1='580' y1='" << num(ly) << "' x2='604' y2='" << num(ly)
            << "' stroke='" << color << "' stroke-width='2'/>\n";
        svg << "<text x='610' y='" << num(ly + 4) << "' font-size='10'>"
            << esc(g->solver) << "</text>\n";
        ++ci;
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << svg.str();
}

void write_solve_time_svg(const fs::path& path, const Summary& summary) {
    double y_max = 0.0;
    for (const GroupSummary& g : summary.groups) {
        y_max = std::max(y_max, g.median_total_solve_ms);
    }
    if (y_max <= 0.0) y_max = 1.0;

    const int n = static_cast<int>(summary.groups.size());
    const double width = std::max(480.0, 60.0 + 46.0 * n);
    const Frame f{0, static_cast<double>(n), 0, y_max * 1.1, 56, width - 20, 330, 20};

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(width)
        << "' height='420'>\n";
    svg << "<!-- median total acquisition-solve time (ms) per group\n";
    for (const GroupSummary& g : summary.groups) {
        svg << esc(g.function) << '/' << esc(g.algorithm) << '/' << esc(g.solver)
            << ',' << format_float17(g.median_total_solve_ms) << "\n";
    }
    svg << "-->\n";
    axes(svg, f, "", "total solve time [ms]");

    std::map<std::string, int> solver_color;
    for (int i = 0; i < n; ++i) {
        const GroupSummary& g = summary.groups[i];
        if (solver_color.find(g.solver) == solver_color.end()) {
            const int c = static_cast<int>(solver_color.size());
            solver_color[g.solver] = c;
        }
        const char* color = kPalette[solver_color[g.solver] % kPaletteSize];
        const double x_left = f.X(i + 0.15);
        const double x_right = f.X(i + 0.85);
        const double y_top = f.Y(g.median_total_solve_ms);
        svg << "<rect x='" << num(x_left) << "' y='" << num(y_top) << "' width='"
            << num(x_right - x_left) << "' height='" << num(f.py0 - y_top)
            << "' fill='" << color << "'/>\n";
        svg << "<text x='" << num(f.X(i + 0.5)) << "' y='" << num(f.py0 + 12)
            << "' font-size='8' text-anchor='middle'>" << esc(g.function)
            << "</text>\n";
        svg << "<text x='" << num(f.X(i + 0.5)) << "' y='" << num(f.py0 + 22)
            << "' font-size='8' text-anchor='middle'>" << esc(g.solver)
            << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << svg.str();
}

}  // namespace

void write_summary_files(const Summary& summary, const std::string& out_dir) {
    const fs::path root(out_dir);
    const fs::path plots = root / "plots";
    fs::create_directories(plots);

    {
        std::ofstream out(root / "summary.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write summary.csv in " + out_dir);
        out << render_summary_table(summary);
    }

    std::map<std::string, std::vector<const GroupSummary*>> by_function;
    std::vector<std::string> function_order;
    for (const GroupSummary& g : summary.groups) {
        if (by_function.find(g.function) == by_function.end()) {
            function_order.push_back(g.function);
        }
        by_function[g.function].push_back(&g);
    }
    for (const std::string& fn : function_order) {
        std::string safe = fn;
        for (char& c : safe) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-') c = '_';
        }
        write_regret_svg(plots / ("regret_" + safe + ".svg"), fn, by_function[fn]);
    }
    write_solve_time_svg(plots / "solve_time.svg", summary);
}

Summary summarize_dir(const std::string& results_dir) {
    const fs::path results = fs::path(results_dir) / "results.csv";
    if (!fs::exists(results)) {
        throw std::invalid_argument("no results.csv in " + results_dir);
    }
    const std::vector<ResultRow> rows = read_results_csv(results.string());
    Summary summary = summarize_results(rows);
    write_summary_files(summary, results_dir);
    return summary;
}

}  // namespace gridbo
