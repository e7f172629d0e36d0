#include "gridbo/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gridbo/sobol.hpp"

namespace gridbo {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

Eigen::VectorXd vec(std::initializer_list<double> vals) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
    Eigen::Index i = 0;
    for (double x : vals) v[i++] = x;
    return v;
}

// Hartmann family coefficients (6-column A and P; Hartmann3 uses its own
// 3-column tables, Hartmann4 the first four columns of the 6-D tables).
const Eigen::Vector4d kHartAlpha(1.0, 1.2, 3.0, 3.2);

Eigen::Matrix<double, 4, 6> hart_a6() {
    Eigen::Matrix<double, 4, 6> A;
    A << 10, 3, 17, 3.5, 1.7, 8,
         0.05, 10, 17, 0.1, 8, 14,
         3, 3.5, 1.7, 10, 17, 8,
         17, 8, 0.05, 10, 0.1, 14;
    return A;
}

Eigen::Matrix<double, 4, 6> hart_p6() {
    Eigen::Matrix<double, 4, 6> P;
    P << 1312, 1696, 5569, 124, 8283, 5886,
         2329, 4135, 8307, 3736, 1004, 9991,
         2348, 1451, 3522, 2883, 3047, 6650,
         4047, 8828, 8732, 5743, 1091, 381;
    return P * 1e-4;
}

double hartmann_sum(const Eigen::VectorXd& x, const Eigen::MatrixXd& A,
                    const Eigen::MatrixXd& P) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (int j = 0; j < x.size(); ++j) {
            const double diff = x[j] - P(i, j);
            inner += A(i, j) * diff * diff;
        }
        sum += kHartAlpha[i] * std::exp(-inner);
    }
    return sum;
}

// local simplex polish used when locating a constructed objective's maximum
Eigen::VectorXd polish_max(const std::function<double(const Eigen::VectorXd&)>& f,
                           const BoxDomain& domain, Eigen::VectorXd x0) {
    const int d = domain.dim();
    std::vector<Eigen::VectorXd> verts(d + 1, x0);
    std::vector<double> fv(d + 1);
    for (int j = 0; j < d; ++j) {
        Eigen::VectorXd v = x0;
        const double step = 0.02 * domain.side(j);
        v[j] = (v[j] + step <= domain.hi[j]) ? v[j] + step : v[j] - step;
        verts[j + 1] = v;
    }
    for (int j = 0; j <= d; ++j) fv[j] = f(verts[j]);
    for (int iter = 0; iter < 600; ++iter) {
        int worst = 0, top = 0;
        for (int j = 1; j <= d; ++j) {
            if (fv[j] < fv[worst]) worst = j;
            if (fv[j] > fv[top]) top = j;
        }
        if (fv[top] - fv[worst] < 1e-13) break;
        int second_worst = (worst == 0) ? 1 : 0;
        for (int j = 0; j <= d; ++j) {
            if (j != worst && fv[j] < fv[second_worst]) second_worst = j;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (int j = 0; j <= d; ++j) {
            if (j != worst) centroid += verts[j];
        }
        centroid /= d;
        Eigen::VectorXd refl = domain.clip(centroid + (centroid - verts[worst]));
        double fr = f(refl);
        if (fr > fv[top]) {
            Eigen::VectorXd ex = domain.clip(centroid + 2.0 * (centroid - verts[worst]));
            double fe = f(ex);
            if (fe > fr) { verts[worst] = ex; fv[worst] = fe; }
            else { verts[worst] = refl; fv[worst] = fr; }
        } else if (fr > fv[second_worst]) {
            verts[worst] = refl;
            fv[worst] = fr;
        } else {
            Eigen::VectorXd co = domain.clip(centroid + 0.5 * (verts[worst] - centroid));
            double fc = f(co);
            if (fc > fv[worst]) { verts[worst] = co; fv[worst] = fc; }
            else {
                for (int j = 0; j <= d; ++j) {
                    if (j == top) continue;
                    verts[j] = domain.clip(verts[top] + 0.5 * (verts[j] - verts[top]));
                    fv[j] = f(verts[j]);
                }
            }
        }
    }
    int top = 0;
    for (int j = 1; j <= d; ++j) {
        if (fv[j] > fv[top]) top = j;
    }
    return verts[top];
}

}  // namespace

double ObjectiveSpec::evaluate(const Eigen::VectorXd& x) const {
    if (!domain.contains(x, 1e-9)) {
        throw std::invalid_argument("objective '" + name + "': point outside domain");
    }
    return fn(x);
}

double observe(const ObjectiveSpec& obj, const NoiseModel& noise,
               const Eigen::VectorXd& x, RngStream& rng) {
    const double value = obj.evaluate(x);
    if (noise.kind == NoiseModel::Kind::None || noise.noise_scale == 0.0) return value;
    return value + noise.noise_scale * rng.normal();
}

ObjectiveSpec branin() {
    ObjectiveSpec o;
    o.name = "branin";
    o.domain = {vec({-5.0, 0.0}), vec({10.0, 15.0})};
    o.f_star = -0.39788735772973816;
    o.x_star = {vec({-kPi, 12.275}), vec({kPi, 2.275}), vec({9.42477796076938, 2.475})};
    o.abs_bound = 310.0;
    o.fn = [](const Eigen::VectorXd& x) {
        const double a = 1.0, b = 5.1 / (4.0 * kPi * kPi), c = 5.0 / kPi;
        const double r = 6.0, s = 10.0, t = 1.0 / (8.0 * kPi);
        const double term = x[1] - b * x[0] * x[0] + c * x[0] - r;
        return -(a * term * term + s * (1.0 - t) * std::cos(x[0]) + s);
    };
    return o;
}

ObjectiveSpec rastrigin3() {
    ObjectiveSpec o;
    o.name = "rastrigin3";
    o.domain = BoxDomain::cube(3, -5.12, 5.12);
    o.f_star = 0.0;
    o.x_star = {Eigen::VectorXd::Zero(3)};
    o.abs_bound = 140.0;
    o.fn = [](const Eigen::VectorXd& x) {
        double sum = 10.0 * x.size();
        for (double xi : x) sum += xi * xi - 10.0 * std::cos(2.0 * kPi * xi);
        return -sum;
    };
    return o;
}

ObjectiveSpec hartmann3() {
    ObjectiveSpec o;
    o.name = "hartmann3";
    o.domain = BoxDomain::cube(3, 0.0, 1.0);
    o.f_star = 3.862779787332663;
    o.x_star = {vec({0.11458888873594106, 0.555648895234536, 0.8525469845615257})};
    o.abs_bound = 4.0;
    Eigen::Matrix<double, 4, 3> A;
    A << 3, 10, 30, 0.1, 10, 35, 3, 10, 30, 0.1, 10, 35;
    Eigen::Matrix<double, 4, 3> P;
    P << 3689, 1170, 2673, 4699, 4387, 7470, 1091, 8732, 5547, 381, 5743, 8828;
    P *= 1e-4;
    o.fn = [A, P](const Eigen::VectorXd& x) { return hartmann_sum(x, A, P); };
    return o;
}

ObjectiveSpec hartmann4() {
    ObjectiveSpec o;
    o.name = "hartmann4";
    o.domain = BoxDomain::cube(4, 0.0, 1.0);
    o.f_star = 3.1344941412223993;
    o.x_star = {vec({0.1873952697919486, 0.1941515281805913, 0.5579177818398633,
                     0.26477962618580375})};
    o.abs_bound = 3.5;
    const Eigen::MatrixXd A = hart_a6().leftCols(4);
    const Eigen::MatrixXd P = hart_p6().leftCols(4);
    o.fn = [A, P](const Eigen::VectorXd& x) {
        return -(1.1 - hartmann_sum(x, A, P)) / 0.839;
    };
    return o;
}

ObjectiveSpec levy5() {
    ObjectiveSpec o;
    o.name = "levy5";
    o.domain = BoxDomain::cube(5, -10.0, 10.0);
    o.f_star = 0.0;
    o.x_star = {Eigen::VectorXd::Ones(5)};
    o.abs_bound = 350.0;  // |f| peaks near 334.7 at the lower corner
    o.fn = [](const Eigen::VectorXd& x) {
        const Eigen::Index d = x.size();
        auto w = [&](Eigen::Index i) { return 1.0 + (x[i] - 1.0) / 4.0; };
        const double s1 = std::sin(kPi * w(0));
        double sum = s1 * s1;
        for (Eigen::Index i = 0; i < d - 1; ++i) {
            const double wi = w(i);
            const double s = std::sin(kPi * wi + 1.0);
            sum += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * s * s);
        }
        const double wd = w(d - 1);
        const double sd = std::sin(2.0 * kPi * wd);
        sum += (wd - 1.0) * (wd - 1.0) * (1.0 + sd * sd);
        return -sum;
    };
    return o;
}

ObjectiveSpec hartmann6() {
    ObjectiveSpec o;
    o.name = "hartmann6";
    o.domain = BoxDomain::cube(6, 0.0, 1.0);
    o.f_star = 3.3223680114155156;
    o.x_star = {vec({0.20168951212440756, 0.1500106894412595, 0.47687397265284137,
                     0.27533242845136924, 0.31165161632529637, 0.6573005339702802})};
    o.abs_bound = 3.4;
    const Eigen::MatrixXd A = hart_a6();
    const Eigen::MatrixXd P = hart_p6();
    o.fn = [A, P](const Eigen::VectorXd& x) { return hartmann_sum(x, A, P); };
    return o;
}

ObjectiveSpec synthetic_rkhs(const KernelSpec& kernel, int n_centers,
                             double weight_bound, const BoxDomain& domain,
                             RngStream& rng) {
    if (n_centers < 1) throw std::invalid_argument("synthetic_rkhs: n_centers >= 1");
    kernel.validate();
    const int d = domain.dim();
    Eigen::MatrixXd centers(n_centers, d);
    for (int i = 0; i < n_centers; ++i) {
        for (int j = 0; j < d; ++j) centers(i, j) = rng.uniform(domain.lo[j], domain.hi[j]);
    }
    Eigen::VectorXd w(n_centers);
    for (int i = 0; i < n_centers; ++i) w[i] = rng.normal();

    const Eigen::MatrixXd Kc = gram_matrix(kernel, centers);
    double norm = std::sqrt(std::max(0.0, w.dot(Kc * w)));
    if (norm > weight_bound) {
        w *= weight_bound / norm;
        norm = weight_bound;
    }

    ObjectiveSpec o;
    o.name = "synthetic-rkhs-" + std::to_string(d) + "d";
    o.domain = domain;
    o.abs_bound = norm;  // sup |f| <= ||f||_H
    KernelSpec k = kernel;
    o.fn = [k, centers, w](const Eigen::VectorXd& x) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < centers.rows(); ++i) {
            sum += w[i] * kernel_eval(k, x, centers.row(i).transpose());
        }
        return sum;
    };

    // locate the maximum: dense low-discrepancy probe, then simplex polish
    const int probe_n = 1 << 14;
    const Eigen::MatrixXd probes = sobol_points_in_box(probe_n, domain.lo, domain.hi);
    Eigen::VectorXd vals(probe_n);
    for (int i = 0; i < probe_n; ++i) vals[i] = o.fn(probes.row(i).transpose());
    // polish from the few best probes; the surface is smooth but multimodal
    std::vector<int> order(probe_n);
    for (int i = 0; i < probe_n; ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + 5, order.end(),
                      [&](int a, int b) { return vals[a] > vals[b]; });
    Eigen::VectorXd best_x = probes.row(order[0]).transpose();
    double best_f = vals[order[0]];
    for (int i = 0; i < 5; ++i) {
        Eigen::VectorXd cand = polish_max(o.fn, domain, probes.row(order[i]).transpose());
        const double fc = o.fn(cand);
        if (fc > best_f) {
            best_f = fc;
            best_x = cand;
        }
    }
    o.f_star = best_f;
    o.x_star = {best_x};
    return o;
}

ObjectiveSpec objective_by_name(const std::string& name) {
    if (name == "branin") return branin();
    if (name == "rastrigin3") return rastrigin3();
    if (name == "hartmann3") return hartmann3();
    if (name == "hartmann4") return hartmann4();
    if (name == "levy5") return levy5();
    if (name == "hartmann6") return hartmann6();
    if (name == "synthetic-rkhs-11d") {
        KernelSpec k = KernelSpec::squared_exponential(0.2);
        RngStream rng = substream(20240811u, 7u);
        return synthetic_rkhs(k, 30, 2.0, BoxDomain::cube(11, 0.0, 1.0), rng);
    }
    throw std::invalid_argument("unknown objective '" + name + "'");
}

}  // namespace gridbo
