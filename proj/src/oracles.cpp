#include "spectral/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "spectral/quadrature.hpp"

namespace spz {

namespace {

// bisection on a bracketing interval to a relative width tol
template <class F>
double bisect(F&& f, double a, double b, double fa, double tol) {
    for (int it = 0; it < 200 && (b - a) > tol * std::max(1.0, std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// sign changes of f on a grid, refined by bisection; the grid is evaluated in parallel
template <class F>
std::vector<double> scan_roots(F&& f, double lo, double hi, double step, double tol) {
    const int n = std::max(1, int(std::ceil((hi - lo) / step)));
    std::vector<double> x(n + 1), fx(n + 1);
    for (int i = 0; i <= n; ++i) x[i] = std::min(hi, lo + i * step);
#pragma omp parallel for schedule(static)
    for (int i = 0; i <= n; ++i) fx[i] = f(x[i]);
    std::vector<int> brackets;
    for (int i = 0; i < n; ++i) {
        if (fx[i] == 0.0 && i > 0) continue;
        if (fx[i + 1] == 0.0 || (fx[i] < 0) != (fx[i + 1] < 0)) brackets.push_back(i);
    }
    std::vector<double> roots(brackets.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (int k = 0; k < int(brackets.size()); ++k) {
        const int i = brackets[k];
        if (fx[i + 1] == 0.0)
            roots[k] = x[i + 1];
        else
            roots[k] = bisect(f, x[i], x[i + 1], fx[i], tol);
    }
    return roots;
}

double lower_bc_shift(BC bc) {
    switch (bc) {
        case BC::DN:
        case BC::ND: return -0.5;
        case BC::PP: return 0.5;
        default: return 0.0;
    }
}

// sum_{n > n0} f(n): direct part then Euler-Maclaurin from n0 + K + 1 with a mapped integral
template <class F, class DF>
double tail_sum(F&& f, DF&& df, double n0, int K = 2000) {
    double direct = 0.0;
    for (int k = K; k >= 1; --k) direct += f(n0 + k);
    const double a = n0 + K + 1;
    const double I = integrate([&](double u) { return f(a / u) * a / (u * u); }, 1e-300, 1.0, 1e-16, 1e-13).value;
    return direct + I + 0.5 * f(a) - df(a) / 12.0;
}

}  // namespace

std::string method_name(OracleMethod m) {
    switch (m) {
        case OracleMethod::roots: return "roots";
        case OracleMethod::galerkin: return "galerkin";
        case OracleMethod::collocation: return "collocation";
        case OracleMethod::bessel_roots: return "bessel_roots";
    }
    return "roots";
}

double WeylData::eigenvalue(double n) const {
    if (dim == 1) {
        const double k = (n + shift) * kPi / area;
        return k * k;
    }
    const double x = 4.0 * kPi * n / area;
    return x + perimeter / area * std::sqrt(x);
}

double WeylData::count(double lambda) const {
    if (lambda <= 0.0) return 0.0;
    if (dim == 1) return area * std::sqrt(lambda) / kPi - shift;
    return (area * lambda - perimeter * std::sqrt(lambda)) / (4.0 * kPi);
}

std::string SpectrumOracle::to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17);
    if (weyl)
        os << "# weyl dim=" << weyl->dim << " area=" << weyl->area << " perimeter=" << weyl->perimeter
           << " shift=" << weyl->shift << "\n";
    os << "index,eigenvalue,method\n";
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
        os << i + 1 << "," << eigenvalues[i] << "," << method_name(method) << "\n";
    return os.str();
}

SpectrumOracle SpectrumOracle::from_csv(const std::string& text) {
    SpectrumOracle o;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# weyl", 0) == 0) {
            WeylData w;
            if (std::sscanf(line.c_str(), "# weyl dim=%d area=%lf perimeter=%lf shift=%lf", &w.dim, &w.area,
                            &w.perimeter, &w.shift) != 4)
                throw OracleError("malformed weyl line in spectrum csv");
            o.weyl = w;
            continue;
        }
        if (!header) {
            if (line != "index,eigenvalue,method") throw OracleError("spectrum csv needs the header index,eigenvalue,method");
            header = true;
            continue;
        }
        std::istringstream ls(line);
        std::string idx, val, meth;
        if (!std::getline(ls, idx, ',') || !std::getline(ls, val, ',') || !std::getline(ls, meth))
            throw OracleError("malformed spectrum csv row: " + line);
        bool known = false;
        for (OracleMethod m : {OracleMethod::roots, OracleMethod::galerkin, OracleMethod::collocation,
                               OracleMethod::bessel_roots})
            if (meth == method_name(m)) {
                o.method = m;
                known = true;
            }
        if (!known) throw OracleError("unknown oracle method in csv: " + meth);
        o.eigenvalues.push_back(std::stod(val));
    }
    if (!std::is_sorted(o.eigenvalues.begin(), o.eigenvalues.end()))
        throw OracleError("spectrum csv eigenvalues are not sorted");
    return o;
}

WeylData weyl_data(const DensitySpec& d, const BasisSpec& b) {
    WeylData w;
    w.dim = b.dim;
    if (b.dim == 1) {
        w.area = integrate([&](double x) { return std::sqrt(d(x)); }, -b.L, b.L, 1e-14, 1e-14, d.breakpoints()).value;
        w.shift = lower_bc_shift(b.bc);
        return w;
    }
    w.area = mass(d);
    auto edge_y = [&](double x) {
        return integrate([&](double y) { return std::sqrt(d(x, y)); }, -b.Ly, b.Ly, 1e-14, 1e-13).value;
    };
    auto edge_x = [&](double y) {
        return integrate([&](double x) { return std::sqrt(d(x, y)); }, -b.L, b.L, 1e-14, 1e-13).value;
    };
    w.perimeter = edge_y(-b.L) + edge_y(b.L);
    if (b.bc != BC::DP) w.perimeter += edge_x(-b.Ly) + edge_x(b.Ly);
    return w;
}

SpectrumOracle piecewise_roots(const PiecewiseParams& p, int count) {
    p.validate();
    const double a = p.alpha(), be = p.beta(), dv = p.delta_upsilon();
    if (!(std::abs(dv) < 1.0)) throw OracleError("piecewise_roots needs |dv| < 1");
    if (count < 1) throw OracleError("piecewise_roots needs count >= 1");
    auto f = [=](double w) { return std::sin(a * w) + dv * std::sin(be * w); };
    const double step = kPi / (4.0 * a);
    std::vector<double> w = scan_roots(f, 0.5 * step, (count + 2) * kPi / a, step, 1e-13);
    if (int(w.size()) < count) throw OracleError("piecewise_roots: missed roots in the scan");
    w.resize(count);
    SpectrumOracle o;
    o.method = OracleMethod::roots;
    o.eigenvalues.resize(count);
    for (int n = 0; n < count; ++n) {
        if (std::abs(w[n] - (n + 1) * kPi / a) >= kPi / a)
            throw OracleError("piecewise_roots: root " + std::to_string(n + 1) + " outside its Weyl band");
        o.eigenvalues[n] = w[n] * w[n];
    }
    o.weyl = WeylData{1, a, 0.0, 0.0};
    return o;
}

SpectrumOracle galerkin_spectrum(const MatrixElementTable& table, int count, const std::optional<WeylData>& weyl) {
    const int N = table.N();
    if (count < 1 || N < 4 * count) throw OracleError("galerkin_spectrum needs a table with N >= 4 count");
    const int sizes[3] = {N, N / 2, N / 4};
    std::vector<std::vector<double>> ev(3);
    bool failed = false;
#pragma omp parallel for schedule(static) reduction(|| : failed)
    for (int k = 0; k < 3; ++k) {
        const int n = sizes[k];
        Eigen::MatrixXd M(n, n);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            A(i, i) = table.eps(i);
            for (int j = 0; j < n; ++j) M(i, j) = table(i, j);
        }
        if (Eigen::LLT<Eigen::MatrixXd>(M).info() != Eigen::Success) {
            failed = true;
            continue;
        }
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            failed = true;
            continue;
        }
        ev[k].assign(es.eigenvalues().data(), es.eigenvalues().data() + count);
    }
    if (failed) throw OracleError("galerkin_spectrum: density matrix is not positive definite");
    SpectrumOracle o;
    o.method = OracleMethod::galerkin;
    o.weyl = weyl;
    o.raw = ev[0];
    o.eigenvalues.resize(count);
    for (int i = 0; i < count; ++i) {
        const double d1 = ev[1][i] - ev[0][i], d2 = ev[2][i] - ev[1][i];
        double e = ev[0][i];
        // geometric error model with estimated ratio, skipped at rounding level or for erratic differences
        if (std::abs(d1) > 1e-13 * std::abs(e) && d1 * d2 > 0.0) {
            const double q = d2 / d1;
            if (q >= 1.5) e -= d1 / (q - 1.0);
        }
        o.eigenvalues[i] = e;
    }
    std::sort(o.eigenvalues.begin(), o.eigenvalues.end());
    return o;
}

std::vector<double> annulus_cross_roots(double r, int m, double kmax) {
    if (!(r > 0.0 && r < 1.0)) throw OracleError("annulus radius ratio must lie in (0, 1)");
    const double nu = m;
    // J_m(k) Y_m(kr) - Y_m(k) J_m(kr), divided by max(1, |Y_m(kr)|) to stay finite
    auto f = [=](double k) {
        double jk, yk, jr, yr;
        bessel_jy(nu, k, jk, yk);
        bessel_jy(nu, k * r, jr, yr);
        if (!std::isfinite(yr)) return -jk;
        const double sc = std::max(1.0, std::abs(yr));
        return jk * (yr / sc) - yk * (jr / sc);
    };
    const double lo = std::max(double(m), 1e-3);
    if (kmax <= lo) return {};
    std::vector<double> roots = scan_roots(f, lo, kmax, kPi / 8.0, 1e-13);
    // WKB phase count of radial nodes below kmax
    const double K = kmax;
    auto F = [&](double rho) {
        const double u = std::sqrt(std::max(0.0, K * K * rho * rho - nu * nu));
        return u - nu * std::acos(std::min(1.0, nu / (K * rho)));
    };
    const double phase = F(1.0) - F(std::max(r, nu / K));
    if (std::abs(double(roots.size()) - phase / ((1.0) * kPi)) > 1.5)
        throw OracleError("annulus_cross_roots: root count for m = " + std::to_string(m) +
                          " inconsistent with the WKB phase");
    return roots;
}

SpectrumOracle annulus_bessel_roots(double r, int m_max, int n_max) {
    if (m_max < 0 || n_max < 1) throw OracleError("annulus_bessel_roots needs m_max >= 0, n_max >= 1");
    std::vector<std::vector<double>> per(m_max + 1);
#pragma omp parallel for schedule(dynamic, 1)
    for (int m = 0; m <= m_max; ++m) {
        const double kb = std::sqrt(double(m) * m / (r * r) + std::pow(n_max * kPi / (1.0 - r), 2)) + 1.0;
        std::vector<double> k = annulus_cross_roots(r, m, kb);
        if (int(k.size()) > n_max) k.resize(n_max);
        per[m] = std::move(k);
    }
    double horizon = m_max + 1.0;
    for (const auto& k : per) {
        if (int(k.size()) < n_max) throw OracleError("annulus_bessel_roots: too few roots for an order");
        horizon = std::min(horizon, k.back());
    }
    SpectrumOracle o;
    o.method = OracleMethod::bessel_roots;
    for (int m = 0; m <= m_max; ++m)
        for (double k : per[m])
            if (k <= horizon)
                for (int c = 0; c < (m == 0 ? 1 : 2); ++c) o.eigenvalues.push_back(k * k);
    std::sort(o.eigenvalues.begin(), o.eigenvalues.end());
    o.weyl = WeylData{2, kPi * (1.0 - r * r), 2.0 * kPi * (1.0 + r), 0.0};
    return o;
}

SpectrumOracle annulus_bessel_spectrum(double r, int count) {
    if (count < 1) throw OracleError("annulus_bessel_spectrum needs count >= 1");
    const WeylData w{2, kPi * (1.0 - r * r), 2.0 * kPi * (1.0 + r), 0.0};
    double lambda = w.eigenvalue(1.05 * count + 50.0);
    for (int attempt = 0; attempt < 8; ++attempt, lambda *= 1.2) {
        const double kmax = std::sqrt(lambda);
        const int m_max = int(std::floor(kmax));
        std::vector<std::vector<double>> per(m_max + 1);
#pragma omp parallel for schedule(dynamic, 1)
        for (int m = 0; m <= m_max; ++m) per[m] = annulus_cross_roots(r, m, kmax);
        SpectrumOracle o;
        o.method = OracleMethod::bessel_roots;
        o.weyl = w;
        for (int m = 0; m <= m_max; ++m)
            for (double k : per[m])
                for (int c = 0; c < (m == 0 ? 1 : 2); ++c) o.eigenvalues.push_back(k * k);
        std::sort(o.eigenvalues.begin(), o.eigenvalues.end());
        if (o.count() >= count) return o;
    }
    throw OracleError("annulus_bessel_spectrum: could not reach the requested count");
}

SpectrumOracle collocation_2d(const DensitySpec& d, int grid_n, int count) {
    if (d.dim != 2) throw OracleError("collocation_2d needs a 2D density");
    if (grid_n < 4) throw OracleError("collocation_2d needs grid_n >= 4");
    if (count < 1 || count > (grid_n / 3) * (grid_n / 3))
        throw OracleError("collocation_2d: count exceeds the trusted horizon of the grid");
    const int n = grid_n, n2 = n * n;
    auto kinetic = [n](double L) {
        Eigen::MatrixXd S(n, n);
        const double c = std::sqrt(2.0 / (n + 1));
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) S(j, k) = c * std::sin(kPi * (j + 1) * (k + 1) / (n + 1));
        Eigen::VectorXd lam(n);
        for (int k = 0; k < n; ++k) lam(k) = std::pow((k + 1) * kPi / (2.0 * L), 2);
        return Eigen::MatrixXd(S * lam.asDiagonal() * S);
    };
    const Eigen::MatrixXd Kx = kinetic(d.L), Ky = kinetic(d.Ly);
    Eigen::VectorXd w(n2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = -d.L + 2.0 * d.L * (i + 1) / (n + 1);
            const double y = -d.Ly + 2.0 * d.Ly * (j + 1) / (n + 1);
            const double v = d(x, y);
            if (!(v > 0.0)) throw OracleError("collocation_2d: density must be positive on the grid");
            w(i * n + j) = 1.0 / std::sqrt(v);
        }
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n2, n2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int a = i * n + j;
            for (int k = 0; k < n; ++k) {
                C(a, k * n + j) += Kx(i, k);
                C(a, i * n + k) += Ky(j, k);
            }
        }
    C = w.asDiagonal() * C * w.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw OracleError("collocation_2d: eigensolver failed");
    SpectrumOracle o;
    o.method = OracleMethod::collocation;
    o.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + count);
    o.weyl = weyl_data(d, basis_rectangle(d.L, d.Ly));
    return o;
}

ZetaValue zeta_weyl(double s, const WeylData& w) {
    ZetaValue z;
    z.s = s;
    z.method = "weyl";
    if (!(s > 0.5 * w.dim)) throw DivergenceError("Weyl sum needs s > d/2");
    if (w.dim == 1) {
        z.value = std::pow(w.area / kPi, 2 * s) * hurwitz_zeta(2 * s, 1.0 + w.shift).value.real();
        return z;
    }
    const double c = 4.0 * kPi / w.area, g = w.perimeter / w.area * std::sqrt(c);
    auto f = [=](double n) { return std::pow(c * n + g * std::sqrt(n), -s); };
    auto df = [=](double n) { return -s * std::pow(c * n + g * std::sqrt(n), -s - 1) * (c + 0.5 * g / std::sqrt(n)); };
    z.value = tail_sum(f, df, 0.0);
    return z;
}

ZetaValue zeta_from_spectrum(double s, const SpectrumOracle& o, int n_exact) {
    if (!o.weyl) throw OracleError("zeta_from_spectrum needs Weyl data for the tail");
    const WeylData& w = *o.weyl;
    if (!(s > 0.5 * w.dim)) throw DivergenceError("zeta_from_spectrum needs s > d/2");
    if (n_exact < 1 || n_exact > o.count()) throw OracleError("zeta_from_spectrum: oracle has too few modes");
    double exact = 0.0;
    for (int i = n_exact - 1; i >= 0; --i) exact += std::pow(o.eigenvalues[i], -s);
    double tail;
    if (w.dim == 1) {
        tail = std::pow(w.area / kPi, 2 * s) * hurwitz_zeta(2 * s, n_exact + 1.0 + w.shift).value.real();
    } else {
        const double c = 4.0 * kPi / w.area, g = w.perimeter / w.area * std::sqrt(c);
        auto f = [=](double n) { return std::pow(c * n + g * std::sqrt(n), -s); };
        auto df = [=](double n) {
            return -s * std::pow(c * n + g * std::sqrt(n), -s - 1) * (c + 0.5 * g / std::sqrt(n));
        };
        tail = tail_sum(f, df, double(n_exact));
    }
    ZetaValue z;
    z.s = s;
    z.value = exact + tail;
    const double last = o.eigenvalues[n_exact - 1];
    z.trunc_error = s * std::abs(last - w.eigenvalue(n_exact)) / last * std::abs(tail);
    z.method = "spectrum(" + method_name(o.method) + ")+weyl-tail";
    if (std::abs(tail) > 0.1 * std::abs(exact + tail)) z.method += ",tail-dominant";
    return z;
}

}  // namespace spz
