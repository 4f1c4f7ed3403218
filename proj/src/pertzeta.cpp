#include "spectral/pertzeta.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "spectral/continuation.hpp"
#include "spectral/parallel.hpp"
#include "spectral/quadrature.hpp"

namespace spz {

namespace {

double rzeta(double s) { return riemann_zeta(s).value.real(); }

cplx hom_raw(const BasisSpec& b, double s) {
    const double q = kPi * kPi / (4.0 * b.L * b.L);
    if (b.dim == 1) {
        switch (b.bc) {
            case BC::DD:
            case BC::NN: return std::pow(q, -s) * rzeta(2.0 * s);
            case BC::DN:
            case BC::ND: return std::pow(q, -s) * (std::pow(4.0, s) - 1.0) * rzeta(2.0 * s);
            case BC::PP: return 2.0 * std::pow(4.0 * q, -s) * rzeta(2.0 * s);
            default: break;
        }
    }
    switch (b.bc) {
        case BC::DP: return std::pow(q, -s) * rzeta(2.0 * s) + 2.0 * kirsten_zeta_c(2.0 * b.L, kPi, s).value;
        case BC::DD2: return kirsten_zeta_c(2.0 * b.L, 2.0 * kPi, s).value;
        default: return kirsten_zeta_c(2.0 * b.L, 2.0 * b.Ly, s).value;
    }
}

// k-th nonzero mode of a 1D basis in ascending order, k >= 1
double eps_1d(const BasisSpec& b, long k) {
    const double q = kPi * kPi / (4.0 * b.L * b.L);
    switch (b.bc) {
        case BC::DN:
        case BC::ND: return q * (k - 0.5) * (k - 0.5);
        case BC::PP: {
            const double m = double((k + 1) / 2);
            return 4.0 * q * m * m;
        }
        default: return q * double(k) * double(k);
    }
}

template <class F>
double sum_rows(int n, bool parallel, F&& f) {
    if (parallel) return parallel_sum<double>(0, n, f, 16);
    return serial_sum<double>(0, n, f);
}

void require_convergent(const BasisSpec& b, double s) {
    if (!(s > 0.5 * b.dim)) throw DivergenceError("direct summation needs s > d/2; use the continuation module");
}

// first index of the last tenth of the nonzero modes
int last_decade_start(const MatrixElementTable& t) {
    const int n = t.N();
    return n - std::max(1, n / 10);
}

bool keep_pair(const MatrixElementTable& t, int i, int j, int band) {
    if (t.basis.dim != 1 || band < 0 || j - i <= band) return true;
    return std::abs(t.eps(j) - t.eps(i)) <= 1e-9 * t.eps(j);
}

double a_pow_series_ratio(double x, double a) {
    // ((1+x)^a - 1)/x
    if (std::abs(x) < 1e-4) return a * (1.0 + (a - 1.0) * x / 2.0 * (1.0 + (a - 2.0) * x / 3.0 * (1.0 + (a - 3.0) * x / 4.0)));
    return std::expm1(a * std::log1p(x)) / x;
}

}  // namespace

bool ZetaValue::imag_negligible(double tol) const {
    return std::abs(value.imag()) <= tol * std::max(1.0, std::abs(value.real()));
}

std::string ZetaValue::to_json() const {
    nlohmann::ordered_json j;
    j["s"] = s;
    j["re"] = value.real();
    j["im"] = value.imag();
    j["pole_order"] = pole_order;
    j["residue"] = residue;
    j["trunc_error"] = trunc_error;
    if (!method.empty()) j["method"] = method;
    return j.dump();
}

PertOptions pert_options_for(const DensitySpec& d) {
    PertOptions o;
    const double vol = d.dim == 1 ? 2.0 * d.L : 4.0 * d.L * d.Ly;
    o.sigma_bar = mass(d) / vol;
    return o;
}

ZetaValue homogeneous_zeta(const BasisSpec& b, double s) {
    const bool pole = std::abs(s - 0.5) < 1e-12 || (b.dim == 2 && std::abs(s - 1.0) < 1e-12);
    ZetaValue z = zeta_from_function([&b](double x) { return hom_raw(b, x); }, s, pole, "closed_form");
    return z;
}

double divided_difference(double ek, double en, double s) {
    const double x = ek / en - 1.0;
    return std::pow(en, -s) * a_pow_series_ratio(x, 1.0 - s);
}

double heat_divided_difference(double en, double ek, double t) {
    const double x = -t * (ek - en);
    const double r = std::abs(x) < 1e-10 ? 1.0 + 0.5 * x : std::expm1(x) / x;
    return -t * std::exp(-t * en) * r;
}

ZetaValue z_diag(double s, const MatrixElementTable& table, const PertOptions& opt) {
    require_convergent(table.basis, s);
    const int n = table.N();
    auto term = [&](std::int64_t i) {
        const double e = table.eps(int(i));
        return e > 0.0 ? std::pow(table(int(i), int(i)) / e, s) : 0.0;
    };
    ZetaValue z;
    z.s = s;
    z.method = "series";
    double v = sum_rows(n, opt.parallel, term);
    const int d0 = last_decade_start(table);
    double dev = 0.0;
    for (int i = d0; i < n; ++i) {
        const double e = table.eps(i);
        if (e > 0.0) dev += std::pow(table(i, i) / e, s) - std::pow(opt.sigma_bar / e, s);
    }
    z.trunc_error = std::abs(dev);
    if (opt.tail) {
        const double hom = homogeneous_zeta(table.basis, s).re();
        const double part = sum_rows(n, opt.parallel, [&](std::int64_t i) {
            const double e = table.eps(int(i));
            return e > 0.0 ? std::pow(e, -s) : 0.0;
        });
        v += std::pow(opt.sigma_bar, s) * (hom - part);
        z.method = "series+tail";
    }
    z.value = v;
    return z;
}

ZetaValue z_second_order(double s, const MatrixElementTable& table, const PertOptions& opt) {
    require_convergent(table.basis, s);
    const int n = table.N();
    auto row = [&](std::int64_t ii) {
        const int i = int(ii);
        const double ei = table.eps(i);
        if (ei <= 0.0) return 0.0;
        CompensatedSum<double> acc;
        for (int j = i + 1; j < n; ++j) {
            if (!keep_pair(table, i, j, opt.band)) continue;
            const double v = table(i, j);
            if (v == 0.0) continue;
            const double ej = table.eps(j);
            if (ej <= 0.0) continue;
            acc.add(divided_difference(ej, ei, s) * v * v);
        }
        return acc.value();
    };
    const double pref = -s * std::pow(opt.sigma_bar, s - 2.0);
    ZetaValue z;
    z.s = s;
    z.method = "series";
    z.value = pref * sum_rows(n, opt.parallel, row);
    double last = 0.0;
    for (int i = last_decade_start(table); i < n; ++i) last += row(i);
    z.trunc_error = std::abs(pref * last);
    return z;
}

ZetaValue z_perturbative(double s, const MatrixElementTable& table, const PertOptions& opt) {
    const ZetaValue a = z_diag(s, table, opt);
    const ZetaValue b = z_second_order(s, table, opt);
    ZetaValue z = a;
    z.value = a.value + b.value;
    z.trunc_error = a.trunc_error + b.trunc_error;
    return z;
}

ZetaValue z_first_order(double s, const MatrixElementTable& table, const PertOptions& opt) {
    require_convergent(table.basis, s);
    const double sb = opt.sigma_bar;
    const int n = table.N();
    const double v = sum_rows(n, opt.parallel, [&](std::int64_t ii) {
        const int i = int(ii);
        const double e = table.eps(i);
        return e > 0.0 ? s * (table(i, i) / sb - 1.0) * std::pow(e, -s) : 0.0;
    });
    ZetaValue z;
    z.s = s;
    z.method = "series+tail";
    z.value = std::pow(sb, s) * (homogeneous_zeta(table.basis, s).re() + v);
    return z;
}

HeatOptions heat_options_for(const DensitySpec& d) {
    HeatOptions o;
    if (d.dim != 1) throw BasisError("heat kernel options need a 1D density");
    const QuadResult q = integrate([&d](double x) { return 1.0 / d(x); }, -d.L, d.L, 1e-14, 1e-14, d.breakpoints());
    o.w_bar = q.value / (2.0 * d.L);
    return o;
}

double heat_kernel_reference(double t, const BasisSpec& b, double w_bar) {
    if (b.dim != 1) throw BasisError("reference heat kernel is 1D");
    CompensatedSum<double> acc;
    for (long k = 1;; ++k) {
        const double x = w_bar * eps_1d(b, k) * t;
        acc.add(std::exp(-x));
        if (x > 60.0) break;
    }
    return acc.value();
}

HeatKernelValue heat_kernel(double t, const MatrixElementTable& w, int order, const HeatOptions& opt) {
    if (!(t > 0.0)) throw std::domain_error("heat kernel needs t > 0");
    const int n = w.N();
    HeatKernelValue h;
    h.t = t;
    h.order = order;
    h.first = sum_rows(n, opt.parallel, [&](std::int64_t i) { return std::exp(-w(int(i), int(i)) * t); });
    if (opt.tail && w.basis.dim == 1) {
        CompensatedSum<double> acc;
        for (long k = n + 1;; ++k) {
            const double x = opt.w_bar * eps_1d(w.basis, k) * t;
            acc.add(std::exp(-x));
            if (x > 60.0) break;
        }
        h.first += acc.value();
    }
    if (order >= 2) {
        h.second = -t * sum_rows(n, opt.parallel, [&](std::int64_t ii) {
            const int i = int(ii);
            CompensatedSum<double> acc;
            for (int j = i + 1; j < n; ++j) {
                if (!keep_pair(w, i, j, opt.band)) continue;
                const double v = w(i, j);
                acc.add(heat_divided_difference(w.eps(i), w.eps(j), t) * v * v);
            }
            return acc.value();
        });
    }
    h.value = h.first + h.second;
    return h;
}

double heat_small_t_second_order(double t, const MatrixElementTable& w) {
    CompensatedSum<double> acc;
    for (int i = 0; i < w.N(); ++i)
        for (int j = 0; j < w.N(); ++j)
            if (i != j) acc.add(w(i, j) * w(i, j));
    return 0.5 * t * t * acc.value();
}

ZetaValue heat_series_zeta(double s, const MatrixElementTable& w, int order, const HeatOptions& opt) {
    const int n = w.N();
    double v = sum_rows(n, opt.parallel, [&](std::int64_t i) { return std::pow(w(int(i), int(i)), -s); });
    const double part = sum_rows(n, opt.parallel, [&](std::int64_t i) { return std::pow(w.eps(int(i)), -s); });
    const ZetaValue hom = homogeneous_zeta(w.basis, s);
    v += std::pow(opt.w_bar, -s) * (hom.re() - part);
    if (order >= 2) {
        v += -s * sum_rows(n, opt.parallel, [&](std::int64_t ii) {
            const int i = int(ii);
            CompensatedSum<double> acc;
            for (int j = i + 1; j < n; ++j) {
                if (!keep_pair(w, i, j, opt.band)) continue;
                const double x = w(i, j);
                acc.add(divided_difference(w.eps(j), w.eps(i), s + 2.0) * x * x);
            }
            return acc.value();
        });
    }
    ZetaValue z;
    z.s = s;
    z.value = v;
    z.method = "series";
    z.pole_order = hom.pole_order;
    z.residue = std::pow(opt.w_bar, -s) * hom.residue;
    return z;
}

ZetaValue mellin_zeta(double s, const MatrixElementTable& w, int order, const HeatOptions& opt) {
    if (!(s > 0.0)) throw DivergenceError("mellin_zeta needs s > 0");
    const int n = w.N();
    const double wb = opt.w_bar;
    double lam = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) lam = std::min({lam, w(i, i), wb * w.eps(i), w.eps(i)});
    HeatOptions inner = opt;
    inner.tail = false;
    auto diff = [&](double t) {
        double d = 0.0;
        {
            CompensatedSum<double> acc;
            for (int i = 0; i < n; ++i) {
                const double a = wb * w.eps(i);
                acc.add(std::exp(-a * t) * std::expm1(-(w(i, i) - a) * t));
            }
            d = acc.value();
        }
        if (order >= 2) d += heat_kernel(t, w, 2, inner).second;
        return d;
    };
    auto integrand = [&](double u) {
        const double t = std::exp(u);
        return std::exp(s * u) * diff(t);
    };
    const double umin = std::log(1e-16) - 2.0;
    const double umax = std::log(80.0 / lam);
    const QuadResult lo = integrate(integrand, umin, 0.0, 1e-15, 1e-12);
    const QuadResult hi = umax > 0.0 ? integrate(integrand, 0.0, umax, 1e-15, 1e-12) : QuadResult{};
    const double gs = gamma_fn(s).re();
    const ZetaValue hom = homogeneous_zeta(w.basis, s);
    ZetaValue z;
    z.s = s;
    z.method = "mellin";
    z.value = (lo.value + hi.value) / gs + std::pow(wb, -s) * hom.re();
    z.trunc_error = (lo.abs_error + hi.abs_error) / std::abs(gs);
    z.pole_order = hom.pole_order;
    z.residue = std::pow(wb, -s) * hom.residue;
    if (s - 0.5 * w.basis.dim < 1e-3) {
        z.pole_order = std::max(z.pole_order, 1);
        z.method = "mellin,pole-proximity";
    }
    return z;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
    return g;
}

CutoffResult cutoff_casimir(const DensitySpec& d, const BasisSpec& b, const std::vector<double>& a_in, bool parallel) {
    if (b.dim != 1) throw BasisError("cutoff regularization is implemented for strings");
    CutoffResult res;
    res.a = a_in.empty() ? geometric_grid(1e-3, 1e-1, 12) : a_in;
    if (res.a.size() < 6) throw std::invalid_argument("cutoff fit needs at least 6 values of a");
    const double amin = *std::min_element(res.a.begin(), res.a.end());
    const double sb = perturbation_split(d).sigma_bar;
    res.sigma_bar = sb;
    const double kscale = 2.0 * b.L / kPi;
    const double kmax = 46.0 / amin;
    const std::vector<ModeIndex> all = enumerate_modes(b, int(std::ceil(2.0 * kmax)) + 2);
    std::vector<ModeIndex> modes;
    for (const ModeIndex& m : all)
        if (std::sqrt(eigenvalue(b, m)) * kscale <= kmax) modes.push_back(m);
    const int nm = int(modes.size());
    res.modes = nm;
    std::vector<double> wgt(nm), k(nm);
    auto fill = [&](int i) {
        const double e = eigenvalue(b, modes[i]);
        const double dn = matrix_element(d, b, modes[i], modes[i]).value;
        wgt[i] = std::sqrt(e / sb) * (1.0 - 0.5 * (dn / sb - 1.0));
        k[i] = std::sqrt(e) * kscale;
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
        for (int i = 0; i < nm; ++i) fill(i);
    } else {
        for (int i = 0; i < nm; ++i) fill(i);
    }
    const int na = int(res.a.size());
    res.F.assign(na, 0.0);
    auto eval = [&](int j) {
        CompensatedSum<double> acc;
        for (int i = 0; i < nm; ++i) acc.add(wgt[i] * std::exp(-res.a[j] * k[i]));
        res.F[j] = 0.5 * acc.value();
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < na; ++j) eval(j);
    } else {
        for (int j = 0; j < na; ++j) eval(j);
    }
    // rows scaled by a^2: a^2 F = c2 + c0 a^2 + c1 a^3 + c3 a^4 + c4 a^5 (+ l a^2 log a)
    auto fit = [&](bool with_log, Eigen::VectorXd& coef) {
        const int nc = with_log ? 6 : 5;
        Eigen::MatrixXd A(na, nc);
        Eigen::VectorXd y(na);
        for (int j = 0; j < na; ++j) {
            const double a = res.a[j];
            A(j, 0) = 1.0;
            A(j, 1) = a * a;
            A(j, 2) = a * a * a;
            A(j, 3) = a * a * a * a;
            A(j, 4) = a * a * a * a * a;
            if (with_log) A(j, 5) = a * a * std::log(a);
            y(j) = a * a * res.F[j];
        }
        Eigen::VectorXd scale = A.colwise().norm().transpose();
        for (int c = 0; c < nc; ++c) A.col(c) /= scale(c);
        Eigen::VectorXd x = A.colPivHouseholderQr().solve(y);
        coef = x.cwiseQuotient(scale);
        const Eigen::VectorXd r = A * x - y;
        return r.cwiseAbs().maxCoeff() / std::max(1.0, std::abs(coef(0)));
    };
    Eigen::VectorXd c;
    res.fit_residual = fit(false, c);
    res.removable = res.fit_residual < 1e-11;
    if (!res.removable) {
        Eigen::VectorXd cl;
        const double rl = fit(true, cl);
        if (rl < res.fit_residual) {
            res.log_coeff = cl(5);
            c = cl;
            res.fit_residual = rl;
        }
    }
    res.c2 = c(0);
    res.c0 = c(1);
    res.c1 = c(2);
    return res;
}

}  // namespace spz
