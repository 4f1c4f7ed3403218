#include "spectral/continuation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spectral/parallel.hpp"
#include "spectral/quadrature.hpp"

namespace spz {

namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411;
const cplx kI{0.0, 1.0};

double rz(double s) { return riemann_zeta(s).value.real(); }

bool near(double s, double s0) { return std::abs(s - s0) < kPoleTol; }

// s = 1/2 - j for some integer j >= j0
bool near_half_minus_int(double s, int j0) {
    const double j = 0.5 - s;
    return j > j0 - 0.5 && std::abs(j - std::round(j)) < kPoleTol;
}

bool nonpositive_int(double s) { return s <= 0.5 && std::abs(s - std::round(s)) < 1e-14; }

double rgamma(double s) { return nonpositive_int(s) ? 0.0 : 1.0 / gamma_fn(s).re(); }

double factorial(int n) { return std::exp(std::lgamma(n + 1.0)); }

ZetaValue real_closed(const std::function<cplx(double)>& f, double s, bool pole, const std::string& m) {
    return zeta_from_function(f, s, pole, m);
}

double kirsten_raw(double L2, double L3, double s) {
    if (L2 < L3) std::swap(L2, L3);
    const double t1 = -0.5 * std::pow(L3 / kPi, 2.0 * s) * rz(2.0 * s);
    const double rg = rgamma(s);
    double t2 = 0.0, t3 = 0.0;
    if (rg != 0.0) {
        double gz;
        if (near_half_minus_int(s, 1) && std::abs(s - (0.5 - std::round(0.5 - s))) < 1e-12) {
            const int j = int(std::round(0.5 - s));
            gz = factorial(2 * j) * rz(2.0 * j + 1.0) / (factorial(j) * std::pow(2.0 * kPi, 2.0 * j));
        } else {
            gz = gamma_fn(s - 0.5).re() * rz(2.0 * s - 1.0);
        }
        t2 = L2 * gz * rg / (2.0 * kSqrtPi) * std::pow(L3 / kPi, 2.0 * s - 1.0);
        const double c = 2.0 * kPi * L2 / L3;
        const double nu = std::abs(0.5 - s);
        const double xmax = 60.0 + 2.0 * nu;
        CompensatedSum<double> acc;
        for (int a = 1; c * a <= xmax; ++a)
            for (int b = 1; c * a * b <= xmax; ++b)
                acc.add(std::pow(a * L3 / (kPi * b), s - 0.5) * bessel_k(nu, c * a * b));
        t3 = 2.0 * std::pow(L2, s + 0.5) / kSqrtPi * rg * acc.value();
    }
    return t1 + t2 + t3;
}

double thin_half_width(double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("thin annulus: 0 < r < 1 required");
    return -0.5 * std::log(r);
}

double thin_dp_raw(double s, double L) {
    return (1.0 - 2.0 * s * L) * (std::pow(4.0, s) * std::pow(kPi, -2.0 * s) * std::pow(L, 2.0 * s) * rz(2.0 * s) +
                                  2.0 * kirsten_raw(kPi, 2.0 * L, s));
}

double thin_dd2_raw(double s, double L) { return (1.0 - 2.0 * s * L) * kirsten_raw(2.0 * kPi, 2.0 * L, s); }

double thin_np_raw(double s, double L) { return thin_dp_raw(s, L) + (1.0 - 2.0 * s * L) * 2.0 * rz(2.0 * s); }

ZetaValue thin_zeta_generic(const std::function<double(double)>& f, double s) {
    const bool pole = near(s, 0.5) || near(s, 1.0);
    return zeta_from_function([&f](double x) { return cplx(f(x), 0.0); }, s, pole, "kirsten");
}

// 5-point one-sided derivative stencils, sign = +1 forward, -1 backward
double d1_one_sided(const std::function<double(double)>& f, double x, double h, int sign) {
    const double hh = sign * h;
    return (-25.0 * f(x) + 48.0 * f(x + hh) - 36.0 * f(x + 2 * hh) + 16.0 * f(x + 3 * hh) - 3.0 * f(x + 4 * hh)) /
           (12.0 * hh);
}

double d3_one_sided(const std::function<double(double)>& f, double x, double h, int sign) {
    const double hh = sign * h;
    return (-5.0 * f(x) + 18.0 * f(x + hh) - 24.0 * f(x + 2 * hh) + 14.0 * f(x + 3 * hh) - 3.0 * f(x + 4 * hh)) /
           (2.0 * hh * hh * hh);
}

double s2_sum(double a) {
    // sum over all integers n of 1/(a^2+n^2)^2
    const double pa = kPi * a;
    const double coth = 1.0 / std::tanh(pa);
    const double csch = pa > 300.0 ? 0.0 : 1.0 / std::sinh(pa);
    return kPi / (2.0 * a * a * a) * coth + kPi * kPi / (2.0 * a * a) * csch * csch;
}

}  // namespace

LaurentExpansion laurent_probe(const std::function<cplx(double)>& f, double s0, double h) {
    auto ev = [&](double x) { return f(x).real(); };
    const double p1 = ev(s0 + h), m1 = ev(s0 - h), p2 = ev(s0 + 2 * h), m2 = ev(s0 - 2 * h);
    const double e1 = 0.5 * (p1 + m1), e2 = 0.5 * (p2 + m2);
    const double o1 = 0.5 * (p1 - m1) * h, o2 = 0.5 * (p2 - m2) * 2 * h;
    LaurentExpansion le;
    le.s0 = s0;
    le.coeff_0 = (4.0 * e1 - e2) / 3.0;
    le.coeff_minus1 = (4.0 * o1 - o2) / 3.0;
    le.coeff_1 = (o2 - o1) / (3.0 * h * h);
    return le;
}

ZetaValue zeta_from_function(const std::function<cplx(double)>& f, double s, bool pole_at_s,
                             const std::string& method) {
    ZetaValue z;
    z.s = s;
    z.method = method;
    if (!pole_at_s) {
        z.value = f(s);
        return z;
    }
    const LaurentExpansion le = laurent_probe(f, s, 1e-3);
    const double im = 0.5 * (f(s + 1e-3).imag() + f(s - 1e-3).imag());
    z.value = cplx(le.coeff_0, im);
    z.residue = le.coeff_minus1;
    z.pole_order = std::abs(le.coeff_minus1) > 1e-9 * std::max(1.0, std::abs(le.coeff_0)) ? 1 : 0;
    z.method = method + (z.pole_order ? ",finite-part" : ",removable");
    z.trunc_error = 1e-9 * std::max(1.0, std::abs(le.coeff_0));
    return z;
}

PiecewiseParams PiecewiseParams::from_alpha_beta(double alpha, double beta, double dv) {
    PiecewiseParams p;
    p.v1 = 1.0 + dv;
    p.v2 = 1.0 - dv;
    p.r = p.v1 * (alpha + beta) / 2.0;
    p.R = p.r + p.v2 * (alpha - beta) / 2.0;
    p.validate();
    return p;
}

void PiecewiseParams::validate() const {
    if (!(v1 > 0.0 && v2 > 0.0)) throw std::invalid_argument("piecewise: velocities must be positive");
    if (!(R > 0.0 && r > 0.0 && r < R)) throw std::invalid_argument("piecewise: need 0 < r < R");
}

ZetaValue piecewise_zeta(BC bc, double s, const PiecewiseParams& p) {
    p.validate();
    const double a = p.alpha(), b = p.beta(), dv = p.delta_upsilon();
    std::function<cplx(double)> f;
    switch (bc) {
        case BC::DD:
            f = [=](double x) {
                const double th = kPi * (a + b) / a;
                return std::pow(kPi, -2.0 * x - 1.0) * std::pow(a, 2.0 * x) *
                       (kPi * rz(2.0 * x) + kI * x * dv *
                                                (polylog_unit_circle(2.0 * x + 1.0, -th) -
                                                 polylog_unit_circle(2.0 * x + 1.0, th)));
            };
            break;
        case BC::NN:
            f = [=](double x) {
                const double sg = 2.0 * x + 1.0, ph = kPi * b / a;
                const cplx t = lerch_phi(-2.0 * ph, sg, 0.5) - std::exp(2.0 * kI * ph) * lerch_phi(2.0 * ph, sg, 0.5) -
                               std::exp(kI * ph) * polylog_unit_circle(sg, -2.0 * ph) +
                               std::exp(kI * ph) * polylog_unit_circle(sg, 2.0 * ph);
                return std::pow(kPi, -2.0 * x) * std::pow(a, 2.0 * x) * rz(2.0 * x) +
                       kI * dv * std::pow(2.0 * kPi, -sg) * x * std::exp(-kI * ph) * std::pow(a, 2.0 * x) * t;
            };
            break;
        case BC::DN:
        case BC::ND: {
            const double d = bc == BC::DN ? dv : -dv;
            f = [=](double x) {
                const double sg = 2.0 * x + 1.0, ph = kPi * b / a;
                const cplx t = std::exp(-kI * ph / 2.0) * lerch_phi(kPi - ph, sg, 0.5) +
                               std::exp(kI * ph / 2.0) * lerch_phi(kPi + ph, sg, 0.5);
                return (std::pow(4.0, x) - 1.0) * std::pow(kPi, -2.0 * x) * std::pow(a, 2.0 * x) * rz(2.0 * x) +
                       d * std::pow(kPi, -sg) * x * std::pow(a, 2.0 * x) * t;
            };
            break;
        }
        case BC::PP:
            f = [=](double x) {
                return cplx(std::pow(2.0, 1.0 - 2.0 * x) * std::pow(kPi, -2.0 * x) * std::pow(a, 2.0 * x) * rz(2.0 * x),
                            0.0);
            };
            break;
        default: throw BasisError("piecewise_zeta: bc must be DD, NN, DN, ND or PP");
    }
    return real_closed(f, s, near(s, 0.5), "closed_form");
}

double piecewise_casimir(BC bc, const PiecewiseParams& p) {
    p.validate();
    const double a = p.alpha(), b = p.beta(), dv = p.delta_upsilon();
    const double x = kPi * b / (2.0 * a);
    const double c = std::cos(x);
    if (std::abs(c) < 1e-12 && bc != BC::PP) throw PoleError("piecewise_casimir: tan/sec pole at pi beta/2alpha");
    const double t = std::tan(x), sc = 1.0 / c;
    switch (bc) {
        case BC::DD: return -kPi / (24.0 * a) + dv * t / (4.0 * a);
        case BC::NN: return -kPi / (24.0 * a) - dv * t / (4.0 * a);
        case BC::DN: return kPi / (48.0 * a) - dv * sc / (4.0 * a);
        case BC::ND: return kPi / (48.0 * a) + dv * sc / (4.0 * a);
        case BC::PP: return -kPi / (6.0 * a);
        default: throw BasisError("piecewise_casimir: bc must be DD, NN, DN, ND or PP");
    }
}

double piecewise_sumrule1(BC bc, const PiecewiseParams& p) {
    p.validate();
    double a = p.alpha(), b = p.beta(), dv = p.delta_upsilon();
    if (bc == BC::ND) {
        b = -b;
        dv = -dv;
        bc = BC::DN;
    }
    const double phi = kPi * (a + b) * (1.0 + dv) / (a + b * dv);
    const double pre = dv * (a + b * dv) * (a + b * dv) / (kPi * kPi * kPi * (dv * dv - 1.0) * (dv * dv - 1.0));
    switch (bc) {
        case BC::DD:
        case BC::NN: {
            const cplx li = kI * pre * (polylog_unit_circle(3.0, -phi) - polylog_unit_circle(3.0, phi));
            const double base = (a * a - b * b * dv * dv) / (6.0 * (1.0 - dv * dv));
            return bc == BC::DD ? base + li.real() : base - li.real();
        }
        case BC::DN: {
            const cplx t = std::exp(-kI * phi / 2.0) * lerch_phi(-phi, 3.0, 0.5) -
                           std::exp(kI * phi / 2.0) * lerch_phi(phi, 3.0, 0.5);
            return (a - b * dv) * (a + b * dv) / (2.0 - 2.0 * dv * dv) + (kI * pre * t).real();
        }
        case BC::PP: return (a * a - b * b * dv * dv) / (12.0 - 12.0 * dv * dv);
        default: throw BasisError("piecewise_sumrule1: bc must be DD, NN, DN, ND or PP");
    }
}

SpecialFnResult psi_aux(double a) {
    SpecialFnResult r;
    if (a > 0.5 && std::abs(a - std::round(a)) < kPoleTol && int(std::round(a)) % 2 == 1) {
        r.is_pole = true;
        r.value = cplx(std::nan(""), 0.0);
        return r;
    }
    CompensatedSum<double> acc;
    acc.add(1.0 / 3.0);
    double last = 0.0;
    for (int j = 0; j < 400; ++j) {
        const double t = (rz(2.0 * j + 2.0 - a) - 1.0) / std::pow(2.0, 2.0 * j + 1.0);
        acc.add(-t);
        last = std::abs(t);
        if (2.0 * j + 2.0 - a > 2.0 && last < 1e-17 * std::max(1.0, std::abs(acc.value()))) break;
    }
    r.value = acc.value();
    r.abs_error_estimate = last;
    return r;
}

namespace {
double sinusoidal_raw(double s, double eta, double L) {
    const double lp = std::pow(L / kPi, 2.0 * s);
    return std::pow(4.0, s) * lp * rz(2.0 * s) + eta * eta * s * std::pow(4.0, s - 1.0) * lp * psi_aux(2.0 - 2.0 * s).re();
}
}  // namespace

ZetaValue sinusoidal_zeta(double s, double eta, double L) {
    const bool pole = near_half_minus_int(s, 0);
    return zeta_from_function([=](double x) { return cplx(sinusoidal_raw(x, eta, L), 0.0); }, s, pole,
                              "closed_form");
}

LaurentExpansion sinusoidal_laurent(double eta, double L) {
    LaurentExpansion le;
    le.s0 = -0.5;
    le.coeff_minus1 = kPi * eta * eta / (256.0 * L);
    le.coeff_0 = -kPi / (24.0 * L) +
                 kPi * eta * eta / (384.0 * L) * (3.0 * std::log(8.0 * L / kPi) + 3.0 * kEulerGamma - 31.0);
    return le;
}

LaurentExpansion sinusoidal_laurent_numeric(double eta, double L) {
    return laurent_probe([=](double x) { return cplx(sinusoidal_raw(x, eta, L), 0.0); }, -0.5, 1e-3);
}

ZetaValue dd_plus_nn_zeta(double s, const DensitySpec& d) {
    if (d.dim != 1) throw BasisError("dd_plus_nn_zeta needs a 1D density");
    const double sb = perturbation_split(d).sigma_bar;
    const double L = d.L;
    const double I =
        integrate([&](double x) { return d(x) / sb - 1.0; }, -L, L, 1e-14, 1e-13, d.breakpoints()).value;
    auto f = [=](double x) {
        return cplx(2.0 * std::pow(sb, x) * (1.0 + x * I / (2.0 * L)) * std::pow(kPi, -2.0 * x) *
                        std::pow(2.0 * L, 2.0 * x) * rz(2.0 * x),
                    0.0);
    };
    return zeta_from_function(f, s, near(s, 0.5), "closed_form");
}

DivergenceReport divergence_check(const DensitySpec& d) {
    if (d.dim != 1) throw BasisError("divergence_check needs a 1D density");
    const double L = d.L;
    std::function<double(double)> f = [&d](double x) { return d(x); };
    const double h1 = 1e-4 * L, h3 = 2e-2 * L;
    DivergenceReport rep;
    rep.jump1 = d1_one_sided(f, L, h1, -1) - d1_one_sided(f, -L, h1, +1);
    rep.jump3 = d3_one_sided(f, L, h3, -1) - d3_one_sided(f, -L, h3, +1);
    double scale = 0.0;
    for (int i = 0; i <= 64; ++i) scale = std::max(scale, std::abs(d(-L + 2.0 * L * i / 64.0)));
    const double sb = mass(d) / (2.0 * L);
    rep.residue = rep.jump1 / (16.0 * kPi * std::pow(sb, 1.5));
    const bool j1 = std::abs(rep.jump1) > 1e-6 * scale / L;
    const bool j3 = std::abs(rep.jump3) > 1e-3 * scale / (L * L * L);
    rep.finite = !j1;
    rep.order = j1 ? 1 : (j3 ? 3 : 0);
    if (!d.breakpoints().empty())
        rep.warning = "density has interior breakpoints; endpoint derivatives are one-sided finite differences";
    return rep;
}

SpecialFnResult oscillating_phi(double s, double eb) {
    if (!(eb > 0.0)) throw std::invalid_argument("oscillating_phi: eps_bar > 0 required");
    const double inv = 1.0 / eb;
    if (std::abs(inv - std::round(inv)) < 1e-12)
        throw std::domain_error("oscillating_phi: 1/eps_bar is an integer (resonant mode)");
    const int M = int(std::floor(inv));
    const double a = M + 1.0;
    SpecialFnResult r;
    CompensatedSum<double> acc;
    for (int n = 1; n <= M; ++n) acc.add(std::pow(double(n), 2.0 - 2.0 * s) / (eb * eb * n * n - 1.0));
    const double le = std::log(eb), la = std::log(a);
    for (long k = 0; k < 20000000; ++k) {
        const double sig = 2.0 * (k + s);
        double xi;
        if (std::abs(sig - 1.0) < kPoleTol) {
            r.is_pole = true;
            xi = -digamma(a) * a;
        } else if (sig <= 60.0) {
            xi = hurwitz_zeta(sig, a).re() * std::pow(a, sig);
        } else {
            CompensatedSum<double> xs;
            for (long m = 0;; ++m) {
                const double t = std::pow(a / (a + m), sig);
                xs.add(t);
                if (t < 1e-18 * xs.value()) break;
            }
            xi = xs.value();
        }
        const double t = std::exp((-2.0 * k - 2.0) * le - sig * la) * xi;
        acc.add(t);
        if (sig > 2.0 && std::abs(t) < 1e-17 * std::abs(acc.value())) {
            r.abs_error_estimate = std::abs(t) / (1.0 - 1.0 / (eb * eb * a * a));
            break;
        }
    }
    r.value = acc.value();
    return r;
}

ZetaValue oscillating_zeta(double s, double eta, double eb, double ell, double L) {
    const double S = std::sin(kPi / eb) * std::sin(kPi * ell / (eb * L));
    auto f = [=](double x) {
        const double hom = std::pow(8.0 * L * L / (kPi * kPi), x) * rz(2.0 * x);
        if (eta == 0.0) return cplx(hom, 0.0);
        const double pre = x * eta * eb * eb * eb * std::pow(2.0, 3.0 * x - 1.0) * std::pow(L, 2.0 * x) *
                           std::pow(kPi, -2.0 * x - 1.0) * S;
        return cplx(hom + pre * oscillating_phi(x, eb).re(), 0.0);
    };
    return zeta_from_function(f, s, near_half_minus_int(s, 0), "closed_form");
}

ZetaValue staircase_zeta(double s, double eta, double eb, double ell, double L, int N) {
    if (N < 2) throw std::invalid_argument("staircase_zeta: N >= 2 required");
    const double S = std::sin(kPi / eb) * std::sin(kPi * ell / (eb * L));
    const double c1 = std::sin(kPi / (eb * N));
    std::vector<double> W(N, 0.0);
    for (int n = 1; n < N; ++n) {
        const double q2 = std::sin((kPi - kPi * eb * n) / (eb * N)), q3 = std::sin((kPi * eb * n + kPi) / (eb * N));
        if (std::abs(c1) < 1e-12 || std::abs(q2) < 1e-12 || std::abs(q3) < 1e-12)
            throw std::domain_error("staircase_zeta: resonant eps_bar for this N");
        W[n] = std::sin(kPi * n / N) * (1.0 / q2 + 1.0 / q3);
    }
    auto f = [=](double x) {
        const double base = std::pow(2.0, 3.0 * x - 1.0) * std::pow(kPi, -2.0 * x) * std::pow(L, 2.0 * x);
        double v = base * (2.0 + (eta / N) * x * S / c1) * rz(2.0 * x);
        if (eta != 0.0) {
            CompensatedSum<double> acc;
            for (int n = 1; n < N; ++n) acc.add(W[n] * hurwitz_zeta(2.0 * x + 1.0, double(n) / N).re());
            v -= eta * std::pow(2.0, 3.0 * x - 2.0) * std::pow(kPi, -2.0 * x - 1.0) * x * S * std::pow(L, 2.0 * x) *
                 std::pow(double(N), -2.0 * x - 1.0) * acc.value();
        }
        return cplx(v, 0.0);
    };
    return zeta_from_function(f, s, near(s, 0.5) || near(s, 0.0), "closed_form");
}

double fourier_sumrule1(const std::vector<double>& a, double Delta, double L, double M) {
    CompensatedSum<double> acc;
    acc.add(M * L / 3.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double j = i + 1.0, x = 2.0 * kPi * j * L / Delta;
        acc.add(Delta * Delta * Delta * a[i] * std::sin(x) / (4.0 * kPi * kPi * kPi * j * j * j * L));
        acc.add(-Delta * Delta * a[i] * std::cos(x) / (2.0 * kPi * kPi * j * j));
        acc.add(-Delta * L * a[i] * std::sin(x) / (3.0 * kPi * j));
    }
    return acc.value();
}

ZetaValue square_zeta(double s, double L) {
    auto f = [=](double x) {
        return cplx(std::pow(2.0 * L / kPi, 2.0 * x) * (dirichlet_beta(x) * rz(x) - rz(2.0 * x)), 0.0);
    };
    return zeta_from_function(f, s, near(s, 1.0) || near(s, 0.5), "closed_form");
}

double square_g(double L) {
    const double A = 4.0 * L * L;
    return std::log(A / (4.0 * kPi * kPi)) + (stieltjes_gamma1(0.75) - stieltjes_gamma1(0.25)) / kPi -
           2.0 * kPi / 3.0 + kEulerGamma;
}

double deformed_square_g(double alpha, double L) {
    const double A = 4.0 * L * L;
    return square_g(L) - 2.0 * kPi * A * alpha * alpha / (3.0 * (2.0 * A * alpha * alpha + 3.0));
}

double domain_g(const MatrixElementTable& t, double area) {
    if (t.basis.dim != 2 || t.basis.bc != BC::DD) throw BasisError("domain_g needs a 2D DD table");
    const double L = t.basis.L;
    int n = 0;
    for (const ModeIndex& m : t.modes) n = std::max({n, m.nx, m.ny});
    if (n < 8) throw std::invalid_argument("domain_g: table too small for the tail fit");
    const double ref = area / (4.0 * L * L);
    auto partial = [&](int m) {
        CompensatedSum<double> acc;
        for (int i = 0; i < t.N(); ++i)
            if (t.modes[i].nx <= m && t.modes[i].ny <= m) acc.add((t(i, i) - ref) / t.eps(i));
        return acc.value();
    };
    const int m[3] = {n, n / 2, n / 4};
    Eigen::Matrix3d A;
    Eigen::Vector3d y;
    for (int k = 0; k < 3; ++k) {
        A(k, 0) = 1.0;
        A(k, 1) = 1.0 / m[k];
        A(k, 2) = 1.0 / (double(m[k]) * m[k]);
        y(k) = partial(m[k]);
    }
    const double sum = A.fullPivLu().solve(y)(0);
    return square_g(L) + std::log(ref) + 4.0 * kPi / area * sum;
}

double deformed_square_z2_diag(double alpha, double L) {
    const double A = 4.0 * L * L;
    const double c = 6.0 * A * alpha * alpha / (kPi * kPi * (2.0 * A * alpha * alpha + 3.0));
    const int a0 = 40;
    CompensatedSum<double> acc;
    for (int ia = 1; ia <= a0; ++ia) {
        const double a = ia, a2 = a * a;
        const double coth = 1.0 / std::tanh(kPi * a);
        const double t0 = 0.5 * (s2_sum(a) - 1.0 / (a2 * a2));
        const double s1 = (kPi * a * coth - 1.0) / (2.0 * a2);
        const double t1 = kPi * kPi / (6.0 * a2 * a2) - s1 / (a2 * a2) - t0 / a2;
        acc.add((1.0 - 4.0 * c / a2 + 2.0 * c * c / (a2 * a2)) * t0 + 2.0 * c * c / a2 * t1);
    }
    // asymptotic polynomial in 1/a beyond a0 (exponentially small corrections dropped)
    const double coef[6] = {kPi / 4.0, -0.5, -c * kPi, 2.0 * c + c * c * kPi * kPi / 3.0, -c * c * kPi, c * c};
    for (int k = 0; k < 6; ++k) acc.add(coef[k] * hurwitz_zeta(3.0 + k, a0 + 1.0).re());
    return std::pow(2.0 * L / kPi, 4.0) * acc.value();
}

double annulus_z2_diag(double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("annulus: 0 < r < 1 required");
    const double lr = std::log(r), r2 = r * r;
    const double L = -0.5 * lr;
    const double sq = kPi / (2.0 * L);
    auto dn = [&](double n) { return kPi * kPi * n * n * (r2 - 1.0) / (2.0 * (kPi * kPi * n * n * lr + lr * lr * lr)); };
    const int n0 = 4000;
    CompensatedSum<double> acc;
    for (int n = 1; n <= n0; ++n) {
        const double d = dn(n);
        acc.add(d * d * s2_sum(sq * n));
    }
    const double dinf = (r2 - 1.0) / (2.0 * lr), lam = lr * lr / (kPi * kPi);
    const double pre = dinf * dinf * kPi / (2.0 * sq * sq * sq);
    const double coef[4] = {1.0, -2.0 * lam, 3.0 * lam * lam, -4.0 * lam * lam * lam};
    for (int k = 0; k < 4; ++k) acc.add(pre * coef[k] * hurwitz_zeta(3.0 + 2.0 * k, n0 + 1.0).re());
    return acc.value();
}

double annulus_delta_z1(double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("annulus: 0 < r < 1 required");
    const double lr = std::log(r);
    double v = ((1.0 - r * r) + (1.0 + r * r) * lr) / (8.0 * lr);
    CompensatedSum<double> acc;
    const cplx ap(1.0, -lr / kPi), am(1.0, lr / kPi);
    for (int j = 0; j < 100000; ++j) {
        const double z = std::exp(2.0 * (2.0 * j + 1.0) * kPi * kPi / lr);
        if (z == 0.0) break;
        const cplx t = incomplete_beta_complex(z, ap, 0.0) + incomplete_beta_complex(z, am, 0.0);
        acc.add(t.real());
        if (std::abs(t) < 1e-15 * std::max(1e-300, std::abs(acc.value())) || std::abs(t) < 1e-300) break;
    }
    v += 0.5 * (1.0 - r * r) * acc.value();
    return v;
}

ZetaValue kirsten_zeta_c(double L2, double L3, double s) {
    if (!(L2 > 0.0 && L3 > 0.0)) throw std::invalid_argument("kirsten_zeta_c: L2, L3 > 0 required");
    const bool pole = near(s, 0.5) || near(s, 1.0);
    return zeta_from_function([=](double x) { return cplx(kirsten_raw(L2, L3, x), 0.0); }, s, pole, "kirsten");
}

ZetaValue thin_annulus_zeta(BC bc, double s, double r) {
    const double L = thin_half_width(r);
    if (bc == BC::DP) return thin_zeta_generic([L](double x) { return thin_dp_raw(x, L); }, s);
    if (bc == BC::DD2) return thin_zeta_generic([L](double x) { return thin_dd2_raw(x, L); }, s);
    throw BasisError("thin_annulus_zeta: bc must be DP or DD2");
}

double thin_annulus_casimir(Polarization mode, double r) {
    const double L = thin_half_width(r);
    const double te = 0.5 * thin_dp_raw(-0.5, L);
    const double tm = 0.5 * thin_np_raw(-0.5, L);
    switch (mode) {
        case Polarization::TE: return te;
        case Polarization::TM: return tm;
        default: return te + tm;
    }
}

ZetaValue cylinder_lift(const std::function<ZetaValue(double)>& z2d, double s) {
    auto lift = [&](double x) {
        const double b = kSqrtPi * gamma_fn(x - 0.5).re() / gamma_fn(x).re();
        return b / (2.0 * kPi) * z2d(x - 0.5).re();
    };
    // beta-factor poles at s - 1/2 = 0, -1, -2, ...
    const bool at_pole = near_half_minus_int(s, 0);
    ZetaValue z;
    z.s = s;
    if (!at_pole) {
        z.value = lift(s);
        z.method = "cylinder_lift";
        return z;
    }
    const double d1 = 1e-3, d2 = 1e-4;
    const double f1 = 0.5 * (lift(s + d1) + lift(s - d1)), f2 = 0.5 * (lift(s + d2) + lift(s - d2));
    const double f0 = (f2 * d1 * d1 - f1 * d2 * d2) / (d1 * d1 - d2 * d2);
    z.value = f0;
    z.residue = 0.5 * (lift(s + d2) - lift(s - d2)) * d2;
    z.pole_order = std::abs(z.residue) > 1e-6 * std::max(1.0, std::abs(f0)) ? 1 : 0;
    z.trunc_error = std::abs(f1 - f2);
    z.method = std::abs(f1 - f2) > 0.01 * std::abs(f0) ? "cylinder_lift,limit-unstable" : "cylinder_lift,limit";
    return z;
}

CylinderResult cylinder_casimir(double r) {
    const double L = thin_half_width(r);
    auto dp = [L](double x) {
        ZetaValue z;
        z.s = x;
        z.value = thin_dp_raw(x, L);
        return z;
    };
    auto np = [L](double x) {
        ZetaValue z;
        z.s = x;
        z.value = thin_np_raw(x, L);
        return z;
    };
    const ZetaValue a = cylinder_lift(dp, -0.5), b = cylinder_lift(np, -0.5);
    CylinderResult res;
    res.closed_form = -std::pow(kPi, 3) / 360.0 / std::pow(1.0 - r, 3);
    res.numeric = 0.5 * (a.re() + b.re());
    res.rel_diff = std::abs(res.numeric - res.closed_form) / std::abs(res.closed_form);
    res.stable = a.method.find("unstable") == std::string::npos && b.method.find("unstable") == std::string::npos;
    return res;
}

}  // namespace spz
