#include "spectral/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace spz {

namespace {

constexpr double kDualSwitch = 1.0 / kPi;

// tail of the Gaussian sum: sum_{n>=1} n^p e^{-c n^2}, p in {0, 2}
double gauss_tail(double c, int p) {
    double s = 0.0;
    for (int n = 1; n < 100000; ++n) {
        const double e = std::exp(-c * n * n);
        const double t = (p == 0 ? e : double(n) * n * e);
        s += t;
        if (c * n * n > 745.0 || t < 1e-18 * std::max(1.0, s)) break;
    }
    return s;
}

// E1(i x) continued fraction for x >= 2, returns h with Ci = -Re h, Si = pi/2 + Im h
cplx sici_cf(double x) {
    const double fpmin = 1e-300;
    cplx b(1.0, x);
    cplx c(1.0 / fpmin, 0.0);
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 2; i < 100000; ++i) {
        const double a = -double(i - 1) * (i - 1);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cplx del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
    }
    return cplx(std::cos(x), -std::sin(x)) * h;
}

SiCi sici_series(double x) {
    double si = 0.0, ci = 0.0;
    double term = x;  // (-1)^k x^{2k+1}/(2k+1)!
    for (int k = 0; k < 60; ++k) {
        si += term / (2 * k + 1);
        const double next = -term * x / (2 * k + 2);  // (-1)^{k+1} x^{2k+2}/(2k+2)!
        ci += next / (2 * k + 2);
        term = next * x / (2 * k + 3);
        if (std::abs(term) < 1e-18 * std::abs(si)) break;
    }
    ci += kEulerGamma + std::log(x);
    return {si, ci};
}

double carlson_rf(double x, double y, double z) {
    for (int it = 0; it < 200; ++it) {
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const double lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        const double a = (x + y + z) / 3.0;
        const double dx = 1.0 - x / a, dy = 1.0 - y / a, dz = 1.0 - z / a;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < 1e-4) {
            const double e2 = dx * dy - dz * dz;
            const double e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) /
                   std::sqrt(a);
        }
    }
    throw std::runtime_error("carlson_rf: no convergence");
}

double carlson_rd(double x, double y, double z) {
    const double c1 = 3.0 / 14.0, c2 = 1.0 / 6.0, c3 = 9.0 / 22.0, c4 = 3.0 / 26.0;
    const double c5 = 0.25 * c3, c6 = 1.5 * c4;
    double sum = 0.0, fac = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const double lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        const double a = 0.2 * (x + y + 3.0 * z);
        const double dx = (a - x) / a, dy = (a - y) / a, dz = (a - z) / a;
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < 1e-4) {
            const double ea = dx * dy, eb = dz * dz;
            const double ec = ea - eb, ed = ea - 6.0 * eb, ee = ed + ec + ec;
            return 3.0 * sum +
                   fac *
                       (1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) +
                        dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))) /
                       (a * std::sqrt(a));
        }
    }
    throw std::runtime_error("carlson_rd: no convergence");
}

// E(phi|m) for |phi| <= pi/2
double ellip_e_principal(double phi, double m) {
    const double s = std::sin(phi), c = std::cos(phi);
    const double q = 1.0 - m * s * s;
    if (q < -1e-15) throw std::domain_error("elliptic_e_incomplete: m sin^2(phi) > 1");
    const double qq = std::max(q, 0.0);
    const double cc = c * c;
    return s * carlson_rf(cc, qq, 1.0) - m * s * s * s * carlson_rd(cc, qq, 1.0) / 3.0;
}

}  // namespace

double jacobi_theta3(double t) {
    if (!(t > 0.0)) throw std::domain_error("jacobi_theta3: t must be positive");
    if (t >= kDualSwitch) return 1.0 + 2.0 * gauss_tail(kPi * kPi * t, 0);
    return (1.0 + 2.0 * gauss_tail(1.0 / t, 0)) / std::sqrt(kPi * t);
}

double d_dt_theta3(double t) {
    if (!(t > 0.0)) throw std::domain_error("d_dt_theta3: t must be positive");
    if (t >= kDualSwitch) return -2.0 * kPi * kPi * gauss_tail(kPi * kPi * t, 2);
    const double pre = 1.0 / std::sqrt(kPi * t);
    const double s0 = 1.0 + 2.0 * gauss_tail(1.0 / t, 0);
    const double s2 = 2.0 * gauss_tail(1.0 / t, 2);
    return pre * (-0.5 * s0 / t + s2 / (t * t));
}

SiCi sici(double x) {
    if (!(x > 0.0)) throw std::domain_error("sici: Ci requires x > 0");
    if (x <= 2.0) return sici_series(x);
    const cplx h = sici_cf(x);
    return {0.5 * kPi + h.imag(), -h.real()};
}

SiCi sici_diff(double a, double b) {
    if (a > 2.0 && b > 2.0) {
        const cplx ha = sici_cf(a), hb = sici_cf(b);
        return {hb.imag() - ha.imag(), ha.real() - hb.real()};
    }
    const SiCi sa = sici(a), sb = sici(b);
    return {sb.si - sa.si, sb.ci - sa.ci};
}

double elliptic_e_incomplete(double phi, double m) {
    const double k = std::round(phi / kPi);
    const double rest = phi - k * kPi;
    double v = ellip_e_principal(rest, m);
    if (k != 0.0) {
        if (m > 1.0) throw std::domain_error("elliptic_e_incomplete: m > 1 beyond principal range");
        v += 2.0 * k * ellip_e_principal(0.5 * kPi, m);
    }
    return v;
}

cplx incomplete_beta_complex(double z, cplx a, double b) {
    if (!(z >= 0.0) || z >= 1.0) throw std::domain_error("incomplete_beta_complex: z must be in [0,1)");
    if (z == 0.0) return 0.0;
    const double lz = std::log(z);
    cplx sum = 0.0;
    double coef = 1.0;  // (1-b)_k / k!
    double zk = 1.0;
    for (int k = 0; k < 10000000; ++k) {
        const cplx term = coef * zk / (a + double(k));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        coef *= (k + 1.0 - b) / (k + 1.0);
        zk *= z;
        if (zk == 0.0) break;
    }
    return std::exp(a * lz) * sum;
}

}  // namespace spz
