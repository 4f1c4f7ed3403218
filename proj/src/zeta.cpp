#include "spectral/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace spz {

namespace {

constexpr int kMaxBernoulli = 30;

// B_{2j}/(2j)! for j = 1..30
const std::array<double, kMaxBernoulli + 1>& bernoulli_over_factorial() {
    static const std::array<double, kMaxBernoulli + 1> table = [] {
        std::array<double, kMaxBernoulli + 1> c{};
        const double pi2 = kPi * kPi;
        for (int j = 1; j <= kMaxBernoulli; ++j) {
            double z;
            switch (j) {
                case 1: z = pi2 / 6.0; break;
                case 2: z = pi2 * pi2 / 90.0; break;
                case 3: z = pi2 * pi2 * pi2 / 945.0; break;
                case 4: z = pi2 * pi2 * pi2 * pi2 / 9450.0; break;
                default: {
                    z = 0.0;
                    for (int n = 200; n >= 1; --n) z += std::pow(n, -2.0 * j);
                }
            }
            const double mag = 2.0 * z / std::pow(2.0 * kPi, 2 * j);
            c[j] = (j % 2 == 1) ? mag : -mag;
        }
        return c;
    }();
    return table;
}

template <class T>
T em_hurwitz(T s, double a, double* err) {
    const auto& c = bernoulli_over_factorial();
    const double sabs = std::abs(s);
    const int need = 12 + static_cast<int>(std::ceil(sabs));
    int n_direct = need - static_cast<int>(std::floor(a));
    if (n_direct < 0) n_direct = 0;
    T sum = 0.0;
    double mag = 0.0;
    for (int k = n_direct - 1; k >= 0; --k) {
        const T t = std::exp(-s * std::log(k + a));
        sum += t;
        mag += std::abs(t);
    }
    const double x = n_direct + a;
    const double lx = std::log(x);
    const T xs = std::exp(-s * lx);
    const T head = x * xs / (s - 1.0) + 0.5 * xs;
    sum += head;
    mag += std::abs(head);
    T t = s * xs / x;
    double last = 0.0;
    for (int j = 1; j <= kMaxBernoulli; ++j) {
        const T term = c[j] * t;
        sum += term;
        last = std::abs(term);
        if (last <= 1e-17 * std::abs(sum)) break;
        t *= (s + (2.0 * j - 1.0)) * (s + 2.0 * j) / (x * x);
    }
    if (err) *err = last + 2e-16 * mag;
    return sum;
}

bool is_even_negative_integer(double s) {
    return s < 0 && s == std::floor(s) && std::fmod(-s, 2.0) == 0.0;
}

}  // namespace

SpecialFnResult riemann_zeta(double s) {
    SpecialFnResult r;
    if (std::abs(s - 1.0) < kPoleTol) {
        r.is_pole = true;
        r.value = std::numeric_limits<double>::infinity();
        return r;
    }
    if (s >= -1.0) {
        double err = 0.0;
        r.value = em_hurwitz<double>(s, 1.0, &err);
        r.abs_error_estimate = err;
        return r;
    }
    if (is_even_negative_integer(s)) {
        r.value = 0.0;
        return r;
    }
    const SpecialFnResult z1 = riemann_zeta(1.0 - s);
    const double logmag = s * std::log(2.0) + (s - 1.0) * std::log(kPi) + lgamma_abs(1.0 - s);
    const double v = std::sin(0.5 * kPi * s) * std::exp(logmag) * z1.re();
    r.value = v;
    r.abs_error_estimate = 1e-14 * std::abs(v);
    return r;
}

SpecialFnResult riemann_zeta(cplx s) {
    if (s.imag() == 0.0) return riemann_zeta(s.real());
    if (s.real() < -1.0) throw std::domain_error("riemann_zeta: complex s with Re s < -1 unsupported");
    SpecialFnResult r;
    double err = 0.0;
    r.value = em_hurwitz<cplx>(s, 1.0, &err);
    r.abs_error_estimate = err;
    return r;
}

SpecialFnResult hurwitz_zeta(double s, double a) {
    if (!(a > 0.0)) throw std::domain_error("hurwitz_zeta: a must be positive");
    SpecialFnResult r;
    if (std::abs(s - 1.0) < kPoleTol) {
        r.is_pole = true;
        r.value = std::numeric_limits<double>::infinity();
        return r;
    }
    if (s >= -1.0) {
        double err = 0.0;
        r.value = em_hurwitz<double>(s, a, &err);
        r.abs_error_estimate = err;
        return r;
    }
    // Hurwitz's formula on a0 in (0,1], then shift back
    const double m = std::ceil(a) - 1.0;
    const double a0 = a - m;
    const double sp = 1.0 - s;
    const cplx li = polylog_unit_circle(sp, 2.0 * kPi * a0);
    const cplx ph = std::exp(cplx(0.0, -0.5 * kPi * sp));
    const double pref = 2.0 * std::exp(lgamma_abs(sp) - sp * std::log(2.0 * kPi));
    double v = pref * (ph * li).real();
    for (int k = 0; k < static_cast<int>(m); ++k) v -= std::pow(a0 + k, -s);
    r.value = v;
    r.abs_error_estimate = 1e-13 * std::max(1.0, std::abs(v));
    return r;
}

double dirichlet_beta(double s) {
    if (std::abs(s - 1.0) < 1e-4) {
        return std::pow(2.0, -s) * lerch_phi(kPi, s, 0.5).real();
    }
    return std::pow(4.0, -s) * (hurwitz_zeta(s, 0.25).re() - hurwitz_zeta(s, 0.75).re());
}

double stieltjes_gamma1(double a) {
    if (!(a > 0.0)) throw std::domain_error("stieltjes_gamma1: a must be positive");
    const auto& c = bernoulli_over_factorial();
    const int n_direct = 24;
    double dF = 0.0;
    for (int k = n_direct - 1; k >= 0; --k) dF -= std::log(k + a) / (k + a);
    const double x = n_direct + a;
    const double lx = std::log(x);
    dF += 0.5 * lx * lx - 0.5 * lx / x;
    double fact = 1.0;  // (2j-1)!
    double h = 1.0;     // H_{2j-1}
    double xp = 1.0 / (x * x);
    for (int j = 1; j <= kMaxBernoulli; ++j) {
        if (j > 1) {
            fact *= (2.0 * j - 2.0) * (2.0 * j - 1.0);
            h += 1.0 / (2.0 * j - 2.0) + 1.0 / (2.0 * j - 1.0);
            xp /= x * x;
        }
        const double term = c[j] * fact * xp * (h - lx);
        dF += term;
        if (std::abs(term) < 1e-18) break;
    }
    return -dF;
}

}  // namespace spz
