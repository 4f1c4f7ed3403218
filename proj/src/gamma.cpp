#include "spectral/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace spz {

namespace {

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
constexpr double kLanczosG = 7.0;

bool near_nonpositive_integer(double s) {
    if (s > 0.5) return false;
    return std::abs(s - std::round(s)) < kPoleTol;
}

// log Gamma(z) for z >= 0.5
double lanczos_lgamma(double z) {
    z -= 1.0;
    double x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + i);
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

double lanczos_gamma(double z) {
    z -= 1.0;
    double x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + i);
    const double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace

SpecialFnResult gamma_fn(double s) {
    SpecialFnResult r;
    if (near_nonpositive_integer(s)) {
        r.is_pole = true;
        r.value = std::numeric_limits<double>::infinity();
        return r;
    }
    double v;
    if (s < 0.5) {
        v = kPi / (std::sin(kPi * s) * gamma_fn(1.0 - s).re());
    } else if (s > 140.0) {
        v = std::exp(lanczos_lgamma(s));
    } else {
        v = lanczos_gamma(s);
    }
    r.value = v;
    r.abs_error_estimate = 4e-15 * std::abs(v);
    return r;
}

double lgamma_abs(double s) {
    if (near_nonpositive_integer(s)) return std::numeric_limits<double>::infinity();
    if (s < 0.5) {
        return std::log(kPi / std::abs(std::sin(kPi * s))) - lanczos_lgamma(1.0 - s);
    }
    return lanczos_lgamma(s);
}

SpecialFnResult beta_fn(double a, double b) {
    SpecialFnResult r;
    const bool pa = near_nonpositive_integer(a);
    const bool pb = near_nonpositive_integer(b);
    const bool pab = near_nonpositive_integer(a + b);
    if ((pa || pb) && !pab) {
        r.is_pole = true;
        r.value = std::numeric_limits<double>::infinity();
        return r;
    }
    if (pab && !(pa || pb)) {
        r.value = 0.0;
        return r;
    }
    if (pa || pb) {
        throw PoleError("beta_fn: indeterminate pole/pole ratio");
    }
    double v;
    if (a > 0 && b > 0 && a + b > 100.0) {
        v = std::exp(lgamma_abs(a) + lgamma_abs(b) - lgamma_abs(a + b));
    } else {
        v = gamma_fn(a).re() * gamma_fn(b).re() / gamma_fn(a + b).re();
    }
    r.value = v;
    r.abs_error_estimate = 1e-14 * std::abs(v);
    return r;
}

double digamma(double x) {
    if (near_nonpositive_integer(x)) throw PoleError("digamma at non-positive integer");
    if (x < 0.0) return digamma(1.0 - x) - kPi / std::tan(kPi * x);
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double x2 = 1.0 / (x * x);
    const double series =
        x2 * (1.0 / 12 -
              x2 * (1.0 / 120 -
                    x2 * (1.0 / 252 -
                          x2 * (1.0 / 240 - x2 * (1.0 / 132 - x2 * (691.0 / 32760 - x2 / 12.0))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double harmonic(double x) {
    if (x >= 0.0 && x == std::floor(x) && x < 64) {
        double h = 0.0;
        for (int k = static_cast<int>(x); k >= 1; --k) h += 1.0 / k;
        return h;
    }
    return digamma(x + 1.0) + kEulerGamma;
}

}  // namespace spz
