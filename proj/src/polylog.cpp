#include "spectral/specfun.hpp"

#include <cmath>

namespace spz {

namespace {

constexpr int kMaxTerms = 150;
const cplx I(0.0, 1.0);

double reduce_angle(double theta) { return std::remainder(theta, 2.0 * kPi); }

bool is_positive_integer(double x, int& n) {
    const double r = std::round(x);
    if (r >= 1.0 && std::abs(x - r) < 1e-13) {
        n = static_cast<int>(r);
        return true;
    }
    return false;
}

// log(-i theta) on the principal branch
cplx log_minus_mu(double theta) {
    return cplx(std::log(std::abs(theta)), theta > 0 ? -0.5 * kPi : 0.5 * kPi);
}

// Sum_k c_k mu^k / k! + singular part, for mu = i theta, |theta| <= pi.
// coef(k) supplies c_k = zeta(s - k, a); special(n) the combined k = n - 1 term.
template <class Coef, class Special>
cplx mu_expansion(double s, double theta, Coef coef, Special special) {
    const cplx mu = I * theta;
    int n = 0;
    const bool integer = is_positive_integer(s, n);
    cplx sum = 0.0;
    if (!integer) {
        const SpecialFnResult g = gamma_fn(1.0 - s);
        sum += g.value * std::exp((s - 1.0) * log_minus_mu(theta));
    }
    cplx p = 1.0;  // mu^k / k!
    int small_run = 0;
    for (int k = 0; k < kMaxTerms; ++k) {
        if (k > 0) p *= mu / static_cast<double>(k);
        cplx term;
        if (integer && k == n - 1) {
            term = p * special(n);
        } else {
            term = p * coef(k);
        }
        sum += term;
        if (k > s + 2 && std::abs(term) < 1e-17 * std::abs(sum)) {
            if (++small_run >= 3) break;
        } else {
            small_run = 0;
        }
    }
    return sum;
}

}  // namespace

cplx polylog_unit_circle(double nu, double theta) {
    theta = reduce_angle(theta);
    if (theta == 0.0) {
        if (nu > 1.0) return riemann_zeta(nu).value;
        throw DivergenceError("polylog_unit_circle: Li_nu(1) diverges for nu <= 1");
    }
    return mu_expansion(
        nu, theta, [nu](int k) { return riemann_zeta(nu - k).value; },
        [theta](int n) { return harmonic(n - 1) - log_minus_mu(theta); });
}

cplx lerch_phi(double theta, double s, double a) {
    if (!(a > 0.0)) throw std::domain_error("lerch_phi: a must be positive");
    theta = reduce_angle(theta);
    if (a > 1.0) {
        // Phi(z,s,a) = (Phi(z,s,a-1) - (a-1)^{-s}) / z
        const cplx zinv = std::exp(cplx(0.0, -theta));
        return zinv * (lerch_phi(theta, s, a - 1.0) - std::pow(a - 1.0, -s));
    }
    if (theta == 0.0) {
        if (s > 1.0) return hurwitz_zeta(s, a).value;
        throw DivergenceError("lerch_phi: Phi(1,s,a) diverges for s <= 1");
    }
    const cplx body = mu_expansion(
        s, theta, [s, a](int k) { return hurwitz_zeta(s - k, a).value; },
        [theta, a](int n) { return cplx(digamma(n) - digamma(a)) - log_minus_mu(theta); });
    return std::exp(cplx(0.0, -a * theta)) * body;
}

cplx lerch_phi(cplx z, double s, double a) {
    if (std::abs(std::abs(z) - 1.0) > 1e-12) throw std::domain_error("lerch_phi: |z| must be 1");
    return lerch_phi(std::arg(z), s, a);
}

cplx polylog_series(double nu, double theta) {
    if (!(nu > 1.0)) throw DivergenceError("polylog_series: needs nu > 1");
    return std::exp(cplx(0.0, theta)) * lerch_phi_series(theta, nu, 1.0);
}

cplx lerch_phi_series(double theta, double s, double a) {
    if (!(s > 1.0)) throw DivergenceError("lerch_phi_series: needs s > 1");
    const int K = 2000000;
    cplx sum = 0.0;
    for (int k = K - 1; k >= 0; --k) {
        sum += std::exp(cplx(0.0, k * theta)) * std::pow(k + a, -s);
    }
    // summation-by-parts estimate of the remaining tail
    const cplx z = std::exp(cplx(0.0, theta));
    if (std::abs(1.0 - z) > 1e-3) {
        sum += std::pow(z, K) * std::pow(K + a, -s) / (1.0 - z);
    } else {
        sum += std::pow(K + a, 1.0 - s) / (s - 1.0);
    }
    return sum;
}

}  // namespace spz
