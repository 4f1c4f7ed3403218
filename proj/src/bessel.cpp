#include "spectral/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace spz {

namespace {

constexpr double kEps = 1e-16;
constexpr double kFpMin = 1e-300;
constexpr int kMaxIt = 1000000;
constexpr double kXMin = 2.0;

// coefficients of 1/Gamma(z) = sum c_k z^k
constexpr std::array<double, 26> kRecipGamma = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001};

// gam1 = (1/G(1-x) - 1/G(1+x))/(2x), gam2 = (1/G(1-x) + 1/G(1+x))/2, |x| <= 1/2
void temme_gammas(double x, double& gam1, double& gam2, double& gampl, double& gammi) {
    // 1/Gamma(1+x) = sum_{k>=1} c_k x^{k-1}
    gam1 = 0.0;
    gam2 = 0.0;
    double xp = 1.0;
    for (int k = 1; k <= 26; ++k) {
        const double ck = kRecipGamma[k - 1];
        const int pw = k - 1;
        if (pw % 2 == 0) {
            gam2 += ck * xp;
        } else {
            // odd powers enter -gam1 * x
            gam1 -= ck * xp / x;
        }
        xp *= x;
    }
    if (x == 0.0) {
        gam1 = -kRecipGamma[1];
    }
    gampl = gam2 - x * gam1;  // 1/Gamma(1+x)
    gammi = gam2 + x * gam1;  // 1/Gamma(1-x)
}

void bessjy_nonneg(double x, double xnu, double& rj, double& ry) {
    const int nl = (x < kXMin ? static_cast<int>(xnu + 0.5)
                              : std::max(0, static_cast<int>(xnu - x + 1.5)));
    const double xmu = xnu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    const double w = xi2 / kPi;
    int isign = 1;
    double h = xnu * xi;
    if (h < kFpMin) h = kFpMin;
    double b = xi2 * xnu, d = 0.0, c = h;
    int i;
    for (i = 0; i < kMaxIt; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = b - 1.0 / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = c * d;
        h = del * h;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) <= kEps) break;
    }
    if (i >= kMaxIt) throw std::runtime_error("bessel_jy: CF1 did not converge");
    double rjl = isign * kFpMin;
    double rjpl = h * rjl;
    const double rjl1 = rjl;
    double fact = xnu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const double rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if (rjl == 0.0) rjl = kEps;
    const double f = rjpl / rjl;
    double rjmu, rymu, rymup, ry1;
    if (x < kXMin) {
        const double x2 = 0.5 * x;
        const double pimu = kPi * xmu;
        const double fct = (std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu));
        d = -std::log(x2);
        double e = xmu * d;
        const double fct2 = (std::abs(e) < kEps ? 1.0 : std::sinh(e) / e);
        double gam1, gam2, gampl, gammi;
        temme_gammas(xmu, gam1, gam2, gampl, gammi);
        double ff = 2.0 / kPi * fct * (gam1 * std::cosh(e) + gam2 * fct2 * d);
        e = std::exp(e);
        double p = e / (gampl * kPi);
        double q = 1.0 / (e * kPi * gammi);
        const double pimu2 = 0.5 * pimu;
        const double fct3 = (std::abs(pimu2) < kEps ? 1.0 : std::sin(pimu2) / pimu2);
        const double r = kPi * pimu2 * fct3 * fct3;
        c = 1.0;
        d = -x2 * x2;
        double sum = ff + r * q;
        double sum1 = p;
        for (i = 1; i <= kMaxIt; ++i) {
            ff = (i * ff + p + q) / (i * i - xmu2);
            c *= d / i;
            p /= (i - xmu);
            q /= (i + xmu);
            const double del = c * (ff + r * q);
            sum += del;
            const double del1 = c * p - i * del;
            sum1 += del1;
            if (std::abs(del) < (1.0 + std::abs(sum)) * kEps) break;
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        double a = 0.25 - xmu2;
        double p = -0.5 * xi;
        double q = 1.0;
        const double br = 2.0 * x;
        double bi = 2.0;
        double fct = a * xi / (p * p + q * q);
        double cr = br + q * fct;
        double ci = bi + p * fct;
        double den = br * br + bi * bi;
        double dr = br / den;
        double di = -bi / den;
        double dlr = cr * dr - ci * di;
        double dli = cr * di + ci * dr;
        double temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for (i = 1; i < kMaxIt; ++i) {
            a += 2 * i;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if (std::abs(dr) + std::abs(di) < kFpMin) dr = kFpMin;
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if (std::abs(cr) + std::abs(ci) < kFpMin) cr = kFpMin;
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (std::abs(dlr - 1.0) + std::abs(dli) <= kEps) break;
        }
        const double gam = (p - f) / q;
        rjmu = std::sqrt(w / ((p - f) * gam + q));
        rjmu = std::copysign(rjmu, rjl);
        rymu = rjmu * gam;
        rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }
    rj = rjl1 * (rjmu / rjl);
    for (i = 1; i <= nl; ++i) {
        const double rytemp = (xmu + i) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    ry = rymu;
}

double bessk_nonneg(double x, double xnu) {
    if (x > 705.0) return 0.0;
    const int nl = static_cast<int>(xnu + 0.5);
    const double xmu = xnu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    double rkmu, rk1;
    int i;
    if (x < kXMin) {
        const double x2 = 0.5 * x;
        const double pimu = kPi * xmu;
        const double fct = (std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu));
        double d = -std::log(x2);
        double e = xmu * d;
        const double fct2 = (std::abs(e) < kEps ? 1.0 : std::sinh(e) / e);
        double gam1, gam2, gampl, gammi;
        temme_gammas(xmu, gam1, gam2, gampl, gammi);
        double ff = fct * (gam1 * std::cosh(e) + gam2 * fct2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / gampl;
        double q = 0.5 / (e * gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        for (i = 1; i <= kMaxIt; ++i) {
            ff = (i * ff + p + q) / (i * i - xmu2);
            c *= d / i;
            p /= (i - xmu);
            q /= (i + xmu);
            const double del = c * ff;
            sum += del;
            const double del1 = c * (p - i * ff);
            sum1 += del1;
            if (std::abs(del) < std::abs(sum) * kEps) break;
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        double b = 2.0 * (1.0 + x);
        double d = 1.0 / b;
        double h = d, delh = d;
        double q1 = 0.0, q2 = 1.0;
        const double a1 = 0.25 - xmu2;
        double q = a1, c = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        for (i = 1; i < kMaxIt; ++i) {
            a -= 2 * i;
            c = -a * c / (i + 1.0);
            const double qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            const double dels = q * delh;
            s += dels;
            if (std::abs(dels / s) <= kEps) break;
        }
        h = a1 * h;
        rkmu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }
    for (i = 1; i <= nl; ++i) {
        const double rktemp = (xmu + i) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    return rkmu;
}

}  // namespace

void bessel_jy(double nu, double x, double& j, double& y) {
    if (!(x > 0.0)) throw std::domain_error("bessel_jy: x must be positive");
    if (nu >= 0.0) {
        bessjy_nonneg(x, nu, j, y);
        return;
    }
    double jp, yp;
    bessjy_nonneg(x, -nu, jp, yp);
    const double c = std::cos(kPi * nu), s = std::sin(kPi * nu);
    const double ri = std::round(nu);
    if (std::abs(nu - ri) < 1e-15) {
        const double sg = (static_cast<long long>(ri) % 2 == 0) ? 1.0 : -1.0;
        j = sg * jp;
        y = sg * yp;
        return;
    }
    j = c * jp - s * yp;
    y = s * jp + c * yp;
}

double bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k: x must be positive");
    return bessk_nonneg(x, std::abs(nu));
}

double bessel(BesselKind kind, double nu, double x) {
    if (kind == BesselKind::K) return bessel_k(nu, x);
    double j, y;
    bessel_jy(nu, x, j, y);
    return kind == BesselKind::J ? j : y;
}

}  // namespace spz
