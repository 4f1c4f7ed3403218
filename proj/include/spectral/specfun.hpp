#pragma once

#include <complex>
#include <stdexcept>

namespace spz {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kCatalan = 0.91596559417721901505460351493238411;
constexpr double kPoleTol = 1e-9;

struct SpecialFnResult {
    cplx value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    bool is_pole = false;
    double re() const { return value.real(); }
};

class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DivergenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// gamma family
SpecialFnResult gamma_fn(double s);
double lgamma_abs(double s);
SpecialFnResult beta_fn(double a, double b);
double digamma(double x);
double harmonic(double x);

// zeta family
SpecialFnResult riemann_zeta(double s);
SpecialFnResult riemann_zeta(cplx s);
SpecialFnResult hurwitz_zeta(double s, double a);
double dirichlet_beta(double s);
double stieltjes_gamma1(double a);

// Li_nu(e^{i theta})
cplx polylog_unit_circle(double nu, double theta);
// Li_nu(e^{i theta}) by the raw series, nu > 1 only
cplx polylog_series(double nu, double theta);
// Phi(e^{i theta}, s, a)
cplx lerch_phi(double theta, double s, double a);
cplx lerch_phi(cplx z, double s, double a);
cplx lerch_phi_series(double theta, double s, double a);

// Bessel functions of real order
enum class BesselKind { J, Y, K };
void bessel_jy(double nu, double x, double& j, double& y);
double bessel_k(double nu, double x);
double bessel(BesselKind kind, double nu, double x);

// theta_3(0, e^{-pi^2 t})
double jacobi_theta3(double t);
double d_dt_theta3(double t);

struct SiCi {
    double si;
    double ci;
};
SiCi sici(double x);
// Si(b) - Si(a) and Ci(b) - Ci(a) without loss of the pi/2 offset at large arguments
SiCi sici_diff(double a, double b);

double elliptic_e_incomplete(double phi, double m);

// B(z, a, b) = int_0^z t^{a-1} (1-t)^{b-1} dt
cplx incomplete_beta_complex(double z, cplx a, double b);

}  // namespace spz
