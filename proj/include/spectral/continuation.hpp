#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spectral/bases.hpp"
#include "spectral/densities.hpp"
#include "spectral/pertzeta.hpp"
#include "spectral/specfun.hpp"

namespace spz {

struct PiecewiseParams {
    double v1 = 1.0;
    double v2 = 1.0;
    double r = 0.5;
    double R = 1.0;

    double alpha() const { return r / v1 + (R - r) / v2; }
    double beta() const { return r / v1 - (R - r) / v2; }
    double delta_upsilon() const { return (v1 - v2) / (v1 + v2); }
    DensitySpec density() const { return make_piecewise(v1, v2, r, R); }
    // v1 = 1 + dv, v2 = 1 - dv and the segment lengths fixed by alpha, beta
    static PiecewiseParams from_alpha_beta(double alpha, double beta, double dv);
    void validate() const;
};

struct LaurentExpansion {
    double s0 = 0.0;
    double coeff_minus1 = 0.0;
    double coeff_0 = 0.0;
    double coeff_1 = 0.0;
    double eval(double s) const { return coeff_minus1 / (s - s0) + coeff_0 + coeff_1 * (s - s0); }
};

// simple-pole Laurent data from symmetric probes s0 +- h, s0 +- 2h with Richardson
LaurentExpansion laurent_probe(const std::function<cplx(double)>& f, double s0, double h = 1e-3);
// f(s) away from a simple pole at s0, its finite part and residue at s0
ZetaValue zeta_from_function(const std::function<cplx(double)>& f, double s, bool pole_at_s,
                             const std::string& method);

// first-order closed forms (complex arithmetic, imaginary residue reported)
ZetaValue piecewise_zeta(BC bc, double s, const PiecewiseParams& p);
double piecewise_casimir(BC bc, const PiecewiseParams& p);
// exact Z(1) for DD, NN, DN, PP
double piecewise_sumrule1(BC bc, const PiecewiseParams& p);

SpecialFnResult psi_aux(double a);
ZetaValue sinusoidal_zeta(double s, double eta, double L);
LaurentExpansion sinusoidal_laurent(double eta, double L);
LaurentExpansion sinusoidal_laurent_numeric(double eta, double L);

// 2 sigma_bar^s (1 + (s/2L) int [Sigma/sigma_bar - 1]) pi^{-2s} (2L)^{2s} zeta(2s)
ZetaValue dd_plus_nn_zeta(double s, const DensitySpec& d);

struct DivergenceReport {
    bool finite = true;
    int order = 0;         // lowest odd derivative order whose endpoint values differ, 0 if none
    double jump1 = 0.0;    // dSigma'(L) - dSigma'(-L)
    double jump3 = 0.0;
    double residue = 0.0;  // first-order residue of Z at s = -1/2
    std::string warning;
};
DivergenceReport divergence_check(const DensitySpec& d);

SpecialFnResult oscillating_phi(double s, double eps_bar);
ZetaValue oscillating_zeta(double s, double eta, double eps_bar, double ell, double L);
ZetaValue staircase_zeta(double s, double eta, double eps_bar, double ell, double L, int N);
double fourier_sumrule1(const std::vector<double>& a, double Delta, double L, double M);

ZetaValue square_zeta(double s, double L);
// g of the square of side 2L
double square_g(double L = 1.0);
double deformed_square_g(double alpha, double L = 1.0);
// g from the diagonal of a square-basis table, Richardson in the table size
double domain_g(const MatrixElementTable& table, double area);

// Z(2)^(diag) from the closed-form inner sums
double deformed_square_z2_diag(double alpha, double L = 1.0);
double annulus_z2_diag(double r);

double annulus_delta_z1(double r);

ZetaValue kirsten_zeta_c(double L2, double L3, double s);
ZetaValue thin_annulus_zeta(BC bc, double s, double r);
enum class Polarization { TE, TM, EM };
double thin_annulus_casimir(Polarization mode, double r);

ZetaValue cylinder_lift(const std::function<ZetaValue(double)>& z2d, double s);
struct CylinderResult {
    double closed_form = 0.0;
    double numeric = 0.0;
    double rel_diff = 0.0;
    bool stable = true;
};
CylinderResult cylinder_casimir(double r);

}  // namespace spz
