#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spectral/bases.hpp"
#include "spectral/densities.hpp"
#include "spectral/specfun.hpp"

namespace spz {

struct ZetaValue {
    double s = 0.0;
    cplx value{0.0, 0.0};
    int pole_order = 0;
    double residue = 0.0;
    double trunc_error = 0.0;
    std::string method;

    double re() const { return value.real(); }
    // |Im| below tol relative to max(1, |Re|)
    bool imag_negligible(double tol = 1e-9) const;
    // {s, re, im, pole_order, residue, trunc_error}
    std::string to_json() const;
};

struct HeatKernelValue {
    double t = 0.0;
    double value = 0.0;
    int order = 1;
    double first = 0.0;
    double second = 0.0;
};

struct PertOptions {
    double sigma_bar = 1.0;  // asymptotic diagonal value <n|Sigma|n>
    bool tail = true;
    int band = 64;           // 1D second order keeps |i-j| <= band, -1 for all pairs
    bool parallel = true;
};

// sigma_bar = mean of the density over the box
PertOptions pert_options_for(const DensitySpec& d);

// sum over every mode of the basis of eps^{-s}, continued in s
ZetaValue homogeneous_zeta(const BasisSpec& b, double s);

// (eps_k^{1-s} - eps_n^{1-s})/(eps_k - eps_n), limit (1-s) eps^{-s} at degeneracy
double divided_difference(double ek, double en, double s);
// (e^{-t en} - e^{-t ek})/(en - ek), limit -t e^{-t en}
double heat_divided_difference(double en, double ek, double t);

ZetaValue z_diag(double s, const MatrixElementTable& table, const PertOptions& opt = {});
ZetaValue z_second_order(double s, const MatrixElementTable& table, const PertOptions& opt = {});
// z_diag + z_second_order
ZetaValue z_perturbative(double s, const MatrixElementTable& table, const PertOptions& opt = {});

// first-order resummed zeta: sigma_bar^s sum (1 + s <n|Sigma/sigma_bar - 1|n>) eps^{-s}, s > d/2
ZetaValue z_first_order(double s, const MatrixElementTable& table, const PertOptions& opt = {});

struct HeatOptions {
    double w_bar = 1.0;  // asymptotic <n|1/Sigma|n>
    bool tail = true;
    int band = -1;
    bool parallel = true;
};
HeatOptions heat_options_for(const DensitySpec& d);

// w_table holds <n|W|m> in a 1D basis
HeatKernelValue heat_kernel(double t, const MatrixElementTable& w_table, int order, const HeatOptions& opt = {});
// homogeneous reference kernel sum exp(-w_bar eps_n t) over all modes
double heat_kernel_reference(double t, const BasisSpec& b, double w_bar);
// (t^2/2) sum_{k != n} W_nk^2 over the table
double heat_small_t_second_order(double t, const MatrixElementTable& w_table);

// numeric Mellin transform of the perturbative heat kernel; the homogeneous reference
// is subtracted and its zeta added back analytically
ZetaValue mellin_zeta(double s, const MatrixElementTable& w_table, int order, const HeatOptions& opt = {});
// the same quantity summed term by term
ZetaValue heat_series_zeta(double s, const MatrixElementTable& w_table, int order, const HeatOptions& opt = {});

struct CutoffResult {
    double c2 = 0.0;  // coefficient of 1/a^2
    double c0 = 0.0;  // finite part
    double c1 = 0.0;
    double log_coeff = 0.0;  // coefficient of log(a) when the plain fit fails
    double fit_residual = 0.0;
    bool removable = true;
    double sigma_bar = 1.0;
    int modes = 0;
    std::vector<double> a;
    std::vector<double> F;
};

// F(a) = (1/2) sum sqrt(eps_n/sigma_bar) [1 - <n|Sigma/sigma_bar - 1|n>/2] exp(-a k_n), k_n = sqrt(eps_n) 2L/pi
CutoffResult cutoff_casimir(const DensitySpec& d, const BasisSpec& b, const std::vector<double>& a_sequence = {},
                            bool parallel = true);
// geometric grid of n values in [lo, hi]
std::vector<double> geometric_grid(double lo, double hi, int n);

}  // namespace spz
