#pragma once

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace spz {

enum class DensityKind {
    constant,
    piecewise,
    sinusoidal,
    borg,
    oscillating,
    fourier_periodic,
    deformed_square,
    annulus_map,
    staircase,
    polynomial
};

class DensityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct DensitySpec {
    DensityKind kind = DensityKind::constant;
    int dim = 1;
    double L = 0.5;   // half width in x
    double Ly = 0.5;  // half width in y
    // kind-specific parameters, see the make_* factories
    std::array<double, 4> p{};
    std::vector<double> coeffs;  // fourier a_j (j >= 1) or polynomial c_k
    std::shared_ptr<const DensitySpec> inner;
    int cells = 0;

    double operator()(double x, double y = 0.0) const;
    // d/dx of the density in 1D (analytic where available)
    double dx(double x) const;
    std::string id() const;
    // interior x-points where the density or its derivatives jump, or period edges
    std::vector<double> breakpoints() const;
};

std::string kind_name(DensityKind k);
DensityKind kind_from_name(const std::string& name);

DensitySpec make_constant(double value, double L, int dim = 1);
// segment of length r with velocity v1 on the left of a string of length R
DensitySpec make_piecewise(double v1, double v2, double r, double R);
DensitySpec make_sinusoidal(double eta, double L);
DensitySpec make_borg(double alpha);
// 2 + eta sin(2 pi (x + ell)/eps), eps = 2 L eps_bar
DensitySpec make_oscillating(double eta, double eps_bar, double ell, double L);
// a0/2 + sum a_j cos(2 pi j x / Delta), a0 fixed by the total mass M
DensitySpec make_fourier_periodic(const std::vector<double>& a, double Delta, double M, double L);
DensitySpec make_deformed_square(double alpha, double L = 1.0);
DensitySpec make_annulus(double r);
DensitySpec make_staircase(const DensitySpec& inner, int N);
DensitySpec make_polynomial(const std::vector<double>& c, double L);

// generic constructor with named parameters, validated
DensitySpec make_density(const std::string& kind, const std::vector<std::pair<std::string, double>>& params);

// fourier density helper
double fourier_a0(const std::vector<double>& a, double Delta, double M, double L);

// sigma(L) = int sqrt(Sigma) dx over [-L, L]
double sigma_functional(const DensitySpec& d);
double sigma_functional_quadrature(const DensitySpec& d);

// int Sigma over the domain, closed form where available
double mass(const DensitySpec& d);
double mass_quadrature(const DensitySpec& d);

struct PerturbationSplit {
    double sigma_bar = 1.0;
    std::function<double(double, double)> delta;
    double sup_norm = 0.0;
    bool first_order_doubtful = false;
};
PerturbationSplit perturbation_split(const DensitySpec& d);

// conformal maps of the square / annulus rectangle
enum class ConformalMap { deformed_square, annulus };
double conformal_density(ConformalMap map, double param, double x, double y);
// perimeter of the deformed square image, boundary integral of |f'|
double deformed_square_perimeter(double alpha, double L = 1.0);

// first-order thin-annulus approximation of the annulus conformal density
double thin_annulus_delta(double r, double x);

}  // namespace spz
