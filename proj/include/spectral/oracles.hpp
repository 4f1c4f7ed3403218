#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectral/bases.hpp"
#include "spectral/continuation.hpp"
#include "spectral/densities.hpp"
#include "spectral/pertzeta.hpp"

namespace spz {

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OracleMethod { roots, galerkin, collocation, bessel_roots };
std::string method_name(OracleMethod m);

// 2D: E_n ~ 4 pi n / A + (P / A) sqrt(4 pi n / A)
// 1D: area holds the optical length sigma(L) = int sqrt(Sigma), E_n ~ ((n + shift) pi / sigma(L))^2
struct WeylData {
    int dim = 2;
    double area = 0.0;
    double perimeter = 0.0;
    double shift = 0.0;

    double eigenvalue(double n) const;
    // expected number of eigenvalues below lambda
    double count(double lambda) const;
};

struct SpectrumOracle {
    std::vector<double> eigenvalues;
    OracleMethod method = OracleMethod::roots;
    std::optional<WeylData> weyl;
    // galerkin: lowest eigenvalues at the full table size before extrapolation
    std::vector<double> raw;

    int count() const { return int(eigenvalues.size()); }
    std::string to_csv() const;
    static SpectrumOracle from_csv(const std::string& text);
};

// Weyl data from the density over the basis box, perimeter as the boundary integral of sqrt(Sigma)
WeylData weyl_data(const DensitySpec& d, const BasisSpec& b);

// roots of sin(alpha w) + dv sin(beta w) = 0 by sign scan and bisection, E = w^2
SpectrumOracle piecewise_roots(const PiecewiseParams& p, int count);

// diag(eps) c = E M c on the table, Richardson over N, N/2, N/4; needs N >= 4 count
SpectrumOracle galerkin_spectrum(const MatrixElementTable& table, int count,
                                 const std::optional<WeylData>& weyl = std::nullopt);

// k-roots of J_m(k) Y_m(kr) - Y_m(k) J_m(kr) with k <= kmax for one order m
std::vector<double> annulus_cross_roots(double r, int m, double kmax);
// first n_max roots per order m <= m_max (m >= 1 twice), cut to the completeness horizon
SpectrumOracle annulus_bessel_roots(double r, int m_max, int n_max);
// every Dirichlet eigenvalue E < largest needed for at least `count` modes, all orders
SpectrumOracle annulus_bessel_spectrum(double r, int count);

// sine pseudospectral discretization of (-Lap) psi = E Sigma psi on the square box of the density
SpectrumOracle collocation_2d(const DensitySpec& d, int grid_n = 60, int count = 400);

// exact partial sum over n_exact modes plus the Weyl tail
ZetaValue zeta_from_spectrum(double s, const SpectrumOracle& o, int n_exact);
// Weyl-only sum over every mode
ZetaValue zeta_weyl(double s, const WeylData& w);

}  // namespace spz
