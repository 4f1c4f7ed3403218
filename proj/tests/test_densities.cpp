#include "doctest.h"
#include "spectral/densities.hpp"
#include "spectral/specfun.hpp"

#include <cmath>

using namespace spz;

namespace {

// plain midpoint rule, independent of the adaptive integrator
template <class F>
double midpoint(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
    return s * h;
}

}  // namespace

TEST_CASE("density catalog evaluation") {
    const DensitySpec pw = make_piecewise(1.0, 1.0, 0.5, 1.0);
    for (double x : {-0.4, 0.0, 0.3}) CHECK(pw(x) == doctest::Approx(1.0));
    CHECK(make_borg(0.5)(-0.5) == doctest::Approx(2.25));
    const DensitySpec pw2 = make_piecewise(2.0, 1.0, 0.25, 1.0);
    CHECK(pw2(-0.45) == doctest::Approx(0.25));
    CHECK(pw2(0.1) == doctest::Approx(1.0));
    CHECK(make_sinusoidal(0.3, 0.5)(0.5) == doctest::Approx(1.3));
}

TEST_CASE("density validation") {
    CHECK_THROWS_AS(make_sinusoidal(1.0, 0.5), DensityError);
    CHECK_THROWS_AS(make_borg(-1.0), DensityError);
    CHECK_THROWS_AS(make_piecewise(-1.0, 1.0, 0.5, 1.0), DensityError);
    CHECK_THROWS_AS(make_piecewise(1.0, 1.0, 1.5, 1.0), DensityError);
    CHECK_THROWS_AS(make_deformed_square(0.6), DensityError);
    CHECK_THROWS_AS(make_annulus(1.0), DensityError);
    CHECK_THROWS_AS(make_staircase(make_sinusoidal(0.1, 0.5), 0), DensityError);
    CHECK_THROWS_AS(make_density("nosuch", {}), DensityError);
    CHECK_THROWS_AS(make_polynomial({-1.0, 0.0, 1.0}, 0.5), DensityError);
    CHECK_NOTHROW(make_density("sinusoidal", {{"eta", 0.2}}));
}

TEST_CASE("sigma functional") {
    const DensitySpec pw = make_piecewise(1.3, 0.8, 0.3, 1.0);
    CHECK(sigma_functional(pw) == doctest::Approx(0.3 / 1.3 + 0.7 / 0.8).epsilon(1e-14));
    CHECK(sigma_functional_quadrature(pw) == doctest::Approx(sigma_functional(pw)).epsilon(1e-12));
    CHECK(sigma_functional(make_constant(2.0, 0.5)) == doctest::Approx(std::sqrt(2.0)));
    for (double ell : {0.0, 0.13, 0.31}) {
        const DensitySpec osc = make_oscillating(0.7, 2.0 / 101.0, ell, 0.5);
        const double ref = midpoint([&](double x) { return std::sqrt(osc(x)); }, -0.5, 0.5, 400000);
        CHECK(sigma_functional(osc) == doctest::Approx(ref).epsilon(1e-10));
    }
    const DensitySpec osc2 = make_oscillating(0.4, 0.3, 0.05, 0.7);
    CHECK(sigma_functional(osc2) == doctest::Approx(sigma_functional_quadrature(osc2)).epsilon(1e-11));
}

TEST_CASE("mass closed forms match quadrature") {
    std::vector<DensitySpec> all = {
        make_constant(1.7, 0.5),
        make_piecewise(1.2, 0.9, 0.4, 1.0),
        make_sinusoidal(0.4, 0.5),
        make_borg(0.7),
        make_borg(0.0),
        make_oscillating(0.5, 2.0 / 101.0, 0.1, 0.5),
        make_fourier_periodic({0.2, -0.1}, 0.37, 1.3, 0.5),
        make_deformed_square(0.3),
        make_annulus(0.5),
        make_staircase(make_sinusoidal(0.3, 0.5), 7),
        make_polynomial({1.0, 0.2, 0.5}, 0.5),
    };
    for (const auto& d : all) {
        INFO(d.id());
        CHECK(mass(d) == doctest::Approx(mass_quadrature(d)).epsilon(1e-10));
    }
    CHECK(mass(make_fourier_periodic({0.2, -0.1}, 0.37, 1.3, 0.5)) == doctest::Approx(1.3));
    CHECK(mass(make_annulus(0.3)) == doctest::Approx(kPi * (1 - 0.09)).epsilon(1e-12));
    CHECK(mass_quadrature(make_deformed_square(0.5)) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("staircase sampling") {
    const DensitySpec c = make_constant(1.4, 0.5);
    const DensitySpec st = make_staircase(c, 9);
    for (double x : {-0.49, 0.0, 0.2}) CHECK(st(x) == doctest::Approx(1.4));
    const DensitySpec s = make_sinusoidal(0.5, 0.5);
    double prev = 1e9;
    for (int N : {10, 20, 40, 80}) {
        const DensitySpec sn = make_staircase(s, N);
        double sup = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double x = -0.5 + i / 4000.0;
            sup = std::max(sup, std::abs(sn(x) - s(x)));
        }
        CHECK(sup < 0.5 * 0.5 * kPi * (1.0 / N) * 1.01);
        CHECK(sup < prev);
        prev = sup;
    }
}

TEST_CASE("perturbation split") {
    const DensitySpec c = make_constant(2.0, 0.5);
    const PerturbationSplit pc = perturbation_split(c);
    CHECK(pc.sigma_bar == doctest::Approx(2.0));
    CHECK(std::abs(pc.delta(0.1, 0.0)) < 1e-14);
    const DensitySpec pw = make_piecewise(1.1, 0.9, 0.3, 1.0);
    const double a = 0.3 / 1.1 + 0.7 / 0.9;
    CHECK(perturbation_split(pw).sigma_bar == doctest::Approx(a * a));
    CHECK(perturbation_split(make_deformed_square(0.2)).sigma_bar == doctest::Approx(1.0));
    CHECK_FALSE(perturbation_split(make_sinusoidal(0.1, 0.5)).first_order_doubtful);
    CHECK(perturbation_split(make_piecewise(3.0, 0.5, 0.5, 1.0)).first_order_doubtful);
}

TEST_CASE("conformal densities") {
    const double a = 0.1;
    CHECK(conformal_density(ConformalMap::deformed_square, a, 0.3, -0.2) ==
          doctest::Approx(3 * (4 * a * a * 0.04 + std::pow(2 * a * 0.3 + 1, 2)) / (8 * a * a + 3)));
    const double r = 0.5;
    const double L = -std::log(r) / 2;
    CHECK(conformal_density(ConformalMap::annulus, r, 0.1, 2.0) == doctest::Approx(std::exp(2 * (0.1 - L))));
    CHECK(deformed_square_perimeter(0.0) == doctest::Approx(8.0));
    CHECK(deformed_square_perimeter(0.3) > 8.0);
    // thin annulus linearization against the exact density
    const double rt = 0.99, Lt = -std::log(rt) / 2;
    for (double x : {-Lt, 0.0, Lt}) {
        CHECK(std::abs(thin_annulus_delta(rt, x) - (std::exp(2 * (x - Lt)) - 1.0)) < 10 * Lt * Lt);
    }
}

TEST_CASE("fourier mean fixed by the mass") {
    const std::vector<double> aj = {0.3, 0.1, -0.05};
    const double Delta = 0.29, M = 1.7, L = 0.5;
    const DensitySpec d = make_fourier_periodic(aj, Delta, M, L);
    const double m = midpoint([&](double x) { return d(x); }, -L, L, 200000);
    CHECK(m == doctest::Approx(M).epsilon(1e-9));
}
