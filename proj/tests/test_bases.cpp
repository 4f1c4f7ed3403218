#include "doctest.h"
#include "spectral/bases.hpp"
#include "spectral/quadrature.hpp"
#include "spectral/specfun.hpp"

#include <cmath>
#include <random>

using namespace spz;

namespace {

// Simpson rule with many nodes, independent of the adaptive integrator
template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("eigenvalues") {
    CHECK(eigenvalue(basis_1d(BC::DD, 0.5), {1, 0, 1}) == doctest::Approx(kPi * kPi));
    CHECK(eigenvalue(basis_1d(BC::NN, 0.5), {0, 0, 1}) == 0.0);
    const double L = 0.37;
    const BasisSpec dp = basis_annulus(BC::DP, std::exp(-2 * L));
    CHECK(eigenvalue(dp, {2, 3, 1}) == doctest::Approx(4 * kPi * kPi / (4 * L * L) + 9));
    CHECK(eigenvalue(dp, {2, 3, 2}) == eigenvalue(dp, {2, 3, 1}));
    const BasisSpec dd = basis_1d(BC::DD, L), nn = basis_1d(BC::NN, L);
    for (int n = 1; n <= 30; ++n) {
        CHECK(eigenvalue(nn, {n, 0, 1}) == eigenvalue(dd, {2 * n, 0, 1}));
        CHECK(eigenvalue(nn, {n, 0, 2}) == eigenvalue(dd, {2 * n - 1, 0, 1}));
    }
    CHECK_THROWS_AS(eigenvalue(dd, {0, 0, 1}), BasisError);
    CHECK_THROWS_AS(eigenvalue(nn, {0, 0, 2}), BasisError);
}

TEST_CASE("eigenfunctions") {
    const BasisSpec dd = basis_1d(BC::DD, 0.5), nn = basis_1d(BC::NN, 0.5);
    CHECK(eigenfunction(dd, {1, 0, 1}, 0.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(eigenfunction(nn, {0, 0, 1}, 0.3) == doctest::Approx(1.0));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(-0.5, 0.5);
    for (int t = 0; t < 20; ++t) {
        const double x = ux(rng);
        const int n = 1 + t % 9;
        const double a = eigenfunction(dd, {2 * n, 0, 1}, x), b = eigenfunction(nn, {n, 0, 1}, x);
        CHECK(a * a + b * b == doctest::Approx(1.0 / 0.5).epsilon(1e-13));
    }
    CHECK_THROWS_AS(eigenfunction(dd, {1, 0, 1}, 0.7), BasisError);
}

TEST_CASE("orthonormality of every basis") {
    const double L = 0.41;
    for (BC bc : {BC::DD, BC::NN, BC::DN, BC::ND, BC::PP}) {
        const BasisSpec b = basis_1d(bc, L);
        const auto modes = enumerate_modes(b, 10, true);
        for (std::size_t i = 0; i < modes.size(); ++i)
            for (std::size_t j = i; j < modes.size(); ++j) {
                auto f = [&](double x) { return eigenfunction(b, modes[i], x) * eigenfunction(b, modes[j], x); };
                const double v = simpson(f, -L, L, 4000);
                INFO(bc_name(bc) << " " << i << "," << j);
                CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
    }
    for (BC bc : {BC::DP, BC::DD2}) {
        const BasisSpec b = basis_annulus(bc, 0.5);
        const auto modes = enumerate_modes(b, 3);
        for (std::size_t i = 0; i < modes.size(); ++i)
            for (std::size_t j = i; j < modes.size(); ++j) {
                auto fx = [&](double x) {
                    return simpson([&](double y) { return eigenfunction(b, modes[i], x, y) * eigenfunction(b, modes[j], x, y); },
                                   -kPi, kPi, 400);
                };
                const double v = simpson(fx, -b.L, b.L, 400);
                CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
    }
    const BasisSpec sq = basis_rectangle(1.0, 0.6);
    const auto modes = enumerate_modes(sq, 3);
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (std::size_t j = i; j < modes.size(); ++j) {
            auto fx = [&](double x) {
                return simpson([&](double y) { return eigenfunction(sq, modes[i], x, y) * eigenfunction(sq, modes[j], x, y); },
                               -0.6, 0.6, 400);
            };
            CHECK(std::abs(simpson(fx, -1.0, 1.0, 400) - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("mode enumeration ordering") {
    const BasisSpec nn = basis_1d(BC::NN, 0.5);
    const auto m = enumerate_modes(nn, 8, true);
    REQUIRE(m.size() == 9);
    for (std::size_t i = 1; i < m.size(); ++i) CHECK(eigenvalue(nn, m[i]) > eigenvalue(nn, m[i - 1]));
    const BasisSpec pp = basis_1d(BC::PP, 0.5);
    const auto p = enumerate_modes(pp, 6);
    CHECK(eigenvalue(pp, p[0]) == eigenvalue(pp, p[1]));
    const BasisSpec dp = basis_annulus(BC::DP, 0.5);
    const auto d = enumerate_modes(dp, 4);
    CHECK(d.size() == 4 * (1 + 2 * 4));
}

TEST_CASE("closed-form matrix elements against quadrature") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> ui(1, 40);
    struct Case {
        DensitySpec d;
        BasisSpec b;
        bool diag_only;
    };
    std::vector<Case> cases = {
        {make_piecewise(1.2, 0.8, 0.35, 1.0), basis_1d(BC::DD, 0.5), false},
        {make_piecewise(0.9, 1.1, 1.3, 2.0), basis_1d(BC::DD, 1.0), false},
        {make_sinusoidal(0.3, 0.5), basis_1d(BC::DD, 0.5), false},
        {make_sinusoidal(0.2, 0.8), basis_1d(BC::DD, 0.8), false},
        {make_borg(0.5), basis_1d(BC::DD, 0.5), true},
        {make_borg(3.0), basis_1d(BC::DD, 0.5), true},
        {make_oscillating(0.1, 2.0 / 101.0, 0.13, 0.5), basis_1d(BC::DD, 0.5), false},
        {make_oscillating(0.3, 0.17, 0.05, 0.5), basis_1d(BC::DD, 0.5), false},
        {make_staircase(make_oscillating(0.1, 2.0 / 101.0, 0.13, 0.5), 50), basis_1d(BC::DD, 0.5), true},
        {make_fourier_periodic({0.2, -0.05}, 0.29, 1.2, 0.5), basis_1d(BC::DD, 0.5), true},
        {make_deformed_square(0.1), basis_rectangle(1.0, 1.0), false},
        {make_deformed_square(0.45), basis_rectangle(1.0, 1.0), false},
        {make_annulus(0.5), basis_annulus(BC::DP, 0.5), false},
        {make_annulus(0.1), basis_annulus(BC::DD2, 0.1), false},
    };
    for (const auto& c : cases) {
        INFO(c.d.id() << " " << bc_name(c.b.bc));
        int checked = 0;
        for (int t = 0; t < 50; ++t) {
            ModeIndex n, m;
            if (c.b.dim == 1) {
                n = {ui(rng), 0, 1};
                m = c.diag_only ? n : ModeIndex{ui(rng), 0, 1};
                if (t < 5 && !c.diag_only) m = {n.nx + 1, 0, 1};
            } else {
                const int k = 1 + t % 6;
                n = {k, 1 + (t / 6) % 5, 1};
                m = (t % 3 == 0) ? n : ((t % 3 == 1) ? ModeIndex{1 + (t * 7) % 6, n.ny, 1} : ModeIndex{n.nx, 1 + (t * 5) % 6, 1});
                if (c.b.bc == BC::DP) {
                    n.u = m.u = 1 + t % 2;
                }
            }
            const auto cf = matrix_element_closed(c.d, c.b, n, m);
            REQUIRE(cf.has_value());
            const double q = matrix_element_quadrature(c.d, c.b, n, m);
            INFO(n.nx << "," << n.ny << " | " << m.nx << "," << m.ny);
            CHECK(std::abs(*cf - q) < 1e-10);
            ++checked;
        }
        CHECK(checked == 50);
    }
}

TEST_CASE("piecewise diagonal for every 1D basis") {
    const DensitySpec pw = make_piecewise(1.2, 0.8, 0.35, 1.0);
    for (BC bc : {BC::DD, BC::NN, BC::DN, BC::ND, BC::PP}) {
        const BasisSpec b = basis_1d(bc, 0.5);
        for (const ModeIndex& i : enumerate_modes(b, 25, true)) {
            INFO(bc_name(bc) << " " << i.nx << "," << i.u);
            const auto cf = matrix_element_closed(pw, b, i, i);
            REQUIRE(cf.has_value());
            CHECK(std::abs(*cf - matrix_element_quadrature(pw, b, i, i)) < 1e-12);
        }
    }
}

TEST_CASE("matrix element examples") {
    const DensitySpec s = make_sinusoidal(0.4, 0.5);
    const BasisSpec dd = basis_1d(BC::DD, 0.5);
    CHECK(matrix_element(s, dd, {1, 0, 1}, {2, 0, 1}).value == doctest::Approx(-0.5 * 0.4));
    CHECK(matrix_element(s, dd, {1, 0, 1}, {2, 0, 1}).provenance == Provenance::closed_form);
    const double a = 0.1, A = 4.0;
    const DensitySpec ds = make_deformed_square(a);
    const double ref = 1 - 6 * A * a * a * 2 / (kPi * kPi * (2 * A * a * a + 3));
    CHECK(matrix_element(ds, basis_rectangle(1, 1), {1, 1, 1}, {1, 1, 1}).value == doctest::Approx(ref).epsilon(1e-14));
    // quadrature fallback for a bc without a tabulated closed form
    const DensitySpec pw = make_piecewise(1.2, 0.8, 0.35, 1.0);
    const MatrixElement e = matrix_element(pw, basis_1d(BC::NN, 0.5), {2, 0, 1}, {3, 0, 2});
    CHECK(e.provenance == Provenance::quadrature);
}

TEST_CASE("W matrix elements") {
    const BasisSpec dd = basis_1d(BC::DD, 0.5);
    const DensitySpec b0 = make_borg(1e-9);
    for (int n = 1; n <= 5; ++n) {
        CHECK(w_matrix_element(b0, dd, n, n).value == doctest::Approx(kPi * kPi * n * n).epsilon(1e-7));
        CHECK(std::abs(w_matrix_element(b0, dd, n, n + 1).value) < 1e-6);
    }
    for (double al : {0.3, -0.4, 2.0}) {
        const DensitySpec b = make_borg(al);
        for (int n = 1; n <= 6; ++n)
            for (int m = 1; m <= 6; ++m) {
                const double cf = w_matrix_element(b, dd, n, m).value;
                CHECK(cf == doctest::Approx(w_matrix_element_quadrature(b, dd, n, m)).epsilon(1e-11));
                CHECK(cf == doctest::Approx(w_matrix_element(b, dd, m, n).value).epsilon(1e-14));
            }
    }
}

TEST_CASE("matrix tables") {
    const DensitySpec pw = make_piecewise(1.2, 0.8, 0.35, 1.0);
    const BasisSpec dd = basis_1d(BC::DD, 0.5);
    const auto t = build_table(pw, dd, enumerate_modes(dd, 30));
    CHECK(t.is_symmetric(0.0));
    for (double v : t.entries) CHECK(std::isfinite(v));
    const auto t2 = MatrixElementTable::from_json(t.to_json());
    CHECK(t2.entries == t.entries);
    CHECK(t2.modes == t.modes);
    CHECK(t2.basis.bc == BC::DD);
    for (BC bc : {BC::DD, BC::NN, BC::DN, BC::ND}) {
        const BasisSpec b = basis_1d(bc, 0.5);
        const auto tm = build_table_moments(pw, b, 20, true);
        const auto tq = build_table(pw, b, tm.modes, {true});
        for (int i = 0; i < tm.N(); ++i)
            for (int j = 0; j < tm.N(); ++j) CHECK(std::abs(tm(i, j) - tq(i, j)) < 1e-12);
    }
    const DensitySpec sn = make_sinusoidal(0.3, 0.5);
    const auto ts = build_table_moments(sn, dd, 40);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) {
            const double ref = (i == j) ? 1.0 : (std::abs(i - j) == 1 ? -0.15 : 0.0);
            CHECK(std::abs(ts(i, j) - ref) < 1e-13);
        }
}

TEST_CASE("diagonal tail approaches the mean with the parity-dependent power") {
    const double L = 0.5;
    const BasisSpec dd = basis_1d(BC::DD, L);
    // x^2 has unequal endpoint slopes: O(1/n^2); x^4/2 - L^2 x^2 has equal slopes: O(1/n^4);
    // an odd perturbation leaves the diagonal exactly at the mean
    const DensitySpec even = make_polynomial({1.0, 0.0, 0.5}, L);
    const DensitySpec flat = make_polynomial({1.0, 0.0, -L * L, 0.0, 0.5}, L);
    const DensitySpec odd = make_polynomial({1.0, 0.0, 0.0, 0.5}, L);
    auto slope = [&](const DensitySpec& d) {
        const double mean = mass(d) / (2 * L);
        const double d1 = std::abs(matrix_element_quadrature(d, dd, {40, 0, 1}, {40, 0, 1}) - mean);
        const double d2 = std::abs(matrix_element_quadrature(d, dd, {80, 0, 1}, {80, 0, 1}) - mean);
        return std::log(d1 / d2) / std::log(2.0);
    };
    CHECK(slope(even) == doctest::Approx(2.0).epsilon(0.02));
    CHECK(slope(flat) == doctest::Approx(4.0).epsilon(0.05));
    for (int n : {5, 40}) CHECK(std::abs(matrix_element_quadrature(odd, dd, {n, 0, 1}, {n, 0, 1}) - 1.0) < 1e-14);
}

TEST_CASE("polynomial diagonal closed form") {
    const DensitySpec d = make_polynomial({1.0, 0.3, 0.1, -0.2, 0.05}, 0.7);
    const BasisSpec b = basis_1d(BC::DD, 0.7);
    for (int n : {1, 2, 7, 40}) {
        const MatrixElement e = matrix_element(d, b, {n, 0, 1}, {n, 0, 1});
        CHECK(e.provenance == Provenance::closed_form);
        CHECK(e.value == doctest::Approx(matrix_element_quadrature(d, b, {n, 0, 1}, {n, 0, 1})).epsilon(1e-13));
    }
}

TEST_CASE("Borg diagonal at large index") {
    const BasisSpec b = basis_1d(BC::DD, 0.5);
    for (double a : {0.2, 1.0, 5.0, -0.5}) {
        const DensitySpec d = make_borg(a);
        for (int n : {1, 2, 9, 10, 11, 49, 50, 51, 260}) {
            const double q = matrix_element_quadrature(d, b, {n, 0, 1}, {n, 0, 1});
            INFO(a, " ", n);
            CHECK(matrix_element(d, b, {n, 0, 1}, {n, 0, 1}).value == doctest::Approx(q).epsilon(1e-12));
        }
    }
    // large-n values against an independent high-precision evaluation of the Ci/Si form
    CHECK(matrix_element(make_borg(1.0), b, {1000, 0, 1}, {1000, 0, 1}).value ==
          doctest::Approx(1.1666662740473857).epsilon(1e-15));
    CHECK(matrix_element(make_borg(5.0), b, {1000, 0, 1}, {1000, 0, 1}).value ==
          doctest::Approx(2.3888706537676945).epsilon(1e-15));
}
