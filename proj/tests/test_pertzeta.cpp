#include "doctest.h"
#include "spectral/bases.hpp"
#include "spectral/continuation.hpp"
#include "spectral/pertzeta.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <omp.h>

using namespace spz;

namespace {

MatrixElementTable dd_table(const DensitySpec& d, int N) {
    const BasisSpec b = basis_1d(BC::DD, d.L);
    return build_table(d, b, enumerate_modes(b, N));
}

}  // namespace

TEST_CASE("homogeneous zeta per basis") {
    CHECK(homogeneous_zeta(basis_1d(BC::DD, 0.5), 1.0).re() == doctest::Approx(1.0 / 6).epsilon(1e-14));
    const double L = 0.7;
    for (BC bc : {BC::DD, BC::NN, BC::DN, BC::ND, BC::PP}) {
        const BasisSpec b = basis_1d(bc, L);
        double s = 0.0;
        for (const ModeIndex& m : enumerate_modes(b, 200000)) s += std::pow(eigenvalue(b, m), -2.0);
        CHECK(homogeneous_zeta(b, 2.0).re() == doctest::Approx(s).epsilon(1e-12));
    }
    const ZetaValue p = homogeneous_zeta(basis_1d(BC::DD, 0.5), 0.5);
    CHECK(p.pole_order == 1);
    CHECK(p.residue == doctest::Approx(0.5 / kPi).epsilon(1e-8));
    // 2D bases against truncated lattice sums with a crude tail bound
    const BasisSpec dp = basis_annulus(BC::DP, 0.5);
    double s = 0.0;
    for (const ModeIndex& m : enumerate_modes(dp, 400)) s += std::pow(eigenvalue(dp, m), -2.0);
    CHECK(homogeneous_zeta(dp, 2.0).re() == doctest::Approx(s).epsilon(1e-5));
    CHECK(homogeneous_zeta(basis_rectangle(1.0, 1.0), 2.0).re() == doctest::Approx(square_zeta(2.0, 1.0).re()));
}

TEST_CASE("divided differences at degeneracy") {
    for (double s : {-0.5, 0.7, 2.0, 3.0}) {
        const double e = 7.3;
        const double lim = (1.0 - s) * std::pow(e, -s);
        CHECK(divided_difference(e, e, s) == doctest::Approx(lim).epsilon(1e-15));
        CHECK(std::abs(divided_difference(e + 1e-12, e, s) - lim) < 1e-6 * std::abs(lim));
        const double far = (std::pow(9.1, 1 - s) - std::pow(e, 1 - s)) / (9.1 - e);
        CHECK(divided_difference(9.1, e, s) == doctest::Approx(far).epsilon(1e-13));
    }
    const double t = 0.3;
    CHECK(heat_divided_difference(2.0, 2.0, t) == doctest::Approx(-t * std::exp(-2.0 * t)).epsilon(1e-15));
    CHECK(heat_divided_difference(2.0, 2.0 + 1e-12, t) == doctest::Approx(-t * std::exp(-2.0 * t)).epsilon(1e-6));
    CHECK(heat_divided_difference(2.0, 5.0, t) ==
          doctest::Approx((std::exp(-2 * t) - std::exp(-5 * t)) / (2.0 - 5.0)).epsilon(1e-14));
}

TEST_CASE("z_diag and second order") {
    const DensitySpec c = make_constant(1.7, 0.5);
    const MatrixElementTable tc = dd_table(c, 40);
    const PertOptions oc = pert_options_for(c);
    CHECK(oc.sigma_bar == doctest::Approx(1.7));
    CHECK(z_diag(2.0, tc, oc).re() == doctest::Approx(1.7 * 1.7 / 90).epsilon(1e-13));
    CHECK(z_second_order(2.0, tc, oc).re() == 0.0);
    CHECK_THROWS_AS(z_diag(0.4, tc, oc), DivergenceError);
    // sinusoidal density: Z(2) is the exact trace of Q^2
    const double eta = 0.1, L = 0.5;
    const DensitySpec sn = make_sinusoidal(eta, L);
    const MatrixElementTable ts = dd_table(sn, 200);
    const PertOptions os = pert_options_for(sn);
    const double L4 = std::pow(L, 4), pi2 = kPi * kPi;
    const double exact = 8 * L4 / 45 + 8 * eta * eta * L4 / (3 * pi2) - 24 * eta * eta * L4 / (pi2 * pi2);
    const ZetaValue z = z_perturbative(2.0, ts, os);
    CHECK(z.re() == doctest::Approx(exact).epsilon(1e-9));
    CHECK(z.trunc_error < 1e-8);
    CHECK(z_perturbative(2.0, ts, os).re() == doctest::Approx(sinusoidal_zeta(2.0, eta, L).re()).epsilon(1e-9));
    // first-order resummation matches the piecewise closed form to O(dv^2)
    const PiecewiseParams pp = PiecewiseParams::from_alpha_beta(1.0, 1.0 / 3.0, 1e-3);
    const DensitySpec pd = pp.density();
    const MatrixElementTable tp = dd_table(pd, 400);
    const PertOptions op = pert_options_for(pd);
    CHECK(z_first_order(2.0, tp, op).re() == doctest::Approx(piecewise_zeta(BC::DD, 2.0, pp).re()).epsilon(1e-5));
    CHECK(z_diag(2.0, tp, op).re() == doctest::Approx(z_first_order(2.0, tp, op).re()).epsilon(1e-5));
}

TEST_CASE("2D diagonal zeta against the closed-form columns") {
    const double alpha = 0.5;
    const DensitySpec d = make_deformed_square(alpha, 1.0);
    const BasisSpec b = basis_rectangle(1.0, 1.0);
    TableOptions opt;
    opt.diagonal_only = true;
    const MatrixElementTable t = build_table(d, b, enumerate_modes(b, 48), opt);
    CHECK(z_diag(2.0, t, pert_options_for(d)).re() == doctest::Approx(deformed_square_z2_diag(alpha)).epsilon(1e-5));
    const DensitySpec a = make_annulus(0.5);
    const BasisSpec dp = basis_annulus(BC::DP, 0.5);
    const MatrixElementTable ta = build_table(a, dp, enumerate_modes(dp, 30), opt);
    CHECK(z_diag(2.0, ta, pert_options_for(a)).re() == doctest::Approx(annulus_z2_diag(0.5)).epsilon(1e-5));
}

TEST_CASE("deformed square second order closes the diagonal gap") {
    const DensitySpec d = make_deformed_square(0.1, 1.0);
    const BasisSpec b = basis_rectangle(1.0, 1.0);
    const MatrixElementTable t = build_table(d, b, enumerate_modes(b, 24));
    const PertOptions o = pert_options_for(d);
    const double z = z_perturbative(2.0, t, o).re();
    CHECK(std::abs(z - 0.06951485) < 2e-5);
}

TEST_CASE("heat kernel") {
    const double L = 0.5;
    const DensitySpec c = make_constant(1.0, L);
    const BasisSpec b = basis_1d(BC::DD, L);
    const MatrixElementTable wc = build_w_table(c, b, 30);
    HeatOptions oc = heat_options_for(c);
    for (double t : {1e-3, 0.05, 1.0}) {
        const double ref = 0.5 * (jacobi_theta3(t / (4 * L * L)) - 1.0);
        CHECK(heat_kernel(t, wc, 2, oc).value == doctest::Approx(ref).epsilon(1e-12));
        CHECK(heat_kernel_reference(t, b, 1.0) == doctest::Approx(ref).epsilon(1e-12));
    }
    const DensitySpec d = make_borg(0.2);
    const MatrixElementTable w = build_w_table(d, b, 80);
    const HeatOptions o = heat_options_for(d);
    double prev = INFINITY;
    for (int k = 0; k <= 16; ++k) {
        const double t = 1e-3 * std::pow(10.0, k / 4.0);
        const HeatKernelValue h = heat_kernel(t, w, 2, o);
        CHECK(h.value > 0.0);
        CHECK(h.value < prev);
        prev = h.value;
    }
    const double t = 1e-9;
    CHECK(heat_kernel(t, w, 2, o).second / heat_small_t_second_order(t, w) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("Mellin transform against the series") {
    const BasisSpec b = basis_1d(BC::DD, 0.5);
    CHECK(homogeneous_zeta(b, 2.0).re() == doctest::Approx(riemann_zeta(4.0).re() / std::pow(kPi, 4)).epsilon(1e-14));
    const DensitySpec c = make_constant(1.0, 0.5);
    const MatrixElementTable wc = build_w_table(c, b, 20);
    CHECK(mellin_zeta(2.0, wc, 2, heat_options_for(c)).re() ==
          doctest::Approx(riemann_zeta(4.0).re() / std::pow(kPi, 4)).epsilon(1e-12));
    const std::vector<DensitySpec> ds{make_borg(0.2), make_sinusoidal(0.1, 0.5),
                                      make_piecewise(1.05, 0.95, 0.4, 1.0)};
    for (const DensitySpec& d : ds) {
        const MatrixElementTable w = build_w_table(d, b, 60);
        const HeatOptions o = heat_options_for(d);
        for (double s : {1.5, 2.0, 3.0}) {
            const double m = mellin_zeta(s, w, 2, o).re(), ser = heat_series_zeta(s, w, 2, o).re();
            CHECK(std::abs(m - ser) < 1e-6);
        }
    }
    const MatrixElementTable w = build_w_table(make_borg(0.2), b, 40);
    CHECK(mellin_zeta(0.5005, w, 2, heat_options_for(make_borg(0.2))).pole_order == 1);
}

TEST_CASE("parallel and serial paths agree") {
    const DensitySpec d = make_borg(0.3);
    const MatrixElementTable t = dd_table(d, 120);
    PertOptions a = pert_options_for(d), s = a;
    s.parallel = false;
    const double zs = z_perturbative(2.0, t, s).re();
    omp_set_num_threads(1);
    const double z1 = z_perturbative(2.0, t, a).re();
    omp_set_num_threads(4);
    const double z4 = z_perturbative(2.0, t, a).re();
    omp_set_num_threads(omp_get_num_procs());
    CHECK(z1 == z4);
    CHECK(z1 == doctest::Approx(zs).epsilon(1e-14));
}

TEST_CASE("cutoff regularization") {
    const PiecewiseParams p = PiecewiseParams::from_alpha_beta(1.0, 1.0 / 3.0, 1e-4);
    const DensitySpec d = p.density();
    const BasisSpec b = basis_1d(BC::DD, 0.5 * p.R);
    const CutoffResult r = cutoff_casimir(d, b);
    CHECK(r.removable);
    CHECK(r.c2 == doctest::Approx(kPi / (2 * p.alpha())).epsilon(1e-6));
    CHECK(std::abs(r.c0 - piecewise_casimir(BC::DD, p)) < 1e-6);
    const CutoffResult h = cutoff_casimir(make_constant(1.0, 0.5), basis_1d(BC::DD, 0.5));
    CHECK(std::abs(h.c0 + kPi / 24) < 1e-8);
    const CutoffResult q = cutoff_casimir(make_polynomial({1.0, 0.0, 0.1}, 0.5), basis_1d(BC::DD, 0.5));
    CHECK_FALSE(q.removable);
}

TEST_CASE("zeta value json") {
    ZetaValue z;
    z.s = -0.5;
    z.value = cplx(1.25, 0.0);
    z.pole_order = 1;
    z.residue = 0.5;
    const auto j = nlohmann::json::parse(z.to_json());
    CHECK(j["s"] == -0.5);
    CHECK(j["re"] == 1.25);
    CHECK(j["im"] == 0.0);
    CHECK(j["pole_order"] == 1);
    CHECK(j["residue"] == 0.5);
    CHECK(j.contains("trunc_error"));
}
