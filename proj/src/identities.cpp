#include "spectral/identities.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "spectral/continuation.hpp"
#include "spectral/oracles.hpp"
#include "spectral/parallel.hpp"
#include "spectral/pertzeta.hpp"
#include "spectral/specfun.hpp"

namespace spz {

namespace {

double hurwitz(double s, double a) { return hurwitz_zeta(s, a).value.real(); }

// 1 - (k/n)^a for k < n without cancellation
double one_minus_ratio_pow(int k, int n, double a) {
    return -std::expm1(a * std::log1p(-double(n - k) / n));
}

// rows n in [2, N], inner k < n with k + n odd; returns the sums over n <= N/2 and n <= N
template <class Row>
std::pair<double, double> triangle_sum(int N, Row&& row) {
    const int half = N / 2;
    const double lo = parallel_sum<double>(2, half + 1, [&](std::int64_t n) { return row(int(n)); }, 16);
    const double hi = parallel_sum<double>(half + 1, N + 1, [&](std::int64_t n) { return row(int(n)); }, 16);
    return {lo, lo + hi};
}

}  // namespace

nlohmann::ordered_json IdentityResult::to_json() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["residual"] = residual;
    j["trunc_error"] = trunc_error;
    if (!warning.empty()) j["warning"] = warning;
    return j;
}

IdentityResult borg_z1_identity(double a, int N) {
    if (!(a > -1.0) || a == 0.0) throw std::invalid_argument("Borg identity needs alpha > -1, alpha != 0");
    if (N < 10) throw std::invalid_argument("Borg identity needs N >= 10");
    const DensitySpec d = make_borg(a);
    const BasisSpec b = basis_1d(BC::DD, 0.5);
    const double pi2 = kPi * kPi;
    const double part = parallel_sum<double>(1, N + 1, [&](std::int64_t n) {
        const ModeIndex m{int(n), 0, 1};
        return matrix_element(d, b, m, m).value / (pi2 * double(n) * double(n));
    });
    // tail from <n|Sigma|n> = mean - sum_j (-1)^{j+1} D_j / (2 pi n)^{2j}, D_j = f^{(2j-1)}(1) - f^{(2j-1)}(0)
    double tail = (3.0 + 3.0 * a + a * a) / (3.0 * (1.0 + a)) * hurwitz(2.0, N + 1.0);
    double fact = 4.0, ak = a, w = 1.0 / (4.0 * pi2), last = 0.0;
    for (int j = 1; j <= 6; ++j) {
        const int k = 2 * j - 1;
        const double D = -(1.0 + a) * (1.0 + a) * fact * ak * (std::pow(1.0 + a, -4 - k) - 1.0);
        last = (j % 2 == 1 ? 1.0 : -1.0) * D * w * hurwitz(2.0 + 2.0 * j, N + 1.0);
        tail -= last;
        fact *= double(k + 4) * double(k + 5);
        ak *= a * a;
        w /= 4.0 * pi2;
    }
    tail /= pi2;
    IdentityResult r;
    r.name = "borg_z1";
    r.lhs = part + tail;
    r.rhs = 1.0 / 6.0;
    r.residual = std::abs(r.lhs - r.rhs);
    r.trunc_error = std::abs(last) / pi2 + 1e-16 * N;
    if (std::abs(tail) > 1e-3) r.warning = "slow convergence: tail exceeds 1e-3";
    return r;
}

double borg_xi_rhs(double s) {
    if (std::abs(s - 0.5) < 1e-14) throw PoleError("Xi(s) has a pole at s = 1/2");
    if (std::abs(s + 0.5) < 1e-14) throw PoleError("Xi(s) has a pole at s = -1/2");
    return std::pow(kPi, 4) / 768.0 * riemann_zeta(2.0 * s).value.real() -
           5.0 * kPi * kPi / 256.0 * riemann_zeta(2.0 * (s + 1.0)).value.real();
}

BorgXiResult borg_xi(double s, int N) {
    if (!(s > 1.0)) throw DivergenceError("direct Xi(s) double sum needs s > 1");
    if (N < 4) throw std::invalid_argument("borg_xi needs N >= 4");
    // symmetric sum = 2 sum_{k<n}; (-1)^{k+n} - 1 = -2 on odd pairs
    auto row = [s](int n) {
        CompensatedSum<double> acc;
        const double nn = double(n) * n;
        for (int k = n - 1; k >= 1; k -= 2) {
            const double kk = double(k) * k;
            const double diff = std::pow(double(n), 2.0 - 2.0 * s) * one_minus_ratio_pow(k, n, 2.0 - 2.0 * s);
            acc.add(-4.0 * kk * nn * diff / std::pow(kk - nn, 5));
        }
        return acc.value();
    };
    const auto [half, full] = triangle_sum(N, row);
    BorgXiResult r;
    r.name = "borg_xi";
    r.lhs = full;
    r.printed_lhs = 0.5 * full;
    r.rhs = borg_xi_rhs(s);
    r.residual = std::abs(r.lhs - r.rhs);
    r.trunc_error = std::abs(full - half) / (std::pow(2.0, 2.0 * s - 1.0) - 1.0);
    return r;
}

IdentityResult borg_heat_identity(double t, int N) {
    if (!(t > 0.0)) throw std::invalid_argument("heat identity needs t > 0");
    if (N < 4) throw std::invalid_argument("heat identity needs N >= 4");
    const double pi2 = kPi * kPi;
    auto row = [=](int n) {
        CompensatedSum<double> acc;
        const double nn = double(n) * n, en = std::exp(-pi2 * nn * t);
        for (int m = n - 1; m >= 1; m -= 2) {
            const double mm = double(m) * m;
            acc.add(4.0 * mm * mm * nn * nn * (en - std::exp(-pi2 * mm * t)) / std::pow(mm - nn, 5));
        }
        return acc.value();
    };
    const auto [half, full] = triangle_sum(N, row);
    const double c = 256.0 * t / pi2;
    IdentityResult r;
    r.name = "borg_heat";
    r.lhs = c * full;
    const double th = jacobi_theta3(t);
    r.rhs = -1.5 * t * th + 1.5 * t - 0.5 * t * d_dt_theta3(t);
    r.residual = std::abs(r.lhs - r.rhs);
    r.trunc_error = c * std::abs(full - half) / 31.0;
    return r;
}

SeriesZetaResult zeta_series_representation(double s, int N) {
    if (!(s > 1.0)) throw DivergenceError("series representation converges for s > 1");
    if (N < 8) throw std::invalid_argument("zeta_series_representation needs N >= 8");
    // summand as 2 x^{2-s} n^{-4-s} g(x) / (1 - x^2)^5 with x = k/n, g(x) = 5(1 - x^{s+2}) + 3(x^2 - x^s)
    auto row = [s](int n) {
        CompensatedSum<double> acc;
        const double pref = std::pow(double(n), -4.0 - s);
        for (int k = n - 1; k >= 1; k -= 2) {
            const double x = double(k) / n, e = double(n - k) / n;
            const double g = 5.0 * one_minus_ratio_pow(k, n, s + 2.0) + 3.0 * x * x * one_minus_ratio_pow(k, n, s - 2.0);
            const double q = e * (2.0 - e);
            acc.add(2.0 * std::pow(x, 2.0 - s) * pref * g / std::pow(q, 5));
        }
        return acc.value();
    };
    const int quarter = N / 4;
    const double c = 128.0 / std::pow(kPi, 4);
    const double s4 = c * parallel_sum<double>(2, quarter + 1, [&](std::int64_t n) { return row(int(n)); }, 16);
    const auto [half, full] = triangle_sum(N, row);
    const double s2 = c * half, s1 = c * full;
    const double q = std::pow(2.0, s - 1.0) - 1.0;
    const double r1 = s1 + (s1 - s2) / q;
    const double r2 = s2 + (s2 - s4) / q;
    SeriesZetaResult r;
    r.partial = s1;
    r.value = r1;
    r.trunc_error = std::abs(r1 - r2);
    return r;
}

SumRuleResult sumrule_battery(const DensitySpec& d, const BasisSpec& b, int s, int N) {
    if (!(s > 0.5 * b.dim)) throw DivergenceError("sum rules need integer s > d/2");
    if (N < 8) throw std::invalid_argument("sumrule_battery needs N >= 8");
    const MatrixElementTable t = build_table(d, b, enumerate_modes(b, N));
    const int n = t.N();
    Eigen::MatrixXd Q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Q(i, j) = t(i, j) / std::sqrt(t.eps(i) * t.eps(j));
    Eigen::MatrixXd P = Q;
    for (int k = 1; k < s; ++k) P = P * Q;
    double head = 0.0;
    for (int i = n - 1; i >= 0; --i) head += std::pow(t.eps(i), -double(s));
    const double sb = pert_options_for(d).sigma_bar;
    SumRuleResult r;
    r.trace_value = P.trace() + std::pow(sb, s) * (homogeneous_zeta(b, s).re() - head);
    const SpectrumOracle o = galerkin_spectrum(t, n / 4, weyl_data(d, b));
    r.oracle_value = zeta_from_spectrum(s, o, n / 4).re();
    r.residual = std::abs(r.trace_value - r.oracle_value);
    return r;
}

std::vector<BatteryEntry> identity_battery() {
    std::vector<BatteryEntry> out;
    auto add = [&](const std::string& name, double value, double ref, double tol) {
        const double res = std::abs(value - ref);
        out.push_back({name, value, ref, res, tol, res < tol});
    };
    {
        const IdentityResult r = borg_z1_identity(0.5, 100000);
        add("borg_z1(alpha=0.5,N=1e5)", r.lhs, r.rhs, 1e-6);
    }
    {
        const BorgXiResult r = borg_xi(2.0, 2000);
        add("borg_xi(s=2,N=2000)", r.lhs, r.rhs, 1e-8);
    }
    for (double t : {0.1, 1.0}) {
        const IdentityResult r = borg_heat_identity(t, t < 0.5 ? 2000 : 200);
        add(t < 0.5 ? "borg_heat(t=0.1,N=2000)" : "borg_heat(t=1,N=200)", r.lhs, r.rhs, 1e-8);
    }
    for (int s : {2, 3, 4}) {
        const SeriesZetaResult z = zeta_series_representation(s, 2000);
        add("zeta_series(s=" + std::to_string(s) + ",N=2000)", z.value, riemann_zeta(double(s)).value.real(), 1e-6);
    }
    {
        const double L = 0.5, eta = 0.1;
        const SumRuleResult r = sumrule_battery(make_sinusoidal(eta, L), basis_1d(BC::DD, L), 1, 200);
        add("sinusoidal_trace_Z1(eta=0.1)", r.trace_value, 2.0 * L * L / 3.0, 1e-8);
    }
    {
        const PiecewiseParams p = PiecewiseParams::from_alpha_beta(1.0, 1.0 / 3.0, 0.1);
        const double pp = piecewise_sumrule1(BC::PP, p);
        add("piecewise_PP_Z1_relation", pp, 0.25 * (piecewise_sumrule1(BC::DD, p) + piecewise_sumrule1(BC::NN, p)),
            1e-13);
    }
    return out;
}

nlohmann::ordered_json battery_to_json(const std::vector<BatteryEntry>& entries) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const BatteryEntry& e : entries) {
        nlohmann::ordered_json j;
        j["name"] = e.name;
        j["value"] = e.value;
        j["reference"] = e.reference;
        j["residual"] = e.residual;
        j["tolerance"] = e.tolerance;
        j["pass"] = e.pass;
        arr.push_back(j);
    }
    return arr;
}

}  // namespace spz
