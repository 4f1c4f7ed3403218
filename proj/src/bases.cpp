#include "spectral/bases.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "spectral/quadrature.hpp"
#include "spectral/specfun.hpp"

namespace spz {

namespace {

using json = nlohmann::json;

// cosine index of an NN mode
int nn_k(const ModeIndex& i) { return i.u == 1 ? 2 * i.nx : 2 * i.nx - 1; }

double sgn_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// 1D eigenfunction factor on [-L, L] for the x-direction of each basis
double psi_1d(BC bc, double L, const ModeIndex& i, double x) {
    const double th = kPi * (x + L) / (2.0 * L);
    const double nrm = 1.0 / std::sqrt(L);
    switch (bc) {
        case BC::DD: return nrm * std::sin(i.nx * th);
        case BC::NN: {
            const int k = nn_k(i);
            return k == 0 ? 1.0 / std::sqrt(2.0 * L) : nrm * std::cos(k * th);
        }
        case BC::DN: return nrm * std::sin((i.nx - 0.5) * th);
        case BC::ND: return nrm * std::cos((i.nx - 0.5) * th);
        case BC::PP:
            if (i.nx == 0) return 1.0 / std::sqrt(2.0 * L);
            return nrm * (i.u == 1 ? std::cos(i.nx * kPi * x / L) : std::sin(i.nx * kPi * x / L));
        default: return nrm * std::sin(i.nx * th);
    }
}

double psi_y(const BasisSpec& b, const ModeIndex& i, double y) {
    switch (b.bc) {
        case BC::DP:
            if (i.u == 1) return i.ny == 0 ? 1.0 / std::sqrt(2.0 * kPi) : std::sin(i.ny * y) / std::sqrt(kPi);
            return std::cos(i.ny * y) / std::sqrt(kPi);
        case BC::DD2: return std::sin(i.ny * (y + kPi) / 2.0) / std::sqrt(kPi);
        default: return std::sin(i.ny * kPi * (y + b.Ly) / (2.0 * b.Ly)) / std::sqrt(b.Ly);
    }
}

void check_compatible(const DensitySpec& d, const BasisSpec& b) {
    if (d.dim != b.dim) throw BasisError("density and basis dimensions differ");
    if (std::abs(d.L - b.L) > 1e-12 * std::max(1.0, d.L)) throw BasisError("density and basis half widths differ");
}

std::vector<double> uniform_edges(double a, double b, int panels, const std::vector<double>& extra) {
    std::vector<double> e;
    panels = std::max(panels, 1);
    for (int i = 0; i <= panels; ++i) e.push_back(a + (b - a) * i / panels);
    for (double p : extra)
        if (p > a && p < b) e.push_back(p);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

std::optional<double> piecewise_dd(const DensitySpec& d, int n, int m) {
    const double v1 = d.p[0], v2 = d.p[1], L = d.L;
    const double x0 = d.p[2] - L;
    const double a = v1 * v1, c = v2 * v2;
    if (n == m) {
        return (kPi * n * (a * (L - x0) + c * (L + x0)) + L * (a - c) * std::sin(kPi * n * (L + x0) / L)) /
               (2.0 * kPi * L * n * a * c);
    }
    return -(a - c) *
           ((n + m) * std::sin(kPi * (L + x0) * (n - m) / (2.0 * L)) +
            (m - n) * std::sin(kPi * (L + x0) * (n + m) / (2.0 * L))) /
           (kPi * a * c * (double(n) * n - double(m) * m));
}

// psi^2 = (1 + sg cos(K pi (x+L)/2L))/2L for every 1D basis
void square_profile(BC bc, const ModeIndex& i, int& K, double& sg) {
    switch (bc) {
        case BC::DD: K = 2 * i.nx; sg = -1.0; return;
        case BC::NN: K = 2 * nn_k(i); sg = K == 0 ? 0.0 : 1.0; return;
        case BC::DN: K = 2 * i.nx - 1; sg = -1.0; return;
        case BC::ND: K = 2 * i.nx - 1; sg = 1.0; return;
        case BC::PP: K = 4 * i.nx; sg = i.nx == 0 ? 0.0 : (i.u == 1 ? 1.0 : -1.0); return;
        default: K = 0; sg = 0.0;
    }
}

double piecewise_diag_1d(const DensitySpec& d, BC bc, const ModeIndex& i) {
    const double s1 = 1.0 / (d.p[0] * d.p[0]), s2 = 1.0 / (d.p[1] * d.p[1]);
    const double r = d.p[2], R = 2.0 * d.L;
    int K;
    double sg;
    square_profile(bc, i, K, sg);
    double v = (s1 * r + s2 * (R - r)) / R;
    if (K > 0) v += (s1 - s2) * sg * std::sin(K * kPi * r / R) / (K * kPi);
    return v;
}

// integration by parts in 1/(2 pi n)^2, 8 terms; the Ci/Si form cancels to O(1/n^2) at large n
double borg_diag_asymptotic(double a, int n) {
    double v = (3.0 + 3.0 * a + a * a) / (3.0 * (1.0 + a));
    const double w = 1.0 / ((2.0 * kPi * n) * (2.0 * kPi * n));
    double fact = 4.0, ak = a, wj = w;  // (k+3)!/3! and a^k at k = 1
    for (int j = 1; j <= 8; ++j) {
        const int k = 2 * j - 1;
        const double d = -(1.0 + a) * (1.0 + a) * fact * ak * (std::pow(1.0 + a, -4 - k) - 1.0);
        v -= (j % 2 == 1 ? 1.0 : -1.0) * d * wj;
        fact *= double(k + 4) * double(k + 5);
        ak *= a * a;
        wj *= w;
    }
    return v;
}

std::optional<double> borg_diag(double alpha, int n) {
    if (alpha == 0.0) return 1.0;
    const double a = alpha;
    if (n >= std::max(1.0, 10.0 * std::abs(a) / std::min(1.0, 1.0 + a))) return borg_diag_asymptotic(a, n);
    const double x1 = 2.0 * n * kPi / a, x2 = 2.0 * (a + 1.0) * n * kPi / a;
    if (!(x1 > 0.0) || !(x2 > 0.0)) return std::nullopt;  // alpha < 0 leaves the Ci domain
    const SiCi dlt = sici_diff(x1, x2);  // {Si(x2)-Si(x1), Ci(x2)-Ci(x1)}
    const double br = a * a + 2.0 * kPi * (a + 1.0) * n *
                                  (dlt.ci * std::sin(2.0 * kPi * n / a) - dlt.si * std::cos(2.0 * kPi * n / a));
    return 2.0 * kPi * kPi * (a + 1.0) * n * n / (3.0 * a * a * a * a) * br;
}

std::optional<double> oscillating_dd(const DensitySpec& d, int n, int m) {
    const double eta = d.p[0], eb = d.p[1], ell = d.p[2], L = d.L;
    if (n == m) {
        if (std::abs(n * eb - 1.0) < 1e-12)
            return 2.0 - 0.5 * eta * sgn_pow(n) * std::sin(kPi * ell * n / L);
        return 2.0 + eb * eb * eb * eta * n * n * std::sin(kPi / eb) * std::sin(kPi * ell / (eb * L)) /
                         (kPi * eb * eb * n * n - kPi);
    }
    const double q1 = eb * eb * (n - m) * (n - m) - 4.0, q2 = eb * eb * (n + m) * (n + m) - 4.0;
    if (std::abs(q1) < 1e-9 || std::abs(q2) < 1e-9) return std::nullopt;
    // general-phase form; equals the (-1)^(m+n) tabulated variant when 2/eps_bar is an odd integer
    return -8.0 * eb * eb * eb * eta * m * n *
           (std::cos(kPi * (L - ell) / (eb * L)) - sgn_pow(m + n) * std::cos(kPi * (L + ell) / (eb * L))) /
           (kPi * q1 * q2);
}

std::optional<double> staircase_osc_diag(const DensitySpec& d, int n) {
    const DensitySpec& in = *d.inner;
    const double eta = in.p[0], eb = in.p[1], ell = in.p[2], L = in.L;
    const int N = d.cells;
    const double c1 = std::sin(kPi / (eb * N)), c2 = std::sin((kPi - kPi * eb * n) / (eb * N)),
                 c3 = std::sin((kPi * eb * n + kPi) / (eb * N));
    if (std::abs(c1) < 1e-12 || std::abs(c2) < 1e-12 || std::abs(c3) < 1e-12) return std::nullopt;
    const double w = std::sin(kPi * n / N) * (1.0 / c2 + 1.0 / c3);
    return 2.0 + eta * std::sin(kPi / eb) * std::sin(kPi * ell / (eb * L)) * (2.0 * kPi * n / c1 - N * w) /
                     (2.0 * kPi * n * N);
}

std::optional<double> fourier_diag(const DensitySpec& d, int n) {
    const double Delta = d.p[0], L = d.L;
    double v = 0.5 * d.p[2];
    for (std::size_t j = 0; j < d.coeffs.size(); ++j) {
        const double jj = j + 1.0;
        const double den = 8.0 * kPi * jj * jj * jj * L * L * L - 2.0 * kPi * Delta * Delta * jj * L * n * n;
        if (std::abs(den) < 1e-9 * 8.0 * kPi * jj * jj * jj * L * L * L) return std::nullopt;
        v -= Delta * Delta * Delta * n * n * d.coeffs[j] * std::sin(2.0 * kPi * jj * L / Delta) / den;
    }
    return v;
}

// <n|x^k|n> in the DD basis via int x^k cos(cx), c = n pi / L, integration by parts
double polynomial_dd_diag(const DensitySpec& d, int n) {
    const double L = d.L, c = kPi * n / L, sg = (n % 2 == 0) ? 1.0 : -1.0;
    double v = 0.0, I = 0.0, Lk = 1.0;
    for (std::size_t k = 0; k < d.coeffs.size(); ++k) {
        if (k > 0 && k % 2 == 1) {
            // J_k = int x^k sin(cx) from the preceding even I
            const double J = -2.0 * Lk * sg / c + (double(k) / c) * I;
            I = -(double(k + 1) / c) * J;
        }
        Lk *= L;
        if (k % 2 == 0) v += d.coeffs[k] * (2.0 * Lk / double(k + 1) - sg * I) / (2.0 * L);
    }
    return v;
}

// deformed square in the square basis, A = 4L^2
std::optional<double> deformed_square_dd(const DensitySpec& d, const ModeIndex& n, const ModeIndex& m) {
    const double a = d.p[0];
    const double A = 4.0 * d.L * d.L;
    const double sA = std::sqrt(A);
    const double den = kPi * kPi * (2.0 * A * a * a + 3.0);
    const double nx = n.nx, ny = n.ny, mx = m.nx, my = m.ny;
    if (n.nx == m.nx && n.ny == m.ny)
        return 1.0 - 6.0 * A * a * a * (nx * nx + ny * ny) / (kPi * kPi * nx * nx * ny * ny * (2.0 * A * a * a + 3.0));
    if (n.nx == m.nx) {
        return 48.0 * A * a * a * ny * my * (sgn_pow(n.ny + m.ny) + 1.0) / (den * (ny - my) * (ny - my) * (ny + my) * (ny + my));
    }
    if (n.ny == m.ny) {
        const double sg = sgn_pow(n.nx + m.nx);
        return 48.0 * sA * a * nx * mx * (sA * a * (sg + 1.0) + sg - 1.0) /
               (den * (nx - mx) * (nx - mx) * (nx + mx) * (nx + mx));
    }
    return 0.0;
}

std::optional<double> annulus_elem(const DensitySpec& d, const ModeIndex& n, const ModeIndex& m) {
    if (n.ny != m.ny || n.u != m.u) return 0.0;
    const double lr = std::log(d.p[0]), r2 = d.p[0] * d.p[0];
    const double nx = n.nx, mx = m.nx;
    if (n.nx == m.nx) return kPi * kPi * nx * nx * (r2 - 1.0) / (2.0 * (kPi * kPi * nx * nx * lr + lr * lr * lr));
    return -8.0 * kPi * kPi * nx * mx * lr * (sgn_pow(n.nx + m.nx) - r2) /
           ((kPi * kPi * (nx - mx) * (nx - mx) + 4.0 * lr * lr) * (kPi * kPi * (nx + mx) * (nx + mx) + 4.0 * lr * lr));
}

bool y_only_trivial(const DensitySpec& d) {
    return d.kind == DensityKind::annulus_map || d.kind == DensityKind::constant;
}

}  // namespace

std::string bc_name(BC bc) {
    switch (bc) {
        case BC::DD: return "DD";
        case BC::NN: return "NN";
        case BC::DN: return "DN";
        case BC::ND: return "ND";
        case BC::PP: return "PP";
        case BC::DP: return "DP";
        case BC::DD2: return "DD2";
    }
    return "?";
}

BC bc_from_name(const std::string& name) {
    for (BC b : {BC::DD, BC::NN, BC::DN, BC::ND, BC::PP, BC::DP, BC::DD2})
        if (bc_name(b) == name) return b;
    throw BasisError("unknown boundary condition tag: " + name);
}

std::string provenance_name(Provenance p) { return p == Provenance::closed_form ? "closed_form" : "quadrature"; }

BasisSpec basis_1d(BC bc, double L) {
    if (bc == BC::DP || bc == BC::DD2) throw BasisError("DP/DD2 are two-dimensional");
    if (!(L > 0.0)) throw BasisError("L must be positive");
    return BasisSpec{1, L, L, bc};
}

BasisSpec basis_rectangle(double L, double Ly) {
    if (!(L > 0.0) || !(Ly > 0.0)) throw BasisError("half widths must be positive");
    return BasisSpec{2, L, Ly, BC::DD};
}

BasisSpec basis_annulus(BC bc, double r) {
    if (bc != BC::DP && bc != BC::DD2) throw BasisError("annulus basis needs DP or DD2");
    if (!(r > 0.0 && r < 1.0)) throw BasisError("annulus: 0 < r < 1 required");
    return BasisSpec{2, -0.5 * std::log(r), kPi, bc};
}

bool valid_index(const BasisSpec& b, const ModeIndex& i) {
    if (b.dim == 1) {
        switch (b.bc) {
            case BC::DD:
            case BC::DN:
            case BC::ND: return i.nx >= 1;
            case BC::NN: return (i.u == 1 && i.nx >= 0) || (i.u == 2 && i.nx >= 1);
            case BC::PP: return (i.u == 1 && i.nx >= 0) || (i.u == 2 && i.nx >= 1);
            default: return false;
        }
    }
    if (i.nx < 1) return false;
    switch (b.bc) {
        case BC::DD:
        case BC::DD2: return i.ny >= 1;
        case BC::DP: return (i.u == 1 && i.ny >= 0) || (i.u == 2 && i.ny >= 1);
        default: return false;
    }
}

double eigenvalue(const BasisSpec& b, const ModeIndex& i) {
    if (!valid_index(b, i)) throw BasisError("invalid mode index for basis " + bc_name(b.bc));
    const double L = b.L;
    const double q = kPi * kPi / (4.0 * L * L);
    if (b.dim == 1) {
        switch (b.bc) {
            case BC::DD: return q * i.nx * i.nx;
            case BC::NN: {
                const double k = nn_k(i);
                return q * k * k;
            }
            case BC::DN:
            case BC::ND: return q * (i.nx - 0.5) * (i.nx - 0.5);
            case BC::PP: return kPi * kPi * i.nx * i.nx / (L * L);
            default: break;
        }
    }
    const double ex = q * i.nx * i.nx;
    switch (b.bc) {
        case BC::DP: return ex + double(i.ny) * i.ny;
        case BC::DD2: return ex + 0.25 * i.ny * i.ny;
        default: return ex + kPi * kPi * i.ny * i.ny / (4.0 * b.Ly * b.Ly);
    }
}

double eigenfunction(const BasisSpec& b, const ModeIndex& i, double x, double y) {
    if (!valid_index(b, i)) throw BasisError("invalid mode index for basis " + bc_name(b.bc));
    if (x < -b.L - 1e-12 || x > b.L + 1e-12) throw BasisError("point outside the domain");
    if (b.dim == 1) return psi_1d(b.bc, b.L, i, x);
    if (y < -b.Ly - 1e-12 || y > b.Ly + 1e-12) throw BasisError("point outside the domain");
    return psi_1d(BC::DD, b.L, i, x) * psi_y(b, i, y);
}

std::vector<ModeIndex> enumerate_modes(const BasisSpec& b, int n, bool include_zero) {
    std::vector<ModeIndex> out;
    if (n < 1) return out;
    if (b.dim == 1) {
        switch (b.bc) {
            case BC::NN:
                if (include_zero) out.push_back({0, 0, 1});
                for (int k = 1; k <= n; ++k) out.push_back(k % 2 == 0 ? ModeIndex{k / 2, 0, 1} : ModeIndex{(k + 1) / 2, 0, 2});
                break;
            case BC::PP:
                if (include_zero) out.push_back({0, 0, 1});
                for (int k = 0; k < n; ++k) out.push_back({k / 2 + 1, 0, k % 2 + 1});
                break;
            default:
                for (int k = 1; k <= n; ++k) out.push_back({k, 0, 1});
        }
        return out;
    }
    for (int nx = 1; nx <= n; ++nx) {
        if (b.bc == BC::DP) {
            for (int ny = 0; ny <= n; ++ny) {
                out.push_back({nx, ny, 1});
                if (ny >= 1) out.push_back({nx, ny, 2});
            }
        } else {
            for (int ny = 1; ny <= n; ++ny) out.push_back({nx, ny, 1});
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [&b](const ModeIndex& a, const ModeIndex& c) { return eigenvalue(b, a) < eigenvalue(b, c); });
    return out;
}

std::optional<double> matrix_element_closed(const DensitySpec& d, const BasisSpec& b, const ModeIndex& n,
                                            const ModeIndex& m) {
    check_compatible(d, b);
    if (!valid_index(b, n) || !valid_index(b, m)) throw BasisError("invalid mode index");
    if (d.kind == DensityKind::constant) return (n == m) ? d.p[0] : 0.0;
    if (b.dim == 1 && b.bc == BC::DD) {
        const int i = n.nx, j = m.nx;
        switch (d.kind) {
            case DensityKind::piecewise: return piecewise_dd(d, i, j);
            case DensityKind::sinusoidal:
                if (i == j) return 1.0;
                if (std::abs(i - j) == 1) return -0.5 * d.p[0];
                return 0.0;
            case DensityKind::borg:
                if (i == j) return borg_diag(d.p[0], i);
                return std::nullopt;
            case DensityKind::oscillating: return oscillating_dd(d, i, j);
            case DensityKind::staircase:
                if (i == j && d.inner->kind == DensityKind::oscillating) return staircase_osc_diag(d, i);
                return std::nullopt;
            case DensityKind::fourier_periodic:
                if (i == j) return fourier_diag(d, i);
                return std::nullopt;
            case DensityKind::polynomial:
                if (i == j) return polynomial_dd_diag(d, i);
                return std::nullopt;
            default: return std::nullopt;
        }
    }
    if (b.dim == 1 && d.kind == DensityKind::piecewise && n == m) return piecewise_diag_1d(d, b.bc, n);
    if (b.dim == 2 && b.bc == BC::DD && d.kind == DensityKind::deformed_square &&
        std::abs(b.Ly - d.Ly) < 1e-12 && std::abs(b.L - b.Ly) < 1e-12)
        return deformed_square_dd(d, n, m);
    if (b.dim == 2 && (b.bc == BC::DP || b.bc == BC::DD2) && d.kind == DensityKind::annulus_map) {
        if (b.bc == BC::DD2 && n.ny != m.ny) return 0.0;
        return annulus_elem(d, n, m);
    }
    return std::nullopt;
}

double matrix_element_quadrature(const DensitySpec& d, const BasisSpec& b, const ModeIndex& n, const ModeIndex& m) {
    check_compatible(d, b);
    if (!valid_index(b, n) || !valid_index(b, m)) throw BasisError("invalid mode index");
    const double L = b.L;
    if (b.dim == 1) {
        auto f = [&](double x) { return d(x) * psi_1d(b.bc, L, n, x) * psi_1d(b.bc, L, m, x); };
        const int panels = (std::abs(n.nx) + std::abs(m.nx)) / 2 + 1;
        const std::vector<double> edges = uniform_edges(-L, L, panels, d.breakpoints());
        std::vector<double> inner(edges.begin() + 1, edges.end() - 1);
        const QuadResult q = integrate(f, -L, L, 1e-14, 1e-14, inner, 200000);
        if (!q.converged && q.abs_error > 1e-12) throw std::runtime_error("matrix_element_quadrature: no convergence");
        return q.value;
    }
    // two dimensions
    if (y_only_trivial(d)) {
        double yfac = 0.0;
        if (n.ny == m.ny && n.u == m.u) yfac = 1.0;
        if (yfac == 0.0) return 0.0;
        auto f = [&](double x) { return d(x, 0.0) * psi_1d(BC::DD, L, n, x) * psi_1d(BC::DD, L, m, x); };
        const int panels = (n.nx + m.nx) / 2 + 1;
        const std::vector<double> edges = uniform_edges(-L, L, panels, {});
        std::vector<double> inner(edges.begin() + 1, edges.end() - 1);
        return integrate(f, -L, L, 1e-14, 1e-14, inner, 200000).value;
    }
    // tensor composite Gauss-Legendre, exact for polynomial densities once panels resolve the modes
    const std::vector<double> ex = uniform_edges(-L, L, (n.nx + m.nx) / 2 + 2, d.breakpoints());
    const std::vector<double> ey = uniform_edges(-b.Ly, b.Ly, (n.ny + m.ny) / 2 + 2, {});
    auto fx = [&](double x) {
        auto fy = [&](double y) { return d(x, y) * psi_y(b, n, y) * psi_y(b, m, y); };
        return composite_gauss(fy, ey, 24) * psi_1d(BC::DD, L, n, x) * psi_1d(BC::DD, L, m, x);
    };
    return composite_gauss(fx, ex, 24);
}

MatrixElement matrix_element(const DensitySpec& d, const BasisSpec& b, const ModeIndex& n, const ModeIndex& m) {
    if (auto c = matrix_element_closed(d, b, n, m)) return {*c, Provenance::closed_form};
    return {matrix_element_quadrature(d, b, n, m), Provenance::quadrature};
}

double w_matrix_element_quadrature(const DensitySpec& d, const BasisSpec& b, int n, int m) {
    check_compatible(d, b);
    if (b.dim != 1 || b.bc != BC::DD) throw BasisError("W matrix elements need the 1D DD basis");
    const double L = b.L;
    const ModeIndex in{n, 0, 1}, im{m, 0, 1};
    auto f = [&](double x) { return psi_1d(BC::DD, L, in, x) * psi_1d(BC::DD, L, im, x) / d(x); };
    const std::vector<double> edges = uniform_edges(-L, L, (n + m) / 2 + 1, d.breakpoints());
    std::vector<double> inner(edges.begin() + 1, edges.end() - 1);
    const double v = integrate(f, -L, L, 1e-14, 1e-14, inner, 200000).value;
    return std::sqrt(eigenvalue(b, in) * eigenvalue(b, im)) * v;
}

MatrixElement w_matrix_element(const DensitySpec& d, const BasisSpec& b, int n, int m) {
    check_compatible(d, b);
    if (b.dim != 1 || b.bc != BC::DD) throw BasisError("W matrix elements need the 1D DD basis");
    if (n < 1 || m < 1) throw BasisError("invalid mode index");
    if (d.kind == DensityKind::borg) {
        const double a = d.p[0];
        const double a1 = a + 1.0;
        const double pi2 = kPi * kPi;
        if (n == m) {
            const double nn = double(n) * n;
            return {3.0 * a * a * a * a / (2.0 * pi2 * a1 * a1 * nn) - (a * a + 3.0 * a + 3.0) * a * a / (a1 * a1) +
                        pi2 * (a * a * a * a + 5.0 * a * a * a + 10.0 * a * a + 10.0 * a + 5.0) * nn / (5.0 * a1 * a1),
                    Provenance::closed_form};
        }
        const double mm = double(m) * m, nn = double(n) * n;
        const double dm = mm - nn;
        const double X = 12.0 * a * a * (mm + nn) +
                         a1 * (pi2 * a1 * a1 * dm * dm - 12.0 * a * a * (mm + nn)) * sgn_pow(m + n) - pi2 * dm * dm;
        const double dn = double(m - n), sn = double(m + n);
        return {16.0 * a * mm * nn * X / (pi2 * a1 * a1 * dn * dn * dn * dn * sn * sn * sn * sn),
                Provenance::closed_form};
    }
    if (d.kind == DensityKind::constant) {
        return {n == m ? eigenvalue(b, {n, 0, 1}) / d.p[0] : 0.0, Provenance::closed_form};
    }
    return {w_matrix_element_quadrature(d, b, n, m), Provenance::quadrature};
}

bool MatrixElementTable::is_symmetric(double tol) const {
    const int n = N();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
}

std::string MatrixElementTable::to_json() const {
    json j;
    j["schema"] = "spz.matrix_table/1";
    j["basis"] = {{"dim", basis.dim}, {"L", basis.L}, {"Ly", basis.Ly}, {"bc", bc_name(basis.bc)}};
    j["density_id"] = density_id;
    j["N"] = N();
    json modes_j = json::array();
    for (const auto& m : modes) modes_j.push_back({m.nx, m.ny, m.u});
    j["modes"] = modes_j;
    j["entries"] = entries;
    json prov = json::array();
    for (auto p : provenance) prov.push_back(provenance_name(p));
    j["provenance"] = prov;
    return j.dump();
}

MatrixElementTable MatrixElementTable::from_json(const std::string& text) {
    const json j = json::parse(text);
    MatrixElementTable t;
    t.basis.dim = j.at("basis").at("dim").get<int>();
    t.basis.L = j.at("basis").at("L").get<double>();
    t.basis.Ly = j.at("basis").at("Ly").get<double>();
    t.basis.bc = bc_from_name(j.at("basis").at("bc").get<std::string>());
    t.density_id = j.at("density_id").get<std::string>();
    for (const auto& m : j.at("modes")) t.modes.push_back({m[0].get<int>(), m[1].get<int>(), m[2].get<int>()});
    t.entries = j.at("entries").get<std::vector<double>>();
    for (const auto& p : j.at("provenance"))
        t.provenance.push_back(p.get<std::string>() == "closed_form" ? Provenance::closed_form : Provenance::quadrature);
    if (t.entries.size() != t.modes.size() * t.modes.size()) throw std::runtime_error("matrix table: size mismatch");
    return t;
}

MatrixElementTable build_table(const DensitySpec& d, const BasisSpec& b, const std::vector<ModeIndex>& modes,
                               const TableOptions& opt) {
    check_compatible(d, b);
    MatrixElementTable t;
    t.basis = b;
    t.density_id = d.id();
    t.modes = modes;
    const int n = t.N();
    t.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    t.provenance.assign(static_cast<std::size_t>(n) * n, Provenance::closed_form);
#pragma omp parallel for schedule(dynamic, 1) if (opt.parallel)
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            if (opt.diagonal_only && i != j) continue;
            if (opt.band >= 0 && j - i > opt.band) continue;
            MatrixElement e;
            if (opt.force_quadrature) {
                e = {matrix_element_quadrature(d, b, modes[i], modes[j]), Provenance::quadrature};
            } else {
                e = matrix_element(d, b, modes[i], modes[j]);
            }
            t.at(i, j) = e.value;
            t.at(j, i) = e.value;
            t.provenance[static_cast<std::size_t>(i) * n + j] = e.provenance;
            t.provenance[static_cast<std::size_t>(j) * n + i] = e.provenance;
        }
    }
    return t;
}

MatrixElementTable build_w_table(const DensitySpec& d, const BasisSpec& b, int N, const TableOptions& opt) {
    MatrixElementTable t;
    t.basis = b;
    t.density_id = d.id() + ":W";
    t.modes = enumerate_modes(b, N);
    t.entries.assign(static_cast<std::size_t>(N) * N, 0.0);
    t.provenance.assign(static_cast<std::size_t>(N) * N, Provenance::closed_form);
#pragma omp parallel for schedule(dynamic, 1) if (opt.parallel)
    for (int i = 0; i < N; ++i) {
        for (int j = i; j < N; ++j) {
            if (opt.diagonal_only && i != j) continue;
            if (opt.band >= 0 && j - i > opt.band) continue;
            const MatrixElement e = opt.force_quadrature
                                        ? MatrixElement{w_matrix_element_quadrature(d, b, i + 1, j + 1), Provenance::quadrature}
                                        : w_matrix_element(d, b, i + 1, j + 1);
            t.at(i, j) = t.at(j, i) = e.value;
            t.provenance[static_cast<std::size_t>(i) * N + j] = t.provenance[static_cast<std::size_t>(j) * N + i] =
                e.provenance;
        }
    }
    return t;
}

std::vector<double> cosine_moments(const DensitySpec& d, int kmax) {
    if (d.dim != 1) throw BasisError("cosine moments need a 1D density");
    const double L = d.L;
    const int panels = std::max(4, kmax / 2 + 4);
    const std::vector<double> edges = uniform_edges(-L, L, panels, d.breakpoints());
    std::vector<double> gx, gw;
    const int order = 24;
    gauss_legendre(order, gx, gw);
    std::vector<double> xs, ws;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int i = 0; i < order; ++i) {
            xs.push_back(c + h * gx[i]);
            ws.push_back(h * gw[i] * d(c + h * gx[i]) / (2.0 * L));
        }
    }
    std::vector<double> C(kmax + 1, 0.0);
    const int nk = kmax + 1;
#pragma omp parallel for schedule(static)
    for (int k = 0; k < nk; ++k) {
        double s = 0.0;
        for (std::size_t q = 0; q < xs.size(); ++q) s += ws[q] * std::cos(k * kPi * (xs[q] + L) / (2.0 * L));
        C[k] = s;
    }
    return C;
}

MatrixElementTable build_table_moments(const DensitySpec& d, const BasisSpec& b, int N, bool include_zero) {
    check_compatible(d, b);
    if (b.dim != 1 || b.bc == BC::PP) throw BasisError("moment tables support 1D DD/NN/DN/ND");
    MatrixElementTable t;
    t.basis = b;
    t.density_id = d.id();
    t.modes = enumerate_modes(b, N, include_zero && b.bc == BC::NN);
    const int n = t.N();
    int kmax = 0;
    for (const auto& m : t.modes) kmax = std::max(kmax, b.bc == BC::NN ? nn_k(m) : m.nx);
    const std::vector<double> C = cosine_moments(d, 2 * kmax + 1);
    t.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    t.provenance.assign(static_cast<std::size_t>(n) * n, Provenance::quadrature);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const ModeIndex &a = t.modes[i], &c = t.modes[j];
            double v = 0.0;
            switch (b.bc) {
                case BC::DD: v = C[std::abs(a.nx - c.nx)] - C[a.nx + c.nx]; break;
                case BC::NN: {
                    const int ka = nn_k(a), kc = nn_k(c);
                    v = C[std::abs(ka - kc)] + C[ka + kc];
                    if (ka == 0 && kc == 0) v = C[0];
                    else if (ka == 0 || kc == 0) v /= std::sqrt(2.0);
                    break;
                }
                case BC::DN: v = C[std::abs(a.nx - c.nx)] - C[a.nx + c.nx - 1]; break;
                case BC::ND: v = C[std::abs(a.nx - c.nx)] + C[a.nx + c.nx - 1]; break;
                default: break;
            }
            t.at(i, j) = v;
        }
    }
    return t;
}

}  // namespace spz
