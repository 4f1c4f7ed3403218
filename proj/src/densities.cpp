#include "spectral/densities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spectral/quadrature.hpp"
#include "spectral/specfun.hpp"

namespace spz {

namespace {

double positive_or_throw(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DensityError(std::string(what) + " must be positive");
    return v;
}

void check_positive_on_grid(const DensitySpec& d) {
    const int n = 2001;
    for (int i = 0; i < n; ++i) {
        const double x = -d.L + 2.0 * d.L * i / (n - 1);
        if (!(d(x) > 0.0)) throw DensityError("density is not positive on the domain");
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

std::string kind_name(DensityKind k) {
    switch (k) {
        case DensityKind::constant: return "constant";
        case DensityKind::piecewise: return "piecewise";
        case DensityKind::sinusoidal: return "sinusoidal";
        case DensityKind::borg: return "borg";
        case DensityKind::oscillating: return "oscillating";
        case DensityKind::fourier_periodic: return "fourier_periodic";
        case DensityKind::deformed_square: return "deformed_square";
        case DensityKind::annulus_map: return "annulus_map";
        case DensityKind::staircase: return "staircase";
        case DensityKind::polynomial: return "polynomial";
    }
    return "unknown";
}

DensityKind kind_from_name(const std::string& name) {
    for (DensityKind k : {DensityKind::constant, DensityKind::piecewise, DensityKind::sinusoidal,
                          DensityKind::borg, DensityKind::oscillating, DensityKind::fourier_periodic,
                          DensityKind::deformed_square, DensityKind::annulus_map, DensityKind::staircase,
                          DensityKind::polynomial}) {
        if (kind_name(k) == name) return k;
    }
    throw DensityError("unknown density kind: " + name);
}

double DensitySpec::operator()(double x, double y) const {
    switch (kind) {
        case DensityKind::constant: return p[0];
        case DensityKind::piecewise: {
            const double v = (x < -L + p[2]) ? p[0] : p[1];
            return 1.0 / (v * v);
        }
        case DensityKind::sinusoidal: return 1.0 + p[0] * std::sin(kPi * x / (2.0 * L));
        case DensityKind::borg: {
            const double a = p[0];
            const double q = 1.0 + a * (x + 0.5);
            return (a + 1.0) * (a + 1.0) / (q * q * q * q);
        }
        case DensityKind::oscillating: {
            const double eps = 2.0 * L * p[1];
            return 2.0 + p[0] * std::sin(2.0 * kPi * (x + p[2]) / eps);
        }
        case DensityKind::fourier_periodic: {
            double v = 0.5 * p[2];
            for (std::size_t j = 0; j < coeffs.size(); ++j)
                v += coeffs[j] * std::cos(2.0 * kPi * (j + 1.0) * x / p[0]);
            return v;
        }
        case DensityKind::deformed_square: {
            const double a = p[0];
            return 3.0 * (4.0 * a * a * y * y + (2.0 * a * x + 1.0) * (2.0 * a * x + 1.0)) /
                   (8.0 * a * a * L * L + 3.0);
        }
        case DensityKind::annulus_map: return std::exp(2.0 * (x - L));
        case DensityKind::staircase: {
            const double h = 2.0 * L / cells;
            int k = static_cast<int>(std::floor((x + L) / h));
            k = std::clamp(k, 0, cells - 1);
            return (*inner)(-L + (k + 0.5) * h, y);
        }
        case DensityKind::polynomial: {
            double v = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
            return v;
        }
    }
    return 0.0;
}

double DensitySpec::dx(double x) const {
    switch (kind) {
        case DensityKind::constant:
        case DensityKind::piecewise:
        case DensityKind::staircase: return 0.0;
        case DensityKind::sinusoidal: return p[0] * kPi / (2.0 * L) * std::cos(kPi * x / (2.0 * L));
        case DensityKind::borg: {
            const double a = p[0];
            const double q = 1.0 + a * (x + 0.5);
            return -4.0 * a * (a + 1.0) * (a + 1.0) / std::pow(q, 5);
        }
        case DensityKind::oscillating: {
            const double eps = 2.0 * L * p[1];
            return p[0] * 2.0 * kPi / eps * std::cos(2.0 * kPi * (x + p[2]) / eps);
        }
        case DensityKind::fourier_periodic: {
            double v = 0.0;
            for (std::size_t j = 0; j < coeffs.size(); ++j) {
                const double k = 2.0 * kPi * (j + 1.0) / p[0];
                v -= coeffs[j] * k * std::sin(k * x);
            }
            return v;
        }
        case DensityKind::deformed_square: {
            const double a = p[0];
            return 12.0 * a * (2.0 * a * x + 1.0) / (8.0 * a * a * L * L + 3.0);
        }
        case DensityKind::annulus_map: return 2.0 * std::exp(2.0 * (x - L));
        case DensityKind::polynomial: {
            double v = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 1;) v = v * x + k * coeffs[k];
            return v;
        }
    }
    return 0.0;
}

std::string DensitySpec::id() const {
    std::ostringstream os;
    os << kind_name(kind);
    switch (kind) {
        case DensityKind::constant: os << "(c=" << fmt(p[0]) << ",L=" << fmt(L) << ",dim=" << dim << ")"; break;
        case DensityKind::piecewise:
            os << "(v1=" << fmt(p[0]) << ",v2=" << fmt(p[1]) << ",r=" << fmt(p[2]) << ",R=" << fmt(p[3]) << ")";
            break;
        case DensityKind::sinusoidal: os << "(eta=" << fmt(p[0]) << ",L=" << fmt(L) << ")"; break;
        case DensityKind::borg: os << "(alpha=" << fmt(p[0]) << ")"; break;
        case DensityKind::oscillating:
            os << "(eta=" << fmt(p[0]) << ",eps_bar=" << fmt(p[1]) << ",ell=" << fmt(p[2]) << ",L=" << fmt(L) << ")";
            break;
        case DensityKind::fourier_periodic:
            os << "(Delta=" << fmt(p[0]) << ",M=" << fmt(p[1]) << ",J=" << coeffs.size() << ")";
            break;
        case DensityKind::deformed_square: os << "(alpha=" << fmt(p[0]) << ",L=" << fmt(L) << ")"; break;
        case DensityKind::annulus_map: os << "(r=" << fmt(p[0]) << ")"; break;
        case DensityKind::staircase: os << "(N=" << cells << "," << inner->id() << ")"; break;
        case DensityKind::polynomial: os << "(deg=" << (coeffs.empty() ? 0 : coeffs.size() - 1) << ",L=" << fmt(L) << ")"; break;
    }
    return os.str();
}

std::vector<double> DensitySpec::breakpoints() const {
    std::vector<double> pts;
    switch (kind) {
        case DensityKind::piecewise: pts.push_back(-L + p[2]); break;
        case DensityKind::oscillating: {
            // half periods of the oscillation
            const double half = L * p[1];
            const double start = std::ceil((-L + p[2]) / half) * half - p[2];
            for (double x = start; x < L; x += half)
                if (x > -L) pts.push_back(x);
            break;
        }
        case DensityKind::fourier_periodic: {
            if (!coeffs.empty()) {
                const double half = 0.5 * p[0] / coeffs.size();
                for (double x = -L + half; x < L; x += half) pts.push_back(x);
            }
            break;
        }
        case DensityKind::staircase: {
            const double h = 2.0 * L / cells;
            for (int k = 1; k < cells; ++k) pts.push_back(-L + k * h);
            break;
        }
        default: break;
    }
    return pts;
}

DensitySpec make_constant(double value, double L, int dim) {
    DensitySpec d;
    d.kind = DensityKind::constant;
    d.p[0] = positive_or_throw(value, "constant density");
    d.L = positive_or_throw(L, "L");
    d.Ly = L;
    d.dim = dim;
    return d;
}

DensitySpec make_piecewise(double v1, double v2, double r, double R) {
    DensitySpec d;
    d.kind = DensityKind::piecewise;
    positive_or_throw(v1, "upsilon1");
    positive_or_throw(v2, "upsilon2");
    positive_or_throw(R, "R");
    if (!(r > 0.0 && r < R)) throw DensityError("piecewise: need 0 < r < R");
    d.p = {v1, v2, r, R};
    d.L = 0.5 * R;
    return d;
}

DensitySpec make_sinusoidal(double eta, double L) {
    if (!(std::abs(eta) < 1.0)) throw DensityError("sinusoidal: |eta| < 1 required for positivity");
    DensitySpec d;
    d.kind = DensityKind::sinusoidal;
    d.p[0] = eta;
    d.L = positive_or_throw(L, "L");
    return d;
}

DensitySpec make_borg(double alpha) {
    if (!(alpha > -1.0)) throw DensityError("borg: alpha > -1 required");
    DensitySpec d;
    d.kind = DensityKind::borg;
    d.p[0] = alpha;
    d.L = 0.5;
    return d;
}

DensitySpec make_oscillating(double eta, double eps_bar, double ell, double L) {
    if (!(std::abs(eta) < 2.0)) throw DensityError("oscillating: |eta| < 2 required for positivity");
    DensitySpec d;
    d.kind = DensityKind::oscillating;
    d.p = {eta, positive_or_throw(eps_bar, "eps_bar"), ell, 0.0};
    d.L = positive_or_throw(L, "L");
    return d;
}

double fourier_a0(const std::vector<double>& a, double Delta, double M, double L) {
    double a0 = M / L;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double jj = j + 1.0;
        a0 -= a[j] * Delta / (jj * L * kPi) * std::sin(2.0 * L * jj * kPi / Delta);
    }
    return a0;
}

DensitySpec make_fourier_periodic(const std::vector<double>& a, double Delta, double M, double L) {
    DensitySpec d;
    d.kind = DensityKind::fourier_periodic;
    d.L = positive_or_throw(L, "L");
    d.coeffs = a;
    d.p = {positive_or_throw(Delta, "Delta"), positive_or_throw(M, "M"), fourier_a0(a, Delta, M, L), 0.0};
    check_positive_on_grid(d);
    return d;
}

DensitySpec make_deformed_square(double alpha, double L) {
    if (!(std::abs(alpha) <= 0.5)) throw DensityError("deformed square: |alpha| <= 1/2 required");
    DensitySpec d;
    d.kind = DensityKind::deformed_square;
    d.dim = 2;
    d.p[0] = alpha;
    d.L = d.Ly = positive_or_throw(L, "L");
    return d;
}

DensitySpec make_annulus(double r) {
    if (!(r > 0.0 && r < 1.0)) throw DensityError("annulus: 0 < r < 1 required");
    DensitySpec d;
    d.kind = DensityKind::annulus_map;
    d.dim = 2;
    d.p[0] = r;
    d.L = -0.5 * std::log(r);
    d.Ly = kPi;
    return d;
}

DensitySpec make_staircase(const DensitySpec& inner, int N) {
    if (N < 1) throw DensityError("staircase: N >= 1 required");
    DensitySpec d;
    d.kind = DensityKind::staircase;
    d.dim = inner.dim;
    d.L = inner.L;
    d.Ly = inner.Ly;
    d.inner = std::make_shared<const DensitySpec>(inner);
    d.cells = N;
    return d;
}

DensitySpec make_polynomial(const std::vector<double>& c, double L) {
    DensitySpec d;
    d.kind = DensityKind::polynomial;
    d.coeffs = c;
    d.L = positive_or_throw(L, "L");
    check_positive_on_grid(d);
    return d;
}

DensitySpec make_density(const std::string& kind, const std::vector<std::pair<std::string, double>>& params) {
    auto get = [&](const std::string& key, double def, bool required) {
        for (const auto& kv : params)
            if (kv.first == key) return kv.second;
        if (required) throw DensityError("missing parameter '" + key + "' for " + kind);
        return def;
    };
    switch (kind_from_name(kind)) {
        case DensityKind::constant: return make_constant(get("c", 1.0, false), get("L", 0.5, false), static_cast<int>(get("dim", 1, false)));
        case DensityKind::piecewise:
            return make_piecewise(get("v1", 0, true), get("v2", 0, true), get("r", 0, true), get("R", 1.0, false));
        case DensityKind::sinusoidal: return make_sinusoidal(get("eta", 0, true), get("L", 0.5, false));
        case DensityKind::borg: return make_borg(get("alpha", 0, true));
        case DensityKind::oscillating:
            return make_oscillating(get("eta", 0, true), get("eps_bar", 2.0 / 101.0, false), get("ell", 0.0, false),
                                    get("L", 0.5, false));
        case DensityKind::deformed_square: return make_deformed_square(get("alpha", 0, true), get("L", 1.0, false));
        case DensityKind::annulus_map: return make_annulus(get("r", 0, true));
        case DensityKind::fourier_periodic: {
            std::vector<double> a;
            for (int j = 1; j < 64; ++j) {
                const double v = get("a" + std::to_string(j), 0.0, false);
                a.push_back(v);
            }
            while (!a.empty() && a.back() == 0.0) a.pop_back();
            return make_fourier_periodic(a, get("Delta", 0, true), get("M", 0, true), get("L", 0.5, false));
        }
        case DensityKind::polynomial: {
            std::vector<double> c;
            for (int k = 0; k < 16; ++k) c.push_back(get("c" + std::to_string(k), 0.0, false));
            while (c.size() > 1 && c.back() == 0.0) c.pop_back();
            return make_polynomial(c, get("L", 0.5, false));
        }
        case DensityKind::staircase: throw DensityError("staircase must be built from an inner density");
    }
    throw DensityError("unhandled density kind");
}

double sigma_functional_quadrature(const DensitySpec& d) {
    if (d.dim != 1) throw DensityError("sigma functional is defined for strings");
    auto f = [&d](double x) { return std::sqrt(d(x)); };
    return integrate(f, -d.L, d.L, 1e-14, 1e-14, d.breakpoints()).value;
}

double sigma_functional(const DensitySpec& d) {
    if (d.dim != 1) throw DensityError("sigma functional is defined for strings");
    switch (d.kind) {
        case DensityKind::constant: return 2.0 * d.L * std::sqrt(d.p[0]);
        case DensityKind::piecewise: return d.p[2] / d.p[0] + (d.p[3] - d.p[2]) / d.p[1];
        case DensityKind::oscillating: {
            const double eta = d.p[0], eb = d.p[1], ell = d.p[2], L = d.L;
            const double m = 2.0 * eta / (eta + 2.0);
            const double phi1 = ((eb + 2.0) * L - 2.0 * ell) * kPi / (4.0 * eb * L);
            const double phi2 = (eb * L - 2.0 * (L + ell)) * kPi / (4.0 * eb * L);
            return 2.0 * L * eb / kPi * std::sqrt(eta + 2.0) *
                   (elliptic_e_incomplete(phi1, m) - elliptic_e_incomplete(phi2, m));
        }
        case DensityKind::staircase: {
            const double h = 2.0 * d.L / d.cells;
            double s = 0.0;
            for (int k = 0; k < d.cells; ++k) s += std::sqrt((*d.inner)(-d.L + (k + 0.5) * h));
            return h * s;
        }
        default: return sigma_functional_quadrature(d);
    }
}

double mass_quadrature(const DensitySpec& d) {
    if (d.dim == 1) {
        return integrate([&d](double x) { return d(x); }, -d.L, d.L, 1e-14, 1e-14, d.breakpoints()).value;
    }
    auto inner = [&d](double x) {
        return integrate([&d, x](double y) { return d(x, y); }, -d.Ly, d.Ly, 1e-14, 1e-14).value;
    };
    return integrate(inner, -d.L, d.L, 1e-13, 1e-13, d.breakpoints()).value;
}

double mass(const DensitySpec& d) {
    const double L = d.L;
    switch (d.kind) {
        case DensityKind::constant: return d.p[0] * (d.dim == 1 ? 2.0 * L : 4.0 * L * d.Ly);
        case DensityKind::piecewise: return d.p[2] / (d.p[0] * d.p[0]) + (d.p[3] - d.p[2]) / (d.p[1] * d.p[1]);
        case DensityKind::sinusoidal: return 2.0 * L;
        case DensityKind::borg: {
            const double a = d.p[0];
            return (3.0 + 3.0 * a + a * a) / (3.0 * (1.0 + a));
        }
        case DensityKind::oscillating: {
            const double eps = 2.0 * L * d.p[1];
            return 4.0 * L + d.p[0] * eps / (2.0 * kPi) *
                                 (std::cos(2.0 * kPi * (-L + d.p[2]) / eps) - std::cos(2.0 * kPi * (L + d.p[2]) / eps));
        }
        case DensityKind::fourier_periodic: return d.p[1];
        case DensityKind::deformed_square: return 4.0 * L * d.Ly;
        case DensityKind::annulus_map: return kPi * (1.0 - d.p[0] * d.p[0]);
        case DensityKind::staircase: {
            double s = 0.0;
            const double h = 2.0 * L / d.cells;
            for (int k = 0; k < d.cells; ++k) s += (*d.inner)(-L + (k + 0.5) * h);
            return s * h * (d.dim == 2 ? 2.0 * d.Ly : 1.0);
        }
        case DensityKind::polynomial: {
            double s = 0.0;
            for (std::size_t k = 0; k < d.coeffs.size(); ++k)
                s += d.coeffs[k] * (std::pow(L, k + 1.0) - std::pow(-L, k + 1.0)) / (k + 1.0);
            return s;
        }
    }
    return mass_quadrature(d);
}

PerturbationSplit perturbation_split(const DensitySpec& d) {
    PerturbationSplit ps;
    if (d.dim == 1) {
        const double sig = sigma_functional(d);
        ps.sigma_bar = sig * sig / (4.0 * d.L * d.L);
    } else {
        ps.sigma_bar = mass(d) / (4.0 * d.L * d.Ly);
    }
    const double sb = ps.sigma_bar;
    const DensitySpec copy = d;
    ps.delta = [copy, sb](double x, double y) { return copy(x, y) - sb; };
    double sup = 0.0;
    if (d.dim == 1) {
        for (int i = 0; i <= 10000; ++i) {
            const double x = -d.L + 2.0 * d.L * i / 10000.0;
            sup = std::max(sup, std::abs(d(x) - sb));
        }
    } else {
        for (int i = 0; i <= 100; ++i)
            for (int j = 0; j <= 100; ++j) {
                const double x = -d.L + 2.0 * d.L * i / 100.0, y = -d.Ly + 2.0 * d.Ly * j / 100.0;
                sup = std::max(sup, std::abs(d(x, y) - sb));
            }
    }
    ps.sup_norm = sup;
    ps.first_order_doubtful = sup > 0.5 * sb;
    return ps;
}

double conformal_density(ConformalMap map, double param, double x, double y) {
    if (map == ConformalMap::deformed_square) return make_deformed_square(param)(x, y);
    return make_annulus(param)(x, y);
}

double deformed_square_perimeter(double alpha, double L) {
    const double norm = std::sqrt(1.0 + 8.0 * alpha * alpha * L * L / 3.0);
    // |f'(z)| = |1 + 2 alpha z| / norm along the four edges
    auto edge_x = [&](double xfix) {
        return integrate([&](double y) { return std::hypot(1.0 + 2.0 * alpha * xfix, 2.0 * alpha * y) / norm; }, -L, L,
                         1e-14, 1e-14)
            .value;
    };
    auto edge_y = [&](double yfix) {
        return integrate([&](double x) { return std::hypot(1.0 + 2.0 * alpha * x, 2.0 * alpha * yfix) / norm; }, -L, L,
                         1e-14, 1e-14)
            .value;
    };
    return edge_x(L) + edge_x(-L) + edge_y(L) + edge_y(-L);
}

double thin_annulus_delta(double r, double x) {
    const double L = -0.5 * std::log(r);
    return -2.0 * L + 2.0 * x * (1.0 - 2.0 * L);
}

}  // namespace spz
