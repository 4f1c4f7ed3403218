#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "spectral/bases.hpp"
#include "spectral/continuation.hpp"
#include "spectral/densities.hpp"
#include "spectral/identities.hpp"
#include "spectral/oracles.hpp"
#include "spectral/pertzeta.hpp"
#include "spectral/specfun.hpp"

using namespace spz;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "szeta.report/1";
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string command;
    std::string preset;
    std::string density_file;
    std::string spectrum_file;
    std::string bc = "DD";
    std::vector<double> s;
    int order = 2;
    int ntrunc = 0;
    int grid = 60;
    std::string format = "json";
    std::string out;
    std::string method = "auto";
    std::string which;
    std::string scale = "desk";
    std::map<std::string, double> params;
    double from = 0.0, to = 0.0;
    int points = 0;

    Json to_json() const {
        Json j;
        j["command"] = command;
        if (!preset.empty()) j["preset"] = preset;
        if (!density_file.empty()) j["density_file"] = density_file;
        if (!spectrum_file.empty()) j["spectrum_file"] = spectrum_file;
        j["bc"] = bc;
        if (!s.empty()) j["s"] = s;
        j["order"] = order;
        j["ntrunc"] = ntrunc;
        j["grid"] = grid;
        j["method"] = method;
        if (!which.empty()) j["which"] = which;
        j["scale"] = scale;
        Json p = Json::object();
        for (const auto& [k, v] : params) p[k] = v;
        j["params"] = p;
        if (points > 0) {
            j["from"] = from;
            j["to"] = to;
            j["points"] = points;
        }
        return j;
    }
};

std::string fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return "fnv1a64:" + os.str();
}

double param(const Config& c, const std::string& key, double fallback) {
    const auto it = c.params.find(key);
    return it == c.params.end() ? fallback : it->second;
}

// a zeta value with the truncation it was computed at, 0 for closed forms
struct Evaluated {
    ZetaValue z;
    int truncation = 0;
    Evaluated(ZetaValue v, int n = 0) : z(std::move(v)), truncation(n) {}
};

Json zeta_json(const Evaluated& e) {
    Json j = Json::parse(e.z.to_json());
    if (e.truncation > 0) j["truncation"] = e.truncation;
    return j;
}

PiecewiseParams piecewise_from(const Config& c) {
    return PiecewiseParams::from_alpha_beta(param(c, "alpha", 1.0), param(c, "beta", 1.0 / 3.0), param(c, "dv", 0.1));
}

DensitySpec density_from_json(const nlohmann::json& j) {
    if (!j.contains("kind")) throw ConfigError("density file needs a \"kind\" field");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "staircase") {
        if (!j.contains("inner") || !j.contains("N")) throw ConfigError("staircase density needs \"inner\" and \"N\"");
        return make_staircase(density_from_json(j["inner"]), j["N"].get<int>());
    }
    std::vector<std::pair<std::string, double>> p;
    if (j.contains("params"))
        for (const auto& [k, v] : j["params"].items()) p.emplace_back(k, v.get<double>());
    return make_density(kind, p);
}

DensitySpec density_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read density file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("density file is not valid JSON: ") + e.what());
    }
    return density_from_json(j);
}

BasisSpec basis_for(const DensitySpec& d, BC bc) {
    if (d.dim == 1) return basis_1d(bc, d.L);
    if (d.kind == DensityKind::annulus_map) return basis_annulus(bc == BC::DD ? BC::DP : bc, d.p[0]);
    return basis_rectangle(d.L, d.Ly);
}

int default_ntrunc(const DensitySpec& d) { return d.dim == 1 ? 400 : 24; }

// perturbative series on a table of the density
Evaluated series_zeta(const Config& c, const DensitySpec& d, BC bc, double s) {
    const BasisSpec b = basis_for(d, bc);
    const int n = c.ntrunc > 0 ? c.ntrunc : default_ntrunc(d);
    TableOptions to;
    to.diagonal_only = c.order == 1;
    const MatrixElementTable t = build_table(d, b, enumerate_modes(b, n), to);
    const PertOptions po = pert_options_for(d);
    return {c.order == 1 ? z_diag(s, t, po) : z_perturbative(s, t, po), n};
}

Evaluated mellin_for(const Config& c, const DensitySpec& d, double s) {
    if (d.dim != 1) throw ConfigError("Mellin evaluation is available for strings only");
    const BasisSpec b = basis_1d(BC::DD, d.L);
    const int n = c.ntrunc > 0 ? c.ntrunc : 80;
    return {mellin_zeta(s, build_w_table(d, b, n), c.order, heat_options_for(d)), n};
}

bool method_is(const Config& c, const char* m) { return c.method == m; }

Evaluated preset_zeta(const Config& c, double s) {
    const BC bc = bc_from_name(c.bc);
    const std::string& p = c.preset;
    const bool closed = method_is(c, "auto") || method_is(c, "closed-form");
    if (p == "piecewise") {
        const PiecewiseParams pp = piecewise_from(c);
        if (closed) return piecewise_zeta(bc, s, pp);
        if (method_is(c, "series")) return series_zeta(c, pp.density(), bc, s);
    } else if (p == "sinusoidal") {
        const double eta = param(c, "eta", 0.1), L = param(c, "L", 0.5);
        if (closed) return sinusoidal_zeta(s, eta, L);
        if (method_is(c, "series")) return series_zeta(c, make_sinusoidal(eta, L), bc, s);
        if (method_is(c, "mellin")) return mellin_for(c, make_sinusoidal(eta, L), s);
    } else if (p == "borg") {
        const DensitySpec d = make_borg(param(c, "alpha", 0.5));
        if (closed) {
            ZetaValue z = homogeneous_zeta(basis_1d(BC::DD, 0.5), s);
            z.method = "closed-form(isospectral)," + z.method;
            return z;
        }
        if (method_is(c, "series")) return series_zeta(c, d, bc, s);
        if (method_is(c, "mellin")) return mellin_for(c, d, s);
    } else if (p == "oscillating" || p == "staircase") {
        const double eta = param(c, "eta", 0.1), eb = param(c, "eps_bar", 2.0 / 101.0), ell = param(c, "ell", 0.0),
                     L = param(c, "L", 0.5);
        const int cells = int(param(c, "cells", 50));
        if (closed)
            return p == "oscillating" ? oscillating_zeta(s, eta, eb, ell, L) : staircase_zeta(s, eta, eb, ell, L, cells);
        const DensitySpec d = make_oscillating(eta, eb, ell, L);
        if (method_is(c, "series")) return series_zeta(c, p == "oscillating" ? d : make_staircase(d, cells), bc, s);
    } else if (p == "square") {
        if (closed) return square_zeta(s, param(c, "L", 1.0));
    } else if (p == "deformed-square") {
        const double a = param(c, "alpha", 0.1), L = param(c, "L", 1.0);
        if (method_is(c, "closed-form")) {
            if (s != 2.0 || c.order != 1) throw ConfigError("closed-form deformed square zeta exists for s = 2, order 1");
            ZetaValue z;
            z.s = s;
            z.value = deformed_square_z2_diag(a, L);
            z.method = "closed-form(diag)";
            return z;
        }
        if (method_is(c, "auto") || method_is(c, "series")) return series_zeta(c, make_deformed_square(a, L), BC::DD, s);
    } else if (p == "annulus") {
        const double r = param(c, "r", 0.5);
        if (method_is(c, "closed-form")) {
            if (s != 2.0 || c.order != 1) throw ConfigError("closed-form annulus zeta exists for s = 2, order 1");
            ZetaValue z;
            z.s = s;
            z.value = annulus_z2_diag(r);
            z.method = "closed-form(diag)";
            return z;
        }
        if (method_is(c, "auto") || method_is(c, "series")) return series_zeta(c, make_annulus(r), BC::DP, s);
        if (method_is(c, "oracle")) {
            const int n = c.ntrunc > 0 ? c.ntrunc : 10000;
            return {zeta_from_spectrum(s, annulus_bessel_spectrum(r, n), n), n};
        }
    } else if (p == "thin-annulus") {
        if (closed) return thin_annulus_zeta(bc == BC::DD ? BC::DP : bc, s, param(c, "r", 0.99));
    } else if (p == "cylinder") {
        const double r = param(c, "r", 0.999);
        const BC b2 = bc == BC::DD ? BC::DP : bc;
        if (closed) return cylinder_lift([&](double x) { return thin_annulus_zeta(b2, x, r); }, s);
    } else {
        throw ConfigError("unknown preset '" + p + "'");
    }
    throw ConfigError("method '" + c.method + "' is not available for preset '" + p + "'");
}

Json cmd_zeta(const Config& c) {
    if (c.s.empty()) throw ConfigError("zeta needs at least one --s value");
    Json res = Json::array();
    if (!c.spectrum_file.empty()) {
        std::ifstream in(c.spectrum_file);
        if (!in) throw ConfigError("cannot read spectrum file " + c.spectrum_file);
        std::stringstream ss;
        ss << in.rdbuf();
        const SpectrumOracle o = SpectrumOracle::from_csv(ss.str());
        const int n = c.ntrunc > 0 ? c.ntrunc : o.count();
        for (double s : c.s) res.push_back(zeta_json({zeta_from_spectrum(s, o, n), n}));
        return res;
    }
    if (!c.density_file.empty()) {
        const DensitySpec d = density_from_file(c.density_file);
        for (double s : c.s)
            res.push_back(zeta_json(method_is(c, "mellin") ? mellin_for(c, d, s)
                                                            : series_zeta(c, d, bc_from_name(c.bc), s)));
        return res;
    }
    if (c.preset.empty()) throw ConfigError("zeta needs --preset, --density-file or --spectrum-file");
    for (double s : c.s) res.push_back(zeta_json(preset_zeta(c, s)));
    return res;
}

Json divergence_json(const DivergenceReport& r) {
    Json j;
    j["finite"] = r.finite;
    j["order"] = r.order;
    j["jump1"] = r.jump1;
    j["jump3"] = r.jump3;
    j["residue"] = r.residue;
    if (!r.warning.empty()) j["warning"] = r.warning;
    return j;
}

Json cutoff_json(const CutoffResult& r) {
    Json j;
    j["c2"] = r.c2;
    j["c0"] = r.c0;
    j["c1"] = r.c1;
    j["removable"] = r.removable;
    j["log_coeff"] = r.log_coeff;
    j["fit_residual"] = r.fit_residual;
    j["modes"] = r.modes;
    return j;
}

Json cmd_casimir(const Config& c) {
    Json j;
    const BC bc = bc_from_name(c.bc);
    const std::string& p = c.preset;
    if (!c.density_file.empty()) {
        const DensitySpec d = density_from_file(c.density_file);
        if (d.dim != 1) throw ConfigError("casimir from a density file is available for strings only");
        const DivergenceReport dr = divergence_check(d);
        j["finite"] = dr.finite;
        j["divergence"] = divergence_json(dr);
        const CutoffResult cr = cutoff_casimir(d, basis_1d(bc, d.L));
        j["energy"] = cr.c0;
        j["cutoff"] = cutoff_json(cr);
        j["method"] = "cutoff";
        return j;
    }
    if (p == "piecewise") {
        const PiecewiseParams pp = piecewise_from(c);
        j["finite"] = true;
        j["energy"] = piecewise_casimir(bc, pp);
        j["method"] = "closed-form(first-order)";
        j["cutoff"] = cutoff_json(cutoff_casimir(pp.density(), basis_1d(bc, 0.5 * pp.R)));
    } else if (p == "sinusoidal") {
        const double eta = param(c, "eta", 0.1), L = param(c, "L", 0.5);
        const LaurentExpansion le = sinusoidal_laurent(eta, L);
        j["finite"] = le.coeff_minus1 == 0.0;
        j["pole_coefficient"] = 0.5 * le.coeff_minus1;
        j["residue"] = le.coeff_minus1;
        j["finite_part"] = 0.5 * le.coeff_0;
        j["energy"] = le.coeff_minus1 == 0.0 ? Json(0.5 * le.coeff_0) : Json(nullptr);
        j["dd_plus_nn_energy"] = 0.5 * dd_plus_nn_zeta(-0.5, make_sinusoidal(eta, L)).re();
        j["method"] = "laurent";
    } else if (p == "borg") {
        j["finite"] = true;
        j["energy"] = 0.5 * homogeneous_zeta(basis_1d(BC::DD, 0.5), -0.5).re();
        j["method"] = "closed-form(isospectral)";
    } else if (p == "oscillating" || p == "staircase") {
        const double eta = param(c, "eta", 0.1), eb = param(c, "eps_bar", 2.0 / 101.0), ell = param(c, "ell", 0.0),
                     L = param(c, "L", 0.5);
        const int cells = int(param(c, "cells", 50));
        DensitySpec d = make_oscillating(eta, eb, ell, L);
        if (p == "staircase") d = make_staircase(d, cells);
        const DivergenceReport dr = divergence_check(d);
        j["finite"] = dr.finite;
        j["divergence"] = divergence_json(dr);
        const ZetaValue z = p == "oscillating" ? oscillating_zeta(-0.5, eta, eb, ell, L)
                                               : staircase_zeta(-0.5, eta, eb, ell, L, cells);
        j["zeta"] = zeta_json(z);
        j["energy"] = z.pole_order == 0 ? Json(0.5 * z.re()) : Json(nullptr);
        if (z.pole_order != 0) j["pole_coefficient"] = 0.5 * z.residue;
        j["method"] = "closed-form(first-order)";
    } else if (p == "square") {
        const ZetaValue z = square_zeta(-0.5, param(c, "L", 1.0));
        j["finite"] = z.pole_order == 0;
        j["energy"] = 0.5 * z.re();
        j["method"] = "closed-form";
    } else if (p == "annulus" || p == "thin-annulus") {
        const double r = param(c, "r", 0.99);
        j["finite"] = true;
        j["te"] = thin_annulus_casimir(Polarization::TE, r);
        j["tm"] = thin_annulus_casimir(Polarization::TM, r);
        j["energy"] = thin_annulus_casimir(Polarization::EM, r);
        j["reference"] = -riemann_zeta(3.0).value.real() / (4.0 * (1 - r) * (1 - r));
        j["method"] = "thin-annulus";
    } else if (p == "cylinder") {
        const CylinderResult cr = cylinder_casimir(param(c, "r", 0.999));
        j["finite"] = true;
        j["energy"] = cr.numeric;
        j["reference"] = cr.closed_form;
        j["rel_diff"] = cr.rel_diff;
        j["stable"] = cr.stable;
        j["method"] = "dimensional-lift";
    } else if (p.empty()) {
        throw ConfigError("casimir needs --preset or --density-file");
    } else {
        throw ConfigError("unknown preset '" + p + "'");
    }
    return j;
}

Json row(const std::string& key, double x, const std::vector<std::pair<std::string, std::pair<double, double>>>& cols) {
    Json j;
    j[key] = x;
    for (const auto& [name, vp] : cols) {
        Json c;
        c["value"] = vp.first;
        c["reference"] = vp.second;
        c["deviation"] = vp.first - vp.second;
        j[name] = c;
    }
    return j;
}

// second-order Z(2) on n and n/2 modes per axis; the truncation error decays as n^-2
double z2_extrapolated(const DensitySpec& d, const BasisSpec& b, int n) {
    if (n < 4) throw ConfigError("table needs --ntrunc >= 4");
    auto z = [&](int m) { return z_perturbative(2.0, build_table(d, b, enumerate_modes(b, m)), pert_options_for(d)).re(); };
    const double z1 = z(n), z2 = z(n / 2);
    return z1 + (z1 - z2) / 3.0;
}

Json cmd_table(const Config& c) {
    const bool full = c.scale == "full";
    if (c.scale != "desk" && c.scale != "full") throw ConfigError("--scale must be desk or full");
    Json rows = Json::array();
    if (c.which == "table1") {
        const double al[6] = {0.01, 0.02, 0.04, 0.1, 0.25, 0.5};
        const double pz[6] = {0.06970508, 0.06969987, 0.06967869, 0.06951485, 0.06805735, 0.06143122};
        const double pd[6] = {0.06968939, 0.06963720, 0.06942953, 0.06802167, 0.06073539, 0.04641541};
        const double pn[6] = {0.06970508, 0.06969987, 0.06967869, 0.06951486, 0.06805740, 0.06143131};
        const double pw[6] = {0.04950760, 0.04950758, 0.04950735, 0.04949801, 0.04918833, 0.04662053};
        const int grid = full ? 99 : c.grid;
        const int trusted = full ? (grid / 3) * (grid / 3) : std::min(400, (grid / 3) * (grid / 3));
        const int np = c.ntrunc > 0 ? c.ntrunc : 96;
        for (int i = 0; i < 6; ++i) {
            const DensitySpec d = make_deformed_square(al[i], 1.0);
            const double z = z2_extrapolated(d, basis_rectangle(1.0, 1.0), np);
            const SpectrumOracle o = collocation_2d(d, grid, trusted);
            const double num = zeta_from_spectrum(2.0, o, trusted).re();
            const double w = zeta_weyl(2.0, *o.weyl).re();
            rows.push_back(row("alpha", al[i], {{"Z", {z, pz[i]}},
                                                {"Z_diag", {deformed_square_z2_diag(al[i]), pd[i]}},
                                                {"Z_num", {num, pn[i]}},
                                                {"Z_weyl", {w, pw[i]}}}));
        }
    } else if (c.which == "table2") {
        const double rr[3] = {0.1, 0.5, 0.9};
        const double pz[3] = {0.0257710759, 0.0057419570, 0.0000578599};
        const double pd[3] = {0.0169570674, 0.0054705758, 0.0000577934};
        const double pn[3] = {0.0257710743, 0.0057419569, 0.0000578601};
        const double pw[3] = {0.030450016, 0.011541075, 0.000251957};
        const int n = full ? 100000 : 10000;
        const int np = c.ntrunc > 0 ? c.ntrunc : 96;
        for (int i = 0; i < 3; ++i) {
            const SpectrumOracle o = annulus_bessel_spectrum(rr[i], n);
            const double num = zeta_from_spectrum(2.0, o, n).re();
            const double w = zeta_weyl(2.0, *o.weyl).re();
            const double z = z2_extrapolated(make_annulus(rr[i]), basis_annulus(BC::DP, rr[i]), np);
            rows.push_back(row("r", rr[i], {{"Z", {z, pz[i]}},
                                            {"Z_diag", {annulus_z2_diag(rr[i]), pd[i]}},
                                            {"Z_num", {num, pn[i]}},
                                            {"Z_weyl", {w, pw[i]}}}));
        }
    } else {
        throw ConfigError("table needs --which table1 or table2");
    }
    return rows;
}

Json cmd_spectrum(const Config& c, std::string& csv) {
    const std::string& p = c.preset;
    SpectrumOracle o;
    const int n = c.ntrunc > 0 ? c.ntrunc : 200;
    if (p == "piecewise") {
        o = piecewise_roots(piecewise_from(c), n);
    } else if (p == "annulus") {
        o = annulus_bessel_spectrum(param(c, "r", 0.5), n);
    } else if (p == "deformed-square") {
        o = collocation_2d(make_deformed_square(param(c, "alpha", 0.1), param(c, "L", 1.0)), c.grid,
                           std::min(n, (c.grid / 3) * (c.grid / 3)));
    } else if (p == "sinusoidal" || p == "borg" || !c.density_file.empty()) {
        const DensitySpec d = !c.density_file.empty() ? density_from_file(c.density_file)
                              : p == "borg"           ? make_borg(param(c, "alpha", 0.5))
                                                      : make_sinusoidal(param(c, "eta", 0.1), param(c, "L", 0.5));
        if (d.dim != 1) throw ConfigError("Galerkin spectra from the CLI are available for strings only");
        const BasisSpec b = basis_1d(bc_from_name(c.bc), d.L);
        o = galerkin_spectrum(build_table(d, b, enumerate_modes(b, 4 * n)), n, weyl_data(d, b));
    } else {
        throw ConfigError("spectrum is available for piecewise, annulus, deformed-square, sinusoidal, borg or a density file");
    }
    csv = o.to_csv();
    Json j;
    j["method"] = method_name(o.method);
    j["count"] = o.count();
    j["eigenvalues"] = o.eigenvalues;
    if (o.weyl) {
        j["weyl"] = {{"dim", o.weyl->dim}, {"area", o.weyl->area}, {"perimeter", o.weyl->perimeter},
                     {"shift", o.weyl->shift}};
    }
    return j;
}

Json cmd_curve(const Config& c) {
    if (c.points < 2) throw ConfigError("curve needs --points >= 2");
    Json x = Json::array(), y = Json::array();
    for (int i = 0; i < c.points; ++i) {
        const double t = c.from + (c.to - c.from) * i / (c.points - 1);
        x.push_back(t);
        try {
            double v;
            if (c.which == "psi")
                v = psi_aux(t).value.real();
            else if (c.which == "xi")
                v = borg_xi_rhs(t);
            else if (c.which == "phi")
                v = oscillating_phi(t, param(c, "eps_bar", 2.0 / 101.0)).value.real();
            else
                throw ConfigError("curve needs --which psi, xi or phi");
            y.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
        } catch (const PoleError&) {
            y.push_back(nullptr);
        }
    }
    Json j;
    j["which"] = c.which;
    j["x"] = x;
    j["y"] = y;
    return j;
}

Json envelope(const Config& c) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = c.command;
    const Json cfg = c.to_json();
    j["config"] = cfg;
    j["config_hash"] = fnv1a64(cfg.dump());
    return j;
}

void emit(const Config& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw ConfigError("cannot write " + c.out);
    f << text;
}

int fail(const Config& c, const std::string& type, const std::string& message) {
    Json j = envelope(c);
    j["status"] = "error";
    j["error"] = {{"type", type}, {"message", message}};
    std::cout << j.dump(2) << "\n";
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"szeta: spectral zeta functions of inhomogeneous strings and drums"};
    app.require_subcommand(1);
    Config cfg;
    std::vector<std::string> kv;
    std::map<std::string, double> named;
    const char* pnames[] = {"eta", "alpha", "beta", "dv", "r", "L", "eps_bar", "ell", "cells"};

    auto common = [&](CLI::App* sc) {
        sc->add_option("--preset", cfg.preset, "preset density");
        sc->add_option("--density-file", cfg.density_file, "JSON density description");
        sc->add_option("--bc", cfg.bc, "boundary conditions: DD NN DN ND PP DP DD2");
        sc->add_option("--order", cfg.order, "perturbative order")->check(CLI::IsMember({1, 2}));
        sc->add_option("--ntrunc", cfg.ntrunc, "truncation (modes per axis or spectrum size)");
        sc->add_option("--grid", cfg.grid, "collocation grid per axis");
        sc->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
        sc->add_option("--out", cfg.out, "output path");
        sc->add_option("--param", kv, "extra parameter key=value");
        for (const char* n : pnames) sc->add_option(std::string("--") + n, named[n]);
    };
    CLI::App* zeta = app.add_subcommand("zeta", "spectral zeta function");
    common(zeta);
    zeta->add_option("--s", cfg.s, "values of s")->delimiter(',');
    zeta->add_option("--method", cfg.method, "auto closed-form series mellin oracle")
        ->check(CLI::IsMember({"auto", "closed-form", "series", "mellin", "oracle"}));
    zeta->add_option("--spectrum-file", cfg.spectrum_file, "CSV spectrum for offline assembly");
    CLI::App* cas = app.add_subcommand("casimir", "Casimir energy 1/2 Z(-1/2)");
    common(cas);
    CLI::App* tab = app.add_subcommand("table", "recompute the deformed square (table1) or annulus (table2) tables");
    common(tab);
    tab->add_option("--which", cfg.which)->check(CLI::IsMember({"table1", "table2"}));
    tab->add_option("--scale", cfg.scale)->check(CLI::IsMember({"desk", "full"}));
    CLI::App* ver = app.add_subcommand("verify", "identity battery");
    common(ver);
    CLI::App* spec = app.add_subcommand("spectrum", "oracle spectrum, CSV or JSON");
    common(spec);
    CLI::App* curve = app.add_subcommand("curve", "plot-ready columns of psi(a), xi(s), phi(s)");
    common(curve);
    curve->add_option("--which", cfg.which)->check(CLI::IsMember({"psi", "xi", "phi"}));
    curve->add_option("--from", cfg.from);
    curve->add_option("--to", cfg.to);
    curve->add_option("--points", cfg.points);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        cfg.command = "parse";
        return fail(cfg, "config", e.what());
    }
    for (CLI::App* sc : app.get_subcommands()) cfg.command = sc->get_name();
    CLI::App* active = app.get_subcommands().front();
    for (const char* n : pnames)
        if (active->count(std::string("--") + n) > 0) cfg.params[n] = named[n];

    try {
        for (const std::string& e : kv) {
            const auto eq = e.find('=');
            if (eq == std::string::npos) throw ConfigError("--param expects key=value, got " + e);
            cfg.params[e.substr(0, eq)] = std::stod(e.substr(eq + 1));
        }
        bc_from_name(cfg.bc);
        if (cfg.format == "csv" && cfg.command != "spectrum") throw ConfigError("csv output is available for spectra only");
        Json j = envelope(cfg);
        int code = 0;
        std::string csv;
        if (cfg.command == "zeta") {
            j["results"] = cmd_zeta(cfg);
        } else if (cfg.command == "casimir") {
            j["results"] = cmd_casimir(cfg);
        } else if (cfg.command == "table") {
            j["results"] = cmd_table(cfg);
        } else if (cfg.command == "spectrum") {
            j["results"] = cmd_spectrum(cfg, csv);
        } else if (cfg.command == "curve") {
            j["results"] = cmd_curve(cfg);
        } else {
            const std::vector<BatteryEntry> e = identity_battery();
            j["results"] = battery_to_json(e);
            bool ok = true;
            for (const BatteryEntry& x : e) ok = ok && x.pass;
            j["failures"] = 0;
            for (const BatteryEntry& x : e)
                if (!x.pass) j["failures"] = j["failures"].get<int>() + 1;
            if (!ok) code = kExitVerify;
        }
        j["status"] = code == 0 ? "ok" : "fail";
        emit(cfg, cfg.format == "csv" ? csv : j.dump(2) + "\n");
        return code;
    } catch (const ConfigError& e) {
        return fail(cfg, "config", e.what());
    } catch (const PoleError& e) {
        return fail(cfg, "pole", e.what());
    } catch (const DivergenceError& e) {
        return fail(cfg, "divergence", e.what());
    } catch (const DensityError& e) {
        return fail(cfg, "config", e.what());
    } catch (const BasisError& e) {
        return fail(cfg, "config", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(cfg, "config", e.what());
    } catch (const std::exception& e) {
        return fail(cfg, "runtime", e.what());
    }
}
