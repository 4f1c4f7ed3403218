#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include <nlohmann/json.hpp>

#include "spectral/bases.hpp"
#include "spectral/densities.hpp"
#include "spectral/oracles.hpp"
#include "spectral/parallel.hpp"
#include "spectral/pertzeta.hpp"

using namespace spz;

namespace {

double seconds(const std::function<double()>& f, double& out, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        out = f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    const int reps = quick ? 1 : 3;
    const int procs = omp_get_num_procs();
    std::vector<int> threads{1};
    for (int t = 2; t <= std::max(4, procs); t *= 2) threads.push_back(t);

    const std::int64_t n_sum = quick ? 2000000 : 20000000;
    auto summand = [](std::int64_t n) { return std::sin(1e-3 * double(n)) / (1.0 + double(n)); };

    const DensitySpec sn = make_sinusoidal(0.2, 0.5);
    const BasisSpec b1 = basis_1d(BC::DD, 0.5);
    const MatrixElementTable t1 = build_table(sn, b1, enumerate_modes(b1, quick ? 1000 : 4000));
    const DensitySpec ds = make_deformed_square(0.25);
    const BasisSpec b2 = basis_rectangle(1.0, 1.0);
    const MatrixElementTable t2 = build_table(ds, b2, enumerate_modes(b2, quick ? 32 : 64));
    const PiecewiseParams pw = PiecewiseParams::from_alpha_beta(1.0, 1.0 / 3.0, 0.1);

    struct Kernel {
        std::string name;
        std::function<double()> run;
    };
    const std::vector<Kernel> kernels{
        {"parallel_sum", [&] { return parallel_sum<double>(1, n_sum, summand); }},
        {"z_perturbative_1d", [&] { return z_perturbative(2.0, t1, pert_options_for(sn)).re(); }},
        {"z_perturbative_2d", [&] { return z_perturbative(2.0, t2, pert_options_for(ds)).re(); }},
        {"build_table_borg_quadrature",
         [&] {
             const MatrixElementTable t = build_table(make_borg(0.5), b1, enumerate_modes(b1, quick ? 40 : 120));
             double s = 0.0;
             for (double e : t.entries) s += e;
             return s;
         }},
        {"piecewise_roots", [&] { return zeta_from_spectrum(1.0, piecewise_roots(pw, quick ? 20000 : 100000), 1000).re(); }},
        {"annulus_bessel_spectrum", [&] { return zeta_from_spectrum(2.0, annulus_bessel_spectrum(0.5, quick ? 1000 : 4000), 1000).re(); }},
    };

    nlohmann::ordered_json report;
    report["procs"] = procs;
    report["quick"] = quick;
    double ref_serial = 0.0;
    const double serial_t = seconds([&] { return serial_sum<double>(1, n_sum, summand); }, ref_serial, reps);
    report["serial_sum"] = {{"seconds", serial_t}, {"value", ref_serial}};
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    bool deterministic = true;
    for (const Kernel& k : kernels) {
        nlohmann::ordered_json row;
        row["kernel"] = k.name;
        double base_t = 0.0, base_v = 0.0;
        nlohmann::ordered_json runs = nlohmann::ordered_json::array();
        for (int t : threads) {
            omp_set_num_threads(t);
            double v = 0.0;
            const double dt = seconds(k.run, v, reps);
            if (t == 1) {
                base_t = dt;
                base_v = v;
            }
            const bool same = v == base_v;
            deterministic = deterministic && same;
            runs.push_back({{"threads", t}, {"seconds", dt}, {"speedup", base_t / dt}, {"bitwise_equal", same}});
        }
        row["value"] = base_v;
        row["runs"] = runs;
        rows.push_back(row);
    }
    omp_set_num_threads(procs);
    report["kernels"] = rows;
    report["serial_vs_parallel_sum_rel"] = std::abs(rows[0]["value"].get<double>() - ref_serial) / std::abs(ref_serial);
    report["deterministic"] = deterministic;
    std::printf("%s\n", report.dump(2).c_str());
    return deterministic ? 0 : 1;
}
