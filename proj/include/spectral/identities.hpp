#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spectral/bases.hpp"
#include "spectral/densities.hpp"

namespace spz {

struct IdentityResult {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // |lhs - rhs|
    double trunc_error = 0.0;
    std::string warning;

    nlohmann::ordered_json to_json() const;
};

// sum_n <n|Sigma|n>/(n pi)^2 = 1/6, partial sum plus asymptotic tail
IdentityResult borg_z1_identity(double alpha, int N);

// Xi(s) closed form, continued in s
double borg_xi_rhs(double s);
struct BorgXiResult : IdentityResult {
    double printed_lhs = 0.0;  // with the 1/2 prefactor; equals rhs / 2
};
// double sum over k, n <= N with the 1/2 prefactor removed; s > 1
BorgXiResult borg_xi(double s, int N);

// heat-kernel identity at order alpha^2, double sum over m < n <= N
IdentityResult borg_heat_identity(double t, int N);

struct SeriesZetaResult {
    double partial = 0.0;   // raw double sum up to N
    double value = 0.0;     // partial plus Richardson tail from N/2, N with exponent s - 1
    double trunc_error = 0.0;
};
SeriesZetaResult zeta_series_representation(double s, int N);

struct SumRuleResult {
    double trace_value = 0.0;   // tr Q^s on the table plus the diagonal homogeneous tail
    double oracle_value = 0.0;  // Galerkin spectrum plus Weyl tail
    double residual = 0.0;
};
// Q_nm = <n|Sigma|m>/sqrt(eps_n eps_m) on N modes; the oracle uses the lowest N/4 Galerkin modes
SumRuleResult sumrule_battery(const DensitySpec& d, const BasisSpec& b, int s, int N);

struct BatteryEntry {
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};
// fixed set of identity checks at desk scale
std::vector<BatteryEntry> identity_battery();
nlohmann::ordered_json battery_to_json(const std::vector<BatteryEntry>& entries);

}  // namespace spz
