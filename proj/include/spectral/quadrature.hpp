#pragma once

#include <functional>
#include <vector>

namespace spz {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = true;
};

// adaptive Gauss-Kronrod 7/15 on [a,b], split first at the given interior points
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-13, double rel_tol = 1e-13,
                     const std::vector<double>& breakpoints = {}, int max_intervals = 20000);

// n-point Gauss-Legendre nodes and weights on [-1,1]
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// composite fixed-order Gauss-Legendre on panels between consecutive points
double composite_gauss(const std::function<double(double)>& f, const std::vector<double>& panel_edges,
                       int order = 20);

}  // namespace spz
