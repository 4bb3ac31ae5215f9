#pragma once

#include <functional>
#include <vector>

namespace heatbound::quadrature {

// 1e-10 unless HEATBOUND_TOL holds a positive number.
double default_rel_tol();

struct Options {
    double rel_tol = default_rel_tol();
    double abs_tol = 0.0;
    int max_subdivisions = 4000;
};

struct Result {
    double value;
    double error;
    int evaluations;
};

using Integrand = std::function<double(double)>;

// Globally adaptive Gauss-Kronrod (10/21) on [a, b]. Breakpoints inside (a, b)
// seed the initial partition. Throws NumericError when the cap is hit.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {},
                 const std::vector<double>& breakpoints = {});

inline double integral(const Integrand& f, double a, double b, const Options& opts = {},
                       const std::vector<double>& breakpoints = {}) {
    return integrate(f, a, b, opts, breakpoints).value;
}

}  // namespace heatbound::quadrature
