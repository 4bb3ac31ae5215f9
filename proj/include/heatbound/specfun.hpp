#pragma once

#include <vector>

namespace heatbound::specfun {

double log_gamma(double x);

// Normalized incomplete gamma: lower = P(a,s), upper = Q(a,s) = 1 - P(a,s).
struct RegIncGamma {
    double a;
    double s;
    double lower;
    double upper;
};

RegIncGamma reg_inc_gamma(double a, double s);

// ln Q(a,s), finite far into the tail where Q itself underflows.
double log_upper_gamma(double a, double s);

inline double upper_gamma(double a, double s) { return reg_inc_gamma(a, s).upper; }
inline double lower_gamma(double a, double s) { return reg_inc_gamma(a, s).lower; }

double log_beta(double a, double b);
double beta(double a, double b);

// Normalized incomplete beta over [s1, s2].
struct RegIncBeta {
    double s1;
    double s2;
    double alpha;
    double beta;
    double value;
};

RegIncBeta reg_inc_beta(double s1, double s2, double alpha, double beta);

// I_s(alpha, beta) and its complement 1 - I_s, each without cancellation.
double inc_beta(double s, double alpha, double beta);
double inc_beta_complement(double s, double alpha, double beta);

struct BesselJ {
    double value;
    double derivative;
};

// J_nu(x) and J_nu'(x) for nu >= 0, x >= 0.
BesselJ bessel_j(double nu, double x);

struct BesselZero {
    double nu;
    int k;
    double value;
};

BesselZero bessel_j_zero(double nu, int k);

// All positive zeros of J_nu strictly below x_max, increasing.
std::vector<double> bessel_j_zeros_below(double nu, double x_max);

struct SemiclassicalConstant {
    double sigma;
    int d;
    double value;
    double log_value;
};

SemiclassicalConstant lcl(double sigma, int d);

double sigma_d(int d);

double epsilon_analytic(double mu);

struct EpsilonSearch {
    int scan_points = 10000;
    double upper = 0.0;  // 0 selects max(50, 10 mu)
};

double epsilon_bruteforce(double mu, EpsilonSearch opts = {});

// g(A) from the definition of epsilon; exposed for tests.
double epsilon_objective(double mu, double A);

double riemann_zeta(double s);

}  // namespace heatbound::specfun
