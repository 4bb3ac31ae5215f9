#include "heatbound/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "heatbound/errors.hpp"

namespace heatbound::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIter = 100000;

[[noreturn]] void domain_fail(const char* fn, const char* what, double v) {
    std::ostringstream os;
    os.precision(17);
    os << fn << ": " << what << " (got " << v << ")";
    throw DomainError(os.str());
}

// ln P(a,x) by the power series; valid and fast for x < a + 1.
double log_lower_series(double a, double x) {
    double ap = a, term = 1.0, sum = 1.0;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (term < sum * kEps) return a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum);
    }
    throw NumericError("reg_inc_gamma: series did not converge");
}

// ln Q(a,x) by the Legendre continued fraction (modified Lentz); x >= a + 1.
double log_upper_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return a * std::log(x) - x - std::lgamma(a) + std::log(h);
    }
    throw NumericError("reg_inc_gamma: continued fraction did not converge");
}

void check_gamma_args(double a, double s) {
    if (!(a > 0.0) || !std::isfinite(a)) domain_fail("reg_inc_gamma", "shape must be positive and finite", a);
    if (!(s >= 0.0) || !std::isfinite(s)) domain_fail("reg_inc_gamma", "threshold must be finite and >= 0", s);
}

// Continued fraction for I_x(a,b), Numerical-Recipes betacf form.
double beta_cf(double a, double b, double x) {
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw NumericError("reg_inc_beta: continued fraction did not converge");
}

// I_x(a,b) assuming x lies on the convergent side of the fraction.
double beta_direct(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    const double lfront = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    return std::exp(lfront) * beta_cf(a, b, x) / a;
}

void check_beta_params(double alpha, double beta) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) domain_fail("reg_inc_beta", "alpha must be positive", alpha);
    if (!(beta > 0.0) || !std::isfinite(beta)) domain_fail("reg_inc_beta", "beta must be positive", beta);
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) domain_fail("log_gamma", "argument must be positive and finite", x);
    return std::lgamma(x);
}

RegIncGamma reg_inc_gamma(double a, double s) {
    check_gamma_args(a, s);
    if (s == 0.0) return {a, s, 0.0, 1.0};
    if (s < a + 1.0) {
        const double p = std::exp(log_lower_series(a, s));
        return {a, s, p, 1.0 - p};
    }
    const double lq = log_upper_cf(a, s);
    return {a, s, -std::expm1(lq), std::exp(lq)};
}

double log_upper_gamma(double a, double s) {
    check_gamma_args(a, s);
    if (s == 0.0) return 0.0;
    if (s < a + 1.0) return std::log1p(-std::exp(log_lower_series(a, s)));
    return log_upper_cf(a, s);
}

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) domain_fail("log_beta", "arguments must be positive", std::min(a, b));
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta(double a, double b) { return std::exp(log_beta(a, b)); }

double inc_beta(double s, double alpha, double beta) {
    check_beta_params(alpha, beta);
    if (!(s >= 0.0 && s <= 1.0)) domain_fail("reg_inc_beta", "limit outside [0,1]", s);
    if (s == 0.0) return 0.0;
    if (s == 1.0) return 1.0;
    if (s < (alpha + 1.0) / (alpha + beta + 2.0)) return beta_direct(s, alpha, beta);
    return 1.0 - beta_direct(1.0 - s, beta, alpha);
}

double inc_beta_complement(double s, double alpha, double beta) {
    check_beta_params(alpha, beta);
    if (!(s >= 0.0 && s <= 1.0)) domain_fail("reg_inc_beta", "limit outside [0,1]", s);
    if (s == 0.0) return 1.0;
    if (s == 1.0) return 0.0;
    if (s < (alpha + 1.0) / (alpha + beta + 2.0)) return 1.0 - beta_direct(s, alpha, beta);
    return beta_direct(1.0 - s, beta, alpha);
}

RegIncBeta reg_inc_beta(double s1, double s2, double alpha, double beta) {
    check_beta_params(alpha, beta);
    if (!(s1 >= 0.0 && s1 <= 1.0)) domain_fail("reg_inc_beta", "lower limit outside [0,1]", s1);
    if (!(s2 >= 0.0 && s2 <= 1.0)) domain_fail("reg_inc_beta", "upper limit outside [0,1]", s2);
    if (s1 > s2) domain_fail("reg_inc_beta", "lower limit exceeds upper limit", s1 - s2);
    double v = 0.0;
    if (s1 < s2) {
        // Subtract whichever pair of tails is small, so the difference keeps its digits.
        const double lo1 = inc_beta(s1, alpha, beta);
        if (lo1 <= 0.5) {
            v = inc_beta(s2, alpha, beta) - lo1;
        } else {
            v = inc_beta_complement(s1, alpha, beta) - inc_beta_complement(s2, alpha, beta);
        }
        v = std::clamp(v, 0.0, 1.0);
    }
    return {s1, s2, alpha, beta, v};
}

SemiclassicalConstant lcl(double sigma, int d) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) domain_fail("lcl", "sigma must be >= 0", sigma);
    if (d < 1) domain_fail("lcl", "dimension must be >= 1", d);
    const double lv = std::lgamma(sigma + 1.0) - 0.5 * d * std::log(4.0 * std::numbers::pi) -
                      std::lgamma(sigma + 0.5 * d + 1.0);
    return {sigma, d, std::exp(lv), lv};
}

double sigma_d(int d) {
    if (d < 2) domain_fail("sigma_d", "dimension must be >= 2", d);
    if (d == 2) return 2.5;
    if (d == 3) return 2.0;
    return 1.5;
}

double epsilon_analytic(double mu) {
    if (!(mu >= 3.0) || !std::isfinite(mu)) domain_fail("epsilon_analytic", "closed form needs mu >= 3", mu);
    return 0.5 * beta(0.5, mu + 1.0);
}

double epsilon_objective(double mu, double A) {
    double sum = 0.0;
    const double inv = 1.0 / (A * A);
    for (int k = 1; k < A; ++k) sum += std::pow(1.0 - k * k * inv, mu);
    return 0.5 * A * beta(0.5, mu + 1.0) - sum;
}

double epsilon_bruteforce(double mu, EpsilonSearch opts) {
    if (!(mu >= 2.0) || !std::isfinite(mu)) domain_fail("epsilon_bruteforce", "mu must be >= 2", mu);
    const double upper = opts.upper > 1.0 ? opts.upper : std::max(50.0, 10.0 * mu);
    const int n = std::max(opts.scan_points, 3);
    const double h = (upper - 1.0) / (n - 1);
    int best = 0;
    double gbest = epsilon_objective(mu, 1.0);
    for (int i = 1; i < n; ++i) {
        const double g = epsilon_objective(mu, 1.0 + i * h);
        if (g < gbest) {
            gbest = g;
            best = i;
        }
    }
    // Golden-section polish inside the neighbouring scan cells.
    double lo = 1.0 + std::max(best - 1, 0) * h;
    double hi = 1.0 + std::min(best + 1, n - 1) * h;
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = epsilon_objective(mu, x1), f2 = epsilon_objective(mu, x2);
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = epsilon_objective(mu, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = epsilon_objective(mu, x2);
        }
    }
    return std::min({gbest, f1, f2});
}

double riemann_zeta(double s) {
    if (!(s > 1.0) || !std::isfinite(s)) domain_fail("riemann_zeta", "needs s > 1", s);
    // Euler-Maclaurin with N = 20 and eight Bernoulli corrections.
    constexpr int N = 20;
    constexpr double b2k[8] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6,
                               -3617.0 / 510};
    double sum = 0.0;
    for (int n = N - 1; n >= 1; --n) sum += std::pow(n, -s);
    const double lnN = std::log(static_cast<double>(N));
    sum += std::exp((1.0 - s) * lnN) / (s - 1.0) + 0.5 * std::exp(-s * lnN);
    double rising = s;  // s (s+1) ... (s+2k-2)
    double fact = 2.0;  // (2k)!
    double npow = std::exp(-(s + 1.0) * lnN);
    for (int k = 1; k <= 8; ++k) {
        sum += b2k[k - 1] / fact * rising * npow;
        rising *= (s + 2 * k - 1) * (s + 2 * k);
        fact *= (2.0 * k + 1) * (2.0 * k + 2);
        npow /= static_cast<double>(N) * N;
    }
    return sum;
}

}  // namespace heatbound::specfun
