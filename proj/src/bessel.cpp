#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "heatbound/errors.hpp"
#include "heatbound/specfun.hpp"

namespace heatbound::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIter = 200000;

// Power series; free of cancellation while x is small.
double series_j(double nu, double x) {
    const double q = -0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (std::abs(term) < kEps * std::abs(sum)) break;
    }
    return std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0)) * sum;
}

// Steed's method: CF1 for J'/J at order nu, downward recurrence to
// |mu| <= 1/2 (only to mu ~ x when x < nu), CF2 at mu, Wronskian
// normalisation. Needs x >= 2.
BesselJ steed(double nu, double x) {
    const int nl = x < nu ? static_cast<int>(nu - x + 1.5) : static_cast<int>(nu + 0.5);
    const double xmu = nu - nl, xmu2 = xmu * xmu;
    const double xi = 1.0 / x, xi2 = 2.0 * xi, w = xi2 / std::numbers::pi;

    int isign = 1;
    double h = nu * xi;
    if (h < kTiny) h = kTiny;
    double b = xi2 * nu, d = 0.0, c = h;
    int i = 0;
    for (; i < kMaxIter; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b - 1.0 / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) <= kEps) break;
    }
    if (i >= kMaxIter) throw NumericError("bessel_j: CF1 did not converge");

    double rjl = isign * kTiny, rjpl = h * rjl;
    const double rjl1 = rjl, rjp1 = rjpl;
    double fact = nu * xi;
    int rescale = 0;  // powers of 2^-600 applied to rjl, rjpl
    for (int l = nl - 1; l >= 0; --l) {
        const double tmp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * tmp - rjl;
        rjl = tmp;
        if (std::abs(rjl) > 1e250) {
            rjl = std::ldexp(rjl, -600);
            rjpl = std::ldexp(rjpl, -600);
            ++rescale;
        }
    }
    if (rjl == 0.0) rjl = kEps;
    const double f = rjpl / rjl;

    double a = 0.25 - xmu2, p = -0.5 * xi, q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    fact = a * xi / (p * p + q * q);
    double cr = br + q * fact, ci = bi + p * fact;
    double den = br * br + bi * bi;
    double dr = br / den, di = -bi / den;
    double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
    double tmp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = tmp;
    for (i = 1; i < kMaxIter; ++i) {
        a += 2 * i;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if (std::abs(dr) + std::abs(di) < kTiny) dr = kTiny;
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if (std::abs(cr) + std::abs(ci) < kTiny) cr = kTiny;
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        tmp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = tmp;
        if (std::abs(dlr - 1.0) + std::abs(dli) <= kEps) break;
    }
    if (i >= kMaxIter) throw NumericError("bessel_j: CF2 did not converge");

    const double gam = (p - f) / q;
    const double rjmu = std::copysign(std::sqrt(w / ((p - f) * gam + q)), rjl);
    const double scale = std::ldexp(rjmu / rjl, -600 * rescale);
    return {rjl1 * scale, rjp1 * scale};
}

double zero_guess(double nu, int k) {
    if (k == 1 && nu > 0.0) {
        // Olver's large-order expansion of the first zero.
        const double c = std::cbrt(nu);
        return nu + 1.8557571 * c + 1.033150 / c - 0.00397 / nu - 0.0908 / (c * c * c * c * c) +
               0.043 / std::pow(nu, 7.0 / 3.0);
    }
    // McMahon.
    const double beta = (k + 0.5 * nu - 0.25) * std::numbers::pi;
    const double m = 4.0 * nu * nu;
    return beta - (m - 1.0) / (8.0 * beta) - 4.0 * (m - 1.0) * (7.0 * m - 31.0) / (3.0 * std::pow(8.0 * beta, 3));
}

// Root of J_nu in [lo, hi] given opposite signs at the ends.
double polish(double nu, double lo, double hi, double guess) {
    double flo = bessel_j(nu, lo).value;
    double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const BesselJ j = bessel_j(nu, x);
        if (j.value == 0.0) return x;
        if ((j.value < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = j.value;
        } else {
            hi = x;
        }
        double next = x - j.value / j.derivative;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step <= 2.0 * kEps * x || hi - lo <= 2.0 * kEps * x) return x;
    }
    std::ostringstream os;
    os << "bessel_j_zero: root polish stalled for nu = " << nu << " near " << x;
    throw NumericError(os.str());
}

void check_order(double nu) {
    if (!(nu >= 0.0) || !std::isfinite(nu)) {
        std::ostringstream os;
        os << "bessel: order must be >= 0 (got " << nu << ")";
        throw DomainError(os.str());
    }
}

// Walks upward from x in unit steps (zero spacing exceeds 2.9) to the next sign change.
double next_zero(double nu, double x, int k) {
    double fx = bessel_j(nu, x).value;
    for (int guard = 0; guard < 10000000; ++guard) {
        const double y = x + 1.0;
        const double fy = bessel_j(nu, y).value;
        if (fy == 0.0) return y;
        if ((fx < 0.0) != (fy < 0.0)) return polish(nu, x, y, zero_guess(nu, k));
        x = y;
        fx = fy;
    }
    throw NumericError("bessel_j_zero: no sign change found");
}

double first_search_start(double nu) { return std::max(nu, 2.0); }

}  // namespace

BesselJ bessel_j(double nu, double x) {
    check_order(nu);
    if (!(x >= 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << "bessel_j: argument must be finite and >= 0 (got " << x << ")";
        throw DomainError(os.str());
    }
    if (x == 0.0) {
        if (nu == 0.0) return {1.0, 0.0};
        if (nu == 1.0) return {0.0, 0.5};
        return {0.0, nu > 1.0 ? 0.0 : std::numeric_limits<double>::infinity()};
    }
    if (x < 2.0) {
        const double j = series_j(nu, x);
        return {j, nu / x * j - series_j(nu + 1.0, x)};
    }
    return steed(nu, x);
}

BesselZero bessel_j_zero(double nu, int k) {
    check_order(nu);
    if (k < 1) {
        std::ostringstream os;
        os << "bessel_j_zero: index must be >= 1 (got " << k << ")";
        throw DomainError(os.str());
    }
    double z = next_zero(nu, first_search_start(nu), 1);
    for (int i = 2; i <= k; ++i) z = next_zero(nu, z + 2.5, i);
    return {nu, k, z};
}

std::vector<double> bessel_j_zeros_below(double nu, double x_max) {
    check_order(nu);
    std::vector<double> out;
    if (!(x_max > first_search_start(nu))) return out;
    double z = next_zero(nu, first_search_start(nu), 1);
    while (z < x_max) {
        out.push_back(z);
        z = next_zero(nu, z + 2.5, static_cast<int>(out.size()) + 1);
    }
    return out;
}

}  // namespace heatbound::specfun
