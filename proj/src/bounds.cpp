#include "heatbound/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "heatbound/errors.hpp"
#include "heatbound/quadrature.hpp"
#include "heatbound/specfun.hpp"

namespace heatbound::bounds {

namespace {

using geometry::Domain;
using specfun::log_gamma;
constexpr double kPi = std::numbers::pi;
constexpr double kLn4Pi = 2.5310242469692907;  // ln(4 pi)

[[noreturn]] void fail_param(std::string_view where, std::string_view what, double v) {
    std::ostringstream os;
    os.precision(17);
    os << where << ": " << what << " (got " << v << ")";
    throw ParameterError(os.str());
}

[[noreturn]] void fail_domain(std::string_view where, std::string_view what, double v) {
    std::ostringstream os;
    os.precision(17);
    os << where << ": " << what << " (got " << v << ")";
    throw DomainError(os.str());
}

void check_t(double t, std::string_view where) {
    if (!(t > 0.0) || !std::isfinite(t)) fail_domain(where, "t must be finite and > 0", t);
}

void check_volume(double v, std::string_view where) {
    if (!(v > 0.0) || !std::isfinite(v)) fail_param(where, "needs a finite positive volume", v);
}

void check_d(int d, int lo, std::string_view where) {
    if (d < lo) fail_param(where, "dimension too small", d);
}

// Accepts lambda = lambda_tilde up to rounding.
void check_lambda_fk(double volume, int d, double lambda, std::string_view where) {
    const double fk = geometry::faber_krahn_lambda(volume, d);
    if (!(lambda >= fk * (1.0 - 1e-12)) || !std::isfinite(lambda)) {
        std::ostringstream os;
        os.precision(17);
        os << where << ": lambda = " << lambda << " is below the Faber-Krahn value " << fk;
        throw ParameterError(os.str());
    }
}

double log_kac(double volume, int d, double t) { return std::log(volume) - 0.5 * d * (kLn4Pi + std::log(t)); }

double lcl(double sigma, int d) { return specfun::lcl(sigma, d).value; }

// Mean of g under the density s^(a-1) e^(-s) / (Gamma(a) Q(a,x)) on (x, infinity).
// Also returns ln Q(a, x) so callers can rebuild the unnormalized integral.
struct TailMean {
    double log_q;
    double mean;
};

TailMean tail_mean(double a, double x, const std::function<double(double)>& g, std::vector<double> bps = {}) {
    const double lq = specfun::log_upper_gamma(a, x);
    const double lg = log_gamma(a);
    // truncation: remaining mass below 1e-17 of the whole
    const double target = lq + std::log(1e-17);
    const double w = std::max(1.0, std::sqrt(a));
    double step = w;
    double S = std::max(x, a) + step;
    while (specfun::log_upper_gamma(a, S) > target) {
        step *= 2.0;
        S = std::max(x, a) + step;
    }
    const double mode = a - 1.0;
    for (double k : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0}) bps.push_back(mode + k * w);
    for (double k : {1.0, 3.0, 10.0, 30.0}) bps.push_back(x + k);
    auto f = [&](double s) {
        const double v = g(s);
        if (v == 0.0) return 0.0;
        return std::exp((a - 1.0) * std::log(s) - s - lg - lq) * v;
    };
    quadrature::Options o;
    o.max_subdivisions = 20000;
    o.abs_tol = 1e-16;
    return {lq, quadrature::integral(f, x, S, o, bps)};
}

double lambda1_of_boxes(const Domain& dom) {
    auto one = [](const std::vector<double>& sides) {
        double s = 0.0;
        for (double a : sides) s += 1.0 / (a * a);
        return kPi * kPi * s;
    };
    if (const auto* b = std::get_if<geometry::Box>(&dom.shape())) return one(b->sides);
    const auto* u = std::get_if<geometry::BoxUnion>(&dom.shape());
    if (!u) throw UnsupportedError("zdirect: only boxes and box unions are supported, got " + dom.describe());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& bx : u->boxes) {
        std::vector<double> sides(bx.lo.size());
        for (std::size_t i = 0; i < sides.size(); ++i) sides[i] = bx.hi[i] - bx.lo[i];
        best = std::min(best, one(sides));
    }
    return best;
}

// Unnormalized upper incomplete gamma.
double big_gamma(double a, double x) { return std::exp(log_gamma(a) + specfun::log_upper_gamma(a, x)); }

bool is_box_like(const Domain& dom) {
    return std::holds_alternative<geometry::Box>(dom.shape()) || std::holds_alternative<geometry::BoxUnion>(dom.shape());
}

}  // namespace

// ---- shared pieces ---------------------------------------------------------

double epsilon(double mu) {
    if (mu >= 3.0) return specfun::epsilon_analytic(mu);
    static std::mutex mtx;
    static std::map<double, double> memo;
    std::lock_guard lock(mtx);
    auto it = memo.find(mu);
    if (it != memo.end()) return it->second;
    const double v = specfun::epsilon_bruteforce(mu);
    memo.emplace(mu, v);
    return v;
}

double delta_sigma_d(double sigma, int d) {
    check_d(d, 2, "delta_sigma_d");
    return kPi * lcl(sigma, d) - epsilon(sigma + 0.5 * (d - 1)) * lcl(sigma, d - 1);
}

double upper_gamma_difference(double a, double x1, double x2) {
    if (x2 < x1) fail_domain("upper_gamma_difference", "needs x1 <= x2", x2 - x1);
    if (std::isinf(x2)) return specfun::upper_gamma(a, x1);
    if (x2 <= a) return specfun::lower_gamma(a, x2) - specfun::lower_gamma(a, x1);
    return specfun::upper_gamma(a, x1) - specfun::upper_gamma(a, x2);
}

double gamma_log_moment(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) fail_domain("gamma_log_moment", "needs a > 0 and x >= 0", a);
    const auto tm = tail_mean(a, x, [](double s) { return std::log(s); });
    return std::exp(log_gamma(a) + tm.log_q) * tm.mean;
}

double reduced_laplace(const std::function<double(double)>& f, double lambda, double t, std::optional<PowerTail> tail,
                       const std::vector<double>& breakpoints) {
    if (!tail) throw ParameterError("reduced_laplace: a power-law tail majorant is required to truncate the integral");
    check_t(t, "reduced_laplace");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail_domain("reduced_laplace", "lambda must be finite and >= 0", lambda);
    if (!(tail->C >= 0.0) || !(tail->p > -1.0)) fail_param("reduced_laplace", "majorant needs C >= 0 and p > -1", tail->p);
    auto g = [&](double L) { return f(L) * std::exp(-L * t); };
    auto tail_bound = [&](double T) {
        if (tail->C == 0.0) return 0.0;
        const double a = tail->p + 1.0;
        return tail->C * std::exp(log_gamma(a) + specfun::log_upper_gamma(a, T * t) - a * std::log(t));
    };
    quadrature::Options o;
    o.max_subdivisions = 50000;
    double lo = lambda;
    double hi = std::max(lambda, tail->p / t) + 10.0 / t;
    double value = 0.0;
    for (int round = 0; round < 400; ++round) {
        value += quadrature::integral(g, lo, hi, o, breakpoints);
        const double tb = tail_bound(hi);
        if (tb <= 1e-12 * std::abs(value) || tb == 0.0) return value;
        lo = hi;
        hi += 10.0 / t;
    }
    throw NumericError("reduced_laplace: majorant tail never dropped below 1e-12 of the value");
}

double laplace_prefactor(double sigma, double t) {
    return std::exp((sigma + 1.0) * std::log(t) - log_gamma(sigma + 1.0));
}

double aizenman_lieb_lift(const std::function<double(double)>& base, double sigma, double gamma, double lambda,
                          double Lambda, const std::vector<double>& breakpoints) {
    if (!(gamma > sigma)) fail_param("aizenman_lieb_lift", "needs gamma > sigma", gamma);
    if (!(sigma >= 0.0)) fail_param("aizenman_lieb_lift", "needs sigma >= 0", sigma);
    if (!(Lambda > lambda)) return 0.0;
    const double e = gamma - sigma - 1.0;
    auto f = [&](double tau) { return std::pow(tau, e) * base(Lambda - tau); };
    std::vector<double> bp;
    for (double b : breakpoints)
        if (b > lambda && b < Lambda) bp.push_back(Lambda - b);
    quadrature::Options o;
    o.max_subdivisions = 50000;
    const double I = quadrature::integral(f, 0.0, Lambda - lambda, o, bp);
    return I / specfun::beta(sigma + 1.0, gamma - sigma);
}

// ---- heat trace bounds -----------------------------------------------------

double kac(double volume, int d, double t) {
    check_volume(volume, "kac");
    check_d(d, 1, "kac");
    check_t(t, "kac");
    return std::exp(log_kac(volume, d, t));
}

double zlargetime(double volume, int d, double sigma, double lambda, double t) {
    if (!(sigma >= 1.0)) fail_param("zlargetime", "needs sigma >= 1", sigma);
    if (!(lambda >= 0.0)) fail_param("zlargetime", "needs lambda >= 0", lambda);
    return kac(volume, d, t) * specfun::upper_gamma(sigma + 0.5 * d + 1.0, lambda * t);
}

ThmHeatConstants thmheat_constants(int d) {
    check_d(d, 2, "thmheat_constants");
    const double sd = specfun::sigma_d(d);
    const double lb = specfun::log_beta(0.5, sd + 0.5 * (d + 1));
    const double lg = log_gamma(0.5 * d + 1.0);
    const double lgh = log_gamma(0.5 * (d + 1));
    const double c1 = std::exp(lb - std::log(2.0) + (d - 1.0) / d * lg - lgh);
    const double c2 = std::exp(std::log(kPi * kPi * (d - 1.0) / (96.0 * (2.0 * sd + d - 1.0))) + lb +
                               (d - 3.0) / d * lg - lgh);
    return {c1, c2};
}

double thmheat_log_ratio(double volume, int d, double lambda, double t) {
    check_volume(volume, "thmheat");
    check_d(d, 2, "thmheat");
    check_t(t, "thmheat");
    check_lambda_fk(volume, d, lambda, "thmheat");
    const auto c = thmheat_constants(d);
    const double a0 = specfun::sigma_d(d) + 0.5 * d + 1.0;
    const double x = lambda * t;
    const double lq0 = specfun::log_upper_gamma(a0, x);
    const double lq1 = specfun::log_upper_gamma(a0 - 0.5, x);
    const double lq2 = specfun::log_upper_gamma(a0 - 1.5, x);
    const double l4pt = kLn4Pi + std::log(t);
    const double lv = std::log(volume);
    // R / (Kac Q(a0, x))
    const double r1 = std::exp(std::log(c.c1) - lv / d + 0.5 * l4pt + lq1 - lq0);
    const double r2 = std::exp(std::log(c.c2) - 3.0 * lv / d + 1.5 * l4pt + lq2 - lq0);
    const double r = std::max(0.0, r1 - r2);
    if (r >= 1.0) return -std::numeric_limits<double>::infinity();
    return lq0 + std::log1p(-r);
}

double thmheat(double volume, int d, double lambda, double t) {
    const double lr = thmheat_log_ratio(volume, d, lambda, t);
    if (std::isinf(lr)) {
        // bound <= 0: report the signed value
        const auto c = thmheat_constants(d);
        const double a0 = specfun::sigma_d(d) + 0.5 * d + 1.0;
        const double x = lambda * t;
        const double R = c.c1 * std::pow(volume, (d - 1.0) / d) / std::pow(4 * kPi * t, 0.5 * (d - 1)) *
                             specfun::upper_gamma(a0 - 0.5, x) -
                         c.c2 * std::pow(volume, (d - 3.0) / d) / std::pow(4 * kPi * t, 0.5 * (d - 3)) *
                             specfun::upper_gamma(a0 - 1.5, x);
        return kac(volume, d, t) * specfun::upper_gamma(a0, x) - std::max(0.0, R);
    }
    return std::exp(log_kac(volume, d, t) + lr);
}

double corheat(double volume, int d, double t) {
    check_volume(volume, "corheat");
    return thmheat(volume, d, geometry::faber_krahn_lambda(volume, d), t);
}

double proheat(double volume, int d, double lambda, double t) {
    check_volume(volume, "proheat");
    check_d(d, 2, "proheat");
    check_t(t, "proheat");
    check_lambda_fk(volume, d, lambda, "proheat");
    const double a0 = specfun::sigma_d(d) + 0.5 * d + 1.0;
    const double R = geometry::ball_radius_for_volume(volume, d);
    const double c = kPi * kPi * t / (4.0 * R * R);
    const double b = 0.5 * (d + 1);
    auto g = [&](double s) { return specfun::inc_beta(std::min(1.0, c / s), 0.5, b); };
    const auto tm = tail_mean(a0, lambda * t, g, {c});
    return std::exp(log_kac(volume, d, t) + tm.log_q) * (1.0 - tm.mean);
}

double zm(const Domain& dom, double lambda, double t) {
    const double V = geometry::volume(dom);
    if (!std::isfinite(V)) throw UnsupportedError("zm: needs a finite-volume domain, got " + dom.describe());
    const int d = dom.dimension();
    check_d(d, 2, "zm");
    check_t(t, "zm");
    check_lambda_fk(V, d, lambda, "zm");
    geometry::averaged_width(dom, 1.0);  // throws UnsupportedError listing divergent axes
    const double a0 = specfun::sigma_d(d) + 0.5 * d + 1.0;
    std::vector<double> bps;
    for (int i = 0; i < d; ++i)
        for (double y : geometry::width_breakpoints(dom, i))
            if (y > 0.0) bps.push_back(kPi * kPi * t / (y * y));
    auto g = [&](double s) { return geometry::averaged_width(dom, kPi * std::sqrt(t / s)).M / V; };
    const auto tm = tail_mean(a0, lambda * t, g, bps);
    return std::exp(log_kac(V, d, t) + tm.log_q) * (1.0 - tm.mean);
}

double zdirect(const Domain& dom, double sigma, double t) {
    if (!is_box_like(dom)) throw UnsupportedError("zdirect: only boxes and box unions are supported, got " + dom.describe());
    if (!(sigma >= 1.5)) fail_param("zdirect", "needs sigma >= 3/2", sigma);
    check_t(t, "zdirect");
    const int d = dom.dimension();
    check_d(d, 2, "zdirect");
    const double l1 = lambda1_of_boxes(dom);
    // |Omega_Lambda| and d_Lambda are constant between consecutive pi^2 / l^2
    std::vector<double> cuts{l1};
    for (double len : geometry::section_interval_lengths(dom)) {
        const double c = kPi * kPi / (len * len);
        if (c > l1) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(std::numeric_limits<double>::infinity());
    const double a0 = sigma + 0.5 * d + 1.0;
    const double a1 = sigma + 0.5 * (d + 1);
    double vol_part = 0.0, dl_part = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        const double probe = std::isinf(hi) ? 2.0 * lo : 0.5 * (lo + hi);
        const auto st = geometry::omega_lambda_stats(dom, probe);
        if (st.volume > 0.0) vol_part += st.volume * upper_gamma_difference(a0, lo * t, hi * t);
        if (st.d_lambda > 0.0) dl_part += st.d_lambda * upper_gamma_difference(a1, lo * t, hi * t);
    }
    const double l4pt = kLn4Pi + std::log(t);
    return vol_part * std::exp(-0.5 * d * l4pt) -
           epsilon(sigma + 0.5 * (d - 1)) * dl_part * std::exp(-0.5 * (d - 1) * l4pt);
}

double corberg(double volume, int d, double t) {
    check_volume(volume, "corberg");
    check_d(d, 2, "corberg");
    check_t(t, "corberg");
    const double lg = log_gamma(0.5 * d + 1.0);
    const double l4pt = kLn4Pi + std::log(t);
    const double lv = std::log(volume);
    const double second = d * std::sqrt(kPi) * std::exp(-lg / d + (d - 1.0) / d * lv - 0.5 * (d - 1) * l4pt) / 4.0;
    const double third = d * (d - 1.0) * std::exp(-2.0 * lg / d + (d - 2.0) / d * lv - 0.5 * (d - 2) * l4pt) / 8.0;
    return kac(volume, d, t) - second + third;
}

double melas_constant(int d, std::optional<double> override_value) {
    if (override_value) {
        if (!(*override_value > 0.0)) fail_param("melas_constant", "M_d must be > 0", *override_value);
        return *override_value;
    }
    if (d == 2) return 1.0 / 32.0;
    std::ostringstream os;
    os << "melas_constant: no value of M_d is known for d = " << d << "; supply one explicitly";
    throw ParameterError(os.str());
}

double melas_tilde(int d, double M_d) {
    check_d(d, 1, "melas_tilde");
    return (d + 2.0) / d * kPi * std::exp(-2.0 / d * log_gamma(0.5 * d + 1.0)) * M_d;
}

double melas_kac(double volume, int d, double t, double M_d, double I) {
    if (!(M_d > 0.0)) fail_param("melas_kac", "M_d must be > 0", M_d);
    if (!(I > 0.0)) fail_param("melas_kac", "second moment must be > 0", I);
    return kac(volume, d, t) * std::exp(-M_d * volume * t / I);
}

double melas_kac_ball(double volume, int d, double t, double M_d) {
    if (!(M_d > 0.0)) fail_param("melas_kac_ball", "M_d must be > 0", M_d);
    return kac(volume, d, t) * std::exp(-melas_tilde(d, M_d) * t * std::pow(volume, -2.0 / d));
}

double hh_log_ratio(double volume, int d, double t) {
    check_volume(volume, "hh_rhs");
    check_t(t, "hh_rhs");
    return -t * std::pow(volume, -2.0 / d);
}

double hh_rhs(double volume, int d, double t) { return kac(volume, d, t) * std::exp(hh_log_ratio(volume, d, t)); }

double horn_mu(double mu, double t) {
    if (!(mu > 0.0)) fail_param("horn_mu", "needs mu > 0", mu);
    if (mu == 1.0) throw ParameterError("horn_mu: mu = 1 has its own bound, use horn_one");
    check_t(t, "horn_mu");
    const double x = kPi * kPi * t / 2.0;
    const double A = 4.0 / (105.0 * std::pow(kPi, 1.5));
    const double t1 = A / (mu - 1.0) * std::pow(2.0 / (kPi * kPi), 0.5 * (mu - 1.0)) * std::pow(t, -0.5 * (mu + 1.0)) *
                      big_gamma(0.5 * mu + 4.0, x);
    const double t2 = specfun::upper_gamma(4.5, x) / (4.0 * kPi * t);
    const double t3 = A * mu / (1.0 - mu) * std::pow(2.0 / (kPi * kPi), (1.0 - mu) / (2.0 * mu)) *
                      std::pow(t, -(1.0 + mu) / (2.0 * mu)) * big_gamma(0.5 / mu + 4.0, x);
    return t1 + t2 + t3;
}

double horn_one(double t) {
    check_t(t, "horn_one");
    const double x = kPi * kPi * t / 2.0;
    const double q = specfun::upper_gamma(4.5, x);
    return -std::log(t) / (4.0 * kPi * t) * q - (2.0 * std::log(kPi) - std::log(2.0)) / (4.0 * kPi * t) * q +
           4.0 / (105.0 * std::pow(kPi, 1.5) * t) * gamma_log_moment(4.5, x);
}

double thmhorn2(int d, double mu, double t) {
    check_d(d, 2, "thmhorn2");
    if (!(mu > 1.0)) fail_param("thmhorn2", "needs mu > 1", mu);
    check_t(t, "thmhorn2");
    const double sd = specfun::sigma_d(d);
    return std::exp(-0.5 * d * kLn4Pi + (1.0 - mu) * std::log(kPi) - std::log(mu - 1.0) +
                    log_gamma(sd + 0.5 * (d + mu + 1.0)) - log_gamma(sd + 0.5 * d + 1.0) -
                    0.5 * (d - 1.0 + mu) * std::log(t));
}

double horn_exp(int d, double t) {
    check_d(d, 2, "horn_exp");
    check_t(t, "horn_exp");
    const double sd = specfun::sigma_d(d);
    const double a0 = sd + 0.5 * d + 1.0;
    const double a1 = sd + 0.5 * (d + 1);
    const double x = kPi * kPi * t;
    const double lg0 = log_gamma(a0);
    const double pre = std::sqrt(kPi) * std::exp(-0.5 * (d - 1) * (kLn4Pi + std::log(t)));
    const double G = std::exp(log_gamma(a1) + specfun::log_upper_gamma(a1, x) - lg0);
    // closed form kept as stated; redoing the transform gives a smaller last term, so this stays an upper bound
    return std::exp(-0.5 * d * (kLn4Pi + std::log(t))) * specfun::upper_gamma(a0, x) +
           pre * std::log(t) / 4.0 * G + pre * (std::log(kPi) - 1.0) / 2.0 * G +
           pre / 4.0 * std::exp(-lg0) * gamma_log_moment(a0, x);
}

double horn_constant_ratio(double mu) {
    if (!(mu > 1.0)) fail_param("horn_constant_ratio", "needs mu > 1", mu);
    const double lb1 = std::log(4.0 / 105.0) + log_gamma(4.0 + 0.5 * mu) - std::log(mu - 1.0);
    const double lb1p = log_gamma(1.0 + 0.5 * mu) + std::log(specfun::riemann_zeta(mu)) - std::log(2.0);
    return std::exp(lb1 - lb1p);  // the common pi^(mu+1/2) cancels
}

// ---- Riesz mean bounds -----------------------------------------------------

double bly(double volume, double sigma, int d, double Lambda) {
    check_volume(volume, "bly");
    check_d(d, 1, "bly");
    if (!(sigma >= 1.0)) fail_param("bly", "needs sigma >= 1", sigma);
    if (!(Lambda > 0.0)) return 0.0;
    return lcl(sigma, d) * volume * std::pow(Lambda, sigma + 0.5 * d);
}

double bly2(const Domain& dom, double sigma, double Lambda) {
    if (!is_box_like(dom)) throw UnsupportedError("bly2: only boxes and box unions are supported, got " + dom.describe());
    if (!(sigma >= 1.5)) fail_param("bly2", "needs sigma >= 3/2", sigma);
    const int d = dom.dimension();
    check_d(d, 2, "bly2");
    if (!(Lambda > 0.0)) return 0.0;
    const auto st = geometry::omega_lambda_stats(dom, Lambda);
    return lcl(sigma, d) * st.volume * std::pow(Lambda, sigma + 0.5 * d) -
           epsilon(sigma + 0.5 * (d - 1)) * lcl(sigma, d - 1) * st.d_lambda * std::pow(Lambda, sigma + 0.5 * (d - 1));
}

double blysum(const Domain& dom, double sigma, double Lambda, int axis) {
    if (!(sigma >= 1.5)) fail_param("blysum", "needs sigma >= 3/2", sigma);
    const int d = dom.dimension();
    check_d(d, 2, "blysum");
    if (axis >= d) fail_param("blysum", "axis out of range", axis);
    if (!(Lambda > 0.0)) return 0.0;
    const double y = kPi / std::sqrt(Lambda);
    const double delta = delta_sigma_d(sigma, d);
    double body, m;
    if (axis >= 0) {
        body = geometry::width_tail(dom, axis, y);
        if (!std::isfinite(body)) {
            std::ostringstream os;
            os << "blysum: the width distribution along axis " << axis + 1 << " of " << dom.describe()
               << " is not integrable at infinity";
            throw UnsupportedError(os.str());
        }
        if (!geometry::width_is_exact(dom, axis) && delta < 0.0)
            throw UnsupportedError("blysum: only an upper envelope of m is known here and delta < 0");
        m = delta == 0.0 ? 0.0 : geometry::width_distribution(dom, axis, y);
    } else {
        const double V = geometry::volume(dom);
        if (!std::isfinite(V)) throw UnsupportedError("blysum: the averaged form needs finite volume, got " + dom.describe());
        const auto aw = geometry::averaged_width(dom, y);
        body = std::max(0.0, V - aw.M);
        m = aw.m;
    }
    return lcl(sigma, d) * body * std::pow(Lambda, sigma + 0.5 * d) + delta * m * std::pow(Lambda, sigma + 0.5 * (d - 1));
}

double melas_riesz(double volume, double I, int d, double M_d, double sigma, double Lambda) {
    check_volume(volume, "melas_riesz");
    if (!(M_d > 0.0)) fail_param("melas_riesz", "M_d must be > 0", M_d);
    if (!(I > 0.0)) fail_param("melas_riesz", "second moment must be > 0", I);
    if (!(sigma >= 1.0)) fail_param("melas_riesz", "needs sigma >= 1", sigma);
    const double shift = Lambda - M_d * volume / I;
    if (!(shift > 0.0)) return 0.0;
    // sigma > 1: the order-1 bound lifted, which keeps the same shape
    return lcl(sigma, d) * volume * std::pow(shift, sigma + 0.5 * d);
}

ThmRiesz thmriesz(double volume, int d, double sigma, double lambda, double Lambda) {
    check_volume(volume, "thmriesz");
    check_d(d, 2, "thmriesz");
    const double sd = specfun::sigma_d(d);
    if (!(sigma > sd)) fail_param("thmriesz", "needs sigma > sigma_d", sigma);
    check_lambda_fk(volume, d, lambda, "thmriesz");
    if (!(Lambda >= lambda)) fail_domain("thmriesz", "needs Lambda >= lambda", Lambda);
    const double b = sigma - sd;
    const double A0 = sd + 0.5 * d + 1.0;
    const double A1 = sd + 0.5 * (d + 1);
    const double tau = geometry::tau_omega(volume, d);
    const double vol_term = lcl(sigma, d) * volume * std::pow(Lambda, sigma + 0.5 * d);
    const double surf_term = lcl(sigma, d - 1) * std::pow(volume, (d - 1.0) / d) * std::pow(Lambda, sigma + 0.5 * (d - 1)) *
                             0.5 * specfun::beta(0.5, A1);
    const double main = vol_term * specfun::inc_beta_complement(lambda / Lambda, A0, b);
    double S;
    SCase which;
    if (lambda >= tau) {
        S = surf_term * specfun::inc_beta_complement(lambda / Lambda, A1, b);
        which = SCase::a1;
    } else if (Lambda < tau) {
        S = main / d;
        which = SCase::a2;
    } else {
        S = surf_term * specfun::inc_beta_complement(tau / Lambda, A1, b) +
            vol_term / d * specfun::reg_inc_beta(lambda / Lambda, tau / Lambda, A0, b).value;
        which = SCase::a3;
    }
    return {main - std::max(0.0, S), main, S, which};
}

double thmriesz_main(double volume, int d, double sigma, double lambda, double Lambda) {
    check_volume(volume, "thmriesz_main");
    check_d(d, 2, "thmriesz_main");
    const double sd = specfun::sigma_d(d);
    if (!(sigma > sd)) fail_param("thmriesz_main", "needs sigma > sigma_d", sigma);
    if (!(lambda >= 0.0) || !(Lambda >= lambda) || !(Lambda > 0.0)) fail_domain("thmriesz_main", "needs 0 <= lambda <= Lambda", Lambda);
    return lcl(sigma, d) * volume * std::pow(Lambda, sigma + 0.5 * d) *
           specfun::inc_beta_complement(lambda / Lambda, sd + 0.5 * d + 1.0, sigma - sd);
}

ThmRiesz corriesz(double volume, int d, double gamma, double Lambda) {
    check_volume(volume, "corriesz");
    return thmriesz(volume, d, gamma, geometry::faber_krahn_lambda(volume, d), Lambda);
}

// ---- named dispatch --------------------------------------------------------

namespace {

constexpr std::array<std::pair<HeatKind, std::string_view>, 14> kHeatNames{{
    {HeatKind::kac, "kac"},
    {HeatKind::zlargetime, "zlargetime"},
    {HeatKind::thmheat, "thmheat"},
    {HeatKind::corheat, "corheat"},
    {HeatKind::proheat, "proheat"},
    {HeatKind::zm, "zm"},
    {HeatKind::zdirect, "zdirect"},
    {HeatKind::corberg, "corberg"},
    {HeatKind::melas_kac, "melas_kac"},
    {HeatKind::hh_rhs, "hh_rhs"},
    {HeatKind::horn_mu, "horn_mu"},
    {HeatKind::horn_one, "horn_one"},
    {HeatKind::thmhorn2, "thmhorn2"},
    {HeatKind::horn_exp, "horn_exp"},
}};

constexpr std::array<std::pair<RieszKind, std::string_view>, 7> kRieszNames{{
    {RieszKind::bly, "bly"},
    {RieszKind::bly2, "bly2"},
    {RieszKind::blysum, "blysum"},
    {RieszKind::melas_riesz, "melas_riesz"},
    {RieszKind::thmriesz, "thmriesz"},
    {RieszKind::corriesz, "corriesz"},
    {RieszKind::aizenman_lieb_lift, "aizenman_lieb_lift"},
}};

template <class Probe>
bool works(Probe&& p) {
    try {
        p();
        return true;
    } catch (const UnsupportedError&) {
        return false;
    } catch (const ParameterError&) {
        return false;
    }
}

double default_lambda(const std::optional<double>& l, const Domain& dom) {
    return l ? *l : geometry::faber_krahn_lambda(geometry::volume(dom), dom.dimension());
}

double finite_volume(const Domain& dom, std::string_view who) {
    const double V = geometry::volume(dom);
    if (!std::isfinite(V)) throw UnsupportedError(std::string(who) + ": needs a finite-volume domain, got " + dom.describe());
    return V;
}

}  // namespace

std::string_view heat_kind_name(HeatKind k) {
    for (const auto& [kind, name] : kHeatNames)
        if (kind == k) return name;
    return "?";
}

HeatKind heat_kind_from_name(std::string_view name) {
    for (const auto& [kind, n] : kHeatNames)
        if (n == name) return kind;
    throw ParameterError("unknown heat bound '" + std::string(name) + "'");
}

const std::vector<HeatKind>& all_heat_kinds() {
    static const std::vector<HeatKind> all = [] {
        std::vector<HeatKind> v;
        for (const auto& p : kHeatNames) v.push_back(p.first);
        return v;
    }();
    return all;
}

bool heat_applicable(HeatKind k, const Domain& dom) {
    const int d = dom.dimension();
    const bool finite = geometry::has_finite_volume(dom);
    switch (k) {
        case HeatKind::kac:
        case HeatKind::zlargetime:
        case HeatKind::hh_rhs:
            return finite;
        case HeatKind::thmheat:
        case HeatKind::corheat:
        case HeatKind::proheat:
        case HeatKind::corberg:
            return finite && d >= 2;
        case HeatKind::zm:
            return finite && d >= 2 && works([&] { geometry::averaged_width(dom, 1.0); });
        case HeatKind::zdirect:
            return is_box_like(dom) && d >= 2;
        case HeatKind::melas_kac:
            return finite && d == 2 && works([&] { geometry::second_moment(dom); });
        case HeatKind::horn_mu: {
            const auto* h = std::get_if<geometry::Horn2D>(&dom.shape());
            return h && h->mu != 1.0;
        }
        case HeatKind::horn_one: {
            const auto* h = std::get_if<geometry::Horn2D>(&dom.shape());
            return h && h->mu == 1.0;
        }
        case HeatKind::thmhorn2: {
            const auto* h = std::get_if<geometry::RadialHorn>(&dom.shape());
            return h && h->mu > 1.0;
        }
        case HeatKind::horn_exp:
            return std::holds_alternative<geometry::RadialHornExp>(dom.shape());
    }
    return false;
}

double evaluate(const HeatBoundSpec& s, const Domain& dom, double t) {
    const int d = dom.dimension();
    auto horn_mu_of = [&]() -> double {
        if (s.mu) return *s.mu;
        if (const auto* h = std::get_if<geometry::Horn2D>(&dom.shape())) return h->mu;
        if (const auto* h = std::get_if<geometry::RadialHorn>(&dom.shape())) return h->mu;
        throw ParameterError(std::string(heat_kind_name(s.kind)) + ": needs mu");
    };
    switch (s.kind) {
        case HeatKind::kac:
            return kac(finite_volume(dom, "kac"), d, t);
        case HeatKind::zlargetime:
            return zlargetime(finite_volume(dom, "zlargetime"), d, s.sigma.value_or(specfun::sigma_d(std::max(d, 2))),
                              default_lambda(s.lambda, dom), t);
        case HeatKind::thmheat:
            return thmheat(finite_volume(dom, "thmheat"), d, default_lambda(s.lambda, dom), t);
        case HeatKind::corheat:
            return corheat(finite_volume(dom, "corheat"), d, t);
        case HeatKind::proheat:
            return proheat(finite_volume(dom, "proheat"), d, default_lambda(s.lambda, dom), t);
        case HeatKind::zm:
            return zm(dom, default_lambda(s.lambda, dom), t);
        case HeatKind::zdirect:
            return zdirect(dom, s.sigma.value_or(specfun::sigma_d(d)), t);
        case HeatKind::corberg:
            return corberg(finite_volume(dom, "corberg"), d, t);
        case HeatKind::melas_kac:
            return melas_kac(finite_volume(dom, "melas_kac"), d, t, melas_constant(d, s.M_d), geometry::second_moment(dom));
        case HeatKind::hh_rhs:
            return hh_rhs(finite_volume(dom, "hh_rhs"), d, t);
        case HeatKind::horn_mu:
            return horn_mu(horn_mu_of(), t);
        case HeatKind::horn_one:
            return horn_one(t);
        case HeatKind::thmhorn2:
            return thmhorn2(d, horn_mu_of(), t);
        case HeatKind::horn_exp:
            return horn_exp(d, t);
    }
    throw ParameterError("evaluate: unknown heat bound");
}

std::string_view riesz_kind_name(RieszKind k) {
    for (const auto& [kind, name] : kRieszNames)
        if (kind == k) return name;
    return "?";
}

RieszKind riesz_kind_from_name(std::string_view name) {
    for (const auto& [kind, n] : kRieszNames)
        if (n == name) return kind;
    throw ParameterError("unknown Riesz bound '" + std::string(name) + "'");
}

bool riesz_applicable(RieszKind k, const Domain& dom, double sigma) {
    const int d = dom.dimension();
    const bool finite = geometry::has_finite_volume(dom);
    const double sd = d >= 2 ? specfun::sigma_d(d) : 0.0;
    switch (k) {
        case RieszKind::bly:
            return finite && sigma >= 1.0;
        case RieszKind::bly2:
            return is_box_like(dom) && d >= 2 && sigma >= 1.5;
        case RieszKind::blysum:
            return d >= 2 && sigma >= 1.5;
        case RieszKind::melas_riesz:
            return finite && d == 2 && sigma >= 1.0 && works([&] { geometry::second_moment(dom); });
        case RieszKind::thmriesz:
        case RieszKind::corriesz:
            return finite && d >= 2 && sigma > sd;
        case RieszKind::aizenman_lieb_lift:
            return finite && d >= 2 && sigma > sd && works([&] { geometry::averaged_width(dom, 1.0); });
    }
    return false;
}

RieszValue evaluate(const RieszBoundSpec& s, const Domain& dom, double Lambda) {
    const int d = dom.dimension();
    switch (s.kind) {
        case RieszKind::bly:
            return {bly(finite_volume(dom, "bly"), s.sigma, d, Lambda), std::nullopt};
        case RieszKind::bly2:
            return {bly2(dom, s.sigma, Lambda), std::nullopt};
        case RieszKind::blysum:
            return {blysum(dom, s.sigma, Lambda, s.axis), std::nullopt};
        case RieszKind::melas_riesz:
            return {melas_riesz(finite_volume(dom, "melas_riesz"), geometry::second_moment(dom), d,
                                melas_constant(d, s.M_d), s.sigma, Lambda),
                    std::nullopt};
        case RieszKind::thmriesz: {
            const auto r = thmriesz(finite_volume(dom, "thmriesz"), d, s.sigma, default_lambda(s.lambda, dom), Lambda);
            return {r.value, r.which};
        }
        case RieszKind::corriesz: {
            const auto r = corriesz(finite_volume(dom, "corriesz"), d, s.sigma, Lambda);
            return {r.value, r.which};
        }
        case RieszKind::aizenman_lieb_lift: {
            // the averaged width bound at sigma_d, lifted to sigma from lambda
            const double sd = specfun::sigma_d(d);
            const double lam = default_lambda(s.lambda, dom);
            std::vector<double> bps;
            for (int i = 0; i < d; ++i)
                for (double y : geometry::width_breakpoints(dom, i))
                    if (y > 0.0) bps.push_back(kPi * kPi / (y * y));
            auto base = [&](double L) { return blysum(dom, sd, L, -1); };
            return {aizenman_lieb_lift(base, sd, s.sigma, lam, Lambda, bps), std::nullopt};
        }
    }
    throw ParameterError("evaluate: unknown Riesz bound");
}

}  // namespace heatbound::bounds
