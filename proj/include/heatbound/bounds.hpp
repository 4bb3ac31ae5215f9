#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heatbound/geometry.hpp"

namespace heatbound::bounds {

// ---- shared pieces ---------------------------------------------------------

// epsilon(mu): closed form for mu >= 3, memoized brute force below.
double epsilon(double mu);

// pi L_{sigma,d} - epsilon(sigma + (d-1)/2) L_{sigma,d-1}; vanishes at sigma_d.
double delta_sigma_d(double sigma, int d);

// Q(a, x1) - Q(a, x2) for x1 <= x2 without cancellation on either side of the mode.
double upper_gamma_difference(double a, double x1, double x2);

// Integral of s^(a-1) e^(-s) ln s over (x, infinity).
double gamma_log_moment(double a, double x);

struct PowerTail {
    double C;  // |f(Lambda)| <= C Lambda^p beyond lambda
    double p;
};

// Integral of f(Lambda) e^(-Lambda t) over (lambda, infinity), truncated once the
// majorant tail falls below 1e-12 of the accumulated value.
double reduced_laplace(const std::function<double(double)>& f, double lambda, double t,
                       std::optional<PowerTail> tail, const std::vector<double>& breakpoints = {});

// t^(sigma+1)/Gamma(sigma+1): turns a reduced Laplace transform of a Riesz mean into a heat bound.
double laplace_prefactor(double sigma, double t);

// (1/B(sigma+1, gamma-sigma)) int_0^{Lambda-lambda} tau^(gamma-sigma-1) base(Lambda - tau) dtau.
// Breakpoints are given in the Lambda variable.
double aizenman_lieb_lift(const std::function<double(double)>& base, double sigma, double gamma, double lambda,
                          double Lambda, const std::vector<double>& breakpoints = {});

// ---- heat trace bounds -----------------------------------------------------

double kac(double volume, int d, double t);
double zlargetime(double volume, int d, double sigma, double lambda, double t);

struct ThmHeatConstants {
    double c1;
    double c2;
};
ThmHeatConstants thmheat_constants(int d);

double thmheat(double volume, int d, double lambda, double t);
// ln(thmheat / kac); -infinity when the bound is <= 0. Stays finite for d in the hundreds.
double thmheat_log_ratio(double volume, int d, double lambda, double t);
double corheat(double volume, int d, double t);
double proheat(double volume, int d, double lambda, double t);
double zm(const geometry::Domain& domain, double lambda, double t);
// Box and box-union only; lambda_1 is computed from the component boxes.
double zdirect(const geometry::Domain& domain, double sigma, double t);
double corberg(double volume, int d, double t);

// Only M_2 = 1/32 is known; any other d needs an explicit value.
double melas_constant(int d, std::optional<double> override_value = std::nullopt);
double melas_tilde(int d, double M_d);
double melas_kac(double volume, int d, double t, double M_d, double second_moment);
double melas_kac_ball(double volume, int d, double t, double M_d);
double hh_rhs(double volume, int d, double t);
// ln(hh_rhs / kac) = -t / |Omega|^{2/d}
double hh_log_ratio(double volume, int d, double t);

double horn_mu(double mu, double t);  // d = 2, f(s) = s^(-1/mu), mu != 1
double horn_one(double t);            // d = 2, mu = 1
double thmhorn2(int d, double mu, double t);
double horn_exp(int d, double t);

// b_1(mu) / b_1'(mu): bound constant over the true short-time constant.
double horn_constant_ratio(double mu);

// ---- Riesz mean bounds -----------------------------------------------------

double bly(double volume, double sigma, int d, double Lambda);
double bly2(const geometry::Domain& domain, double sigma, double Lambda);
// axis < 0 selects the direction average.
double blysum(const geometry::Domain& domain, double sigma, double Lambda, int axis);
double melas_riesz(double volume, double second_moment, int d, double M_d, double sigma, double Lambda);

enum class SCase { a1, a2, a3 };

struct ThmRiesz {
    double value;
    double main;  // the term before (S)_+ is subtracted
    double S;
    SCase which;
};

ThmRiesz thmriesz(double volume, int d, double sigma, double lambda, double Lambda);
// L_{sigma,d} |Omega| B^(lambda/Lambda, sigma_d+d/2+1, sigma-sigma_d) Lambda^{sigma+d/2}, any lambda in [0, Lambda].
double thmriesz_main(double volume, int d, double sigma, double lambda, double Lambda);
ThmRiesz corriesz(double volume, int d, double gamma, double Lambda);

// ---- named dispatch used by the harness -------------------------------------

enum class HeatKind { kac, zlargetime, thmheat, corheat, proheat, zm, zdirect, corberg, melas_kac, hh_rhs,
                      horn_mu, horn_one, thmhorn2, horn_exp };

struct HeatBoundSpec {
    HeatKind kind;
    std::optional<double> lambda = std::nullopt;  // defaults to the Faber-Krahn value
    std::optional<double> sigma = std::nullopt;   // defaults to sigma_d
    std::optional<double> M_d = std::nullopt;
    std::optional<double> mu = std::nullopt;      // defaults to the horn's own exponent
};

std::string_view heat_kind_name(HeatKind k);
HeatKind heat_kind_from_name(std::string_view name);
const std::vector<HeatKind>& all_heat_kinds();
// Whether the kind can be evaluated on this domain at all.
bool heat_applicable(HeatKind k, const geometry::Domain& domain);
double evaluate(const HeatBoundSpec& spec, const geometry::Domain& domain, double t);

enum class RieszKind { bly, bly2, blysum, melas_riesz, thmriesz, corriesz, aizenman_lieb_lift };

struct RieszBoundSpec {
    RieszKind kind;
    double sigma;                  // gamma for corriesz and the lift
    std::optional<double> lambda = std::nullopt;  // defaults to the Faber-Krahn value
    int axis = -1;                                // blysum: zero-based axis, -1 averages all directions
    std::optional<double> M_d = std::nullopt;
};

struct RieszValue {
    double value;
    std::optional<SCase> which;
};

std::string_view riesz_kind_name(RieszKind k);
RieszKind riesz_kind_from_name(std::string_view name);
bool riesz_applicable(RieszKind k, const geometry::Domain& domain, double sigma);
RieszValue evaluate(const RieszBoundSpec& spec, const geometry::Domain& domain, double Lambda);

}  // namespace heatbound::bounds
