#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "heatbound/errors.hpp"
#include "heatbound/quadrature.hpp"
#include "heatbound/specfun.hpp"
#include "heatbound/spectra.hpp"

using namespace heatbound;
using geometry::Domain;
using std::numbers::pi;

namespace {

const double kLmax2 = spectra::default_lambda_max(2, 1e-3);

const spectra::Spectrum& square() {
    static const auto s = spectra::enumerate_eigenvalues(Domain::box({1, 1}), kLmax2);
    return s;
}

const spectra::Spectrum& disk() {
    static const auto s = spectra::enumerate_eigenvalues(Domain::ball(2, 1), kLmax2);
    return s;
}

// sum_{k>=1} exp(-pi^2 k^2 t / a^2) through the Jacobi-transformed theta series
double theta_tail(double t, double a) {
    const double q = t / (a * a);
    double s = 0.0;
    for (int n = 1; n < 50; ++n) s += 2.0 * std::exp(-n * n / q);
    return 0.5 * (std::sqrt(1.0 / (pi * q)) * (1.0 + s) - 1.0);
}

std::vector<double> log_grid(double a, double b, int n) {
    std::vector<double> g;
    for (int k = 0; k < n; ++k) g.push_back(a * std::pow(b / a, k / (n - 1.0)));
    return g;
}

}  // namespace

TEST_CASE("enumerated ground states and multiplicities") {
    const auto& sq = square();
    CHECK(sq.levels[0].lambda == doctest::Approx(2 * pi * pi).epsilon(1e-15));
    CHECK(sq.levels[0].multiplicity == 1);
    CHECK(sq.levels[1].lambda == doctest::Approx(5 * pi * pi).epsilon(1e-15));
    CHECK(sq.levels[1].multiplicity == 2);
    CHECK(disk().lambda1() == doctest::Approx(5.783185962946784).epsilon(1e-13));
    CHECK(disk().levels[1].multiplicity == 2);  // j_{1,1}
    CHECK(disk().levels[1].lambda == doctest::Approx(14.681970642123893).epsilon(1e-13));
    const auto cube = spectra::enumerate_eigenvalues(Domain::box({1, 1, 1}), 200);
    CHECK(cube.lambda1() == doctest::Approx(3 * pi * pi).epsilon(1e-15));
    CHECK(cube.levels[1].multiplicity == 3);
    const auto ball3 = spectra::enumerate_eigenvalues(Domain::ball(3, 1), 100);
    CHECK(ball3.lambda1() == doctest::Approx(pi * pi).epsilon(1e-13));
    CHECK(ball3.levels[1].multiplicity == 3);
    CHECK(ball3.levels[1].lambda == doctest::Approx(20.190728556426627).epsilon(1e-13));  // j_{3/2,1}^2
    // strictly increasing, bounded by lambda_max
    for (std::size_t k = 1; k < sq.levels.size(); ++k) CHECK(sq.levels[k].lambda > sq.levels[k - 1].lambda);
    CHECK(sq.levels.back().lambda <= sq.lambda_max);
    // union of components
    const auto u = spectra::enumerate_eigenvalues(Domain::box_union({{{0, 0}, {1, 1}}, {{1, 0}, {2, 0.5}}}), 300);
    CHECK(u.lambda1() == doctest::Approx(2 * pi * pi));
    CHECK(spectra::counting_function(u, 5 * pi * pi + 1) == 3 + 1);  // 2pi^2, 5pi^2 x2, 5pi^2 from 1 x 1/2
}

TEST_CASE("enumeration errors") {
    CHECK_THROWS_AS(spectra::enumerate_eigenvalues(Domain::horn2d_exp(), 100), UnsupportedError);
    CHECK_THROWS_AS(spectra::enumerate_eigenvalues(Domain::ball(4, 1), 100), UnsupportedError);
    CHECK_THROWS_AS(spectra::enumerate_eigenvalues(Domain::box({1, 1}), 10), ParameterError);
    CHECK_THROWS_AS(spectra::enumerate_eigenvalues(Domain::box({1, 1}), 1e12), ParameterError);
    CHECK_THROWS_AS(spectra::heat_trace_exact(square(), 0.0), DomainError);
    CHECK_THROWS_AS(spectra::riesz_mean_exact(square(), 1.0, 2 * kLmax2), IncompleteSpectrumError);
}

TEST_CASE("heat trace against theta functions") {
    for (double t : {1e-3, 0.01, 0.1, 1.0, 10.0}) {
        const double th = theta_tail(t, 1.0);
        const auto z = spectra::heat_trace_exact(square(), t);
        CAPTURE(t);
        CHECK(z.value == doctest::Approx(th * th).epsilon(1e-12));
        CHECK(z.certified());
    }
    const auto r = Domain::box({1, 0.2});
    const auto rs = spectra::enumerate_eigenvalues(r, kLmax2);
    for (double t : {2e-3, 0.03, 0.4}) {
        CHECK(spectra::heat_trace_exact(rs, t).value == doctest::Approx(theta_tail(t, 1.0) * theta_tail(t, 0.2)).epsilon(1e-12));
    }
    const double t = 0.01;
    const double weyl3 = 1.0 / (4 * pi * t) - 4.0 / (4 * std::sqrt(4 * pi * t)) + 0.25;
    CHECK(std::abs(spectra::heat_trace_exact(square(), t).value / weyl3 - 1.0) < 0.01);
    // ground-state domination
    const double big = 3.0;
    CHECK(spectra::heat_trace_exact(square(), big).value * std::exp(2 * pi * pi * big) == doctest::Approx(1.0).epsilon(1e-12));
    // tail flag trips when lambda_max is too small for t
    const auto small = spectra::enumerate_eigenvalues(Domain::box({1, 1}), 500);
    CHECK_FALSE(spectra::heat_trace_exact(small, 1e-3).certified());
}

TEST_CASE("heat trace decreases in t and respects Kac") {
    std::vector<const spectra::Spectrum*> specs{&square(), &disk()};
    const auto cube = spectra::enumerate_eigenvalues(Domain::box({1, 1, 1}), spectra::default_lambda_max(3, 1e-3));
    const auto ball3 = spectra::enumerate_eigenvalues(Domain::ball(3, 1), spectra::default_lambda_max(3, 1e-3));
    const auto u = spectra::enumerate_eigenvalues(Domain::box_union({{{0, 0}, {1, 1}}, {{1, 0}, {2, 0.5}}}), kLmax2);
    specs.push_back(&cube);
    specs.push_back(&ball3);
    specs.push_back(&u);
    for (const auto* s : specs) {
        double prev = INFINITY;
        int bad = 0;
        for (double t : log_grid(1e-3, 1e2, 200)) {
            const auto z = spectra::heat_trace_exact(*s, t);
            const double kac = s->volume / std::pow(4 * pi * t, 0.5 * s->d);
            bad += !(z.value + z.tail_bound < kac);
            bad += !(z.value < prev || prev == 0.0);  // exp underflow at large t
            bad += !z.certified();
            prev = z.value;
        }
        CAPTURE(s->domain.describe());
        CHECK(bad == 0);
    }
}

TEST_CASE("Riesz means") {
    const auto& sq = square();
    CHECK(spectra::riesz_mean_exact(sq, 1.0, 2 * pi * pi) == 0.0);
    CHECK(spectra::riesz_mean_exact(sq, 2.5, 1.0) == 0.0);
    CHECK(spectra::riesz_mean_exact(sq, 0.0, 3 * pi * pi) == 1.0);
    CHECK(spectra::riesz_mean_exact(sq, 0.0, 5 * pi * pi) == 1.0);  // strict count
    CHECK(spectra::riesz_mean_exact(sq, 1.0, 6 * pi * pi) == doctest::Approx(6 * pi * pi).epsilon(1e-14));
    // Berezin-Li-Yau and Weyl-type counting bounds
    int bad = 0;
    for (const auto* s : {&square(), &disk()}) {
        const double L1 = specfun::lcl(1.0, 2).value, L0 = specfun::lcl(0.0, 2).value;
        for (double Lam : log_grid(1.0, 2e4, 300)) {
            bad += spectra::riesz_mean_exact(*s, 1.0, Lam) > L1 * s->volume * Lam * Lam;
            bad += spectra::counting_function(*s, Lam) > L0 * s->volume * Lam;
        }
    }
    CHECK(bad == 0);
}

TEST_CASE("Laplace transform of the Riesz mean gives the heat trace") {
    const auto& sq = square();
    const double sigma = specfun::sigma_d(2);
    const double L = specfun::lcl(sigma, 2).value;
    for (double t : {0.05, 0.2, 1.0}) {
        const double cut = std::min(60.0 / t, sq.lambda_max);
        std::vector<double> bp;
        for (const auto& l : sq.levels)
            if (l.lambda < cut) bp.push_back(l.lambda);
        auto f = [&](double Lam) { return spectra::riesz_mean_exact(sq, sigma, Lam) * std::exp(-Lam * t); };
        const double lo = bp.front();
        bp.erase(bp.begin());
        quadrature::Options o;
        o.rel_tol = 1e-11;
        o.max_subdivisions = 100000;
        const double body = quadrature::integral(f, lo, cut, o, bp);
        // tail bounded through R_sigma <= L |Omega| Lambda^{sigma+1}
        const double a = sigma + 2.0;
        const double tail = L * std::exp(specfun::log_gamma(a) + std::log(specfun::upper_gamma(a, cut * t)) - a * std::log(t));
        const double pref = std::exp((sigma + 1) * std::log(t) - specfun::log_gamma(sigma + 1));
        const double z = spectra::heat_trace_exact(sq, t).value;
        CAPTURE(t);
        CHECK(pref * tail < 1e-9 * z);
        CHECK(std::abs(pref * body / z - 1.0) < 1e-6);
    }
}

TEST_CASE("Faber-Krahn and dilation") {
    for (const auto* s : {&square(), &disk()}) CHECK(s->lambda1() >= geometry::faber_krahn_lambda(s->volume, 2));
    CHECK(disk().lambda1() == doctest::Approx(geometry::faber_krahn_lambda(pi, 2)).epsilon(1e-10));
    const auto b3 = spectra::enumerate_eigenvalues(Domain::ball(3, 0.8), 100);
    CHECK(b3.lambda1() == doctest::Approx(geometry::faber_krahn_lambda(b3.volume, 3)).epsilon(1e-10));
    const auto cube = spectra::enumerate_eigenvalues(Domain::box({1, 2, 0.5}), 2000);
    CHECK(cube.lambda1() >= geometry::faber_krahn_lambda(1.0, 3));
    const double s = 1.7;
    const auto a = spectra::enumerate_eigenvalues(Domain::box({1, 0.6}), 3000);
    const auto b = spectra::enumerate_eigenvalues(Domain::box({s, 0.6 * s}), 3000 / (s * s));
    REQUIRE(a.levels.size() == b.levels.size());
    for (std::size_t k = 0; k < a.levels.size(); ++k) {
        CHECK(b.levels[k].lambda == doctest::Approx(a.levels[k].lambda / (s * s)).epsilon(1e-13));
        CHECK(b.levels[k].multiplicity == a.levels[k].multiplicity);
    }
}

TEST_CASE("CSV export") {
    const auto s = spectra::enumerate_eigenvalues(Domain::box({1, 1}), 60);
    std::ostringstream os;
    spectra::write_csv(s, os);
    CHECK(os.str().rfind("index,lambda,multiplicity\n1,19.7392088021787", 0) == 0);
    CHECK(os.str().find("\n2,49.348022005446") != std::string::npos);
    CHECK(os.str().find(",2\n") != std::string::npos);
}
