#include "heatbound/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "heatbound/errors.hpp"
#include "heatbound/specfun.hpp"

namespace heatbound::spectra {

namespace {

using geometry::Domain;
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
constexpr double kMaxEigenvalues = 3e7;  // about 240 MB of doubles before grouping

// Kahan-Babuska-Neumaier summation.
struct Neumaier {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

void check_budget(double volume, int d, double lambda_max) {
    const double weyl = specfun::lcl(0.0, d).value * volume * std::pow(lambda_max, 0.5 * d);
    if (weyl > kMaxEigenvalues) {
        std::ostringstream os;
        os << "lambda_max = " << lambda_max << " would need about " << weyl
           << " eigenvalues; lower it or raise t_min";
        throw ParameterError(os.str());
    }
}

void box_eigenvalues(const std::vector<double>& sides, double lambda_max, std::vector<double>& out) {
    const std::size_t d = sides.size();
    const double budget = lambda_max / kPi2;
    std::vector<double> inv2(d);
    for (std::size_t i = 0; i < d; ++i) inv2[i] = 1.0 / (sides[i] * sides[i]);
    // minimal contribution of axes i.. (all k = 1), for early cutoff
    std::vector<double> floor_rest(d + 1, 0.0);
    for (std::size_t i = d; i-- > 0;) floor_rest[i] = floor_rest[i + 1] + inv2[i];
    std::vector<long> k(d, 1);
    auto rec = [&](auto&& self, std::size_t i, double acc) -> void {
        if (i == d) {
            out.push_back(kPi2 * acc);
            return;
        }
        for (long ki = 1;; ++ki) {
            const double a = acc + static_cast<double>(ki * ki) * inv2[i];
            if (a + floor_rest[i + 1] > budget) break;
            self(self, i + 1, a);
        }
    };
    rec(rec, 0, 0.0);
}

std::vector<Level> group(std::vector<std::pair<double, long>> raw) {
    std::sort(raw.begin(), raw.end());
    std::vector<Level> levels;
    for (const auto& [lam, mult] : raw) {
        if (!levels.empty() && lam - levels.back().lambda <= 1e-12 * levels.back().lambda)
            levels.back().multiplicity += mult;
        else
            levels.push_back({lam, mult});
    }
    return levels;
}

std::vector<std::pair<double, long>> with_unit_mult(const std::vector<double>& v) {
    std::vector<std::pair<double, long>> out;
    out.reserve(v.size());
    for (double x : v) out.emplace_back(x, 1);
    return out;
}

std::vector<std::pair<double, long>> ball_eigenvalues(int d, double R, double lambda_max) {
    std::vector<std::pair<double, long>> out;
    const double xmax = R * std::sqrt(lambda_max);
    for (int l = 0;; ++l) {
        const double nu = d == 2 ? l : l + 0.5;
        const long mult = d == 2 ? (l == 0 ? 1 : 2) : 2 * l + 1;
        const auto zeros = specfun::bessel_j_zeros_below(nu, xmax * (1 + 1e-15));
        bool any = false;
        for (double j : zeros) {
            const double lam = j * j / (R * R);
            if (lam <= lambda_max) {
                out.emplace_back(lam, mult);
                any = true;
            }
        }
        if (!any) break;  // j_{nu,1} increases with nu
    }
    return out;
}

}  // namespace

long Spectrum::count() const {
    long n = 0;
    for (const auto& l : levels) n += l.multiplicity;
    return n;
}

Spectrum enumerate_eigenvalues(const Domain& domain, double lambda_max) {
    if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) throw DomainError("enumerate_eigenvalues: lambda_max must be finite and > 0");
    const int d = domain.dimension();
    const double vol = geometry::volume(domain);
    std::vector<std::pair<double, long>> raw;
    if (const auto* b = std::get_if<geometry::Box>(&domain.shape())) {
        check_budget(vol, d, lambda_max);
        std::vector<double> v;
        box_eigenvalues(b->sides, lambda_max, v);
        raw = with_unit_mult(v);
    } else if (const auto* u = std::get_if<geometry::BoxUnion>(&domain.shape())) {
        check_budget(vol, d, lambda_max);
        std::vector<double> v;
        for (const auto& bx : u->boxes) {
            std::vector<double> sides(d);
            for (int i = 0; i < d; ++i) sides[i] = bx.hi[i] - bx.lo[i];
            box_eigenvalues(sides, lambda_max, v);
        }
        raw = with_unit_mult(v);
    } else if (const auto* ball = std::get_if<geometry::Ball>(&domain.shape())) {
        if (d != 2 && d != 3) throw UnsupportedError("enumerate_eigenvalues: balls are supported for d = 2, 3 only");
        check_budget(vol, d, lambda_max);
        raw = ball_eigenvalues(d, ball->radius, lambda_max);
    } else {
        throw UnsupportedError("enumerate_eigenvalues: no exact spectrum for " + domain.describe());
    }
    if (raw.empty()) {
        std::ostringstream os;
        os << "enumerate_eigenvalues: lambda_max = " << lambda_max << " lies below the ground state of "
           << domain.describe();
        throw ParameterError(os.str());
    }
    return Spectrum{group(std::move(raw)), lambda_max, domain, vol, d};
}

double default_lambda_max(int d, double t_min) {
    if (!(t_min > 0.0)) throw DomainError("default_lambda_max: t_min must be > 0");
    // exp(-L t/2) (4 pi t/2)^{-d/2} = 1e-12 (4 pi t)^{-d/2}
    return (2.0 / t_min) * (0.5 * d * std::log(2.0) + 12.0 * std::log(10.0));
}

HeatTrace heat_trace_exact(const Spectrum& s, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("heat_trace_exact: t must be finite and > 0");
    Neumaier acc;
    for (auto it = s.levels.rbegin(); it != s.levels.rend(); ++it)
        acc.add(static_cast<double>(it->multiplicity) * std::exp(-it->lambda * t));
    const double tail = std::exp(-0.5 * s.lambda_max * t - 0.5 * s.d * std::log(2.0 * std::numbers::pi * t)) * s.volume;
    return {acc.value(), tail};
}

double riesz_mean_exact(const Spectrum& s, double sigma, double Lambda) {
    if (!(sigma >= 0.0)) throw DomainError("riesz_mean_exact: sigma must be >= 0");
    if (Lambda > s.lambda_max) {
        std::ostringstream os;
        os << "riesz_mean_exact: Lambda = " << Lambda << " exceeds the enumerated range lambda_max = " << s.lambda_max;
        throw IncompleteSpectrumError(os.str());
    }
    Neumaier acc;
    for (const auto& l : s.levels) {
        if (!(l.lambda < Lambda)) break;
        acc.add(static_cast<double>(l.multiplicity) * (sigma == 0.0 ? 1.0 : std::pow(Lambda - l.lambda, sigma)));
    }
    return acc.value();
}

long counting_function(const Spectrum& s, double Lambda) {
    if (Lambda > s.lambda_max) throw IncompleteSpectrumError("counting_function: Lambda exceeds lambda_max");
    long n = 0;
    for (const auto& l : s.levels) {
        if (!(l.lambda < Lambda)) break;
        n += l.multiplicity;
    }
    return n;
}

void write_csv(const Spectrum& s, std::ostream& out) {
    const auto old = out.precision(17);
    out << "index,lambda,multiplicity\n";
    for (std::size_t k = 0; k < s.levels.size(); ++k)
        out << k + 1 << ',' << s.levels[k].lambda << ',' << s.levels[k].multiplicity << '\n';
    out.precision(old);
}

}  // namespace heatbound::spectra
