#include "heatbound/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <sstream>

#include "heatbound/errors.hpp"

namespace heatbound::quadrature {

namespace {

// QUADPACK qk21 abscissae and weights (Kronrod nodes, Gauss on odd indices).
constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208639561336, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk21(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * wgk[10];
    double resg = 0.0;
    double resabs = std::abs(resk);
    double fv1[10], fv2[10];
    for (int j = 0; j < 10; ++j) {
        const double dx = h * xgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        const double s = fv1[j] + fv2[j];
        resk += wgk[j] * s;
        resabs += wgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += wg[j / 2] * s;
    }
    const double mean = 0.5 * resk;
    double resasc = wgk[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) resasc += wgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    resk *= h;
    resg *= h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(err, 50.0 * eps * resabs);
    if (!std::isfinite(resk)) {
        std::ostringstream os;
        os << "quadrature: non-finite integrand on [" << a << ", " << b << "]";
        throw NumericError(os.str());
    }
    return {a, b, resk, err};
}

}  // namespace

double default_rel_tol() {
    static const double tol = [] {
        if (const char* env = std::getenv("HEATBOUND_TOL")) {
            char* end = nullptr;
            const double v = std::strtod(env, &end);
            if (end != env && std::isfinite(v) && v > 0.0) return v;
        }
        return 1e-10;
    }();
    return tol;
}

Result integrate(const Integrand& f, double a, double b, const Options& opts,
                 const std::vector<double>& breakpoints) {
    if (!(std::isfinite(a) && std::isfinite(b))) throw DomainError("quadrature: infinite limits");
    if (a == b) return {0.0, 0.0, 0};
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Piece> heap;
    double total = 0.0, error = 0.0;
    int evals = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Piece p = gk21(f, cuts[i], cuts[i + 1]);
        evals += 21;
        total += p.value;
        error += p.error;
        heap.push(p);
    }
    const double tiny = 4.0 * std::numeric_limits<double>::epsilon();
    int splits = 0;
    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (splits >= opts.max_subdivisions) {
            std::ostringstream os;
            os.precision(6);
            os << "quadrature: no convergence on [" << a << ", " << b << "] after " << splits
               << " subdivisions (estimate " << total << ", error " << error << ")";
            throw NumericError(os.str());
        }
        Piece worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a <= tiny * std::max(std::abs(worst.a), std::abs(worst.b))) {
            // Interval at machine resolution: its error cannot shrink further.
            if (worst.error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) * 1e-3) break;
            std::ostringstream os;
            os << "quadrature: interval collapsed near " << mid << " with error " << worst.error;
            throw NumericError(os.str());
        }
        heap.pop();
        Piece l = gk21(f, worst.a, mid);
        Piece r = gk21(f, mid, worst.b);
        evals += 42;
        total += l.value + r.value - worst.value;
        error += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++splits;
        // Running sums drift; refresh occasionally.
        if (splits % 256 == 0) {
            auto copy = heap;
            total = error = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
    }
    return {sign * total, error, evals};
}

}  // namespace heatbound::quadrature
