#include "heatbound/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "heatbound/errors.hpp"
#include "heatbound/specfun.hpp"

namespace heatbound::geometry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::numbers::sqrt2;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << what << " must be finite and > 0 (got " << v << ")";
        throw DomainError(os.str());
    }
}

void require_dim(int d, int min_d, const char* what) {
    if (d < min_d) {
        std::ostringstream os;
        os << what << ": dimension must be >= " << min_d << " (got " << d << ")";
        throw DomainError(os.str());
    }
}

void finalize(SectionProfile& prof) {
    auto& c = prof.cells;
    std::sort(c.begin(), c.end(), [](const SectionCell& a, const SectionCell& b) { return a.p < b.p; });
    const std::size_t n = c.size();
    prof.prefix_pm.assign(n + 1, 0.0);
    prof.suffix_m.assign(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) prof.prefix_pm[k + 1] = prof.prefix_pm[k] + c[k].p * c[k].measure;
    for (std::size_t k = n; k-- > 0;) prof.suffix_m[k] = prof.suffix_m[k + 1] + c[k].measure;
}

SectionProfile box_profile(const Box& b, int axis) {
    SectionProfile prof;
    double meas = 1.0;
    for (std::size_t j = 0; j < b.sides.size(); ++j)
        if (static_cast<int>(j) != axis) meas *= b.sides[j];
    prof.cells.push_back({b.sides[axis], meas, {b.sides[axis]}});
    finalize(prof);
    return prof;
}

// Sweep over the grid induced by box faces in the remaining axes.
SectionProfile union_profile(const BoxUnion& u, int d, int axis) {
    std::vector<int> others;
    for (int j = 0; j < d; ++j)
        if (j != axis) others.push_back(j);
    std::vector<std::vector<double>> grid(others.size());
    for (std::size_t k = 0; k < others.size(); ++k) {
        for (const auto& b : u.boxes) {
            grid[k].push_back(b.lo[others[k]]);
            grid[k].push_back(b.hi[others[k]]);
        }
        std::sort(grid[k].begin(), grid[k].end());
        grid[k].erase(std::unique(grid[k].begin(), grid[k].end()), grid[k].end());
    }
    SectionProfile prof;
    std::vector<std::size_t> idx(others.size(), 0);
    for (;;) {
        bool valid = true;
        for (std::size_t k = 0; k < others.size(); ++k)
            if (idx[k] + 1 >= grid[k].size()) valid = false;
        if (!valid) break;
        double meas = 1.0;
        std::vector<double> mid(others.size());
        for (std::size_t k = 0; k < others.size(); ++k) {
            meas *= grid[k][idx[k] + 1] - grid[k][idx[k]];
            mid[k] = 0.5 * (grid[k][idx[k] + 1] + grid[k][idx[k]]);
        }
        SectionCell cell{0.0, meas, {}};
        for (const auto& b : u.boxes) {
            bool inside = true;
            for (std::size_t k = 0; k < others.size() && inside; ++k)
                inside = b.lo[others[k]] < mid[k] && mid[k] < b.hi[others[k]];
            if (inside) cell.intervals.push_back(b.hi[axis] - b.lo[axis]);
        }
        for (double l : cell.intervals) cell.p += l;
        if (cell.p > 0.0) prof.cells.push_back(std::move(cell));
        std::size_t k = 0;
        for (; k < others.size(); ++k) {
            if (++idx[k] + 1 < grid[k].size()) break;
            idx[k] = 0;
        }
        if (k == others.size()) break;
    }
    finalize(prof);
    return prof;
}

// Runs of occupied cells; axis 0 runs along a row, axis 1 along a column.
SectionProfile raster_profile(const Raster2D& g, int axis) {
    SectionProfile prof;
    const int outer = axis == 0 ? g.rows : g.cols;
    const int inner = axis == 0 ? g.cols : g.rows;
    for (int o = 0; o < outer; ++o) {
        SectionCell cell{0.0, g.h, {}};
        int run = 0;
        for (int i = 0; i <= inner; ++i) {
            const bool occ = i < inner && (axis == 0 ? g.at(o, i) : g.at(i, o));
            if (occ) {
                ++run;
            } else if (run > 0) {
                cell.intervals.push_back(run * g.h);
                run = 0;
            }
        }
        for (double l : cell.intervals) cell.p += l;
        if (cell.p > 0.0) prof.cells.push_back(std::move(cell));
    }
    finalize(prof);
    return prof;
}

void check_axis(const Domain& dom, int axis) {
    if (axis < 0 || axis >= dom.dimension()) {
        std::ostringstream os;
        os << "axis " << axis + 1 << " out of range for a " << dom.dimension() << "-dimensional domain";
        throw DomainError(os.str());
    }
}

[[noreturn]] void unsupported(const Domain& dom, int axis, const char* op) {
    std::ostringstream os;
    os << op << ": not available for " << dom.describe() << " along axis " << axis + 1;
    throw UnsupportedError(os.str());
}

std::size_t first_above(const SectionProfile& prof, double tau) {
    auto it = std::upper_bound(prof.cells.begin(), prof.cells.end(), tau,
                               [](double t, const SectionCell& c) { return t < c.p; });
    return static_cast<std::size_t>(it - prof.cells.begin());
}

// Integral of tau^-a over (y, hi).
double power_integral(double a, double y, double hi) {
    if (y >= hi) return 0.0;
    if (a == 1.0) return std::log(hi / y);
    return (std::pow(hi, 1.0 - a) - std::pow(y, 1.0 - a)) / (1.0 - a);
}

double horn2d_envelope(double mu, double tau) {
    if (tau >= kSqrt2) return 0.0;
    return std::pow(2.0, 0.5 * (mu - 1.0)) * std::pow(tau, -mu) +
           std::pow(2.0, (1.0 - mu) / (2.0 * mu)) * std::pow(tau, -1.0 / mu);
}

// Largest t in (lo, hi) with pred true, for pred true on (lo, t*) and false beyond.
template <class F>
double bisect(F pred, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi); ++it) {
        const double m = 0.5 * (lo + hi);
        (pred(m) ? lo : hi) = m;
    }
    return 0.5 * (lo + hi);
}

double horn2d_section(double mu, int axis, double c) {
    auto f = [mu](double x) { return std::pow(x, -1.0 / mu); };
    if (axis == 1) {
        // Fixed x1 = c; x2 ranges over (|c|, x2*) where (x2-c)/sqrt2 = f((x2+c)/sqrt2).
        const double a = std::abs(c);
        auto inside = [&](double x2) { return (x2 - c) / kSqrt2 < f((x2 + c) / kSqrt2); };
        double hi = a + 1.0;
        while (inside(hi)) hi = a + 2.0 * (hi - a);
        return bisect(inside, a, hi) - a;
    }
    // Fixed x2 = c; with u = (c + x1)/sqrt2 in (0, sqrt2 c) the condition is u + f(u) > sqrt2 c.
    if (c <= 0.0) return 0.0;
    const double s = kSqrt2 * c;
    auto g = [&](double u) { return u + f(u); };
    const double u0 = std::pow(mu, -mu / (mu + 1.0));
    if (u0 >= s || g(u0) >= s) return 2.0 * c;
    const double u1 = bisect([&](double u) { return g(u) > s; }, 0.0, u0);
    const double u2 = bisect([&](double u) { return g(u) <= s; }, u0, s);
    return kSqrt2 * (u1 + s - u2);
}

}  // namespace

Domain::Domain(Shape s, int d) : shape_(std::move(s)), dim_(d) {
    std::vector<SectionProfile> prof;
    std::visit(overloaded{
                   [&](const Box& b) {
                       for (int i = 0; i < d; ++i) prof.push_back(box_profile(b, i));
                   },
                   [&](const BoxUnion& u) {
                       for (int i = 0; i < d; ++i) prof.push_back(union_profile(u, d, i));
                   },
                   [&](const Raster2D& g) {
                       for (int i = 0; i < 2; ++i) prof.push_back(raster_profile(g, i));
                   },
                   [](const auto&) {},
               },
               shape_);
    if (!prof.empty()) profiles_ = std::make_shared<const std::vector<SectionProfile>>(std::move(prof));
}

Domain Domain::box(std::vector<double> sides) {
    require_dim(static_cast<int>(sides.size()), 1, "box");
    for (double a : sides) require_positive(a, "box side length");
    const int d = static_cast<int>(sides.size());
    return Domain(Box{std::move(sides)}, d);
}

Domain Domain::box_union(std::vector<AlignedBox> boxes) {
    if (boxes.empty()) throw DomainError("box union: at least one box is required");
    const std::size_t d = boxes.front().lo.size();
    require_dim(static_cast<int>(d), 1, "box union");
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        const auto& b = boxes[k];
        if (b.lo.size() != d || b.hi.size() != d) throw DomainError("box union: members differ in dimension");
        for (std::size_t j = 0; j < d; ++j) {
            if (!std::isfinite(b.lo[j]) || !std::isfinite(b.hi[j]) || !(b.hi[j] > b.lo[j])) {
                std::ostringstream os;
                os << "box union: box " << k << " has empty or invalid extent along axis " << j + 1;
                throw DomainError(os.str());
            }
        }
    }
    for (std::size_t a = 0; a < boxes.size(); ++a) {
        for (std::size_t b = a + 1; b < boxes.size(); ++b) {
            bool overlap = true;
            for (std::size_t j = 0; j < d && overlap; ++j)
                overlap = std::min(boxes[a].hi[j], boxes[b].hi[j]) > std::max(boxes[a].lo[j], boxes[b].lo[j]);
            if (overlap) {
                std::ostringstream os;
                os << "box union: boxes " << a << " and " << b << " overlap";
                throw DomainError(os.str());
            }
        }
    }
    return Domain(BoxUnion{std::move(boxes)}, static_cast<int>(d));
}

Domain Domain::ball(int d, double radius) {
    require_dim(d, 1, "ball");
    require_positive(radius, "ball radius");
    return Domain(Ball{d, radius}, d);
}

Domain Domain::horn2d(double mu) {
    require_positive(mu, "horn exponent mu");
    return Domain(Horn2D{mu}, 2);
}

Domain Domain::horn2d_exp() { return Domain(Horn2DExp{}, 2); }

Domain Domain::radial_horn(int d, double mu) {
    require_dim(d, 2, "radial horn");
    if (!(mu > 1.0) || !std::isfinite(mu)) {
        std::ostringstream os;
        os << "radial horn: mu must be > 1 (got " << mu << ")";
        throw DomainError(os.str());
    }
    return Domain(RadialHorn{d, mu}, d);
}

Domain Domain::radial_horn_exp(int d) {
    require_dim(d, 2, "radial exponential horn");
    return Domain(RadialHornExp{d}, d);
}

Domain Domain::raster(Raster2D grid) {
    require_positive(grid.h, "raster cell size");
    if (grid.rows <= 0 || grid.cols <= 0 ||
        grid.cells.size() != static_cast<std::size_t>(grid.rows) * static_cast<std::size_t>(grid.cols))
        throw DomainError("raster: cell array does not match rows x cols");
    return Domain(std::move(grid), 2);
}

const SectionProfile* Domain::profile(int axis) const {
    if (!profiles_ || axis < 0 || axis >= static_cast<int>(profiles_->size())) return nullptr;
    return &(*profiles_)[axis];
}

std::string Domain::describe() const {
    std::ostringstream os;
    os.precision(12);
    std::visit(overloaded{
                   [&](const Box& b) {
                       os << "box:";
                       for (std::size_t j = 0; j < b.sides.size(); ++j) os << (j ? "x" : "") << b.sides[j];
                   },
                   [&](const BoxUnion& u) { os << "boxunion[" << u.boxes.size() << " boxes, d=" << dim_ << "]"; },
                   [&](const Ball& b) { os << "ball:d=" << b.d << ",r=" << b.radius; },
                   [&](const Horn2D& h) { os << "horn:mu=" << h.mu; },
                   [&](const Horn2DExp&) { os << "hornexp"; },
                   [&](const RadialHorn& h) { os << "rhorn:d=" << h.d << ",mu=" << h.mu; },
                   [&](const RadialHornExp& h) { os << "rhornexp:d=" << h.d; },
                   [&](const Raster2D& g) { os << "raster[" << g.rows << "x" << g.cols << ",h=" << g.h << "]"; },
               },
               shape_);
    return os.str();
}

double unit_ball_volume(int d) {
    require_dim(d, 0, "unit ball volume");
    return std::exp(0.5 * d * std::log(std::numbers::pi) - specfun::log_gamma(0.5 * d + 1.0));
}

double volume(const Domain& dom) {
    return std::visit(overloaded{
                          [](const Box& b) {
                              return std::accumulate(b.sides.begin(), b.sides.end(), 1.0, std::multiplies<>());
                          },
                          [](const BoxUnion& u) {
                              double v = 0.0;
                              for (const auto& b : u.boxes) {
                                  double p = 1.0;
                                  for (std::size_t j = 0; j < b.lo.size(); ++j) p *= b.hi[j] - b.lo[j];
                                  v += p;
                              }
                              return v;
                          },
                          [](const Ball& b) { return unit_ball_volume(b.d) * std::pow(b.radius, b.d); },
                          [](const Horn2D&) { return kInf; },
                          [](const Horn2DExp&) { return 0.5; },
                          [](const RadialHorn&) { return kInf; },
                          [](const RadialHornExp&) { return 1.0; },
                          [](const Raster2D& g) {
                              const auto n = std::count_if(g.cells.begin(), g.cells.end(), [](auto c) { return c != 0; });
                              return static_cast<double>(n) * g.h * g.h;
                          },
                      },
                      dom.shape());
}

bool has_finite_volume(const Domain& dom) { return std::isfinite(volume(dom)); }

double section_length(const Domain& dom, int axis, const std::vector<double>& point) {
    check_axis(dom, axis);
    const int d = dom.dimension();
    if (static_cast<int>(point.size()) != d - 1) {
        std::ostringstream os;
        os << "section_length: expected " << d - 1 << " coordinates, got " << point.size();
        throw DomainError(os.str());
    }
    auto coord = [&](int j) { return point[j < axis ? j : j - 1]; };  // j != axis
    return std::visit(
        overloaded{
            [&](const Box& b) {
                for (int j = 0; j < d; ++j)
                    if (j != axis && !(coord(j) > 0.0 && coord(j) < b.sides[j])) return 0.0;
                return b.sides[axis];
            },
            [&](const BoxUnion& u) {
                double p = 0.0;
                for (const auto& b : u.boxes) {
                    bool inside = true;
                    for (int j = 0; j < d && inside; ++j)
                        if (j != axis) inside = b.lo[j] < coord(j) && coord(j) < b.hi[j];
                    if (inside) p += b.hi[axis] - b.lo[axis];
                }
                return p;
            },
            [&](const Ball& b) {
                double r2 = 0.0;
                for (double x : point) r2 += x * x;
                return r2 < b.radius * b.radius ? 2.0 * std::sqrt(b.radius * b.radius - r2) : 0.0;
            },
            [&](const Horn2D& h) { return horn2d_section(h.mu, axis, point[0]); },
            [&](const Horn2DExp&) {
                const double c = point[0];
                if (axis == 1) return c > 0.0 ? std::exp(-2.0 * c) : 0.0;
                return (c > 0.0 && c < 1.0) ? -0.5 * std::log(c) : 0.0;
            },
            [&](const RadialHorn& h) {
                const double om = unit_ball_volume(d - 1);
                if (axis == d - 1) {
                    double r2 = 0.0;
                    for (double x : point) r2 += x * x;
                    return std::pow(om * std::pow(std::sqrt(r2), d - 1), -1.0 / h.mu);
                }
                // |x_d| < f(|x'|)/2 with f decreasing: |x'| < f^{-1}(2|x_d|).
                const double v = 2.0 * std::abs(coord(d - 1));
                if (v == 0.0) return kInf;
                const double smax = std::pow(std::pow(v, -h.mu) / om, 1.0 / (d - 1));
                double r2 = 0.0;
                for (int j = 0; j < d - 1; ++j)
                    if (j != axis) r2 += coord(j) * coord(j);
                return 2.0 * std::sqrt(std::max(0.0, smax * smax - r2));
            },
            [&](const RadialHornExp&) {
                const double om = unit_ball_volume(d - 1);
                if (axis == d - 1) {
                    double r2 = 0.0;
                    for (double x : point) r2 += x * x;
                    return std::exp(-om * std::pow(std::sqrt(r2), d - 1));
                }
                const double v = 2.0 * std::abs(coord(d - 1));
                if (v == 0.0) return kInf;
                if (v >= 1.0) return 0.0;
                const double smax = std::pow(-std::log(v) / om, 1.0 / (d - 1));
                double r2 = 0.0;
                for (int j = 0; j < d - 1; ++j)
                    if (j != axis) r2 += coord(j) * coord(j);
                return 2.0 * std::sqrt(std::max(0.0, smax * smax - r2));
            },
            [&](const Raster2D& g) {
                const int k = static_cast<int>(std::floor(point[0] / g.h));
                int n = 0;
                if (axis == 0 && k >= 0 && k < g.rows)
                    for (int c = 0; c < g.cols; ++c) n += g.at(k, c);
                if (axis == 1 && k >= 0 && k < g.cols)
                    for (int r = 0; r < g.rows; ++r) n += g.at(r, k);
                return n * g.h;
            },
        },
        dom.shape());
}

bool width_is_exact(const Domain& dom, int axis) {
    check_axis(dom, axis);
    return !std::holds_alternative<Horn2D>(dom.shape());
}

double width_distribution(const Domain& dom, int axis, double tau) {
    check_axis(dom, axis);
    if (!(tau > 0.0)) throw DomainError("width_distribution: tau must be > 0");
    if (const auto* prof = dom.profile(axis)) return prof->suffix_m[first_above(*prof, tau)];
    const int d = dom.dimension();
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                const double x = tau / (2.0 * b.radius);
                if (x >= 1.0) return 0.0;
                return unit_ball_volume(d - 1) * std::pow(b.radius, d - 1) * std::pow(1.0 - x * x, 0.5 * (d - 1));
            },
            [&](const Horn2D& h) {
                if (axis != 1) unsupported(dom, axis, "width_distribution");
                return horn2d_envelope(h.mu, tau);
            },
            [&](const Horn2DExp&) { return axis == 0 ? std::exp(-2.0 * tau) : (tau < 1.0 ? -0.5 * std::log(tau) : 0.0); },
            [&](const RadialHorn& h) {
                if (axis != d - 1) unsupported(dom, axis, "width_distribution");
                return std::pow(tau, -h.mu);
            },
            [&](const RadialHornExp&) {
                if (axis != d - 1) unsupported(dom, axis, "width_distribution");
                return tau < 1.0 ? -std::log(tau) : 0.0;
            },
            [](const auto&) -> double { throw NumericError("width_distribution: missing section profile"); },
        },
        dom.shape());
}

double integrated_width(const Domain& dom, int axis, double y) {
    check_axis(dom, axis);
    if (!(y >= 0.0)) throw DomainError("integrated_width: y must be >= 0");
    if (y == 0.0) return 0.0;
    if (const auto* prof = dom.profile(axis)) {
        const std::size_t k = first_above(*prof, y);
        return prof->prefix_pm[k] + y * prof->suffix_m[k];
    }
    const int d = dom.dimension();
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                const double x = std::min(1.0, y * y / (4.0 * b.radius * b.radius));
                return volume(dom) * specfun::inc_beta(x, 0.5, 0.5 * (d + 1));
            },
            [&](const Horn2D&) {
                if (axis != 1) unsupported(dom, axis, "integrated_width");
                return kInf;
            },
            [&](const Horn2DExp&) {
                if (axis == 0) return -0.5 * std::expm1(-2.0 * y);
                return y < 1.0 ? 0.5 * (y - y * std::log(y)) : 0.5;
            },
            [&](const RadialHorn&) {
                if (axis != d - 1) unsupported(dom, axis, "integrated_width");
                return kInf;
            },
            [&](const RadialHornExp&) {
                if (axis != d - 1) unsupported(dom, axis, "integrated_width");
                return y < 1.0 ? y - y * std::log(y) : 1.0;
            },
            [](const auto&) -> double { throw NumericError("integrated_width: missing section profile"); },
        },
        dom.shape());
}

double width_tail(const Domain& dom, int axis, double y) {
    check_axis(dom, axis);
    if (!(y >= 0.0)) throw DomainError("width_tail: y must be >= 0");
    if (const auto* prof = dom.profile(axis)) {
        const std::size_t k = first_above(*prof, y);
        double s = 0.0;
        for (std::size_t j = k; j < prof->cells.size(); ++j) s += (prof->cells[j].p - y) * prof->cells[j].measure;
        return s;
    }
    const int d = dom.dimension();
    return std::visit(
        overloaded{
            [&](const Ball& b) {
                const double x = std::min(1.0, y * y / (4.0 * b.radius * b.radius));
                return volume(dom) * specfun::inc_beta_complement(x, 0.5, 0.5 * (d + 1));
            },
            [&](const Horn2D& h) {
                if (axis != 1) unsupported(dom, axis, "width_tail");
                if (y == 0.0) return kInf;
                return std::pow(2.0, 0.5 * (h.mu - 1.0)) * power_integral(h.mu, y, kSqrt2) +
                       std::pow(2.0, (1.0 - h.mu) / (2.0 * h.mu)) * power_integral(1.0 / h.mu, y, kSqrt2);
            },
            [&](const Horn2DExp&) {
                if (axis == 0) return 0.5 * std::exp(-2.0 * y);
                return y < 1.0 ? 0.5 * (1.0 - y + y * std::log(y)) : 0.0;
            },
            [&](const RadialHorn& h) {
                if (axis != d - 1) unsupported(dom, axis, "width_tail");
                return y == 0.0 ? kInf : std::pow(y, 1.0 - h.mu) / (h.mu - 1.0);
            },
            [&](const RadialHornExp&) {
                if (axis != d - 1) unsupported(dom, axis, "width_tail");
                if (y == 0.0) return 1.0;
                return y < 1.0 ? 1.0 - y + y * std::log(y) : 0.0;
            },
            [](const auto&) -> double { throw NumericError("width_tail: missing section profile"); },
        },
        dom.shape());
}

std::vector<double> width_breakpoints(const Domain& dom, int axis) {
    check_axis(dom, axis);
    if (const auto* prof = dom.profile(axis)) {
        std::vector<double> out;
        for (const auto& c : prof->cells)
            if (out.empty() || c.p != out.back()) out.push_back(c.p);
        return out;
    }
    return std::visit(overloaded{
                          [](const Ball& b) { return std::vector<double>{2.0 * b.radius}; },
                          [](const Horn2D&) { return std::vector<double>{kSqrt2}; },
                          [&](const Horn2DExp&) { return axis == 1 ? std::vector<double>{1.0} : std::vector<double>{}; },
                          [](const RadialHornExp&) { return std::vector<double>{1.0}; },
                          [](const auto&) { return std::vector<double>{}; },
                      },
                      dom.shape());
}

AveragedWidth averaged_width(const Domain& dom, double y) {
    const int d = dom.dimension();
    AveragedWidth out{0.0, 0.0};
    std::vector<int> bad;
    for (int i = 0; i < d; ++i) {
        try {
            const double M = integrated_width(dom, i, y);
            if (!std::isfinite(M)) {
                bad.push_back(i);
                continue;
            }
            out.M += M;
            out.m += y > 0.0 ? width_distribution(dom, i, y) : 0.0;
        } catch (const UnsupportedError&) {
            bad.push_back(i);
        }
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << "averaged_width: " << dom.describe() << " has divergent or unavailable widths along axes";
        for (int i : bad) os << ' ' << i + 1;
        throw UnsupportedError(os.str());
    }
    if (y == 0.0) {
        // m(0+) as a limit
        for (int i = 0; i < d; ++i) out.m += width_distribution(dom, i, std::numeric_limits<double>::min());
    }
    out.m /= d;
    out.M /= d;
    return out;
}

WidthProfile::WidthProfile(Domain domain, int axis) : domain_(std::move(domain)), axis_(axis) {
    check_axis(domain_, axis_);
}

double mest_lower_bound(double vol, int d, double y) {
    require_positive(vol, "volume");
    require_dim(d, 1, "mest_lower_bound");
    if (!(y >= 0.0)) throw DomainError("mest_lower_bound: y must be >= 0");
    return std::min(vol / d, std::pow(vol, (d - 1.0) / d) * y);
}

double tau_omega(double vol, int d) {
    require_positive(vol, "volume");
    require_dim(d, 1, "tau_omega");
    return std::numbers::pi * std::numbers::pi * d * d * std::pow(vol, -2.0 / d);
}

double faber_krahn_lambda(double vol, int d) {
    require_positive(vol, "volume");
    require_dim(d, 1, "faber_krahn_lambda");
    if (d == 1) return std::numbers::pi * std::numbers::pi / (vol * vol);
    const double j = specfun::bessel_j_zero(0.5 * d - 1.0, 1).value;
    return std::numbers::pi * j * j *
           std::exp(-(2.0 / d) * (specfun::log_gamma(0.5 * d + 1.0) + std::log(vol)));
}

double ball_radius_for_volume(double vol, int d) {
    require_positive(vol, "volume");
    require_dim(d, 1, "ball_radius_for_volume");
    return std::pow(vol / unit_ball_volume(d), 1.0 / d);
}

OmegaLambdaStats omega_lambda_stats(const Domain& dom, double Lambda) {
    if (!std::holds_alternative<Box>(dom.shape()) && !std::holds_alternative<BoxUnion>(dom.shape()))
        throw UnsupportedError("omega_lambda_stats: only boxes and box unions are supported, got " + dom.describe());
    require_positive(Lambda, "Lambda");
    const double l = std::numbers::pi / std::sqrt(Lambda);
    const auto* prof = dom.profile(dom.dimension() - 1);
    OmegaLambdaStats out{0.0, 0.0};
    for (const auto& c : prof->cells) {
        for (double len : c.intervals) {
            if (len > l) {
                out.volume += c.measure * len;
                out.d_lambda += c.measure;
            }
        }
    }
    return out;
}

std::vector<double> section_interval_lengths(const Domain& dom) {
    if (!std::holds_alternative<Box>(dom.shape()) && !std::holds_alternative<BoxUnion>(dom.shape()))
        throw UnsupportedError("section_interval_lengths: only boxes and box unions are supported");
    std::vector<double> out;
    for (const auto& c : dom.profile(dom.dimension() - 1)->cells) out.insert(out.end(), c.intervals.begin(), c.intervals.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Raster2D raster_rearrange(const Raster2D& g) {
    Raster2D out = g;
    std::fill(out.cells.begin(), out.cells.end(), std::uint8_t{0});
    for (int c = 0; c < g.cols; ++c) {
        int n = 0;
        for (int r = 0; r < g.rows; ++r) n += g.at(r, c);
        for (int r = 0; r < n; ++r) out.cells[static_cast<std::size_t>(r) * g.cols + c] = 1;
    }
    return out;
}

double second_moment_ball(double vol, int d) {
    const double R = ball_radius_for_volume(vol, d);
    return d * vol * R * R / (d + 2.0);
}

double second_moment(const Domain& dom) {
    // Sum over rectangular pieces: own moment plus parallel-axis shift.
    struct Piece {
        std::vector<double> centre;
        std::vector<double> sides;
    };
    auto from_pieces = [](const std::vector<Piece>& ps) {
        const std::size_t d = ps.front().centre.size();
        double V = 0.0;
        std::vector<double> c(d, 0.0);
        for (const auto& p : ps) {
            const double v = std::accumulate(p.sides.begin(), p.sides.end(), 1.0, std::multiplies<>());
            V += v;
            for (std::size_t j = 0; j < d; ++j) c[j] += v * p.centre[j];
        }
        for (auto& x : c) x /= V;
        double I = 0.0;
        for (const auto& p : ps) {
            const double v = std::accumulate(p.sides.begin(), p.sides.end(), 1.0, std::multiplies<>());
            for (std::size_t j = 0; j < d; ++j) {
                const double dx = p.centre[j] - c[j];
                I += v * (p.sides[j] * p.sides[j] / 12.0 + dx * dx);
            }
        }
        return I;
    };
    return std::visit(overloaded{
                          [&](const Box& b) {
                              std::vector<double> c(b.sides.size());
                              for (std::size_t j = 0; j < c.size(); ++j) c[j] = 0.5 * b.sides[j];
                              return from_pieces({{c, b.sides}});
                          },
                          [&](const BoxUnion& u) {
                              std::vector<Piece> ps;
                              for (const auto& b : u.boxes) {
                                  Piece p;
                                  for (std::size_t j = 0; j < b.lo.size(); ++j) {
                                      p.centre.push_back(0.5 * (b.lo[j] + b.hi[j]));
                                      p.sides.push_back(b.hi[j] - b.lo[j]);
                                  }
                                  ps.push_back(std::move(p));
                              }
                              return from_pieces(ps);
                          },
                          [&](const Ball& b) { return second_moment_ball(volume(dom), b.d); },
                          [&](const Raster2D& g) {
                              std::vector<Piece> ps;
                              for (int r = 0; r < g.rows; ++r)
                                  for (int c = 0; c < g.cols; ++c)
                                      if (g.at(r, c)) ps.push_back({{(c + 0.5) * g.h, (r + 0.5) * g.h}, {g.h, g.h}});
                              if (ps.empty()) throw DomainError("second_moment: empty raster");
                              return from_pieces(ps);
                          },
                          [&](const auto&) -> double {
                              throw UnsupportedError("second_moment: not available for " + dom.describe());
                          },
                      },
                      dom.shape());
}

}  // namespace heatbound::geometry
