#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace heatbound::geometry {

// Axis indices are zero-based throughout: axis d-1 is the distinguished x_d.

struct AlignedBox {
    std::vector<double> lo;
    std::vector<double> hi;
};

struct Box {
    std::vector<double> sides;  // occupies [0, a_1] x ... x [0, a_d]
};

// Open boxes; shared faces act as Dirichlet walls between components.
struct BoxUnion {
    std::vector<AlignedBox> boxes;
};

struct Ball {
    int d;
    double radius;  // centred at the origin
};

// {x > 0, 0 < y < x^(-1/mu)}; widths are taken in the frame rotated by pi/4.
struct Horn2D {
    double mu;
};

// {x > 0, 0 < y < exp(-2x)} in its native frame.
struct Horn2DExp {};

// {|x_d| < f(|x'|)/2} with f(s) = (omega_{d-1} s^{d-1})^(-1/mu), so m_d(tau) = tau^-mu.
struct RadialHorn {
    int d;
    double mu;
};

// Same construction with f(s) = exp(-omega_{d-1} s^{d-1}), so m_d(tau) = (-ln tau)_+.
struct RadialHornExp {
    int d;
};

// Occupancy grid; cell (row, col) covers [col h, (col+1) h] x [row h, (row+1) h].
struct Raster2D {
    int rows = 0;
    int cols = 0;
    double h = 1.0;
    std::vector<std::uint8_t> cells;  // row-major, nonzero = occupied

    bool at(int row, int col) const { return cells[static_cast<std::size_t>(row) * cols + col] != 0; }
};

// Distribution of section lengths along one axis for piecewise-constant domains.
struct SectionCell {
    double p;                        // aggregated section length
    double measure;                  // (d-1)-measure of the base cell
    std::vector<double> intervals;   // individual interval lengths making up p
};

struct SectionProfile {
    std::vector<SectionCell> cells;  // sorted by p ascending, p > 0
    std::vector<double> prefix_pm;   // sum of p * measure over cells[0..k)
    std::vector<double> suffix_m;    // sum of measure over cells[k..)
};

class Domain {
public:
    using Shape = std::variant<Box, BoxUnion, Ball, Horn2D, Horn2DExp, RadialHorn, RadialHornExp, Raster2D>;

    static Domain box(std::vector<double> sides);
    static Domain box_union(std::vector<AlignedBox> boxes);
    static Domain ball(int d, double radius);
    static Domain horn2d(double mu);
    static Domain horn2d_exp();
    static Domain radial_horn(int d, double mu);
    static Domain radial_horn_exp(int d);
    static Domain raster(Raster2D grid);

    int dimension() const { return dim_; }
    const Shape& shape() const { return shape_; }
    std::string describe() const;

    // Cached per-axis section profile for Box, BoxUnion and Raster2D; null otherwise.
    const SectionProfile* profile(int axis) const;

private:
    Domain(Shape s, int d);
    Shape shape_;
    int dim_;
    std::shared_ptr<const std::vector<SectionProfile>> profiles_;
};

double volume(const Domain& domain);  // +infinity for infinite volume
bool has_finite_volume(const Domain& domain);

double section_length(const Domain& domain, int axis, const std::vector<double>& point);

// m_i(tau). For Horn2D this is an upper envelope, see width_is_exact.
double width_distribution(const Domain& domain, int axis, double tau);
bool width_is_exact(const Domain& domain, int axis);

// M_i(y); +infinity when the integral diverges at 0.
double integrated_width(const Domain& domain, int axis, double y);

// Integral of m_i over (y, infinity); +infinity when it diverges.
double width_tail(const Domain& domain, int axis, double y);

// Locations of kinks or jumps of m_i, useful as quadrature breakpoints.
std::vector<double> width_breakpoints(const Domain& domain, int axis);

struct AveragedWidth {
    double m;
    double M;
};

AveragedWidth averaged_width(const Domain& domain, double y);

class WidthProfile {
public:
    WidthProfile(Domain domain, int axis);
    double m(double tau) const { return width_distribution(domain_, axis_, tau); }
    double M(double y) const { return integrated_width(domain_, axis_, y); }
    double tail(double y) const { return width_tail(domain_, axis_, y); }
    bool exact() const { return width_is_exact(domain_, axis_); }
    int axis() const { return axis_; }

private:
    Domain domain_;
    int axis_;
};

double mest_lower_bound(double volume, int d, double y);
double tau_omega(double volume, int d);
double faber_krahn_lambda(double volume, int d);
double ball_radius_for_volume(double volume, int d);
double unit_ball_volume(int d);

struct OmegaLambdaStats {
    double volume;    // |Omega_Lambda|
    double d_lambda;  // effective projected area with multiplicity
};

OmegaLambdaStats omega_lambda_stats(const Domain& domain, double Lambda);

// Section lengths along x_d; |Omega_Lambda| and d_Lambda jump where pi^2/l^2 crosses Lambda.
std::vector<double> section_interval_lengths(const Domain& domain);

Raster2D raster_rearrange(const Raster2D& grid);

double second_moment_ball(double volume, int d);
double second_moment(const Domain& domain);  // about the centroid

Domain parse_domain(std::string_view spec);
Domain load_box_union_json(const std::string& path);
Raster2D load_raster_pgm(const std::string& path, double h);

}  // namespace heatbound::geometry
