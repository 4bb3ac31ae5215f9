#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "heatbound/bounds.hpp"
#include "heatbound/geometry.hpp"
#include "heatbound/spectra.hpp"

namespace heatbound::harness {

std::string_view version();

// "log:<lo>:<hi>:<n>" or "lin:<lo>:<hi>:<n>"; either end may be the token lambda1.
struct GridSpec {
    bool log = true;
    std::string lo;
    std::string hi;
    int n = 0;

    std::string str() const;
};

GridSpec parse_grid(std::string_view text);
// lambda1 resolves the symbolic end; ParameterError when it is needed but absent.
std::vector<double> make_grid(const GridSpec& spec, std::optional<double> lambda1 = std::nullopt);

GridSpec default_heat_grid();   // log:1e-3:1e2:200
GridSpec default_riesz_grid();  // log:lambda1:500:200
GridSpec default_scan_grid();   // log:1e-6:1e4:2000

enum class ExactMode { off, when_available, required };
enum class LambdaChoice { fk, ground };

struct VerifyOptions {
    ExactMode exact = ExactMode::when_available;
    LambdaChoice lambda = LambdaChoice::fk;
    double slack = 1e-9;
    // Reused when given; it must reach far enough for the grid.
    const spectra::Spectrum* spectrum = nullptr;
};

struct Column {
    std::string name;
    std::vector<double> values;               // NaN where the cell failed
    std::vector<double> margin;               // bound - exact; empty without exact
    std::vector<std::string> errors;          // empty string = cell evaluated
    std::vector<std::optional<bounds::SCase>> cases;  // thmriesz and corriesz only
};

struct Violation {
    std::string column;
    std::size_t index;
    double x;
    double margin;
};

struct Report {
    std::string kind;  // heat, riesz, epsilon
    std::string domain;
    std::string grid_name;
    std::vector<double> grid;
    std::optional<std::vector<double>> exact;
    std::optional<std::vector<double>> tail_bound;
    std::vector<Column> columns;
    std::vector<Violation> violations;
    int failed_cells = 0;
    int numeric_failures = 0;
    nlohmann::ordered_json metadata;

    const Column& column(std::string_view name) const;
};

struct HeatRequest {
    std::string name;
    bounds::HeatBoundSpec spec;
};

struct RieszRequest {
    std::string name;
    bounds::RieszBoundSpec spec;
};

// Comma list of kind names or "all" (every kind applicable to the domain).
std::vector<HeatRequest> parse_heat_bounds(std::string_view list, const geometry::Domain& domain);
// Also accepts blysum_axis<k> for a single direction; "all" adds every axis.
std::vector<RieszRequest> parse_riesz_bounds(std::string_view list, const geometry::Domain& domain, double sigma);

// Whether heat traces and Riesz means can be computed exactly for this domain.
bool has_exact_spectrum(const geometry::Domain& domain);

Report verify_heat(const geometry::Domain& domain, const std::vector<HeatRequest>& bounds, const GridSpec& grid,
                   const VerifyOptions& opts = {});
Report verify_riesz(const geometry::Domain& domain, const std::vector<RieszRequest>& bounds, const GridSpec& grid,
                    double sigma, const VerifyOptions& opts = {});

Report epsilon_table(const std::vector<double>& mu);

struct SuiteResult {
    std::vector<Report> reports;
    std::size_t violations = 0;
    int numeric_failures = 0;
};

// default: square, disk, unit cube, two-box union; all adds a thin rectangle, the
// 3-ball, a three-box union and the horns (bounds only).
SuiteResult run_suite(std::string_view name);

// One scanned dimension. Margins are (hh_rhs - corheat) / kac at |Omega| = 1; min_margin is
// the deepest refined interior minimum when one exists.
struct DimensionVerdict {
    enum class Verdict { yes, no, error };
    int d;
    Verdict verdict;
    double min_margin;
    double t_at_min;
    std::optional<double> witness_t;
    std::vector<double> crossings;  // refined sign changes of the margin
    std::string diagnostic;
};

struct ScanResult {
    std::vector<DimensionVerdict> dims;
    std::optional<int> d_star;  // largest scanned d with verdict yes
    GridSpec grid;
    nlohmann::ordered_json metadata;

    const DimensionVerdict& at(int d) const;
};

double hh_margin(int d, double t);
DimensionVerdict scan_dimension(int d, const std::vector<double>& t_grid);
ScanResult scan_hh(int d_min, int d_max, const GridSpec& grid = default_scan_grid());
// Explicit dimension list, e.g. the band plus a few distant checks.
ScanResult scan_hh(const std::vector<int>& dims, const GridSpec& grid = default_scan_grid());

std::string_view verdict_name(DimensionVerdict::Verdict v);

enum class Format { csv, json };
Format parse_format(std::string_view s);

void write(const Report& r, Format f, std::ostream& out);
void write(const ScanResult& r, Format f, std::ostream& out);
nlohmann::ordered_json to_json(const Report& r);
nlohmann::ordered_json to_json(const ScanResult& r);
// Writes to path; "-" means stdout. I/O errors carry the system message.
void emit(const Report& r, Format f, const std::string& path);
void emit(const ScanResult& r, Format f, const std::string& path);

// %.17g, empty for NaN
std::string format_double(double v);

}  // namespace heatbound::harness
