#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heatbound/errors.hpp"
#include "heatbound/harness.hpp"

using namespace heatbound;
using namespace heatbound::harness;

namespace {

Format pick_format(const std::string& fmt, const std::string& out) {
    if (!fmt.empty()) return parse_format(fmt);
    return std::filesystem::path(out).extension() == ".json" ? Format::json : Format::csv;
}

LambdaChoice pick_lambda(const std::string& s) {
    if (s == "fk") return LambdaChoice::fk;
    if (s == "ground") return LambdaChoice::ground;
    throw ParameterError("--lambda must be fk or ground");
}

int report_status(const Report& r) {
    std::cerr << r.domain << ": " << r.grid.size() << " points, " << r.columns.size() << " bounds, " << r.violations.size()
              << " violations, " << r.failed_cells << " failed cells\n";
    for (const auto& v : r.violations)
        std::cerr << "  violation: " << v.column << " at " << r.grid_name << " = " << format_double(v.x)
                  << ", margin " << format_double(v.margin) << '\n';
    if (!r.violations.empty()) return static_cast<int>(ExitCode::invariant_violation);
    if (r.numeric_failures > 0) return static_cast<int>(ExitCode::numeric);
    return 0;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(',', start);
        const std::string tok = s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParameterError("'" + tok + "' is not a number");
        }
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heat-trace and Riesz-mean bounds for the Dirichlet Laplacian"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));

    std::string domain, bound_list = "all", grid, out = "-", format, lambda = "fk", suite = "default", mu = "2,2.5,3,4,6";
    std::string out_dir;
    double sigma = 0.0;
    bool exact = false;
    int d_min = 2, d_max = 700;

    auto* heat = app.add_subcommand("heat", "evaluate heat-trace bounds on a t grid");
    heat->add_option("--domain", domain, "domain spec, e.g. box:1x1, ball:d=2,r=1, horn:mu=2")->required();
    heat->add_option("--bounds", bound_list, "comma list of bounds or all");
    heat->add_option("--t-grid", grid, "log:<lo>:<hi>:<n> or lin:...")->default_str(default_heat_grid().str());
    heat->add_flag("--exact", exact, "add the exact trace and margins (boxes, box unions, balls in d = 2, 3)");
    heat->add_option("--lambda", lambda, "fk (Faber-Krahn) or ground (lambda_1 of the spectrum)");
    heat->add_option("--out", out, "output path, - for stdout");
    heat->add_option("--format", format, "csv or json (default from the extension)");

    auto* riesz = app.add_subcommand("riesz", "evaluate Riesz-mean bounds on a Lambda grid");
    riesz->add_option("--domain", domain, "domain spec")->required();
    riesz->add_option("--sigma", sigma, "Riesz order")->required();
    riesz->add_option("--bounds", bound_list, "comma list of bounds (blysum_axis<k> for one direction) or all");
    riesz->add_option("--L-grid", grid, "grid; lambda1 may stand for an end")->default_str(default_riesz_grid().str());
    riesz->add_flag("--exact", exact, "add the exact Riesz mean and margins");
    riesz->add_option("--lambda", lambda, "fk or ground");
    riesz->add_option("--out", out, "output path, - for stdout");
    riesz->add_option("--format", format, "csv or json");

    auto* verify = app.add_subcommand("verify", "run a soundness suite; exit 0 iff no bound falls below the exact value");
    verify->add_option("--suite", suite, "default or all");
    verify->add_option("--out-dir", out_dir, "write every report there as JSON");

    auto* scan = app.add_subcommand("scan-hh", "compare the sharpened heat bound with exp(-t) Kac across dimensions");
    scan->add_option("--d-min", d_min, "first dimension");
    scan->add_option("--d-max", d_max, "last dimension");
    scan->add_option("--grid", grid, "t grid")->default_str(default_scan_grid().str());
    scan->add_option("--out", out, "output path, - for stdout");
    scan->add_option("--format", format, "csv or json");

    auto* eps = app.add_subcommand("eps-table", "analytic and brute-force epsilon(mu)");
    eps->add_option("--mu", mu, "comma list of mu >= 2");
    eps->add_option("--out", out, "output path, - for stdout");
    eps->add_option("--format", format, "csv or json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::parameter);
    }

    try {
        if (*heat) {
            const auto dom = geometry::parse_domain(domain);
            VerifyOptions o;
            o.exact = exact ? ExactMode::required : ExactMode::off;
            o.lambda = pick_lambda(lambda);
            const auto r = verify_heat(dom, parse_heat_bounds(bound_list, dom),
                                       grid.empty() ? default_heat_grid() : parse_grid(grid), o);
            emit(r, pick_format(format, out), out);
            return report_status(r);
        }
        if (*riesz) {
            const auto dom = geometry::parse_domain(domain);
            VerifyOptions o;
            o.exact = exact ? ExactMode::required : ExactMode::off;
            o.lambda = pick_lambda(lambda);
            const auto r = verify_riesz(dom, parse_riesz_bounds(bound_list, dom, sigma),
                                        grid.empty() ? default_riesz_grid() : parse_grid(grid), sigma, o);
            emit(r, pick_format(format, out), out);
            return report_status(r);
        }
        if (*verify) {
            const auto res = run_suite(suite);
            if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
            for (std::size_t i = 0; i < res.reports.size(); ++i) {
                const auto& r = res.reports[i];
                std::cout << (r.violations.empty() ? "ok   " : "FAIL ") << r.kind << ' ' << r.domain;
                if (r.metadata.contains("sigma")) std::cout << " sigma=" << r.metadata["sigma"].get<double>();
                std::cout << " lambda=" << r.metadata.value("lambda_choice", "fk") << " bounds=" << r.columns.size()
                          << " violations=" << r.violations.size() << " failed_cells=" << r.failed_cells << '\n';
                for (const auto& v : r.violations)
                    std::cout << "  " << v.column << " at " << r.grid_name << '=' << format_double(v.x)
                              << " margin=" << format_double(v.margin) << '\n';
                if (!out_dir.empty())
                    emit(r, Format::json, (std::filesystem::path(out_dir) / ("report_" + std::to_string(i) + ".json")).string());
            }
            std::cout << res.reports.size() << " reports, " << res.violations << " violations\n";
            if (res.violations > 0) return static_cast<int>(ExitCode::invariant_violation);
            return res.numeric_failures > 0 ? static_cast<int>(ExitCode::numeric) : 0;
        }
        if (*scan) {
            const auto r = scan_hh(d_min, d_max, grid.empty() ? default_scan_grid() : parse_grid(grid));
            emit(r, pick_format(format, out), out);
            std::cerr << "d* = " << (r.d_star ? std::to_string(*r.d_star) : "none") << '\n';
            for (const auto& v : r.dims)
                if (v.verdict == DimensionVerdict::Verdict::error) return static_cast<int>(ExitCode::numeric);
            return 0;
        }
        if (*eps) {
            emit(epsilon_table(parse_list(mu)), pick_format(format, out), out);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::numeric);
    }
    return 0;
}
