#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "heatbound/errors.hpp"
#include "heatbound/geometry.hpp"
#include "json.hpp"

namespace heatbound::geometry {

namespace {

double to_double(std::string_view s, std::string_view ctx) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) {
        std::ostringstream os;
        os << "cannot parse number '" << s << "' in " << ctx;
        throw ParameterError(os.str());
    }
    return v;
}

int to_int(std::string_view s, std::string_view ctx) {
    const double v = to_double(s, ctx);
    if (v != static_cast<int>(v)) {
        std::ostringstream os;
        os << "expected an integer, got '" << s << "' in " << ctx;
        throw ParameterError(os.str());
    }
    return static_cast<int>(v);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// "k=v,k=v"; a leading bare token (a path) is stored under the empty key.
std::map<std::string, std::string, std::less<>> parse_args(std::string_view s, std::string_view ctx) {
    std::map<std::string, std::string, std::less<>> kv;
    if (s.empty()) return kv;
    for (auto tok : split(s, ',')) {
        const auto eq = tok.find('=');
        std::string key = eq == std::string_view::npos ? "" : std::string(tok.substr(0, eq));
        std::string val(eq == std::string_view::npos ? tok : tok.substr(eq + 1));
        if (!kv.emplace(key, val).second) {
            std::ostringstream os;
            os << "duplicate argument '" << key << "' in " << ctx;
            throw ParameterError(os.str());
        }
    }
    return kv;
}

template <class Map>
const std::string& need(const Map& kv, const std::string& key, std::string_view ctx) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        std::ostringstream os;
        os << ctx << ": missing " << (key.empty() ? "path" : "'" + key + "='");
        throw ParameterError(os.str());
    }
    return it->second;
}

template <class Map>
void only(const Map& kv, std::initializer_list<std::string_view> keys, std::string_view ctx) {
    for (const auto& [k, v] : kv) {
        bool ok = false;
        for (auto allowed : keys) ok = ok || k == allowed;
        if (!ok) {
            std::ostringstream os;
            os << ctx << ": unknown argument '" << k << "'";
            throw ParameterError(os.str());
        }
    }
}

}  // namespace

Domain parse_domain(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    const std::string ctx = "domain '" + std::string(spec) + "'";

    if (kind == "box") {
        std::vector<double> sides;
        for (auto t : split(rest, 'x')) sides.push_back(to_double(t, ctx));
        return Domain::box(std::move(sides));
    }
    if (kind == "hornexp") {
        if (!rest.empty()) throw ParameterError(ctx + ": takes no arguments");
        return Domain::horn2d_exp();
    }
    if (kind == "boxunion") {
        if (rest.empty()) throw ParameterError(ctx + ": missing JSON path");
        return load_box_union_json(std::string(rest));
    }
    if (kind == "raster") {
        // the path may itself contain commas; h is the last argument
        const auto pos = rest.rfind(",h=");
        if (pos == std::string_view::npos) throw ParameterError(ctx + ": expected raster:<path.pgm>,h=<cell size>");
        const double h = to_double(rest.substr(pos + 3), ctx);
        return Domain::raster(load_raster_pgm(std::string(rest.substr(0, pos)), h));
    }
    const auto kv = parse_args(rest, ctx);
    if (kind == "ball") {
        only(kv, {"d", "r"}, ctx);
        return Domain::ball(to_int(need(kv, "d", ctx), ctx), to_double(need(kv, "r", ctx), ctx));
    }
    if (kind == "horn") {
        only(kv, {"mu"}, ctx);
        return Domain::horn2d(to_double(need(kv, "mu", ctx), ctx));
    }
    if (kind == "rhorn") {
        only(kv, {"d", "mu"}, ctx);
        return Domain::radial_horn(to_int(need(kv, "d", ctx), ctx), to_double(need(kv, "mu", ctx), ctx));
    }
    if (kind == "rhornexp") {
        only(kv, {"d"}, ctx);
        return Domain::radial_horn_exp(to_int(need(kv, "d", ctx), ctx));
    }
    throw ParameterError("unknown domain kind '" + std::string(kind) +
                         "' (expected box, ball, boxunion, horn, hornexp, rhorn, rhornexp, raster)");
}

Domain load_box_union_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open box union file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("malformed JSON in '" + path + "': " + e.what());
    }
    const nlohmann::json& arr = j.is_object() && j.contains("boxes") ? j.at("boxes") : j;
    if (!arr.is_array()) throw ParameterError("'" + path + "': expected an array of boxes");
    std::vector<AlignedBox> boxes;
    try {
        for (const auto& b : arr) boxes.push_back({b.at("lo").get<std::vector<double>>(), b.at("hi").get<std::vector<double>>()});
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError("'" + path + "': each box needs numeric 'lo' and 'hi' arrays (" + e.what() + ")");
    }
    return Domain::box_union(std::move(boxes));
}

Raster2D load_raster_pgm(const std::string& path, double h) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot open raster file '" + path + "'");
    auto token = [&]() {
        std::string t;
        char c;
        while (in.get(c)) {
            if (c == '#') {
                std::string skip;
                std::getline(in, skip);
                if (!t.empty()) break;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!t.empty()) break;
                continue;
            }
            t.push_back(c);
        }
        if (t.empty()) throw ParameterError("'" + path + "': truncated PGM header or data");
        return t;
    };
    const std::string magic = token();
    if (magic != "P2" && magic != "P5") throw ParameterError("'" + path + "': not a PGM file (magic " + magic + ")");
    Raster2D g;
    g.h = h;
    g.cols = to_int(token(), path);
    g.rows = to_int(token(), path);
    const int maxval = to_int(token(), path);
    if (g.rows <= 0 || g.cols <= 0 || maxval <= 0 || maxval > 65535)
        throw ParameterError("'" + path + "': invalid PGM dimensions or maxval");
    const std::size_t n = static_cast<std::size_t>(g.rows) * static_cast<std::size_t>(g.cols);
    g.cells.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        int v = 0;
        if (magic == "P2") {
            v = to_int(token(), path);
        } else {
            const int bytes = maxval < 256 ? 1 : 2;
            for (int b = 0; b < bytes; ++b) {
                const int c = in.get();
                if (c == EOF) throw ParameterError("'" + path + "': truncated PGM data");
                v = (v << 8) | c;
            }
        }
        g.cells[k] = 2 * v > maxval ? 1 : 0;  // occupied above half intensity
    }
    return g;
}

}  // namespace heatbound::geometry
