#include "diimap/report.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "diimap/error.hpp"

namespace diimap {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
    if (!out) throw IoError("cannot open output file " + path.string());
    return out;
}

void grid_metadata_line(std::ostream& out, const GridSpec& spec, double tau) {
    out << "# diimap grid cell_size=" << spec.cell_size << " width=" << spec.width
        << " height=" << spec.height << " tau=" << format_double(tau) << "\n";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

long parse_long(const std::string& s, const std::string& what, const std::string& origin) {
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw FormatError(origin + ": malformed " + what + " \"" + s + "\"");
    }
    return v;
}

double parse_real(const std::string& s, const std::string& what, const std::string& origin) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw FormatError(origin + ": malformed " + what + " \"" + s + "\"");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf;
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw Error("number formatting failed");
    return std::string(buf.data(), p);
}

std::string format_ratio(double v) {
    std::array<char, 32> buf;
    std::snprintf(buf.data(), buf.size(), "%.4f", v);
    return std::string(buf.data());
}

void write_dii_csv(const std::filesystem::path& path, const DiiGrid& grid,
                   const ImpactMap& impact) {
    if (!(grid.spec == impact.spec)) throw DimensionMismatch("dii grid and impact map disagree");
    std::ofstream out = open_out(path);
    grid_metadata_line(out, grid.spec, impact.tau);
    out << "row,col,change_count,before_count,dii,impacted\n";
    for (int r = 0; r < grid.spec.rows; ++r) {
        for (int c = 0; c < grid.spec.cols; ++c) {
            const std::size_t idx = static_cast<std::size_t>(r) * grid.spec.cols + c;
            out << r << ',' << c << ',' << grid.change_count[idx] << ',' << grid.before_count[idx]
                << ',' << format_double(grid.dii[idx]) << ',' << int(impact.impacted[idx]) << "\n";
        }
    }
    if (!out) throw IoError("failed writing " + path.string());
}

void write_impact_csv(const std::filesystem::path& path, const ImpactMap& impact) {
    std::ofstream out = open_out(path);
    grid_metadata_line(out, impact.spec, impact.tau);
    out << "row,col,impacted\n";
    for (int r = 0; r < impact.spec.rows; ++r) {
        for (int c = 0; c < impact.spec.cols; ++c) {
            const std::size_t idx = static_cast<std::size_t>(r) * impact.spec.cols + c;
            out << r << ',' << c << ',' << int(impact.impacted[idx]) << "\n";
        }
    }
    if (!out) throw IoError("failed writing " + path.string());
}

ImpactMap read_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open grid file " + path.string());
    const std::string origin = path.string();

    auto next_line = [&](std::string& line) {
        if (!std::getline(in, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    };

    std::string line;
    if (!next_line(line) || line.rfind("# diimap grid", 0) != 0) {
        throw FormatError(origin + ": missing \"# diimap grid\" metadata line");
    }
    int cell_size = 0, width = 0, height = 0;
    double tau = 0.0;
    {
        std::istringstream meta(line.substr(1));
        std::string token;
        while (meta >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            if (key == "cell_size") cell_size = static_cast<int>(parse_long(value, key, origin));
            else if (key == "width") width = static_cast<int>(parse_long(value, key, origin));
            else if (key == "height") height = static_cast<int>(parse_long(value, key, origin));
            else if (key == "tau") tau = parse_real(value, key, origin);
        }
    }
    if (cell_size < 1 || width < 1 || height < 1) {
        throw FormatError(origin + ": metadata must define cell_size, width and height");
    }

    if (!next_line(line)) throw FormatError(origin + ": missing header row");
    const std::vector<std::string> header = split_csv_line(line);
    int col_row = -1, col_col = -1, col_impacted = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "row") col_row = static_cast<int>(i);
        else if (header[i] == "col") col_col = static_cast<int>(i);
        else if (header[i] == "impacted") col_impacted = static_cast<int>(i);
    }
    if (col_row < 0 || col_col < 0 || col_impacted < 0) {
        throw FormatError(origin + ": header must contain row, col and impacted columns");
    }

    ImpactMap map;
    map.spec = make_grid(width, height, cell_size);
    map.tau = tau;
    map.impacted.assign(static_cast<std::size_t>(map.spec.cell_count()), 0);
    std::vector<std::uint8_t> seen(map.impacted.size(), 0);
    std::size_t rows_read = 0;
    while (next_line(line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw FormatError(origin + ": row with " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(header.size()));
        }
        const long r = parse_long(fields[col_row], "row", origin);
        const long c = parse_long(fields[col_col], "col", origin);
        if (r < 0 || r >= map.spec.rows || c < 0 || c >= map.spec.cols) {
            throw FormatError(origin + ": cell (" + std::to_string(r) + "," + std::to_string(c) +
                              ") outside the " + std::to_string(map.spec.rows) + "x" +
                              std::to_string(map.spec.cols) + " grid");
        }
        const std::size_t idx = static_cast<std::size_t>(r) * map.spec.cols + c;
        if (seen[idx]) {
            throw FormatError(origin + ": duplicate cell (" + std::to_string(r) + "," +
                              std::to_string(c) + ")");
        }
        seen[idx] = 1;
        map.impacted[idx] = parse_long(fields[col_impacted], "impacted", origin) != 0 ? 1 : 0;
        ++rows_read;
    }
    if (rows_read != map.impacted.size()) {
        throw FormatError(origin + ": " + std::to_string(rows_read) + " cells listed, expected " +
                          std::to_string(map.impacted.size()));
    }
    return map;
}

std::string metrics_csv(const std::vector<EvalReport>& reports) {
    std::ostringstream out;
    out << "setting,precision,recall,f1,iou,tp,fp,fn,tn\n";
    for (const EvalReport& r : reports) {
        out << r.setting << ',' << format_ratio(r.precision) << ',' << format_ratio(r.recall)
            << ',' << format_ratio(r.f1) << ',' << format_ratio(r.iou) << ',' << r.counts.tp
            << ',' << r.counts.fp << ',' << r.counts.fn << ',' << r.counts.tn << "\n";
    }
    return out.str();
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<EvalReport>& reports) {
    std::ofstream out = open_out(path);
    out << metrics_csv(reports);
    if (!out) throw IoError("failed writing " + path.string());
}

void write_impact_geojson(const std::filesystem::path& path, const ImpactMap& impact,
                          const DiiGrid* dii, const std::optional<WorldTransform>& world) {
    using ordered_json = nlohmann::ordered_json;
    ordered_json features = ordered_json::array();
    for (int r = 0; r < impact.spec.rows; ++r) {
        for (int c = 0; c < impact.spec.cols; ++c) {
            const std::size_t idx = static_cast<std::size_t>(r) * impact.spec.cols + c;
            if (!impact.impacted[idx]) continue;
            const GridSpec::CellRect rect = impact.spec.cell_rect(r, c);

            std::array<std::array<double, 2>, 4> corners{{
                {double(rect.x0), double(rect.y0)},
                {double(rect.x1), double(rect.y0)},
                {double(rect.x1), double(rect.y1)},
                {double(rect.x0), double(rect.y1)},
            }};
            if (world) {
                for (auto& p : corners) world->apply(p[0], p[1], p[0], p[1]);
            }
            // RFC 7946: exterior rings are counterclockwise. The transform may
            // flip the handedness, so orient by signed (shoelace) area.
            double area2 = 0.0;
            for (std::size_t i = 0; i < corners.size(); ++i) {
                const auto& p = corners[i];
                const auto& q = corners[(i + 1) % corners.size()];
                area2 += p[0] * q[1] - q[0] * p[1];
            }
            if (area2 < 0.0) std::swap(corners[1], corners[3]);

            ordered_json ring = ordered_json::array();
            for (const auto& p : corners) ring.push_back({p[0], p[1]});
            ring.push_back({corners[0][0], corners[0][1]});

            ordered_json props = {{"row", r}, {"col", c}};
            if (dii) props["dii"] = dii->dii[idx];
            features.push_back({{"type", "Feature"},
                                {"geometry",
                                 {{"type", "Polygon"},
                                  {"coordinates", ordered_json::array({ring})}}},
                                {"properties", props}});
        }
    }
    const ordered_json doc = {{"type", "FeatureCollection"}, {"features", features}};
    std::ofstream out = open_out(path);
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace diimap
