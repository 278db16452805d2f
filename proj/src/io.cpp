#include "fluxtune/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace fluxtune {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidArgument("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

}  // namespace

void write_spectrum_csv(const SpectrumMap& map, const std::filesystem::path& path) {
    map.validate();
    std::ofstream out = open_output(path);
    out << "# fluxtune spectrum map\n";
    out << "# x_kind=" << map.grid.x_meta.kind << "\n";
    out << "# x_unit=" << map.grid.x_meta.unit << "\n";
    out << "# y_kind=" << map.grid.y_meta.kind << "\n";
    out << "# y_unit=" << map.grid.y_meta.unit << "\n";
    out << "# nx=" << map.nx() << "\n";
    out << "# ny=" << map.ny() << "\n";
    out << "# seed=" << map.seed << "\n";
    out << "x,y,value\n";
    for (std::size_t ix = 0; ix < map.nx(); ++ix) {
        const std::string x = format_double(map.grid.x_axis[ix]);
        for (std::size_t iy = 0; iy < map.ny(); ++iy) {
            out << x << ',' << format_double(map.grid.y_axis[iy]) << ','
                << format_double(map.at(ix, iy)) << '\n';
        }
    }
}

SpectrumMap read_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::map<std::string, std::string> header;
    std::string line;
    std::size_t nx = 0, ny = 0;

    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                header[line.substr(2, eq - 2)] = line.substr(eq + 1);
            }
            continue;
        }
        if (line == "x,y,value") break;
        throw InvalidArgument("malformed spectrum CSV header in '" + path.string() + "'");
    }

    auto require = [&](const char* key) -> const std::string& {
        const auto it = header.find(key);
        if (it == header.end()) {
            throw InvalidArgument(std::string("spectrum CSV missing '") + key + "' header");
        }
        return it->second;
    };
    nx = std::stoull(require("nx"));
    ny = std::stoull(require("ny"));

    SpectrumMap map;
    map.grid.x_meta = {require("x_kind"), require("x_unit")};
    map.grid.y_meta = {require("y_kind"), require("y_unit")};
    map.seed = std::stoull(require("seed"));
    map.grid.x_axis.reserve(nx);
    map.grid.y_axis.reserve(ny);
    map.values.reserve(nx * ny);

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        double cells[3];
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(row, field, ',')) {
                throw InvalidArgument("short CSV row in '" + path.string() + "'");
            }
            cells[i] = std::strtod(field.c_str(), nullptr);
        }
        const std::size_t flat = map.values.size();
        if (flat % ny == 0) map.grid.x_axis.push_back(cells[0]);
        if (flat < ny) map.grid.y_axis.push_back(cells[1]);
        map.values.push_back(cells[2]);
    }
    if (map.grid.x_axis.size() != nx || map.grid.y_axis.size() != ny ||
        map.values.size() != nx * ny) {
        throw InvalidArgument("spectrum CSV shape mismatch in '" + path.string() + "'");
    }
    map.validate();
    return map;
}

json spectrum_to_json(const SpectrumMap& map) {
    map.validate();
    return json{{"format", "fluxtune-spectrum-map"},
                {"version", 1},
                {"grid",
                 {{"x",
                   {{"kind", map.grid.x_meta.kind},
                    {"unit", map.grid.x_meta.unit},
                    {"values", map.grid.x_axis}}},
                  {"y",
                   {{"kind", map.grid.y_meta.kind},
                    {"unit", map.grid.y_meta.unit},
                    {"values", map.grid.y_axis}}}}},
                {"seed", map.seed},
                {"values", map.values}};
}

SpectrumMap spectrum_from_json(const json& j) {
    if (j.value("format", "") != "fluxtune-spectrum-map") {
        throw InvalidArgument("not a fluxtune spectrum map document");
    }
    SpectrumMap map;
    const json& grid = j.at("grid");
    map.grid.x_meta = {grid.at("x").at("kind").get<std::string>(),
                       grid.at("x").at("unit").get<std::string>()};
    map.grid.y_meta = {grid.at("y").at("kind").get<std::string>(),
                       grid.at("y").at("unit").get<std::string>()};
    map.grid.x_axis = grid.at("x").at("values").get<std::vector<double>>();
    map.grid.y_axis = grid.at("y").at("values").get<std::vector<double>>();
    map.seed = j.at("seed").get<std::uint64_t>();
    map.values = j.at("values").get<std::vector<double>>();
    map.validate();
    return map;
}

void write_spectrum_json(const SpectrumMap& map, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << spectrum_to_json(map).dump(2) << '\n';
}

SpectrumMap read_spectrum_json(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    json j;
    in >> j;
    return spectrum_from_json(j);
}

SpectrumMap read_spectrum(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".json") return read_spectrum_json(path);
    if (ext == ".csv") return read_spectrum_csv(path);
    throw InvalidArgument("unsupported spectrum file extension '" + ext + "'");
}

json fit_result_to_json(const FitResult& result) {
    json parameters = json::object();
    json uncertainties = json::object();
    for (std::size_t i = 0; i < result.parameter_names.size(); ++i) {
        parameters[result.parameter_names[i]] = result.parameters[static_cast<Eigen::Index>(i)];
        uncertainties[result.parameter_names[i]] = result.uncertainty(result.parameter_names[i]);
    }
    json covariance = json::array();
    for (Eigen::Index i = 0; i < result.covariance.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < result.covariance.cols(); ++k) {
            row.push_back(result.covariance(i, k));
        }
        covariance.push_back(row);
    }
    return json{{"format", "fluxtune-fit-result"},
                {"parameter_order", result.parameter_names},
                {"parameters", parameters},
                {"uncertainties", uncertainties},
                {"covariance", covariance},
                {"residual_norm", result.residual_norm},
                {"iterations", result.iterations},
                {"converged", result.converged}};
}

void write_fit_result_json(const FitResult& result, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    out << fit_result_to_json(result).dump(2) << '\n';
}

json ridge_trace_to_json(const RidgeTrace& trace) {
    json dropped = json::array();
    for (const auto& d : trace.dropped) {
        dropped.push_back({{"index", d.index}, {"x", d.x}, {"reason", d.reason}});
    }
    return json{{"x", trace.x},
                {"peak_frequency", trace.peak_frequency},
                {"peak_uncertainty", trace.peak_uncertainty},
                {"dropped", dropped}};
}

namespace {

WireLoop loop_from_json(const json& j, const std::string& where) {
    if (!j.contains("vertices_m")) {
        throw InvalidArgument("geometry loop '" + where + "' missing vertices_m");
    }
    std::vector<Vec3> vertices;
    for (const json& v : j.at("vertices_m")) {
        if (!v.is_array() || v.size() != 3) {
            throw InvalidArgument("geometry loop '" + where + "' vertex is not [x, y, z]");
        }
        vertices.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
    }
    return WireLoop(std::move(vertices), j.at("wire_radius_m").get<double>(),
                    j.value("subdivisions_per_segment", 64));
}

}  // namespace

GeometryJob load_geometry(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    json j;
    in >> j;
    GeometryJob job{loop_from_json(j.at("loop_a"), "loop_a"),
                    loop_from_json(j.at("loop_b"), "loop_b"),
                    {}};
    if (j.contains("shared_segments")) {
        for (const json& pair : j.at("shared_segments")) {
            if (!pair.is_array() || pair.size() != 2) {
                throw InvalidArgument("shared_segments entries must be [index_a, index_b]");
            }
            job.shared_segments.emplace_back(pair[0].get<int>(), pair[1].get<int>());
        }
    }
    return job;
}

}  // namespace fluxtune
