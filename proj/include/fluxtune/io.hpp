#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fluxtune/fit.hpp"
#include "fluxtune/inductance.hpp"
#include "fluxtune/sweep.hpp"

namespace fluxtune {

// CSV form: `# key=value` header comments, then `x,y,value` rows (x outer).
// Doubles are printed with enough digits to round-trip exactly.
void write_spectrum_csv(const SpectrumMap& map, const std::filesystem::path& path);
SpectrumMap read_spectrum_csv(const std::filesystem::path& path);

// JSON form: axes + row-major values + seed; round-trips bit-exact.
nlohmann::json spectrum_to_json(const SpectrumMap& map);
SpectrumMap spectrum_from_json(const nlohmann::json& j);
void write_spectrum_json(const SpectrumMap& map, const std::filesystem::path& path);
SpectrumMap read_spectrum_json(const std::filesystem::path& path);

// Reads .csv or .json by extension.
SpectrumMap read_spectrum(const std::filesystem::path& path);

nlohmann::json fit_result_to_json(const FitResult& result);
void write_fit_result_json(const FitResult& result, const std::filesystem::path& path);

nlohmann::json ridge_trace_to_json(const RidgeTrace& trace);

// Two-loop geometry job for the inductance solver.
struct GeometryJob {
    WireLoop loop_a;
    WireLoop loop_b;
    std::vector<std::pair<int, int>> shared_segments;
};

GeometryJob load_geometry(const std::filesystem::path& path);

}  // namespace fluxtune
