#pragma once

#include <filesystem>
#include <string>

#include "fluxtune/sweep.hpp"

namespace fluxtune {

// Minimal heatmap: linear color map, axis labels, block-averaged down to at
// most 240 cells per axis. Output bytes are a pure function of the map.
void write_spectrum_svg(const SpectrumMap& map, const std::filesystem::path& path,
                        const std::string& title = "");

}  // namespace fluxtune
