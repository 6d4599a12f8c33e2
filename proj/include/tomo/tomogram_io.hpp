#pragma once

#include <filesystem>
#include <iosfwd>

#include "tomo/tomography.hpp"

namespace tomo {

// Tomogram CSV: header "theta,x,w", one line per (phase, x) cell, row-major
// by phase, every float printed with 17 significant digits.  Reading rebuilds
// the uniform x grid and re-validates normalization.

void write_tomogram_csv(std::ostream& out, const TomogramGrid& w);
TomogramGrid read_tomogram_csv(std::istream& in);

void save_tomogram(const std::filesystem::path& path, const TomogramGrid& w);
TomogramGrid load_tomogram(const std::filesystem::path& path);

}  // namespace tomo
