#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vpi/grid.hpp"
#include "vpi/radial_profile.hpp"
#include "vpi/symmetrize.hpp"

namespace vpi {

/// Flat little-endian layout:
///   int64 n (= 3), int64 dims[3], f64 origin[3], f64 spacing,
///   f64 edges of each axis (only when spacing == 0, i.e. a non-uniform mesh),
///   f64 values[dims[0] * dims[1] * dims[2]] row-major with the last index fastest.
/// Mirror-reduced meshes are unfolded to the full box before writing.
void write_grid_binary(const GridField& field, const std::filesystem::path& path);
GridField read_grid_binary(const std::filesystem::path& path);

/// Full (unfolded) copy of a mirror-reduced field; identity for plain meshes.
GridField unfold(const GridField& field);

/// Columns x,y,z,value,tag; refuses grids above `max_cells`.
void write_grid_csv(const GridField& field, const std::filesystem::path& path,
                    std::size_t max_cells = 1u << 20);

void write_profile_csv(const RadialProfile& profile, const std::filesystem::path& path);
void write_level_map_csv(const RearrangementResult& result, const std::filesystem::path& path);

/// RFC 4180 quoting of one field.
std::string csv_field(std::string_view text);
/// One CSV record terminated by LF.
std::string csv_row(const std::vector<std::string>& fields);
/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace vpi
