#pragma once

#include <filesystem>

#include "vortgrad/euler.hpp"

namespace vortgrad {

/// Binary layout: "VCRS", u32 version = 1, u64 nx, u64 ny, f64 time,
/// f64 alpha, then nx * ny f64 values row-major (rows are y). Little-endian.
void write_snapshot(const std::filesystem::path& path, const SimState& state);
SimState read_snapshot(const std::filesystem::path& path);

}  // namespace vortgrad
