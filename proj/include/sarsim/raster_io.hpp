#pragma once

#include <filesystem>
#include <string>

#include "sarsim/sar_imaging.hpp"

namespace sarsim {

/// Float raster layout: a text header
///
///   SARSIM-RASTER 1
///   width <W>
///   height <H>
///   dx <metres>
///   dy <metres>
///   end
///
/// followed by W*H little-endian IEEE-754 float32 values, row-major.
inline constexpr const char* kRasterMagic = "SARSIM-RASTER 1";

/// Throws NumericalError if a pixel overflows float32.
void write_raster(const std::filesystem::path& path, const IntensityImage& image);
/// Throws StructuralError on a malformed file.
IntensityImage read_raster(const std::filesystem::path& path);

/// 8-bit binary PGM, min-max stretched.
void write_pgm(const std::filesystem::path& path, const IntensityImage& image);

/// Metadata sidecar next to a raster: <path>.json with the image metadata
/// merged into `extra` (a JSON object serialised as text).
void write_metadata_sidecar(const std::filesystem::path& raster_path, const IntensityImage& image,
                            const std::string& extra_json = "{}");
/// Reads the metadata back from a sidecar, if present.
void read_metadata_sidecar(const std::filesystem::path& raster_path, IntensityImage& image);

}  // namespace sarsim
