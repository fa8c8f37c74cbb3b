#pragma once

#include <string>

#include "newton_atlas/dynamics.hpp"

namespace newton_atlas {

/// NBAS binary raster format, little endian throughout.
///
///   offset  size  field
///   0       4     magic "NBAS"
///   4       4     u32 version (1)
///   8       4     u32 width
///   12      4     u32 height
///   16      4     u32 root_count
///   20      4     u32 petal_count
///   24      32    f64 center_re, center_im, region_width, region_height
///   56      ...   width*height records: i16 label, i32 component, i32 iterations
void write_raster(const BasinRaster& raster, const std::string& path);

BasinRaster read_raster(const std::string& path);

}  // namespace newton_atlas
