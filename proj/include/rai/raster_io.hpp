#pragma once

#include <string>

#include "rai/ascii_grid.hpp"
#include "rai/geotiff.hpp"
#include "rai/raster.hpp"

namespace rai {

// Loads a raster by sniffing the format: TIFF magic first, ESRI ASCII grid
// otherwise.
inline RasterGrid load_raster(const std::string& path) {
  if (looks_like_tiff(path)) return load_geotiff(path);
  return load_ascii_grid(path);
}

}  // namespace rai
