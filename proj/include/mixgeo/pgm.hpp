#pragma once

#include <string>

#include "mixgeo/grid.hpp"

namespace mixgeo {

/// Binary P5 portable graymap, maxval 255. Values outside [0,255] are
/// clamped and rounded on write; round-trips are lossless for integer-valued
/// in-range images. Read errors (wrong magic, malformed header, unsupported
/// maxval, truncated payload) throw std::runtime_error with distinct
/// messages.
ImageGrid read_pgm(const std::string& path);
void write_pgm(const ImageGrid& img, const std::string& path);

/// Raw real-valued sidecar: 16-byte header (magic "MGD0", width and height
/// as little-endian 32-bit unsigned, 4 reserved zero bytes) followed by
/// width*height little-endian 64-bit reals in row-major order. Keeps
/// experiment data free of 8-bit quantization.
ImageGrid read_sidecar(const std::string& path);
void write_sidecar(const ImageGrid& img, const std::string& path);

}  // namespace mixgeo
