#pragma once

#include <string>

#include "mixgeo/grid.hpp"

namespace mixgeo {

/// Synthetic test images on the [0,255] scale, all bounded away from 0.
/// "halo": smooth radial dome with a halo ring (large smooth slopes).
/// "dartboard": concentric two-level rings.
/// "shapes": piecewise-constant rectangle / disk / band over a flat background.
ImageGrid make_halo(int size);
ImageGrid make_dartboard(int size);
ImageGrid make_shapes(int size);

/// Dispatch by name; throws std::invalid_argument for unknown patterns.
ImageGrid make_pattern(const std::string& name, int size);

}  // namespace mixgeo
