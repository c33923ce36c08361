#include "mixgeo/synthetic.hpp"

#include <cmath>
#include <stdexcept>

namespace mixgeo {

ImageGrid make_halo(int size) {
    ImageGrid img(size, size);
    const double c = 0.5 * (size - 1);
    const double dome_sigma = 0.18 * size;
    const double ring_radius = 0.33 * size;
    const double ring_sigma = 0.08 * size;
    for (int j = 0; j < size; ++j) {
        for (int i = 0; i < size; ++i) {
            const double r = std::hypot(i - c, j - c);
            const double dome = std::exp(-0.5 * (r / dome_sigma) * (r / dome_sigma));
            const double rd = (r - ring_radius) / ring_sigma;
            const double ring = std::exp(-0.5 * rd * rd);
            img(i, j) = 20.0 + 160.0 * dome + 55.0 * ring;
        }
    }
    return img;
}

ImageGrid make_dartboard(int size) {
    ImageGrid img(size, size);
    const double c = 0.5 * (size - 1);
    const double band = std::max(3.0, size / 12.0);
    for (int j = 0; j < size; ++j) {
        for (int i = 0; i < size; ++i) {
            const double r = std::hypot(i - c, j - c);
            const int ring = static_cast<int>(r / band);
            img(i, j) = (ring % 2 == 0) ? 192.0 : 64.0;
        }
    }
    return img;
}

ImageGrid make_shapes(int size) {
    ImageGrid img(size, size, 40.0);
    const double c = 0.5 * (size - 1);
    for (int j = 0; j < size; ++j) {
        for (int i = 0; i < size; ++i) {
            // rectangle upper-left
            if (i >= size / 8 && i < size * 3 / 8 && j >= size / 8 && j < size / 2) {
                img(i, j) = 150.0;
            }
            // disk lower-right
            const double dr = std::hypot(i - 0.7 * size, j - 0.7 * size);
            if (dr < 0.18 * size) img(i, j) = 230.0;
            // diagonal band
            if (std::abs((i - c) + (j - c)) < 0.06 * size && img(i, j) == 40.0) {
                img(i, j) = 90.0;
            }
        }
    }
    return img;
}

ImageGrid make_pattern(const std::string& name, int size) {
    if (size <= 0) throw std::invalid_argument("make_pattern: size must be positive");
    if (name == "halo") return make_halo(size);
    if (name == "dartboard") return make_dartboard(size);
    if (name == "shapes") return make_shapes(size);
    throw std::invalid_argument("make_pattern: unknown pattern '" + name +
                                "' (expected halo, dartboard, or shapes)");
}

}  // namespace mixgeo
