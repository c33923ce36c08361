#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace mixgeo {

enum class Axis { X, Y };
enum class DiffScheme { Forward, Backward, Central };

/// Gradient-magnitude discretizations. Central lives at pixel centers;
/// StaggeredX / StaggeredY live at the (i+1/2, j) / (i, j+1/2) faces and
/// pair a forward difference with a minmod-limited transverse central
/// difference.
enum class GradScheme { Central, StaggeredX, StaggeredY };

/// 2-D scalar field with uniform spacing and replicated (Neumann) boundary
/// semantics. Row-major storage: data[j * width + i], i along x.
struct ImageGrid {
    int width = 0;
    int height = 0;
    double spacing = 1.0;
    std::vector<double> data;

    ImageGrid() = default;
    ImageGrid(int w, int h, double value = 0.0, double dx = 1.0)
        : width(w), height(h), spacing(dx),
          data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), value) {}

    double& operator()(int i, int j) {
        return data[static_cast<std::size_t>(j) * width + i];
    }
    double operator()(int i, int j) const {
        return data[static_cast<std::size_t>(j) * width + i];
    }

    /// Out-of-range reads map to the nearest in-range pixel.
    double clamped(int i, int j) const {
        i = std::clamp(i, 0, width - 1);
        j = std::clamp(j, 0, height - 1);
        return (*this)(i, j);
    }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    bool same_shape(const ImageGrid& other) const {
        return width == other.width && height == other.height;
    }
};

/// Sign-aware minimum-magnitude selector: ((sgn a + sgn b)/2) * min(|a|,|b|).
double minmod(double a, double b);

/// One-sided or central difference along an axis, divided by the spacing
/// (central by twice the spacing). Boundaries use replication, so one-sided
/// differences across the domain edge are exactly zero.
ImageGrid finite_difference(const ImageGrid& img, Axis axis, DiffScheme scheme);

/// Separable sampled-Gaussian smoothing, kernel radius ceil(3*sigma), weights
/// normalized to sum 1, replicated boundaries. Constant images are fixed
/// points. Throws std::invalid_argument for sigma <= 0.
ImageGrid gaussian_convolve(const ImageGrid& img, double sigma);

/// |grad u|^2 per pixel (or per face for the staggered schemes).
ImageGrid grad_magnitude_sq(const ImageGrid& img, GradScheme scheme);

ImageGrid transpose(const ImageGrid& img);

/// max(img, lo) pixelwise.
ImageGrid clamp_floor(const ImageGrid& img, double lo);

double min_value(const ImageGrid& img);
double max_value(const ImageGrid& img);
double mean_value(const ImageGrid& img);
bool all_finite(const ImageGrid& img);

/// Discrete L2 inner product, area-weighted: sum(a*b) * spacing^2.
/// Fixed row-major accumulation order.
double inner_product(const ImageGrid& a, const ImageGrid& b);
double norm_l2(const ImageGrid& a);

}  // namespace mixgeo
