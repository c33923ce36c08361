#include "mixgeo/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace mixgeo {

double minmod(double a, double b) {
    const double sa = (a > 0.0) - (a < 0.0);
    const double sb = (b > 0.0) - (b < 0.0);
    return 0.5 * (sa + sb) * std::min(std::abs(a), std::abs(b));
}

ImageGrid finite_difference(const ImageGrid& img, Axis axis, DiffScheme scheme) {
    ImageGrid out(img.width, img.height, 0.0, img.spacing);
    const int di = (axis == Axis::X) ? 1 : 0;
    const int dj = (axis == Axis::Y) ? 1 : 0;
    const double h = img.spacing;
    for (int j = 0; j < img.height; ++j) {
        for (int i = 0; i < img.width; ++i) {
            double v = 0.0;
            switch (scheme) {
                case DiffScheme::Forward:
                    v = (img.clamped(i + di, j + dj) - img(i, j)) / h;
                    break;
                case DiffScheme::Backward:
                    v = (img(i, j) - img.clamped(i - di, j - dj)) / h;
                    break;
                case DiffScheme::Central:
                    v = (img.clamped(i + di, j + dj) - img.clamped(i - di, j - dj)) / (2.0 * h);
                    break;
            }
            out(i, j) = v;
        }
    }
    return out;
}

ImageGrid gaussian_convolve(const ImageGrid& img, double sigma) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian_convolve: sigma must be > 0");
    }
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double w = std::exp(-0.5 * (k * k) / (sigma * sigma));
        kernel[k + radius] = w;
        sum += w;
    }
    for (double& w : kernel) w /= sum;

    ImageGrid tmp(img.width, img.height, 0.0, img.spacing);
    for (int j = 0; j < img.height; ++j) {
        for (int i = 0; i < img.width; ++i) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[k + radius] * img.clamped(i + k, j);
            }
            tmp(i, j) = acc;
        }
    }
    ImageGrid out(img.width, img.height, 0.0, img.spacing);
    for (int j = 0; j < img.height; ++j) {
        for (int i = 0; i < img.width; ++i) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[k + radius] * tmp.clamped(i, j + k);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

ImageGrid grad_magnitude_sq(const ImageGrid& img, GradScheme scheme) {
    ImageGrid out(img.width, img.height, 0.0, img.spacing);
    const double h = img.spacing;
    for (int j = 0; j < img.height; ++j) {
        for (int i = 0; i < img.width; ++i) {
            double gx = 0.0, gy = 0.0;
            switch (scheme) {
                case GradScheme::Central:
                    gx = (img.clamped(i + 1, j) - img.clamped(i - 1, j)) / (2.0 * h);
                    gy = (img.clamped(i, j + 1) - img.clamped(i, j - 1)) / (2.0 * h);
                    break;
                case GradScheme::StaggeredX:
                    gx = (img.clamped(i + 1, j) - img(i, j)) / h;
                    gy = minmod((img.clamped(i, j + 1) - img.clamped(i, j - 1)) / (2.0 * h),
                                (img.clamped(i + 1, j + 1) - img.clamped(i + 1, j - 1)) / (2.0 * h));
                    break;
                case GradScheme::StaggeredY:
                    gy = (img.clamped(i, j + 1) - img(i, j)) / h;
                    gx = minmod((img.clamped(i + 1, j) - img.clamped(i - 1, j)) / (2.0 * h),
                                (img.clamped(i + 1, j + 1) - img.clamped(i - 1, j + 1)) / (2.0 * h));
                    break;
            }
            out(i, j) = gx * gx + gy * gy;
        }
    }
    return out;
}

ImageGrid transpose(const ImageGrid& img) {
    ImageGrid out(img.height, img.width, 0.0, img.spacing);
    for (int j = 0; j < img.height; ++j) {
        for (int i = 0; i < img.width; ++i) {
            out(j, i) = img(i, j);
        }
    }
    return out;
}

ImageGrid clamp_floor(const ImageGrid& img, double lo) {
    ImageGrid out = img;
    for (double& v : out.data) v = std::max(v, lo);
    return out;
}

double min_value(const ImageGrid& img) {
    return *std::min_element(img.data.begin(), img.data.end());
}

double max_value(const ImageGrid& img) {
    return *std::max_element(img.data.begin(), img.data.end());
}

double mean_value(const ImageGrid& img) {
    double s = 0.0;
    for (double v : img.data) s += v;
    return s / static_cast<double>(img.pixel_count());
}

bool all_finite(const ImageGrid& img) {
    for (double v : img.data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double inner_product(const ImageGrid& a, const ImageGrid& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.data.size(); ++k) s += a.data[k] * b.data[k];
    return s * a.spacing * a.spacing;
}

double norm_l2(const ImageGrid& a) {
    return std::sqrt(inner_product(a, a));
}

}  // namespace mixgeo
