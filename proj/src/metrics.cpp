#include "mixgeo/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mixgeo {

namespace {

constexpr int kWindow = 8;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

// Single SSIM term from population statistics of one patch pair.
double ssim_term(double mu_x, double mu_y, double var_x, double var_y, double cov) {
    const double num = (2.0 * mu_x * mu_y + kC1) * (2.0 * cov + kC2);
    const double den = (mu_x * mu_x + mu_y * mu_y + kC1) * (var_x + var_y + kC2);
    return num / den;
}

double ssim_global(const ImageGrid& a, const ImageGrid& b) {
    const double n = static_cast<double>(a.pixel_count());
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < a.data.size(); ++k) {
        sx += a.data[k];
        sy += b.data[k];
    }
    const double mx = sx / n, my = sy / n;
    double vx = 0.0, vy = 0.0, cov = 0.0;
    for (std::size_t k = 0; k < a.data.size(); ++k) {
        const double dx = a.data[k] - mx;
        const double dy = b.data[k] - my;
        vx += dx * dx;
        vy += dy * dy;
        cov += dx * dy;
    }
    return ssim_term(mx, my, vx / n, vy / n, cov / n);
}

}  // namespace

double psnr(const ImageGrid& reference, const ImageGrid& candidate) {
    if (!reference.same_shape(candidate)) {
        throw std::invalid_argument("psnr: shape mismatch");
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < reference.data.size(); ++k) {
        const double d = reference.data[k] - candidate.data[k];
        sq += d * d;
    }
    const double mse = sq / static_cast<double>(reference.pixel_count());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const ImageGrid& reference, const ImageGrid& candidate, SsimMode mode) {
    if (!reference.same_shape(candidate)) {
        throw std::invalid_argument("ssim: shape mismatch");
    }
    if (mode == SsimMode::Global || reference.width < kWindow || reference.height < kWindow) {
        return ssim_global(reference, candidate);
    }
    const double n = static_cast<double>(kWindow * kWindow);
    double total = 0.0;
    long count = 0;
    for (int j0 = 0; j0 + kWindow <= reference.height; ++j0) {
        for (int i0 = 0; i0 + kWindow <= reference.width; ++i0) {
            double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (int j = j0; j < j0 + kWindow; ++j) {
                for (int i = i0; i < i0 + kWindow; ++i) {
                    const double x = reference(i, j);
                    const double y = candidate(i, j);
                    sx += x;
                    sy += y;
                    sxx += x * x;
                    syy += y * y;
                    sxy += x * y;
                }
            }
            const double mx = sx / n, my = sy / n;
            total += ssim_term(mx, my, sxx / n - mx * mx, syy / n - my * my,
                               sxy / n - mx * my);
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

QualityReport evaluate_quality(const ImageGrid& reference, const ImageGrid& candidate,
                               SsimMode mode) {
    return {psnr(reference, candidate), ssim(reference, candidate, mode)};
}

}  // namespace mixgeo
