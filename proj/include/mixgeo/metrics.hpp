#pragma once

#include "mixgeo/grid.hpp"

namespace mixgeo {

enum class SsimMode { Windowed, Global };

struct QualityReport {
    double psnr_db = 0.0;  // +inf when MSE == 0
    double ssim = 0.0;
};

/// 10 log10(255^2 / MSE); returns +inf for identical images.
/// Throws std::invalid_argument on shape mismatch.
double psnr(const ImageGrid& reference, const ImageGrid& candidate);

/// Mean structural similarity over 8x8 sliding windows (uniform weights,
/// stride 1, c1 = (0.01*255)^2, c2 = (0.03*255)^2). Global mode evaluates the
/// formula once on whole-image statistics; images smaller than the window
/// fall back to global statistics.
double ssim(const ImageGrid& reference, const ImageGrid& candidate,
            SsimMode mode = SsimMode::Windowed);

QualityReport evaluate_quality(const ImageGrid& reference, const ImageGrid& candidate,
                               SsimMode mode = SsimMode::Windowed);

}  // namespace mixgeo
