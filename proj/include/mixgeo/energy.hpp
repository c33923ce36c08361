#pragma once

#include "mixgeo/grid.hpp"

namespace mixgeo {

/// Iterates are clamped to this level (on the [0,255] intensity scale) before
/// any log or division by u.
inline constexpr double kPositivityFloor = 1e-3;

/// Gray-level indicator alpha = ((G_sigma * u) / M)^p, M = max of the
/// smoothed image, or a plain constant.
struct IndicatorSpec {
    enum class Mode { Adaptive, Constant };
    Mode mode = Mode::Adaptive;
    double sigma = 2.0;
    double p = 1.0;
    double constant = 1.0;  // Constant mode only, in (0, 1]
    /// When set, solvers recompute alpha from the current iterate each
    /// iteration instead of freezing it from the noisy input.
    bool refresh_from_iterate = false;

    static IndicatorSpec adaptive(double sigma = 2.0, double p = 1.0) {
        return {Mode::Adaptive, sigma, p, 1.0, false};
    }
    static IndicatorSpec constant_value(double v) {
        return {Mode::Constant, 2.0, 1.0, v, false};
    }
};

struct ModelWeights {
    double b = 0.01;    // curvature weight, >= 0
    double eta = 0.1;   // fidelity weight, > 0
    IndicatorSpec indicator;
};

struct EnergyBreakdown {
    double regularizer = 0.0;
    double fidelity = 0.0;
    double total = 0.0;
};

/// alpha per IndicatorSpec. Adaptive mode rejects all-zero input (M = 0).
ImageGrid gray_level_indicator(const ImageGrid& noisy, const IndicatorSpec& spec);

/// Level-set mean curvature of the image graph, staggered minmod scheme:
/// backward difference of the forward-difference flux, per axis. The
/// denominator is >= 1 so there is no singularity; |kappa| < 4/spacing.
ImageGrid mean_curvature(const ImageGrid& u);

/// Surface-area element sqrt(1 + |grad u|^2), central differences.
ImageGrid area_density(const ImageGrid& u);

/// div(g grad u) with face diffusivities taken as arithmetic means of the
/// adjacent pixel values of g. Shared by the Euler-Lagrange operator and the
/// AOS diffusion matrices (which invert exactly this stencil).
ImageGrid div_g_grad(const ImageGrid& u, const ImageGrid& g);

/// div V of the curvature transport field
///   V = (1/sqrt(1+|grad u|^2)) (I - P) grad(kappa sqrt(1+|grad u|^2)),
/// evaluated at half-integer faces with forward differences plus
/// minmod-limited transverse central differences.
ImageGrid curvature_transport_div(const ImageGrid& u);

/// Mixed-geometry energy with an explicit indicator field:
///   regularizer = sum (alpha + b kappa^2) sqrt(1+|grad u|^2) dx dy
///   fidelity    = eta * sum (u - f log u) dx dy
/// Requires u > 0 everywhere.
EnergyBreakdown total_energy_with_alpha(const ImageGrid& u, const ImageGrid& f,
                                        const ImageGrid& alpha, double b, double eta);

/// Same, with alpha computed from u per the indicator spec.
EnergyBreakdown total_energy(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w);

/// First variation of the energy (alpha treated as a fixed weight field):
///   E'(u) = -div(g grad u) + 2b div V + eta (1 - f/u),
/// g = (alpha + b kappa^2) / sqrt(1+|grad u|^2). Requires u > 0.
ImageGrid euler_lagrange_with_alpha(const ImageGrid& u, const ImageGrid& f,
                                    const ImageGrid& alpha, double b, double eta);

/// Same, with alpha computed from u per the indicator spec.
ImageGrid euler_lagrange(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w);

/// Indicator field a solver should use: frozen from the noisy input by
/// default, refreshed from the iterate behind the flag.
ImageGrid solver_alpha(const ImageGrid& iterate, const ImageGrid& noisy,
                       const IndicatorSpec& spec);

}  // namespace mixgeo
