#pragma once

#include <vector>

#include "mixgeo/energy.hpp"
#include "mixgeo/grid.hpp"
#include "mixgeo/run_log.hpp"

namespace mixgeo {

/// One line of the semi-implicit system (I - 2 tau D): D is symmetric with
/// zero row sums, so the assembled matrix is diagonally dominant with unit
/// row sums for any tau > 0.
struct TridiagonalSystem {
    std::vector<double> sub;   // n-1
    std::vector<double> diag;  // n
    std::vector<double> sup;   // n-1
    std::vector<double> rhs;   // n

    std::size_t size() const { return diag.size(); }
};

struct AosConfig {
    double tau = 2.0;
    int max_iters = 100;
    StoppingRule stop = StoppingRule::max_iters();
};

/// Restored image plus the per-iteration log. When ground truth was supplied
/// the restored image is the best-PSNR iterate (its log row is best_iter),
/// otherwise the final iterate.
struct SolveResult {
    ImageGrid restored;
    RunLog log;
    int best_iter = -1;
    double best_psnr = 0.0;
};

/// Diffusion coefficient g = (alpha + b kappa^2) / sqrt(1 + |grad u|^2),
/// pixel field, >= 0 whenever alpha >= 0 and b >= 0.
ImageGrid diffusivity(const ImageGrid& u, const ImageGrid& alpha, double b);

/// Explicit part of the split flow: F(u) = -2b div V - eta (1 - f/u); the
/// curvature transport stays out of the diffusion operator.
ImageGrid source_term(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w);

/// Build (I - 2 tau D) for one grid line plus its rhs u + tau*F. Axis X
/// assembles row line_index (system size = width), axis Y column line_index.
TridiagonalSystem assemble_direction(const ImageGrid& u, const ImageGrid& g,
                                     const ImageGrid& source, Axis axis, double tau,
                                     int line_index);

/// Thomas elimination; throws std::runtime_error when a pivot falls below
/// 1e-14 (cannot happen for systems produced by assemble_direction).
std::vector<double> thomas_solve(const TridiagonalSystem& sys);

/// One additive-operator-splitting update: solve every row system and every
/// column system independently, average the two solutions, clamp to the
/// positivity floor.
ImageGrid aos_step(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w,
                   const AosConfig& cfg);
ImageGrid aos_step_with_alpha(const ImageGrid& u, const ImageGrid& f,
                              const ImageGrid& alpha, const ModelWeights& w,
                              const AosConfig& cfg);

SolveResult aos_run(const ImageGrid& f, const ModelWeights& w, const AosConfig& cfg,
                    const ImageGrid* truth = nullptr);

}  // namespace mixgeo
