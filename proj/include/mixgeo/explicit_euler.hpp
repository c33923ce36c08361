#pragma once

#include "mixgeo/aos.hpp"
#include "mixgeo/energy.hpp"
#include "mixgeo/grid.hpp"

namespace mixgeo {

/// Forward-Euler gradient descent u^{n+1} = u^n - tau E'(u^n). Only stable
/// for small tau (CFL of a fourth-order flow); the reference solver the
/// splitting schemes are checked against.
struct ExplicitConfig {
    double tau = 0.05;
    int max_iters = 500;
    StoppingRule stop = StoppingRule::max_iters();
};

ImageGrid explicit_step(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w,
                        double tau);

SolveResult explicit_run(const ImageGrid& f, const ModelWeights& w, const ExplicitConfig& cfg,
                         const ImageGrid* truth = nullptr);

}  // namespace mixgeo
