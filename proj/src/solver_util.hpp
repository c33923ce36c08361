#pragma once

// Shared run-loop plumbing for the three solvers (logging rows, best-PSNR
// tracking). Source-private.

#include <chrono>
#include <limits>

#include "mixgeo/energy.hpp"
#include "mixgeo/metrics.hpp"
#include "mixgeo/run_log.hpp"

namespace mixgeo::detail {

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct BestTracker {
    int iter = -1;
    double psnr_db = -std::numeric_limits<double>::infinity();
    ImageGrid image;

    void consider(int it, double p, const ImageGrid& u) {
        if (iter < 0 || p > psnr_db) {
            iter = it;
            psnr_db = p;
            image = u;
        }
    }
};

inline RunLogRow make_row(int iter, double tau, const EnergyBreakdown& e,
                          const ImageGrid& u, const ImageGrid* truth, double wall_ms) {
    RunLogRow row;
    row.iter = iter;
    row.tau = tau;
    row.energy_total = e.total;
    row.energy_regularizer = e.regularizer;
    row.energy_fidelity = e.fidelity;
    row.wall_ms = wall_ms;
    if (truth) {
        row.psnr_db = psnr(*truth, u);
        row.ssim = ssim(*truth, u);
    }
    return row;
}

}  // namespace mixgeo::detail
