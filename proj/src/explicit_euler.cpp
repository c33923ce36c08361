#include "mixgeo/explicit_euler.hpp"

#include <stdexcept>

#include "solver_util.hpp"

namespace mixgeo {

ImageGrid explicit_step(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w,
                        double tau) {
    ImageGrid alpha = solver_alpha(u, f, w.indicator);
    ImageGrid grad = euler_lagrange_with_alpha(u, f, alpha, w.b, w.eta);
    ImageGrid out(u.width, u.height, 0.0, u.spacing);
    for (std::size_t k = 0; k < out.data.size(); ++k) {
        out.data[k] = std::max(kPositivityFloor, u.data[k] - tau * grad.data[k]);
    }
    return out;
}

SolveResult explicit_run(const ImageGrid& f, const ModelWeights& w, const ExplicitConfig& cfg,
                         const ImageGrid* truth) {
    for (double v : f.data) {
        if (v < 0.0) throw std::invalid_argument("explicit_run: input pixels must be >= 0");
    }
    const auto start = detail::Clock::now();
    ImageGrid u = clamp_floor(f, kPositivityFloor);
    ImageGrid alpha = solver_alpha(u, f, w.indicator);

    SolveResult result;
    detail::BestTracker best;

    auto log_state = [&](int iter) {
        EnergyBreakdown e = total_energy_with_alpha(u, f, alpha, w.b, w.eta);
        RunLogRow row = detail::make_row(iter, cfg.tau, e, u, truth, detail::elapsed_ms(start));
        if (truth) best.consider(iter, *row.psnr_db, u);
        result.log.rows.push_back(row);
    };

    log_state(0);
    for (int n = 0; n < cfg.max_iters; ++n) {
        if (w.indicator.refresh_from_iterate) alpha = solver_alpha(u, f, w.indicator);
        ImageGrid grad = euler_lagrange_with_alpha(u, f, alpha, w.b, w.eta);
        ImageGrid next(u.width, u.height, 0.0, u.spacing);
        for (std::size_t k = 0; k < next.data.size(); ++k) {
            next.data[k] = std::max(kPositivityFloor, u.data[k] - cfg.tau * grad.data[k]);
        }
        const bool done = stop_triggered(cfg.stop, next, u);
        u = std::move(next);
        log_state(n + 1);
        if (done) break;
    }

    if (truth) {
        result.best_iter = best.iter;
        result.best_psnr = best.psnr_db;
        result.restored = std::move(best.image);
    } else {
        result.best_iter = static_cast<int>(result.log.rows.size()) - 1;
        result.restored = std::move(u);
    }
    return result;
}

}  // namespace mixgeo
