#include "mixgeo/aos.hpp"

#include <cmath>
#include <stdexcept>

#include "solver_util.hpp"

namespace mixgeo {

ImageGrid diffusivity(const ImageGrid& u, const ImageGrid& alpha, double b) {
    ImageGrid kappa = mean_curvature(u);
    ImageGrid ad = area_density(u);
    ImageGrid g(u.width, u.height, 0.0, u.spacing);
    for (std::size_t k = 0; k < g.data.size(); ++k) {
        const double kap = kappa.data[k];
        g.data[k] = (alpha.data[k] + b * kap * kap) / ad.data[k];
    }
    return g;
}

ImageGrid source_term(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w) {
    for (double v : u.data) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("source_term: u must be > 0 everywhere");
        }
    }
    ImageGrid transport = curvature_transport_div(u);
    ImageGrid out(u.width, u.height, 0.0, u.spacing);
    for (std::size_t k = 0; k < out.data.size(); ++k) {
        out.data[k] = -2.0 * w.b * transport.data[k]
                      - w.eta * (1.0 - f.data[k] / u.data[k]);
    }
    return out;
}

TridiagonalSystem assemble_direction(const ImageGrid& u, const ImageGrid& g,
                                     const ImageGrid& source, Axis axis, double tau,
                                     int line_index) {
    const int n = (axis == Axis::X) ? u.width : u.height;
    const double h2 = u.spacing * u.spacing;
    auto pixel = [&](const ImageGrid& img, int k) {
        return (axis == Axis::X) ? img(k, line_index) : img(line_index, k);
    };

    TridiagonalSystem sys;
    sys.sub.resize(n > 0 ? n - 1 : 0);
    sys.sup.resize(n > 0 ? n - 1 : 0);
    sys.diag.resize(n);
    sys.rhs.resize(n);

    for (int k = 0; k < n; ++k) {
        // face diffusivities: arithmetic mean of the adjacent pixel values
        const double g_left = (k > 0) ? 0.5 * (pixel(g, k - 1) + pixel(g, k)) / h2 : 0.0;
        const double g_right = (k + 1 < n) ? 0.5 * (pixel(g, k) + pixel(g, k + 1)) / h2 : 0.0;
        sys.diag[k] = 1.0 + 2.0 * tau * (g_left + g_right);
        if (k > 0) sys.sub[k - 1] = -2.0 * tau * g_left;
        if (k + 1 < n) sys.sup[k] = -2.0 * tau * g_right;
        sys.rhs[k] = pixel(u, k) + tau * pixel(source, k);
    }
    return sys;
}

std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<double> c_prime(n, 0.0);
    std::vector<double> x(n, 0.0);
    constexpr double kPivotFloor = 1e-14;

    if (n == 0) return x;
    double pivot = sys.diag[0];
    if (std::abs(pivot) < kPivotFloor) {
        throw std::runtime_error("thomas_solve: vanishing pivot (corrupted system)");
    }
    if (n > 1) c_prime[0] = sys.sup[0] / pivot;
    x[0] = sys.rhs[0] / pivot;
    for (std::size_t k = 1; k < n; ++k) {
        pivot = sys.diag[k] - sys.sub[k - 1] * c_prime[k - 1];
        if (std::abs(pivot) < kPivotFloor) {
            throw std::runtime_error("thomas_solve: vanishing pivot (corrupted system)");
        }
        if (k + 1 < n) c_prime[k] = sys.sup[k] / pivot;
        x[k] = (sys.rhs[k] - sys.sub[k - 1] * x[k - 1]) / pivot;
    }
    for (std::size_t k = n - 1; k-- > 0;) {
        x[k] -= c_prime[k] * x[k + 1];
    }
    return x;
}

ImageGrid aos_step_with_alpha(const ImageGrid& u, const ImageGrid& f,
                              const ImageGrid& alpha, const ModelWeights& w,
                              const AosConfig& cfg) {
    ImageGrid g = diffusivity(u, alpha, w.b);
    ImageGrid src = source_term(u, f, w);

    ImageGrid ux(u.width, u.height, 0.0, u.spacing);
    for (int j = 0; j < u.height; ++j) {
        std::vector<double> line = thomas_solve(assemble_direction(u, g, src, Axis::X, cfg.tau, j));
        for (int i = 0; i < u.width; ++i) ux(i, j) = line[i];
    }
    ImageGrid uy(u.width, u.height, 0.0, u.spacing);
    for (int i = 0; i < u.width; ++i) {
        std::vector<double> line = thomas_solve(assemble_direction(u, g, src, Axis::Y, cfg.tau, i));
        for (int j = 0; j < u.height; ++j) uy(i, j) = line[j];
    }

    ImageGrid out(u.width, u.height, 0.0, u.spacing);
    for (std::size_t k = 0; k < out.data.size(); ++k) {
        out.data[k] = std::max(kPositivityFloor, 0.5 * (ux.data[k] + uy.data[k]));
    }
    return out;
}

ImageGrid aos_step(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w,
                   const AosConfig& cfg) {
    return aos_step_with_alpha(u, f, solver_alpha(u, f, w.indicator), w, cfg);
}

SolveResult aos_run(const ImageGrid& f, const ModelWeights& w, const AosConfig& cfg,
                    const ImageGrid* truth) {
    for (double v : f.data) {
        if (v < 0.0) throw std::invalid_argument("aos_run: input pixels must be >= 0");
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
        ImageGrid next = aos_step_with_alpha(u, f, alpha, w, cfg);
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
