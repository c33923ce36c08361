#include "mixgeo/sav.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "solver_util.hpp"

namespace mixgeo {

ImageGrid linear_operator_L(const ImageGrid& u) {
    const double h2 = u.spacing * u.spacing;
    ImageGrid out(u.width, u.height, 0.0, u.spacing);
    for (int j = 0; j < u.height; ++j) {
        for (int i = 0; i < u.width; ++i) {
            const double lap_x = 2.0 * u(i, j) - u.clamped(i - 1, j) - u.clamped(i + 1, j);
            const double lap_y = 2.0 * u(i, j) - u.clamped(i, j - 1) - u.clamped(i, j + 1);
            out(i, j) = (lap_x + lap_y) / h2;
        }
    }
    return out;
}

namespace {

// Cached DCT-II/III plans per image size. The replicate-boundary Laplacian is
// diagonal in this basis with per-axis eigenvalues 4 sin^2(pi k / 2n).
struct DctWorkspace {
    int width = 0, height = 0;
    std::vector<double> buf;
    std::vector<double> eigen_sum;  // unit-spacing (lambda_x + lambda_y) per coefficient
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;

    DctWorkspace(int w, int h) : width(w), height(h) {
        buf.resize(static_cast<std::size_t>(w) * h);
        eigen_sum.resize(buf.size());
        std::vector<double> lx(w), ly(h);
        for (int i = 0; i < w; ++i) {
            const double s = std::sin(M_PI * i / (2.0 * w));
            lx[i] = 4.0 * s * s;
        }
        for (int j = 0; j < h; ++j) {
            const double s = std::sin(M_PI * j / (2.0 * h));
            ly[j] = 4.0 * s * s;
        }
        for (int j = 0; j < h; ++j) {
            for (int i = 0; i < w; ++i) {
                eigen_sum[static_cast<std::size_t>(j) * w + i] = lx[i] + ly[j];
            }
        }
        forward = fftw_plan_r2r_2d(h, w, buf.data(), buf.data(),
                                   FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
        inverse = fftw_plan_r2r_2d(h, w, buf.data(), buf.data(),
                                   FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
    }
    DctWorkspace(const DctWorkspace&) = delete;
    DctWorkspace& operator=(const DctWorkspace&) = delete;
    ~DctWorkspace() {
        if (forward) fftw_destroy_plan(forward);
        if (inverse) fftw_destroy_plan(inverse);
    }
};

DctWorkspace& dct_workspace(int w, int h) {
    static std::map<std::pair<int, int>, DctWorkspace> cache;
    auto it = cache.find({w, h});
    if (it == cache.end()) {
        it = cache.try_emplace({w, h}, w, h).first;
    }
    return it->second;
}

}  // namespace

ImageGrid implicit_solve(const ImageGrid& rhs, double tau, double gamma, bool half) {
    const double c = (half ? 0.5 * tau : tau) * gamma;
    if (c == 0.0) return rhs;

    DctWorkspace& ws = dct_workspace(rhs.width, rhs.height);
    ws.buf = rhs.data;
    fftw_execute_r2r(ws.forward, ws.buf.data(), ws.buf.data());
    const double h2 = rhs.spacing * rhs.spacing;
    const double norm = 1.0 / (4.0 * rhs.width * rhs.height);  // REDFT10 o REDFT01 = 2n per axis
    for (std::size_t k = 0; k < ws.buf.size(); ++k) {
        ws.buf[k] *= norm / (1.0 + c * ws.eigen_sum[k] / h2);
    }
    fftw_execute_r2r(ws.inverse, ws.buf.data(), ws.buf.data());

    ImageGrid out(rhs.width, rhs.height, 0.0, rhs.spacing);
    out.data = ws.buf;
    return out;
}

Eps1 eps1_and_derivative_with_alpha(const ImageGrid& u, const ImageGrid& f,
                                    const ImageGrid& alpha, double b, double eta,
                                    double gamma, double C) {
    const EnergyBreakdown e = total_energy_with_alpha(u, f, alpha, b, eta);
    ImageGrid Lu = linear_operator_L(u);
    const double value = e.total - 0.5 * gamma * inner_product(u, Lu) + C;
    if (!(value > 0.0)) {
        throw std::runtime_error(
            "eps1_and_derivative: eps1[u] <= 0; increase the non-negativity shift C");
    }
    ImageGrid deriv = euler_lagrange_with_alpha(u, f, alpha, b, eta);
    for (std::size_t k = 0; k < deriv.data.size(); ++k) {
        deriv.data[k] -= gamma * Lu.data[k];
    }
    return {value, std::move(deriv)};
}

Eps1 eps1_and_derivative(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w,
                         double gamma, double C) {
    return eps1_and_derivative_with_alpha(u, f, gray_level_indicator(u, w.indicator),
                                          w.b, w.eta, gamma, C);
}

double modified_energy(const ImageGrid& u, double r, double gamma) {
    return 0.5 * gamma * inner_product(u, linear_operator_L(u)) + r * r;
}

SavState sav_step_first_with_alpha(const SavState& state, const ImageGrid& f,
                                   const ImageGrid& alpha, const ModelWeights& w,
                                   const SavConfig& cfg, SavStepDiag* diag) {
    const ImageGrid& u = state.u;
    const double tau = state.tau;
    const double r = state.r;

    Eps1 e1 = eps1_and_derivative_with_alpha(u, f, alpha, w.b, w.eta, cfg.gamma, cfg.C);
    const double inv_sqrt = 1.0 / std::sqrt(e1.value);
    ImageGrid b = std::move(e1.derivative);
    for (double& v : b.data) v *= inv_sqrt;

    const double bu = inner_product(b, u);
    ImageGrid c(u.width, u.height, 0.0, u.spacing);
    for (std::size_t k = 0; k < c.data.size(); ++k) {
        c.data[k] = u.data[k] - tau * r * b.data[k] + 0.5 * tau * bu * b.data[k];
    }

    ImageGrid zc = implicit_solve(c, tau, cfg.gamma, false);
    ImageGrid zb = implicit_solve(b, tau, cfg.gamma, false);
    const double q = inner_product(b, zc) / (1.0 + 0.5 * tau * inner_product(b, zb));

    ImageGrid u_next(u.width, u.height, 0.0, u.spacing);
    for (std::size_t k = 0; k < u_next.data.size(); ++k) {
        u_next.data[k] = zc.data[k] - 0.5 * tau * q * zb.data[k];
    }
    const double bu_next = inner_product(b, u_next);
    const double r_next = r + 0.5 * (bu_next - bu);

    if (diag) {
        diag->q = q;
        diag->b_dot_u_next = bu_next;
        diag->u_unclamped = u_next;
    }

    SavState next;
    next.u_prev = u;
    next.u = clamp_floor(u_next, kPositivityFloor);
    next.r = r_next;
    next.tau = tau;
    next.iter = state.iter + 1;
    return next;
}

SavState sav_step_first(const SavState& state, const ImageGrid& f, const ModelWeights& w,
                        const SavConfig& cfg) {
    return sav_step_first_with_alpha(state, f, solver_alpha(state.u, f, w.indicator), w, cfg);
}

SavState sav_step_second_with_alpha(const SavState& state, const ImageGrid& f,
                                    const ImageGrid& alpha, const ModelWeights& w,
                                    const SavConfig& cfg, SavStepDiag* diag) {
    const ImageGrid& u = state.u;
    const double tau = state.tau;
    const double r = state.r;

    ImageGrid u_mid(u.width, u.height, 0.0, u.spacing);
    for (std::size_t k = 0; k < u_mid.data.size(); ++k) {
        u_mid.data[k] = 0.5 * (3.0 * u.data[k] - state.u_prev.data[k]);
    }
    // the extrapolated state feeds the nonlinear terms and needs u > 0 too
    u_mid = clamp_floor(u_mid, kPositivityFloor);

    Eps1 e1 = eps1_and_derivative_with_alpha(u_mid, f, alpha, w.b, w.eta, cfg.gamma, cfg.C);
    const double inv_2sqrt = 1.0 / (2.0 * std::sqrt(e1.value));
    ImageGrid b = std::move(e1.derivative);
    for (double& v : b.data) v *= inv_2sqrt;

    // Crank-Nicolson reduction consistent with
    //   (u^{n+1}-u^n)/tau = -gamma L (u^n+u^{n+1})/2 - (r^{n+1}+r^n) b,
    //   r^{n+1}-r^n = (b, u^{n+1}-u^n):
    // (I + (tau/2) gamma L) u^{n+1} + tau b (b,u^{n+1})
    //   = u^n - (tau/2) gamma L u^n - 2 tau r b + tau b (b,u^n).
    ImageGrid Lu = linear_operator_L(u);
    const double bu = inner_product(b, u);
    ImageGrid c(u.width, u.height, 0.0, u.spacing);
    for (std::size_t k = 0; k < c.data.size(); ++k) {
        c.data[k] = u.data[k] - 0.5 * tau * cfg.gamma * Lu.data[k]
                    - 2.0 * tau * r * b.data[k] + tau * bu * b.data[k];
    }

    ImageGrid zc = implicit_solve(c, tau, cfg.gamma, true);
    ImageGrid zb = implicit_solve(b, tau, cfg.gamma, true);
    const double q = inner_product(b, zc) / (1.0 + tau * inner_product(b, zb));

    ImageGrid u_next(u.width, u.height, 0.0, u.spacing);
    for (std::size_t k = 0; k < u_next.data.size(); ++k) {
        u_next.data[k] = zc.data[k] - tau * q * zb.data[k];
    }
    const double bu_next = inner_product(b, u_next);
    const double r_next = r + (bu_next - bu);

    if (diag) {
        diag->q = q;
        diag->b_dot_u_next = bu_next;
        diag->u_unclamped = u_next;
    }

    SavState next;
    next.u_prev = u;
    next.u = clamp_floor(u_next, kPositivityFloor);
    next.r = r_next;
    next.tau = tau;
    next.iter = state.iter + 1;
    return next;
}

SavState sav_step_second(const SavState& state, const ImageGrid& f, const ModelWeights& w,
                         const SavConfig& cfg) {
    return sav_step_second_with_alpha(state, f, solver_alpha(state.u, f, w.indicator), w, cfg);
}

double adapt_tau(double tau, double e, const SavConfig& cfg) {
    if (e <= 0.0) return cfg.tau_max;
    const double proposed = cfg.rho * std::sqrt(cfg.tol_step / e) * tau;
    return std::max(cfg.tau_min, std::min(proposed, cfg.tau_max));
}

namespace {

void validate_config(const SavConfig& cfg) {
    if (!(cfg.tau_min > 0.0) || !(cfg.tau_min <= cfg.tau_max)) {
        throw std::invalid_argument("sav_run: need 0 < tau_min <= tau_max");
    }
    if (!(cfg.C > 0.0)) throw std::invalid_argument("sav_run: C must be > 0");
    if (cfg.gamma < 0.0) throw std::invalid_argument("sav_run: gamma must be >= 0");
    if (!(cfg.rho > 0.0) || cfg.rho > 1.0) {
        throw std::invalid_argument("sav_run: rho must be in (0, 1]");
    }
    if (!(cfg.tol_step > 0.0)) throw std::invalid_argument("sav_run: tol_step must be > 0");
    if (cfg.max_iters < 0) throw std::invalid_argument("sav_run: max_iters must be >= 0");
}

}  // namespace

SolveResult sav_run(const ImageGrid& f, const ModelWeights& w, const SavConfig& cfg,
                    const ImageGrid* truth) {
    validate_config(cfg);
    for (double v : f.data) {
        if (v < 0.0) throw std::invalid_argument("sav_run: input pixels must be >= 0");
    }
    const auto start = detail::Clock::now();

    SavState state;
    state.u = clamp_floor(f, kPositivityFloor);
    state.u_prev = state.u;
    state.tau = (cfg.tau0 > 0.0) ? std::clamp(cfg.tau0, cfg.tau_min, cfg.tau_max)
                                 : cfg.tau_min;

    ImageGrid alpha = solver_alpha(state.u, f, w.indicator);
    // rejects the configuration when eps1[u0] <= 0
    state.r = std::sqrt(
        eps1_and_derivative_with_alpha(state.u, f, alpha, w.b, w.eta, cfg.gamma, cfg.C).value);

    SolveResult result;
    detail::BestTracker best;

    auto log_state = [&](int iter, double tau_used) {
        EnergyBreakdown e = total_energy_with_alpha(state.u, f, alpha, w.b, w.eta);
        RunLogRow row =
            detail::make_row(iter, tau_used, e, state.u, truth, detail::elapsed_ms(start));
        row.energy_modified = modified_energy(state.u, state.r, cfg.gamma);
        row.r = state.r;
        if (truth) best.consider(iter, *row.psnr_db, state.u);
        result.log.rows.push_back(row);
    };

    log_state(0, state.tau);
    for (int n = 0; n < cfg.max_iters; ++n) {
        if (w.indicator.refresh_from_iterate) alpha = solver_alpha(state.u, f, w.indicator);
        const double tau_used = state.tau;
        SavState next = (cfg.order == SavOrder::First)
                            ? sav_step_first_with_alpha(state, f, alpha, w, cfg)
                            : sav_step_second_with_alpha(state, f, alpha, w, cfg);

        double diff_sq = 0.0, norm_sq = 0.0;
        for (std::size_t k = 0; k < next.u.data.size(); ++k) {
            const double d = next.u.data[k] - state.u.data[k];
            diff_sq += d * d;
            norm_sq += next.u.data[k] * next.u.data[k];
        }
        const double rel_change = (norm_sq > 0.0) ? std::sqrt(diff_sq / norm_sq) : 0.0;

        const bool done = stop_triggered(cfg.stop, next.u, state.u);
        state = std::move(next);
        log_state(n + 1, tau_used);
        if (done) break;
        if (cfg.adaptive) state.tau = adapt_tau(state.tau, rel_change, cfg);
    }

    if (truth) {
        result.best_iter = best.iter;
        result.best_psnr = best.psnr_db;
        result.restored = std::move(best.image);
    } else {
        result.best_iter = static_cast<int>(result.log.rows.size()) - 1;
        result.restored = std::move(state.u);
    }
    return result;
}

}  // namespace mixgeo
