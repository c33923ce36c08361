#include "mixgeo/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mixgeo {

namespace {

void require_positive(const ImageGrid& u, const char* who) {
    for (double v : u.data) {
        if (!(v > 0.0)) {
            throw std::invalid_argument(std::string(who) + ": u must be > 0 everywhere");
        }
    }
}

void require_same_shape(const ImageGrid& a, const ImageGrid& b, const char* who) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string(who) + ": shape mismatch");
    }
}

// x-flux of the curvature stencil at face (i+1/2, j):
//   D+x u / sqrt(1 + (D+x u)^2 + minmod(Dc_y u_{i,j}, Dc_y u_{i+1,j})^2)
// Evaluating at i = -1 gives exactly 0 under replication (D+x u = 0).
double kappa_flux_x(const ImageGrid& u, int i, int j) {
    const double h = u.spacing;
    const double ux = (u.clamped(i + 1, j) - u.clamped(i, j)) / h;
    const double ty = minmod((u.clamped(i, j + 1) - u.clamped(i, j - 1)) / (2.0 * h),
                             (u.clamped(i + 1, j + 1) - u.clamped(i + 1, j - 1)) / (2.0 * h));
    return ux / std::sqrt(1.0 + ux * ux + ty * ty);
}

double kappa_flux_y(const ImageGrid& u, int i, int j) {
    const double h = u.spacing;
    const double uy = (u.clamped(i, j + 1) - u.clamped(i, j)) / h;
    const double tx = minmod((u.clamped(i + 1, j) - u.clamped(i - 1, j)) / (2.0 * h),
                             (u.clamped(i + 1, j + 1) - u.clamped(i - 1, j + 1)) / (2.0 * h));
    return uy / std::sqrt(1.0 + uy * uy + tx * tx);
}

// V at the two positive faces of pixel (i,j). psi = kappa * sqrt(1+|grad u|^2)
// as a pixel field; the face gradient of u and psi pairs a forward difference
// with a minmod-limited transverse central difference, and the projection
// uses the face value of 1+|grad u|^2.
double transport_face_x(const ImageGrid& u, const ImageGrid& psi, int i, int j) {
    const double h = u.spacing;
    const double ux = (u.clamped(i + 1, j) - u.clamped(i, j)) / h;
    const double uy = minmod((u.clamped(i, j + 1) - u.clamped(i, j - 1)) / (2.0 * h),
                             (u.clamped(i + 1, j + 1) - u.clamped(i + 1, j - 1)) / (2.0 * h));
    const double px = (psi.clamped(i + 1, j) - psi.clamped(i, j)) / h;
    const double py = minmod((psi.clamped(i, j + 1) - psi.clamped(i, j - 1)) / (2.0 * h),
                             (psi.clamped(i + 1, j + 1) - psi.clamped(i + 1, j - 1)) / (2.0 * h));
    const double q2 = 1.0 + ux * ux + uy * uy;
    const double q = std::sqrt(q2);
    return px / q - (px * ux + py * uy) * ux / (q * q2);
}

double transport_face_y(const ImageGrid& u, const ImageGrid& psi, int i, int j) {
    const double h = u.spacing;
    const double uy = (u.clamped(i, j + 1) - u.clamped(i, j)) / h;
    const double ux = minmod((u.clamped(i + 1, j) - u.clamped(i - 1, j)) / (2.0 * h),
                             (u.clamped(i + 1, j + 1) - u.clamped(i - 1, j + 1)) / (2.0 * h));
    const double px = minmod((psi.clamped(i + 1, j) - psi.clamped(i - 1, j)) / (2.0 * h),
                             (psi.clamped(i + 1, j + 1) - psi.clamped(i - 1, j + 1)) / (2.0 * h));
    const double py = (psi.clamped(i, j + 1) - psi.clamped(i, j)) / h;
    // own-axis terms first so x/y kernels transpose into each other bitwise
    const double q2 = 1.0 + uy * uy + ux * ux;
    const double q = std::sqrt(q2);
    return py / q - (py * uy + px * ux) * uy / (q * q2);
}

}  // namespace

ImageGrid gray_level_indicator(const ImageGrid& noisy, const IndicatorSpec& spec) {
    if (spec.mode == IndicatorSpec::Mode::Constant) {
        return ImageGrid(noisy.width, noisy.height, spec.constant, noisy.spacing);
    }
    ImageGrid smoothed = gaussian_convolve(noisy, spec.sigma);
    const double peak = max_value(smoothed);
    if (!(peak > 0.0)) {
        throw std::invalid_argument("gray_level_indicator: all-zero input has no scale (M = 0)");
    }
    ImageGrid out(noisy.width, noisy.height, 0.0, noisy.spacing);
    for (std::size_t k = 0; k < out.data.size(); ++k) {
        out.data[k] = std::pow(smoothed.data[k] / peak, spec.p);
    }
    return out;
}

ImageGrid mean_curvature(const ImageGrid& u) {
    const double h = u.spacing;
    ImageGrid out(u.width, u.height, 0.0, u.spacing);
    for (int j = 0; j < u.height; ++j) {
        for (int i = 0; i < u.width; ++i) {
            const double fx = kappa_flux_x(u, i, j) - kappa_flux_x(u, i - 1, j);
            const double fy = kappa_flux_y(u, i, j) - kappa_flux_y(u, i, j - 1);
            out(i, j) = (fx + fy) / h;
        }
    }
    return out;
}

ImageGrid area_density(const ImageGrid& u) {
    ImageGrid g2 = grad_magnitude_sq(u, GradScheme::Central);
    for (double& v : g2.data) v = std::sqrt(1.0 + v);
    return g2;
}

ImageGrid div_g_grad(const ImageGrid& u, const ImageGrid& g) {
    const double h2 = u.spacing * u.spacing;
    ImageGrid out(u.width, u.height, 0.0, u.spacing);
    for (int j = 0; j < u.height; ++j) {
        for (int i = 0; i < u.width; ++i) {
            const double ge = 0.5 * (g(i, j) + g.clamped(i + 1, j));
            const double gw = 0.5 * (g(i, j) + g.clamped(i - 1, j));
            const double gn = 0.5 * (g(i, j) + g.clamped(i, j + 1));
            const double gs = 0.5 * (g(i, j) + g.clamped(i, j - 1));
            const double flux_x = ge * (u.clamped(i + 1, j) - u(i, j))
                                - gw * (u(i, j) - u.clamped(i - 1, j));
            const double flux_y = gn * (u.clamped(i, j + 1) - u(i, j))
                                - gs * (u(i, j) - u.clamped(i, j - 1));
            out(i, j) = (flux_x + flux_y) / h2;
        }
    }
    return out;
}

ImageGrid curvature_transport_div(const ImageGrid& u) {
    const double h = u.spacing;
    ImageGrid kappa = mean_curvature(u);
    ImageGrid psi = area_density(u);
    for (std::size_t k = 0; k < psi.data.size(); ++k) psi.data[k] *= kappa.data[k];

    ImageGrid out(u.width, u.height, 0.0, u.spacing);
    for (int j = 0; j < u.height; ++j) {
        for (int i = 0; i < u.width; ++i) {
            const double dx = transport_face_x(u, psi, i, j) - transport_face_x(u, psi, i - 1, j);
            const double dy = transport_face_y(u, psi, i, j) - transport_face_y(u, psi, i, j - 1);
            out(i, j) = (dx + dy) / h;
        }
    }
    return out;
}

EnergyBreakdown total_energy_with_alpha(const ImageGrid& u, const ImageGrid& f,
                                        const ImageGrid& alpha, double b, double eta) {
    require_same_shape(u, f, "total_energy");
    require_same_shape(u, alpha, "total_energy");
    require_positive(u, "total_energy");
    const double cell = u.spacing * u.spacing;
    ImageGrid kappa = mean_curvature(u);
    ImageGrid ad = area_density(u);
    double reg = 0.0;
    double fid = 0.0;
    for (std::size_t k = 0; k < u.data.size(); ++k) {
        const double kap = kappa.data[k];
        reg += (alpha.data[k] + b * kap * kap) * ad.data[k];
        fid += u.data[k] - f.data[k] * std::log(u.data[k]);
    }
    EnergyBreakdown e;
    e.regularizer = reg * cell;
    e.fidelity = eta * fid * cell;
    e.total = e.regularizer + e.fidelity;
    return e;
}

EnergyBreakdown total_energy(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w) {
    return total_energy_with_alpha(u, f, gray_level_indicator(u, w.indicator), w.b, w.eta);
}

ImageGrid euler_lagrange_with_alpha(const ImageGrid& u, const ImageGrid& f,
                                    const ImageGrid& alpha, double b, double eta) {
    require_same_shape(u, f, "euler_lagrange");
    require_same_shape(u, alpha, "euler_lagrange");
    require_positive(u, "euler_lagrange");

    ImageGrid kappa = mean_curvature(u);
    ImageGrid ad = area_density(u);
    ImageGrid g(u.width, u.height, 0.0, u.spacing);
    for (std::size_t k = 0; k < g.data.size(); ++k) {
        const double kap = kappa.data[k];
        g.data[k] = (alpha.data[k] + b * kap * kap) / ad.data[k];
    }
    ImageGrid diffusion = div_g_grad(u, g);
    ImageGrid transport = curvature_transport_div(u);

    ImageGrid out(u.width, u.height, 0.0, u.spacing);
    for (std::size_t k = 0; k < out.data.size(); ++k) {
        out.data[k] = -diffusion.data[k] + 2.0 * b * transport.data[k]
                      + eta * (1.0 - f.data[k] / u.data[k]);
    }
    return out;
}

ImageGrid euler_lagrange(const ImageGrid& u, const ImageGrid& f, const ModelWeights& w) {
    return euler_lagrange_with_alpha(u, f, gray_level_indicator(u, w.indicator), w.b, w.eta);
}

ImageGrid solver_alpha(const ImageGrid& iterate, const ImageGrid& noisy,
                       const IndicatorSpec& spec) {
    return gray_level_indicator(spec.refresh_from_iterate ? iterate : noisy, spec);
}

}  // namespace mixgeo
