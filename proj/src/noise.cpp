#include "mixgeo/noise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mixgeo {

double gamma_pdf(double eta, double looks) {
    if (!(looks > 0.0)) {
        throw std::invalid_argument("gamma_pdf: looks must be > 0");
    }
    if (eta < 0.0) return 0.0;
    if (eta == 0.0) {
        if (looks > 1.0) return 0.0;
        if (looks == 1.0) return 1.0;  // exp(-0) with unit rate
        return std::numeric_limits<double>::infinity();
    }
    // log form keeps large L well-conditioned
    const double log_p = looks * std::log(looks) + (looks - 1.0) * std::log(eta)
                         - looks * eta - std::lgamma(looks);
    return std::exp(log_p);
}

GammaSampler::GammaSampler(double shape, double scale, std::uint64_t seed)
    : shape_(shape), scale_(scale), rng_(seed) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw std::invalid_argument("GammaSampler: shape and scale must be > 0");
    }
}

double GammaSampler::uniform() {
    // 53-bit mantissa in [0, 1)
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double GammaSampler::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double GammaSampler::next() {
    double shape = shape_;
    double boost = 1.0;
    if (shape < 1.0) {
        // Gamma(a) = Gamma(a+1) * U^(1/a)
        boost = std::pow(1.0 - uniform(), 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = 1.0 - uniform();  // (0, 1]
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) {
            return boost * d * v * scale_;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return boost * d * v * scale_;
        }
    }
}

ImageGrid apply_multiplicative_noise(const ImageGrid& clean, const GammaNoiseSpec& spec) {
    if (!(spec.looks > 0.0)) {
        throw std::invalid_argument("apply_multiplicative_noise: looks must be > 0");
    }
    for (double v : clean.data) {
        if (v < 0.0) {
            throw std::invalid_argument("apply_multiplicative_noise: input pixels must be >= 0");
        }
    }
    GammaSampler sampler(spec.looks, 1.0 / spec.looks, spec.seed);
    ImageGrid out(clean.width, clean.height, 0.0, clean.spacing);
    for (std::size_t k = 0; k < clean.data.size(); ++k) {
        out.data[k] = std::max(0.0, clean.data[k] * sampler.next());
    }
    return out;
}

}  // namespace mixgeo
