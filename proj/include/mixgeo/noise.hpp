#pragma once

#include <cstdint>
#include <random>

#include "mixgeo/grid.hpp"

namespace mixgeo {

/// Multiplicative gamma noise at L looks: eta ~ Gamma(shape L, scale 1/L),
/// mean 1, variance 1/L. Same seed + looks + image shape reproduce the noise
/// field bitwise.
struct GammaNoiseSpec {
    double looks = 4.0;
    std::uint64_t seed = 0;
};

/// Density L^L eta^(L-1) e^(-L eta) / Gamma(L) for eta >= 0, 0 otherwise.
/// Throws std::invalid_argument for looks <= 0.
double gamma_pdf(double eta, double looks);

/// f = u .* eta with eta drawn i.i.d. from a deterministic seeded stream in
/// row-major pixel order. Input pixels must be >= 0; output is clamped at 0.
ImageGrid apply_multiplicative_noise(const ImageGrid& clean, const GammaNoiseSpec& spec);

/// Deterministic Gamma(shape, scale) sampler. The variates are produced by a
/// Marsaglia-Tsang squeeze over the (fully standardized) mt19937_64 stream;
/// std::gamma_distribution is avoided because its algorithm is
/// implementation-defined.
class GammaSampler {
public:
    GammaSampler(double shape, double scale, std::uint64_t seed);
    double next();

private:
    double uniform();
    double normal();

    double shape_;
    double scale_;
    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mixgeo
