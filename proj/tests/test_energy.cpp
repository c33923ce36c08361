#include <doctest.h>

#include <cmath>

#include "mixgeo/energy.hpp"
#include "test_util.hpp"

using namespace mixgeo;

TEST_CASE("indicator of a constant image is all ones") {
    ImageGrid img(16, 12, 42.0);
    ImageGrid alpha = gray_level_indicator(img, IndicatorSpec::adaptive(2.0, 1.5));
    for (double v : alpha.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("constant indicator mode ignores the input") {
    ImageGrid img = testutil::random_image(9, 9, 0.0, 255.0, 17);
    ImageGrid alpha = gray_level_indicator(img, IndicatorSpec::constant_value(0.5));
    for (double v : alpha.data) CHECK(v == 0.5);
}

TEST_CASE("indicator rejects all-zero input in adaptive mode") {
    ImageGrid zeros(8, 8, 0.0);
    CHECK_THROWS_AS(gray_level_indicator(zeros, IndicatorSpec::adaptive()), std::invalid_argument);
}

TEST_CASE("two-level image: indicator ranks regions by signal strength") {
    const int n = 48;
    ImageGrid img(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) img(i, j) = (i < n / 2) ? 64.0 : 192.0;
    }
    ImageGrid alpha = gray_level_indicator(img, IndicatorSpec::adaptive(2.0, 1.0));

    // oracle: dense convolution, then normalize by its own peak
    ImageGrid smoothed = testutil::convolve2d_gaussian(img, 2.0);
    double peak = 0.0;
    for (double v : smoothed.data) peak = std::max(peak, v);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            CHECK(alpha(i, j) == doctest::Approx(smoothed(i, j) / peak).epsilon(1e-12));
        }
    }

    CHECK(alpha(n - 4, n / 2) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(alpha(3, n / 2) == doctest::Approx(64.0 / 192.0).epsilon(1e-9));
    for (int i = 1; i < n; ++i) {
        CHECK(alpha(i, n / 2) >= alpha(i - 1, n / 2) - 1e-12);  // monotone transition
    }
    CHECK(max_value(alpha) <= 1.0 + 1e-15);
    CHECK(min_value(alpha) >= 0.0);
}

TEST_CASE("mean curvature of flat and planar images") {
    ImageGrid flat(10, 10, 25.0);
    for (double v : mean_curvature(flat).data) CHECK(v == 0.0);

    ImageGrid plane(12, 12);
    for (int j = 0; j < 12; ++j) {
        for (int i = 0; i < 12; ++i) plane(i, j) = 1.5 * i - 2.0 * j + 30.0;
    }
    ImageGrid kappa = mean_curvature(plane);
    for (int j = 2; j < 10; ++j) {
        for (int i = 2; i < 10; ++i) CHECK(std::abs(kappa(i, j)) < 1e-14);
    }
}

TEST_CASE("hemisphere apex curvature approaches -2/R") {
    const double R = 50.0;
    const int n = 33;
    ImageGrid img(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double x = i - 16.0, y = j - 16.0;
            img(i, j) = std::sqrt(R * R - x * x - y * y);
        }
    }
    const double kappa_apex = mean_curvature(img)(16, 16);
    CHECK(kappa_apex == doctest::Approx(-2.0 / R).epsilon(0.10));
}

TEST_CASE("discrete curvature is bounded by 4 over the spacing") {
    for (unsigned seed : {2u, 12u, 22u}) {
        ImageGrid img = testutil::random_image(24, 24, 0.0, 255.0, seed);
        ImageGrid kappa = mean_curvature(img);
        for (double v : kappa.data) CHECK(std::abs(v) <= 4.0);
    }
}

TEST_CASE("area density values") {
    ImageGrid flat(6, 6, 9.0);
    for (double v : area_density(flat).data) CHECK(v == 1.0);

    ImageGrid ramp(10, 10);
    for (int j = 0; j < 10; ++j) {
        for (int i = 0; i < 10; ++i) ramp(i, j) = 3.0 * i;
    }
    ImageGrid ad = area_density(ramp);
    for (int j = 0; j < 10; ++j) {
        for (int i = 1; i < 9; ++i) CHECK(ad(i, j) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
    }

    ImageGrid rnd = testutil::random_image(7, 7, -4.0, 4.0, 31);
    ImageGrid got = area_density(rnd);
    for (int j = 0; j < 7; ++j) {
        for (int i = 0; i < 7; ++i) {
            const double gx = 0.5 * (rnd.clamped(i + 1, j) - rnd.clamped(i - 1, j));
            const double gy = 0.5 * (rnd.clamped(i, j + 1) - rnd.clamped(i, j - 1));
            CHECK(std::abs(got(i, j) - std::sqrt(1.0 + gx * gx + gy * gy)) < 1e-14);
        }
    }
}

TEST_CASE("total energy of constant images has a closed form") {
    ModelWeights w;
    w.b = 0.37;
    w.eta = 0.2;
    w.indicator = IndicatorSpec::constant_value(1.0);

    ImageGrid ones(12, 10, 1.0);
    EnergyBreakdown e = total_energy(ones, ones, w);
    CHECK(e.regularizer == doctest::Approx(120.0).epsilon(1e-13));
    CHECK(e.fidelity == doctest::Approx(0.2 * 120.0).epsilon(1e-13));
    CHECK(e.total == e.regularizer + e.fidelity);

    const double c = 7.5;
    ImageGrid uc(8, 8, c);
    EnergyBreakdown ec = total_energy(uc, uc, w);
    CHECK(ec.fidelity == doctest::Approx(0.2 * 64.0 * (c - c * std::log(c))).epsilon(1e-13));
}

TEST_CASE("total energy matches an independent summation oracle") {
    ImageGrid u = testutil::random_image(16, 16, 10.0, 240.0, 44);
    ImageGrid f = testutil::random_image(16, 16, 10.0, 240.0, 45);
    ModelWeights w;
    w.b = 0.01;
    w.eta = 0.1;
    w.indicator = IndicatorSpec::adaptive(2.0, 1.0);

    EnergyBreakdown e = total_energy(u, f, w);

    ImageGrid alpha = gray_level_indicator(u, w.indicator);
    ImageGrid kappa = mean_curvature(u);
    ImageGrid ad = area_density(u);
    double reg = 0.0, fid = 0.0;
    for (int j = 0; j < 16; ++j) {
        for (int i = 0; i < 16; ++i) {
            reg += (alpha(i, j) + w.b * kappa(i, j) * kappa(i, j)) * ad(i, j);
            fid += u(i, j) - f(i, j) * std::log(u(i, j));
        }
    }
    CHECK(e.regularizer == doctest::Approx(reg).epsilon(1e-12));
    CHECK(e.fidelity == doctest::Approx(w.eta * fid).epsilon(1e-12));
}

TEST_CASE("total energy rejects non-positive iterates") {
    ImageGrid u(5, 5, 2.0);
    u(1, 1) = 0.0;
    ImageGrid f(5, 5, 2.0);
    ModelWeights w;
    CHECK_THROWS_AS(total_energy(u, f, w), std::invalid_argument);
}

TEST_CASE("constant images are exact fixed points of the variation") {
    ModelWeights w;
    w.b = 0.25;
    w.eta = 0.6;
    w.indicator = IndicatorSpec::adaptive(1.5, 2.0);
    ImageGrid uc(14, 9, 33.0);
    ImageGrid grad = euler_lagrange(uc, uc, w);
    for (double v : grad.data) CHECK(v == 0.0);
}

TEST_CASE("only the fidelity term survives on flat images") {
    ModelWeights w;
    w.b = 0.02;
    w.eta = 0.45;
    w.indicator = IndicatorSpec::constant_value(0.9);
    const double c = 20.0, d = 5.0;
    ImageGrid u(11, 7, c), f(11, 7, d);
    ImageGrid grad = euler_lagrange(u, f, w);
    const double expected = 0.45 * (1.0 - d / c);
    for (double v : grad.data) CHECK(v == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("euler_lagrange rejects non-positive iterates") {
    ImageGrid u(5, 5, 1.0);
    u(0, 0) = -1.0;
    ImageGrid f(5, 5, 1.0);
    ModelWeights w;
    CHECK_THROWS_AS(euler_lagrange(u, f, w), std::invalid_argument);
}

namespace {

double directional_consistency_error(int n) {
    ModelWeights w;
    w.b = 0.01;
    w.eta = 0.1;
    w.indicator = IndicatorSpec::constant_value(0.8);

    ImageGrid u = testutil::smooth_field(n, 100.0, 10.0);
    ImageGrid f = u;
    for (double& v : f.data) v *= 0.9;
    ImageGrid v = testutil::smooth_direction(n, 1.0);

    const double h = 1e-4;
    ImageGrid up = u, um = u;
    for (std::size_t k = 0; k < u.data.size(); ++k) {
        up.data[k] += h * v.data[k];
        um.data[k] -= h * v.data[k];
    }
    const double fd = (total_energy(up, f, w).total - total_energy(um, f, w).total) / (2.0 * h);
    const double op = inner_product(euler_lagrange(u, f, w), v);
    return std::abs(fd - op) / std::abs(fd);
}

}  // namespace

TEST_CASE("directional derivative consistency and grid refinement") {
    const double e32 = directional_consistency_error(32);
    const double e64 = directional_consistency_error(64);
    const double e128 = directional_consistency_error(128);
    CHECK(e64 <= 0.05);
    CHECK(e128 < e32);
    CHECK(e64 < e32);
}

TEST_CASE("degenerate configuration reduces to the minimal-surface flow bitwise") {
    const double a = 0.7, eta = 0.3;
    ImageGrid u = testutil::random_image(12, 12, 30.0, 220.0, 55);
    ImageGrid f = testutil::random_image(12, 12, 30.0, 220.0, 56);

    ModelWeights w;
    w.b = 0.0;
    w.eta = eta;
    w.indicator = IndicatorSpec::constant_value(a);
    ImageGrid got = euler_lagrange(u, f, w);

    ImageGrid ad = area_density(u);
    ImageGrid g(u.width, u.height);
    for (std::size_t k = 0; k < g.data.size(); ++k) g.data[k] = a / ad.data[k];
    ImageGrid diffusion = div_g_grad(u, g);
    for (int j = 0; j < 12; ++j) {
        for (int i = 0; i < 12; ++i) {
            const double expected = -diffusion(i, j) + eta * (1.0 - f(i, j) / u(i, j));
            CHECK(got(i, j) == expected);
        }
    }
}
