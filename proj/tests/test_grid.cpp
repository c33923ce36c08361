#include <doctest.h>

#include <cmath>
#include <random>

#include "mixgeo/grid.hpp"
#include "test_util.hpp"

using namespace mixgeo;

TEST_CASE("finite differences on a constant image vanish") {
    ImageGrid img(9, 7, 4.25);
    for (Axis axis : {Axis::X, Axis::Y}) {
        for (DiffScheme s : {DiffScheme::Forward, DiffScheme::Backward, DiffScheme::Central}) {
            ImageGrid d = finite_difference(img, axis, s);
            for (double v : d.data) CHECK(v == 0.0);
        }
    }
}

TEST_CASE("finite difference values on a 1x3 row") {
    ImageGrid img(3, 1);
    img(0, 0) = 1.0;
    img(1, 0) = 3.0;
    img(2, 0) = 6.0;
    CHECK(finite_difference(img, Axis::X, DiffScheme::Forward)(1, 0) == 3.0);
    CHECK(finite_difference(img, Axis::X, DiffScheme::Central)(1, 0) == 2.5);
    // replication: forward difference across the right edge is zero
    CHECK(finite_difference(img, Axis::X, DiffScheme::Forward)(2, 0) == 0.0);
    CHECK(finite_difference(img, Axis::X, DiffScheme::Backward)(0, 0) == 0.0);
}

TEST_CASE("finite differences respect the spacing") {
    ImageGrid img(5, 1, 0.0, 0.5);
    for (int i = 0; i < 5; ++i) img(i, 0) = 2.0 * (i * 0.5);  // u = 2x
    CHECK(finite_difference(img, Axis::X, DiffScheme::Forward)(2, 0) == doctest::Approx(2.0));
    CHECK(finite_difference(img, Axis::X, DiffScheme::Central)(2, 0) == doctest::Approx(2.0));
}

TEST_CASE("minmod examples and properties") {
    CHECK(minmod(2.0, 3.0) == 2.0);
    CHECK(minmod(-1.0, 2.0) == 0.0);
    CHECK(minmod(-4.0, -2.0) == -2.0);
    CHECK(minmod(0.0, 5.0) == 0.0);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int t = 0; t < 1000; ++t) {
        const double a = dist(rng), b = dist(rng);
        const double m = minmod(a, b);
        CHECK(m == minmod(b, a));
        CHECK(std::abs(m) <= std::min(std::abs(a), std::abs(b)));
        // same closed interval as the smaller-magnitude argument
        if (m != 0.0) CHECK(m * a > 0.0);
    }
}

TEST_CASE("gaussian convolution keeps constants fixed") {
    ImageGrid img(12, 9, 77.0);
    ImageGrid out = gaussian_convolve(img, 1.7);
    for (double v : out.data) CHECK(v == doctest::Approx(77.0).epsilon(1e-14));
}

TEST_CASE("gaussian convolution rejects non-positive sigma") {
    ImageGrid img(4, 4, 1.0);
    CHECK_THROWS_AS(gaussian_convolve(img, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_convolve(img, -1.0), std::invalid_argument);
}

TEST_CASE("unit impulse response equals the normalized kernel center weight") {
    const double sigma = 1.0;
    const int radius = 3;  // ceil(3 sigma)
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) sum += std::exp(-0.5 * k * k);
    const double w0 = 1.0 / sum;

    ImageGrid img(15, 15, 0.0);
    img(7, 7) = 1.0;
    ImageGrid out = gaussian_convolve(img, sigma);
    CHECK(out(7, 7) == doctest::Approx(w0 * w0).epsilon(1e-13));
}

TEST_CASE("symmetric kernel leaves a linear ramp unchanged away from the boundary") {
    ImageGrid img(32, 32);
    for (int j = 0; j < 32; ++j) {
        for (int i = 0; i < 32; ++i) img(i, j) = 3.0 * i - 2.0 * j + 40.0;
    }
    ImageGrid out = gaussian_convolve(img, 1.0);
    ImageGrid oracle = testutil::convolve2d_gaussian(img, 1.0);
    for (int j = 4; j < 28; ++j) {
        for (int i = 4; i < 28; ++i) {
            CHECK(std::abs(out(i, j) - img(i, j)) < 1e-12);
            CHECK(out(i, j) == doctest::Approx(oracle(i, j)).epsilon(1e-13));
        }
    }
}

TEST_CASE("gaussian convolution preserves the mean of interior-supported bumps") {
    // flat band wider than the kernel radius along the border
    ImageGrid img(40, 40, 50.0);
    for (int j = 8; j < 32; ++j) {
        for (int i = 8; i < 32; ++i) img(i, j) = 50.0 + 90.0 * std::sin(0.3 * i) * std::sin(0.4 * j);
    }
    ImageGrid out = gaussian_convolve(img, 2.0);
    CHECK(mean_value(out) == doctest::Approx(mean_value(img)).epsilon(1e-12));
    CHECK(max_value(out) <= max_value(img) + 1e-12);
    CHECK(min_value(out) >= min_value(img) - 1e-12);
}

TEST_CASE("grad_magnitude_sq examples") {
    ImageGrid flat(6, 6, 3.0);
    for (GradScheme s : {GradScheme::Central, GradScheme::StaggeredX, GradScheme::StaggeredY}) {
        for (double v : grad_magnitude_sq(flat, s).data) CHECK(v == 0.0);
    }

    ImageGrid ramp(8, 8);
    for (int j = 0; j < 8; ++j) {
        for (int i = 0; i < 8; ++i) ramp(i, j) = 2.0 * i;
    }
    ImageGrid g = grad_magnitude_sq(ramp, GradScheme::Central);
    for (int j = 0; j < 8; ++j) {
        for (int i = 1; i < 7; ++i) CHECK(g(i, j) == doctest::Approx(4.0));
    }
}

TEST_CASE("grad_magnitude_sq matches a direct-evaluation oracle") {
    ImageGrid img = testutil::random_image(5, 5, -3.0, 9.0, 123);
    ImageGrid central = grad_magnitude_sq(img, GradScheme::Central);
    ImageGrid stagx = grad_magnitude_sq(img, GradScheme::StaggeredX);
    for (int j = 0; j < 5; ++j) {
        for (int i = 0; i < 5; ++i) {
            const double gx = 0.5 * (img.clamped(i + 1, j) - img.clamped(i - 1, j));
            const double gy = 0.5 * (img.clamped(i, j + 1) - img.clamped(i, j - 1));
            CHECK(std::abs(central(i, j) - (gx * gx + gy * gy)) < 1e-14);

            const double fx = img.clamped(i + 1, j) - img(i, j);
            const double ty = minmod(0.5 * (img.clamped(i, j + 1) - img.clamped(i, j - 1)),
                                     0.5 * (img.clamped(i + 1, j + 1) - img.clamped(i + 1, j - 1)));
            CHECK(std::abs(stagx(i, j) - (fx * fx + ty * ty)) < 1e-14);
        }
    }
}

TEST_CASE("replicated padding reproduces the ghost policy exactly") {
    ImageGrid img = testutil::random_image(10, 8, 0.0, 255.0, 77);
    ImageGrid padded(img.width + 2, img.height + 2);
    for (int j = -1; j <= img.height; ++j) {
        for (int i = -1; i <= img.width; ++i) {
            padded(i + 1, j + 1) = img.clamped(i, j);
        }
    }
    auto check_op = [&](auto&& op) {
        ImageGrid a = op(img);
        ImageGrid b = op(padded);
        for (int j = 0; j < img.height; ++j) {
            for (int i = 0; i < img.width; ++i) {
                CHECK(a(i, j) == b(i + 1, j + 1));
            }
        }
    };
    check_op([](const ImageGrid& g) { return finite_difference(g, Axis::X, DiffScheme::Central); });
    check_op([](const ImageGrid& g) { return finite_difference(g, Axis::Y, DiffScheme::Forward); });
    check_op([](const ImageGrid& g) { return grad_magnitude_sq(g, GradScheme::StaggeredX); });
}

TEST_CASE("forward and backward differences are adjoint on interior-supported fields") {
    const int n = 16;
    ImageGrid a(n, n, 0.0), b(n, n, 0.0);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int j = 3; j < n - 3; ++j) {
        for (int i = 3; i < n - 3; ++i) {
            a(i, j) = dist(rng);
            b(i, j) = dist(rng);
        }
    }
    for (Axis axis : {Axis::X, Axis::Y}) {
        ImageGrid da = finite_difference(a, axis, DiffScheme::Forward);
        ImageGrid db = finite_difference(b, axis, DiffScheme::Backward);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t k = 0; k < a.data.size(); ++k) {
            lhs += da.data[k] * b.data[k];
            rhs += a.data[k] * db.data[k];
        }
        CHECK(std::abs(lhs + rhs) < 1e-13);
    }
}

TEST_CASE("transpose round-trips") {
    ImageGrid img = testutil::random_image(7, 4, -5.0, 5.0, 9);
    ImageGrid back = transpose(transpose(img));
    CHECK(testutil::max_abs_diff(img, back) == 0.0);
}
