// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "image_io.hpp"
#include "metrics.hpp"
#include "render.hpp"
#include "rng.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

using namespace nbk;
using nbk::test::error_code_of;

namespace {

constexpr double kPi = std::numbers::pi;

Image random_image(std::size_t w, std::size_t h, Rng& rng) {
    Image img(w, h);
    for (auto& v : img.pixels) v = rng.uniform();
    return img;
}

PairEval lambertian(double rho) {
    return [rho](const Vec3&, const Vec3&) { return Rgb{rho / kPi, rho / kPi, rho / kPi}; };
}

}  // namespace

TEST_CASE("rmse closed forms") {
    Rng rng(1);
    const Image a = random_image(13, 9, rng);
    CHECK(rmse(a, a) == 0.0);
    CHECK(rmse(Image(8, 8, {0, 0, 0}), Image(8, 8, {1, 1, 1})) == 1.0);

    // Left half differs by one, right half matches.
    Image half(8, 8, {0, 0, 0});
    for (std::size_t y = 0; y < 8; ++y) {
        for (std::size_t x = 0; x < 4; ++x) {
            for (std::size_t c = 0; c < 3; ++c) half.at(x, y, c) = 1.0;
        }
    }
    CHECK(rmse(half, Image(8, 8)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(error_code_of([&] { rmse(Image(8, 8), Image(8, 9)); }) == static_cast<int>(ErrorCode::Shape));
}

TEST_CASE("rmse is a metric") {
    Rng rng(2);
    for (int i = 0; i < 50; ++i) {
        const Image a = random_image(7, 5, rng), b = random_image(7, 5, rng), c = random_image(7, 5, rng);
        CHECK(rmse(a, b) == rmse(b, a));
        CHECK(rmse(a, b) > 0.0);
        CHECK(rmse(a, c) <= rmse(a, b) + rmse(b, c) + 1e-15);
    }
}

TEST_CASE("psnr closed forms") {
    // One of 25 pixels differs by 0.5 in every channel: rmse^2 = 0.75 / 75.
    Image a(5, 5), b(5, 5);
    for (std::size_t c = 0; c < 3; ++c) b.at(2, 2, c) = 0.5;
    REQUIRE(rmse(a, b) == 0.1);
    CHECK(psnr(a, b, 1.0) == 20.0);

    // rmse = 0.01 gives 40 dB.
    Image d(10, 10);
    for (std::size_t c = 0; c < 3; ++c) d.at(0, 0, c) = 0.1;
    CHECK(psnr(Image(10, 10), d, 1.0) == doctest::Approx(40.0).epsilon(1e-12));

    // Doubling the peak adds 20 log10(2).
    Rng rng(3);
    const Image x = random_image(12, 12, rng), y = random_image(12, 12, rng);
    CHECK(psnr(x, y, 2.0) - psnr(x, y, 1.0) == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));

    CHECK(psnr(x, x, 1.0) == std::numeric_limits<double>::infinity());
    CHECK(error_code_of([&] { psnr(x, y, 0.0); }) == static_cast<int>(ErrorCode::Domain));
}

TEST_CASE("psnr decreases strictly with rmse") {
    Rng rng(4);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 100; ++i) {
        const Image a = random_image(16, 16, rng);
        Image b = a;
        const double scale = rng.uniform(0.001, 0.5);
        for (auto& v : b.pixels) v = std::clamp(v + scale * rng.uniform(-1.0, 1.0), 0.0, 1.0);
        pairs.emplace_back(rmse(a, b), psnr(a, b, 1.0));
    }
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        if (pairs[i].first > pairs[i - 1].first) CHECK(pairs[i].second < pairs[i - 1].second);
    }
}

TEST_CASE("ssim identities") {
    Rng rng(5);
    const Image a = random_image(32, 24, rng);
    CHECK(std::fabs(ssim(a, a) - 1.0) <= 1e-9);
    CHECK(ssim(a, a) == 1.0);
    for (int i = 0; i < 10; ++i) {
        const Image b = random_image(32, 24, rng);
        const double s = ssim(a, b);
        CHECK(s == ssim(b, a));
        CHECK(s < 1.0);
        CHECK(s <= 1.0);
    }
    CHECK(error_code_of([&] { ssim(Image(10, 40), Image(10, 40)); }) == static_cast<int>(ErrorCode::Domain));
    CHECK(error_code_of([&] { ssim(Image(20, 20), Image(21, 20)); }) == static_cast<int>(ErrorCode::Shape));
}

TEST_CASE("ssim of two constant images is the luminance term") {
    // Window variances vanish, so only (2 mu1 mu2 + C1) / (mu1^2 + mu2^2 + C1)
    // remains, identical for every window.
    const double u = 0.2, v = 0.7;
    const double c1 = 0.01 * 0.01;
    const double expected = (2 * u * v + c1) / (u * u + v * v + c1);
    CHECK(ssim(Image(16, 16, {u, u, u}), Image(16, 16, {v, v, v})) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected < 1.0);

    // Luminance uses the Rec. 601 weights.
    const double lum = 0.299 * 0.1 + 0.587 * 0.5 + 0.114 * 0.9;
    const double e2 = (2 * lum * v + c1) / (lum * lum + v * v + c1);
    CHECK(ssim(Image(16, 16, {0.1, 0.5, 0.9}), Image(16, 16, {v, v, v})) == doctest::Approx(e2).epsilon(1e-12));
}

TEST_CASE("scene validation") {
    SceneSpec s;
    CHECK_NOTHROW(s.validate());
    s.light_dir = Vec3{1, 1, 1};
    CHECK(error_code_of([&] { s.validate(); }) == static_cast<int>(ErrorCode::Domain));
    s = SceneSpec{};
    s.intensity = {1, -1, 1};
    CHECK(error_code_of([&] { s.validate(); }) == static_cast<int>(ErrorCode::Domain));
}

TEST_CASE("render: zero BRDF and background") {
    SceneSpec scene;
    scene.background = {0.25, 0.5, 0.75};
    const Image img = render_sphere([](const Vec3&, const Vec3&) { return Rgb{0, 0, 0}; }, scene, 32, 32);
    // Corners see background, the centre sees a black sphere.
    CHECK(img.at(0, 0, 0) == 0.25);
    CHECK(img.at(31, 31, 2) == 0.75);
    for (std::size_t c = 0; c < 3; ++c) CHECK(img.at(16, 16, c) == 0.0);
}

TEST_CASE("render: Lambertian closed form at the centre") {
    SceneSpec scene;
    scene.light_dir = Vec3{0, 0, 1};
    scene.intensity = {1.0, 2.0, 0.5};
    const double rho = 0.6;
    const Image img = render_sphere(lambertian(rho), scene, 33, 33);
    for (std::size_t c = 0; c < 3; ++c) {
        const double expected = std::clamp(std::pow(rho / kPi * scene.intensity[c], 1.0 / 2.2), 0.0, 1.0);
        CHECK(img.at(16, 16, c) == doctest::Approx(expected).epsilon(1e-12));
    }
    // Off-centre, n . l falls off with the visible normal's z component.
    const double px = 2.0 * (24 + 0.5) / 33 - 1.0;
    const double py = 1.0 - 2.0 * (16 + 0.5) / 33;
    const double nz = std::sqrt(1.0 - px * px - py * py);
    CHECK(img.at(24, 16, 0) == doctest::Approx(std::pow(rho / kPi * nz, 1.0 / 2.2)).epsilon(1e-12));
}

TEST_CASE("render: determinism, sub-rectangles and workers") {
    const PairEval brdf = phong_pair_eval({{0.3, 0.2, 0.1}, {0.5, 0.5, 0.5}, 30.0});
    SceneSpec scene;
    const Image full = render_sphere(brdf, scene, 40, 30);
    CHECK(render_sphere(brdf, scene, 40, 30) == full);
    CHECK(render_sphere(brdf, scene, 40, 30, 4) == full);
    const Image part = render_sphere_region(brdf, scene, 40, 30, 11, 5, 17, 20, 3);
    for (std::size_t y = 0; y < 20; ++y) {
        for (std::size_t x = 0; x < 17; ++x) {
            for (std::size_t c = 0; c < 3; ++c) CHECK(part.at(x, y, c) == full.at(11 + x, 5 + y, c));
        }
    }
    for (double v : full.pixels) CHECK((v >= 0.0 && v <= 1.0));
    CHECK(error_code_of([&] { render_sphere_region(brdf, scene, 40, 30, 30, 0, 11, 1); }) ==
          static_cast<int>(ErrorCode::Domain));
}

TEST_CASE("render: BRDF failures carry the pixel") {
    const PairEval bad = [](const Vec3& wi, const Vec3&) -> Rgb {
        if (wi.x > 0.9) fail(ErrorCode::Numeric, "boom");
        return {0.1, 0.1, 0.1};
    };
    SceneSpec scene;
    scene.light_dir = Vec3{1, 0, 0};
    try {
        render_sphere(bad, scene, 16, 16);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Numeric);
        CHECK(std::string(e.what()).find("pixel (") != std::string::npos);
        CHECK(std::string(e.what()).find("boom") != std::string::npos);
    }
}

TEST_CASE("side by side") {
    const Image a(3, 2, {1, 0, 0}), b(4, 2, {0, 1, 0});
    const Image ab = side_by_side({&a, &b});
    CHECK(ab.width == 7);
    CHECK(ab.height == 2);
    CHECK(ab.at(2, 1, 0) == 1.0);
    CHECK(ab.at(3, 0, 1) == 1.0);
    const Image c(2, 3);
    CHECK(error_code_of([&] { side_by_side({&a, &c}); }) == static_cast<int>(ErrorCode::Shape));
}

TEST_CASE("PNG round trip") {
    const auto dir = nbk::test::scratch("png");
    Rng rng(6);
    Image img = random_image(21, 13, rng);
    img.pixels[0] = 1.0;
    img.pixels[1] = 0.0;
    const auto q = quantize_rgb8(img);
    CHECK(q[0] == 255);
    CHECK(q[1] == 0);
    for (std::size_t i = 0; i < q.size(); ++i) CHECK(q[i] == static_cast<int>(std::lround(img.pixels[i] * 255.0)));
    write_png(dir / "a.png", img);
    const Image back = read_png(dir / "a.png");
    REQUIRE(back.width == 21);
    REQUIRE(back.height == 13);
    for (std::size_t i = 0; i < q.size(); ++i) CHECK(back.pixels[i] == q[i] / 255.0);
    CHECK(error_code_of([&] { read_png(dir / "missing.png"); }) == static_cast<int>(ErrorCode::Io));
}
