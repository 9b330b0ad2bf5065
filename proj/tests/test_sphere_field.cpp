// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "merl.hpp"
#include "nbrdf.hpp"
#include "rng.hpp"
#include "sphere_field.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

using namespace nbk;
using nbk::test::error_code_of;

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 embed(const SpherePoint& p) {
    return {std::sin(p.theta) * std::cos(p.phi), std::sin(p.theta) * std::sin(p.phi), std::cos(p.theta)};
}

std::vector<SphereSample> random_samples(Rng& rng, std::size_t n) {
    std::vector<SphereSample> s(n);
    for (auto& x : s) {
        x.theta = std::acos(rng.uniform(-1.0, 1.0));
        x.phi = rng.uniform(0.0, 2.0 * kPi);
        x.value = {rng.uniform(), rng.uniform(), rng.uniform()};
    }
    return s;
}

}  // namespace

TEST_CASE("sphere mapping is the documented linear rescaling") {
    const SpherePoint p = hd_to_sphere(0.3, 0.7);
    CHECK(p.theta == doctest::Approx(0.6));
    CHECK(p.phi == doctest::Approx(2.8));
    const RusinCoords back = sphere_to_hd(p, 1.25);
    CHECK(back.theta_h == doctest::Approx(0.3));
    CHECK(back.theta_d == doctest::Approx(0.7));
    CHECK(back.phi_d == 1.25);
}

TEST_CASE("slice_to_sphere: constant, grid lookup and theta_h fields") {
    const auto positions = slice_grid_positions(slice_alphas(4)[1]);
    CHECK(positions.size() == 8100);
    const Rgb c{0.1, 0.2, 0.3};
    auto constant = slice_to_sphere([&](const RusinCoords&) { return std::optional<Rgb>(c); }, {slice_alphas(4)[1]},
                                    positions);
    CHECK(constant.size() == 8100);
    for (const auto& s : constant) CHECK(s.value == c);

    PhongParams p;
    p.ks = {0.4, 0.4, 0.4};
    p.exponent = 10;
    const MerlBrdf m = synthesize_phong("m", p);
    const double alpha = merl::cell_center(0, 0, 17).phi_d;
    const auto samples = slice_to_sphere(make_merl_eval(m), {alpha}, slice_grid_positions(alpha));
    std::size_t checked = 0;
    for (std::size_t ih = 0; ih < 90; ih += 7) {
        for (std::size_t id = 0; id < 90; id += 11) {
            const std::size_t cell = merl::cell_index(ih, id, 17);
            if (m.masked(cell)) continue;
            const SpherePoint sp = hd_to_sphere(merl::cell_center(cell).theta_h, merl::cell_center(cell).theta_d);
            auto it = std::find_if(samples.begin(), samples.end(),
                                   [&](const SphereSample& s) { return s.theta == sp.theta && s.phi == sp.phi; });
            REQUIRE(it != samples.end());
            CHECK(it->value == m.rgb(cell));
            ++checked;
        }
    }
    CHECK(checked > 20);

    auto theta_h_field = slice_to_sphere(
        [](const RusinCoords& rc) { return std::optional<Rgb>(Rgb{rc.theta_h, rc.theta_h, rc.theta_h}); }, {0.5},
        slice_grid_positions(0.5));
    for (const auto& s : theta_h_field) CHECK(s.value[0] == doctest::Approx(s.theta / 2.0).epsilon(1e-14));

    CHECK(error_code_of([&] {
              slice_to_sphere([](const RusinCoords&) { return std::optional<Rgb>(); }, {0.5}, slice_grid_positions(0.5));
          }) != 0);
}

TEST_CASE("chord distance") {
    CHECK(chord_distance({0.4, 1.0}, {0.4, 1.0}) == 0.0);
    CHECK(chord_distance({0.0, 0.0}, {kPi, 0.0}) == doctest::Approx(2.0));
    CHECK(chord_distance({kPi / 2, 0.0}, {kPi / 2, kPi / 2}) == doctest::Approx(std::sqrt(2.0)));
    Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
        const SpherePoint p{std::acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * kPi)};
        const SpherePoint q{std::acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * kPi)};
        const double d = chord_distance(p, q);
        CHECK(d == chord_distance(q, p));
        CHECK(std::fabs(d - length(embed(p) - embed(q))) < 1e-12);
    }
}

TEST_CASE("knn weights") {
    Rng rng(4);
    const auto samples = random_samples(rng, 200);
    const SpherePoint q{1.0, 2.0};
    const auto one = knn_weights(q, samples, {1, 0.1});
    REQUIRE(one.size() == 1);
    CHECK(one[0].second == 1.0);

    const SpherePoint at{samples[17].theta, samples[17].phi};
    const auto four = knn_weights(at, samples, {4, 0.1});
    REQUIRE(four.size() == 4);
    CHECK(four[0].first == 17);
    for (const auto& w : four) CHECK(w.second <= four[0].second);

    const std::vector<SphereSample> pair = {{kPi / 2, 0.0, {1, 1, 1}}, {kPi / 2, kPi, {3, 3, 3}}, {0.0, 0.0, {9, 9, 9}}};
    const auto half = knn_weights({kPi / 2, kPi / 2}, pair, {2, 0.5});
    REQUIRE(half.size() == 2);
    CHECK(half[0].second == doctest::Approx(0.5));
    CHECK(half[1].second == doctest::Approx(0.5));

    for (int trial = 0; trial < 50; ++trial) {
        const SpherePoint p{std::acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * kPi)};
        double sum = 0.0;
        for (const auto& w : knn_weights(p, samples, {8, 0.1})) {
            CHECK(w.second >= 0.0);
            sum += w.second;
        }
        CHECK(std::fabs(sum - 1.0) < 1e-12);
    }
    CHECK(error_code_of([&] { knn_weights(q, pair, {4, 0.1}); }) != 0);
}

TEST_CASE("interpolation: constant, convexity, permutation and the small-sigma limit") {
    Rng rng(12);
    auto samples = random_samples(rng, 300);
    std::vector<SphereSample> constant = samples;
    for (auto& s : constant) s.value = {0.25, 0.5, 0.75};
    const SpherePoint q{0.8, 4.0};
    const Rgb c = interpolate_on_sphere(q, constant, {8, 0.1});
    for (std::size_t ch = 0; ch < 3; ++ch) CHECK(c[ch] == doctest::Approx(constant[0].value[ch]).epsilon(1e-14));

    for (int trial = 0; trial < 30; ++trial) {
        const SpherePoint p{std::acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * kPi)};
        const auto nbrs = knn_weights(p, samples, {8, 0.1});
        for (double sigma : {0.01, 0.1, 1.0, 10.0}) {
            const Rgb v = interpolate_on_sphere(p, samples, {8, sigma});
            for (std::size_t ch = 0; ch < 3; ++ch) {
                double lo = INFINITY, hi = -INFINITY;
                for (const auto& n : nbrs) {
                    lo = std::min(lo, samples[n.first].value[ch]);
                    hi = std::max(hi, samples[n.first].value[ch]);
                }
                CHECK(v[ch] >= lo - 1e-15);
                CHECK(v[ch] <= hi + 1e-15);
            }
        }
        const Rgb before = interpolate_on_sphere(p, samples, {8, 0.1});
        std::vector<SphereSample> shuffled = samples;
        for (std::size_t i = shuffled.size() - 1; i > 0; --i) std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
        CHECK(interpolate_on_sphere(p, shuffled, {8, 0.1}) == before);
    }

    // Linear field in the embedding; with sigma -> 0 the query sample wins.
    std::vector<SphereSample> linear = samples;
    for (auto& s : linear) {
        const Vec3 e = embed({s.theta, s.phi});
        s.value = {e.x + 2 * e.y, e.z, 1.0 - e.x};
    }
    const SphereSample& target = linear[42];
    const Rgb v = interpolate_on_sphere({target.theta, target.phi}, linear, {8, 1e-4});
    for (std::size_t ch = 0; ch < 3; ++ch) CHECK(std::fabs(v[ch] - target.value[ch]) < 1e-9);
}
