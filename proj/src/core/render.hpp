// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "merl.hpp"
#include "nbrdf.hpp"
#include "vec3.hpp"

namespace nbk {

/// RGB image with channels in [0, 1], row-major, interleaved.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> pixels;

    Image() = default;
    Image(std::size_t w, std::size_t h, const Rgb& fill = {0.0, 0.0, 0.0});

    double& at(std::size_t x, std::size_t y, std::size_t c) { return pixels[(y * width + x) * 3 + c]; }
    double at(std::size_t x, std::size_t y, std::size_t c) const { return pixels[(y * width + x) * 3 + c]; }
    bool operator==(const Image&) const = default;
};

struct SceneSpec {
    Vec3 light_dir = normalize(Vec3{1.0, 1.0, 1.0});
    Rgb intensity{1.0, 1.0, 1.0};
    Rgb background{0.0, 0.0, 0.0};
    double gamma = 2.2;

    void validate() const;
};

/// BRDF evaluated on a pair of directions in the local shading frame
/// (normal along +z).
using PairEval = std::function<Rgb(const Vec3& wi, const Vec3& wo)>;

PairEval merl_pair_eval(const MerlBrdf& brdf);
PairEval nbrdf_pair_eval(const NbrdfWeights& w);

/// Orthographic view along -z of the unit sphere lit by one directional
/// light. Pixel (x, y) looks at px = 2 (x + 0.5) / w - 1,
/// py = 1 - 2 (y + 0.5) / h.
Image render_sphere(const PairEval& brdf, const SceneSpec& scene, std::size_t width, std::size_t height,
                    std::size_t workers = 1);

/// The sub-rectangle [x0, x0 + rw) x [y0, y0 + rh) of the full render.
Image render_sphere_region(const PairEval& brdf, const SceneSpec& scene, std::size_t width, std::size_t height,
                           std::size_t x0, std::size_t y0, std::size_t rw, std::size_t rh, std::size_t workers = 1);

/// Places images left to right on a shared canvas (heights must match).
Image side_by_side(const std::vector<const Image*>& images);

}  // namespace nbk
