// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"
#include "parallel.hpp"
#include "rusinkiewicz.hpp"

namespace nbk {

Image::Image(std::size_t w, std::size_t h, const Rgb& fill) : width(w), height(h), pixels(3 * w * h) {
    if (w == 0 || h == 0) fail(ErrorCode::Domain, "image dimensions must be at least 1");
    for (std::size_t i = 0; i < w * h; ++i) {
        for (std::size_t c = 0; c < 3; ++c) pixels[3 * i + c] = fill[c];
    }
}

void SceneSpec::validate() const {
    if (std::fabs(length(light_dir) - 1.0) > 1e-9) fail(ErrorCode::Domain, "light direction must be unit length");
    for (double v : intensity) {
        if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::Domain, "light intensity must be finite and non-negative");
    }
    if (!(gamma > 0.0)) fail(ErrorCode::Domain, "gamma must be positive");
}

PairEval merl_pair_eval(const MerlBrdf& brdf) {
    return [&brdf](const Vec3& wi, const Vec3& wo) {
        const LookupResult r = lookup(brdf, io_to_hd(wi, wo).coords);
        return r.valid ? r.rgb : Rgb{0.0, 0.0, 0.0};
    };
}

PairEval nbrdf_pair_eval(const NbrdfWeights& w) {
    return [&w](const Vec3& wi, const Vec3& wo) {
        // Isotropy: the network is queried in the canonical phi_h = 0 frame.
        return nbrdf_eval(w, io_to_hd(wi, wo).coords);
    };
}

namespace {

// Orthonormal tangent frame around n (Duff et al. construction).
void tangent_frame(const Vec3& n, Vec3& t, Vec3& b) {
    const double sign = std::copysign(1.0, n.z);
    const double a = -1.0 / (sign + n.z);
    const double c = n.x * n.y * a;
    t = Vec3{1.0 + sign * n.x * n.x * a, sign * c, -sign * n.x};
    b = Vec3{c, sign + n.y * n.y * a, -n.y};
}

Rgb shade_pixel(const PairEval& brdf, const SceneSpec& scene, std::size_t width, std::size_t height, std::size_t x,
                std::size_t y) {
    const double px = 2.0 * (static_cast<double>(x) + 0.5) / static_cast<double>(width) - 1.0;
    const double py = 1.0 - 2.0 * (static_cast<double>(y) + 0.5) / static_cast<double>(height);
    const double r2 = px * px + py * py;
    if (r2 >= 1.0) return scene.background;
    const Vec3 n{px, py, std::sqrt(1.0 - r2)};
    const double cos_i = dot(n, scene.light_dir);
    if (cos_i <= 0.0) return {0.0, 0.0, 0.0};
    Vec3 t, b;
    tangent_frame(n, t, b);
    const Vec3 view{0.0, 0.0, 1.0};
    const Vec3 wi = normalize(Vec3{dot(scene.light_dir, t), dot(scene.light_dir, b), dot(scene.light_dir, n)});
    const Vec3 wo = normalize(Vec3{dot(view, t), dot(view, b), dot(view, n)});
    Rgb f;
    try {
        f = brdf(wi, wo);
    } catch (const Error& e) {
        fail(e.code(), "BRDF evaluation failed at pixel (" + std::to_string(x) + ", " + std::to_string(y) + "): " + e.what());
    }
    Rgb out;
    for (std::size_t c = 0; c < 3; ++c) {
        const double radiance = std::max(0.0, f[c] * scene.intensity[c] * cos_i);
        out[c] = std::min(1.0, std::pow(radiance, 1.0 / scene.gamma));
    }
    return out;
}

}  // namespace

Image render_sphere_region(const PairEval& brdf, const SceneSpec& scene, std::size_t width, std::size_t height,
                           std::size_t x0, std::size_t y0, std::size_t rw, std::size_t rh, std::size_t workers) {
    scene.validate();
    if (width == 0 || height == 0) fail(ErrorCode::Domain, "render dimensions must be at least 1");
    if (x0 + rw > width || y0 + rh > height) fail(ErrorCode::Domain, "render region exceeds the image");
    Image img(rw, rh);
    parallel_for(rh, workers, [&](std::size_t ry) {
        for (std::size_t rx = 0; rx < rw; ++rx) {
            const Rgb v = shade_pixel(brdf, scene, width, height, x0 + rx, y0 + ry);
            for (std::size_t c = 0; c < 3; ++c) img.at(rx, ry, c) = v[c];
        }
    });
    return img;
}

Image render_sphere(const PairEval& brdf, const SceneSpec& scene, std::size_t width, std::size_t height,
                    std::size_t workers) {
    return render_sphere_region(brdf, scene, width, height, 0, 0, width, height, workers);
}

Image side_by_side(const std::vector<const Image*>& images) {
    if (images.empty()) fail(ErrorCode::Domain, "side_by_side needs at least one image");
    std::size_t total = 0;
    for (const Image* im : images) {
        if (im->height != images.front()->height) fail(ErrorCode::Shape, "side_by_side images must share a height");
        total += im->width;
    }
    Image out(total, images.front()->height);
    std::size_t x0 = 0;
    for (const Image* im : images) {
        for (std::size_t y = 0; y < im->height; ++y) {
            for (std::size_t x = 0; x < im->width; ++x) {
                for (std::size_t c = 0; c < 3; ++c) out.at(x0 + x, y, c) = im->at(x, y, c);
            }
        }
        x0 += im->width;
    }
    return out;
}

}  // namespace nbk
