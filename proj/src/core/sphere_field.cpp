// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphere_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "error.hpp"
#include "merl.hpp"

namespace nbk {

namespace {
constexpr double kPi = std::numbers::pi;
}

SpherePoint hd_to_sphere(double theta_h, double theta_d) {
    double phi = 4.0 * theta_d;
    if (phi >= 2.0 * kPi) phi -= 2.0 * kPi;
    return {2.0 * theta_h, phi};
}

RusinCoords sphere_to_hd(const SpherePoint& p, double alpha) {
    RusinCoords c;
    c.theta_h = std::clamp(p.theta / 2.0, 0.0, kPi / 2);
    c.theta_d = std::clamp(p.phi / 4.0, 0.0, kPi / 2);
    c.phi_d = alpha;
    return c;
}

std::vector<double> slice_alphas(std::size_t count) {
    if (count == 0) fail(ErrorCode::Config, "slice count must be at least 1");
    std::vector<double> out(count);
    for (std::size_t s = 0; s < count; ++s) out[s] = (static_cast<double>(s) + 0.5) * kPi / static_cast<double>(count);
    return out;
}

std::vector<RusinCoords> slice_grid_positions(double alpha) {
    if (!(alpha >= 0.0 && alpha < kPi)) fail(ErrorCode::Domain, "slice position must lie in [0, pi)");
    std::vector<RusinCoords> out;
    out.reserve(merl::kThetaH * merl::kThetaD);
    for (std::size_t ih = 0; ih < merl::kThetaH; ++ih) {
        for (std::size_t id = 0; id < merl::kThetaD; ++id) {
            RusinCoords c = merl::cell_center(ih, id, 0);
            c.phi_d = alpha;
            out.push_back(c);
        }
    }
    return out;
}

std::vector<SphereSample> slice_to_sphere(const BrdfEval& brdf_eval, const SliceSpec& spec,
                                          std::span<const RusinCoords> grid_positions) {
    if (grid_positions.empty()) fail(ErrorCode::Domain, "slice_to_sphere: empty grid");
    std::vector<SphereSample> out;
    out.reserve(grid_positions.size());
    for (RusinCoords c : grid_positions) {
        c.phi_d = spec.alpha;
        const auto v = brdf_eval(c);
        if (!v) continue;
        const SpherePoint p = hd_to_sphere(c.theta_h, c.theta_d);
        out.push_back({p.theta, p.phi, *v});
    }
    if (out.empty()) fail(ErrorCode::Domain, "slice_to_sphere: every grid position is masked");
    return out;
}

double chord_distance(const SpherePoint& p, const SpherePoint& q) {
    const double inner = std::sin(p.theta) * std::sin(q.theta) * std::cos(p.phi - q.phi) +
                         std::cos(p.theta) * std::cos(q.theta);
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * inner));
}

std::vector<std::pair<std::size_t, double>> knn_weights(const SpherePoint& p, std::span<const SphereSample> samples,
                                                        const InterpConfig& cfg) {
    if (cfg.k < 1) fail(ErrorCode::Config, "kNN needs k >= 1");
    if (!(cfg.sigma > 0.0)) fail(ErrorCode::Config, "kNN Gaussian width must be positive");
    if (cfg.k > samples.size()) {
        fail(ErrorCode::Domain, "kNN: k = " + std::to_string(cfg.k) + " exceeds sample count " +
                                    std::to_string(samples.size()));
    }
    std::vector<double> dist(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) dist[i] = chord_distance(p, {samples[i].theta, samples[i].phi});

    auto key = [&](std::size_t i) {
        const auto& s = samples[i];
        return std::tie(dist[i], s.theta, s.phi, s.value[0], s.value[1], s.value[2]);
    };
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cfg.k), order.end(),
                      [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

    // Shifting by the nearest distance leaves the normalised weights
    // unchanged and keeps them representable for very small sigma.
    const double d0 = dist[order[0]];
    const double denom = 2.0 * cfg.sigma * cfg.sigma;
    std::vector<std::pair<std::size_t, double>> out(cfg.k);
    double total = 0.0;
    for (std::size_t j = 0; j < cfg.k; ++j) {
        const double d = dist[order[j]];
        const double w = std::exp(-(d * d - d0 * d0) / denom);
        out[j] = {order[j], w};
        total += w;
    }
    for (auto& [idx, w] : out) w /= total;
    return out;
}

Rgb interpolate_on_sphere(const SpherePoint& p, std::span<const SphereSample> samples, const InterpConfig& cfg) {
    Rgb out{0.0, 0.0, 0.0};
    for (const auto& [idx, w] : knn_weights(p, samples, cfg)) {
        for (std::size_t c = 0; c < 3; ++c) out[c] += w * samples[idx].value[c];
    }
    return out;
}

}  // namespace nbk
