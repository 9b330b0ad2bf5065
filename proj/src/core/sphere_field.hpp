// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rusinkiewicz.hpp"
#include "vec3.hpp"

namespace nbk {

struct SpherePoint {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2pi)
};

struct SphereSample {
    double theta = 0.0;
    double phi = 0.0;
    Rgb value{};
};

/// One slice of the isotropic BRDF at a fixed third coordinate (phi_d).
/// The (theta_h, theta_d) square maps onto the sphere by theta = 2 theta_h,
/// phi = 4 theta_d.
struct SliceSpec {
    double alpha = 0.0;
};

struct InterpConfig {
    std::size_t k = 8;
    double sigma = 0.1;
};

/// Returns nullopt for configurations that carry no data (masked cells).
using BrdfEval = std::function<std::optional<Rgb>(const RusinCoords&)>;

SpherePoint hd_to_sphere(double theta_h, double theta_d);
RusinCoords sphere_to_hd(const SpherePoint& p, double alpha);

/// `count` slice positions at the centres of equal sub-ranges of [0, pi).
std::vector<double> slice_alphas(std::size_t count);

/// Cell-centre (theta_h, theta_d) positions of the tabulated grid, with the
/// third coordinate set to alpha.
std::vector<RusinCoords> slice_grid_positions(double alpha);

std::vector<SphereSample> slice_to_sphere(const BrdfEval& brdf_eval, const SliceSpec& spec,
                                          std::span<const RusinCoords> grid_positions);

double chord_distance(const SpherePoint& p, const SpherePoint& q);

/// The k nearest samples by chord distance with normalised Gaussian weights,
/// ordered by increasing distance. Ties are broken by sample content, never
/// by list position, so the result does not depend on sample order.
std::vector<std::pair<std::size_t, double>> knn_weights(const SpherePoint& p, std::span<const SphereSample> samples,
                                                        const InterpConfig& cfg);

Rgb interpolate_on_sphere(const SpherePoint& p, std::span<const SphereSample> samples, const InterpConfig& cfg);

}  // namespace nbk
