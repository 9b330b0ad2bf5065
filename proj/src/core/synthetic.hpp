// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "merl.hpp"
#include "render.hpp"

namespace nbk {

/// Normalised Blinn-Phong lobe on the half angle:
/// kd / pi + ks (e + 8) / (8 pi) cos^e(theta_h). A zero ks gives a
/// Lambertian material.
struct PhongParams {
    Rgb kd{0.5, 0.5, 0.5};
    Rgb ks{0.0, 0.0, 0.0};
    double exponent = 1.0;

    void validate() const;
};

Rgb phong_value(const PhongParams& p, double theta_h);

/// Exact closed-form BRDF on a direction pair, for oracle renders.
PairEval phong_pair_eval(const PhongParams& p);

/// Tabulates the lobe at MERL cell centres. Cells whose centre direction
/// pair leaves the upper hemisphere are masked, as in measured data.
MerlBrdf synthesize_phong(const std::string& name, const PhongParams& p);

/// Parameters of a deterministic family of `count` materials whose lobes
/// range from purely diffuse to sharply specular.
std::vector<PhongParams> synthetic_family(std::size_t count, std::uint64_t seed);

}  // namespace nbk
