// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"
#include "rng.hpp"
#include "rusinkiewicz.hpp"

namespace nbk {

void PhongParams::validate() const {
    for (std::size_t c = 0; c < 3; ++c) {
        if (!(kd[c] >= 0.0) || !(ks[c] >= 0.0) || !std::isfinite(kd[c]) || !std::isfinite(ks[c])) {
            fail(ErrorCode::Domain, "Phong albedos must be finite and non-negative");
        }
    }
    if (!(exponent >= 0.0) || !std::isfinite(exponent)) fail(ErrorCode::Domain, "Phong exponent must be finite and >= 0");
}

Rgb phong_value(const PhongParams& p, double theta_h) {
    const double lobe = (p.exponent + 8.0) / (8.0 * std::numbers::pi) * std::pow(std::max(0.0, std::cos(theta_h)), p.exponent);
    Rgb out;
    for (std::size_t c = 0; c < 3; ++c) out[c] = p.kd[c] / std::numbers::pi + p.ks[c] * lobe;
    return out;
}

PairEval phong_pair_eval(const PhongParams& p) {
    p.validate();
    return [p](const Vec3& wi, const Vec3& wo) {
        const Vec3 h = normalize(wi + wo);
        return phong_value(p, std::acos(std::clamp(h.z, -1.0, 1.0)));
    };
}

MerlBrdf synthesize_phong(const std::string& name, const PhongParams& p) {
    p.validate();
    std::vector<double> linear(3 * merl::kCells);
    std::vector<std::uint8_t> mask(merl::kCells, 0);
    for (std::size_t cell = 0; cell < merl::kCells; ++cell) {
        const RusinCoords c = merl::cell_center(cell);
        const InOut io = hd_to_io(c);
        if (io.wi.z <= 0.0 || io.wo.z <= 0.0) {
            mask[cell] = 1;
            for (std::size_t ch = 0; ch < 3; ++ch) linear[ch * merl::kCells + cell] = -1.0;
            continue;
        }
        const Rgb v = phong_value(p, c.theta_h);
        for (std::size_t ch = 0; ch < 3; ++ch) linear[ch * merl::kCells + cell] = v[ch];
    }
    return MerlBrdf::from_linear(name, std::move(linear), std::move(mask));
}

std::vector<PhongParams> synthetic_family(std::size_t count, std::uint64_t seed) {
    static constexpr double kExponents[] = {0.0, 8.0, 20.0, 50.0, 100.0, 200.0};
    std::vector<PhongParams> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(seed, "synthetic", i);
        PhongParams p;
        const double e = kExponents[i % std::size(kExponents)];
        for (std::size_t c = 0; c < 3; ++c) p.kd[c] = rng.uniform(0.05, 0.6);
        const double ks = e == 0.0 ? 0.0 : rng.uniform(0.1, 0.6);
        const double tint = rng.uniform(0.0, 0.3);
        for (std::size_t c = 0; c < 3; ++c) p.ks[c] = ks * (1.0 - tint + tint * p.kd[c] / 0.6);
        p.exponent = e == 0.0 ? 1.0 : e * rng.uniform(0.8, 1.25);
        out.push_back(p);
    }
    return out;
}

}  // namespace nbk
