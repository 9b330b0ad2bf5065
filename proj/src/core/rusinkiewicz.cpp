// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "rusinkiewicz.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace nbk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleSlack = 1e-12;

double wrap_two_pi(double a) {
    if (a < 0.0) a += 2.0 * kPi;
    if (a >= 2.0 * kPi) a -= 2.0 * kPi;
    return a;
}

void check_direction(const Vec3& v, const char* what) {
    const double len = length(v);
    if (!std::isfinite(len) || std::fabs(len - 1.0) > 1e-6) {
        std::ostringstream os;
        os << what << " is not unit length (|v| = " << len << ")";
        fail(ErrorCode::Domain, os.str());
    }
    if (v.z < -1e-12) fail(ErrorCode::Domain, std::string(what) + " lies below the surface");
}

}  // namespace

Vec3 rotate_z(const Vec3& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

Vec3 rotate_y(const Vec3& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x + s * v.z, v.y, -s * v.x + c * v.z};
}

double fold_phi_d(double phi_d) {
    return phi_d >= kPi ? phi_d - kPi : phi_d;
}

void validate_coords(const RusinCoords& c) {
    auto bad = [](double v, double lo, double hi) { return !std::isfinite(v) || v < lo - kAngleSlack || v > hi + kAngleSlack; };
    if (bad(c.theta_h, 0.0, kPi / 2)) fail(ErrorCode::Domain, "theta_h outside [0, pi/2]: " + std::to_string(c.theta_h));
    if (bad(c.theta_d, 0.0, kPi / 2)) fail(ErrorCode::Domain, "theta_d outside [0, pi/2]: " + std::to_string(c.theta_d));
    if (!std::isfinite(c.phi_d) || c.phi_d < -kAngleSlack || c.phi_d >= 2.0 * kPi) {
        fail(ErrorCode::Domain, "phi_d outside [0, 2pi): " + std::to_string(c.phi_d));
    }
    if (!std::isfinite(c.phi_h)) fail(ErrorCode::Domain, "phi_h is not finite");
}

HalfDiff io_to_hd(const Vec3& wi, const Vec3& wo) {
    check_direction(wi, "incoming direction");
    check_direction(wo, "outgoing direction");
    const Vec3 sum = wi + wo;
    if (length(sum) < 1e-12) fail(ErrorCode::Domain, "degenerate direction pair: incoming = -outgoing, half vector undefined");

    HalfDiff out;
    const Vec3 h = normalize(sum);
    RusinCoords& c = out.coords;
    c.theta_h = std::acos(std::clamp(h.z, -1.0, 1.0));
    c.phi_h = wrap_two_pi(std::atan2(h.y, h.x));

    const Vec3 d = rotate_y(rotate_z(wi, -c.phi_h), -c.theta_h);
    c.theta_d = std::acos(std::clamp(d.z, -1.0, 1.0));
    c.phi_d = wrap_two_pi(std::atan2(d.y, d.x));
    c.theta_h = std::min(c.theta_h, kPi / 2);
    c.theta_d = std::min(c.theta_d, kPi / 2);

    out.dirs = {h, d};
    return out;
}

InOut hd_to_io(const RusinCoords& c) {
    validate_coords(c);
    const double st = std::sin(c.theta_d);
    const Vec3 d{st * std::cos(c.phi_d), st * std::sin(c.phi_d), std::cos(c.theta_d)};
    const double sh = std::sin(c.theta_h);
    const Vec3 h{sh * std::cos(c.phi_h), sh * std::sin(c.phi_h), std::cos(c.theta_h)};
    const Vec3 wi = rotate_z(rotate_y(d, c.theta_h), c.phi_h);
    const Vec3 wo = h * (2.0 * dot(wi, h)) - wi;
    return {wi, wo};
}

DirectionPair canonical_hd(const RusinCoords& c) {
    const double pd = fold_phi_d(c.phi_d);
    const double st = std::sin(c.theta_d);
    return {Vec3{std::sin(c.theta_h), 0.0, std::cos(c.theta_h)},
            Vec3{st * std::cos(pd), st * std::sin(pd), std::cos(c.theta_d)}};
}

}  // namespace nbk
