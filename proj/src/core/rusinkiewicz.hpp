// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "vec3.hpp"

namespace nbk {

/// Half/difference angles. phi_d keeps its full [0, 2pi) range so that the
/// direction pair can be rebuilt exactly; isotropic lookups fold it into
/// [0, pi) by reciprocity.
struct RusinCoords {
    double theta_h = 0.0;
    double theta_d = 0.0;
    double phi_d = 0.0;
    double phi_h = 0.0;
};

struct DirectionPair {
    Vec3 h;
    Vec3 d;
};

struct HalfDiff {
    DirectionPair dirs;
    RusinCoords coords;
};

struct InOut {
    Vec3 wi;
    Vec3 wo;
};

/// Local shading frame has the surface normal along +z. Both directions must
/// be unit length (1e-6) and in the closed upper hemisphere.
HalfDiff io_to_hd(const Vec3& wi, const Vec3& wo);
InOut hd_to_io(const RusinCoords& c);

/// Throws a domain error when the angles fall outside their ranges.
void validate_coords(const RusinCoords& c);

/// phi_d folded into [0, pi).
double fold_phi_d(double phi_d);

/// Isotropic network input: H with phi_h = 0 and D with phi_d folded, so any
/// direction pair describing the same isotropic configuration maps to the
/// same six reals.
DirectionPair canonical_hd(const RusinCoords& c);

Vec3 rotate_z(const Vec3& v, double angle);
Vec3 rotate_y(const Vec3& v, double angle);

}  // namespace nbk
