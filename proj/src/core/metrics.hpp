// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "render.hpp"

namespace nbk {

/// Root mean square difference over pixels and channels.
double rmse(const Image& a, const Image& b);

/// 10 log10(peak^2 / rmse^2); +infinity for identical images.
double psnr(const Image& a, const Image& b, double peak = 1.0);

/// Mean SSIM over every fully covered 11 x 11 Gaussian window (sigma 1.5)
/// of the luminance (0.299 R + 0.587 G + 0.114 B), with C1 = (0.01 p)^2,
/// C2 = (0.03 p)^2 and C3 = C2 / 2.
double ssim(const Image& a, const Image& b, double peak = 1.0);

}  // namespace nbk
