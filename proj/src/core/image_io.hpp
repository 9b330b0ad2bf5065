// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "render.hpp"

namespace nbk {

/// 8-bit quantisation used for PNG output: round(255 v) after clamping.
std::vector<std::uint8_t> quantize_rgb8(const Image& img);

void write_png(const std::filesystem::path& path, const Image& img);
/// Reads an 8-bit RGB PNG back into [0, 1] channels.
Image read_png(const std::filesystem::path& path);

}  // namespace nbk
