// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nbk {

/// Shortest round-trip decimal form, locale independent.
std::string fmt_real(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column position by name; throws a format error if missing.
    std::size_t column(const std::string& name) const;
};

/// Minimal comma-separated reader: no quoting, first line is the header.
CsvTable read_csv(const std::filesystem::path& path);
double parse_real(const std::string& text);

}  // namespace nbk
