// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rusinkiewicz.hpp"
#include "vec3.hpp"

namespace nbk {

namespace merl {
inline constexpr std::size_t kThetaH = 90;
inline constexpr std::size_t kThetaD = 90;
inline constexpr std::size_t kPhiD = 180;
inline constexpr std::size_t kCells = kThetaH * kThetaD * kPhiD;
/// Linear value = raw * scale; the inverse multiplies by the reciprocal
/// written as an exact ratio so that 1.0 in red maps back to raw 1500.
inline constexpr std::array<double, 3> kScale = {1.0 / 1500.0, 1.15 / 1500.0, 1.66 / 1500.0};
inline constexpr std::array<double, 3> kInvScale = {1500.0 / 1.0, 1500.0 / 1.15, 1500.0 / 1.66};

std::size_t theta_h_index(double theta_h);
std::size_t theta_d_index(double theta_d);
std::size_t phi_d_index(double phi_d);
inline std::size_t cell_index(std::size_t ih, std::size_t id, std::size_t ip) {
    return (ih * kThetaD + id) * kPhiD + ip;
}
/// Angles at the centre of a cell (phi_h = 0).
RusinCoords cell_center(std::size_t ih, std::size_t id, std::size_t ip);
RusinCoords cell_center(std::size_t cell);
}  // namespace merl

struct LookupResult {
    Rgb rgb{0.0, 0.0, 0.0};
    bool valid = false;
};

/// Tabulated isotropic BRDF on the 90 x 90 x 180 grid.
///
/// Values are kept in linear radiometric units, channel-major. A cell is
/// masked when any channel was negative in the raw file; masked cells are
/// never sampled. Instances loaded from disk keep their raw payload so that
/// saving them reproduces the file byte for byte.
class MerlBrdf {
public:
    MerlBrdf() = default;
    /// `linear` is channel-major (3 * kCells); `mask` has kCells entries.
    static MerlBrdf from_linear(std::string name, std::vector<double> linear, std::vector<std::uint8_t> mask);

    const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    double value(std::size_t channel, std::size_t cell) const { return linear_[channel * merl::kCells + cell]; }
    Rgb rgb(std::size_t cell) const {
        return {linear_[cell], linear_[merl::kCells + cell], linear_[2 * merl::kCells + cell]};
    }
    bool masked(std::size_t cell) const { return mask_[cell] != 0; }
    std::size_t valid_count() const noexcept { return valid_cells_.size(); }
    /// Ascending indices of unmasked cells.
    std::span<const std::uint32_t> valid_cells() const noexcept { return valid_cells_; }

    std::span<const double> linear() const noexcept { return linear_; }
    std::span<const std::uint8_t> mask() const noexcept { return mask_; }
    const std::optional<std::vector<double>>& raw_payload() const noexcept { return raw_; }

    /// Per-channel median over unmasked cells.
    Rgb median() const;

    friend MerlBrdf load_merl(const std::filesystem::path& path);

private:
    void finish();

    std::string name_;
    std::vector<double> linear_;
    std::vector<std::uint8_t> mask_;
    std::optional<std::vector<double>> raw_;
    std::vector<std::uint32_t> valid_cells_;
    mutable std::optional<Rgb> median_;
};

MerlBrdf load_merl(const std::filesystem::path& path);
void save_merl(const MerlBrdf& brdf, const std::filesystem::path& path);

LookupResult lookup(const MerlBrdf& brdf, const RusinCoords& c);

/// Per-channel ln((f + eps) / (f_ref + eps)). Negative inputs are a domain
/// error.
Rgb log_relative_map(const Rgb& value, const Rgb& f_ref, double eps);
Rgb inverse_log_relative_map(const Rgb& mapped, const Rgb& f_ref, double eps);
void log_relative_map(std::span<Rgb> values, const Rgb& f_ref, double eps);
void inverse_log_relative_map(std::span<Rgb> values, const Rgb& f_ref, double eps);

inline constexpr double kDefaultLogEps = 1e-3;

/// Per-cell (1 - t) a + t b; cells masked in either input stay masked.
/// t = 0 and t = 1 return the corresponding input unchanged.
MerlBrdf merl_ground_truth_interp(const MerlBrdf& a, const MerlBrdf& b, double t);

}  // namespace nbk
