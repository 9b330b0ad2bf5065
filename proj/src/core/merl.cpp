// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "merl.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "error.hpp"

static_assert(std::endian::native == std::endian::little, "MERL I/O assumes a little-endian host");

namespace nbk {

namespace merl {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;
}

std::size_t theta_h_index(double theta_h) {
    if (theta_h <= 0.0) return 0;
    const double idx = std::sqrt(theta_h / kHalfPi) * static_cast<double>(kThetaH);
    return std::min<std::size_t>(static_cast<std::size_t>(std::floor(idx)), kThetaH - 1);
}

std::size_t theta_d_index(double theta_d) {
    if (theta_d <= 0.0) return 0;
    const double idx = theta_d / kHalfPi * static_cast<double>(kThetaD);
    return std::min<std::size_t>(static_cast<std::size_t>(std::floor(idx)), kThetaD - 1);
}

std::size_t phi_d_index(double phi_d) {
    phi_d = fold_phi_d(phi_d);
    if (phi_d <= 0.0) return 0;
    const double idx = phi_d / std::numbers::pi * static_cast<double>(kPhiD);
    return std::min<std::size_t>(static_cast<std::size_t>(std::floor(idx)), kPhiD - 1);
}

RusinCoords cell_center(std::size_t ih, std::size_t id, std::size_t ip) {
    const double u = (static_cast<double>(ih) + 0.5) / static_cast<double>(kThetaH);
    RusinCoords c;
    c.theta_h = u * u * kHalfPi;
    c.theta_d = (static_cast<double>(id) + 0.5) / static_cast<double>(kThetaD) * kHalfPi;
    c.phi_d = (static_cast<double>(ip) + 0.5) / static_cast<double>(kPhiD) * std::numbers::pi;
    return c;
}

RusinCoords cell_center(std::size_t cell) {
    const std::size_t ip = cell % kPhiD;
    const std::size_t id = (cell / kPhiD) % kThetaD;
    const std::size_t ih = cell / (kPhiD * kThetaD);
    return cell_center(ih, id, ip);
}

}  // namespace merl

void MerlBrdf::finish() {
    valid_cells_.clear();
    for (std::size_t cell = 0; cell < mask_.size(); ++cell) {
        if (!mask_[cell]) valid_cells_.push_back(static_cast<std::uint32_t>(cell));
    }
    median_.reset();
}

MerlBrdf MerlBrdf::from_linear(std::string name, std::vector<double> linear, std::vector<std::uint8_t> mask) {
    if (linear.size() != 3 * merl::kCells) fail(ErrorCode::Shape, "MERL grid needs 3 x 90 x 90 x 180 values");
    if (mask.size() != merl::kCells) fail(ErrorCode::Shape, "MERL mask needs 90 x 90 x 180 entries");
    for (std::size_t i = 0; i < linear.size(); ++i) {
        if (!std::isfinite(linear[i])) fail(ErrorCode::Domain, "MERL grid entry " + std::to_string(i) + " is not finite");
        if (linear[i] < 0.0 && !mask[i % merl::kCells]) {
            fail(ErrorCode::Domain, "MERL grid entry " + std::to_string(i) + " is negative but not masked");
        }
    }
    MerlBrdf b;
    b.name_ = std::move(name);
    b.linear_ = std::move(linear);
    b.mask_ = std::move(mask);
    b.finish();
    return b;
}

Rgb MerlBrdf::median() const {
    if (median_) return *median_;
    if (valid_cells_.empty()) fail(ErrorCode::Domain, "material '" + name_ + "' has no valid cells");
    Rgb out{};
    std::vector<double> buf;
    buf.reserve(valid_cells_.size());
    for (std::size_t c = 0; c < 3; ++c) {
        buf.clear();
        for (std::size_t cell = 0; cell < merl::kCells; ++cell) {
            if (!mask_[cell]) buf.push_back(linear_[c * merl::kCells + cell]);
        }
        const std::size_t mid = buf.size() / 2;
        std::nth_element(buf.begin(), buf.begin() + mid, buf.end());
        double m = buf[mid];
        if (buf.size() % 2 == 0) {
            const double lower = *std::max_element(buf.begin(), buf.begin() + mid);
            m = 0.5 * (m + lower);
        }
        out[c] = m;
    }
    median_ = out;
    return out;
}

MerlBrdf load_merl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open MERL file " + path.string());
    std::int32_t dims[3] = {0, 0, 0};
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (in.gcount() != static_cast<std::streamsize>(sizeof(dims))) {
        fail(ErrorCode::Io, "truncated MERL header in " + path.string());
    }
    if (dims[0] != static_cast<std::int32_t>(merl::kThetaH) || dims[1] != static_cast<std::int32_t>(merl::kThetaD) ||
        dims[2] != static_cast<std::int32_t>(merl::kPhiD)) {
        fail(ErrorCode::Format, "MERL header extents (" + std::to_string(dims[0]) + ", " + std::to_string(dims[1]) +
                                    ", " + std::to_string(dims[2]) + ") in " + path.string() +
                                    ", expected (90, 90, 180)");
    }
    std::vector<double> raw(3 * merl::kCells);
    const auto bytes = static_cast<std::streamsize>(raw.size() * sizeof(double));
    in.read(reinterpret_cast<char*>(raw.data()), bytes);
    if (in.gcount() != bytes) fail(ErrorCode::Io, "truncated MERL payload in " + path.string());
    in.peek();
    if (!in.eof()) fail(ErrorCode::Format, "trailing bytes after MERL payload in " + path.string());

    MerlBrdf b;
    b.name_ = path.stem().string();
    b.linear_.resize(raw.size());
    b.mask_.assign(merl::kCells, 0);
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t cell = 0; cell < merl::kCells; ++cell) {
            const double r = raw[c * merl::kCells + cell];
            if (!std::isfinite(r)) fail(ErrorCode::Format, "non-finite MERL entry in " + path.string());
            if (r < 0.0) b.mask_[cell] = 1;
            b.linear_[c * merl::kCells + cell] = r * merl::kScale[c];
        }
    }
    b.raw_ = std::move(raw);
    b.finish();
    return b;
}

void save_merl(const MerlBrdf& brdf, const std::filesystem::path& path) {
    std::vector<double> raw;
    if (brdf.raw_payload()) {
        raw = *brdf.raw_payload();
    } else {
        raw.resize(3 * merl::kCells);
        for (std::size_t c = 0; c < 3; ++c) {
            for (std::size_t cell = 0; cell < merl::kCells; ++cell) {
                raw[c * merl::kCells + cell] = brdf.masked(cell) ? -1.0 : brdf.value(c, cell) * merl::kInvScale[c];
            }
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write MERL file " + path.string());
    const std::int32_t dims[3] = {static_cast<std::int32_t>(merl::kThetaH), static_cast<std::int32_t>(merl::kThetaD),
                                  static_cast<std::int32_t>(merl::kPhiD)};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(double)));
    if (!out) fail(ErrorCode::Io, "failed writing MERL file " + path.string());
}

LookupResult lookup(const MerlBrdf& brdf, const RusinCoords& c) {
    validate_coords(c);
    const std::size_t cell =
        merl::cell_index(merl::theta_h_index(c.theta_h), merl::theta_d_index(c.theta_d), merl::phi_d_index(c.phi_d));
    if (brdf.masked(cell)) return {};
    return {brdf.rgb(cell), true};
}

Rgb log_relative_map(const Rgb& value, const Rgb& f_ref, double eps) {
    if (!(eps > 0.0)) fail(ErrorCode::Domain, "log-relative epsilon must be positive");
    Rgb out{};
    for (std::size_t c = 0; c < 3; ++c) {
        if (value[c] < 0.0) fail(ErrorCode::Domain, "log-relative mapping of a negative reflectance");
        out[c] = std::log((value[c] + eps) / (f_ref[c] + eps));
    }
    return out;
}

Rgb inverse_log_relative_map(const Rgb& mapped, const Rgb& f_ref, double eps) {
    Rgb out{};
    for (std::size_t c = 0; c < 3; ++c) out[c] = std::max(0.0, std::exp(mapped[c]) * (f_ref[c] + eps) - eps);
    return out;
}

void log_relative_map(std::span<Rgb> values, const Rgb& f_ref, double eps) {
    for (auto& v : values) v = log_relative_map(v, f_ref, eps);
}

void inverse_log_relative_map(std::span<Rgb> values, const Rgb& f_ref, double eps) {
    for (auto& v : values) v = inverse_log_relative_map(v, f_ref, eps);
}

MerlBrdf merl_ground_truth_interp(const MerlBrdf& a, const MerlBrdf& b, double t) {
    if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::Domain, "interpolation weight outside [0, 1]");
    // The endpoints are the inputs themselves, masks included, so that an
    // edit at t = 0 or t = 1 compares against the unedited material.
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    std::vector<double> lin(3 * merl::kCells);
    std::vector<std::uint8_t> mask(merl::kCells);
    const auto la = a.linear();
    const auto lb = b.linear();
    for (std::size_t cell = 0; cell < merl::kCells; ++cell) {
        mask[cell] = (a.masked(cell) || b.masked(cell)) ? 1 : 0;
    }
    for (std::size_t i = 0; i < lin.size(); ++i) {
        lin[i] = (1.0 - t) * la[i] + t * lb[i];
    }
    return MerlBrdf::from_linear(a.name() + "_" + b.name() + "_t" + std::to_string(t), std::move(lin), std::move(mask));
}

}  // namespace nbk
