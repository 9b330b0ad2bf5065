// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"

namespace nbk {

namespace {

constexpr std::size_t kWindow = 11;
constexpr double kSigma = 1.5;

void check_same(const Image& a, const Image& b, const char* what) {
    if (a.width != b.width || a.height != b.height) {
        fail(ErrorCode::Shape, std::string(what) + ": image sizes differ (" + std::to_string(a.width) + "x" +
                                   std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                                   std::to_string(b.height) + ")");
    }
    if (a.pixels.empty()) fail(ErrorCode::Domain, std::string(what) + ": empty image");
}

std::array<double, kWindow> gaussian_kernel() {
    std::array<double, kWindow> k{};
    double sum = 0.0;
    for (std::size_t i = 0; i < kWindow; ++i) {
        const double d = static_cast<double>(i) - static_cast<double>(kWindow / 2);
        k[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

std::vector<double> luminance(const Image& im) {
    std::vector<double> y(im.width * im.height);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = 0.299 * im.pixels[3 * i] + 0.587 * im.pixels[3 * i + 1] + 0.114 * im.pixels[3 * i + 2];
    }
    return y;
}

// Separable Gaussian filter restricted to fully covered windows; the result
// is (w - 10) x (h - 10).
std::vector<double> filter_valid(const std::vector<double>& src, std::size_t w, std::size_t h,
                                 const std::array<double, kWindow>& k) {
    const std::size_t ow = w - kWindow + 1;
    const std::size_t oh = h - kWindow + 1;
    std::vector<double> tmp(ow * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double s = 0.0;
            for (std::size_t i = 0; i < kWindow; ++i) s += k[i] * src[y * w + x + i];
            tmp[y * ow + x] = s;
        }
    }
    std::vector<double> out(ow * oh);
    for (std::size_t y = 0; y < oh; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double s = 0.0;
            for (std::size_t i = 0; i < kWindow; ++i) s += k[i] * tmp[(y + i) * ow + x];
            out[y * ow + x] = s;
        }
    }
    return out;
}

}  // namespace

double rmse(const Image& a, const Image& b) {
    check_same(a, b, "rmse");
    double s = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = a.pixels[i] - b.pixels[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.pixels.size()));
}

double psnr(const Image& a, const Image& b, double peak) {
    if (!(peak > 0.0)) fail(ErrorCode::Domain, "psnr: peak must be positive");
    const double e = rmse(a, b);
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    // Same quantity as 10 log10(p^2 / e^2), without squaring round-off.
    return 20.0 * std::log10(peak / e);
}

double ssim(const Image& a, const Image& b, double peak) {
    check_same(a, b, "ssim");
    if (a.width < kWindow || a.height < kWindow) {
        fail(ErrorCode::Domain, "ssim: images must be at least 11 x 11 pixels");
    }
    if (!(peak > 0.0)) fail(ErrorCode::Domain, "ssim: peak must be positive");
    const auto k = gaussian_kernel();
    const std::size_t w = a.width, h = a.height;
    const std::vector<double> x = luminance(a);
    const std::vector<double> y = luminance(b);
    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, w, h, k);
    const auto my = filter_valid(y, w, h, k);
    const auto mxx = filter_valid(xx, w, h, k);
    const auto myy = filter_valid(yy, w, h, k);
    const auto mxy = filter_valid(xy, w, h, k);
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);
    // With C3 = C2 / 2 the product l * c * s collapses to the two-factor
    // form below, which is exactly 1 when both windows are identical.
    double total = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = mxx[i] - mx[i] * mx[i];
        const double vy = myy[i] - my[i] * my[i];
        const double cov = mxy[i] - mx[i] * my[i];
        const double num = (2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2);
        const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2);
        total += num / den;
    }
    return total / static_cast<double>(mx.size());
}

}  // namespace nbk
