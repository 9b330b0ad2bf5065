// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "harmonics.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "csv.hpp"
#include "error.hpp"

namespace nbk {

namespace {

constexpr double kPi = std::numbers::pi;

void check_band_limit(int band_limit) {
    if (band_limit < 0 || band_limit > 128) fail(ErrorCode::Config, "band limit must lie in [0, 128]");
}

}  // namespace

std::vector<double> sh_legendre_table(int band_limit, double theta) {
    check_band_limit(band_limit);
    const double x = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<double> p(sh_count(band_limit), 0.0);
    double pmm = std::sqrt(1.0 / (4.0 * kPi));
    for (int m = 0; m <= band_limit; ++m) {
        if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
        p[sh_index(m, m)] = pmm;
        if (m + 1 > band_limit) continue;
        double prev2 = pmm;
        double prev1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
        p[sh_index(m + 1, m)] = prev1;
        for (int l = m + 2; l <= band_limit; ++l) {
            const double ll = static_cast<double>(l), mm = static_cast<double>(m);
            const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
            const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
            const double cur = a * (x * prev1 - b * prev2);
            p[sh_index(l, m)] = cur;
            prev2 = prev1;
            prev1 = cur;
        }
    }
    return p;
}

Complex sh_basis(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) {
        fail(ErrorCode::Domain, "sh_basis: need 0 <= |m| <= l, got l = " + std::to_string(l) + ", m = " + std::to_string(m));
    }
    const int am = std::abs(m);
    const double p = sh_legendre_table(l, theta)[sh_index(l, am)];
    const Complex y = std::polar(p, am * phi);
    if (m >= 0) return y;
    return (am % 2 ? -1.0 : 1.0) * std::conj(y);
}

QuadratureGrid make_quadrature_grid(std::size_t n_theta, std::size_t n_phi) {
    if (n_theta == 0 || n_phi == 0) fail(ErrorCode::Config, "quadrature grid needs at least one node per axis");
    QuadratureGrid g;
    g.theta.resize(n_theta);
    g.weight.resize(n_theta);
    const double dphi = 2.0 * kPi / static_cast<double>(n_phi);
    const std::size_t n = n_theta;
    // Gauss-Legendre nodes by Newton iteration on P_n.
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            if (n == 1) p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        }
        g.theta[i] = std::acos(x);
        g.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp) * dphi;
    }
    g.phi.resize(n_phi);
    for (std::size_t j = 0; j < n_phi; ++j) g.phi[j] = dphi * static_cast<double>(j);
    return g;
}

QuadratureGrid make_quadrature_grid(int band_limit) {
    check_band_limit(band_limit);
    const auto l = static_cast<std::size_t>(band_limit);
    return make_quadrature_grid(l + 1, 2 * l + 2);
}

namespace {

template <typename Value>
ShSpectrum transform_impl(std::span<const std::array<Value, 3>> node_values, const QuadratureGrid& grid, int band_limit) {
    check_band_limit(band_limit);
    if (node_values.size() != grid.size()) fail(ErrorCode::Shape, "forward_transform: node value count does not match the grid");
    for (std::size_t n = 0; n < node_values.size(); ++n) {
        for (std::size_t c = 0; c < 3; ++c) {
            if (!std::isfinite(std::abs(node_values[n][c]))) {
                const SpherePoint p = grid.node(n);
                fail(ErrorCode::Numeric, "forward_transform: non-finite field value at node " + std::to_string(n) +
                                             " (theta = " + std::to_string(p.theta) + ", phi = " + std::to_string(p.phi) + ")");
            }
        }
    }
    ShSpectrum out;
    out.band_limit = band_limit;
    const std::size_t count = sh_count(band_limit);
    for (auto& c : out.coeffs) c.assign(count, Complex(0.0, 0.0));

    const std::size_t n_phi = grid.phi.size();
    for (std::size_t i = 0; i < grid.theta.size(); ++i) {
        const std::vector<double> p = sh_legendre_table(band_limit, grid.theta[i]);
        const double w = grid.weight[i];
        for (std::size_t j = 0; j < n_phi; ++j) {
            const auto& f = node_values[i * n_phi + j];
            for (int m = 0; m <= band_limit; ++m) {
                const Complex e = std::polar(1.0, m * grid.phi[j]);
                const double sign = m % 2 ? -1.0 : 1.0;
                for (int l = m; l <= band_limit; ++l) {
                    const double wp = w * p[sh_index(l, m)];
                    // conj(Y_lm) = p e^{-i m phi}; conj(Y_{l,-m}) = (-1)^m p e^{i m phi}
                    const Complex pos = wp * std::conj(e);
                    const Complex neg = sign * wp * e;
                    for (std::size_t c = 0; c < 3; ++c) {
                        out.coeffs[c][sh_index(l, m)] += f[c] * pos;
                        if (m > 0) out.coeffs[c][sh_index(l, -m)] += f[c] * neg;
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

ShSpectrum forward_transform_nodes(std::span<const Rgb> node_values, const QuadratureGrid& grid, int band_limit) {
    return transform_impl<double>(node_values, grid, band_limit);
}

ShSpectrum forward_transform_complex(std::span<const ComplexRgb> node_values, const QuadratureGrid& grid, int band_limit) {
    return transform_impl<Complex>(node_values, grid, band_limit);
}

ShSpectrum forward_transform(const SphereFunction& field, const QuadratureGrid& grid, int band_limit) {
    std::vector<Rgb> values(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const SpherePoint p = grid.node(n);
        values[n] = field(p.theta, p.phi);
    }
    return forward_transform_nodes(values, grid, band_limit);
}

TransformMatrix transform_matrix(const QuadratureGrid& grid, int band_limit) {
    check_band_limit(band_limit);
    const std::size_t count = sh_count(band_limit);
    const std::size_t nodes = grid.size();
    const std::size_t n_phi = grid.phi.size();
    TransformMatrix t{Tensor({count, nodes}, 0.0), Tensor({count, nodes}, 0.0)};
    for (std::size_t i = 0; i < grid.theta.size(); ++i) {
        const std::vector<double> p = sh_legendre_table(band_limit, grid.theta[i]);
        for (std::size_t j = 0; j < n_phi; ++j) {
            const std::size_t node = i * n_phi + j;
            for (int l = 0; l <= band_limit; ++l) {
                for (int m = -l; m <= l; ++m) {
                    const int am = std::abs(m);
                    Complex y = std::polar(p[sh_index(l, am)], am * grid.phi[j]);
                    if (m < 0) y = (am % 2 ? -1.0 : 1.0) * std::conj(y);
                    const Complex wc = grid.weight[i] * std::conj(y);
                    t.re.at(sh_index(l, m), node) = wc.real();
                    t.im.at(sh_index(l, m), node) = wc.imag();
                }
            }
        }
    }
    return t;
}

std::vector<ShSpectrum> brdf_frequency_coefficients(const BrdfEval& brdf_eval, const ShConfig& cfg, EvalMode mode) {
    const QuadratureGrid grid = make_quadrature_grid(cfg.band_limit);
    const std::vector<double> alphas = slice_alphas(cfg.slices);
    std::vector<ShSpectrum> out;
    out.reserve(alphas.size());
    std::vector<Rgb> values(grid.size());
    for (std::size_t s = 0; s < alphas.size(); ++s) {
        const double alpha = alphas[s];
        if (mode == EvalMode::Tabulated) {
            const auto positions = slice_grid_positions(alpha);
            const auto samples = slice_to_sphere(brdf_eval, SliceSpec{alpha}, positions);
            for (std::size_t n = 0; n < grid.size(); ++n) values[n] = interpolate_on_sphere(grid.node(n), samples, cfg.interp);
        } else {
            for (std::size_t n = 0; n < grid.size(); ++n) {
                const auto v = brdf_eval(sphere_to_hd(grid.node(n), alpha));
                values[n] = v.value_or(Rgb{0.0, 0.0, 0.0});
            }
        }
        ShSpectrum spec = forward_transform_nodes(values, grid, cfg.band_limit);
        spec.slice_id = s;
        out.push_back(std::move(spec));
    }
    return out;
}

double frequency_loss(std::span<const ShSpectrum> a, std::span<const ShSpectrum> b) {
    if (a.size() != b.size()) fail(ErrorCode::Shape, "frequency_loss: slice counts differ");
    if (a.empty()) fail(ErrorCode::Shape, "frequency_loss: no spectra");
    double total = 0.0;
    std::size_t terms = 0;
    for (std::size_t s = 0; s < a.size(); ++s) {
        if (a[s].band_limit != b[s].band_limit) {
            fail(ErrorCode::Shape, "frequency_loss: band limits differ (" + std::to_string(a[s].band_limit) + " vs " +
                                       std::to_string(b[s].band_limit) + ")");
        }
        for (std::size_t c = 0; c < 3; ++c) {
            const auto& ca = a[s].coeffs[c];
            const auto& cb = b[s].coeffs[c];
            for (std::size_t k = 0; k < ca.size(); ++k) total += std::norm(ca[k] - cb[k]);
            terms += ca.size();
        }
    }
    return total / static_cast<double>(terms);
}

std::array<std::vector<double>, 3> band_power(const ShSpectrum& s) {
    std::array<std::vector<double>, 3> out;
    for (std::size_t c = 0; c < 3; ++c) {
        out[c].assign(static_cast<std::size_t>(s.band_limit + 1), 0.0);
        for (int l = 0; l <= s.band_limit; ++l) {
            for (int m = -l; m <= l; ++m) out[c][static_cast<std::size_t>(l)] += std::norm(s.coeffs[c][sh_index(l, m)]);
        }
    }
    return out;
}

void write_spectra_csv(std::ostream& os, std::span<const ShSpectrum> spectra, bool header) {
    if (header) os << "slice,channel,l,m,re,im\n";
    for (const auto& s : spectra) {
        for (std::size_t c = 0; c < 3; ++c) {
            for (int l = 0; l <= s.band_limit; ++l) {
                for (int m = -l; m <= l; ++m) {
                    const Complex v = s.coeffs[c][sh_index(l, m)];
                    os << s.slice_id << ',' << c << ',' << l << ',' << m << ',' << fmt_real(v.real()) << ','
                       << fmt_real(v.imag()) << '\n';
                }
            }
        }
    }
}

}  // namespace nbk
