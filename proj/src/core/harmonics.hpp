// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "sphere_field.hpp"
#include "tensor.hpp"
#include "vec3.hpp"

namespace nbk {

using Complex = std::complex<double>;

/// Flat index of (l, m) in a spectrum: l^2 + l + m.
inline std::size_t sh_index(int l, int m) {
    return static_cast<std::size_t>(l * l + l + m);
}
inline std::size_t sh_count(int band_limit) {
    return static_cast<std::size_t>((band_limit + 1) * (band_limit + 1));
}

/// Orthonormal complex spherical harmonic with the Condon-Shortley phase.
Complex sh_basis(int l, int m, double theta, double phi);

/// Normalised associated Legendre values p[l][m] (m >= 0) for every l <= L,
/// flattened with sh_index(l, m). Y_lm = p_lm e^{i m phi} for m >= 0.
std::vector<double> sh_legendre_table(int band_limit, double theta);

/// Gauss-Legendre nodes in cos(theta) times uniform nodes in phi. With
/// (L + 1) x (2L + 2) nodes it integrates products of two harmonics of
/// degree <= L exactly.
struct QuadratureGrid {
    std::vector<double> theta;   // per ring
    std::vector<double> phi;     // per meridian
    std::vector<double> weight;  // per ring, already multiplied by 2pi / n_phi

    std::size_t size() const noexcept { return theta.size() * phi.size(); }
    SpherePoint node(std::size_t n) const { return {theta[n / phi.size()], phi[n % phi.size()]}; }
    double node_weight(std::size_t n) const { return weight[n / phi.size()]; }
};

QuadratureGrid make_quadrature_grid(int band_limit);
QuadratureGrid make_quadrature_grid(std::size_t n_theta, std::size_t n_phi);

struct ShSpectrum {
    int band_limit = 0;
    std::size_t slice_id = 0;
    std::array<std::vector<Complex>, 3> coeffs;  // per channel, sh_count(L) each

    bool operator==(const ShSpectrum&) const = default;
};

using SphereFunction = std::function<Rgb(double theta, double phi)>;

ShSpectrum forward_transform(const SphereFunction& field, const QuadratureGrid& grid, int band_limit);
/// Same transform from field values already evaluated at the grid nodes.
ShSpectrum forward_transform_nodes(std::span<const Rgb> node_values, const QuadratureGrid& grid, int band_limit);

/// Complex-valued fields (e.g. a single basis function); real BRDF fields use
/// the overloads above.
using ComplexRgb = std::array<Complex, 3>;
ShSpectrum forward_transform_complex(std::span<const ComplexRgb> node_values, const QuadratureGrid& grid, int band_limit);

/// Real and imaginary parts of weight * conj(Y_lm) at every node, as two
/// sh_count(L) x nodes matrices: coefficients = matrix * node values. This is
/// the linear map used to differentiate through the transform.
struct TransformMatrix {
    Tensor re;
    Tensor im;
};
TransformMatrix transform_matrix(const QuadratureGrid& grid, int band_limit);

struct ShConfig {
    int band_limit = 8;
    std::size_t slices = 4;
    InterpConfig interp;
};

enum class EvalMode {
    /// Sparse tabulated data: kNN interpolation on each slice first.
    Tabulated,
    /// Continuous evaluator (a neural field): sample the nodes directly.
    Direct,
};

std::vector<ShSpectrum> brdf_frequency_coefficients(const BrdfEval& brdf_eval, const ShConfig& cfg, EvalMode mode);

/// Mean over slices, channels and (l, m) of |c - c'|^2.
double frequency_loss(std::span<const ShSpectrum> a, std::span<const ShSpectrum> b);

/// Per-degree power sum_m |c_lm|^2, indexed [channel][l].
std::array<std::vector<double>, 3> band_power(const ShSpectrum& s);

void write_spectra_csv(std::ostream& os, std::span<const ShSpectrum> spectra, bool header = true);

}  // namespace nbk
