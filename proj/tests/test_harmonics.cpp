// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "graph.hpp"
#include "harmonics.hpp"
#include "merl.hpp"
#include "nbrdf.hpp"
#include "rng.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

using namespace nbk;
using nbk::test::error_code_of;

namespace {

constexpr double kPi = std::numbers::pi;

// Complex field sum_k coeff_k Y_{l_k m_k}, sampled at the grid nodes.
struct Term {
    int l, m;
    Complex c;
};

std::vector<ComplexRgb> synthesize(const std::vector<Term>& terms, const QuadratureGrid& grid) {
    std::vector<ComplexRgb> v(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const SpherePoint p = grid.node(n);
        Complex s{};
        for (const auto& t : terms) s += t.c * sh_basis(t.l, t.m, p.theta, p.phi);
        v[n] = {s, s, s};
    }
    return v;
}

}  // namespace

TEST_CASE("basis closed forms and errors") {
    for (double th : {0.0, 0.4, 2.0}) {
        for (double ph : {0.0, 1.0, 5.0}) {
            CHECK(std::abs(sh_basis(0, 0, th, ph) - Complex(0.5 / std::sqrt(kPi), 0.0)) < 1e-15);
            CHECK(std::abs(sh_basis(1, 0, th, ph) - Complex(std::sqrt(3.0 / (4 * kPi)) * std::cos(th), 0.0)) < 1e-15);
        }
    }
    // Condon-Shortley phase: Y_11 = -sqrt(3/8pi) sin(theta) e^{i phi}.
    const Complex y11 = sh_basis(1, 1, 0.7, 0.3);
    CHECK(std::abs(y11 - (-std::sqrt(3.0 / (8 * kPi)) * std::sin(0.7) * std::polar(1.0, 0.3))) < 1e-15);
    CHECK(error_code_of([] { sh_basis(2, 3, 0.1, 0.1); }) == static_cast<int>(ErrorCode::Domain));
}

TEST_CASE("quadrature grid: weights and orthonormality") {
    const QuadratureGrid grid = make_quadrature_grid(8);
    double total = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        CHECK(grid.node_weight(n) > 0.0);
        total += grid.node_weight(n);
    }
    CHECK(std::fabs(total - 4 * kPi) < 1e-10);
    double norm21 = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const SpherePoint p = grid.node(n);
        norm21 += grid.node_weight(n) * std::norm(sh_basis(2, 1, p.theta, p.phi));
    }
    CHECK(std::fabs(norm21 - 1.0) < 1e-10);
}

TEST_CASE("forward transform examples") {
    const int L = 6;
    const QuadratureGrid grid = make_quadrature_grid(L);
    const ShSpectrum g00 = forward_transform(
        [](double, double) {
            const double v = 0.5 / std::sqrt(kPi);
            return Rgb{v, v, v};
        },
        grid, L);
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(std::abs(g00.coeffs[c][0] - Complex(1.0, 0.0)) < 1e-10);
        for (std::size_t k = 1; k < sh_count(L); ++k) CHECK(std::abs(g00.coeffs[c][k]) <= 1e-10);
    }

    const ShSpectrum mixed = forward_transform_complex(synthesize({{2, -1, 3.0}, {4, 4, 0.5}}, grid), grid, L);
    for (std::size_t c = 0; c < 3; ++c) {
        for (int l = 0; l <= L; ++l) {
            for (int m = -l; m <= l; ++m) {
                const Complex want = (l == 2 && m == -1) ? 3.0 : (l == 4 && m == 4) ? 0.5 : 0.0;
                CHECK(std::abs(mixed.coeffs[c][sh_index(l, m)] - want) <= 1e-9);
            }
        }
    }

    const ShSpectrum zero = forward_transform([](double, double) { return Rgb{0, 0, 0}; }, grid, L);
    for (const auto& ch : zero.coeffs) {
        for (const auto& v : ch) CHECK(v == Complex{});
    }

    CHECK(error_code_of([&] {
              forward_transform([](double th, double) { return Rgb{th > 1.0 ? NAN : 0.0, 0, 0}; }, grid, L);
          }) == static_cast<int>(ErrorCode::Numeric));
}

TEST_CASE("real fields obey conjugate symmetry; transform is linear") {
    const int L = 5;
    const QuadratureGrid grid = make_quadrature_grid(L);
    auto f = [](double th, double ph) { return Rgb{std::cos(th) * std::sin(2 * ph) + 0.3, std::sin(th) * std::cos(ph), 1.0}; };
    auto g = [](double th, double ph) { return Rgb{th, std::cos(3 * ph), std::sin(th) * std::sin(th)}; };
    const ShSpectrum sf = forward_transform(f, grid, L);
    for (std::size_t c = 0; c < 3; ++c) {
        for (int l = 0; l <= L; ++l) {
            for (int m = 1; m <= l; ++m) {
                const Complex lhs = sf.coeffs[c][sh_index(l, -m)];
                const Complex rhs = (m % 2 ? -1.0 : 1.0) * std::conj(sf.coeffs[c][sh_index(l, m)]);
                CHECK(std::abs(lhs - rhs) < 1e-9);
            }
        }
    }
    const ShSpectrum sg = forward_transform(g, grid, L);
    const ShSpectrum sl = forward_transform(
        [&](double th, double ph) {
            const Rgb a = f(th, ph), b = g(th, ph);
            return Rgb{2 * a[0] - 0.5 * b[0], 2 * a[1] - 0.5 * b[1], 2 * a[2] - 0.5 * b[2]};
        },
        grid, L);
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t k = 0; k < sh_count(L); ++k) {
            CHECK(std::abs(sl.coeffs[c][k] - (2.0 * sf.coeffs[c][k] - 0.5 * sg.coeffs[c][k])) < 1e-10);
        }
    }
}

TEST_CASE("transform matrix reproduces the transform") {
    const int L = 3;
    const QuadratureGrid grid = make_quadrature_grid(L);
    const TransformMatrix tm = transform_matrix(grid, L);
    CHECK(tm.re.shape() == Shape{sh_count(L), grid.size()});
    Rng rng(6);
    std::vector<Rgb> values(grid.size());
    for (auto& v : values) v = {rng.uniform(), rng.uniform(), rng.uniform()};
    const ShSpectrum s = forward_transform_nodes(values, grid, L);
    for (std::size_t k = 0; k < sh_count(L); ++k) {
        Complex acc{};
        for (std::size_t n = 0; n < grid.size(); ++n) acc += Complex(tm.re.at(k, n), tm.im.at(k, n)) * values[n][1];
        CHECK(std::abs(acc - s.coeffs[1][k]) < 1e-13);
    }
}

TEST_CASE("brdf frequency coefficients") {
    ShConfig cfg{4, 3, {}};
    const Rgb c{0.1, 0.4, 2.0};
    for (EvalMode mode : {EvalMode::Tabulated, EvalMode::Direct}) {
        const auto spectra = brdf_frequency_coefficients([&](const RusinCoords&) { return std::optional<Rgb>(c); }, cfg, mode);
        REQUIRE(spectra.size() == 3);
        for (const auto& s : spectra) {
            for (std::size_t ch = 0; ch < 3; ++ch) {
                CHECK(std::abs(s.coeffs[ch][0] - Complex(c[ch] * 2 * std::sqrt(kPi), 0.0)) < 1e-9);
                for (std::size_t k = 1; k < sh_count(4); ++k) CHECK(std::abs(s.coeffs[ch][k]) < 1e-9);
            }
        }
    }

    PhongParams sharp, broad;
    sharp.kd = broad.kd = {0.0, 0.0, 0.0};
    sharp.ks = broad.ks = {0.5, 0.5, 0.5};
    sharp.exponent = 100;
    broad.exponent = 5;
    const MerlBrdf ms = synthesize_phong("sharp", sharp), mb = synthesize_phong("broad", broad);
    ShConfig bc{6, 2, {}};
    const auto ss = brdf_frequency_coefficients(make_merl_eval(ms), bc, EvalMode::Tabulated);
    const auto sb = brdf_frequency_coefficients(make_merl_eval(mb), bc, EvalMode::Tabulated);
    CHECK(ss == brdf_frequency_coefficients(make_merl_eval(ms), bc, EvalMode::Tabulated));
    // Fraction of power above l = 0 grows with the exponent.
    auto high_fraction = [](const std::vector<ShSpectrum>& sp) {
        double low = 0.0, all = 0.0;
        for (const auto& s : sp) {
            const auto p = band_power(s);
            low += p[0][0];
            for (double v : p[0]) all += v;
        }
        return 1.0 - low / all;
    };
    CHECK(high_fraction(sb) < high_fraction(ss));
}

TEST_CASE("frequency loss") {
    ShSpectrum a;
    a.band_limit = 2;
    for (auto& ch : a.coeffs) ch.assign(9, Complex(1.0, -2.0));
    const std::vector<ShSpectrum> va{a};
    CHECK(frequency_loss(va, va) == 0.0);
    ShSpectrum z = a;
    for (auto& ch : z.coeffs) ch.assign(9, Complex{});
    CHECK(frequency_loss(va, std::vector<ShSpectrum>{z}) == doctest::Approx(5.0));
    ShSpectrum d = a;
    d.coeffs[1][4] += Complex(0.0, 0.3);
    CHECK(frequency_loss(va, std::vector<ShSpectrum>{d}) == doctest::Approx(0.09 / 27.0).epsilon(1e-12));
    CHECK(frequency_loss(std::vector<ShSpectrum>{d}, va) == frequency_loss(va, std::vector<ShSpectrum>{d}));
    ShSpectrum other;
    other.band_limit = 1;
    for (auto& ch : other.coeffs) ch.assign(4, Complex{});
    CHECK(error_code_of([&] { frequency_loss(va, std::vector<ShSpectrum>{other}); }) == static_cast<int>(ErrorCode::Shape));
}

TEST_CASE("frequency loss gradient w.r.t. node values matches finite differences") {
    const int L = 2;
    const QuadratureGrid grid = make_quadrature_grid(L);
    const TransformMatrix tm = transform_matrix(grid, L);
    Rng rng(31);
    Graph g;
    Var f = g.input("f");
    Var re = g.sub(g.matmul(g.constant(tm.re), f), g.input("tre"));
    Var im = g.sub(g.matmul(g.constant(tm.im), f), g.input("tim"));
    g.scale(g.add(g.sum(g.square(re)), g.sum(g.square(im))), 1.0 / (3.0 * sh_count(L)));
    Tensor values({grid.size(), 3}), tre({sh_count(L), 3}), tim({sh_count(L), 3});
    for (double& v : values.storage()) v = rng.uniform(0.1, 1.0);
    for (double& v : tre.storage()) v = rng.uniform(-1.0, 1.0);
    for (double& v : tim.storage()) v = rng.uniform(-1.0, 1.0);
    const TensorMap in{{"f", values}, {"tre", tre}, {"tim", tim}};
    CHECK(finite_diff_check(g, in, 1e-5, {"f"}) <= 1e-4);

    // The graph value agrees with frequency_loss on the same spectra.
    std::vector<Rgb> nodes(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) nodes[n] = {values.at(n, 0), values.at(n, 1), values.at(n, 2)};
    ShSpectrum target;
    target.band_limit = L;
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t k = 0; k < sh_count(L); ++k) target.coeffs[c].emplace_back(tre.at(k, c), tim.at(k, c));
    }
    const double want = frequency_loss(std::vector<ShSpectrum>{forward_transform_nodes(nodes, grid, L)},
                                       std::vector<ShSpectrum>{target});
    CHECK(g.forward(in)[0] == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("spectra CSV layout") {
    ShSpectrum s;
    s.band_limit = 1;
    s.slice_id = 2;
    for (auto& ch : s.coeffs) ch.assign(4, Complex(0.5, -0.25));
    std::ostringstream os;
    write_spectra_csv(os, std::vector<ShSpectrum>{s});
    const std::string text = os.str();
    CHECK(text.rfind("slice,channel,l,m,re,im\n2,0,0,0,0.5,-0.25\n2,0,1,-1,", 0) == 0);
}
