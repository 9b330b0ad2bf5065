// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graph.hpp"
#include "merl.hpp"
#include "mlp.hpp"
#include "sphere_field.hpp"

namespace nbk {

/// Neural BRDF: canonical H and D (6 reals) -> relu hidden layers -> RGB with
/// max(0, exp(x) - 1) output.
inline constexpr std::size_t kNbrdfInputs = 6;
inline constexpr std::size_t kNbrdfOutputs = 3;
inline constexpr std::array<char, 4> kNbrdfMagic = {'N', 'B', 'R', 'F'};

MlpArch nbrdf_arch(const std::vector<std::size_t>& hidden = {21, 21});

struct NbrdfWeights {
    MlpArch arch = nbrdf_arch();
    std::vector<double> values;

    /// Throws unless the shape is 6 -> ... -> 3, the length matches and every
    /// entry is finite.
    void validate() const;
};

Rgb nbrdf_eval(const NbrdfWeights& w, const Vec3& h, const Vec3& d);
Rgb nbrdf_eval(const NbrdfWeights& w, const RusinCoords& c);

BrdfEval make_nbrdf_eval(const NbrdfWeights& w);
BrdfEval make_merl_eval(const MerlBrdf& brdf);

/// Cosine of the incoming elevation, clamped at zero, for a configuration
/// with phi_h = 0.
double cos_theta_in(const RusinCoords& c);

/// Network inputs (canonical H then D) for one configuration.
std::array<double, 6> nbrdf_features(const RusinCoords& c);

/// Tensors for the cosine-weighted L1 term: coordinates (P x 6), log-relative
/// targets (P x 3) and cos theta_i (P x 1).
struct LossBatch {
    Tensor coords;
    Tensor target;
    Tensor cosine;
};
LossBatch make_loss_batch(const MerlBrdf& brdf, std::span<const std::uint32_t> cells, double eps);

/// Row vector ln(f_ref + eps) used to log-relative map network output inside
/// a graph.
Tensor log_reference(const Rgb& f_ref, double eps);

/// (1/P) sum_i sum_c |(map(pred) - target) cos theta_i| where map is the
/// log-relative mapping against `ref_log`.
Var mapped_l1_loss(Graph& g, Var pred, Var target, Var cosine, Var ref_log, double eps);

struct FitConfig {
    std::size_t epochs = 100;
    std::size_t batch = 512;
    std::size_t samples_per_epoch = 51200;
    std::size_t validation_samples = 4096;
    double lr = 5e-4;
    /// Ratio of the last epoch's learning rate to `lr`; the rate decays
    /// geometrically in between. 1 keeps it constant.
    double lr_decay = 1.0;
    std::optional<std::uint64_t> seed;
    double log_eps = kDefaultLogEps;
    std::vector<std::size_t> hidden = {21, 21};
};

struct FitLogRow {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct FitResult {
    NbrdfWeights weights;
    std::vector<FitLogRow> log;
    std::size_t best_epoch = 0;
    double best_val_loss = 0.0;
};

FitResult fit_nbrdf_single(const MerlBrdf& brdf, const FitConfig& cfg);

/// n x 9 elements: canonical H, D, then log-relative mapped RGB.
struct SampleSet {
    Tensor elements;
    std::size_t size() const { return elements.rows(); }
};
inline constexpr std::size_t kSampleWidth = 9;

/// Values are mapped relative to `reference` when given, otherwise relative
/// to the material's own median.
SampleSet sample_brdf_set(const MerlBrdf& brdf, std::size_t n, std::uint64_t seed, double eps = kDefaultLogEps,
                          const std::optional<Rgb>& reference = std::nullopt);
SampleSet sample_brdf_set(const NbrdfWeights& w, std::size_t n, std::uint64_t seed, double eps = kDefaultLogEps);

void save_nbrdf(const std::filesystem::path& path, const NbrdfWeights& w);
NbrdfWeights load_nbrdf(const std::filesystem::path& path);

}  // namespace nbk
