// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adam.hpp"
#include "harmonics.hpp"
#include "merl.hpp"
#include "mlp.hpp"
#include "nbrdf.hpp"

namespace nbk {

inline constexpr std::array<char, 4> kEncoderMagic = {'S', 'E', 'N', 'C'};
inline constexpr std::array<char, 4> kDecoderMagic = {'H', 'D', 'E', 'C'};

struct AutoencoderArch {
    std::size_t latent = 32;
    std::vector<std::size_t> encoder_hidden = {128, 128};
    std::vector<std::size_t> decoder_hidden = {256, 512};
    std::vector<std::size_t> nbrdf_hidden = {21, 21};

    MlpArch encoder() const;
    MlpArch decoder() const;
    MlpArch nbrdf() const { return nbrdf_arch(nbrdf_hidden); }
};

struct EncoderParams {
    MlpArch arch;
    std::vector<double> values;
};

struct DecoderParams {
    MlpArch arch;
    std::vector<double> values;
};

struct LatentCode {
    std::vector<double> z;
    bool operator==(const LatentCode&) const = default;
};

/// Per-element MLP followed by mean pooling. The pooled sum runs over each
/// column's values in sorted order, so the code is bit-identical under any
/// permutation of the set.
LatentCode encode(const EncoderParams& params, const SampleSet& set);

NbrdfWeights decode(const DecoderParams& params, const LatentCode& z, const MlpArch& nbrdf);

/// (1 - t) z1 + t z2 for t in [0, 1].
LatentCode interpolate_latent(const LatentCode& z1, const LatentCode& z2, double t);

/// Cosine-weighted L1 over samples (summed over channels) plus
/// lambda1 |w|^2 + lambda2 |z|^2.
double reconstruction_loss(std::span<const Rgb> f, std::span<const Rgb> f_prime, std::span<const double> cos_theta,
                           std::span<const double> w, std::span<const double> z, double lambda1, double lambda2);

double total_loss(double rec, double fre, double eta);

/// Domain of the reconstruction L1 term during training.
enum class RecDomain { Linear, Log };

struct TrainConfig {
    AutoencoderArch arch;
    double lambda1 = 1e-4;
    double lambda2 = 1e-4;
    double eta = 1.0;
    std::size_t loss_samples = 512;
    std::size_t set_size = 1024;
    std::size_t epochs = 100;
    std::size_t steps_per_epoch = 10;
    double lr = 5e-4;
    std::uint64_t seed = 0;
    double train_fraction = 0.7;
    double val_fraction = 0.1;
    double test_fraction = 0.2;
    /// Use every material in all three splits (single-material runs).
    bool collapse_splits = false;
    ShConfig sh{4, 2, {}};
    double log_eps = kDefaultLogEps;
    RecDomain rec_domain = RecDomain::Linear;
    /// Fixed reflectance the set values are mapped against. Empty means each
    /// material's own median, which hides absolute scale from the encoder.
    std::optional<double> set_reference = 1.0;

    void validate() const;
    /// Set fed to the encoder for `brdf` under this configuration.
    SampleSet sample_set(const MerlBrdf& brdf, std::uint64_t seed) const;
};

struct Split {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
};

/// Seeded shuffle of the sorted names, cut by the configured fractions.
Split make_split(std::vector<std::string> names, const TrainConfig& cfg);

struct TrainReportRow {
    std::size_t epoch = 0;
    std::string split;
    double rec = 0.0;
    double fre = 0.0;
    double total = 0.0;
};

/// Optimiser state carried across invocations so a run can be resumed.
struct TrainState {
    EncoderParams encoder;
    DecoderParams decoder;
    EncoderParams best_encoder;
    DecoderParams best_decoder;
    AdamState adam;
    std::size_t next_epoch = 0;
    std::size_t best_epoch = 0;
    double best_val = 0.0;
};

struct TrainResult {
    EncoderParams encoder;  // best on validation
    DecoderParams decoder;
    std::vector<TrainReportRow> report;
    Split split;
    TrainState state;
};

/// Ground-truth spectra of one material (kNN-interpolated slices).
using SpectraProvider = std::function<std::vector<ShSpectrum>(const MerlBrdf&)>;

std::vector<ShSpectrum> ground_truth_spectra(const MerlBrdf& brdf, const ShConfig& cfg);
std::vector<ShSpectrum> nbrdf_spectra(const NbrdfWeights& w, const ShConfig& cfg);

/// Runs `cfg.epochs` epochs, starting from `resume` when given. Epoch
/// numbering continues from the resumed state.
TrainResult train_autoencoder(std::span<const MerlBrdf> materials, const TrainConfig& cfg,
                              const std::optional<TrainState>& resume = std::nullopt,
                              const SpectraProvider& spectra = {});

/// Builds the per-material loss graph used for training. Exposed for tests.
struct LossGraph {
    Graph graph;
    Var rec;
    Var fre;
    Var total;
    Var z;
    Var w;
};
LossGraph build_loss_graph(const TrainConfig& cfg, std::size_t set_size, std::size_t loss_samples);

/// Inputs of the loss graph for one material.
TensorMap loss_graph_inputs(const TrainConfig& cfg, const EncoderParams& enc, const DecoderParams& dec,
                            const MerlBrdf& brdf, const SampleSet& set, std::span<const std::uint32_t> loss_cells,
                            std::span<const ShSpectrum> target_spectra);

EncoderParams init_encoder(const TrainConfig& cfg);
DecoderParams init_decoder(const TrainConfig& cfg, const Rgb& reference);

void save_encoder(const std::filesystem::path& path, const EncoderParams& p);
void save_decoder(const std::filesystem::path& path, const DecoderParams& p);
EncoderParams load_encoder(const std::filesystem::path& path);
DecoderParams load_decoder(const std::filesystem::path& path);

}  // namespace nbk
