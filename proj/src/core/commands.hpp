// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "autoencoder.hpp"
#include "config.hpp"
#include "render.hpp"

namespace nbk {

/// Outcome of a command that processes several items. Fatal problems are
/// thrown as Error; per-item failures are counted and the run continues.
struct CommandOutcome {
    std::size_t items = 0;
    std::size_t failures = 0;
};

/// Sorted .binary files in a dataset directory. An empty or missing
/// directory is a usage error.
std::vector<std::filesystem::path> list_materials(const std::filesystem::path& dataset);

/// Seed of the encoder input set drawn for a material. Reconstruction and
/// editing share it so both encode a material to the same code.
std::uint64_t material_set_seed(std::uint64_t seed, const std::string& name);

std::vector<ShSpectrum> read_spectra_csv(const std::filesystem::path& path, int band_limit, std::size_t slices);

struct ImageMetrics {
    double rmse = 0.0;
    double psnr = 0.0;
    double ssim = 0.0;
    double l_fre = 0.0;
};

/// Renders a ground-truth material and a decoded NBRDF under the configured
/// scene and compares them.
struct Comparison {
    Image truth;
    Image recon;
    ImageMetrics metrics;
};
Comparison compare_to_truth(const RunConfig& cfg, const MerlBrdf& truth, const NbrdfWeights& recon);

struct Checkpoint {
    EncoderParams encoder;
    DecoderParams decoder;
};
/// Loads encoder.senc and decoder.hdec from `dir` and checks them against
/// each other and the configured NBRDF architecture.
Checkpoint load_checkpoint(const std::filesystem::path& dir, const RunConfig& cfg);

CommandOutcome cmd_synth(const RunConfig& cfg, std::ostream& log);
CommandOutcome cmd_fit(const RunConfig& cfg, std::ostream& log);
CommandOutcome cmd_train(const RunConfig& cfg, bool resume, std::ostream& log);
/// Uses every material in the dataset when `materials` is empty.
CommandOutcome cmd_reconstruct(const RunConfig& cfg, const std::filesystem::path& checkpoint,
                               const std::vector<std::filesystem::path>& materials, std::ostream& log);
CommandOutcome cmd_edit(const RunConfig& cfg, const std::filesystem::path& checkpoint, const std::filesystem::path& a,
                        const std::filesystem::path& b, std::ostream& log);
/// Random pairs from the dataset (config key edit_pairs) with uniform weights.
CommandOutcome cmd_edit_batch(const RunConfig& cfg, const std::filesystem::path& checkpoint, std::ostream& log);
/// Inputs are .binary materials or .nbrdf weight files; the dataset is used
/// when the list is empty.
CommandOutcome cmd_analyze_freq(const RunConfig& cfg, const std::vector<std::filesystem::path>& inputs,
                                std::ostream& log);
CommandOutcome cmd_report(const RunConfig& cfg, const std::vector<std::filesystem::path>& csvs, std::ostream& log);

}  // namespace nbk
