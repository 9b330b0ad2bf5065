// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace nbk {

enum class OutputActivation {
    Linear,
    /// max(0, exp(x) - 1)
    ExpMinusOne,
};

/// Fully connected network described by its layer widths, input first.
/// Parameters are flattened layer-major; within a layer the in x out weight
/// matrix (row-major) precedes the bias.
struct MlpArch {
    std::vector<std::size_t> widths;

    std::size_t layers() const noexcept { return widths.empty() ? 0 : widths.size() - 1; }
    std::size_t input_width() const { return widths.front(); }
    std::size_t output_width() const { return widths.back(); }
    std::size_t param_count() const;
    void validate() const;

    bool operator==(const MlpArch&) const = default;
};

struct LayerView {
    std::size_t weight_offset;
    std::size_t bias_offset;
    std::size_t in;
    std::size_t out;
};

std::vector<LayerView> mlp_layout(const MlpArch& arch);

/// Glorot-uniform weights and zero biases.
std::vector<double> mlp_init(const MlpArch& arch, Rng& rng, double last_layer_gain = 1.0);

/// Relu hidden layers over `x` (rows x in) with parameters taken from the
/// flat row vector `params`.
Var mlp_forward(Graph& g, Var x, Var params, const MlpArch& arch, OutputActivation out_act, const std::string& tag);

/// Same network evaluated without a graph, for one input row.
void mlp_eval(const MlpArch& arch, std::span<const double> params, std::span<const double> input,
              OutputActivation out_act, std::span<double> output);

/// Flat binary: 4-byte magic, u32 version, u32 width count, u32 widths,
/// u64 parameter count, then little-endian doubles.
void save_param_blob(const std::filesystem::path& path, std::array<char, 4> magic, const MlpArch& arch,
                     std::span<const double> params);
struct ParamBlob {
    MlpArch arch;
    std::vector<double> params;
};
ParamBlob load_param_blob(const std::filesystem::path& path, std::array<char, 4> magic);

}  // namespace nbk
