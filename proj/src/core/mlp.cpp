// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "error.hpp"

namespace nbk {

std::size_t MlpArch::param_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) n += widths[i] * widths[i + 1] + widths[i + 1];
    return n;
}

void MlpArch::validate() const {
    if (widths.size() < 2) fail(ErrorCode::Config, "network needs at least an input and an output width");
    for (auto w : widths) {
        if (w == 0) fail(ErrorCode::Config, "network layer widths must be positive");
    }
}

std::vector<LayerView> mlp_layout(const MlpArch& arch) {
    arch.validate();
    std::vector<LayerView> out;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < arch.layers(); ++i) {
        const std::size_t in = arch.widths[i], o = arch.widths[i + 1];
        out.push_back({offset, offset + in * o, in, o});
        offset += in * o + o;
    }
    return out;
}

std::vector<double> mlp_init(const MlpArch& arch, Rng& rng, double last_layer_gain) {
    std::vector<double> p(arch.param_count(), 0.0);
    const auto layout = mlp_layout(arch);
    for (std::size_t li = 0; li < layout.size(); ++li) {
        const auto& L = layout[li];
        double limit = std::sqrt(6.0 / static_cast<double>(L.in + L.out));
        if (li + 1 == layout.size()) limit *= last_layer_gain;
        for (std::size_t i = 0; i < L.in * L.out; ++i) p[L.weight_offset + i] = rng.uniform(-limit, limit);
    }
    return p;
}

Var mlp_forward(Graph& g, Var x, Var params, const MlpArch& arch, OutputActivation out_act, const std::string& tag) {
    const auto layout = mlp_layout(arch);
    Var h = x;
    for (std::size_t li = 0; li < layout.size(); ++li) {
        const auto& L = layout[li];
        const std::string name = tag + ".l" + std::to_string(li);
        Var w = g.label(g.slice(params, L.weight_offset, {L.in, L.out}), name + ".w");
        Var b = g.label(g.slice(params, L.bias_offset, {1, L.out}), name + ".b");
        h = g.label(g.add(g.matmul(h, w), b), name);
        if (li + 1 < layout.size()) {
            h = g.relu(h);
        } else if (out_act == OutputActivation::ExpMinusOne) {
            h = g.relu(g.add_scalar(g.exp(h), -1.0));
        }
    }
    return h;
}

void mlp_eval(const MlpArch& arch, std::span<const double> params, std::span<const double> input,
              OutputActivation out_act, std::span<double> output) {
    const auto layout = mlp_layout(arch);
    if (params.size() != arch.param_count()) fail(ErrorCode::Shape, "parameter vector does not match the architecture");
    if (input.size() != arch.input_width() || output.size() != arch.output_width()) {
        fail(ErrorCode::Shape, "input/output width does not match the architecture");
    }
    std::vector<double> cur(input.begin(), input.end()), next;
    for (std::size_t li = 0; li < layout.size(); ++li) {
        const auto& L = layout[li];
        next.assign(L.out, 0.0);
        for (std::size_t i = 0; i < L.in; ++i) {
            const double a = cur[i];
            if (a == 0.0) continue;
            const double* wrow = params.data() + L.weight_offset + i * L.out;
            for (std::size_t j = 0; j < L.out; ++j) next[j] += a * wrow[j];
        }
        for (std::size_t j = 0; j < L.out; ++j) {
            double v = next[j] + params[L.bias_offset + j];
            if (li + 1 < layout.size()) {
                v = v > 0.0 ? v : 0.0;
            } else if (out_act == OutputActivation::ExpMinusOne) {
                v = std::exp(v) - 1.0;
                v = v > 0.0 ? v : 0.0;
            }
            next[j] = v;
        }
        cur.swap(next);
    }
    std::copy(cur.begin(), cur.end(), output.begin());
}

void save_param_blob(const std::filesystem::path& path, std::array<char, 4> magic, const MlpArch& arch,
                     std::span<const double> params) {
    static_assert(std::endian::native == std::endian::little);
    arch.validate();
    if (params.size() != arch.param_count()) fail(ErrorCode::Shape, "parameter vector does not match the architecture");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out.write(magic.data(), 4);
    const std::uint32_t version = 1;
    const auto nw = static_cast<std::uint32_t>(arch.widths.size());
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&nw), 4);
    for (auto w : arch.widths) {
        const auto w32 = static_cast<std::uint32_t>(w);
        out.write(reinterpret_cast<const char*>(&w32), 4);
    }
    const auto count = static_cast<std::uint64_t>(params.size());
    out.write(reinterpret_cast<const char*>(&count), 8);
    out.write(reinterpret_cast<const char*>(params.data()), static_cast<std::streamsize>(params.size() * sizeof(double)));
    if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

ParamBlob load_param_blob(const std::filesystem::path& path, std::array<char, 4> magic) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
    std::array<char, 4> tag{};
    std::uint32_t version = 0, nw = 0;
    in.read(tag.data(), 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&nw), 4);
    if (!in) fail(ErrorCode::Io, "truncated parameter file " + path.string());
    if (tag != magic) {
        fail(ErrorCode::Format, path.string() + ": magic tag '" + std::string(tag.data(), 4) + "', expected '" +
                                    std::string(magic.data(), 4) + "'");
    }
    if (version != 1) fail(ErrorCode::Format, path.string() + ": unsupported version " + std::to_string(version));
    if (nw < 2 || nw > 64) fail(ErrorCode::Format, path.string() + ": implausible layer count");
    ParamBlob blob;
    for (std::uint32_t i = 0; i < nw; ++i) {
        std::uint32_t w = 0;
        in.read(reinterpret_cast<char*>(&w), 4);
        blob.arch.widths.push_back(w);
    }
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), 8);
    if (!in) fail(ErrorCode::Io, "truncated parameter file " + path.string());
    blob.arch.validate();
    if (count != blob.arch.param_count()) fail(ErrorCode::Format, path.string() + ": parameter count does not match widths");
    blob.params.resize(count);
    in.read(reinterpret_cast<char*>(blob.params.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
        fail(ErrorCode::Io, "truncated parameter payload in " + path.string());
    }
    return blob;
}

}  // namespace nbk
