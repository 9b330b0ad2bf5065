// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbrdf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>

#include "adam.hpp"
#include "error.hpp"
#include "rng.hpp"

namespace nbk {

MlpArch nbrdf_arch(const std::vector<std::size_t>& hidden) {
    MlpArch a;
    a.widths.push_back(kNbrdfInputs);
    a.widths.insert(a.widths.end(), hidden.begin(), hidden.end());
    a.widths.push_back(kNbrdfOutputs);
    a.validate();
    return a;
}

void NbrdfWeights::validate() const {
    arch.validate();
    if (arch.input_width() != kNbrdfInputs || arch.output_width() != kNbrdfOutputs) {
        fail(ErrorCode::Shape, "NBRDF architecture must map 6 inputs to 3 outputs");
    }
    if (values.size() != arch.param_count()) {
        fail(ErrorCode::Shape, "NBRDF weight vector has " + std::to_string(values.size()) + " entries, architecture needs " +
                                   std::to_string(arch.param_count()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) fail(ErrorCode::Numeric, "NBRDF weight " + std::to_string(i) + " is not finite");
    }
}

Rgb nbrdf_eval(const NbrdfWeights& w, const Vec3& h, const Vec3& d) {
    if (std::fabs(length(h) - 1.0) > 1e-6 || std::fabs(length(d) - 1.0) > 1e-6) {
        fail(ErrorCode::Domain, "nbrdf_eval: H and D must be unit vectors");
    }
    const double in[6] = {h.x, h.y, h.z, d.x, d.y, d.z};
    Rgb out{};
    mlp_eval(w.arch, w.values, in, OutputActivation::ExpMinusOne, out);
    return out;
}

Rgb nbrdf_eval(const NbrdfWeights& w, const RusinCoords& c) {
    const DirectionPair p = canonical_hd(c);
    return nbrdf_eval(w, p.h, p.d);
}

BrdfEval make_nbrdf_eval(const NbrdfWeights& w) {
    return [&w](const RusinCoords& c) -> std::optional<Rgb> { return nbrdf_eval(w, c); };
}

BrdfEval make_merl_eval(const MerlBrdf& brdf) {
    return [&brdf](const RusinCoords& c) -> std::optional<Rgb> {
        const LookupResult r = lookup(brdf, c);
        if (!r.valid) return std::nullopt;
        return r.rgb;
    };
}

double cos_theta_in(const RusinCoords& c) {
    RusinCoords k = c;
    k.phi_h = 0.0;
    return std::max(0.0, hd_to_io(k).wi.z);
}

std::array<double, 6> nbrdf_features(const RusinCoords& c) {
    const DirectionPair p = canonical_hd(c);
    return {p.h.x, p.h.y, p.h.z, p.d.x, p.d.y, p.d.z};
}

LossBatch make_loss_batch(const MerlBrdf& brdf, std::span<const std::uint32_t> cells, double eps) {
    const std::size_t n = cells.size();
    if (n == 0) fail(ErrorCode::Domain, "loss batch needs at least one sample");
    LossBatch b{Tensor({n, 6}), Tensor({n, 3}), Tensor({n, 1})};
    const Rgb ref = brdf.median();
    for (std::size_t i = 0; i < n; ++i) {
        const RusinCoords c = merl::cell_center(cells[i]);
        const auto f = nbrdf_features(c);
        std::copy(f.begin(), f.end(), b.coords.data().begin() + static_cast<std::ptrdiff_t>(i * 6));
        const Rgb mapped = log_relative_map(brdf.rgb(cells[i]), ref, eps);
        for (std::size_t ch = 0; ch < 3; ++ch) b.target.at(i, ch) = mapped[ch];
        b.cosine[i] = cos_theta_in(c);
    }
    return b;
}

Tensor log_reference(const Rgb& f_ref, double eps) {
    return Tensor({1, 3}, {std::log(f_ref[0] + eps), std::log(f_ref[1] + eps), std::log(f_ref[2] + eps)});
}

Var mapped_l1_loss(Graph& g, Var pred, Var target, Var cosine, Var ref_log, double eps) {
    Var mapped = g.sub(g.log(g.add_scalar(pred, eps)), ref_log);
    Var weighted = g.multiply(g.sub(mapped, target), cosine);
    // Summed over the three channels, averaged over samples.
    return g.label(g.scale(g.mean(g.abs(weighted), Axis::All), 3.0), "l1");
}

namespace {

std::vector<std::uint32_t> draw_cells(const MerlBrdf& brdf, std::size_t count, Rng& rng) {
    const auto valid = brdf.valid_cells();
    std::vector<std::uint32_t> out(count);
    for (auto& c : out) c = valid[rng.below(valid.size())];
    return out;
}

TensorMap fit_inputs(const NbrdfWeights& w, const LossBatch& b, const Tensor& ref) {
    TensorMap m;
    m["w"] = Tensor({1, w.values.size()}, w.values);
    m["x"] = b.coords;
    m["target"] = b.target;
    m["cos"] = b.cosine;
    m["ref"] = ref;
    return m;
}

}  // namespace

FitResult fit_nbrdf_single(const MerlBrdf& brdf, const FitConfig& cfg) {
    if (!cfg.seed) fail(ErrorCode::Config, "fit_nbrdf_single: a seed is required");
    if (cfg.batch == 0 || cfg.epochs == 0 || cfg.validation_samples == 0) {
        fail(ErrorCode::Config, "fit_nbrdf_single: epochs, batch and validation sample count must be positive");
    }
    if (!(cfg.lr > 0.0) || !(cfg.lr_decay > 0.0 && cfg.lr_decay <= 1.0)) {
        fail(ErrorCode::Config, "fit_nbrdf_single: lr must be positive and lr_decay in (0, 1]");
    }
    if (brdf.valid_count() == 0) fail(ErrorCode::Domain, "material '" + brdf.name() + "' has no valid cells");
    const std::uint64_t seed = *cfg.seed;

    NbrdfWeights w;
    w.arch = nbrdf_arch(cfg.hidden);
    Rng init_rng(seed, "fit.init");
    w.values = mlp_init(w.arch, init_rng);
    const Rgb ref = brdf.median();
    const auto layout = mlp_layout(w.arch);
    for (std::size_t c = 0; c < 3; ++c) w.values[layout.back().bias_offset + c] = std::log1p(ref[c]);

    Graph g;
    Var pred = mlp_forward(g, g.input("x"), g.input("w"), w.arch, OutputActivation::ExpMinusOne, "nbrdf");
    Var loss = mapped_l1_loss(g, pred, g.input("target"), g.input("cos"), g.input("ref"), cfg.log_eps);
    g.set_root(loss);

    const Tensor ref_log = log_reference(ref, cfg.log_eps);
    Rng val_rng(seed, "fit.validation");
    const auto val_cells = draw_cells(brdf, cfg.validation_samples, val_rng);
    const LossBatch val_batch = make_loss_batch(brdf, val_cells, cfg.log_eps);

    AdamState adam(w.values.size(), AdamHyper{cfg.lr});
    FitResult result;
    result.best_val_loss = std::numeric_limits<double>::infinity();
    const std::size_t steps = std::max<std::size_t>(1, cfg.samples_per_epoch / cfg.batch);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng batch_rng(seed, "fit.batch", epoch);
        const double progress = cfg.epochs > 1 ? static_cast<double>(epoch) / static_cast<double>(cfg.epochs - 1) : 0.0;
        adam.hyper.lr = cfg.lr * std::pow(cfg.lr_decay, progress);
        double train_sum = 0.0;
        try {
            for (std::size_t s = 0; s < steps; ++s) {
                const auto cells = draw_cells(brdf, cfg.batch, batch_rng);
                const LossBatch b = make_loss_batch(brdf, cells, cfg.log_eps);
                train_sum += g.forward(fit_inputs(w, b, ref_log))[0];
                TensorMap grads = g.backward();
                adam_step(adam, w.values, grads.at("w").storage());
            }
        } catch (const Error& e) {
            fail(ErrorCode::Numeric, "fit of '" + brdf.name() + "' diverged at epoch " + std::to_string(epoch) + ": " + e.what());
        }
        const double val = g.forward(fit_inputs(w, val_batch, ref_log))[0];
        const double train = train_sum / static_cast<double>(steps);
        if (!std::isfinite(train) || !std::isfinite(val)) {
            fail(ErrorCode::Numeric, "fit of '" + brdf.name() + "' diverged at epoch " + std::to_string(epoch));
        }
        result.log.push_back({epoch, train, val});
        if (val < result.best_val_loss) {
            result.best_val_loss = val;
            result.best_epoch = epoch;
            result.weights = w;
        }
    }
    return result;
}

namespace {

// Floyd's algorithm: n distinct positions in [0, total).
std::vector<std::size_t> distinct_positions(std::size_t total, std::size_t n, Rng& rng) {
    std::unordered_set<std::size_t> seen;
    std::vector<std::size_t> out;
    out.reserve(n);
    for (std::size_t j = total - n; j < total; ++j) {
        const std::size_t t = rng.below(j + 1);
        if (seen.insert(t).second) {
            out.push_back(t);
        } else {
            seen.insert(j);
            out.push_back(j);
        }
    }
    return out;
}

void write_element(Tensor& t, std::size_t row, const RusinCoords& c, const Rgb& mapped) {
    const auto f = nbrdf_features(c);
    for (std::size_t k = 0; k < 6; ++k) t.at(row, k) = f[k];
    for (std::size_t k = 0; k < 3; ++k) t.at(row, 6 + k) = mapped[k];
}

}  // namespace

SampleSet sample_brdf_set(const MerlBrdf& brdf, std::size_t n, std::uint64_t seed, double eps,
                          const std::optional<Rgb>& reference) {
    if (n == 0) fail(ErrorCode::Domain, "sample set size must be at least 1");
    if (brdf.valid_count() < n) {
        fail(ErrorCode::Domain, "material '" + brdf.name() + "' has " + std::to_string(brdf.valid_count()) +
                                    " valid cells, fewer than the " + std::to_string(n) + " requested");
    }
    Rng rng(seed, "sample_set");
    const auto positions = distinct_positions(brdf.valid_count(), n, rng);
    const Rgb ref = reference ? *reference : brdf.median();
    SampleSet s{Tensor({n, kSampleWidth})};
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t cell = brdf.valid_cells()[positions[i]];
        write_element(s.elements, i, merl::cell_center(cell), log_relative_map(brdf.rgb(cell), ref, eps));
    }
    return s;
}

SampleSet sample_brdf_set(const NbrdfWeights& w, std::size_t n, std::uint64_t seed, double eps) {
    if (n == 0) fail(ErrorCode::Domain, "sample set size must be at least 1");
    w.validate();
    Rng rng(seed, "sample_set.neural");
    std::vector<RusinCoords> coords(n);
    std::vector<Rgb> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        RusinCoords c;
        c.theta_h = rng.uniform(0.0, std::numbers::pi / 2);
        c.theta_d = rng.uniform(0.0, std::numbers::pi / 2);
        c.phi_d = rng.uniform(0.0, std::numbers::pi);
        coords[i] = c;
        values[i] = nbrdf_eval(w, c);
    }
    Rgb ref{};
    for (std::size_t ch = 0; ch < 3; ++ch) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = values[i][ch];
        std::sort(v.begin(), v.end());
        ref[ch] = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }
    SampleSet s{Tensor({n, kSampleWidth})};
    for (std::size_t i = 0; i < n; ++i) write_element(s.elements, i, coords[i], log_relative_map(values[i], ref, eps));
    return s;
}

void save_nbrdf(const std::filesystem::path& path, const NbrdfWeights& w) {
    w.validate();
    save_param_blob(path, kNbrdfMagic, w.arch, w.values);
}

NbrdfWeights load_nbrdf(const std::filesystem::path& path) {
    ParamBlob blob = load_param_blob(path, kNbrdfMagic);
    NbrdfWeights w{std::move(blob.arch), std::move(blob.params)};
    w.validate();
    return w;
}

}  // namespace nbk
