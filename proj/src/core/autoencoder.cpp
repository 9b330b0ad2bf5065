// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "error.hpp"
#include "rng.hpp"

namespace nbk {

MlpArch AutoencoderArch::encoder() const {
    MlpArch a;
    a.widths.push_back(kSampleWidth);
    a.widths.insert(a.widths.end(), encoder_hidden.begin(), encoder_hidden.end());
    a.widths.push_back(latent);
    a.validate();
    return a;
}

MlpArch AutoencoderArch::decoder() const {
    MlpArch a;
    a.widths.push_back(latent);
    a.widths.insert(a.widths.end(), decoder_hidden.begin(), decoder_hidden.end());
    a.widths.push_back(nbrdf().param_count());
    a.validate();
    return a;
}

LatentCode encode(const EncoderParams& params, const SampleSet& set) {
    const std::size_t n = set.size();
    if (n == 0) fail(ErrorCode::Domain, "encode: empty sample set");
    if (set.elements.cols() != params.arch.input_width()) {
        fail(ErrorCode::Shape, "encode: set elements have width " + std::to_string(set.elements.cols()) + ", encoder expects " +
                                   std::to_string(params.arch.input_width()));
    }
    const std::size_t zdim = params.arch.output_width();
    std::vector<std::vector<double>> columns(zdim, std::vector<double>(n));
    std::vector<double> out(zdim);
    for (std::size_t i = 0; i < n; ++i) {
        mlp_eval(params.arch, params.values, set.elements.data().subspan(i * kSampleWidth, kSampleWidth),
                 OutputActivation::Linear, out);
        for (std::size_t k = 0; k < zdim; ++k) columns[k][i] = out[k];
    }
    LatentCode z;
    z.z.resize(zdim);
    for (std::size_t k = 0; k < zdim; ++k) {
        std::sort(columns[k].begin(), columns[k].end());
        double s = 0.0;
        for (double v : columns[k]) s += v;
        z.z[k] = s / static_cast<double>(n);
    }
    return z;
}

NbrdfWeights decode(const DecoderParams& params, const LatentCode& z, const MlpArch& nbrdf) {
    if (z.z.size() != params.arch.input_width()) {
        fail(ErrorCode::Shape, "decode: latent code has length " + std::to_string(z.z.size()) + ", decoder expects " +
                                   std::to_string(params.arch.input_width()));
    }
    if (params.arch.output_width() != nbrdf.param_count()) {
        fail(ErrorCode::Shape, "decode: decoder emits " + std::to_string(params.arch.output_width()) +
                                   " weights, NBRDF needs " + std::to_string(nbrdf.param_count()));
    }
    NbrdfWeights w;
    w.arch = nbrdf;
    w.values.resize(nbrdf.param_count());
    mlp_eval(params.arch, params.values, z.z, OutputActivation::Linear, w.values);
    return w;
}

LatentCode interpolate_latent(const LatentCode& z1, const LatentCode& z2, double t) {
    if (z1.z.size() != z2.z.size()) fail(ErrorCode::Shape, "interpolate_latent: codes differ in length");
    if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::Domain, "interpolate_latent: t must lie in [0, 1]");
    LatentCode out;
    out.z.resize(z1.z.size());
    for (std::size_t i = 0; i < out.z.size(); ++i) out.z[i] = (1.0 - t) * z1.z[i] + t * z2.z[i];
    return out;
}

double reconstruction_loss(std::span<const Rgb> f, std::span<const Rgb> f_prime, std::span<const double> cos_theta,
                           std::span<const double> w, std::span<const double> z, double lambda1, double lambda2) {
    if (f.empty() || f.size() != f_prime.size() || f.size() != cos_theta.size()) {
        fail(ErrorCode::Shape, "reconstruction_loss: sample arrays must be non-empty and of equal length");
    }
    double data = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t c = 0; c < 3; ++c) data += std::fabs((f[i][c] - f_prime[i][c]) * cos_theta[i]);
    }
    data /= static_cast<double>(f.size());
    double w2 = 0.0, z2 = 0.0;
    for (double v : w) w2 += v * v;
    for (double v : z) z2 += v * v;
    return data + lambda1 * w2 + lambda2 * z2;
}

double total_loss(double rec, double fre, double eta) {
    return rec + eta * fre;
}

void TrainConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(train_fraction) || !positive(val_fraction) || !positive(test_fraction) ||
        std::fabs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9) {
        fail(ErrorCode::Config, "split fractions must be positive and sum to 1");
    }
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || !(eta >= 0.0)) fail(ErrorCode::Config, "loss weights must be non-negative");
    if (!positive(lr)) fail(ErrorCode::Config, "learning rate must be positive");
    if (loss_samples == 0 || set_size == 0 || steps_per_epoch == 0) {
        fail(ErrorCode::Config, "loss samples, set size and steps per epoch must be positive");
    }
    if (arch.latent == 0) fail(ErrorCode::Config, "latent size must be positive");
    if (sh.slices == 0 || sh.band_limit < 0 || sh.interp.k == 0 || !positive(sh.interp.sigma)) {
        fail(ErrorCode::Config, "invalid spherical-harmonic settings");
    }
    if (set_reference && !(std::isfinite(*set_reference) && *set_reference >= 0.0)) {
        fail(ErrorCode::Config, "set reference must be finite and non-negative");
    }
}

SampleSet TrainConfig::sample_set(const MerlBrdf& brdf, std::uint64_t seed) const {
    std::optional<Rgb> ref;
    if (set_reference) ref = Rgb{*set_reference, *set_reference, *set_reference};
    return sample_brdf_set(brdf, set_size, seed, log_eps, ref);
}

Split make_split(std::vector<std::string> names, const TrainConfig& cfg) {
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end()) fail(ErrorCode::Config, "material names must be unique");
    Split s;
    if (cfg.collapse_splits) {
        s.train = s.val = s.test = names;
        return s;
    }
    const std::size_t n = names.size();
    if (n < 3) fail(ErrorCode::Config, "training needs at least 3 materials to populate the splits (got " + std::to_string(n) + ")");
    Rng rng(cfg.seed, "split");
    for (std::size_t i = n - 1; i > 0; --i) std::swap(names[i], names[rng.below(i + 1)]);
    auto count = [n](double f) { return static_cast<std::size_t>(std::llround(f * static_cast<double>(n))); };
    std::size_t n_val = std::max<std::size_t>(1, count(cfg.val_fraction));
    std::size_t n_train = std::max<std::size_t>(1, count(cfg.train_fraction));
    while (n_train + n_val + 1 > n) {
        if (n_train > 1) {
            --n_train;
        } else {
            --n_val;
        }
    }
    s.train.assign(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.val.assign(names.begin() + static_cast<std::ptrdiff_t>(n_train),
                 names.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    s.test.assign(names.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), names.end());
    return s;
}

std::vector<ShSpectrum> ground_truth_spectra(const MerlBrdf& brdf, const ShConfig& cfg) {
    return brdf_frequency_coefficients(make_merl_eval(brdf), cfg, EvalMode::Tabulated);
}

std::vector<ShSpectrum> nbrdf_spectra(const NbrdfWeights& w, const ShConfig& cfg) {
    w.validate();
    return brdf_frequency_coefficients(make_nbrdf_eval(w), cfg, EvalMode::Direct);
}

LossGraph build_loss_graph(const TrainConfig& cfg, std::size_t set_size, std::size_t loss_samples) {
    (void)set_size;
    (void)loss_samples;
    LossGraph lg;
    Graph& g = lg.graph;
    const MlpArch enc = cfg.arch.encoder();
    const MlpArch dec = cfg.arch.decoder();
    const MlpArch nb = cfg.arch.nbrdf();

    Var per_element = mlp_forward(g, g.input("set"), g.input("enc"), enc, OutputActivation::Linear, "enc");
    lg.z = g.label(g.mean(per_element, Axis::Rows), "z");
    lg.w = g.label(mlp_forward(g, lg.z, g.input("dec"), dec, OutputActivation::Linear, "dec"), "w");

    Var pred = mlp_forward(g, g.input("x"), lg.w, nb, OutputActivation::ExpMinusOne, "nbrdf");
    Var l1 = cfg.rec_domain == RecDomain::Log
                 ? mapped_l1_loss(g, pred, g.input("target"), g.input("cos"), g.input("ref"), cfg.log_eps)
                 : g.label(g.scale(g.mean(g.abs(g.multiply(g.sub(pred, g.input("target")), g.input("cos"))), Axis::All), 3.0),
                           "l1");
    Var reg_w = g.scale(g.sum(g.square(lg.w)), cfg.lambda1);
    Var reg_z = g.scale(g.sum(g.square(lg.z)), cfg.lambda2);
    lg.rec = g.label(g.add(g.add(l1, reg_w), reg_z), "rec");

    // Spectra of the decoded NBRDF, evaluated directly at the quadrature
    // nodes of every slice.
    const QuadratureGrid grid = make_quadrature_grid(cfg.sh.band_limit);
    const TransformMatrix tm = transform_matrix(grid, cfg.sh.band_limit);
    const auto alphas = slice_alphas(cfg.sh.slices);
    const std::size_t q = grid.size();
    Tensor nodes({alphas.size() * q, kNbrdfInputs});
    for (std::size_t s = 0; s < alphas.size(); ++s) {
        for (std::size_t n = 0; n < q; ++n) {
            const auto f = nbrdf_features(sphere_to_hd(grid.node(n), alphas[s]));
            for (std::size_t k = 0; k < kNbrdfInputs; ++k) nodes.at(s * q + n, k) = f[k];
        }
    }
    Var node_values = mlp_forward(g, g.constant(std::move(nodes), "sh.nodes"), lg.w, nb, OutputActivation::ExpMinusOne, "nbrdf.sh");
    Var basis_re = g.constant(tm.re, "sh.re");
    Var basis_im = g.constant(tm.im, "sh.im");
    std::optional<Var> acc;
    for (std::size_t s = 0; s < alphas.size(); ++s) {
        Var fs = g.slice(node_values, s * q * 3, {q, 3});
        const std::string tag = "sh" + std::to_string(s);
        Var dre = g.sub(g.matmul(basis_re, fs), g.input(tag + ".re"));
        Var dim = g.sub(g.matmul(basis_im, fs), g.input(tag + ".im"));
        Var term = g.add(g.sum(g.square(dre)), g.sum(g.square(dim)));
        acc = acc ? g.add(*acc, term) : term;
    }
    const double terms = static_cast<double>(alphas.size() * 3 * sh_count(cfg.sh.band_limit));
    lg.fre = g.label(g.scale(*acc, 1.0 / terms), "fre");
    lg.total = g.label(g.add(lg.rec, g.scale(lg.fre, cfg.eta)), "total");
    g.set_root(lg.total);
    return lg;
}

TensorMap loss_graph_inputs(const TrainConfig& cfg, const EncoderParams& enc, const DecoderParams& dec,
                            const MerlBrdf& brdf, const SampleSet& set, std::span<const std::uint32_t> loss_cells,
                            std::span<const ShSpectrum> target_spectra) {
    if (target_spectra.size() != cfg.sh.slices) fail(ErrorCode::Shape, "target spectra do not match the slice count");
    TensorMap m;
    m["enc"] = Tensor({1, enc.values.size()}, enc.values);
    m["dec"] = Tensor({1, dec.values.size()}, dec.values);
    m["set"] = set.elements;
    LossBatch b = make_loss_batch(brdf, loss_cells, cfg.log_eps);
    if (cfg.rec_domain == RecDomain::Linear) {
        for (std::size_t i = 0; i < loss_cells.size(); ++i) {
            const Rgb f = brdf.rgb(loss_cells[i]);
            for (std::size_t c = 0; c < 3; ++c) b.target.at(i, c) = f[c];
        }
    }
    m["x"] = std::move(b.coords);
    m["target"] = std::move(b.target);
    m["cos"] = std::move(b.cosine);
    m["ref"] = log_reference(brdf.median(), cfg.log_eps);
    const std::size_t k = sh_count(cfg.sh.band_limit);
    for (std::size_t s = 0; s < target_spectra.size(); ++s) {
        const ShSpectrum& spec = target_spectra[s];
        if (spec.band_limit != cfg.sh.band_limit) fail(ErrorCode::Shape, "target spectrum band limit mismatch");
        Tensor re({k, 3}), im({k, 3});
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t c = 0; c < 3; ++c) {
                re.at(i, c) = spec.coeffs[c][i].real();
                im.at(i, c) = spec.coeffs[c][i].imag();
            }
        }
        const std::string tag = "sh" + std::to_string(s);
        m[tag + ".re"] = std::move(re);
        m[tag + ".im"] = std::move(im);
    }
    return m;
}

EncoderParams init_encoder(const TrainConfig& cfg) {
    EncoderParams p;
    p.arch = cfg.arch.encoder();
    Rng rng(cfg.seed, "init.encoder");
    p.values = mlp_init(p.arch, rng);
    return p;
}

DecoderParams init_decoder(const TrainConfig& cfg, const Rgb& reference) {
    DecoderParams p;
    p.arch = cfg.arch.decoder();
    Rng rng(cfg.seed, "init.decoder");
    p.values = mlp_init(p.arch, rng, 0.1);
    // The output bias is a freshly initialised NBRDF, so a zero code decodes
    // to a plausible network emitting the reference reflectance.
    const MlpArch nb = cfg.arch.nbrdf();
    Rng nb_rng(cfg.seed, "init.nbrdf");
    std::vector<double> base = mlp_init(nb, nb_rng);
    const auto nb_layout = mlp_layout(nb);
    for (std::size_t c = 0; c < 3; ++c) base[nb_layout.back().bias_offset + c] = std::log1p(reference[c]);
    const auto layout = mlp_layout(p.arch);
    std::copy(base.begin(), base.end(), p.values.begin() + static_cast<std::ptrdiff_t>(layout.back().bias_offset));
    return p;
}

namespace {

std::uint64_t derived_seed(std::uint64_t seed, std::string_view stream, std::uint64_t k0, std::uint64_t k1) {
    Rng r(seed, stream, k0, k1);
    return r.engine()();
}

std::vector<std::uint32_t> draw_cells(const MerlBrdf& brdf, std::size_t count, Rng& rng) {
    const auto valid = brdf.valid_cells();
    std::vector<std::uint32_t> out(count);
    for (auto& c : out) c = valid[rng.below(valid.size())];
    return out;
}

struct EvalData {
    const MerlBrdf* brdf;
    SampleSet set;
    std::vector<std::uint32_t> cells;
    const std::vector<ShSpectrum>* spectra;
};

struct LossTriple {
    double rec = 0.0, fre = 0.0, total = 0.0;
};

LossTriple evaluate(LossGraph& lg, const TrainConfig& cfg, const EncoderParams& enc, const DecoderParams& dec,
                    const std::vector<EvalData>& data) {
    LossTriple acc;
    for (const auto& d : data) {
        lg.graph.forward(loss_graph_inputs(cfg, enc, dec, *d.brdf, d.set, d.cells, *d.spectra));
        acc.rec += lg.graph.value(lg.rec)[0];
        acc.fre += lg.graph.value(lg.fre)[0];
        acc.total += lg.graph.value(lg.total)[0];
    }
    const double n = static_cast<double>(data.size());
    return {acc.rec / n, acc.fre / n, acc.total / n};
}

}  // namespace

TrainResult train_autoencoder(std::span<const MerlBrdf> materials, const TrainConfig& cfg,
                              const std::optional<TrainState>& resume, const SpectraProvider& spectra) {
    cfg.validate();
    std::map<std::string, const MerlBrdf*> by_name;
    std::vector<std::string> names;
    for (const auto& m : materials) {
        if (!by_name.emplace(m.name(), &m).second) fail(ErrorCode::Config, "duplicate material name '" + m.name() + "'");
        if (m.valid_count() < cfg.set_size) {
            fail(ErrorCode::Domain, "material '" + m.name() + "' has fewer valid cells than the set size");
        }
        names.push_back(m.name());
    }

    TrainResult result;
    result.split = make_split(names, cfg);
    const Split& split = result.split;

    std::map<std::string, std::vector<ShSpectrum>> targets;
    for (const auto& m : materials) {
        targets[m.name()] = spectra ? spectra(m) : ground_truth_spectra(m, cfg.sh);
    }

    TrainState state;
    if (resume) {
        state = *resume;
        if (state.encoder.arch != cfg.arch.encoder() || state.decoder.arch != cfg.arch.decoder()) {
            fail(ErrorCode::Config, "resumed state does not match the configured architecture");
        }
        state.adam.hyper.lr = cfg.lr;
    } else {
        Rgb reference{0.0, 0.0, 0.0};
        for (const auto& name : split.train) {
            const Rgb med = by_name.at(name)->median();
            for (std::size_t c = 0; c < 3; ++c) reference[c] += med[c] / static_cast<double>(split.train.size());
        }
        state.encoder = init_encoder(cfg);
        state.decoder = init_decoder(cfg, reference);
        state.best_encoder = state.encoder;
        state.best_decoder = state.decoder;
        state.adam = AdamState(state.encoder.values.size() + state.decoder.values.size(), AdamHyper{cfg.lr});
        state.best_val = std::numeric_limits<double>::infinity();
    }

    LossGraph lg = build_loss_graph(cfg, cfg.set_size, cfg.loss_samples);

    auto fixed_data = [&](const std::vector<std::string>& list, std::string_view stream) {
        std::vector<EvalData> out;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const MerlBrdf* m = by_name.at(list[i]);
            Rng cell_rng(cfg.seed, std::string(stream) + ".cells", i);
            out.push_back({m, cfg.sample_set(*m, derived_seed(cfg.seed, std::string(stream) + ".set", i, 0)),
                           draw_cells(*m, cfg.loss_samples, cell_rng), &targets.at(list[i])});
        }
        return out;
    };
    const auto val_data = fixed_data(split.val, "eval.val");
    const auto test_data = fixed_data(split.test, "eval.test");

    const std::size_t n_enc = state.encoder.values.size();
    const std::size_t n_dec = state.decoder.values.size();
    std::vector<double> params(n_enc + n_dec), grads(n_enc + n_dec);
    const double inv_m = 1.0 / static_cast<double>(split.train.size());

    const std::size_t first = state.next_epoch;
    for (std::size_t epoch = first; epoch < first + cfg.epochs; ++epoch) {
        LossTriple train_acc;
        for (std::size_t step = 0; step < cfg.steps_per_epoch; ++step) {
            const std::uint64_t global_step = epoch * cfg.steps_per_epoch + step;
            std::fill(grads.begin(), grads.end(), 0.0);
            for (std::size_t i = 0; i < split.train.size(); ++i) {
                const MerlBrdf& m = *by_name.at(split.train[i]);
                try {
                    const SampleSet set = cfg.sample_set(m, derived_seed(cfg.seed, "train.set", global_step, i));
                    Rng cell_rng(cfg.seed, "train.cells", global_step, i);
                    const auto cells = draw_cells(m, cfg.loss_samples, cell_rng);
                    lg.graph.forward(loss_graph_inputs(cfg, state.encoder, state.decoder, m, set, cells, targets.at(m.name())));
                    if (!std::isfinite(lg.graph.value(lg.total)[0])) fail(ErrorCode::Numeric, "non-finite loss");
                    train_acc.rec += lg.graph.value(lg.rec)[0];
                    train_acc.fre += lg.graph.value(lg.fre)[0];
                    train_acc.total += lg.graph.value(lg.total)[0];
                    const TensorMap g = lg.graph.backward();
                    const auto& ge = g.at("enc").storage();
                    const auto& gd = g.at("dec").storage();
                    for (std::size_t k = 0; k < n_enc; ++k) grads[k] += ge[k] * inv_m;
                    for (std::size_t k = 0; k < n_dec; ++k) grads[n_enc + k] += gd[k] * inv_m;
                } catch (const Error& e) {
                    fail(ErrorCode::Numeric, "training diverged at epoch " + std::to_string(epoch) + " on material '" +
                                                 m.name() + "': " + e.what());
                }
            }
            std::copy(state.encoder.values.begin(), state.encoder.values.end(), params.begin());
            std::copy(state.decoder.values.begin(), state.decoder.values.end(), params.begin() + static_cast<std::ptrdiff_t>(n_enc));
            try {
                adam_step(state.adam, params, grads);
            } catch (const Error& e) {
                fail(ErrorCode::Numeric, "training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
            }
            std::copy(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(n_enc), state.encoder.values.begin());
            std::copy(params.begin() + static_cast<std::ptrdiff_t>(n_enc), params.end(), state.decoder.values.begin());
        }
        const double denom = static_cast<double>(cfg.steps_per_epoch * split.train.size());
        result.report.push_back({epoch, "train", train_acc.rec / denom, train_acc.fre / denom, train_acc.total / denom});

        LossTriple val, test;
        try {
            val = evaluate(lg, cfg, state.encoder, state.decoder, val_data);
            test = evaluate(lg, cfg, state.encoder, state.decoder, test_data);
        } catch (const Error& e) {
            fail(ErrorCode::Numeric, "evaluation failed at epoch " + std::to_string(epoch) + ": " + e.what());
        }
        if (!std::isfinite(val.total) || !std::isfinite(test.total)) {
            fail(ErrorCode::Numeric, "non-finite validation loss at epoch " + std::to_string(epoch));
        }
        result.report.push_back({epoch, "val", val.rec, val.fre, val.total});
        result.report.push_back({epoch, "test", test.rec, test.fre, test.total});
        if (val.total < state.best_val) {
            state.best_val = val.total;
            state.best_epoch = epoch;
            state.best_encoder = state.encoder;
            state.best_decoder = state.decoder;
        }
        state.next_epoch = epoch + 1;
    }

    result.encoder = state.best_encoder;
    result.decoder = state.best_decoder;
    result.state = std::move(state);
    return result;
}

void save_encoder(const std::filesystem::path& path, const EncoderParams& p) {
    save_param_blob(path, kEncoderMagic, p.arch, p.values);
}

void save_decoder(const std::filesystem::path& path, const DecoderParams& p) {
    save_param_blob(path, kDecoderMagic, p.arch, p.values);
}

EncoderParams load_encoder(const std::filesystem::path& path) {
    ParamBlob b = load_param_blob(path, kEncoderMagic);
    if (b.arch.input_width() != kSampleWidth) fail(ErrorCode::Format, path.string() + ": encoder input width must be 9");
    return {std::move(b.arch), std::move(b.params)};
}

DecoderParams load_decoder(const std::filesystem::path& path) {
    ParamBlob b = load_param_blob(path, kDecoderMagic);
    return {std::move(b.arch), std::move(b.params)};
}

}  // namespace nbk
