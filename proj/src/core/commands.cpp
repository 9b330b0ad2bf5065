// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "error.hpp"
#include "image_io.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "synthetic.hpp"

namespace nbk {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) fail(ErrorCode::Io, "failed to write '" + path.string() + "'");
}

fs::path out_dir(const RunConfig& cfg) {
    const fs::path dir = cfg.get("out");
    if (dir.empty()) fail(ErrorCode::Usage, "no output directory configured (--out)");
    fs::create_directories(dir);
    return dir;
}

std::size_t workers(const RunConfig& cfg) {
    return static_cast<std::size_t>(cfg.integer("threads"));
}

std::string metrics_fields(const ImageMetrics& m) {
    return fmt_real(m.rmse) + "," + fmt_real(m.psnr) + "," + fmt_real(m.ssim) + "," + fmt_real(m.l_fre);
}

std::vector<MerlBrdf> load_all(const std::vector<fs::path>& paths) {
    std::vector<MerlBrdf> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(load_merl(p));
    return out;
}

LatentCode encode_material(const RunConfig& cfg, const Checkpoint& ckpt, const MerlBrdf& m) {
    const TrainConfig tc = cfg.train_config();
    return encode(ckpt.encoder, tc.sample_set(m, material_set_seed(tc.seed, m.name())));
}

std::string sh_settings(const TrainConfig& tc) {
    return "band_limit = " + std::to_string(tc.sh.band_limit) + "\nslices = " + std::to_string(tc.sh.slices) +
           "\nk = " + std::to_string(tc.sh.interp.k) + "\nsigma = " + fmt_real(tc.sh.interp.sigma) + "\n";
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot read '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Ground-truth spectra are computed once per material and cached on disk.
// The cache is tied to the harmonic settings it was computed with.
std::map<std::string, std::vector<ShSpectrum>> cached_spectra(const std::vector<MerlBrdf>& materials,
                                                              const TrainConfig& tc, const fs::path& dir,
                                                              std::size_t n_workers, std::ostream& log) {
    const fs::path settings = dir / "settings.txt";
    const std::string wanted = sh_settings(tc);
    const bool reuse = fs::exists(settings) && read_text(settings) == wanted;
    fs::create_directories(dir);
    std::vector<std::vector<ShSpectrum>> results(materials.size());
    std::vector<char> computed(materials.size(), 0);
    parallel_for(materials.size(), n_workers, [&](std::size_t i) {
        const fs::path file = dir / (materials[i].name() + ".csv");
        if (reuse && fs::exists(file)) {
            results[i] = read_spectra_csv(file, tc.sh.band_limit, tc.sh.slices);
        } else {
            results[i] = ground_truth_spectra(materials[i], tc.sh);
            computed[i] = 1;
        }
    });
    std::size_t fresh = 0;
    for (std::size_t i = 0; i < materials.size(); ++i) {
        if (!computed[i]) continue;
        ++fresh;
        std::ostringstream os;
        write_spectra_csv(os, results[i]);
        write_file(dir / (materials[i].name() + ".csv"), os.str());
    }
    write_file(settings, wanted);
    log << "spectra: " << fresh << " computed, " << materials.size() - fresh << " from cache\n";
    std::map<std::string, std::vector<ShSpectrum>> out;
    for (std::size_t i = 0; i < materials.size(); ++i) out[materials[i].name()] = std::move(results[i]);
    return out;
}

void save_adam(const fs::path& path, const AdamState& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    const std::uint64_t n = s.m.size();
    out.write("ADAM", 4);
    out.write(reinterpret_cast<const char*>(&s.t), sizeof s.t);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(s.m.data()), static_cast<std::streamsize>(n * sizeof(double)));
    out.write(reinterpret_cast<const char*>(s.v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!out) fail(ErrorCode::Io, "failed to write '" + path.string() + "'");
}

AdamState load_adam(const fs::path& path, double lr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot read '" + path.string() + "'");
    char magic[4];
    std::uint64_t n = 0;
    AdamState s;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&s.t), sizeof s.t);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || std::string(magic, 4) != "ADAM" || n > (1ull << 32)) fail(ErrorCode::Format, path.string() + ": bad optimiser state");
    s.m.resize(n);
    s.v.resize(n);
    in.read(reinterpret_cast<char*>(s.m.data()), static_cast<std::streamsize>(n * sizeof(double)));
    in.read(reinterpret_cast<char*>(s.v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in || in.peek() != std::char_traits<char>::eof()) fail(ErrorCode::Format, path.string() + ": bad optimiser state");
    s.hyper.lr = lr;
    return s;
}

void save_state(const fs::path& dir, const TrainState& s) {
    fs::create_directories(dir);
    save_encoder(dir / "encoder.senc", s.encoder);
    save_decoder(dir / "decoder.hdec", s.decoder);
    save_encoder(dir / "best_encoder.senc", s.best_encoder);
    save_decoder(dir / "best_decoder.hdec", s.best_decoder);
    save_adam(dir / "adam.bin", s.adam);
    write_file(dir / "progress.txt", "next_epoch = " + std::to_string(s.next_epoch) + "\nbest_epoch = " +
                                         std::to_string(s.best_epoch) + "\nbest_val = " + fmt_real(s.best_val) + "\n");
}

TrainState load_state(const fs::path& dir, double lr) {
    if (!fs::exists(dir / "progress.txt")) fail(ErrorCode::State, "no training state to resume in '" + dir.string() + "'");
    TrainState s;
    s.encoder = load_encoder(dir / "encoder.senc");
    s.decoder = load_decoder(dir / "decoder.hdec");
    s.best_encoder = load_encoder(dir / "best_encoder.senc");
    s.best_decoder = load_decoder(dir / "best_decoder.hdec");
    s.adam = load_adam(dir / "adam.bin", lr);
    if (s.adam.m.size() != s.encoder.values.size() + s.decoder.values.size()) {
        fail(ErrorCode::Format, "optimiser state does not match the saved parameters");
    }
    std::istringstream in(read_text(dir / "progress.txt"));
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq), value = line.substr(eq + 3);
        if (key == "next_epoch") s.next_epoch = std::stoull(value);
        if (key == "best_epoch") s.best_epoch = std::stoull(value);
        if (key == "best_val") s.best_val = parse_real(value);
    }
    return s;
}

std::string train_row(const TrainReportRow& r) {
    return std::to_string(r.epoch) + "," + r.split + "," + fmt_real(r.rec) + "," + fmt_real(r.fre) + "," +
           fmt_real(r.total) + "\n";
}

}  // namespace

std::vector<fs::path> list_materials(const fs::path& dataset) {
    if (dataset.empty()) fail(ErrorCode::Usage, "no dataset directory configured (--dataset)");
    if (!fs::is_directory(dataset)) fail(ErrorCode::Usage, "dataset directory '" + dataset.string() + "' does not exist");
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dataset)) {
        if (entry.is_regular_file() && entry.path().extension() == ".binary") out.push_back(entry.path());
    }
    if (out.empty()) fail(ErrorCode::Usage, "dataset directory '" + dataset.string() + "' contains no .binary materials");
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t material_set_seed(std::uint64_t seed, const std::string& name) {
    Rng r(seed, "material.set/" + name);
    return r.engine()();
}

std::vector<ShSpectrum> read_spectra_csv(const fs::path& path, int band_limit, std::size_t slices) {
    const CsvTable t = read_csv(path);
    const std::size_t cs = t.column("slice"), cc = t.column("channel"), cl = t.column("l"), cm = t.column("m"),
                      cre = t.column("re"), cim = t.column("im");
    const std::size_t k = sh_count(band_limit);
    std::vector<ShSpectrum> out(slices);
    for (std::size_t s = 0; s < slices; ++s) {
        out[s].band_limit = band_limit;
        out[s].slice_id = s;
        for (auto& ch : out[s].coeffs) ch.assign(k, Complex{});
    }
    if (t.rows.size() != slices * 3 * k) fail(ErrorCode::Format, path.string() + ": spectra have the wrong size");
    for (const auto& row : t.rows) {
        const std::size_t s = std::stoull(row[cs]), c = std::stoull(row[cc]);
        const int l = std::stoi(row[cl]), m = std::stoi(row[cm]);
        if (s >= slices || c >= 3 || l < 0 || l > band_limit || std::abs(m) > l) {
            fail(ErrorCode::Format, path.string() + ": spectrum index out of range");
        }
        out[s].coeffs[c][sh_index(l, m)] = Complex(parse_real(row[cre]), parse_real(row[cim]));
    }
    return out;
}

Comparison compare_to_truth(const RunConfig& cfg, const MerlBrdf& truth, const NbrdfWeights& recon) {
    const SceneSpec scene = cfg.scene();
    const std::size_t w = cfg.integer("render_width"), h = cfg.integer("render_height");
    const TrainConfig tc = cfg.train_config();
    Comparison c;
    c.truth = render_sphere(merl_pair_eval(truth), scene, w, h, workers(cfg));
    c.recon = render_sphere(nbrdf_pair_eval(recon), scene, w, h, workers(cfg));
    const double peak = cfg.real("peak");
    c.metrics.rmse = rmse(c.truth, c.recon);
    c.metrics.psnr = psnr(c.truth, c.recon, peak);
    c.metrics.ssim = ssim(c.truth, c.recon, peak);
    c.metrics.l_fre = frequency_loss(nbrdf_spectra(recon, tc.sh), ground_truth_spectra(truth, tc.sh));
    return c;
}

Checkpoint load_checkpoint(const fs::path& dir, const RunConfig& cfg) {
    Checkpoint c;
    c.encoder = load_encoder(dir / "encoder.senc");
    c.decoder = load_decoder(dir / "decoder.hdec");
    if (c.encoder.arch.output_width() != c.decoder.arch.input_width()) {
        fail(ErrorCode::Config, "checkpoint mismatch: encoder emits Z = " + std::to_string(c.encoder.arch.output_width()) +
                                    ", decoder expects Z = " + std::to_string(c.decoder.arch.input_width()));
    }
    if (c.decoder.arch.input_width() != cfg.integer("latent")) {
        fail(ErrorCode::Config, "checkpoint mismatch: checkpoint has Z = " + std::to_string(c.decoder.arch.input_width()) +
                                    ", configuration has latent = " + cfg.get("latent"));
    }
    const MlpArch nb = nbrdf_arch(cfg.integers("nbrdf_hidden"));
    if (c.decoder.arch.output_width() != nb.param_count()) {
        fail(ErrorCode::Config, "checkpoint mismatch: decoder emits W = " + std::to_string(c.decoder.arch.output_width()) +
                                    ", configured NBRDF has W = " + std::to_string(nb.param_count()));
    }
    return c;
}

CommandOutcome cmd_synth(const RunConfig& cfg, std::ostream& log) {
    const fs::path dir = out_dir(cfg);
    const std::size_t count = cfg.integer("synth_count");
    if (count == 0) fail(ErrorCode::Usage, "synth_count must be at least 1");
    const auto family = synthetic_family(count, cfg.integer("seed"));
    std::string table = "material,kd_r,kd_g,kd_b,ks_r,ks_g,ks_b,exponent\n";
    for (std::size_t i = 0; i < family.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "synth_%02zu", i);
        const PhongParams& p = family[i];
        save_merl(synthesize_phong(name, p), dir / (std::string(name) + ".binary"));
        table += std::string(name);
        for (double v : p.kd) table += "," + fmt_real(v);
        for (double v : p.ks) table += "," + fmt_real(v);
        table += "," + fmt_real(p.exponent) + "\n";
        log << "synth: wrote " << name << "\n";
    }
    write_file(dir / "synth_params.csv", table);
    return {count, 0};
}

CommandOutcome cmd_fit(const RunConfig& cfg, std::ostream& log) {
    const auto paths = list_materials(cfg.get("dataset"));
    const fs::path dir = out_dir(cfg);
    const FitConfig fc = cfg.fit_config();
    write_file(dir / "config.txt", cfg.echo());
    struct Item {
        std::string name;
        std::optional<FitResult> result;
        std::string error;
    };
    std::vector<Item> items(paths.size());
    std::mutex log_mu;
    parallel_for(paths.size(), workers(cfg), [&](std::size_t i) {
        items[i].name = paths[i].stem().string();
        try {
            const MerlBrdf m = load_merl(paths[i]);
            items[i].result = fit_nbrdf_single(m, fc);
        } catch (const Error& e) {
            items[i].error = e.what();
        }
        std::lock_guard<std::mutex> lock(log_mu);
        log << "fit: " << items[i].name << (items[i].error.empty() ? " done" : " FAILED: " + items[i].error) << "\n";
    });
    std::string summary = "material,status,best_epoch,best_val_loss\n";
    CommandOutcome outcome{paths.size(), 0};
    for (const auto& it : items) {
        if (!it.result) {
            ++outcome.failures;
            summary += it.name + ",failed,,\n";
            continue;
        }
        save_nbrdf(dir / (it.name + ".nbrdf"), it.result->weights);
        nlohmann::ordered_json meta;
        meta["material"] = it.name;
        meta["widths"] = it.result->weights.arch.widths;
        meta["seed"] = *fc.seed;
        meta["epochs"] = fc.epochs;
        meta["batch"] = fc.batch;
        meta["samples_per_epoch"] = fc.samples_per_epoch;
        meta["validation_samples"] = fc.validation_samples;
        meta["lr"] = fc.lr;
        meta["log_eps"] = fc.log_eps;
        meta["best_epoch"] = it.result->best_epoch;
        meta["best_val_loss"] = it.result->best_val_loss;
        write_file(dir / (it.name + ".nbrdf.json"), meta.dump(2) + "\n");
        std::string csv = "epoch,train_loss,val_loss\n";
        for (const auto& r : it.result->log) {
            csv += std::to_string(r.epoch) + "," + fmt_real(r.train_loss) + "," + fmt_real(r.val_loss) + "\n";
        }
        write_file(dir / (it.name + ".fit.csv"), csv);
        summary += it.name + ",ok," + std::to_string(it.result->best_epoch) + "," + fmt_real(it.result->best_val_loss) + "\n";
    }
    write_file(dir / "fit_summary.csv", summary);
    return outcome;
}

CommandOutcome cmd_train(const RunConfig& cfg, bool resume, std::ostream& log) {
    const auto paths = list_materials(cfg.get("dataset"));
    const TrainConfig tc = cfg.train_config();
    if (!tc.collapse_splits && paths.size() < 3) {
        fail(ErrorCode::Usage, "train needs at least 3 materials (found " + std::to_string(paths.size()) + ")");
    }
    const fs::path dir = out_dir(cfg);
    write_file(dir / "config.txt", cfg.echo());
    const std::vector<MerlBrdf> materials = load_all(paths);
    const auto spectra = cached_spectra(materials, tc, dir / "spectra", workers(cfg), log);

    std::optional<TrainState> state;
    std::string previous_rows;
    if (resume) {
        state = load_state(dir / "state", tc.lr);
        const std::string csv = read_text(dir / "train.csv");
        previous_rows = csv.substr(csv.find('\n') + 1);
        log << "train: resuming at epoch " << state->next_epoch << "\n";
    }
    const TrainResult result = train_autoencoder(materials, tc, state,
                                                 [&spectra](const MerlBrdf& m) { return spectra.at(m.name()); });

    std::string split_csv = "material,split\n";
    for (const auto& n : result.split.train) split_csv += n + ",train\n";
    for (const auto& n : result.split.val) split_csv += n + ",val\n";
    for (const auto& n : result.split.test) split_csv += n + ",test\n";
    write_file(dir / "split.csv", split_csv);

    std::string csv = "epoch,split,L_rec,L_fre,total\n" + previous_rows;
    for (const auto& r : result.report) csv += train_row(r);
    write_file(dir / "train.csv", csv);
    save_encoder(dir / "encoder.senc", result.encoder);
    save_decoder(dir / "decoder.hdec", result.decoder);
    save_state(dir / "state", result.state);
    log << "train: best validation epoch " << result.state.best_epoch << " (total " << fmt_real(result.state.best_val)
        << ")\n";
    return {paths.size(), 0};
}

CommandOutcome cmd_reconstruct(const RunConfig& cfg, const fs::path& checkpoint, const std::vector<fs::path>& materials,
                               std::ostream& log) {
    const Checkpoint ckpt = load_checkpoint(checkpoint, cfg);
    const auto paths = materials.empty() ? list_materials(cfg.get("dataset")) : materials;
    const fs::path dir = out_dir(cfg);
    const MlpArch nb = nbrdf_arch(cfg.integers("nbrdf_hidden"));
    fs::create_directories(dir / "reconstruct");
    std::vector<std::string> rows(paths.size());
    CommandOutcome outcome{paths.size(), 0};
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const std::string name = paths[i].stem().string();
        try {
            const MerlBrdf m = load_merl(paths[i]);
            const NbrdfWeights w = decode(ckpt.decoder, encode_material(cfg, ckpt, m), nb);
            const Comparison c = compare_to_truth(cfg, m, w);
            write_png(dir / "reconstruct" / (name + ".png"), side_by_side({&c.truth, &c.recon}));
            save_nbrdf(dir / "reconstruct" / (name + ".nbrdf"), w);
            rows[i] = name + "," + metrics_fields(c.metrics) + "\n";
            log << "reconstruct: " << name << " psnr " << fmt_real(c.metrics.psnr) << "\n";
        } catch (const Error& e) {
            ++outcome.failures;
            log << "reconstruct: " << name << " FAILED: " << e.what() << "\n";
        }
    }
    std::string csv = "material,rmse,psnr,ssim,L_fre\n";
    for (const auto& r : rows) csv += r;
    write_file(dir / "reconstruct.csv", csv);
    return outcome;
}

CommandOutcome cmd_edit(const RunConfig& cfg, const fs::path& checkpoint, const fs::path& a_path, const fs::path& b_path,
                        std::ostream& log) {
    const Checkpoint ckpt = load_checkpoint(checkpoint, cfg);
    const fs::path dir = out_dir(cfg);
    const std::vector<double> ts = cfg.reals("edit_t");
    if (ts.empty()) fail(ErrorCode::Config, "edit_t must list at least one weight");
    for (double t : ts) {
        if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::Domain, "edit weight " + fmt_real(t) + " lies outside [0, 1]");
    }
    const MerlBrdf a = load_merl(a_path);
    const MerlBrdf b = load_merl(b_path);
    const MlpArch nb = nbrdf_arch(cfg.integers("nbrdf_hidden"));
    const LatentCode za = encode_material(cfg, ckpt, a);
    const LatentCode zb = encode_material(cfg, ckpt, b);
    const std::string stem = a.name() + "__" + b.name();
    fs::create_directories(dir / "edit" / stem);
    std::string csv = "t,rmse,psnr,ssim,L_fre\n";
    std::vector<Image> recon_strip, truth_strip;
    CommandOutcome outcome{ts.size(), 0};
    for (std::size_t i = 0; i < ts.size(); ++i) {
        try {
            const NbrdfWeights w = decode(ckpt.decoder, interpolate_latent(za, zb, ts[i]), nb);
            const Comparison c = compare_to_truth(cfg, merl_ground_truth_interp(a, b, ts[i]), w);
            write_png(dir / "edit" / stem / ("t" + std::to_string(i) + ".png"), side_by_side({&c.truth, &c.recon}));
            csv += fmt_real(ts[i]) + "," + metrics_fields(c.metrics) + "\n";
            truth_strip.push_back(c.truth);
            recon_strip.push_back(c.recon);
        } catch (const Error& e) {
            ++outcome.failures;
            log << "edit: t = " << fmt_real(ts[i]) << " FAILED: " << e.what() << "\n";
        }
    }
    if (!recon_strip.empty()) {
        std::vector<const Image*> top, bottom;
        for (const auto& im : recon_strip) top.push_back(&im);
        for (const auto& im : truth_strip) bottom.push_back(&im);
        const Image r = side_by_side(top), t = side_by_side(bottom);
        Image strip(r.width, r.height + t.height);
        std::copy(r.pixels.begin(), r.pixels.end(), strip.pixels.begin());
        std::copy(t.pixels.begin(), t.pixels.end(), strip.pixels.begin() + static_cast<std::ptrdiff_t>(r.pixels.size()));
        write_png(dir / "edit" / stem / "strip.png", strip);
    }
    write_file(dir / ("edit_" + stem + ".csv"), csv);
    log << "edit: " << stem << " wrote " << ts.size() - outcome.failures << " renders\n";
    return outcome;
}

CommandOutcome cmd_edit_batch(const RunConfig& cfg, const fs::path& checkpoint, std::ostream& log) {
    const Checkpoint ckpt = load_checkpoint(checkpoint, cfg);
    const auto paths = list_materials(cfg.get("dataset"));
    if (paths.size() < 2) fail(ErrorCode::Usage, "edit batch mode needs at least 2 materials");
    const fs::path dir = out_dir(cfg);
    const std::size_t pairs = cfg.integer("edit_pairs");
    const MlpArch nb = nbrdf_arch(cfg.integers("nbrdf_hidden"));
    const std::vector<MerlBrdf> materials = load_all(paths);
    std::vector<LatentCode> codes;
    for (const auto& m : materials) codes.push_back(encode_material(cfg, ckpt, m));

    struct Pair {
        std::size_t a, b;
        double t;
    };
    std::vector<Pair> plan(pairs);
    Rng rng(cfg.integer("seed"), "edit.pairs");
    for (auto& p : plan) {
        p.a = rng.below(materials.size());
        p.b = rng.below(materials.size() - 1);
        if (p.b >= p.a) ++p.b;
        p.t = rng.uniform();
    }
    std::string csv = "pair,a,b,t,rmse,psnr,ssim,L_fre\n";
    CommandOutcome outcome{pairs, 0};
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const Pair& p = plan[i];
        try {
            const NbrdfWeights w = decode(ckpt.decoder, interpolate_latent(codes[p.a], codes[p.b], p.t), nb);
            const Comparison c = compare_to_truth(cfg, merl_ground_truth_interp(materials[p.a], materials[p.b], p.t), w);
            csv += std::to_string(i) + "," + materials[p.a].name() + "," + materials[p.b].name() + "," + fmt_real(p.t) +
                   "," + metrics_fields(c.metrics) + "\n";
        } catch (const Error& e) {
            ++outcome.failures;
            log << "edit: pair " << i << " FAILED: " << e.what() << "\n";
        }
        if ((i + 1) % 10 == 0) log << "edit: " << i + 1 << "/" << pairs << " pairs\n";
    }
    write_file(dir / "edit_batch.csv", csv);
    return outcome;
}

CommandOutcome cmd_analyze_freq(const RunConfig& cfg, const std::vector<fs::path>& inputs, std::ostream& log) {
    const auto paths = inputs.empty() ? list_materials(cfg.get("dataset")) : inputs;
    const fs::path dir = out_dir(cfg);
    const TrainConfig tc = cfg.train_config();
    CommandOutcome outcome{paths.size(), 0};
    std::string summary = "input,l,power\n";
    for (const auto& path : paths) {
        const std::string name = path.stem().string();
        try {
            std::vector<ShSpectrum> spectra;
            if (path.extension() == ".nbrdf") {
                spectra = nbrdf_spectra(load_nbrdf(path), tc.sh);
            } else {
                spectra = ground_truth_spectra(load_merl(path), tc.sh);
            }
            std::ostringstream os;
            write_spectra_csv(os, spectra);
            write_file(dir / "freq" / (name + "_spectra.csv"), os.str());
            std::string bp = "slice,channel,l,power\n";
            std::vector<double> total(static_cast<std::size_t>(tc.sh.band_limit) + 1, 0.0);
            for (const auto& s : spectra) {
                const auto p = band_power(s);
                for (std::size_t c = 0; c < 3; ++c) {
                    for (std::size_t l = 0; l < p[c].size(); ++l) {
                        bp += std::to_string(s.slice_id) + "," + std::to_string(c) + "," + std::to_string(l) + "," +
                              fmt_real(p[c][l]) + "\n";
                        total[l] += p[c][l];
                    }
                }
            }
            write_file(dir / "freq" / (name + "_band_power.csv"), bp);
            for (std::size_t l = 0; l < total.size(); ++l) summary += name + "," + std::to_string(l) + "," + fmt_real(total[l]) + "\n";
            log << "analyze-freq: " << name << "\n";
        } catch (const Error& e) {
            ++outcome.failures;
            log << "analyze-freq: " << name << " FAILED: " << e.what() << "\n";
        }
    }
    write_file(dir / "freq_summary.csv", summary);
    return outcome;
}

CommandOutcome cmd_report(const RunConfig& cfg, const std::vector<fs::path>& csvs, std::ostream& log) {
    const Report r = build_report(csvs);
    const fs::path dir = out_dir(cfg) / "report";
    write_report(r, dir);
    load_report(dir);
    for (const auto& a : r.aggregates) {
        log << "report: " << a.metric << " mean " << fmt_real(a.mean) << " variance " << fmt_real(a.variance) << "\n";
    }
    return {r.values.size(), 0};
}

}  // namespace nbk
