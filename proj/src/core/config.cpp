// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "error.hpp"

namespace nbk {

namespace {

enum class Kind { Text, Real, Integer, Bool, Reals, Integers };

struct Knob {
    KnobInfo info;
    Kind kind;
};

const std::vector<Knob>& knobs() {
    static const std::vector<Knob> table = {
        {{"seed", "1", "root seed for every random stream"}, Kind::Integer},
        {{"dataset", "", "directory of .binary materials"}, Kind::Text},
        {{"out", "out", "output directory"}, Kind::Text},
        {{"threads", "0", "worker threads (0 = hardware concurrency)"}, Kind::Integer},
        {{"latent", "32", "latent code length Z"}, Kind::Integer},
        {{"encoder_hidden", "128,128", "encoder hidden widths"}, Kind::Integers},
        {{"decoder_hidden", "256,512", "decoder hidden widths"}, Kind::Integers},
        {{"nbrdf_hidden", "21,21", "NBRDF hidden widths"}, Kind::Integers},
        {{"lambda1", "0.0001", "weight penalty on decoded NBRDF weights"}, Kind::Real},
        {{"lambda2", "0.0001", "penalty on latent codes"}, Kind::Real},
        {{"eta", "1", "frequency-rectification strength"}, Kind::Real},
        {{"loss_samples", "512", "loss samples per material and step"}, Kind::Integer},
        {{"set_size", "1024", "samples in each encoder input set"}, Kind::Integer},
        {{"epochs", "100", "training epochs"}, Kind::Integer},
        {{"steps_per_epoch", "10", "optimiser steps per epoch"}, Kind::Integer},
        {{"lr", "0.0005", "autoencoder learning rate"}, Kind::Real},
        {{"train_fraction", "0.7", "training split fraction"}, Kind::Real},
        {{"val_fraction", "0.1", "validation split fraction"}, Kind::Real},
        {{"test_fraction", "0.2", "test split fraction"}, Kind::Real},
        {{"collapse_splits", "false", "use every material in all splits"}, Kind::Bool},
        {{"sh_band_limit", "4", "spherical-harmonic band limit L"}, Kind::Integer},
        {{"sh_slices", "2", "sphere slices per material"}, Kind::Integer},
        {{"sh_k", "8", "nearest neighbours for sphere interpolation"}, Kind::Integer},
        {{"sh_sigma", "0.1", "Gaussian width for sphere interpolation"}, Kind::Real},
        {{"log_eps", "0.001", "epsilon of the log-relative mapping"}, Kind::Real},
        {{"rec_domain", "linear", "reconstruction L1 domain during training: linear or log"}, Kind::Text},
        {{"set_reference", "1", "encoder set reference reflectance, or 'median' for per-material"}, Kind::Text},
        {{"fit_epochs", "100", "single-material fit epochs"}, Kind::Integer},
        {{"fit_batch", "512", "single-material fit batch size"}, Kind::Integer},
        {{"fit_samples_per_epoch", "51200", "samples drawn per fit epoch"}, Kind::Integer},
        {{"fit_validation_samples", "4096", "fit validation samples"}, Kind::Integer},
        {{"fit_lr", "0.0005", "single-material learning rate"}, Kind::Real},
        {{"fit_lr_decay", "1", "final-to-initial learning-rate ratio of a fit"}, Kind::Real},
        {{"render_width", "256", "render width in pixels"}, Kind::Integer},
        {{"render_height", "256", "render height in pixels"}, Kind::Integer},
        {{"light_dir", "1,1,1", "light direction (normalised on use)"}, Kind::Reals},
        {{"light_intensity", "1,1,1", "light RGB intensity"}, Kind::Reals},
        {{"background", "0,0,0", "background RGB"}, Kind::Reals},
        {{"gamma", "2.2", "display gamma"}, Kind::Real},
        {{"peak", "1", "peak value for PSNR and SSIM"}, Kind::Real},
        {{"edit_t", "0,0.2,0.4,0.6,0.8,1", "interpolation weights for edit"}, Kind::Reals},
        {{"edit_pairs", "2000", "random pairs in edit batch mode"}, Kind::Integer},
        {{"synth_count", "12", "materials written by synth"}, Kind::Integer},
    };
    return table;
}

const Knob& find_knob(const std::string& key) {
    for (const auto& k : knobs()) {
        if (key == k.info.key) return k;
    }
    fail(ErrorCode::Config, "unknown configuration key '" + key + "'");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

double to_real(const std::string& key, const std::string& text) {
    try {
        const double v = parse_real(text);
        if (!std::isfinite(v)) throw Error(ErrorCode::Config, "");
        return v;
    } catch (const Error&) {
        fail(ErrorCode::Config, "configuration key '" + key + "': '" + text + "' is not a finite number");
    }
}

std::uint64_t to_integer(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, v);
    if (text.empty() || r.ec != std::errc() || r.ptr != end) {
        fail(ErrorCode::Config, "configuration key '" + key + "': '" + text + "' is not a non-negative integer");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    fail(ErrorCode::Config, "configuration key '" + key + "': '" + text + "' is not a boolean");
}

void check_value(const Knob& k, const std::string& value) {
    const std::string key = k.info.key;
    switch (k.kind) {
        case Kind::Text: break;
        case Kind::Real: to_real(key, value); break;
        case Kind::Integer: to_integer(key, value); break;
        case Kind::Bool: to_bool(key, value); break;
        case Kind::Reals:
            for (const auto& item : split_list(value)) to_real(key, item);
            break;
        case Kind::Integers:
            for (const auto& item : split_list(value)) to_integer(key, item);
            break;
    }
}

Rgb triple(const RunConfig& cfg, const std::string& key) {
    const auto v = cfg.reals(key);
    if (v.size() != 3) fail(ErrorCode::Config, "configuration key '" + key + "' needs three values");
    return {v[0], v[1], v[2]};
}

}  // namespace

const std::vector<KnobInfo>& config_knobs() {
    static const std::vector<KnobInfo> infos = [] {
        std::vector<KnobInfo> out;
        for (const auto& k : knobs()) out.push_back(k.info);
        return out;
    }();
    return infos;
}

std::string config_env_name(const std::string& key) {
    std::string out = "NBK_";
    for (char c : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

RunConfig::RunConfig() {
    for (const auto& k : knobs()) values_[k.info.key] = k.info.default_value;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const Knob& k = find_knob(key);
    const std::string v = trim(value);
    check_value(k, v);
    values_[key] = v;
}

void RunConfig::apply_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            fail(ErrorCode::Config, origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        try {
            set(trim(t.substr(0, eq)), t.substr(eq + 1));
        } catch (const Error& e) {
            fail(ErrorCode::Config, origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void RunConfig::apply_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_text(ss.str(), path.string());
}

void RunConfig::apply_environment() {
    for (const auto& k : knobs()) {
        const std::string name = config_env_name(k.info.key);
        if (const char* v = std::getenv(name.c_str())) {
            try {
                set(k.info.key, v);
            } catch (const Error& e) {
                fail(ErrorCode::Config, "environment variable " + name + ": " + e.what());
            }
        }
    }
}

const std::string& RunConfig::get(const std::string& key) const {
    find_knob(key);
    return values_.at(key);
}

double RunConfig::real(const std::string& key) const {
    return to_real(key, get(key));
}

std::uint64_t RunConfig::integer(const std::string& key) const {
    return to_integer(key, get(key));
}

bool RunConfig::boolean(const std::string& key) const {
    return to_bool(key, get(key));
}

std::vector<double> RunConfig::reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(get(key))) out.push_back(to_real(key, item));
    return out;
}

std::vector<std::size_t> RunConfig::integers(const std::string& key) const {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(get(key))) out.push_back(to_integer(key, item));
    return out;
}

std::string RunConfig::echo() const {
    std::string out;
    for (const auto& k : knobs()) out += std::string(k.info.key) + " = " + values_.at(k.info.key) + "\n";
    return out;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig c;
    c.arch.latent = integer("latent");
    c.arch.encoder_hidden = integers("encoder_hidden");
    c.arch.decoder_hidden = integers("decoder_hidden");
    c.arch.nbrdf_hidden = integers("nbrdf_hidden");
    c.lambda1 = real("lambda1");
    c.lambda2 = real("lambda2");
    c.eta = real("eta");
    c.loss_samples = integer("loss_samples");
    c.set_size = integer("set_size");
    c.epochs = integer("epochs");
    c.steps_per_epoch = integer("steps_per_epoch");
    c.lr = real("lr");
    c.seed = integer("seed");
    c.train_fraction = real("train_fraction");
    c.val_fraction = real("val_fraction");
    c.test_fraction = real("test_fraction");
    c.collapse_splits = boolean("collapse_splits");
    c.sh.band_limit = static_cast<int>(integer("sh_band_limit"));
    c.sh.slices = integer("sh_slices");
    c.sh.interp.k = integer("sh_k");
    c.sh.interp.sigma = real("sh_sigma");
    c.log_eps = real("log_eps");
    const std::string& domain = get("rec_domain");
    if (domain == "linear") {
        c.rec_domain = RecDomain::Linear;
    } else if (domain == "log") {
        c.rec_domain = RecDomain::Log;
    } else {
        fail(ErrorCode::Config, "rec_domain must be 'linear' or 'log', got '" + domain + "'");
    }
    const std::string& reference = get("set_reference");
    if (reference == "median") {
        c.set_reference.reset();
    } else {
        c.set_reference = to_real("set_reference", reference);
    }
    c.validate();
    return c;
}

FitConfig RunConfig::fit_config() const {
    FitConfig c;
    c.epochs = integer("fit_epochs");
    c.batch = integer("fit_batch");
    c.samples_per_epoch = integer("fit_samples_per_epoch");
    c.validation_samples = integer("fit_validation_samples");
    c.lr = real("fit_lr");
    c.lr_decay = real("fit_lr_decay");
    c.seed = integer("seed");
    c.log_eps = real("log_eps");
    c.hidden = integers("nbrdf_hidden");
    return c;
}

SceneSpec RunConfig::scene() const {
    SceneSpec s;
    const Rgb d = triple(*this, "light_dir");
    const Vec3 v{d[0], d[1], d[2]};
    if (length(v) == 0.0) fail(ErrorCode::Config, "light_dir must be non-zero");
    s.light_dir = normalize(v);
    s.intensity = triple(*this, "light_intensity");
    s.background = triple(*this, "background");
    s.gamma = real("gamma");
    s.validate();
    return s;
}

}  // namespace nbk
