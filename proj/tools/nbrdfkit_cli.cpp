// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Everything goes through the C interface.

#include <nbrdfkit/nbrdfkit.h>

#include <CLI11.hpp>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace {

struct ConfigHandle {
    nbk_config* ptr = nullptr;
    ~ConfigHandle() { nbk_config_free(ptr); }
};

int report(nbk_status s, const char* what) {
    if (s == NBK_OK) return 0;
    std::fprintf(stderr, "nbrdfkit %s: %s: %s\n", what, nbk_status_name(s), nbk_last_error());
    return static_cast<int>(s);
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
    std::vector<const char*> out;
    for (const auto& s : v) out.push_back(s.c_str());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neural BRDF fitting, set autoencoder training and frequency analysis"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    app.set_version_flag("--version", nbk_version());

    std::string config_path;
    std::optional<std::string> seed, out, eta, set_size, dataset;
    std::vector<std::string> overrides;
    bool quiet = false;
    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "root random seed");
    app.add_option("--out", out, "output directory");
    app.add_option("--eta", eta, "frequency-rectification strength (0 = baseline)");
    app.add_option("--set-size", set_size, "samples per encoder input set");
    app.add_option("--dataset", dataset, "directory of .binary materials");
    app.add_option("--set", overrides, "override any configuration key (key=value, repeatable)");
    app.add_flag("-q,--quiet", quiet, "suppress progress output");

    auto* synth = app.add_subcommand("synth", "write the synthetic material family");

    auto* fit = app.add_subcommand("fit", "fit one NBRDF per material");

    bool resume = false;
    auto* train = app.add_subcommand("train", "train the set autoencoder");
    train->add_flag("--resume", resume, "continue from the saved state in the output directory");

    std::string checkpoint;
    std::vector<std::string> materials;
    auto* recon = app.add_subcommand("reconstruct", "encode, decode, render and score materials");
    recon->add_option("--checkpoint", checkpoint, "training output directory")->required();
    recon->add_option("materials", materials, "material files (default: the dataset)");

    std::string mat_a, mat_b;
    bool batch = false;
    auto* edit = app.add_subcommand("edit", "interpolate between two materials in latent space");
    edit->add_option("--checkpoint", checkpoint, "training output directory")->required();
    edit->add_option("material_a", mat_a, "first material file");
    edit->add_option("material_b", mat_b, "second material file");
    edit->add_flag("--batch", batch, "score edit_pairs random pairs from the dataset instead");

    std::vector<std::string> inputs;
    auto* freq = app.add_subcommand("analyze-freq", "spherical-harmonic spectra and band power");
    freq->add_option("inputs", inputs, ".binary or .nbrdf files (default: the dataset)");

    std::vector<std::string> csvs;
    auto* rep = app.add_subcommand("report", "histograms and aggregates of metric CSVs");
    rep->add_option("csvs", csvs, "metric CSV files")->required();

    CLI11_PARSE(app, argc, argv);

    ConfigHandle cfg;
    if (int rc = report(nbk_config_new(&cfg.ptr), "config")) return rc;
    if (!config_path.empty()) {
        if (int rc = report(nbk_config_apply_file(cfg.ptr, config_path.c_str()), "config")) return rc;
    }
    if (int rc = report(nbk_config_apply_env(cfg.ptr), "environment")) return rc;
    const std::pair<const char*, const std::optional<std::string>*> flags[] = {
        {"seed", &seed}, {"out", &out}, {"eta", &eta}, {"set_size", &set_size}, {"dataset", &dataset}};
    for (const auto& [key, value] : flags) {
        if (*value) {
            if (int rc = report(nbk_config_set(cfg.ptr, key, (*value)->c_str()), "option")) return rc;
        }
    }
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "nbrdfkit: --set expects key=value, got '%s'\n", kv.c_str());
            return NBK_ERR_USAGE;
        }
        const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        if (int rc = report(nbk_config_set(cfg.ptr, key.c_str(), value.c_str()), "option")) return rc;
    }

    const int verbose = quiet ? 0 : 1;
    if (*synth) return report(nbk_cmd_synth(cfg.ptr, verbose), "synth");
    if (*fit) return report(nbk_cmd_fit(cfg.ptr, verbose), "fit");
    if (*train) return report(nbk_cmd_train(cfg.ptr, resume ? 1 : 0, verbose), "train");
    if (*recon) {
        const auto list = c_strings(materials);
        return report(nbk_cmd_reconstruct(cfg.ptr, checkpoint.c_str(), list.data(), list.size(), verbose), "reconstruct");
    }
    if (*edit) {
        if (batch) return report(nbk_cmd_edit_batch(cfg.ptr, checkpoint.c_str(), verbose), "edit");
        if (mat_a.empty() || mat_b.empty()) {
            std::fprintf(stderr, "nbrdfkit edit: give two material files or --batch\n");
            return NBK_ERR_USAGE;
        }
        return report(nbk_cmd_edit(cfg.ptr, checkpoint.c_str(), mat_a.c_str(), mat_b.c_str(), verbose), "edit");
    }
    if (*freq) {
        const auto list = c_strings(inputs);
        return report(nbk_cmd_analyze_freq(cfg.ptr, list.data(), list.size(), verbose), "analyze-freq");
    }
    const auto list = c_strings(csvs);
    return report(nbk_cmd_report(cfg.ptr, list.data(), list.size(), verbose), "report");
}
