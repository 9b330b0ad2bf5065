// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "nbrdfkit/nbrdfkit.h"

#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "error.hpp"
#include "merl.hpp"
#include "nbrdf.hpp"
#include "synthetic.hpp"

struct nbk_config {
    nbk::RunConfig cfg;
};
struct nbk_brdf {
    nbk::MerlBrdf brdf;
};
struct nbk_nbrdf {
    nbk::NbrdfWeights w;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
nbk_status guarded(Fn&& fn) {
    g_last_error.clear();
    try {
        return fn();
    } catch (const nbk::Error& e) {
        g_last_error = e.what();
        return static_cast<nbk_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return NBK_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return NBK_ERR_INTERNAL;
    }
}

nbk_status require(const void* p, const char* what) {
    if (p) return NBK_OK;
    g_last_error = std::string(what) + " must not be NULL";
    return NBK_ERR_USAGE;
}

nbk_status copy_out(const std::string& s, char* buf, std::size_t size, std::size_t* needed) {
    if (needed) *needed = s.size() + 1;
    if (!buf || size < s.size() + 1) {
        nbk::fail(nbk::ErrorCode::Shape, "buffer too small: need " + std::to_string(s.size() + 1) + " bytes");
    }
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return NBK_OK;
}

nbk::RusinCoords coords(double theta_h, double theta_d, double phi_d) {
    nbk::RusinCoords c;
    c.theta_h = theta_h;
    c.theta_d = theta_d;
    c.phi_d = phi_d;
    nbk::validate_coords(c);
    return c;
}

std::vector<std::filesystem::path> paths(const char* const* list, std::size_t count) {
    if (count > 0 && !list) nbk::fail(nbk::ErrorCode::Usage, "path list must not be NULL");
    std::vector<std::filesystem::path> out;
    for (std::size_t i = 0; i < count; ++i) {
        if (!list[i]) nbk::fail(nbk::ErrorCode::Usage, "path list entry must not be NULL");
        out.emplace_back(list[i]);
    }
    return out;
}

std::ostream& log_stream(int verbose) {
    static thread_local std::ostringstream sink;
    sink.str("");
    return verbose ? std::cerr : sink;
}

nbk_status outcome(const nbk::CommandOutcome& o) {
    if (o.failures == 0) return NBK_OK;
    g_last_error = std::to_string(o.failures) + " of " + std::to_string(o.items) + " items failed";
    return NBK_ERR_PARTIAL;
}

}  // namespace

extern "C" {

const char* nbk_version(void) {
    return "0.1.0";
}

const char* nbk_last_error(void) {
    return g_last_error.c_str();
}

const char* nbk_status_name(nbk_status status) {
    switch (status) {
        case NBK_OK: return "ok";
        case NBK_ERR_FORMAT: return "format error";
        case NBK_ERR_IO: return "i/o error";
        case NBK_ERR_DOMAIN: return "domain error";
        case NBK_ERR_SHAPE: return "shape error";
        case NBK_ERR_STATE: return "state error";
        case NBK_ERR_NUMERIC: return "numeric error";
        case NBK_ERR_CONFIG: return "configuration error";
        case NBK_ERR_USAGE: return "usage error";
        case NBK_ERR_PARTIAL: return "partial failure";
        case NBK_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

nbk_status nbk_config_new(nbk_config** out) {
    if (auto s = require(out, "out")) return s;
    return guarded([&] {
        *out = new nbk_config{};
        return NBK_OK;
    });
}

void nbk_config_free(nbk_config* cfg) {
    delete cfg;
}

nbk_status nbk_config_set(nbk_config* cfg, const char* key, const char* value) {
    if (auto s = require(cfg, "cfg")) return s;
    if (auto s = require(key, "key")) return s;
    if (auto s = require(value, "value")) return s;
    return guarded([&] {
        cfg->cfg.set(key, value);
        return NBK_OK;
    });
}

nbk_status nbk_config_apply_file(nbk_config* cfg, const char* path) {
    if (auto s = require(cfg, "cfg")) return s;
    if (auto s = require(path, "path")) return s;
    return guarded([&] {
        cfg->cfg.apply_file(path);
        return NBK_OK;
    });
}

nbk_status nbk_config_apply_env(nbk_config* cfg) {
    if (auto s = require(cfg, "cfg")) return s;
    return guarded([&] {
        cfg->cfg.apply_environment();
        return NBK_OK;
    });
}

nbk_status nbk_config_get(const nbk_config* cfg, const char* key, char* buf, size_t size, size_t* needed) {
    if (auto s = require(cfg, "cfg")) return s;
    if (auto s = require(key, "key")) return s;
    return guarded([&] { return copy_out(cfg->cfg.get(key), buf, size, needed); });
}

nbk_status nbk_config_echo(const nbk_config* cfg, char* buf, size_t size, size_t* needed) {
    if (auto s = require(cfg, "cfg")) return s;
    return guarded([&] { return copy_out(cfg->cfg.echo(), buf, size, needed); });
}

size_t nbk_config_key_count(void) {
    return nbk::config_knobs().size();
}

const char* nbk_config_key(size_t index) {
    const auto& k = nbk::config_knobs();
    return index < k.size() ? k[index].key : nullptr;
}

const char* nbk_config_key_help(size_t index) {
    const auto& k = nbk::config_knobs();
    return index < k.size() ? k[index].help : nullptr;
}

nbk_status nbk_brdf_load(const char* path, nbk_brdf** out) {
    if (auto s = require(path, "path")) return s;
    if (auto s = require(out, "out")) return s;
    return guarded([&] {
        *out = new nbk_brdf{nbk::load_merl(path)};
        return NBK_OK;
    });
}

nbk_status nbk_brdf_save(const nbk_brdf* brdf, const char* path) {
    if (auto s = require(brdf, "brdf")) return s;
    if (auto s = require(path, "path")) return s;
    return guarded([&] {
        nbk::save_merl(brdf->brdf, path);
        return NBK_OK;
    });
}

nbk_status nbk_brdf_phong(const char* name, const double kd[3], const double ks[3], double exponent, nbk_brdf** out) {
    if (auto s = require(name, "name")) return s;
    if (auto s = require(kd, "kd")) return s;
    if (auto s = require(ks, "ks")) return s;
    if (auto s = require(out, "out")) return s;
    return guarded([&] {
        nbk::PhongParams p;
        p.kd = {kd[0], kd[1], kd[2]};
        p.ks = {ks[0], ks[1], ks[2]};
        p.exponent = exponent;
        *out = new nbk_brdf{nbk::synthesize_phong(name, p)};
        return NBK_OK;
    });
}

void nbk_brdf_free(nbk_brdf* brdf) {
    delete brdf;
}

nbk_status nbk_brdf_lookup(const nbk_brdf* brdf, double theta_h, double theta_d, double phi_d, double rgb[3], int* valid) {
    if (auto s = require(brdf, "brdf")) return s;
    if (auto s = require(rgb, "rgb")) return s;
    return guarded([&] {
        const nbk::LookupResult r = nbk::lookup(brdf->brdf, coords(theta_h, theta_d, phi_d));
        for (int c = 0; c < 3; ++c) rgb[c] = r.rgb[c];
        if (valid) *valid = r.valid ? 1 : 0;
        return NBK_OK;
    });
}

nbk_status nbk_nbrdf_load(const char* path, nbk_nbrdf** out) {
    if (auto s = require(path, "path")) return s;
    if (auto s = require(out, "out")) return s;
    return guarded([&] {
        *out = new nbk_nbrdf{nbk::load_nbrdf(path)};
        return NBK_OK;
    });
}

void nbk_nbrdf_free(nbk_nbrdf* w) {
    delete w;
}

nbk_status nbk_nbrdf_eval(const nbk_nbrdf* w, double theta_h, double theta_d, double phi_d, double rgb[3]) {
    if (auto s = require(w, "w")) return s;
    if (auto s = require(rgb, "rgb")) return s;
    return guarded([&] {
        const nbk::Rgb v = nbk::nbrdf_eval(w->w, coords(theta_h, theta_d, phi_d));
        for (int c = 0; c < 3; ++c) rgb[c] = v[c];
        return NBK_OK;
    });
}

nbk_status nbk_cmd_synth(const nbk_config* cfg, int verbose) {
    if (auto s = require(cfg, "cfg")) return s;
    return guarded([&] { return outcome(nbk::cmd_synth(cfg->cfg, log_stream(verbose))); });
}

nbk_status nbk_cmd_fit(const nbk_config* cfg, int verbose) {
    if (auto s = require(cfg, "cfg")) return s;
    return guarded([&] { return outcome(nbk::cmd_fit(cfg->cfg, log_stream(verbose))); });
}

nbk_status nbk_cmd_train(const nbk_config* cfg, int resume, int verbose) {
    if (auto s = require(cfg, "cfg")) return s;
    return guarded([&] { return outcome(nbk::cmd_train(cfg->cfg, resume != 0, log_stream(verbose))); });
}

nbk_status nbk_cmd_reconstruct(const nbk_config* cfg, const char* checkpoint, const char* const* materials, size_t count,
                               int verbose) {
    if (auto s = require(cfg, "cfg")) return s;
    if (auto s = require(checkpoint, "checkpoint")) return s;
    return guarded([&] {
        return outcome(nbk::cmd_reconstruct(cfg->cfg, checkpoint, paths(materials, count), log_stream(verbose)));
    });
}

nbk_status nbk_cmd_edit(const nbk_config* cfg, const char* checkpoint, const char* material_a, const char* material_b,
                        int verbose) {
    if (auto s = require(cfg, "cfg")) return s;
    if (auto s = require(checkpoint, "checkpoint")) return s;
    if (auto s = require(material_a, "material_a")) return s;
    if (auto s = require(material_b, "material_b")) return s;
    return guarded([&] {
        return outcome(nbk::cmd_edit(cfg->cfg, checkpoint, material_a, material_b, log_stream(verbose)));
    });
}

nbk_status nbk_cmd_edit_batch(const nbk_config* cfg, const char* checkpoint, int verbose) {
    if (auto s = require(cfg, "cfg")) return s;
    if (auto s = require(checkpoint, "checkpoint")) return s;
    return guarded([&] { return outcome(nbk::cmd_edit_batch(cfg->cfg, checkpoint, log_stream(verbose))); });
}

nbk_status nbk_cmd_analyze_freq(const nbk_config* cfg, const char* const* inputs, size_t count, int verbose) {
    if (auto s = require(cfg, "cfg")) return s;
    return guarded([&] { return outcome(nbk::cmd_analyze_freq(cfg->cfg, paths(inputs, count), log_stream(verbose))); });
}

nbk_status nbk_cmd_report(const nbk_config* cfg, const char* const* csvs, size_t count, int verbose) {
    if (auto s = require(cfg, "cfg")) return s;
    return guarded([&] { return outcome(nbk::cmd_report(cfg->cfg, paths(csvs, count), log_stream(verbose))); });
}

}  // extern "C"
