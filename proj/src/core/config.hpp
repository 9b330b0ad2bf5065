// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "autoencoder.hpp"
#include "nbrdf.hpp"
#include "render.hpp"

namespace nbk {

struct KnobInfo {
    const char* key;
    const char* default_value;
    const char* help;
};

/// Every configuration key with its default, in echo order.
const std::vector<KnobInfo>& config_knobs();

/// Environment variable that overrides `key`: prefix NBK_ plus the key in
/// upper case.
std::string config_env_name(const std::string& key);

/// Flat key/value configuration. Values are stored as text and validated
/// when set; typed accessors parse them on demand.
class RunConfig {
public:
    /// All keys at their defaults.
    RunConfig();

    /// Applies `key = value` lines. Blank lines and lines starting with '#'
    /// are ignored; unknown keys and malformed lines are config errors that
    /// name the line.
    void apply_text(const std::string& text, const std::string& origin = "<config>");
    void apply_file(const std::filesystem::path& path);
    /// Applies NBK_<KEY> variables found in the process environment.
    void apply_environment();
    void set(const std::string& key, const std::string& value);

    const std::string& get(const std::string& key) const;
    double real(const std::string& key) const;
    std::uint64_t integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
    std::vector<std::size_t> integers(const std::string& key) const;

    /// Canonical `key = value` text, one line per knob; parsing it yields an
    /// equal configuration.
    std::string echo() const;

    TrainConfig train_config() const;
    FitConfig fit_config() const;
    SceneSpec scene() const;

    bool operator==(const RunConfig&) const = default;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace nbk
