// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace nbk {

inline constexpr std::size_t kHistogramBins = 20;

/// Metric columns recognised in per-material CSV tables.
const std::vector<std::string>& report_metric_names();

struct MetricAggregate {
    std::string metric;
    std::size_t count = 0;      // finite values
    std::size_t nonfinite = 0;  // e.g. PSNR of identical images
    double mean = 0.0;
    double variance = 0.0;  // population variance
};

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

struct Report {
    std::vector<std::string> metrics;  // metric columns present
    std::vector<std::string> labels;   // one per row (material or pair)
    std::vector<std::vector<double>> values;  // [row][metric]
    std::vector<MetricAggregate> aggregates;
    std::vector<std::vector<HistogramBin>> histograms;  // per metric
};

/// Mean and population variance over the finite values.
MetricAggregate aggregate(const std::string& metric, const std::vector<double>& values);

/// Twenty equal bins over the observed finite range; a degenerate range
/// puts every value in the first bin.
std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins = kHistogramBins);

/// Merges the rows of metric CSVs. Row labels come from the first
/// non-metric column. Empty input is a usage error.
Report build_report(const std::vector<std::filesystem::path>& csvs);

/// Writes rows.csv, aggregate.csv and histogram.csv into `dir`.
void write_report(const Report& r, const std::filesystem::path& dir);

/// Reads a written report and checks that the aggregates match the rows.
Report load_report(const std::filesystem::path& dir);

}  // namespace nbk
