// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "csv.hpp"
#include "error.hpp"

namespace nbk {

const std::vector<std::string>& report_metric_names() {
    static const std::vector<std::string> names = {"rmse", "psnr", "ssim", "L_fre"};
    return names;
}

MetricAggregate aggregate(const std::string& metric, const std::vector<double>& values) {
    MetricAggregate a;
    a.metric = metric;
    double sum = 0.0;
    for (double v : values) {
        if (std::isfinite(v)) {
            sum += v;
            ++a.count;
        } else {
            ++a.nonfinite;
        }
    }
    if (a.count == 0) return a;
    a.mean = sum / static_cast<double>(a.count);
    double ss = 0.0;
    for (double v : values) {
        if (std::isfinite(v)) ss += (v - a.mean) * (v - a.mean);
    }
    a.variance = ss / static_cast<double>(a.count);
    return a;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, std::size_t bins) {
    if (bins == 0) fail(ErrorCode::Domain, "histogram needs at least one bin");
    double lo = INFINITY, hi = -INFINITY;
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<HistogramBin> out(bins);
    if (!(lo <= hi)) return out;
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].lo = lo + width * static_cast<double>(b);
        out[b].hi = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    }
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        std::size_t b = 0;
        if (width > 0.0) b = std::min(bins - 1, static_cast<std::size_t>((v - lo) / width));
        ++out[b].count;
    }
    return out;
}

namespace {

void finish(Report& r) {
    r.aggregates.clear();
    r.histograms.clear();
    for (std::size_t m = 0; m < r.metrics.size(); ++m) {
        std::vector<double> col;
        for (const auto& row : r.values) col.push_back(row[m]);
        r.aggregates.push_back(aggregate(r.metrics[m], col));
        r.histograms.push_back(histogram(col));
    }
}

bool same_value(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    return a == b || std::fabs(a - b) <= 1e-12 * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace

Report build_report(const std::vector<std::filesystem::path>& csvs) {
    if (csvs.empty()) fail(ErrorCode::Usage, "report needs at least one metrics CSV");
    Report r;
    for (const auto& path : csvs) {
        const CsvTable t = read_csv(path);
        std::vector<std::size_t> cols;
        std::vector<std::string> present;
        for (const auto& name : report_metric_names()) {
            if (std::find(t.header.begin(), t.header.end(), name) != t.header.end()) {
                present.push_back(name);
                cols.push_back(t.column(name));
            }
        }
        if (present.empty()) fail(ErrorCode::Format, path.string() + ": no metric columns (rmse, psnr, ssim, L_fre)");
        if (r.metrics.empty()) {
            r.metrics = present;
        } else if (r.metrics != present) {
            fail(ErrorCode::Format, path.string() + ": metric columns differ from the first CSV");
        }
        std::size_t label_col = t.header.size();
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            if (std::find(present.begin(), present.end(), t.header[i]) == present.end()) {
                label_col = i;
                break;
            }
        }
        for (std::size_t row = 0; row < t.rows.size(); ++row) {
            r.labels.push_back(label_col < t.header.size() ? t.rows[row][label_col] : std::to_string(r.labels.size()));
            std::vector<double> vals;
            for (std::size_t c : cols) vals.push_back(parse_real(t.rows[row][c]));
            r.values.push_back(std::move(vals));
        }
    }
    if (r.values.empty()) fail(ErrorCode::Usage, "report input has no rows");
    finish(r);
    return r;
}

void write_report(const Report& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "rows.csv");
        out << "label";
        for (const auto& m : r.metrics) out << ',' << m;
        out << '\n';
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            out << r.labels[i];
            for (double v : r.values[i]) out << ',' << fmt_real(v);
            out << '\n';
        }
        if (!out) fail(ErrorCode::Io, "failed to write " + (dir / "rows.csv").string());
    }
    {
        std::ofstream out(dir / "aggregate.csv");
        out << "metric,count,nonfinite,mean,variance\n";
        for (const auto& a : r.aggregates) {
            out << a.metric << ',' << a.count << ',' << a.nonfinite << ',' << fmt_real(a.mean) << ','
                << fmt_real(a.variance) << '\n';
        }
        if (!out) fail(ErrorCode::Io, "failed to write " + (dir / "aggregate.csv").string());
    }
    {
        std::ofstream out(dir / "histogram.csv");
        out << "metric,bin,lo,hi,count\n";
        for (std::size_t m = 0; m < r.metrics.size(); ++m) {
            for (std::size_t b = 0; b < r.histograms[m].size(); ++b) {
                const auto& bin = r.histograms[m][b];
                out << r.metrics[m] << ',' << b << ',' << fmt_real(bin.lo) << ',' << fmt_real(bin.hi) << ',' << bin.count
                    << '\n';
            }
        }
        if (!out) fail(ErrorCode::Io, "failed to write " + (dir / "histogram.csv").string());
    }
}

Report load_report(const std::filesystem::path& dir) {
    Report r = build_report({dir / "rows.csv"});
    const CsvTable agg = read_csv(dir / "aggregate.csv");
    if (agg.rows.size() != r.metrics.size()) fail(ErrorCode::Format, "aggregate.csv does not list every metric");
    for (std::size_t m = 0; m < r.metrics.size(); ++m) {
        const auto& row = agg.rows[m];
        const MetricAggregate& a = r.aggregates[m];
        if (row[agg.column("metric")] != a.metric || std::stoull(row[agg.column("count")]) != a.count ||
            !same_value(parse_real(row[agg.column("mean")]), a.mean) ||
            !same_value(parse_real(row[agg.column("variance")]), a.variance)) {
            fail(ErrorCode::Format, "aggregate for '" + a.metric + "' does not match the rows");
        }
    }
    return r;
}

}  // namespace nbk
