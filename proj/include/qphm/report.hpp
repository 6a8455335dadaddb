// Copyright 2026 The qphm Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include "qphm/data.hpp"
#include "qphm/hybrid.hpp"

// Metric files written by `train` and the human-readable tables printed by
// `train` and `eval`.
namespace qphm::report {

inline constexpr std::string_view kRunsHeader = "seed,train_acc,test_acc,train_loss,test_loss";
inline constexpr std::string_view kCurveHeader = "epoch,train_acc,train_loss";

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void write_run_rows(std::ostream &out, std::span<const hybrid::RunMetrics> runs) {
    out << kRunsHeader << '\n';
    for (const auto &r : runs) {
        out << r.seed << ',' << num(r.train_accuracy) << ',' << num(r.test_accuracy) << ','
            << num(r.train_loss) << ',' << num(r.test_loss) << '\n';
    }
}

} // namespace detail

/// Single run: its row followed by an identical `mean` row.
inline void write_runs_csv(std::ostream &out, const hybrid::RunMetrics &run) {
    detail::write_run_rows(out, std::span(&run, 1));
    out << "mean," << num(run.train_accuracy) << ',' << num(run.test_accuracy) << ','
        << num(run.train_loss) << ',' << num(run.test_loss) << '\n';
}

/// One row per run, then the report's `mean` and `std` rows.
inline void write_runs_csv(std::ostream &out, const hybrid::MultiRunReport &rep) {
    detail::write_run_rows(out, rep.runs);
    const hybrid::MetricSummary *s[4] = {&rep.train_accuracy, &rep.test_accuracy,
                                         &rep.train_loss, &rep.test_loss};
    out << "mean";
    for (const auto *m : s) {
        out << ',' << num(m->mean);
    }
    out << "\nstd";
    for (const auto *m : s) {
        out << ',' << num(m->std);
    }
    out << '\n';
}

inline void write_curve_csv(std::ostream &out, const hybrid::RunMetrics &run) {
    out << kCurveHeader << '\n';
    for (const auto &p : run.curve) {
        out << p.epoch << ',' << num(p.train_accuracy) << ',' << num(p.train_loss) << '\n';
    }
}

/// Raw counts and row percentages; rows are true labels.
inline void write_confusion_csv(std::ostream &out, const hybrid::ConfusionMatrix &cm) {
    using data::HealthState;
    out << "true_label";
    for (std::size_t c = 0; c < data::kNumClasses; ++c) {
        out << ",count_" << data::label_abbrev(static_cast<HealthState>(c));
    }
    for (std::size_t c = 0; c < data::kNumClasses; ++c) {
        out << ",pct_" << data::label_abbrev(static_cast<HealthState>(c));
    }
    out << '\n';
    for (std::size_t r = 0; r < data::kNumClasses; ++r) {
        out << data::label_abbrev(static_cast<HealthState>(r));
        for (std::size_t c = 0; c < data::kNumClasses; ++c) {
            out << ',' << cm.counts[r][c];
        }
        for (std::size_t c = 0; c < data::kNumClasses; ++c) {
            out << ',' << num(cm.row_percent(r, c));
        }
        out << '\n';
    }
}

/// Row-normalized percentages with ND/OR/IR labels.
inline std::string format_confusion(const hybrid::ConfusionMatrix &cm) {
    using data::HealthState;
    std::string s = "             predicted\n  true     ";
    char buf[64];
    for (std::size_t c = 0; c < data::kNumClasses; ++c) {
        std::snprintf(buf, sizeof buf, "%8s", std::string(data::label_abbrev(static_cast<HealthState>(c))).c_str());
        s += buf;
    }
    s += '\n';
    for (std::size_t r = 0; r < data::kNumClasses; ++r) {
        std::snprintf(buf, sizeof buf, "  %-8s ", std::string(data::label_abbrev(static_cast<HealthState>(r))).c_str());
        s += buf;
        for (std::size_t c = 0; c < data::kNumClasses; ++c) {
            std::snprintf(buf, sizeof buf, "%7.1f%%", cm.row_percent(r, c));
            s += buf;
        }
        s += '\n';
    }
    return s;
}

/// Four-metric summary, accuracies in percent.
inline std::string format_summary(const hybrid::MultiRunReport &rep) {
    char buf[160];
    std::string s;
    std::snprintf(buf, sizeof buf, "Training accuracy  %6.2f +- %.2f %%\n",
                  100.0 * rep.train_accuracy.mean, 100.0 * rep.train_accuracy.std);
    s += buf;
    std::snprintf(buf, sizeof buf, "Testing accuracy   %6.2f +- %.2f %%\n",
                  100.0 * rep.test_accuracy.mean, 100.0 * rep.test_accuracy.std);
    s += buf;
    std::snprintf(buf, sizeof buf, "Training loss      %8.4f +- %.4f\n", rep.train_loss.mean,
                  rep.train_loss.std);
    s += buf;
    std::snprintf(buf, sizeof buf, "Testing loss       %8.4f +- %.4f\n", rep.test_loss.mean,
                  rep.test_loss.std);
    s += buf;
    return s;
}

} // namespace qphm::report
