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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "cli_runner.hpp"
#include "qphm/checkpoint.hpp"
#include "qphm/data_io.hpp"

using namespace qphm;
using namespace qphm::testing;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = scratch_dir(std::string("cli_") + info->name());
    }
    void TearDown() override { fs::remove_all(dir_); }

    CliResult run(const std::vector<std::string> &args) { return run_cli(args, dir_ / "log.txt"); }
    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    /// Default synthetic set through synth and features.
    std::string default_features() {
        EXPECT_EQ(run({"synth", "--seed", "0", "--out", path("signals.csv")}).exit_code, 0);
        const auto r = run({"features", "--in", path("signals.csv"), "--out", path("features.csv")});
        EXPECT_EQ(r.exit_code, 0) << r.output;
        return path("features.csv");
    }

    void write_text(const std::string &name, const std::string &text) {
        std::ofstream(dir_ / name) << text;
    }

    fs::path dir_;
};

std::vector<std::vector<std::string>> read_csv(const std::string &path) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    for (std::string line; std::getline(in, line);) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        rows.push_back(fields);
    }
    return rows;
}

} // namespace

TEST_F(Cli, RequiresOneSubcommandAndRejectsUnknownFlags) {
    EXPECT_NE(run({}).exit_code, 0);
    EXPECT_NE(run({"synth", "--bogus", "1"}).exit_code, 0);
    EXPECT_NE(run({"dance"}).exit_code, 0);
    EXPECT_EQ(run({"train", "--help"}).exit_code, 0);
}

TEST_F(Cli, SynthIsByteIdentical) {
    ASSERT_EQ(run({"synth", "--seed", "7", "--duration", "0.2", "--out", path("a.csv")}).exit_code, 0);
    ASSERT_EQ(run({"synth", "--seed", "7", "--duration", "0.2", "--out", path("b.csv")}).exit_code, 0);
    ASSERT_EQ(run({"synth", "--seed", "8", "--duration", "0.2", "--out", path("c.csv")}).exit_code, 0);
    const auto a = read_file(path("a.csv"));
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, read_file(path("b.csv")));
    EXPECT_NE(a, read_file(path("c.csv")));
}

TEST_F(Cli, SynthBlockCount) {
    ASSERT_EQ(run({"synth", "--classes", "3", "--per-class", "40", "--duration", "0.05", "--out",
                   path("s.csv")})
                  .exit_code,
              0);
    EXPECT_EQ(data::load_signals_csv(path("s.csv")).size(), 120u);
    ASSERT_EQ(run({"synth", "--classes", "2", "--per-class", "3", "--duration", "0.05", "--out",
                   path("t.csv")})
                  .exit_code,
              0);
    const auto two = data::load_signals_csv(path("t.csv"));
    ASSERT_EQ(two.size(), 6u);
    EXPECT_EQ(two.back().label, data::HealthState::outer_ring);
}

TEST_F(Cli, SynthRejectsNegativeNoise) {
    const auto r = run({"synth", "--noise", "-0.1", "--out", path("s.csv")});
    EXPECT_NE(r.exit_code, 0);
    EXPECT_FALSE(fs::exists(path("s.csv")));
}

TEST_F(Cli, FeaturesSegmentCounts) {
    std::string text = "label,load_lbs,sample_rate_hz\nouter_ring,0,48828\n";
    for (int i = 0; i < 8000; ++i) text += std::to_string(std::sin(0.01 * i)) + "\n";
    text += "\ninner_ring,0,48828\n";
    for (int i = 0; i < 3999; ++i) text += "0.5\n";
    write_text("sig.csv", text);
    const auto r = run({"features", "--in", path("sig.csv"), "--out", path("f.csv")});
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("warning"), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("segments: 2"), std::string::npos) << r.output;
    const auto rows = data::load_features_csv(path("f.csv"));
    ASSERT_EQ(rows.size(), 2u);
    for (const auto &f : rows) EXPECT_EQ(f.label, data::HealthState::outer_ring);
}

TEST_F(Cli, FeaturesReportsMissingFileAndParseLine) {
    const auto missing = path("nope.csv");
    const auto r = run({"features", "--in", missing, "--out", path("f.csv")});
    EXPECT_NE(r.exit_code, 0);
    EXPECT_NE(r.output.find(missing), std::string::npos) << r.output;

    write_text("bad.csv", "baseline,270,97656\n1\n2\noops\n");
    const auto b = run({"features", "--in", path("bad.csv"), "--out", path("f.csv")});
    EXPECT_NE(b.exit_code, 0);
    EXPECT_NE(b.output.find("bad.csv:4"), std::string::npos) << b.output;
}

TEST_F(Cli, TrainSingleRunIsDeterministic) {
    const auto feats = default_features();
    const std::vector<std::string> common = {"train", "--in", feats, "--runs", "1", "--seed", "3",
                                             "--epochs", "5"};
    auto a = common, b = common;
    a.insert(a.end(), {"--out", path("a")});
    b.insert(b.end(), {"--out", path("b")});
    ASSERT_EQ(run(a).exit_code, 0);
    ASSERT_EQ(run(b).exit_code, 0);
    for (const char *f : {"runs.csv", "curve_seed3.csv", "confusion.csv", "model.ckpt",
                          "train_features.csv", "test_features.csv"}) {
        EXPECT_EQ(read_file(dir_ / "a" / f), read_file(dir_ / "b" / f)) << f;
        EXPECT_FALSE(read_file(dir_ / "a" / f).empty()) << f;
    }
    EXPECT_EQ(read_csv(path("a/curve_seed3.csv")).size(), 1u + 6u);
}

TEST_F(Cli, GradientMethodsAgreeOnAccuracy) {
    const auto feats = default_features();
    ASSERT_EQ(run({"train", "--in", feats, "--runs", "1", "--seed", "1", "--gradient", "shift",
                   "--out", path("shift")})
                  .exit_code,
              0);
    ASSERT_EQ(run({"train", "--in", feats, "--runs", "1", "--seed", "1", "--gradient", "fd", "--out",
                   path("fd")})
                  .exit_code,
              0);
    const auto s = read_csv(path("shift/runs.csv")), f = read_csv(path("fd/runs.csv"));
    ASSERT_GE(s.size(), 2u);
    ASSERT_GE(f.size(), 2u);
    const double acc_s = std::stod(s[1][2]), acc_f = std::stod(f[1][2]);
    EXPECT_LT(std::abs(acc_s - acc_f) * 100.0, 1.0) << acc_s << " vs " << acc_f;
}

TEST_F(Cli, MultiRunEvalAndPredict) {
    const auto feats = default_features();
    const auto r = run({"train", "--in", feats, "--runs", "3", "--epochs", "10", "--out", path("run")});
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("Testing accuracy"), std::string::npos);
    EXPECT_NE(r.output.find("+-"), std::string::npos);
    const auto runs = read_csv(path("run/runs.csv"));
    ASSERT_EQ(runs.size(), 1u + 3u + 2u);
    EXPECT_EQ(runs[4][0], "mean");
    EXPECT_EQ(runs[5][0], "std");
    for (std::size_t s = 0; s < 3; ++s) {
        EXPECT_TRUE(fs::exists(dir_ / "run" / ("curve_seed" + std::to_string(s) + ".csv")));
    }

    const auto ev = run({"eval", "--model", path("run/model.ckpt"), "--in",
                         path("run/test_features.csv"), "--out", path("cm.csv")});
    ASSERT_EQ(ev.exit_code, 0) << ev.output;
    for (const char *lbl : {"ND", "OR", "IR"}) EXPECT_NE(ev.output.find(lbl), std::string::npos);
    const auto cm = read_csv(path("cm.csv"));
    ASSERT_EQ(cm.size(), 4u);
    for (std::size_t row = 1; row < 4; ++row) {
        double sum = 0.0;
        for (std::size_t c = 4; c < 7; ++c) sum += std::stod(cm[row][c]);
        EXPECT_NEAR(sum, 100.0, 0.1);
    }

    const auto pr = run({"predict", "--model", path("run/model.ckpt"), "--in",
                         path("run/test_features.csv"), "--out", path("pred.csv")});
    ASSERT_EQ(pr.exit_code, 0) << pr.output;
    const auto pred = read_csv(path("pred.csv"));
    const auto test_rows = data::load_features_csv(path("run/test_features.csv"));
    ASSERT_EQ(pred.size(), test_rows.size() + 1);
    for (std::size_t i = 1; i < pred.size(); ++i) {
        const double sum = std::stod(pred[i][2]) + std::stod(pred[i][3]) + std::stod(pred[i][4]);
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST_F(Cli, EvalRejectsIncompatibleInputs) {
    const auto feats = default_features();
    ASSERT_EQ(run({"train", "--in", feats, "--runs", "1", "--epochs", "1", "--out", path("run")}).exit_code, 0);
    write_text("four.csv", "mean,variance,max_amplitude,peak_to_peak,label\n0.1,0.2,0.3,0.4,baseline\n");
    const auto r = run({"eval", "--model", path("run/model.ckpt"), "--in", path("four.csv")});
    EXPECT_NE(r.exit_code, 0);
    EXPECT_NE(r.output.find("four.csv"), std::string::npos) << r.output;

    auto ckpt = read_file(dir_ / "run" / "model.ckpt");
    write_text("broken.ckpt", ckpt.substr(0, ckpt.size() / 3));
    EXPECT_NE(run({"eval", "--model", path("broken.ckpt"), "--in", feats}).exit_code, 0);
}

TEST_F(Cli, TrainRejectsDegenerateData) {
    write_text("one_class.csv", "mean,variance,max_amplitude,peak_to_peak,rms,label\n"
                                "0,1,1,2,1,baseline\n0,2,1,2,1,baseline\n");
    const auto r = run({"train", "--in", path("one_class.csv"), "--runs", "1", "--out", path("x")});
    EXPECT_NE(r.exit_code, 0);
    EXPECT_NE(r.output.find("error"), std::string::npos);
}

TEST_F(Cli, GradcheckPassesAndDetectsCorruption) {
    const auto ok = run({"gradcheck"});
    EXPECT_EQ(ok.exit_code, 0) << ok.output;
    EXPECT_NE(ok.output.find("deviation"), std::string::npos);
    EXPECT_EQ(ok.output.find("[FAIL]"), std::string::npos);
    const auto bad = run({"gradcheck", "--inject-error", "1e-3"});
    EXPECT_NE(bad.exit_code, 0);
    EXPECT_NE(bad.output.find("[FAIL]"), std::string::npos);
}
