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

// qphm: synthesize bearing signals, extract features, train and evaluate the
// hybrid quantum-classical classifier, and run gradient self-checks.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "qphm/qphm.hpp"

namespace fs = std::filesystem;
using namespace qphm;

namespace {

struct SynthOptions {
    std::uint64_t seed = 0;
    std::string out = "signals.csv";
    std::size_t classes = data::kNumClasses;
    data::SynthConfig config;
};

struct FeatureOptions {
    std::string in;
    std::string out = "features.csv";
    double target_rate = data::kTargetRateHz;
    std::size_t length = data::kSegmentLength;
    std::size_t overlap = data::kSegmentOverlap;
};

struct TrainOptions {
    std::string in;
    std::string out = "run";
    double train_frac = 0.8;
    std::string gradient = "shift";
    hybrid::TrainConfig config;
};

struct ModelOptions {
    std::string model;
    std::string in;
    std::string out;
};

struct GradcheckOptions {
    std::uint64_t seed = 0;
    double inject_error = 0.0;
};

int run_synth(const SynthOptions &opt) {
    auto signals = data::synth_generate(opt.config, opt.seed);
    std::erase_if(signals, [&](const data::RawSignal &s) {
        return data::class_index(s.label) >= opt.classes;
    });
    data::save_signals_csv(signals, opt.out);
    std::cout << "wrote " << signals.size() << " signals to " << opt.out << '\n';
    return 0;
}

int run_features(const FeatureOptions &opt) {
    const auto signals = data::load_signals_csv(opt.in);
    std::vector<data::FeatureVector> rows;
    for (std::size_t i = 0; i < signals.size(); ++i) {
        const auto uniform = data::downsample(signals[i], opt.target_rate);
        if (data::segment_count(uniform.samples.size(), opt.length, opt.overlap) == 0) {
            std::cerr << "warning: signal " << i << " (" << data::label_name(signals[i].label)
                      << ") has " << uniform.samples.size()
                      << " samples after downsampling, shorter than one segment; skipped\n";
            continue;
        }
        for (const auto &seg : data::segment(uniform, opt.length, opt.overlap)) {
            rows.push_back(data::extract_features(seg));
        }
    }
    data::save_features_csv(rows, opt.out);
    std::size_t per_class[data::kNumClasses] = {};
    for (const auto &r : rows) {
        ++per_class[data::class_index(r.label)];
    }
    std::cout << "segments: " << rows.size() << " (ND " << per_class[0] << ", OR " << per_class[1]
              << ", IR " << per_class[2] << ") -> " << opt.out << '\n';
    return 0;
}

void write_file(const fs::path &path, const std::function<void(std::ostream &)> &body) {
    auto out = data::open_output(path.string());
    body(out);
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

int run_train(TrainOptions opt) {
    opt.config.gradient_method = opt.gradient == "fd" ? pqc::GradientMethod::finite_difference
                                                      : pqc::GradientMethod::parameter_shift;
    const auto features = data::load_features_csv(opt.in);
    const auto dataset = data::split(features, opt.train_frac, opt.config.base_seed);
    hybrid::require_all_classes(dataset.train, "training set");

    fs::create_directories(opt.out);
    const fs::path dir(opt.out);
    data::save_features_csv(dataset.train, (dir / "train_features.csv").string());
    data::save_features_csv(dataset.test, (dir / "test_features.csv").string());

    std::vector<hybrid::RunMetrics> runs;
    hybrid::ConfusionMatrix confusion;
    hybrid::HybridModel model;
    if (opt.config.num_runs == 1) {
        auto result = hybrid::train_run(dataset, opt.config, opt.config.base_seed);
        model = result.model;
        confusion = result.metrics.confusion;
        write_file(dir / "runs.csv", [&](std::ostream &o) { report::write_runs_csv(o, result.metrics); });
        runs.push_back(std::move(result.metrics));
    } else {
        auto rep = hybrid::multi_seed_report(dataset, opt.config);
        model = rep.first_model;
        confusion = rep.pooled_confusion;
        write_file(dir / "runs.csv", [&](std::ostream &o) { report::write_runs_csv(o, rep); });
        std::cout << report::format_summary(rep);
        runs = std::move(rep.runs);
    }

    for (const auto &r : runs) {
        write_file(dir / ("curve_seed" + std::to_string(r.seed) + ".csv"),
                   [&](std::ostream &o) { report::write_curve_csv(o, r); });
    }
    write_file(dir / "confusion.csv", [&](std::ostream &o) { report::write_confusion_csv(o, confusion); });
    hybrid::save_checkpoint(model, (dir / "model.ckpt").string());

    if (runs.size() == 1) {
        const auto &r = runs.front();
        std::printf("seed %llu: train acc %.4f loss %.4f | test acc %.4f loss %.4f\n",
                    static_cast<unsigned long long>(r.seed), r.train_accuracy, r.train_loss,
                    r.test_accuracy, r.test_loss);
    }
    std::cout << "test confusion matrix (" << runs.size() << " run" << (runs.size() > 1 ? "s" : "")
              << ", row-normalized):\n"
              << report::format_confusion(confusion);
    std::printf("confusion accuracy (trace/total): %.4f\n", confusion.accuracy());
    std::cout << "outputs written to " << dir.string() << '\n';
    return 0;
}

int run_eval(const ModelOptions &opt) {
    const auto model = hybrid::load_checkpoint(opt.model);
    const auto samples = data::load_features_csv(opt.in);
    const auto ev = hybrid::evaluate(model, samples);
    std::printf("samples: %zu\naccuracy: %.4f\nloss: %.4f\n", samples.size(), ev.accuracy, ev.loss);
    std::cout << report::format_confusion(ev.confusion);
    if (!opt.out.empty()) {
        write_file(opt.out, [&](std::ostream &o) { report::write_confusion_csv(o, ev.confusion); });
    }
    return 0;
}

int run_predict(const ModelOptions &opt) {
    const auto model = hybrid::load_checkpoint(opt.model);
    const auto samples = data::load_features_csv(opt.in);
    auto emit = [&](std::ostream &o) {
        o << "index,predicted,p_baseline,p_outer_ring,p_inner_ring\n";
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto p = hybrid::hybrid_forward(model, samples[i]);
            o << i << ','
              << data::label_name(static_cast<data::HealthState>(hybrid::argmax(p)));
            for (double v : p) {
                o << ',' << report::num(v);
            }
            o << '\n';
        }
    };
    if (opt.out.empty()) {
        emit(std::cout);
    } else {
        write_file(opt.out, emit);
    }
    return 0;
}

int run_gradcheck(const GradcheckOptions &opt) {
    gradcheck::GradCheckOptions go;
    go.seed = opt.seed;
    go.inject_error = opt.inject_error;
    const auto rep = gradcheck::run_gradient_checks(go);
    for (const auto &c : rep.checks) {
        std::printf("[%s] %-44s max %s deviation %.3e (tolerance %.0e)\n",
                    c.passed ? "PASS" : "FAIL", c.name.c_str(), c.metric.c_str(), c.max_deviation,
                    c.tolerance);
    }
    std::cout << (rep.all_passed() ? "all gradient checks passed\n" : "gradient checks FAILED\n");
    return rep.all_passed() ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Hybrid quantum-classical bearing fault diagnosis"};
    app.require_subcommand(1);

    SynthOptions synth;
    auto *cmd_synth = app.add_subcommand("synth", "Generate synthetic bearing vibration signals");
    cmd_synth->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
    cmd_synth->add_option("--out", synth.out, "Output signal CSV")->capture_default_str();
    cmd_synth->add_option("--classes", synth.classes, "Number of classes to emit (ND, OR, IR order)")
        ->check(CLI::Range(1, 3))
        ->capture_default_str();
    cmd_synth->add_option("--per-class", synth.config.per_class, "Signals per class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_synth->add_option("--duration", synth.config.duration_s, "Record length in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_synth->add_option("--noise", synth.config.noise_std, "White-noise standard deviation")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd_synth->add_option("--outer-impulse", synth.config.outer_impulse, "Outer-race impulse amplitude")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd_synth->add_option("--inner-impulse", synth.config.inner_impulse, "Inner-race impulse amplitude")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    FeatureOptions feat;
    auto *cmd_feat = app.add_subcommand("features", "Downsample, segment and extract time-domain features");
    cmd_feat->add_option("--in", feat.in, "Input signal CSV")->required();
    cmd_feat->add_option("--out", feat.out, "Output feature CSV")->capture_default_str();
    cmd_feat->add_option("--target-rate", feat.target_rate, "Uniform sample rate in Hz")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_feat->add_option("--length", feat.length, "Segment length in samples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_feat->add_option("--overlap", feat.overlap, "Overlap between adjacent segments")
        ->capture_default_str();

    TrainOptions train;
    auto *cmd_train = app.add_subcommand("train", "Train the hybrid model (one or many seeds)");
    cmd_train->add_option("--in", train.in, "Feature CSV")->required();
    cmd_train->add_option("--out", train.out, "Output directory")->capture_default_str();
    cmd_train->add_option("--lr", train.config.learning_rate, "Adam learning rate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_train->add_option("--epochs", train.config.epochs, "Epochs per run")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_train->add_option("--batch", train.config.batch_size, "Mini-batch size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_train->add_option("--runs", train.config.num_runs, "Number of seeds (seed, seed+1, ...)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_train->add_option("--seed", train.config.base_seed, "Base seed; also seeds the split")
        ->capture_default_str();
    cmd_train->add_option("--gradient", train.gradient, "PQC gradient method")
        ->check(CLI::IsMember({"shift", "fd"}))
        ->capture_default_str();
    cmd_train->add_option("--fd-step", train.config.fd_step, "Finite-difference step for --gradient fd")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd_train->add_option("--train-frac", train.train_frac, "Training fraction per class")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd_train->add_option("--threads", train.config.num_threads, "Gradient worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    ModelOptions eval;
    auto *cmd_eval = app.add_subcommand("eval", "Evaluate a checkpoint on a feature CSV");
    cmd_eval->add_option("--model", eval.model, "Checkpoint file")->required();
    cmd_eval->add_option("--in", eval.in, "Feature CSV")->required();
    cmd_eval->add_option("--out", eval.out, "Optional confusion-matrix CSV");

    ModelOptions predict;
    auto *cmd_predict = app.add_subcommand("predict", "Class probabilities for each feature row");
    cmd_predict->add_option("--model", predict.model, "Checkpoint file")->required();
    cmd_predict->add_option("--in", predict.in, "Feature CSV (label column is ignored)")->required();
    cmd_predict->add_option("--out", predict.out, "Output CSV (default: stdout)");

    GradcheckOptions gc;
    auto *cmd_gc = app.add_subcommand("gradcheck", "Compare gradients against finite differences");
    cmd_gc->add_option("--seed", gc.seed, "Seed for random probes")->capture_default_str();
    cmd_gc->add_option("--inject-error", gc.inject_error,
                       "Offset added to analytic gradients (negative control for testing)")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_synth) {
            return run_synth(synth);
        }
        if (*cmd_feat) {
            return run_features(feat);
        }
        if (*cmd_train) {
            return run_train(train);
        }
        if (*cmd_eval) {
            return run_eval(eval);
        }
        if (*cmd_predict) {
            return run_predict(predict);
        }
        if (*cmd_gc) {
            return run_gradcheck(gc);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
