#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dyned/ensemble.hpp"

namespace dyned {

struct TemporalPoint {
    long long index = 0;  // samples consumed when the window closed
    double accuracy = 0.0;
    double lambda = 0.0;
    int active = 0;
    int reserve = 0;
};

struct EvalReport {
    double overall_accuracy = 0.0;
    long long scored = 0;
    long long correct = 0;
    long long total_samples = 0;  // includes warm-up
    std::vector<TemporalPoint> temporal;
    std::vector<long long> drift_events;
    std::vector<std::pair<long long, double>> selection_events;
    double wall_time_s = 0.0;
};

/// Per-step adapter the prequential loop drives. step() must return the
/// prediction computed before the instance trains anything.
class StreamModel {
public:
    virtual ~StreamModel() = default;
    virtual void warm_up(std::span<const Instance> instances) = 0;
    virtual StepResult step(const Instance& instance) = 0;
    virtual int active_count() const { return 1; }
    virtual int reserve_count() const { return 0; }
};

/// DynED model: the first init_s warm-up samples build the initial
/// components; the rest run through the normal loop unscored.
class DynEdModel : public StreamModel {
public:
    DynEdModel(HyperParams params, StreamSchema schema, std::uint64_t seed)
        : params_(params), schema_(schema), seed_(seed) {}

    void warm_up(std::span<const Instance> instances) override {
        ensemble_ = std::make_unique<DynEd>(params_, schema_, instances, seed_);
        for (std::size_t i = static_cast<std::size_t>(params_.init_s); i < instances.size(); ++i)
            ensemble_->step(instances[i]);
    }

    StepResult step(const Instance& instance) override { return ensemble_->step(instance); }

    int active_count() const override { return ensemble_ ? ensemble_->active_count() : 0; }
    int reserve_count() const override { return ensemble_ ? ensemble_->reserve_count() : 0; }
    DynEd& ensemble() { return *ensemble_; }

private:
    HyperParams params_;
    StreamSchema schema_;
    std::uint64_t seed_;
    std::unique_ptr<DynEd> ensemble_;
};

/// Single Hoeffding tree under the same test-then-train protocol.
class SingleTreeModel : public StreamModel {
public:
    SingleTreeModel(HTParams params, StreamSchema schema) : tree_(params, schema) {}

    void warm_up(std::span<const Instance> instances) override {
        for (const Instance& instance : instances) tree_.learn(instance);
    }

    StepResult step(const Instance& instance) override {
        StepResult result;
        result.prediction = tree_.predict(instance.features);
        tree_.learn(instance);
        return result;
    }

private:
    HoeffdingTree tree_;
};

/// Interleaved test-then-train evaluation. The first warmup_samples stream
/// samples build the model and are excluded from accuracy; every later
/// sample is predicted, scored, then used for training. The temporal series
/// holds one point per full report_interval window.
inline EvalReport run_prequential(StreamSource& source, StreamModel& model,
                                  long long warmup_samples, long long report_interval) {
    if (warmup_samples < 0) throw ConfigError("eval: warmup must be non-negative");
    if (report_interval < 1) throw ConfigError("eval: report_interval must be >= 1");
    const auto start = std::chrono::steady_clock::now();

    std::vector<Instance> warmup;
    warmup.reserve(static_cast<std::size_t>(warmup_samples));
    for (long long i = 0; i < warmup_samples; ++i) {
        auto instance = source.next();
        if (!instance)
            throw ConfigError("eval: stream exhausted after " + std::to_string(i) +
                              " samples, before the " + std::to_string(warmup_samples) +
                              "-sample warm-up completed");
        warmup.push_back(std::move(*instance));
    }
    model.warm_up(warmup);

    EvalReport report;
    report.total_samples = warmup_samples;
    long long window_correct = 0;
    long long window_scored = 0;
    double lambda = 0.0;
    while (auto instance = source.next()) {
        const StepResult step = model.step(*instance);
        ++report.total_samples;
        ++report.scored;
        ++window_scored;
        const bool correct = step.prediction == instance->label;
        report.correct += correct ? 1 : 0;
        window_correct += correct ? 1 : 0;
        lambda = step.lambda;
        if (step.drift) report.drift_events.push_back(report.total_samples - 1);
        if (step.selection)
            report.selection_events.emplace_back(report.total_samples - 1, step.lambda);
        if (window_scored == report_interval) {
            report.temporal.push_back({report.total_samples,
                                       static_cast<double>(window_correct) / report_interval,
                                       lambda, model.active_count(), model.reserve_count()});
            window_correct = 0;
            window_scored = 0;
        }
    }
    report.overall_accuracy =
        report.scored > 0 ? static_cast<double>(report.correct) / report.scored : 0.0;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/// One result row: `dataset,method,seed,samples,accuracy,drifts,wall_time_s`.
struct ResultRow {
    std::string dataset;
    std::string method;
    std::uint64_t seed = 0;
    long long samples = 0;
    double accuracy = 0.0;
    long long drifts = 0;
    double wall_time_s = 0.0;
};

inline ResultRow make_result_row(const std::string& dataset, const std::string& method,
                                 std::uint64_t seed, const EvalReport& report,
                                 bool include_timing) {
    ResultRow row;
    row.dataset = dataset;
    row.method = method;
    row.seed = seed;
    row.samples = report.total_samples;
    row.accuracy = report.overall_accuracy;
    row.drifts = static_cast<long long>(report.drift_events.size());
    row.wall_time_s = include_timing ? report.wall_time_s : 0.0;
    return row;
}

inline void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << "dataset,method,seed,samples,accuracy,drifts,wall_time_s\n";
    char buffer[64];
    for (const ResultRow& row : rows) {
        std::snprintf(buffer, sizeof buffer, "%.6f", row.accuracy);
        out << row.dataset << ',' << row.method << ',' << row.seed << ',' << row.samples << ','
            << buffer << ',' << row.drifts << ',';
        std::snprintf(buffer, sizeof buffer, "%.3f", row.wall_time_s);
        out << buffer << '\n';
    }
}

/// Sibling path for the temporal series: `r.csv` -> `r_temporal.csv`.
inline std::string temporal_path(const std::string& results_path) {
    const std::string suffix = ".csv";
    if (results_path.size() > suffix.size() &&
        results_path.compare(results_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return results_path.substr(0, results_path.size() - suffix.size()) + "_temporal.csv";
    return results_path + "_temporal.csv";
}

inline void write_temporal_csv(const std::string& path, const EvalReport& report) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << "index,accuracy,lambda,active,reserve\n";
    char buffer[64];
    for (const TemporalPoint& point : report.temporal) {
        std::snprintf(buffer, sizeof buffer, "%.6f", point.accuracy);
        out << point.index << ',' << buffer << ',';
        std::snprintf(buffer, sizeof buffer, "%.3f", point.lambda);
        out << buffer << ',' << point.active << ',' << point.reserve << '\n';
    }
}

}  // namespace dyned
