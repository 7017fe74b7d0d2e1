#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "dyned/adwin.hpp"
#include "dyned/selection.hpp"

namespace dyned {

struct HyperParams {
    int theta = 100;              // samples between selection checks
    double lambda0 = 0.6;
    double delta_lambda = 0.1;
    int win_s = 500;
    int init_c = 5;
    int init_s = 50;
    int pool_s = 500;
    int add_s = 5;
    int cls_s = 10;
    int slc_s = 10;
    int error_s = 50;
    Measure measure = Measure::DF;
    HTParams tree;
    double adwin_delta = 0.002;
};

inline void validate(const HyperParams& params) {
    if (params.theta < 1 || params.win_s < 1 || params.init_c < 1 || params.init_s < 1 ||
        params.pool_s < 1 || params.add_s < 1 || params.cls_s < 1 || params.slc_s < 1 ||
        params.error_s < 1)
        throw ConfigError("hyperparams: all sizes must be >= 1");
    if (params.lambda0 < 0.0 || params.lambda0 > 1.0)
        throw ConfigError("hyperparams: lambda0 must be in [0,1]");
    if (params.delta_lambda <= 0.0 || params.delta_lambda > 1.0)
        throw ConfigError("hyperparams: delta_lambda must be in (0,1]");
    validate(params.tree);
}

/// Ring of the most recent win_s labeled instances, oldest first.
class SlidingWindow {
public:
    explicit SlidingWindow(int capacity) : capacity_(capacity) {
        if (capacity < 1) throw ConfigError("window: capacity must be >= 1");
    }

    void push(Instance instance) {
        buffer_.push_back(std::move(instance));
        if (static_cast<int>(buffer_.size()) > capacity_) buffer_.pop_front();
    }

    int size() const { return static_cast<int>(buffer_.size()); }
    int capacity() const { return capacity_; }
    bool empty() const { return buffer_.empty(); }
    const Instance& operator[](int i) const { return buffer_[static_cast<std::size_t>(i)]; }

    auto begin() const { return buffer_.begin(); }
    auto end() const { return buffer_.end(); }

private:
    int capacity_;
    std::deque<Instance> buffer_;
};

/// Most frequent class; ties go to the lowest class index.
inline int majority_vote(std::span<const int> votes) {
    if (votes.empty()) throw std::invalid_argument("majority vote: no votes");
    int max_class = 0;
    for (const int v : votes) max_class = std::max(max_class, v);
    std::vector<int> tally(static_cast<std::size_t>(max_class) + 1, 0);
    for (const int v : votes) {
        if (v < 0) throw std::invalid_argument("majority vote: negative class index");
        ++tally[static_cast<std::size_t>(v)];
    }
    int best = 0;
    for (int c = 1; c < static_cast<int>(tally.size()); ++c)
        if (tally[static_cast<std::size_t>(c)] > tally[static_cast<std::size_t>(best)]) best = c;
    return best;
}

/// Intensity of accuracy change: (acc(t) - acc(t-i)) / i.
inline double accuracy_intensity(double acc_now, double acc_then, long long i) {
    if (i < 1) throw std::invalid_argument("accuracy intensity: lookback must be >= 1");
    return (acc_now - acc_then) / static_cast<double>(i);
}

/// Raises lambda by delta_lambda when the intensity is non-negative, lowers
/// it otherwise, saturating at [0,1].
inline double update_lambda(double lambda, double intensity, double delta_lambda) {
    if (intensity >= 0.0) return std::min(1.0, lambda + delta_lambda);
    return std::max(0.0, lambda - delta_lambda);
}

struct StepResult {
    int prediction = 0;
    bool drift = false;
    bool spawned = false;
    bool selection = false;
    double lambda = 0.0;
};

/// The DynED loop: majority-vote prediction over the active components,
/// sliding-window and drift-detector maintenance, training of the active
/// set, drift-triggered component spawning, and periodic MMR re-selection
/// with a dynamically adapted lambda.
class DynEd {
public:
    DynEd(HyperParams params, StreamSchema schema, std::span<const Instance> warmup,
          std::uint64_t seed)
        : params_(params), schema_(schema), window_(params.win_s),
          detector_(params.adwin_delta), rng_(seed) {
        validate(params_);
        validate(schema_);
        if (static_cast<int>(warmup.size()) < params_.init_s)
            throw ConfigError("dyned: warmup must provide at least init_s instances");
        lambda_ = params_.lambda0;

        for (int k = 0; k < params_.init_c; ++k) {
            ComponentRecord component;
            component.id = next_id_++;
            component.model = std::make_shared<HoeffdingTree>(params_.tree, schema_);
            component.oracle = OracleVector(params_.error_s);
            component.birth_index = 0;
            active_.push_back(std::move(component));
        }
        for (int i = 0; i < params_.init_s; ++i) {
            const Instance& instance = warmup[static_cast<std::size_t>(i)];
            for (auto& component : active_) component.model->learn(instance);
            window_.push(instance);
        }
        for (auto& component : active_) {
            const auto profile = compute_error_profiles({component}, window_).front();
            refresh_from_profile(component, profile, params_.error_s);
        }
    }

    StepResult step(const Instance& instance) {
        if (static_cast<int>(instance.features.size()) != schema_.n_features)
            throw std::invalid_argument("dyned: feature count does not match schema");
        StepResult result;

        // 1. Predict before anything trains on this instance.
        std::vector<int> votes;
        votes.reserve(active_.size());
        for (const auto& component : active_)
            votes.push_back(component.model->predict(instance.features));
        result.prediction = majority_vote(votes);

        // 2. Window, 3. drift detector, 4. train the active set.
        window_.push(instance);
        const bool correct = result.prediction == instance.label;
        result.drift = detector_.add(correct ? 1.0 : 0.0);
        for (auto& component : active_) component.model->learn(instance);

        ++samples_seen_;
        cumulative_correct_ += correct ? 1 : 0;
        history_.emplace_back(samples_seen_, cumulative_correct_);
        while (static_cast<int>(history_.size()) > params_.theta + 1) history_.pop_front();

        // 5. Drift response: spawn fresh components trained on the window.
        if (result.drift && !window_.empty()) {
            spawn_components();
            result.spawned = true;
        }

        // 6. Periodic / spawn-triggered re-selection with the updated lambda.
        ++samples_since_selection_;
        if (samples_since_selection_ >= params_.theta || result.spawned) {
            lambda_ = update_lambda(lambda_, current_intensity(), params_.delta_lambda);
            run_selection();
            samples_since_selection_ = 0;
            result.selection = true;
        }

        result.lambda = lambda_;
        return result;
    }

    /// Trains add_s fresh trees on the full window (oldest to newest); their
    /// initial windowed accuracy comes from a predict-before-train replay.
    void spawn_components() {
        for (int k = 0; k < params_.add_s; ++k) {
            ComponentRecord component;
            component.id = next_id_++;
            component.model = std::make_shared<HoeffdingTree>(params_.tree, schema_);
            component.oracle = OracleVector(params_.error_s);
            component.birth_index = samples_seen_;
            int correct_count = 0;
            for (const Instance& instance : window_) {
                const bool correct = component.model->predict(instance.features) == instance.label;
                correct_count += correct ? 1 : 0;
                component.oracle.append(correct);
                component.model->learn(instance);
            }
            component.windowed_accuracy =
                static_cast<double>(correct_count) / static_cast<double>(window_.size());
            reserve_.push_back(std::move(component));
        }
    }

    double lambda() const { return lambda_; }
    long long samples_seen() const { return samples_seen_; }
    int active_count() const { return static_cast<int>(active_.size()); }
    int reserve_count() const { return static_cast<int>(reserve_.size()); }
    const std::vector<ComponentRecord>& active() const { return active_; }
    const std::vector<ComponentRecord>& reserve() const { return reserve_; }
    const SlidingWindow& window() const { return window_; }
    const SelectionStats& last_selection_stats() const { return last_selection_stats_; }

private:
    double current_intensity() const {
        if (history_.size() < 2) return 0.0;
        const auto [t_then, correct_then] = history_.front();
        const auto [t_now, correct_now] = history_.back();
        if (t_now <= t_then) return 0.0;
        const double acc_now = static_cast<double>(correct_now) / static_cast<double>(t_now);
        const double acc_then =
            t_then > 0 ? static_cast<double>(correct_then) / static_cast<double>(t_then) : 0.0;
        return accuracy_intensity(acc_now, acc_then, t_now - t_then);
    }

    void run_selection() {
        SelectionParams selection{lambda_, params_.pool_s, params_.cls_s,
                                  params_.slc_s, params_.error_s, params_.measure};
        last_selection_stats_ = SelectionStats{};
        auto [next_active, next_reserve] =
            select_components(std::move(reserve_), std::move(active_), window_, selection,
                              rng_(), &last_selection_stats_);
        active_ = std::move(next_active);
        reserve_ = std::move(next_reserve);
    }

    HyperParams params_;
    StreamSchema schema_;
    std::vector<ComponentRecord> active_;
    std::vector<ComponentRecord> reserve_;
    double lambda_ = 0.6;
    SlidingWindow window_;
    Adwin detector_;
    long long samples_seen_ = 0;
    long long cumulative_correct_ = 0;
    long long samples_since_selection_ = 0;
    std::deque<std::pair<long long, long long>> history_;
    int next_id_ = 0;
    std::mt19937_64 rng_;
    SelectionStats last_selection_stats_;
};

}  // namespace dyned
