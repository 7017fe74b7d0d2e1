#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

#include "dyned/core.hpp"

namespace dyned {

/// SEA concept: three features uniform on [0,10], only the first two are
/// relevant. Label is 1 iff f1 + f2 <= theta(function_id), with optional
/// label-flip noise.
class SeaGenerator : public StreamSource {
public:
    static constexpr std::array<double, 4> kThresholds{8.0, 9.0, 7.0, 9.5};

    SeaGenerator(int function_id, double noise_fraction, std::uint64_t seed)
        : function_id_(function_id), noise_fraction_(noise_fraction), rng_(seed) {
        if (function_id < 0 || function_id >= static_cast<int>(kThresholds.size()))
            throw ConfigError("sea: function_id out of range [0,3]");
        if (noise_fraction < 0.0 || noise_fraction >= 1.0)
            throw ConfigError("sea: noise_fraction must be in [0,1)");
    }

    static int classify(double f1, double f2, int function_id) {
        return f1 + f2 <= kThresholds.at(static_cast<std::size_t>(function_id)) ? 1 : 0;
    }

    std::optional<Instance> next() override {
        std::uniform_real_distribution<double> unit(0.0, 10.0);
        Instance inst;
        inst.features = {unit(rng_), unit(rng_), unit(rng_)};
        inst.label = classify(inst.features[0], inst.features[1], function_id_);
        if (noise_fraction_ > 0.0) {
            std::uniform_real_distribution<double> coin(0.0, 1.0);
            if (coin(rng_) < noise_fraction_) inst.label = 1 - inst.label;
        }
        return inst;
    }

    StreamSchema schema() const override { return {3, 2}; }

private:
    int function_id_;
    double noise_fraction_;
    std::mt19937_64 rng_;
};

/// Agrawal concept: nine demographic/loan features with the ten classic
/// binary classification functions. Class 0 is "group A".
class AgrawalGenerator : public StreamSource {
public:
    AgrawalGenerator(int function_id, std::uint64_t seed)
        : function_id_(function_id), rng_(seed) {
        if (function_id < 0 || function_id > 9)
            throw ConfigError("agrawal: function_id out of range [0,9]");
    }

    // Feature order: salary, commission, age, elevel, car, zipcode,
    // hvalue, hyears, loan.
    static int classify(std::span<const double> f, int function_id) {
        const double salary = f[0], commission = f[1];
        const int age = static_cast<int>(f[2]);
        const int elevel = static_cast<int>(f[3]);
        const double hvalue = f[6];
        const int hyears = static_cast<int>(f[7]);
        const double loan = f[8];
        const double total = salary + commission;
        switch (function_id) {
            case 0:
                return group(age < 40 || age >= 60);
            case 1:
                if (age < 40) return group(50000 <= salary && salary <= 100000);
                if (age < 60) return group(75000 <= salary && salary <= 125000);
                return group(25000 <= salary && salary <= 75000);
            case 2:
                if (age < 40) return group(elevel == 0 || elevel == 1);
                if (age < 60) return group(elevel >= 1 && elevel <= 3);
                return group(elevel >= 2 && elevel <= 4);
            case 3:
                if (age < 40) {
                    if (elevel == 0 || elevel == 1) return group(25000 <= salary && salary <= 75000);
                    return group(50000 <= salary && salary <= 100000);
                }
                if (age < 60) {
                    if (elevel >= 1 && elevel <= 3) return group(50000 <= salary && salary <= 100000);
                    return group(75000 <= salary && salary <= 125000);
                }
                if (elevel >= 2 && elevel <= 4) return group(50000 <= salary && salary <= 100000);
                return group(25000 <= salary && salary <= 75000);
            case 4:
                if (age < 40) {
                    if (50000 <= salary && salary <= 100000) return group(100000 <= loan && loan <= 300000);
                    return group(200000 <= loan && loan <= 400000);
                }
                if (age < 60) {
                    if (75000 <= salary && salary <= 125000) return group(200000 <= loan && loan <= 400000);
                    return group(300000 <= loan && loan <= 500000);
                }
                if (25000 <= salary && salary <= 75000) return group(300000 <= loan && loan <= 500000);
                return group(100000 <= loan && loan <= 300000);
            case 5:
                if (age < 40) return group(50000 <= total && total <= 100000);
                if (age < 60) return group(75000 <= total && total <= 125000);
                return group(25000 <= total && total <= 75000);
            case 6:
                return group(2.0 * total / 3.0 - loan / 5.0 - 20000.0 > 0.0);
            case 7:
                return group(2.0 * total / 3.0 - 5000.0 * elevel - 20000.0 > 0.0);
            case 8:
                return group(2.0 * total / 3.0 - 5000.0 * elevel - loan / 5.0 - 10000.0 > 0.0);
            case 9: {
                const double equity = hyears >= 20 ? hvalue * (hyears - 20) / 10.0 : 0.0;
                return group(2.0 * total / 3.0 - 5000.0 * elevel + equity / 5.0 - 10000.0 > 0.0);
            }
            default:
                throw ConfigError("agrawal: function_id out of range [0,9]");
        }
    }

    std::optional<Instance> next() override {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Instance inst;
        inst.features.resize(9);
        const double salary = 20000.0 + 130000.0 * unit(rng_);
        inst.features[0] = salary;
        inst.features[1] = salary >= 75000.0 ? 0.0 : 10000.0 + 65000.0 * unit(rng_);
        inst.features[2] = static_cast<double>(uniform_int(20, 80));
        inst.features[3] = static_cast<double>(uniform_int(0, 4));
        inst.features[4] = static_cast<double>(uniform_int(1, 20));
        const int zipcode = uniform_int(0, 8);
        inst.features[5] = static_cast<double>(zipcode);
        inst.features[6] = (9.0 - zipcode) * 100000.0 * (0.5 + unit(rng_));
        inst.features[7] = static_cast<double>(uniform_int(1, 30));
        inst.features[8] = 500000.0 * unit(rng_);
        inst.label = classify(inst.features, function_id_);
        return inst;
    }

    StreamSchema schema() const override { return {9, 2}; }

private:
    static int group(bool in_group_a) { return in_group_a ? 0 : 1; }

    int uniform_int(int lo, int hi) {
        std::uniform_int_distribution<int> dist(lo, hi);
        return dist(rng_);
    }

    int function_id_;
    std::mt19937_64 rng_;
};

/// LED concept: a uniformly random digit encoded as seven binary segment
/// features (a..g order); the label is the digit. The first n_drift_features
/// are swapped with partner feature (i + 3) mod 7, and each feature is
/// independently inverted with probability noise_fraction.
class LedGenerator : public StreamSource {
public:
    static constexpr std::array<std::array<int, 7>, 10> kSegments{{
        {1, 1, 1, 1, 1, 1, 0},  // 0
        {0, 1, 1, 0, 0, 0, 0},  // 1
        {1, 1, 0, 1, 1, 0, 1},  // 2
        {1, 1, 1, 1, 0, 0, 1},  // 3
        {0, 1, 1, 0, 0, 1, 1},  // 4
        {1, 0, 1, 1, 0, 1, 1},  // 5
        {1, 0, 1, 1, 1, 1, 1},  // 6
        {1, 1, 1, 0, 0, 0, 0},  // 7
        {1, 1, 1, 1, 1, 1, 1},  // 8
        {1, 1, 1, 1, 0, 1, 1},  // 9
    }};

    LedGenerator(int n_drift_features, double noise_fraction, std::uint64_t seed)
        : noise_fraction_(noise_fraction), rng_(seed) {
        if (n_drift_features < 0 || n_drift_features > 7)
            throw ConfigError("led: n_drift_features out of range [0,7]");
        if (noise_fraction < 0.0 || noise_fraction >= 1.0)
            throw ConfigError("led: noise_fraction must be in [0,1)");
        permutation_ = drift_permutation(n_drift_features);
    }

    /// Segment-index permutation produced by swapping position i with its
    /// partner (i + 3) mod 7, for i = 0 .. n_drift_features - 1 in order.
    static std::array<int, 7> drift_permutation(int n_drift_features) {
        std::array<int, 7> perm{0, 1, 2, 3, 4, 5, 6};
        for (int i = 0; i < n_drift_features; ++i) std::swap(perm[i], perm[(i + 3) % 7]);
        return perm;
    }

    std::optional<Instance> next() override {
        const int digit = std::uniform_int_distribution<int>(0, 9)(rng_);
        Instance inst;
        inst.features.resize(7);
        for (int j = 0; j < 7; ++j)
            inst.features[j] = static_cast<double>(kSegments[digit][permutation_[j]]);
        if (noise_fraction_ > 0.0) {
            std::uniform_real_distribution<double> coin(0.0, 1.0);
            for (int j = 0; j < 7; ++j)
                if (coin(rng_) < noise_fraction_) inst.features[j] = 1.0 - inst.features[j];
        }
        inst.label = digit;
        return inst;
    }

    StreamSchema schema() const override { return {7, 10}; }

private:
    double noise_fraction_;
    std::array<int, 7> permutation_{};
    std::mt19937_64 rng_;
};

/// Mixed concept: two boolean features v, w and two reals x, z in [0,1].
/// Positive iff at least two of {v, w, z < 0.5 + 0.3 sin(3 pi x)} hold;
/// function 1 inverts the labels.
class MixedGenerator : public StreamSource {
public:
    MixedGenerator(int function_id, std::uint64_t seed)
        : function_id_(function_id), rng_(seed) {
        if (function_id != 0 && function_id != 1)
            throw ConfigError("mixed: function_id out of range [0,1]");
    }

    static int classify(std::span<const double> f, int function_id) {
        const int satisfied = (f[0] >= 0.5 ? 1 : 0) + (f[1] >= 0.5 ? 1 : 0) +
                              (f[3] < 0.5 + 0.3 * std::sin(3.0 * std::numbers::pi * f[2]) ? 1 : 0);
        const int base = satisfied >= 2 ? 1 : 0;
        return function_id == 0 ? base : 1 - base;
    }

    std::optional<Instance> next() override {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Instance inst;
        inst.features.resize(4);
        inst.features[0] = unit(rng_) < 0.5 ? 0.0 : 1.0;
        inst.features[1] = unit(rng_) < 0.5 ? 0.0 : 1.0;
        inst.features[2] = unit(rng_);
        inst.features[3] = unit(rng_);
        inst.label = classify(inst.features, function_id_);
        return inst;
    }

    StreamSchema schema() const override { return {4, 2}; }

private:
    int function_id_;
    std::mt19937_64 rng_;
};

/// Rotating hyperplane: features uniform on [0,1], label 1 iff
/// sum_i w_i x_i >= sum_i w_i / 2. Each weight moves by drift_magnitude per
/// sample along a persistent per-feature direction that reverses with
/// probability 0.1. The threshold keeps classes balanced in expectation.
class HyperplaneGenerator : public StreamSource {
public:
    HyperplaneGenerator(int n_features, double drift_magnitude, std::uint64_t seed)
        : drift_magnitude_(drift_magnitude), rng_(seed) {
        if (n_features < 2) throw ConfigError("hyperplane: n_features must be >= 2");
        if (drift_magnitude < 0.0) throw ConfigError("hyperplane: drift_magnitude must be >= 0");
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        weights_.resize(static_cast<std::size_t>(n_features));
        directions_.resize(static_cast<std::size_t>(n_features));
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            weights_[i] = unit(rng_);
            directions_[i] = unit(rng_) < 0.5 ? -1.0 : 1.0;
        }
    }

    static int classify(std::span<const double> features, std::span<const double> weights,
                        double threshold) {
        double dot = 0.0;
        for (std::size_t i = 0; i < features.size(); ++i) dot += weights[i] * features[i];
        return dot >= threshold ? 1 : 0;
    }

    std::optional<Instance> next() override {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Instance inst;
        inst.features.resize(weights_.size());
        double weight_sum = 0.0;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            inst.features[i] = unit(rng_);
            weight_sum += weights_[i];
        }
        inst.label = classify(inst.features, weights_, weight_sum / 2.0);
        if (drift_magnitude_ > 0.0) {
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                weights_[i] += drift_magnitude_ * directions_[i];
                if (unit(rng_) < 0.1) directions_[i] = -directions_[i];
            }
        }
        return inst;
    }

    StreamSchema schema() const override { return {static_cast<int>(weights_.size()), 2}; }

    const std::vector<double>& weights() const { return weights_; }

private:
    double drift_magnitude_;
    std::vector<double> weights_;
    std::vector<double> directions_;
    std::mt19937_64 rng_;
};

}  // namespace dyned
