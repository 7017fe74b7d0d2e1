#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dyned/core.hpp"
#include "dyned/drift.hpp"
#include "dyned/generators.hpp"

namespace dyned {

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream_index) {
    // splitmix64 step keeps per-concept streams decorrelated under one seed.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream_index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// Default label-flip noise for the SEA benchmark streams. The classic SEA
// concepts carry 10% class noise.
inline constexpr double kSeaBenchmarkNoise = 0.1;

// Default logistic transition width for gradual benchmark streams.
inline constexpr long long kGradualWidth = 10000;

inline std::unique_ptr<StreamSource> compose_sea(const std::vector<int>& functions,
                                                 DriftKind kind, long long total_samples,
                                                 std::uint64_t seed, double noise) {
    DriftSchedule schedule;
    for (std::size_t i = 0; i < functions.size(); ++i)
        schedule.concepts.push_back(
            std::make_unique<SeaGenerator>(functions[i], noise, detail::mix_seed(seed, i)));
    schedule.switch_positions =
        equal_partition_positions(total_samples, static_cast<int>(functions.size()));
    schedule.widths.assign(schedule.switch_positions.size(),
                           kind == DriftKind::abrupt ? 0 : kGradualWidth);
    schedule.kind = kind;
    return std::make_unique<ConceptDriftStream>(std::move(schedule), detail::mix_seed(seed, 99));
}

inline std::unique_ptr<StreamSource> compose_led(const std::vector<int>& drift_counts,
                                                 long long total_samples, std::uint64_t seed) {
    DriftSchedule schedule;
    for (std::size_t i = 0; i < drift_counts.size(); ++i)
        schedule.concepts.push_back(
            std::make_unique<LedGenerator>(drift_counts[i], 0.0, detail::mix_seed(seed, i)));
    schedule.switch_positions =
        equal_partition_positions(total_samples, static_cast<int>(drift_counts.size()));
    schedule.widths.assign(schedule.switch_positions.size(), 0);
    schedule.kind = DriftKind::abrupt;
    return std::make_unique<ConceptDriftStream>(std::move(schedule), detail::mix_seed(seed, 99));
}

inline std::unique_ptr<StreamSource> compose_agrawal(const std::vector<int>& functions,
                                                     long long total_samples, std::uint64_t seed) {
    DriftSchedule schedule;
    for (std::size_t i = 0; i < functions.size(); ++i)
        schedule.concepts.push_back(
            std::make_unique<AgrawalGenerator>(functions[i], detail::mix_seed(seed, i)));
    schedule.switch_positions =
        equal_partition_positions(total_samples, static_cast<int>(functions.size()));
    schedule.widths.assign(schedule.switch_positions.size(), kGradualWidth);
    schedule.kind = DriftKind::gradual;
    return std::make_unique<ConceptDriftStream>(std::move(schedule), detail::mix_seed(seed, 99));
}

inline std::unique_ptr<StreamSource> compose_mixed(const std::vector<int>& functions,
                                                   long long total_samples, std::uint64_t seed) {
    DriftSchedule schedule;
    for (std::size_t i = 0; i < functions.size(); ++i)
        schedule.concepts.push_back(
            std::make_unique<MixedGenerator>(functions[i], detail::mix_seed(seed, i)));
    schedule.switch_positions =
        equal_partition_positions(total_samples, static_cast<int>(functions.size()));
    schedule.widths.assign(schedule.switch_positions.size(), 0);
    schedule.kind = DriftKind::abrupt;
    return std::make_unique<ConceptDriftStream>(std::move(schedule), detail::mix_seed(seed, 99));
}

/// Named benchmark streams. total_samples fixes the drift schedule AND caps
/// the stream length.
inline std::unique_ptr<StreamSource> make_benchmark_stream(const std::string& name,
                                                           long long total_samples,
                                                           std::uint64_t seed) {
    std::unique_ptr<StreamSource> source;
    if (name == "sea-abrupt-012")
        source = compose_sea({0, 1, 2}, DriftKind::abrupt, total_samples, seed, kSeaBenchmarkNoise);
    else if (name == "sea-abrupt-123")
        source = compose_sea({1, 2, 3}, DriftKind::abrupt, total_samples, seed, kSeaBenchmarkNoise);
    else if (name == "sea-gradual-012")
        source = compose_sea({0, 1, 2}, DriftKind::gradual, total_samples, seed, kSeaBenchmarkNoise);
    else if (name == "sea-gradual-123")
        source = compose_sea({1, 2, 3}, DriftKind::gradual, total_samples, seed, kSeaBenchmarkNoise);
    else if (name == "agrawal-4567")
        source = compose_agrawal({4, 5, 6, 7}, total_samples, seed);
    else if (name == "mixed-12")
        source = compose_mixed({0, 1, 0, 1}, total_samples, seed);
    else if (name == "led-drift")
        source = std::make_unique<LedGenerator>(7, 0.0, seed);
    else if (name == "led-abrupt-037")
        source = compose_led({0, 3, 7}, total_samples, seed);
    else if (name == "led-stationary")
        source = std::make_unique<LedGenerator>(0, 0.0, seed);
    else if (name == "hyperplane")
        source = std::make_unique<HyperplaneGenerator>(10, 0.001, seed);
    else
        throw ConfigError("unknown generator '" + name + "'");
    return std::make_unique<LimitedSource>(std::move(source), total_samples);
}

inline std::vector<std::string> benchmark_stream_names() {
    return {"sea-abrupt-012", "sea-abrupt-123", "sea-gradual-012", "sea-gradual-123",
            "agrawal-4567",   "mixed-12",       "led-drift",       "led-abrupt-037",
            "led-stationary", "hyperplane"};
}

}  // namespace dyned
