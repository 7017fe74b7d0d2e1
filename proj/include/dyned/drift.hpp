#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "dyned/core.hpp"

namespace dyned {

enum class DriftKind { abrupt, gradual };

/// Ordered plan for composing concept sources into one drifting stream.
/// switch_positions[j] is the sample index at which concept j+1 takes over
/// (abrupt) or the center of its transition (gradual, logistic with the
/// given width). Recurring drift is expressed by listing the same concept
/// parameters at multiple slots.
struct DriftSchedule {
    std::vector<std::unique_ptr<StreamSource>> concepts;
    std::vector<long long> switch_positions;
    std::vector<long long> widths;
    DriftKind kind = DriftKind::abrupt;
};

inline void validate(const DriftSchedule& schedule) {
    if (schedule.concepts.empty()) throw ConfigError("drift schedule: no concept sources");
    if (schedule.switch_positions.size() + 1 != schedule.concepts.size())
        throw ConfigError("drift schedule: need one switch position per concept transition");
    if (schedule.widths.size() != schedule.switch_positions.size())
        throw ConfigError("drift schedule: need one width per switch position");
    for (std::size_t j = 0; j < schedule.switch_positions.size(); ++j) {
        if (j > 0 && schedule.switch_positions[j] <= schedule.switch_positions[j - 1])
            throw ConfigError("drift schedule: switch positions must be strictly increasing");
        if (schedule.widths[j] < 0) throw ConfigError("drift schedule: widths must be non-negative");
        const bool zero = schedule.widths[j] == 0;
        if (zero != (schedule.kind == DriftKind::abrupt))
            throw ConfigError("drift schedule: width must be 0 iff the schedule is abrupt");
    }
    const StreamSchema schema = schedule.concepts.front()->schema();
    for (const auto& concept_source : schedule.concepts) {
        const StreamSchema s = concept_source->schema();
        if (s.n_features != schema.n_features || s.n_classes != schema.n_classes)
            throw ConfigError("drift schedule: concept sources must share one schema");
    }
}

/// Stream that switches between concepts per a DriftSchedule. Abrupt switches
/// change concept exactly at the scheduled index; gradual switches draw from
/// the incoming concept with probability 1 / (1 + exp(-4 (t - p) / w)).
/// Only the chosen concept's source advances on each draw.
class ConceptDriftStream : public StreamSource {
public:
    ConceptDriftStream(DriftSchedule schedule, std::uint64_t seed)
        : schedule_(std::move(schedule)), rng_(seed) {
        validate(schedule_);
    }

    std::optional<Instance> next() override {
        const std::size_t concept = pick_concept(position_);
        ++position_;
        return schedule_.concepts[concept]->next();
    }

    StreamSchema schema() const override { return schedule_.concepts.front()->schema(); }

private:
    std::size_t pick_concept(long long t) {
        // Walk transitions newest-first; the first one that fires wins.
        for (std::size_t j = schedule_.switch_positions.size(); j-- > 0;) {
            const long long p = schedule_.switch_positions[j];
            if (schedule_.kind == DriftKind::abrupt) {
                if (t >= p) return j + 1;
            } else {
                const double w = static_cast<double>(schedule_.widths[j]);
                const double prob = 1.0 / (1.0 + std::exp(-4.0 * static_cast<double>(t - p) / w));
                std::uniform_real_distribution<double> coin(0.0, 1.0);
                if (coin(rng_) < prob) return j + 1;
            }
        }
        return 0;
    }

    DriftSchedule schedule_;
    long long position_ = 0;
    std::mt19937_64 rng_;
};

/// Equal-partition switch positions: k concepts over total samples switch at
/// floor(total*j/k), j = 1..k-1.
inline std::vector<long long> equal_partition_positions(long long total_samples, int n_concepts) {
    if (n_concepts < 1) throw ConfigError("equal partition: need at least one concept");
    std::vector<long long> positions;
    for (int j = 1; j < n_concepts; ++j)
        positions.push_back(total_samples * j / n_concepts);
    return positions;
}

}  // namespace dyned
