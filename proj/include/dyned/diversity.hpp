#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dyned/core.hpp"

namespace dyned {

/// Fixed-capacity ring of correctness bits (1 = the component predicted this
/// sample correctly). Appending past capacity evicts the oldest entry.
class OracleVector {
public:
    explicit OracleVector(int capacity = 50) : capacity_(capacity) {
        if (capacity < 1) throw ConfigError("oracle vector: capacity must be >= 1");
        bits_.reserve(static_cast<std::size_t>(capacity));
    }

    void append(bool correct) {
        if (static_cast<int>(bits_.size()) < capacity_) {
            bits_.push_back(correct);
        } else {
            bits_[static_cast<std::size_t>(head_)] = correct;
            head_ = (head_ + 1) % capacity_;
        }
    }

    void clear() {
        bits_.clear();
        head_ = 0;
    }

    int size() const { return static_cast<int>(bits_.size()); }
    int capacity() const { return capacity_; }
    bool empty() const { return bits_.empty(); }

    /// Entry i in arrival order, 0 = oldest retained.
    bool at(int i) const {
        return bits_[static_cast<std::size_t>((head_ + i) % static_cast<int>(bits_.size()))];
    }

private:
    int capacity_;
    int head_ = 0;
    std::vector<bool> bits_;
};

/// 2x2 joint correct/incorrect contingency counts of a component pair.
struct JointCounts {
    long long n11 = 0;  // both correct
    long long n10 = 0;  // first correct, second wrong
    long long n01 = 0;  // first wrong, second correct
    long long n00 = 0;  // both wrong

    long long n() const { return n11 + n10 + n01 + n00; }
};

/// Joint counts over the aligned most recent min(len(a), len(b)) entries.
inline JointCounts joint_counts(const OracleVector& a, const OracleVector& b) {
    if (a.empty() || b.empty())
        throw UndefinedSimilarityError("joint counts: empty oracle vector");
    const int m = std::min(a.size(), b.size());
    JointCounts counts;
    for (int i = 0; i < m; ++i) {
        const bool ca = a.at(a.size() - m + i);
        const bool cb = b.at(b.size() - m + i);
        if (ca && cb) ++counts.n11;
        else if (ca && !cb) ++counts.n10;
        else if (!ca && cb) ++counts.n01;
        else ++counts.n00;
    }
    return counts;
}

namespace detail {
inline void require_outcomes(const JointCounts& c) {
    if (c.n() <= 0) throw UndefinedSimilarityError("diversity measure: no joint outcomes");
}
}  // namespace detail

/// Double-fault: fraction of samples both components got wrong.
inline double df_measure(const JointCounts& c) {
    detail::require_outcomes(c);
    return static_cast<double>(c.n00) / static_cast<double>(c.n());
}

/// Disagreement: fraction of samples exactly one component got right.
inline double dm_measure(const JointCounts& c) {
    detail::require_outcomes(c);
    return static_cast<double>(c.n10 + c.n01) / static_cast<double>(c.n());
}

/// Q statistic in [-1,1]. A zero denominator degenerates to 1 for identical
/// behavior (n10 = n01 = 0) and 0 otherwise.
inline double q_statistic(const JointCounts& c) {
    detail::require_outcomes(c);
    const double same = static_cast<double>(c.n11) * static_cast<double>(c.n00);
    const double diff = static_cast<double>(c.n01) * static_cast<double>(c.n10);
    if (same + diff == 0.0) return (c.n10 == 0 && c.n01 == 0) ? 1.0 : 0.0;
    return (same - diff) / (same + diff);
}

/// Correlation coefficient over the 2x2 table, in [-1,1]; same degenerate
/// rule as the Q statistic.
inline double cp_measure(const JointCounts& c) {
    detail::require_outcomes(c);
    const double same = static_cast<double>(c.n11) * static_cast<double>(c.n00);
    const double diff = static_cast<double>(c.n01) * static_cast<double>(c.n10);
    const double denom = std::sqrt(static_cast<double>(c.n11 + c.n10) *
                                   static_cast<double>(c.n01 + c.n00) *
                                   static_cast<double>(c.n11 + c.n01) *
                                   static_cast<double>(c.n10 + c.n00));
    if (denom == 0.0) return (c.n10 == 0 && c.n01 == 0) ? 1.0 : 0.0;
    return (same - diff) / denom;
}

enum class Measure { DF, DM, Q, CP };

inline std::string to_string(Measure measure) {
    switch (measure) {
        case Measure::DF: return "df";
        case Measure::DM: return "dm";
        case Measure::Q: return "q";
        case Measure::CP: return "cp";
    }
    return "df";
}

inline Measure measure_from_string(const std::string& name) {
    if (name == "df") return Measure::DF;
    if (name == "dm") return Measure::DM;
    if (name == "q") return Measure::Q;
    if (name == "cp") return Measure::CP;
    throw ConfigError("unknown diversity measure '" + name + "' (expected df|dm|q|cp)");
}

/// Pairwise similarity in [0,1]: the DF rate is used directly (a high
/// double-fault rate marks a redundant pair); the other measures are mapped
/// order-preservingly from their diversity form.
inline double similarity(Measure measure, const JointCounts& c) {
    switch (measure) {
        case Measure::DF: return df_measure(c);
        case Measure::DM: return 1.0 - dm_measure(c);
        case Measure::Q: return (q_statistic(c) + 1.0) / 2.0;
        case Measure::CP: return (cp_measure(c) + 1.0) / 2.0;
    }
    return df_measure(c);
}

}  // namespace dyned
