#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "dyned/core.hpp"

namespace dyned {

/// Adaptive-windowing change detector over values in [0,1]. The window is an
/// exponential bucket histogram: row i holds buckets of 2^i values, at most
/// M+1 buckets per row. After every insertion all admissible cut points are
/// checked; when two sub-windows have means differing by at least
/// eps_cut = sqrt(ln(4/delta') / (2m)), with m = 1/(1/n0 + 1/n1) and
/// delta' = delta / width, the oldest bucket is dropped and the scan repeats.
class Adwin {
public:
    static constexpr int kMaxBucketsPerRow = 5;  // M

    explicit Adwin(double delta = 0.002) : delta_(delta) {
        if (delta <= 0.0 || delta >= 1.0) throw ConfigError("adwin: delta must be in (0,1)");
    }

    /// Inserts a value; returns true when a change was detected (window cut).
    bool add(double value) {
        if (value < 0.0 || value > 1.0)
            throw std::invalid_argument("adwin: value must be in [0,1]");
        insert(value);
        return detect_and_shrink();
    }

    long long width() const { return width_; }
    double mean() const { return width_ > 0 ? total_ / static_cast<double>(width_) : 0.0; }
    int bucket_rows() const { return static_cast<int>(rows_.size()); }

private:
    struct Row {
        std::deque<double> sums;  // oldest bucket at front
    };

    void insert(double value) {
        if (rows_.empty()) rows_.emplace_back();
        rows_[0].sums.push_back(value);
        total_ += value;
        ++width_;
        compress();
    }

    void compress() {
        for (std::size_t level = 0; level < rows_.size(); ++level) {
            if (static_cast<int>(rows_[level].sums.size()) <= kMaxBucketsPerRow + 1) break;
            if (level + 1 == rows_.size()) rows_.emplace_back();
            const double oldest = rows_[level].sums.front();
            rows_[level].sums.pop_front();
            const double merged = oldest + rows_[level].sums.front();
            rows_[level].sums.pop_front();
            rows_[level + 1].sums.push_back(merged);
        }
    }

    // Buckets ordered oldest to newest: deepest row front first.
    template <typename Fn>
    void for_each_bucket(Fn&& fn) const {
        for (std::size_t level = rows_.size(); level-- > 0;) {
            const long long bucket_size = 1LL << level;
            for (const double sum : rows_[level].sums) fn(sum, bucket_size);
        }
    }

    bool detect_and_shrink() {
        bool detected = false;
        bool cut_found = width_ >= 2;
        while (cut_found) {
            cut_found = false;
            const double log_term = std::log(4.0 * static_cast<double>(width_) / delta_);
            double n0 = 0.0, sum0 = 0.0;
            std::vector<std::pair<double, long long>> buckets;
            buckets.reserve(rows_.size() * (kMaxBucketsPerRow + 1));
            for_each_bucket([&](double sum, long long size) { buckets.emplace_back(sum, size); });
            for (std::size_t b = 0; b + 1 < buckets.size(); ++b) {
                n0 += static_cast<double>(buckets[b].second);
                sum0 += buckets[b].first;
                const double n1 = static_cast<double>(width_) - n0;
                const double mean0 = sum0 / n0;
                const double mean1 = (total_ - sum0) / n1;
                const double m = 1.0 / (1.0 / n0 + 1.0 / n1);
                const double eps_cut = std::sqrt(log_term / (2.0 * m));
                if (std::abs(mean0 - mean1) >= eps_cut) {
                    drop_oldest_bucket();
                    detected = true;
                    cut_found = width_ >= 2;
                    break;
                }
            }
        }
        return detected;
    }

    void drop_oldest_bucket() {
        for (std::size_t level = rows_.size(); level-- > 0;) {
            if (rows_[level].sums.empty()) continue;
            total_ -= rows_[level].sums.front();
            width_ -= 1LL << level;
            rows_[level].sums.pop_front();
            while (!rows_.empty() && rows_.back().sums.empty()) rows_.pop_back();
            return;
        }
    }

    double delta_;
    std::vector<Row> rows_;
    long long width_ = 0;
    double total_ = 0.0;
};

}  // namespace dyned
