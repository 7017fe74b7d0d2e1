#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "dyned/core.hpp"

namespace dyned {

struct HTParams {
    int grace_period = 50;
    double split_confidence = 0.9;  // delta in the Hoeffding bound
    double tie_threshold = 0.05;
    int max_depth = 0;  // 0 = unbounded
};

inline void validate(const HTParams& params) {
    if (params.grace_period < 1) throw ConfigError("tree: grace_period must be >= 1");
    if (params.split_confidence <= 0.0 || params.split_confidence >= 1.0)
        throw ConfigError("tree: split_confidence must be in (0,1)");
    if (params.tie_threshold < 0.0 || params.tie_threshold >= 1.0)
        throw ConfigError("tree: tie_threshold must be in [0,1)");
    if (params.max_depth < 0) throw ConfigError("tree: max_depth must be >= 0");
}

/// epsilon = sqrt(range^2 ln(1/delta) / (2n)).
inline double hoeffding_bound(double range, double delta, double n) {
    return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

/// Incremental decision tree with binary numeric splits. Numeric attributes
/// are summarized per class by Gaussian estimators; split candidates are ten
/// equally spaced thresholds between the observed feature minimum and
/// maximum. Splits use information gain guarded by the Hoeffding bound.
class HoeffdingTree {
public:
    HoeffdingTree(HTParams params, StreamSchema schema)
        : params_(params), schema_(schema) {
        validate(params_);
        validate(schema_);
        root_ = std::make_unique<Node>(schema_, 0);
    }

    HoeffdingTree(const HoeffdingTree&) = delete;
    HoeffdingTree& operator=(const HoeffdingTree&) = delete;

    void learn(const Instance& instance) {
        check_features(instance.features);
        if (instance.label < 0 || instance.label >= schema_.n_classes)
            throw std::invalid_argument("tree: label out of schema range");
        Node* leaf = route(instance.features);
        leaf->observe(instance);
        ++samples_seen_;
        if (leaf->n_since_eval >= params_.grace_period) {
            leaf->n_since_eval = 0;
            try_split(*leaf);
        }
    }

    int predict(std::span<const double> features) const {
        check_features(features);
        const Node* leaf = route(features);
        return majority_class(leaf->class_counts);
    }

    std::vector<double> predict_counts(std::span<const double> features) const {
        check_features(features);
        return route(features)->class_counts;
    }

    long long samples_seen() const { return samples_seen_; }
    StreamSchema schema() const { return schema_; }

    int node_count() const { return count_nodes(*root_); }
    int leaf_count() const { return count_leaves(*root_); }
    int depth() const { return max_depth(*root_); }

private:
    struct GaussianStat {
        double count = 0.0;
        double mean = 0.0;
        double m2 = 0.0;

        void add(double x) {
            count += 1.0;
            const double delta = x - mean;
            mean += delta / count;
            m2 += delta * (x - mean);
        }

        double stddev() const {
            return count >= 2.0 ? std::sqrt(m2 / (count - 1.0)) : 0.0;
        }

        // Estimated fraction of this class's mass at or below x.
        double cdf(double x) const {
            if (count <= 0.0) return 0.0;
            const double sd = stddev();
            if (sd <= 0.0) return mean <= x ? 1.0 : 0.0;
            return 0.5 * std::erfc((mean - x) / (sd * std::numbers::sqrt2));
        }
    };

    struct Node {
        // split (internal nodes)
        int split_feature = -1;
        double split_threshold = 0.0;
        std::unique_ptr<Node> left;
        std::unique_ptr<Node> right;

        // statistics (leaves)
        std::vector<double> class_counts;
        std::vector<GaussianStat> stats;  // n_features * n_classes, feature-major
        std::vector<double> feature_min;
        std::vector<double> feature_max;
        long long n_since_eval = 0;
        int depth = 0;

        Node(const StreamSchema& schema, int node_depth)
            : class_counts(static_cast<std::size_t>(schema.n_classes), 0.0),
              stats(static_cast<std::size_t>(schema.n_features) *
                    static_cast<std::size_t>(schema.n_classes)),
              feature_min(static_cast<std::size_t>(schema.n_features),
                          std::numeric_limits<double>::infinity()),
              feature_max(static_cast<std::size_t>(schema.n_features),
                          -std::numeric_limits<double>::infinity()),
              depth(node_depth) {}

        bool is_leaf() const { return !left; }

        GaussianStat& stat(int feature, int cls, int n_classes) {
            return stats[static_cast<std::size_t>(feature) * n_classes + cls];
        }
        const GaussianStat& stat(int feature, int cls, int n_classes) const {
            return stats[static_cast<std::size_t>(feature) * n_classes + cls];
        }

        void observe(const Instance& instance) {
            const int n_classes = static_cast<int>(class_counts.size());
            class_counts[static_cast<std::size_t>(instance.label)] += 1.0;
            for (std::size_t f = 0; f < instance.features.size(); ++f) {
                const double x = instance.features[f];
                feature_min[f] = std::min(feature_min[f], x);
                feature_max[f] = std::max(feature_max[f], x);
                stat(static_cast<int>(f), instance.label, n_classes).add(x);
            }
            ++n_since_eval;
        }
    };

    struct SplitCandidate {
        double gain = 0.0;
        int feature = -1;
        double threshold = 0.0;
    };

    void check_features(std::span<const double> features) const {
        if (static_cast<int>(features.size()) != schema_.n_features)
            throw std::invalid_argument("tree: feature count does not match schema");
    }

    Node* route(std::span<const double> features) {
        Node* node = root_.get();
        while (!node->is_leaf())
            node = features[static_cast<std::size_t>(node->split_feature)] <= node->split_threshold
                       ? node->left.get()
                       : node->right.get();
        return node;
    }
    const Node* route(std::span<const double> features) const {
        return const_cast<HoeffdingTree*>(this)->route(features);
    }

    static int majority_class(const std::vector<double>& counts) {
        int best = 0;
        for (int c = 1; c < static_cast<int>(counts.size()); ++c)
            if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)]) best = c;
        return best;
    }

    static double entropy(std::span<const double> counts, double total) {
        if (total <= 0.0) return 0.0;
        double h = 0.0;
        for (const double c : counts) {
            if (c <= 0.0) continue;
            const double p = c / total;
            h -= p * std::log2(p);
        }
        return h;
    }

    // Best information gain over the ten candidate thresholds of one feature.
    SplitCandidate best_for_feature(const Node& leaf, int feature, double parent_entropy,
                                    double total) const {
        SplitCandidate best;
        best.feature = feature;
        const double lo = leaf.feature_min[static_cast<std::size_t>(feature)];
        const double hi = leaf.feature_max[static_cast<std::size_t>(feature)];
        if (!(hi > lo)) return best;
        const int n_classes = schema_.n_classes;
        std::vector<double> left_counts(static_cast<std::size_t>(n_classes));
        std::vector<double> right_counts(static_cast<std::size_t>(n_classes));
        for (int j = 1; j <= 10; ++j) {
            const double threshold = lo + (hi - lo) * j / 11.0;
            double left_total = 0.0, right_total = 0.0;
            for (int c = 0; c < n_classes; ++c) {
                const GaussianStat& s = leaf.stat(feature, c, n_classes);
                const double below = s.count * s.cdf(threshold);
                left_counts[static_cast<std::size_t>(c)] = below;
                right_counts[static_cast<std::size_t>(c)] = s.count - below;
                left_total += below;
                right_total += s.count - below;
            }
            const double gain = parent_entropy -
                                (left_total / total) * entropy(left_counts, left_total) -
                                (right_total / total) * entropy(right_counts, right_total);
            if (gain > best.gain) {
                best.gain = gain;
                best.threshold = threshold;
            }
        }
        return best;
    }

    void try_split(Node& leaf) {
        if (params_.max_depth > 0 && leaf.depth >= params_.max_depth) return;
        const double total = std::accumulate(leaf.class_counts.begin(), leaf.class_counts.end(), 0.0);
        if (total <= 0.0) return;
        const double parent_entropy = entropy(leaf.class_counts, total);
        if (parent_entropy <= 0.0) return;  // pure leaf, nothing to gain

        SplitCandidate best, second;
        for (int f = 0; f < schema_.n_features; ++f) {
            SplitCandidate candidate = best_for_feature(leaf, f, parent_entropy, total);
            if (candidate.gain > best.gain) {
                second = best;
                best = candidate;
            } else if (candidate.gain > second.gain) {
                second = candidate;
            }
        }
        if (best.gain <= 0.0) return;

        const double range = std::log2(static_cast<double>(schema_.n_classes));
        const double epsilon = hoeffding_bound(range, params_.split_confidence, total);
        if (best.gain - second.gain > epsilon || epsilon < params_.tie_threshold) {
            leaf.split_feature = best.feature;
            leaf.split_threshold = best.threshold;
            leaf.left = std::make_unique<Node>(schema_, leaf.depth + 1);
            leaf.right = std::make_unique<Node>(schema_, leaf.depth + 1);
            leaf.class_counts.assign(leaf.class_counts.size(), 0.0);
            leaf.stats.clear();
            leaf.stats.shrink_to_fit();
        }
    }

    static int count_nodes(const Node& node) {
        if (node.is_leaf()) return 1;
        return 1 + count_nodes(*node.left) + count_nodes(*node.right);
    }
    static int count_leaves(const Node& node) {
        if (node.is_leaf()) return 1;
        return count_leaves(*node.left) + count_leaves(*node.right);
    }
    static int max_depth(const Node& node) {
        if (node.is_leaf()) return node.depth;
        return std::max(max_depth(*node.left), max_depth(*node.right));
    }

    HTParams params_;
    StreamSchema schema_;
    std::unique_ptr<Node> root_;
    long long samples_seen_ = 0;
};

}  // namespace dyned
