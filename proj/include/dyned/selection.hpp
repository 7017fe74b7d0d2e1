#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <deque>
#include <memory>
#include <utility>
#include <vector>

#include "dyned/diversity.hpp"
#include "dyned/hoeffding_tree.hpp"

namespace dyned {

/// One ensemble member: classifier handle plus the bookkeeping the selection
/// step ranks by.
struct ComponentRecord {
    int id = 0;
    std::shared_ptr<HoeffdingTree> model;
    double windowed_accuracy = 0.0;
    OracleVector oracle{50};
    long long birth_index = 0;
};

struct SelectionParams {
    double lambda = 0.6;
    int pool_s = 500;
    int cls_s = 10;
    int slc_s = 10;
    int error_s = 50;
    Measure measure = Measure::DF;
};

inline void validate(const SelectionParams& params) {
    if (params.lambda < 0.0 || params.lambda > 1.0)
        throw ConfigError("selection: lambda must be in [0,1]");
    if (params.pool_s < 1 || params.cls_s < 1 || params.slc_s < 1 || params.error_s < 1)
        throw ConfigError("selection: sizes must be >= 1");
}

/// Counters filled by one selection pass.
struct SelectionStats {
    long long similarity_evals = 0;
};

/// Binary per-sample error vector, bit-packed (1 = wrong on that sample).
class ErrorProfile {
public:
    void push(bool error) {
        const int word = n_ / 64, offset = n_ % 64;
        if (offset == 0) words_.push_back(0);
        if (error) words_[static_cast<std::size_t>(word)] |= 1ULL << offset;
        ++n_;
    }

    int size() const { return n_; }
    bool bit(int i) const { return (words_[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1ULL; }

    int error_count() const {
        int count = 0;
        for (const auto w : words_) count += std::popcount(w);
        return count;
    }

    int hamming_distance(const ErrorProfile& other) const {
        int distance = 0;
        for (std::size_t w = 0; w < words_.size(); ++w)
            distance += std::popcount(words_[w] ^ other.words_[w]);
        return distance;
    }

private:
    std::vector<std::uint64_t> words_;
    int n_ = 0;
};

/// Sort order used throughout selection: accuracy descending, ties to the
/// lower component id.
inline void sort_by_accuracy(std::vector<ComponentRecord>& components) {
    std::sort(components.begin(), components.end(),
              [](const ComponentRecord& a, const ComponentRecord& b) {
                  if (a.windowed_accuracy != b.windowed_accuracy)
                      return a.windowed_accuracy > b.windowed_accuracy;
                  return a.id < b.id;
              });
}

/// Drops the lowest-accuracy component while the pool is at or above pool_s,
/// leaving at most pool_s - 1 components.
inline std::vector<ComponentRecord> prune_pool(std::vector<ComponentRecord> components, int pool_s) {
    sort_by_accuracy(components);
    while (static_cast<int>(components.size()) >= pool_s) components.pop_back();
    return components;
}

/// Replays each component over the window; bit i is set when the component
/// mispredicts window sample i.
template <typename WindowRange>
std::vector<ErrorProfile> compute_error_profiles(const std::vector<ComponentRecord>& components,
                                                 const WindowRange& window) {
    std::vector<ErrorProfile> profiles(components.size());
    for (std::size_t k = 0; k < components.size(); ++k) {
        for (const Instance& instance : window)
            profiles[k].push(components[k].model->predict(instance.features) != instance.label);
    }
    return profiles;
}

/// Resets windowed accuracy and the oracle ring from a freshly computed
/// window error profile; the oracle keeps the most recent error_s outcomes.
inline void refresh_from_profile(ComponentRecord& component, const ErrorProfile& profile,
                                 int error_s) {
    const int n = profile.size();
    if (n == 0) return;
    component.windowed_accuracy =
        1.0 - static_cast<double>(profile.error_count()) / static_cast<double>(n);
    component.oracle = OracleVector(error_s);
    for (int i = std::max(0, n - error_s); i < n; ++i) component.oracle.append(!profile.bit(i));
}

/// Two-means clustering of error profiles. Centroids start at the two most
/// distant profiles (ties to the lexicographically first index pair), so the
/// result is deterministic; the seed parameter is accepted for interface
/// stability but not consumed.
inline std::vector<int> cluster_profiles(const std::vector<ErrorProfile>& profiles,
                                         std::uint64_t /*seed*/) {
    const std::size_t n = profiles.size();
    std::vector<int> assignment(n, 0);
    if (n < 2) return assignment;

    std::size_t init_a = 0, init_b = 1;
    int best_distance = -1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const int d = profiles[i].hamming_distance(profiles[j]);
            if (d > best_distance) {
                best_distance = d;
                init_a = i;
                init_b = j;
            }
        }

    const int dims = profiles[0].size();
    std::array<std::vector<double>, 2> centroids;
    centroids[0].resize(static_cast<std::size_t>(dims));
    centroids[1].resize(static_cast<std::size_t>(dims));
    for (int d = 0; d < dims; ++d) {
        centroids[0][static_cast<std::size_t>(d)] = profiles[init_a].bit(d) ? 1.0 : 0.0;
        centroids[1][static_cast<std::size_t>(d)] = profiles[init_b].bit(d) ? 1.0 : 0.0;
    }

    for (int iteration = 0; iteration < 100; ++iteration) {
        bool changed = false;
        for (std::size_t k = 0; k < n; ++k) {
            std::array<double, 2> distance{0.0, 0.0};
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < dims; ++d) {
                    const double diff =
                        (profiles[k].bit(d) ? 1.0 : 0.0) - centroids[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)];
                    distance[static_cast<std::size_t>(c)] += diff * diff;
                }
            const int nearest = distance[1] < distance[0] ? 1 : 0;
            if (nearest != assignment[k]) {
                assignment[k] = nearest;
                changed = true;
            }
        }
        if (!changed) break;

        std::array<std::vector<double>, 2> sums;
        sums[0].assign(static_cast<std::size_t>(dims), 0.0);
        sums[1].assign(static_cast<std::size_t>(dims), 0.0);
        std::array<int, 2> members{0, 0};
        for (std::size_t k = 0; k < n; ++k) {
            const auto c = static_cast<std::size_t>(assignment[k]);
            ++members[c];
            for (int d = 0; d < dims; ++d)
                if (profiles[k].bit(d)) sums[c][static_cast<std::size_t>(d)] += 1.0;
        }
        for (std::size_t c = 0; c < 2; ++c) {
            if (members[c] == 0) continue;  // empty cluster keeps its centroid
            for (int d = 0; d < dims; ++d)
                centroids[c][static_cast<std::size_t>(d)] = sums[c][static_cast<std::size_t>(d)] / members[c];
        }
    }
    return assignment;
}

/// Clusters components by their window error profiles (k = 2). With fewer
/// than two components everything lands in the first cluster.
template <typename WindowRange>
std::array<std::vector<ComponentRecord>, 2> cluster_by_error(
    const std::vector<ComponentRecord>& components, const WindowRange& window, std::uint64_t seed) {
    const auto profiles = compute_error_profiles(components, window);
    const auto assignment = cluster_profiles(profiles, seed);
    std::array<std::vector<ComponentRecord>, 2> clusters;
    for (std::size_t k = 0; k < components.size(); ++k)
        clusters[static_cast<std::size_t>(assignment[k])].push_back(components[k]);
    return clusters;
}

/// Takes up to cls_s highest-accuracy components from each cluster; returns
/// (candidates, cls_rst).
inline std::pair<std::vector<ComponentRecord>, std::vector<ComponentRecord>> pick_top_per_cluster(
    std::array<std::vector<ComponentRecord>, 2> clusters, int cls_s) {
    std::vector<ComponentRecord> candidates;
    std::vector<ComponentRecord> rest;
    for (auto& cluster : clusters) {
        sort_by_accuracy(cluster);
        for (std::size_t k = 0; k < cluster.size(); ++k)
            (static_cast<int>(k) < cls_s ? candidates : rest).push_back(std::move(cluster[k]));
    }
    return {std::move(candidates), std::move(rest)};
}

namespace detail {

/// Pairwise similarity matrix over candidates. Pairs with an empty oracle on
/// either side score 0 without being counted as evaluations.
inline std::vector<std::vector<double>> similarity_matrix(
    const std::vector<ComponentRecord>& candidates, Measure measure, SelectionStats* stats) {
    const std::size_t n = candidates.size();
    std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double value = 0.0;
            if (!candidates[i].oracle.empty() && !candidates[j].oracle.empty()) {
                value = similarity(measure, joint_counts(candidates[i].oracle, candidates[j].oracle));
                if (stats) ++stats->similarity_evals;
            }
            matrix[i][j] = matrix[j][i] = value;
        }
    return matrix;
}

/// Greedy MMR over precomputed scores: repeatedly picks the candidate
/// maximizing lambda*acc - (1-lambda)*max-similarity-to-selected. Score ties
/// break by higher accuracy (so the lambda = 0 first pick is still the
/// accuracy argmax), then by lower id.
inline std::vector<std::size_t> mmr_order(const std::vector<double>& accuracies,
                                          const std::vector<int>& ids,
                                          const std::vector<std::vector<double>>& sim,
                                          int slc_s, double lambda) {
    const std::size_t n = accuracies.size();
    const std::size_t target = std::min<std::size_t>(static_cast<std::size_t>(slc_s), n);
    std::vector<std::size_t> order;
    std::vector<bool> taken(n, false);
    std::vector<double> max_sim(n, 0.0);  // max over empty S is 0
    while (order.size() < target) {
        std::size_t best = n;
        double best_score = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            const double score = lambda * accuracies[i] - (1.0 - lambda) * max_sim[i];
            const bool wins =
                best == n || score > best_score ||
                (score == best_score && (accuracies[i] > accuracies[best] ||
                                         (accuracies[i] == accuracies[best] && ids[i] < ids[best])));
            if (wins) {
                best = i;
                best_score = score;
            }
        }
        taken[best] = true;
        order.push_back(best);
        for (std::size_t i = 0; i < n; ++i)
            if (!taken[i]) max_sim[i] = std::max(max_sim[i], sim[i][best]);
    }
    return order;
}

}  // namespace detail

/// Adapted-MMR selection: greedy argmax of
/// lambda*acc(CS_i) - (1-lambda)*max_{CS_j in S} sim(CS_i, CS_j).
/// Returns (selected in pick order, rest). The pairwise similarity matrix is
/// computed once up front; the greedy loop then works from lookups.
inline std::pair<std::vector<ComponentRecord>, std::vector<ComponentRecord>> mmr_select(
    std::vector<ComponentRecord> candidates, int slc_s, double lambda, Measure measure,
    SelectionStats* stats = nullptr) {
    if (candidates.empty()) throw std::invalid_argument("mmr: empty candidate set");
    const std::size_t n = candidates.size();
    const std::size_t target = std::min<std::size_t>(static_cast<std::size_t>(slc_s), n);

    std::vector<std::vector<double>> sim;
    if (target >= 2)
        sim = detail::similarity_matrix(candidates, measure, stats);
    else
        sim.assign(n, std::vector<double>(n, 0.0));

    std::vector<double> accuracies(n);
    std::vector<int> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        accuracies[i] = candidates[i].windowed_accuracy;
        ids[i] = candidates[i].id;
    }
    const auto order = detail::mmr_order(accuracies, ids, sim, slc_s, lambda);

    std::vector<bool> selected_mask(n, false);
    std::vector<ComponentRecord> selected;
    for (const std::size_t i : order) {
        selected_mask[i] = true;
        selected.push_back(std::move(candidates[i]));
    }
    std::vector<ComponentRecord> rest;
    for (std::size_t i = 0; i < n; ++i)
        if (!selected_mask[i]) rest.push_back(std::move(candidates[i]));
    return {std::move(selected), std::move(rest)};
}

/// Algorithm-2 end to end: merge active and reserve, prune to below pool_s,
/// recompute window error profiles (refreshing accuracy and oracles),
/// cluster, take the per-cluster tops, MMR-select the new active set. The
/// new reserve is cls_rst plus the MMR rest.
template <typename WindowRange>
std::pair<std::vector<ComponentRecord>, std::vector<ComponentRecord>> select_components(
    std::vector<ComponentRecord> pool, std::vector<ComponentRecord> active,
    const WindowRange& window, const SelectionParams& params, std::uint64_t seed,
    SelectionStats* stats = nullptr) {
    validate(params);
    std::vector<ComponentRecord> merged = std::move(pool);
    for (auto& component : active) merged.push_back(std::move(component));
    if (merged.empty()) throw std::invalid_argument("select: no components");
    if (std::begin(window) == std::end(window))
        throw std::invalid_argument("select: empty window");

    merged = prune_pool(std::move(merged), params.pool_s);

    const auto profiles = compute_error_profiles(merged, window);
    for (std::size_t k = 0; k < merged.size(); ++k)
        refresh_from_profile(merged[k], profiles[k], params.error_s);

    const auto assignment = cluster_profiles(profiles, seed);
    std::array<std::vector<ComponentRecord>, 2> clusters;
    for (std::size_t k = 0; k < merged.size(); ++k)
        clusters[static_cast<std::size_t>(assignment[k])].push_back(std::move(merged[k]));

    auto [candidates, cls_rst] = pick_top_per_cluster(std::move(clusters), params.cls_s);
    auto [selected, mmr_rest] = mmr_select(std::move(candidates), params.slc_s, params.lambda,
                                           params.measure, stats);

    std::vector<ComponentRecord> new_pool = std::move(cls_rst);
    for (auto& component : mmr_rest) new_pool.push_back(std::move(component));
    return {std::move(selected), std::move(new_pool)};
}

}  // namespace dyned
