#include <catch_amalgamated.hpp>

#include <algorithm>
#include <memory>
#include <random>
#include <set>
#include <vector>

#include "dyned/generators.hpp"
#include "dyned/selection.hpp"

using namespace dyned;

namespace {

ComponentRecord make_component(int id, double accuracy, const std::vector<int>& oracle_bits = {}) {
    ComponentRecord component;
    component.id = id;
    component.windowed_accuracy = accuracy;
    component.oracle = OracleVector(50);
    for (const int b : oracle_bits) component.oracle.append(b != 0);
    return component;
}

ErrorProfile make_profile(const std::vector<int>& errors) {
    ErrorProfile profile;
    for (const int e : errors) profile.push(e != 0);
    return profile;
}

double partition_sse(const std::vector<ErrorProfile>& profiles, const std::vector<int>& assign) {
    double sse = 0.0;
    const int dims = profiles.front().size();
    for (int cluster = 0; cluster < 2; ++cluster) {
        std::vector<double> centroid(static_cast<std::size_t>(dims), 0.0);
        int members = 0;
        for (std::size_t k = 0; k < profiles.size(); ++k) {
            if (assign[k] != cluster) continue;
            ++members;
            for (int d = 0; d < dims; ++d)
                centroid[static_cast<std::size_t>(d)] += profiles[k].bit(d) ? 1.0 : 0.0;
        }
        if (members == 0) continue;
        for (auto& c : centroid) c /= members;
        for (std::size_t k = 0; k < profiles.size(); ++k) {
            if (assign[k] != cluster) continue;
            for (int d = 0; d < dims; ++d) {
                const double diff = (profiles[k].bit(d) ? 1.0 : 0.0) - centroid[static_cast<std::size_t>(d)];
                sse += diff * diff;
            }
        }
    }
    return sse;
}

// Exhaustive best 2-partition by within-cluster variance, for <= 8 profiles.
double brute_force_best_sse(const std::vector<ErrorProfile>& profiles) {
    const std::size_t n = profiles.size();
    double best = 1e300;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> assign(n);
        for (std::size_t k = 0; k < n; ++k) assign[k] = (mask >> k) & 1u;
        best = std::min(best, partition_sse(profiles, assign));
    }
    return best;
}

std::vector<Instance> sea_window(int n, std::uint64_t seed) {
    SeaGenerator gen(0, 0.0, seed);
    std::vector<Instance> window;
    for (int i = 0; i < n; ++i) window.push_back(*gen.next());
    return window;
}

std::vector<ComponentRecord> trained_components(int count, const std::vector<Instance>& window,
                                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> subset(10, static_cast<int>(window.size()));
    std::vector<ComponentRecord> components;
    for (int k = 0; k < count; ++k) {
        ComponentRecord component;
        component.id = k;
        component.model = std::make_shared<HoeffdingTree>(HTParams{}, StreamSchema{3, 2});
        const int n_train = subset(rng);
        for (int i = 0; i < n_train; ++i) component.model->learn(window[static_cast<std::size_t>(i)]);
        component.oracle = OracleVector(50);
        component.windowed_accuracy = 0.5;
        components.push_back(std::move(component));
    }
    return components;
}

}  // namespace

TEST_CASE("prune pool drops the weakest while at or above pool_s", "[selection]") {
    std::vector<ComponentRecord> pool;
    for (int i = 0; i < 6; ++i) pool.push_back(make_component(i, 0.9 - 0.1 * i));
    const auto pruned = prune_pool(std::move(pool), 5);
    REQUIRE(pruned.size() == 4);  // the loop condition is >=
    for (std::size_t i = 0; i < pruned.size(); ++i) CHECK(pruned[i].id == static_cast<int>(i));

    std::vector<ComponentRecord> small;
    for (int i = 0; i < 3; ++i) small.push_back(make_component(i, 0.5));
    CHECK(prune_pool(std::move(small), 5).size() == 3);
}

TEST_CASE("prune pool breaks accuracy ties by id", "[selection]") {
    std::vector<ComponentRecord> pool;
    for (int i = 0; i < 7; ++i) pool.push_back(make_component(i, 0.8));
    const auto pruned = prune_pool(std::move(pool), 6);
    REQUIRE(pruned.size() == 5);
    // Equal accuracies sort by lower id first, so the highest ids fall off.
    for (const auto& component : pruned) CHECK(component.id <= 4);
}

TEST_CASE("two error-rate groups cluster apart", "[selection]") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ErrorProfile> profiles;
    const int window = 100;
    for (int k = 0; k < 4; ++k) {  // low-error group
        std::vector<int> errors(window);
        for (auto& e : errors) e = unit(rng) < 0.1 ? 1 : 0;
        profiles.push_back(make_profile(errors));
    }
    for (int k = 0; k < 4; ++k) {  // high-error group
        std::vector<int> errors(window);
        for (auto& e : errors) e = unit(rng) < 0.9 ? 1 : 0;
        profiles.push_back(make_profile(errors));
    }
    const auto assignment = cluster_profiles(profiles, 1);
    for (int k = 1; k < 4; ++k) CHECK(assignment[static_cast<std::size_t>(k)] == assignment[0]);
    for (int k = 5; k < 8; ++k) CHECK(assignment[static_cast<std::size_t>(k)] == assignment[4]);
    CHECK(assignment[0] != assignment[4]);

    std::vector<int> assign_int(assignment.begin(), assignment.end());
    CHECK(partition_sse(profiles, assign_int) == Catch::Approx(brute_force_best_sse(profiles)));
}

TEST_CASE("degenerate clustering stays total", "[selection]") {
    std::vector<ErrorProfile> identical(5, make_profile({1, 0, 1, 0}));
    const auto assignment = cluster_profiles(identical, 3);
    REQUIRE(assignment.size() == 5);
    for (const int a : assignment) CHECK((a == 0 || a == 1));

    std::vector<ErrorProfile> pair{make_profile({1, 1, 0}), make_profile({0, 0, 1})};
    const auto two = cluster_profiles(pair, 3);
    REQUIRE(two.size() == 2);

    std::vector<ErrorProfile> single{make_profile({1, 0})};
    CHECK(cluster_profiles(single, 3) == std::vector<int>{0});
}

TEST_CASE("pick top per cluster takes up to cls_s from each", "[selection]") {
    std::array<std::vector<ComponentRecord>, 2> clusters;
    for (int i = 0; i < 15; ++i) clusters[0].push_back(make_component(i, 0.9 - 0.01 * i));
    for (int i = 15; i < 18; ++i) clusters[1].push_back(make_component(i, 0.5));
    auto [candidates, rest] = pick_top_per_cluster(std::move(clusters), 10);
    CHECK(candidates.size() == 13);  // 10 + take-all-3
    CHECK(rest.size() == 5);

    std::array<std::vector<ComponentRecord>, 2> even;
    for (int i = 0; i < 12; ++i) even[0].push_back(make_component(i, 0.9));
    for (int i = 12; i < 24; ++i) even[1].push_back(make_component(i, 0.8));
    auto [candidates2, rest2] = pick_top_per_cluster(std::move(even), 10);
    CHECK(candidates2.size() == 20);  // 2 * cls_s
    CHECK(rest2.size() == 4);

    std::array<std::vector<ComponentRecord>, 2> lopsided;
    for (int i = 0; i < 5; ++i) lopsided[0].push_back(make_component(i, 0.9));
    auto [candidates3, rest3] = pick_top_per_cluster(std::move(lopsided), 10);
    CHECK(candidates3.size() == 5);
    CHECK(rest3.empty());
}

TEST_CASE("mmr at lambda 1 ranks purely by accuracy", "[selection][mmr]") {
    std::vector<ComponentRecord> candidates;
    candidates.push_back(make_component(0, 0.7, {1, 1, 1}));
    candidates.push_back(make_component(1, 0.9, {1, 1, 1}));
    candidates.push_back(make_component(2, 0.8, {1, 1, 1}));
    auto [selected, rest] = mmr_select(std::move(candidates), 2, 1.0, Measure::DF);
    REQUIRE(selected.size() == 2);
    CHECK(selected[0].id == 1);  // 0.9 first
    CHECK(selected[1].id == 2);  // 0.8 second
    REQUIRE(rest.size() == 1);
    CHECK(rest[0].id == 0);
}

TEST_CASE("mmr at lambda 0 diversifies after the accuracy argmax", "[selection][mmr]") {
    // Oracles: 0 and 1 behave identically (DF similarity 1); 2 fails on
    // disjoint samples (DF similarity 0 to both).
    std::vector<ComponentRecord> candidates;
    candidates.push_back(make_component(0, 0.9, {0, 0, 1, 1}));
    candidates.push_back(make_component(1, 0.8, {0, 0, 1, 1}));
    candidates.push_back(make_component(2, 0.5, {1, 1, 0, 0}));
    auto [selected, rest] = mmr_select(std::move(candidates), 2, 0.0, Measure::DF);
    REQUIRE(selected.size() == 2);
    CHECK(selected[0].id == 0);  // accuracy argmax even at lambda = 0
    CHECK(selected[1].id == 2);  // minimizes max similarity to the pick
}

TEST_CASE("mmr greedy matches the worked example", "[selection][mmr]") {
    const std::vector<double> accuracy{0.9, 0.85, 0.8};
    const std::vector<int> ids{1, 2, 3};
    std::vector<std::vector<double>> sim{
        {0.0, 0.9, 0.2},
        {0.9, 0.0, 0.5},
        {0.2, 0.5, 0.0},
    };
    const auto order = detail::mmr_order(accuracy, ids, sim, 2, 0.6);
    REQUIRE(order.size() == 2);
    CHECK(order[0] == 0);  // acc 0.9 wins the first pick
    // score(2) = 0.6*0.85 - 0.4*0.9 = 0.15; score(3) = 0.6*0.8 - 0.4*0.2 = 0.40
    CHECK(order[1] == 2);
}

TEST_CASE("mmr handles empty oracles and empty candidate sets", "[selection][mmr]") {
    std::vector<ComponentRecord> candidates;
    candidates.push_back(make_component(0, 0.9, {1, 0, 1}));
    candidates.push_back(make_component(1, 0.95));  // fresh component, empty oracle
    auto [selected, rest] = mmr_select(std::move(candidates), 2, 0.6, Measure::DF);
    REQUIRE(selected.size() == 2);
    CHECK(selected[0].id == 1);  // selectable despite having no history

    CHECK_THROWS_AS(mmr_select({}, 2, 0.5, Measure::DF), std::invalid_argument);
}

TEST_CASE("similarity evaluations are counted once per pair", "[selection][mmr]") {
    auto run = [](int n, int slc) {
        std::vector<ComponentRecord> candidates;
        std::mt19937_64 rng(static_cast<std::uint64_t>(n));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int i = 0; i < n; ++i) {
            std::vector<int> bits(50);
            for (auto& b : bits) b = unit(rng) < 0.7 ? 1 : 0;
            candidates.push_back(make_component(i, unit(rng), bits));
        }
        SelectionStats stats;
        mmr_select(std::move(candidates), slc, 0.6, Measure::DF, &stats);
        return stats.similarity_evals;
    };

    const long long n20 = run(20, 10);
    CHECK(n20 == 20 * 19 / 2);
    CHECK(n20 <= 20 * 20);

    const long long n40 = run(40, 10);
    const double ratio = static_cast<double>(n40) / static_cast<double>(n20);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);

    CHECK(run(20, 1) == 0);  // single pick needs no similarity
}

TEST_CASE("select_components keeps everything active at startup", "[selection]") {
    const auto window = sea_window(100, 3);
    auto components = trained_components(5, window, 7);
    auto [active, reserve] = select_components({}, std::move(components), window,
                                               SelectionParams{}, 1);
    CHECK(active.size() == 5);
    CHECK(reserve.empty());
}

TEST_CASE("select_components partitions and bounds the sets", "[selection]") {
    const auto window = sea_window(120, 11);
    SelectionParams params;
    params.slc_s = 10;
    params.cls_s = 10;

    auto components = trained_components(30, window, 13);
    std::vector<ComponentRecord> pool(components.begin(), components.begin() + 18);
    std::vector<ComponentRecord> active(components.begin() + 18, components.end());

    auto [new_active, new_reserve] = select_components(std::move(pool), std::move(active),
                                                       window, params, 5);
    CHECK(new_active.size() == 10);
    CHECK(new_active.size() + new_reserve.size() == 30);  // nothing pruned below pool_s

    std::set<int> seen;
    for (const auto& c : new_active) seen.insert(c.id);
    for (const auto& c : new_reserve) {
        CHECK_FALSE(seen.contains(c.id));
        seen.insert(c.id);
    }
    CHECK(seen.size() == 30);

    // Accuracies were refreshed from the window replay.
    for (const auto& c : new_active) {
        CHECK(c.windowed_accuracy >= 0.0);
        CHECK(c.windowed_accuracy <= 1.0);
        CHECK(c.oracle.size() == std::min(50, static_cast<int>(window.size())));
    }
}

TEST_CASE("select_components is deterministic", "[selection]") {
    const auto window = sea_window(80, 19);
    SelectionParams params;
    params.slc_s = 4;
    params.cls_s = 3;

    auto ids_of = [&] {
        auto components = trained_components(12, window, 23);
        std::vector<ComponentRecord> pool(components.begin(), components.begin() + 6);
        std::vector<ComponentRecord> active(components.begin() + 6, components.end());
        auto [selected, rest] = select_components(std::move(pool), std::move(active), window,
                                                  params, 77);
        std::vector<int> ids;
        for (const auto& c : selected) ids.push_back(c.id);
        return ids;
    };
    CHECK(ids_of() == ids_of());
}

TEST_CASE("select_components enforces preconditions", "[selection]") {
    const auto window = sea_window(10, 5);
    CHECK_THROWS_AS(select_components({}, {}, window, SelectionParams{}, 1),
                    std::invalid_argument);
    auto components = trained_components(3, window, 5);
    CHECK_THROWS_AS(select_components(std::move(components), {}, std::vector<Instance>{},
                                      SelectionParams{}, 1),
                    std::invalid_argument);
}

TEST_CASE("select_components respects pool_s pruning", "[selection]") {
    const auto window = sea_window(60, 31);
    SelectionParams params;
    params.pool_s = 8;
    params.slc_s = 3;
    params.cls_s = 3;
    auto components = trained_components(12, window, 37);
    auto [active, reserve] = select_components(std::move(components), {}, window, params, 9);
    CHECK(active.size() == 3);
    CHECK(active.size() + reserve.size() == 7);  // pruned to pool_s - 1
}
