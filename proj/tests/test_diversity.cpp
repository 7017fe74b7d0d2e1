#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "dyned/diversity.hpp"

using namespace dyned;

namespace {

OracleVector make_oracle(const std::vector<int>& bits, int capacity = 50) {
    OracleVector oracle(capacity);
    for (const int b : bits) oracle.append(b != 0);
    return oracle;
}

// Brute-force positional recount, independent of JointCounts bookkeeping.
JointCounts recount(const std::vector<int>& a, const std::vector<int>& b) {
    JointCounts counts;
    const std::size_t m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i) {
        const bool ca = a[a.size() - m + i] != 0;
        const bool cb = b[b.size() - m + i] != 0;
        counts.n11 += ca && cb;
        counts.n10 += ca && !cb;
        counts.n01 += !ca && cb;
        counts.n00 += !ca && !cb;
    }
    return counts;
}

}  // namespace

TEST_CASE("oracle ring evicts oldest entries", "[diversity]") {
    OracleVector oracle(3);
    CHECK(oracle.empty());
    oracle.append(true);
    oracle.append(false);
    CHECK(oracle.size() == 2);
    CHECK(oracle.at(0) == true);
    CHECK(oracle.at(1) == false);
    oracle.append(true);
    oracle.append(true);  // evicts the first entry
    CHECK(oracle.size() == 3);
    CHECK(oracle.at(0) == false);
    CHECK(oracle.at(1) == true);
    CHECK(oracle.at(2) == true);
    CHECK_THROWS_AS(OracleVector(0), ConfigError);
}

TEST_CASE("joint counts follow the spec examples", "[diversity]") {
    const auto counts = joint_counts(make_oracle({1, 1, 0, 0}), make_oracle({1, 0, 0, 1}));
    CHECK(counts.n11 == 1);
    CHECK(counts.n10 == 1);
    CHECK(counts.n01 == 1);
    CHECK(counts.n00 == 1);

    const auto same = joint_counts(make_oracle({1, 0, 1}), make_oracle({1, 0, 1}));
    CHECK(same.n10 == 0);
    CHECK(same.n01 == 0);

    const auto disjoint = joint_counts(make_oracle({1, 1, 1, 1, 1}), make_oracle({0, 0, 0, 0, 0}));
    CHECK(disjoint.n10 == 5);
    CHECK(disjoint.n11 == 0);
    CHECK(disjoint.n01 == 0);
    CHECK(disjoint.n00 == 0);

    CHECK_THROWS_AS(joint_counts(OracleVector(5), make_oracle({1})), UndefinedSimilarityError);
}

TEST_CASE("joint counts align the most recent common suffix", "[diversity]") {
    // a has 6 entries, b only 2: compare a's last 2 with b.
    const auto counts = joint_counts(make_oracle({0, 0, 0, 0, 1, 1}), make_oracle({1, 0}));
    CHECK(counts.n() == 2);
    CHECK(counts.n11 == 1);  // (1,1)
    CHECK(counts.n10 == 1);  // (1,0)
}

TEST_CASE("diversity measures match hand computations", "[diversity]") {
    const JointCounts even{1, 1, 1, 1};
    CHECK(df_measure(even) == Catch::Approx(0.25));
    CHECK(dm_measure(even) == Catch::Approx(0.5));
    CHECK(q_statistic(even) == Catch::Approx(0.0));
    CHECK(cp_measure(even) == Catch::Approx(0.0));

    const JointCounts all_correct{4, 0, 0, 0};
    CHECK(df_measure(all_correct) == 0.0);
    const JointCounts all_wrong{0, 0, 0, 4};
    CHECK(df_measure(all_wrong) == 1.0);

    const JointCounts identical_mixed{2, 0, 0, 2};
    CHECK(dm_measure(identical_mixed) == 0.0);
    CHECK(q_statistic(identical_mixed) == 1.0);
    CHECK(cp_measure(identical_mixed) == Catch::Approx(1.0));

    const JointCounts complementary{0, 2, 2, 0};
    CHECK(dm_measure(complementary) == 1.0);
    CHECK(cp_measure(complementary) == Catch::Approx(-1.0));

    // Degenerate denominators: identical behavior maps to 1, otherwise 0.
    const JointCounts all_same_correct{3, 0, 0, 0};
    CHECK(q_statistic(all_same_correct) == 1.0);
    CHECK(cp_measure(all_same_correct) == 1.0);
    const JointCounts one_sided{3, 1, 0, 0};
    CHECK(q_statistic(one_sided) == 0.0);
    CHECK(cp_measure(one_sided) == 0.0);

    CHECK_THROWS_AS(df_measure(JointCounts{}), UndefinedSimilarityError);
}

TEST_CASE("similarity mappings land in [0,1]", "[diversity]") {
    const JointCounts even{1, 1, 1, 1};
    CHECK(similarity(Measure::DF, even) == Catch::Approx(0.25));
    CHECK(similarity(Measure::DM, even) == Catch::Approx(0.5));
    CHECK(similarity(Measure::Q, even) == Catch::Approx(0.5));
    CHECK(similarity(Measure::CP, even) == Catch::Approx(0.5));

    const auto identical = joint_counts(make_oracle({1, 0, 1, 0}), make_oracle({1, 0, 1, 0}));
    CHECK(similarity(Measure::DM, identical) == 1.0);
    CHECK(similarity(Measure::Q, identical) == 1.0);
    CHECK(similarity(Measure::CP, identical) == 1.0);
}

TEST_CASE("q similarity of independent oracles is near one half", "[diversity]") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double q_sum = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        std::vector<int> a(400), b(400);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = unit(rng) < 0.6 ? 1 : 0;
            b[i] = unit(rng) < 0.6 ? 1 : 0;
        }
        q_sum += similarity(Measure::Q, joint_counts(make_oracle(a, 400), make_oracle(b, 400)));
    }
    CHECK(q_sum / trials == Catch::Approx(0.5).margin(0.03));
}

TEST_CASE("measures agree with a brute-force recount on random pairs", "[diversity][property]") {
    std::mt19937_64 rng(57);
    std::uniform_int_distribution<int> len_dist(2, 12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<int> a(static_cast<std::size_t>(len_dist(rng)));
        std::vector<int> b(static_cast<std::size_t>(len_dist(rng)));
        for (auto& bit : a) bit = unit(rng) < 0.5 ? 1 : 0;
        for (auto& bit : b) bit = unit(rng) < 0.5 ? 1 : 0;
        const auto oa = make_oracle(a, 12);
        const auto ob = make_oracle(b, 12);

        const auto fast = joint_counts(oa, ob);
        const auto slow = recount(a, b);
        REQUIRE(fast.n11 == slow.n11);
        REQUIRE(fast.n10 == slow.n10);
        REQUIRE(fast.n01 == slow.n01);
        REQUIRE(fast.n00 == slow.n00);

        for (const Measure m : {Measure::DF, Measure::DM, Measure::Q, Measure::CP}) {
            const double s_ab = similarity(m, joint_counts(oa, ob));
            const double s_ba = similarity(m, joint_counts(ob, oa));
            REQUIRE(s_ab == s_ba);  // symmetry
            REQUIRE(s_ab >= 0.0);
            REQUIRE(s_ab <= 1.0);
        }
    }
}
