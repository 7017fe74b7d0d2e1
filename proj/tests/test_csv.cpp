#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "dyned/csv.hpp"

using namespace dyned;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("csv maps labels by first appearance", "[csv]") {
    const auto path = write_temp("dyned_csv_basic.csv", "1.0,2.0,A\n3.0,4.0,B\n5.0,6.0,A\n");
    auto source = csv_open(path.string(), 2);

    const auto first = source->next();
    REQUIRE(first.has_value());
    CHECK(first->features == std::vector<double>{1.0, 2.0});
    CHECK(first->label == 0);

    const auto second = source->next();
    CHECK(second->features == std::vector<double>{3.0, 4.0});
    CHECK(second->label == 1);

    const auto third = source->next();
    CHECK(third->label == 0);
    CHECK_FALSE(source->next().has_value());

    CHECK(source->schema().n_features == 2);
    CHECK(source->schema().n_classes == 2);
}

TEST_CASE("csv supports label column -1 as last", "[csv]") {
    const auto path = write_temp("dyned_csv_last.csv", "1,2,x\n3,4,y\n");
    auto source = csv_open(path.string(), -1);
    CHECK(source->next()->label == 0);
    CHECK(source->next()->label == 1);
}

TEST_CASE("empty csv is immediately exhausted", "[csv]") {
    const auto path = write_temp("dyned_csv_empty.csv", "");
    auto source = csv_open(path.string(), 0);
    CHECK_FALSE(source->next().has_value());
}

TEST_CASE("csv errors name the offending line", "[csv]") {
    const auto arity = write_temp("dyned_csv_arity.csv", "1,2,A\n3,4\n");
    try {
        csv_open(arity.string(), 2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    const auto bad_feature = write_temp("dyned_csv_feature.csv", "1,2,A\n3,oops,B\n");
    try {
        csv_open(bad_feature.string(), 2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("oops") != std::string::npos);
    }
}

TEST_CASE("csv rejects unknown or out-of-range label columns", "[csv]") {
    const auto path = write_temp("dyned_csv_cols.csv", "f1,f2,class\n1,2,A\n");
    CHECK_THROWS_AS(csv_open(path.string(), std::string("missing"), std::nullopt, true),
                    ConfigError);
    CHECK_THROWS_AS(csv_open(path.string(), 7), ConfigError);
    // Label by name without a header is a configuration error.
    CHECK_THROWS_AS(csv_open(path.string(), std::string("class"), std::nullopt, false),
                    ConfigError);
    CHECK_THROWS_AS(csv_open("/nonexistent/missing.csv", 0), ConfigError);
}

TEST_CASE("csv header handling and label by name", "[csv]") {
    const auto path = write_temp("dyned_csv_header.csv", "a,b,class\n1,2,pos\n3,4,neg\n");
    auto source = csv_open(path.string(), std::string("class"), std::nullopt, true);
    const auto first = source->next();
    CHECK(first->features == std::vector<double>{1.0, 2.0});
    CHECK(first->label == 0);
    CHECK(source->next()->label == 1);
    CHECK_FALSE(source->next().has_value());
}

TEST_CASE("csv label column may sit in the middle", "[csv]") {
    const auto path = write_temp("dyned_csv_mid.csv", "1,A,2\n3,B,4\n");
    auto source = csv_open(path.string(), 1);
    const auto first = source->next();
    CHECK(first->features == std::vector<double>{1.0, 2.0});
    CHECK(first->label == 0);
}

TEST_CASE("csv schema hint is validated", "[csv]") {
    const auto path = write_temp("dyned_csv_hint.csv", "1,2,A\n3,4,B\n");
    auto source = csv_open(path.string(), 2, StreamSchema{2, 5});
    CHECK(source->schema().n_classes == 5);
    CHECK_THROWS_AS(csv_open(path.string(), 2, StreamSchema{3, 2}), ConfigError);
    CHECK_THROWS_AS(csv_open(path.string(), 2, StreamSchema{2, 1}), ConfigError);
}

TEST_CASE("csv sources with identical parameters agree", "[csv]") {
    const auto path = write_temp("dyned_csv_det.csv", "1,2,A\n3,4,B\n5,6,C\n");
    auto a = csv_open(path.string(), 2);
    auto b = csv_open(path.string(), 2);
    while (true) {
        const auto ia = a->next(), ib = b->next();
        REQUIRE(ia.has_value() == ib.has_value());
        if (!ia) break;
        CHECK(ia->features == ib->features);
        CHECK(ia->label == ib->label);
    }
}
