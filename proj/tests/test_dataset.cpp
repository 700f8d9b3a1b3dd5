#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "fmvqa/dataset.hpp"

using namespace fmvqa;

TEST_CASE("csv loading accepts plain and bracketed bitstrings", "[dataset]") {
    std::istringstream in("bitstring,value\n1010,0.5\n[0110],-1.25\n");
    const Dataset ds = load_dataset(in, 4);
    REQUIRE(ds.records.size() == 2);
    CHECK(ds.records[0].x == Bits{1, 0, 1, 0});
    CHECK(ds.records[0].y == 0.5);
    CHECK(ds.records[1].x == Bits{0, 1, 1, 0});
    CHECK(ds.records[1].y == -1.25);
}

TEST_CASE("csv loading rejects malformed input", "[dataset]") {
    auto loads = [](const std::string& text) {
        std::istringstream in(text);
        return load_dataset(in, 4);
    };
    CHECK_THROWS_WITH(loads(""), Catch::Matchers::ContainsSubstring("empty"));
    CHECK_THROWS_WITH(loads("bits,val\n"), Catch::Matchers::ContainsSubstring("header"));
    CHECK_THROWS_WITH(loads("bitstring,value\n"), Catch::Matchers::ContainsSubstring("no records"));
    CHECK_THROWS_WITH(loads("bitstring,value\n1010\n"), Catch::Matchers::ContainsSubstring("malformed"));
    CHECK_THROWS_WITH(loads("bitstring,value\n101,0.5\n"),
                      Catch::Matchers::ContainsSubstring("length mismatch"));
    CHECK_THROWS_WITH(loads("bitstring,value\n1010,abc\n"),
                      Catch::Matchers::ContainsSubstring("bad value"));
    CHECK_THROWS_WITH(loads("bitstring,value\n1010,1.0\n1010,2.0\n"),
                      Catch::Matchers::ContainsSubstring("duplicate"));
    CHECK_THROWS_WITH(loads("bitstring,value\n1010,nan\n"),
                      Catch::Matchers::ContainsSubstring("bad value"));
}

TEST_CASE("save/load round-trip preserves values exactly", "[dataset]") {
    QuboModel truth = QuboModel::zeros(4);
    truth.diag = {0.3, -0.7, 0.1, 0.9};
    truth.at(0, 2) = 1.0 / 3.0;
    const Dataset ds = synth_dataset(truth, 0.0, 1);
    std::stringstream buf;
    save_dataset(buf, ds);
    const Dataset back = load_dataset(buf, 4);
    REQUIRE(back.records.size() == ds.records.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        CHECK(back.records[i].x == ds.records[i].x);
        CHECK(back.records[i].y == ds.records[i].y);  // %.17g is lossless for doubles
    }
}

TEST_CASE("synth_dataset enumerates the truth with optional noise", "[dataset]") {
    QuboModel truth = QuboModel::zeros(3);
    truth.diag = {1.0, 2.0, 4.0};
    const Dataset clean = synth_dataset(truth, 0.0, 9);
    REQUIRE(clean.records.size() == 8);
    for (const auto& r : clean.records) CHECK(r.y == truth.evaluate(r.x));
    const Dataset noisy = synth_dataset(truth, 0.1, 9);
    bool moved = false;
    for (std::size_t i = 0; i < 8; ++i) moved = moved || noisy.records[i].y != clean.records[i].y;
    CHECK(moved);
    CHECK_THROWS_AS(synth_dataset(truth, -0.1, 9), std::invalid_argument);
    CHECK_THROWS_AS(synth_dataset(QuboModel::zeros(17), 0.0, 9), std::invalid_argument);
}

TEST_CASE("structured pool helpers", "[dataset]") {
    CHECK(one_cold(4, 1) == Bits{1, 0, 1, 1});
    CHECK(one_hot(4, 1) == Bits{0, 1, 0, 0});
}

TEST_CASE("staged selection starts at 3 vectors and nests monotonically", "[dataset]") {
    QuboModel truth = QuboModel::zeros(5);
    truth.diag = {1.0, 2.0, 3.0, 4.0, 5.0};
    const Dataset ds = synth_dataset(truth, 0.0, 2);
    std::set<std::string> prev;
    for (int stage = 0; stage < 5; ++stage) {
        const auto [train, test] = select_training_set(ds, stage, 99);
        CHECK(train.records.size() == 3 + 2 * static_cast<std::size_t>(stage));
        CHECK(train.records.size() + test.records.size() == 32);
        std::set<std::string> keys;
        for (const auto& r : train.records) keys.insert(bits_to_string(r.x));
        CHECK(keys.size() == train.records.size());
        CHECK(keys.count("11111") == 1);
        for (const auto& k : prev) CHECK(keys.count(k) == 1);  // earlier stages nest
        prev = keys;
    }
    // final stage uses the full structured pool: all-ones + n pairs
    CHECK(prev.size() == 11);
    CHECK_THROWS_AS(select_training_set(ds, 5, 99), std::invalid_argument);
    CHECK_THROWS_AS(select_training_set(ds, -1, 99), std::invalid_argument);
}

TEST_CASE("staged selection requires the structured pool", "[dataset]") {
    Dataset ds;
    ds.n = 3;
    ds.records.push_back({{1, 1, 1}, 0.0});  // missing the pairs
    CHECK_THROWS_WITH(select_training_set(ds, 0, 1),
                      Catch::Matchers::ContainsSubstring("one-cold/one-hot"));
}

TEST_CASE("r_squared matches the closed-form Pearson value", "[dataset]") {
    CHECK(r_squared({1.0, 2.0, 3.0}, {1.0, 2.0, 4.0}) == Catch::Approx(27.0 / 28.0));
    CHECK(r_squared({1.0, 2.0}, {2.0, 4.0}) == Catch::Approx(1.0));
    CHECK_THROWS_AS(r_squared({1.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(r_squared({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(r_squared({1.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
}
