#include <catch2/catch_amalgamated.hpp>

#include "fmvqa/bits.hpp"

using namespace fmvqa;

TEST_CASE("index_to_bits puts site 0 at the most significant position", "[bits]") {
    CHECK(bits_to_string(index_to_bits(38, 6)) == "100110");
    CHECK(bits_to_string(index_to_bits(0, 6)) == "000000");
    CHECK(bits_to_string(index_to_bits(63, 6)) == "111111");
    CHECK(bits_to_string(index_to_bits(1, 6)) == "000001");
    CHECK(bits_to_string(index_to_bits(5, 3)) == "101");
}

TEST_CASE("index round-trip is exhaustive at n=6", "[bits]") {
    for (std::uint64_t idx = 0; idx < 64; ++idx)
        CHECK(bits_to_index(index_to_bits(idx, 6)) == idx);
}

TEST_CASE("string parsing round-trips and validates", "[bits]") {
    CHECK(string_to_bits("100110") == Bits{1, 0, 0, 1, 1, 0});
    CHECK(bits_to_string(string_to_bits("011")) == "011");
    CHECK_THROWS_AS(string_to_bits("10x1"), std::invalid_argument);
    CHECK_THROWS_AS(string_to_bits(""), std::invalid_argument);
}

TEST_CASE("H/D rendering maps 1 to H and 0 to D", "[bits]") {
    CHECK(render_hd(string_to_bits("100110")) == "HDDHHD");
    CHECK(render_hd(string_to_bits("000000")) == "DDDDDD");
    CHECK(render_hd(string_to_bits("111111")) == "HHHHHH");
}

TEST_CASE("zero counting and spin convention", "[bits]") {
    CHECK(count_zeros(string_to_bits("100110")) == 3);
    CHECK(count_zeros(string_to_bits("1111")) == 0);
    CHECK(spin_of(1) == 1);
    CHECK(spin_of(0) == -1);
}
