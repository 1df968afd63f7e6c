#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qpir/classical_pir.hpp"
#include "qpir/protocols.hpp"

using namespace qpir;

namespace {

ClassicalRecordSet sample_records() {
  ClassicalRecordSet records;
  records.record_bits = 4;
  records.records = {{1, 0, 1, 1}, {0, 1, 1, 0}, {1, 1, 0, 0}};
  return records;
}

}  // namespace

TEST_CASE("query indexing round-trips and stays 1-based") {
  for (std::uint64_t i = 0; i < 16; ++i) {
    const SubsetQuery q = query_from_index(4, i);
    CHECK(query_index(q) == i);
  }
  const SubsetQuery q = query_from_index(3, 0b101);
  CHECK(q.at(1));
  CHECK_FALSE(q.at(2));
  CHECK(q.at(3));
  CHECK_THROWS_AS(q.at(0), std::out_of_range);
  CHECK_THROWS_AS(q.at(4), std::out_of_range);
  CHECK(q.to_string().size() == 3);
}

TEST_CASE("query algebra: xor, complement, negation") {
  const SubsetQuery q = query_from_index(4, 0b0110);
  const SubsetQuery c = complement_query(q, 2);
  CHECK(query_index(c) == 0b0100);
  CHECK(query_index(xor_queries(q, c)) == 0b0010);  // e_2
  CHECK(query_index(negate_query(q)) == 0b1001);
  CHECK(xor_queries(q, q) == query_from_index(4, 0));
}

TEST_CASE("xor_answer folds the selected records") {
  const ClassicalRecordSet records = sample_records();
  const SubsetQuery all = query_from_index(3, 0b111);
  const std::vector<std::uint8_t> expected{0, 0, 0, 1};
  CHECK(xor_answer(records, all) == expected);
  const SubsetQuery none = query_from_index(3, 0);
  CHECK(xor_answer(records, none) == std::vector<std::uint8_t>(4, 0));
  const SubsetQuery just2 = query_from_index(3, 0b010);
  CHECK(xor_answer(records, just2) == records.records[1]);
}

TEST_CASE("trivial retrieval downloads everything and sends nothing") {
  const ClassicalRecordSet records = sample_records();
  RandomStream rng(1);
  for (int k = 1; k <= 3; ++k) {
    const CpirResult r = pir_retrieve(CpirScheme::kTrivial, records, k, rng);
    CHECK(r.record == records.records[k - 1]);
    CHECK(r.bits_up == 0);
    CHECK(r.bits_down == 3 * 4);
    REQUIRE(r.legs.size() == 1);
    CHECK_FALSE(r.legs[0].uplink);
  }
}

TEST_CASE("two-server xor retrieval recovers every record for every seed") {
  const ClassicalRecordSet records = sample_records();
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    RandomStream rng(seed);
    for (int k = 1; k <= 3; ++k) {
      const CpirResult r =
          pir_retrieve(CpirScheme::kTwoServerXor, records, k, rng);
      CHECK(r.record == records.records[k - 1]);
      CHECK(r.bits_up == 2 * 3);
      CHECK(r.bits_down == 2 * 4);
      REQUIRE(r.legs.size() == 4);
      CHECK(r.legs[0].uplink);
      CHECK(r.legs[1].uplink);
      CHECK_FALSE(r.legs[2].uplink);
      CHECK_FALSE(r.legs[3].uplink);
    }
  }
}

TEST_CASE("sampled query bits look uniform per position") {
  RandomStream rng(17);
  const int n = 4000;
  std::vector<int> ones(3, 0);
  for (int i = 0; i < n; ++i) {
    const SubsetQuery q = random_query(3, rng);
    for (int l = 1; l <= 3; ++l) ones[l - 1] += q.at(l) ? 1 : 0;
  }
  for (int l = 0; l < 3; ++l) {
    const double freq = static_cast<double>(ones[l]) / n;
    CHECK(freq > 0.45);
    CHECK(freq < 0.55);
  }
}

TEST_CASE("big-endian encoding round-trips at any width") {
  for (int width = 1; width <= 8; ++width) {
    for (std::uint64_t value = 0; value < (1ULL << width); value += 3) {
      const auto bits = encode_be(value, width);
      REQUIRE(static_cast<int>(bits.size()) == width);
      CHECK(decode_be(bits, 0, width) == value);
    }
  }
  const auto bits = encode_be(0b101, 3);
  CHECK(bits == std::vector<std::uint8_t>{1, 0, 1});
}

TEST_CASE("bell records pack (a, b) at the shared width") {
  CHECK(bell_record_width({2, 2}) == 1);
  CHECK(bell_record_width({2, 3, 4}) == 2);
  CHECK(bell_record_width({5}) == 3);

  const std::vector<int> dims{2, 3};
  const std::vector<BellOutcome> outcomes{{1, 0, 2}, {2, 1, 3}};
  const ClassicalRecordSet records = encode_bell_records(outcomes, dims);
  CHECK(records.record_bits == 4);  // width 2 for a plus width 2 for b
  CHECK(records.records[0] == std::vector<std::uint8_t>{0, 1, 0, 0});
  CHECK(records.records[1] == std::vector<std::uint8_t>{1, 0, 0, 1});
}
