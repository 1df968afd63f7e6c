#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpir/rng.hpp"

namespace qpir {

// Subset query: one bit per record position, q_l = 1 meaning position l is in
// the requested subset. Positions are 1-based in every public signature.
struct SubsetQuery {
  std::vector<std::uint8_t> bits;

  int f() const { return static_cast<int>(bits.size()); }
  bool at(int l) const;  // 1-based
  std::string to_string() const;
  bool operator==(const SubsetQuery& other) const = default;
};

SubsetQuery query_from_index(int f, std::uint64_t index);  // bit l = index >> (l-1)
std::uint64_t query_index(const SubsetQuery& q);
SubsetQuery random_query(int f, RandomStream& rng);
SubsetQuery xor_queries(const SubsetQuery& a, const SubsetQuery& b);

// q with position k toggled: the second server's query q' = q + e_k.
SubsetQuery complement_query(const SubsetQuery& q, int k);

// Bitwise complement q + (1, ..., 1).
SubsetQuery negate_query(const SubsetQuery& q);

// Fixed-length classical records, one per position.
struct ClassicalRecordSet {
  int record_bits = 0;
  std::vector<std::vector<std::uint8_t>> records;

  int f() const { return static_cast<int>(records.size()); }
};

// XOR of the records selected by q; the all-zero record when q is empty.
std::vector<std::uint8_t> xor_answer(const ClassicalRecordSet& records,
                                     const SubsetQuery& q);

enum class CpirScheme { kTrivial, kTwoServerXor };

std::string to_string(CpirScheme scheme);

struct CpirResult {
  std::vector<std::uint8_t> record;
  std::int64_t bits_up = 0;
  std::int64_t bits_down = 0;
  // Per-message classical traffic for the transcript, in send order:
  // (party, to_server, bit count).
  struct Leg {
    std::string party;
    bool uplink;
    std::int64_t bits;
  };
  std::vector<Leg> legs;
};

// Retrieves record k (1-based).
//   trivial:        no query; every record is downloaded (F * L bits down).
//   two-server-xor: random q to one server, q + e_k to the other; each
//                   answers the XOR of its subset (2F bits up, 2L bits down).
CpirResult pir_retrieve(CpirScheme scheme, const ClassicalRecordSet& records,
                        int k, RandomStream& rng);

// Big-endian fixed-width encoding helpers for packing measurement outcomes
// into records.
std::vector<std::uint8_t> encode_be(std::uint64_t value, int width);
std::uint64_t decode_be(const std::vector<std::uint8_t>& bits, int offset,
                        int width);

}  // namespace qpir
