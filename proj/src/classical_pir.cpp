#include "qpir/classical_pir.hpp"

#include <stdexcept>

namespace qpir {

bool SubsetQuery::at(int l) const {
  if (l < 1 || l > f()) {
    throw std::out_of_range("SubsetQuery: position " + std::to_string(l) +
                            " outside [1, " + std::to_string(f()) + "]");
  }
  return bits[l - 1] != 0;
}

std::string SubsetQuery::to_string() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

SubsetQuery query_from_index(int f, std::uint64_t index) {
  SubsetQuery q;
  q.bits.resize(f);
  for (int l = 0; l < f; ++l) q.bits[l] = (index >> l) & 1ULL;
  return q;
}

std::uint64_t query_index(const SubsetQuery& q) {
  std::uint64_t idx = 0;
  for (int l = 0; l < q.f(); ++l) {
    if (q.bits[l]) idx |= (1ULL << l);
  }
  return idx;
}

SubsetQuery random_query(int f, RandomStream& rng) {
  SubsetQuery q;
  q.bits.resize(f);
  for (int l = 0; l < f; ++l) q.bits[l] = rng.coin() ? 1 : 0;
  return q;
}

SubsetQuery xor_queries(const SubsetQuery& a, const SubsetQuery& b) {
  if (a.f() != b.f()) {
    throw std::invalid_argument("xor_queries: lengths differ");
  }
  SubsetQuery out = a;
  for (int l = 0; l < a.f(); ++l) out.bits[l] ^= b.bits[l];
  return out;
}

SubsetQuery complement_query(const SubsetQuery& q, int k) {
  if (k < 1 || k > q.f()) {
    throw std::out_of_range("complement_query: index " + std::to_string(k) +
                            " outside [1, " + std::to_string(q.f()) + "]");
  }
  SubsetQuery out = q;
  out.bits[k - 1] ^= 1;
  return out;
}

SubsetQuery negate_query(const SubsetQuery& q) {
  SubsetQuery out = q;
  for (auto& b : out.bits) b ^= 1;
  return out;
}

std::vector<std::uint8_t> xor_answer(const ClassicalRecordSet& records,
                                     const SubsetQuery& q) {
  if (q.f() != records.f()) {
    throw std::invalid_argument("xor_answer: query length " +
                                std::to_string(q.f()) + " vs " +
                                std::to_string(records.f()) + " records");
  }
  std::vector<std::uint8_t> out(records.record_bits, 0);
  for (int l = 1; l <= records.f(); ++l) {
    if (!q.at(l)) continue;
    const auto& r = records.records[l - 1];
    if (static_cast<int>(r.size()) != records.record_bits) {
      throw std::invalid_argument("xor_answer: record " + std::to_string(l) +
                                  " has wrong length");
    }
    for (int i = 0; i < records.record_bits; ++i) out[i] ^= r[i];
  }
  return out;
}

std::string to_string(CpirScheme scheme) {
  return scheme == CpirScheme::kTrivial ? "trivial" : "xor2";
}

CpirResult pir_retrieve(CpirScheme scheme, const ClassicalRecordSet& records,
                        int k, RandomStream& rng) {
  const int f = records.f();
  if (k < 1 || k > f) {
    throw std::out_of_range("pir_retrieve: index " + std::to_string(k) +
                            " outside [1, " + std::to_string(f) + "]");
  }
  const int len = records.record_bits;
  CpirResult result;
  if (scheme == CpirScheme::kTrivial) {
    result.record = records.records[k - 1];
    result.bits_down = static_cast<std::int64_t>(f) * len;
    result.legs.push_back({"server1", false, result.bits_down});
    return result;
  }
  const SubsetQuery q = random_query(f, rng);
  const SubsetQuery qp = complement_query(q, k);
  const auto a1 = xor_answer(records, q);
  const auto a2 = xor_answer(records, qp);
  result.record.resize(len);
  for (int i = 0; i < len; ++i) result.record[i] = a1[i] ^ a2[i];
  result.bits_up = 2 * f;
  result.bits_down = 2 * len;
  result.legs.push_back({"server1", true, f});
  result.legs.push_back({"server2", true, f});
  result.legs.push_back({"server1", false, len});
  result.legs.push_back({"server2", false, len});
  return result;
}

std::vector<std::uint8_t> encode_be(std::uint64_t value, int width) {
  std::vector<std::uint8_t> bits(width);
  for (int i = 0; i < width; ++i) {
    bits[i] = (value >> (width - 1 - i)) & 1ULL;
  }
  return bits;
}

std::uint64_t decode_be(const std::vector<std::uint8_t>& bits, int offset,
                        int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v = (v << 1) | (bits[offset + i] & 1);
  }
  return v;
}

}  // namespace qpir
