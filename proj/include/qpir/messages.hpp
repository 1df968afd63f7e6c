#pragma once

#include <string>
#include <vector>

#include "qpir/rng.hpp"
#include "qpir/types.hpp"

namespace qpir {

enum class MessageKind { kPureStates, kUnitaries, kDensityMatrices };

std::string to_string(MessageKind kind);

// Ordered list of F messages. Pure states are stored as d x 1 columns,
// unitaries and density matrices as d x d. Dimensions may vary per message
// only for pure states and density matrices (the teleportation protocol);
// the unitary protocols require one common dimension.
class MessageSet {
 public:
  MessageSet(MessageKind kind, std::vector<int> dims,
             std::vector<CMatrix> payload);

  MessageKind kind() const { return kind_; }
  int f() const { return static_cast<int>(payload_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<CMatrix>& payload() const { return payload_; }
  const CMatrix& message(int k) const;  // 1-based

  bool common_dim() const;
  int d() const;  // throws unless all dimensions agree

  // Throws (naming the offending pair) unless every pair of unitaries
  // commutes within the unitarity tolerance.
  void require_commuting() const;

 private:
  MessageKind kind_;
  std::vector<int> dims_;
  std::vector<CMatrix> payload_;
};

MessageSet random_pure_messages(int f, int d, RandomStream& rng);
MessageSet random_density_messages(int f, int d, RandomStream& rng);

// F commuting unitaries: random powers-and-phases family D_l in a shared
// random eigenbasis V, U_l = V D_l V+.
MessageSet random_commuting_unitaries(int f, int d, RandomStream& rng);

}  // namespace qpir
