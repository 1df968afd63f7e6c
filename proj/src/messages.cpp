#include "qpir/messages.hpp"

#include <cmath>
#include <stdexcept>

#include "qpir/linalg.hpp"
#include "qpir/pauli.hpp"

namespace qpir {

std::string to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::kPureStates: return "pure-states";
    case MessageKind::kUnitaries: return "unitaries";
    case MessageKind::kDensityMatrices: return "density-matrices";
  }
  return "?";
}

MessageSet::MessageSet(MessageKind kind, std::vector<int> dims,
                       std::vector<CMatrix> payload)
    : kind_(kind), dims_(std::move(dims)), payload_(std::move(payload)) {
  if (payload_.empty()) {
    throw std::invalid_argument("MessageSet: no messages");
  }
  if (dims_.size() != payload_.size()) {
    throw std::invalid_argument("MessageSet: dims/payload size mismatch");
  }
  for (std::size_t l = 0; l < payload_.size(); ++l) {
    const int d = dims_[l];
    const CMatrix& m = payload_[l];
    const std::string where = "message " + std::to_string(l + 1);
    if (d < 2) {
      throw std::invalid_argument("MessageSet: " + where + " has dimension " +
                                  std::to_string(d));
    }
    if (!m.allFinite()) {
      throw std::invalid_argument("MessageSet: " + where +
                                  " has a non-finite entry");
    }
    switch (kind_) {
      case MessageKind::kPureStates: {
        if (m.rows() != d || m.cols() != 1) {
          throw std::invalid_argument("MessageSet: " + where +
                                      " is not a d x 1 state vector");
        }
        if (std::abs(m.norm() - 1.0) > tol::kNorm) {
          throw std::invalid_argument("MessageSet: " + where +
                                      " is not normalized (norm " +
                                      std::to_string(m.norm()) + ")");
        }
        break;
      }
      case MessageKind::kUnitaries: {
        if (m.rows() != d || m.cols() != d) {
          throw std::invalid_argument("MessageSet: " + where +
                                      " is not a d x d matrix");
        }
        if (!is_unitary(m)) {
          throw std::invalid_argument("MessageSet: " + where +
                                      " is not unitary");
        }
        break;
      }
      case MessageKind::kDensityMatrices: {
        if (m.rows() != d || m.cols() != d) {
          throw std::invalid_argument("MessageSet: " + where +
                                      " is not a d x d matrix");
        }
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol::kUnitary) {
          throw std::invalid_argument("MessageSet: " + where +
                                      " is not Hermitian");
        }
        if (std::abs(m.trace().real() - 1.0) > tol::kNorm) {
          throw std::invalid_argument("MessageSet: " + where +
                                      " does not have unit trace");
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol::kNorm) {
          throw std::invalid_argument("MessageSet: " + where +
                                      " is not positive semidefinite");
        }
        break;
      }
    }
  }
}

const CMatrix& MessageSet::message(int k) const {
  if (k < 1 || k > f()) {
    throw std::out_of_range("MessageSet: index " + std::to_string(k) +
                            " outside [1, " + std::to_string(f()) + "]");
  }
  return payload_[k - 1];
}

bool MessageSet::common_dim() const {
  for (int d : dims_) {
    if (d != dims_[0]) return false;
  }
  return true;
}

int MessageSet::d() const {
  if (!common_dim()) {
    throw std::invalid_argument(
        "MessageSet: messages do not share one dimension");
  }
  return dims_[0];
}

void MessageSet::require_commuting() const {
  if (kind_ != MessageKind::kUnitaries) {
    throw std::invalid_argument("MessageSet: commutativity applies to unitaries");
  }
  for (int i = 0; i < f(); ++i) {
    for (int j = i + 1; j < f(); ++j) {
      const double c = commutator_norm(payload_[i], payload_[j]);
      if (c > tol::kUnitary) {
        throw std::invalid_argument(
            "MessageSet: messages " + std::to_string(i + 1) + " and " +
            std::to_string(j + 1) + " do not commute (|[U_i, U_j]| = " +
            std::to_string(c) + ")");
      }
    }
  }
}

MessageSet random_pure_messages(int f, int d, RandomStream& rng) {
  std::vector<CMatrix> payload;
  payload.reserve(f);
  for (int l = 0; l < f; ++l) payload.push_back(random_state(d, rng));
  return MessageSet(MessageKind::kPureStates, std::vector<int>(f, d),
                    std::move(payload));
}

MessageSet random_density_messages(int f, int d, RandomStream& rng) {
  std::vector<CMatrix> payload;
  payload.reserve(f);
  for (int l = 0; l < f; ++l) {
    payload.push_back(random_density(d, 1 + rng.uniform_int(d), rng));
  }
  return MessageSet(MessageKind::kDensityMatrices, std::vector<int>(f, d),
                    std::move(payload));
}

MessageSet random_commuting_unitaries(int f, int d, RandomStream& rng) {
  const CMatrix v = random_unitary(d, rng);
  std::vector<CMatrix> payload;
  payload.reserve(f);
  for (int l = 0; l < f; ++l) {
    CMatrix diag = CMatrix::Zero(d, d);
    for (int s = 0; s < d; ++s) {
      diag(s, s) = std::polar(1.0, 2.0 * kPi * rng.uniform());
    }
    payload.push_back(v * diag * v.adjoint());
  }
  return MessageSet(MessageKind::kUnitaries, std::vector<int>(f, d),
                    std::move(payload));
}

}  // namespace qpir
