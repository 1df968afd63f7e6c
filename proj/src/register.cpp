#include "qpir/register.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "qpir/density.hpp"
#include "qpir/linalg.hpp"
#include "qpir/pauli.hpp"

namespace qpir {

namespace {

std::vector<Index> compute_strides(const std::vector<int>& dims) {
  std::vector<Index> strides(dims.size());
  Index acc = 1;
  for (std::size_t i = dims.size(); i-- > 0;) {
    strides[i] = acc;
    acc *= dims[i];
  }
  return strides;
}

// Amplitude offsets of every digit combination of the listed axes, enumerated
// row-major in the listed order (last axis least significant).
std::vector<Index> axis_offsets(const std::vector<int>& dims,
                                const std::vector<Index>& strides,
                                const std::vector<int>& axes) {
  Index count = 1;
  for (int a : axes) count *= dims[a];
  std::vector<Index> offsets(count);
  for (Index t = 0; t < count; ++t) {
    Index rem = t;
    Index off = 0;
    for (std::size_t j = axes.size(); j-- > 0;) {
      const int a = axes[j];
      off += (rem % dims[a]) * strides[a];
      rem /= dims[a];
    }
    offsets[t] = off;
  }
  return offsets;
}

std::vector<int> complement_axes(int count, const std::vector<int>& axes) {
  std::vector<bool> used(count, false);
  for (int a : axes) used[a] = true;
  std::vector<int> rest;
  rest.reserve(count - axes.size());
  for (int i = 0; i < count; ++i) {
    if (!used[i]) rest.push_back(i);
  }
  return rest;
}

std::vector<int> resolve_axes(const QuantumRegister& reg,
                              const std::vector<std::string>& labels,
                              const std::string& what) {
  std::vector<int> axes;
  axes.reserve(labels.size());
  std::set<int> seen;
  for (const auto& l : labels) {
    const int a = reg.axis_of(l);
    if (!seen.insert(a).second) {
      throw std::invalid_argument(what + ": duplicate target label '" + l + "'");
    }
    axes.push_back(a);
  }
  return axes;
}

std::vector<int> select(const std::vector<int>& v, const std::vector<int>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(v[i]);
  return out;
}

std::vector<std::string> select(const std::vector<std::string>& v,
                                const std::vector<int>& idx) {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(v[i]);
  return out;
}

}  // namespace

QuantumRegister::QuantumRegister(std::vector<int> dims,
                                 std::vector<std::string> labels,
                                 CVector amplitudes)
    : dims_(std::move(dims)), labels_(std::move(labels)),
      amps_(std::move(amplitudes)) {
  validate();
}

void QuantumRegister::validate() const {
  if (dims_.size() != labels_.size()) {
    throw std::invalid_argument("QuantumRegister: " +
                                std::to_string(dims_.size()) + " dims vs " +
                                std::to_string(labels_.size()) + " labels");
  }
  Index expected = 1;
  for (int d : dims_) {
    if (d < 2) {
      throw std::invalid_argument("QuantumRegister: qudit dimension " +
                                  std::to_string(d) + " < 2");
    }
    expected *= d;
  }
  if (amps_.size() != expected) {
    throw std::invalid_argument(
        "QuantumRegister: amplitude vector has " + std::to_string(amps_.size()) +
        " entries, dimensions require " + std::to_string(expected));
  }
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument("QuantumRegister: duplicate label '" + l + "'");
    }
  }
  if (!amps_.allFinite()) {
    throw std::invalid_argument("QuantumRegister: non-finite amplitude");
  }
  const double n = amps_.norm();
  if (std::abs(n - 1.0) > tol::kNorm) {
    throw std::invalid_argument("QuantumRegister: state norm " +
                                std::to_string(n) + " is not 1");
  }
}

QuantumRegister QuantumRegister::basis_state(
    const std::vector<int>& dims, const std::vector<std::string>& labels,
    const std::vector<int>& digits) {
  if (digits.size() != dims.size()) {
    throw std::invalid_argument("basis_state: digit count mismatch");
  }
  Index total = 1;
  for (int d : dims) total *= d;
  Index idx = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= dims[i]) {
      throw std::invalid_argument("basis_state: digit out of range");
    }
    idx = idx * dims[i] + digits[i];
  }
  CVector amps = CVector::Zero(total);
  amps(idx) = Complex(1, 0);
  return QuantumRegister(dims, labels, std::move(amps));
}

QuantumRegister QuantumRegister::single(const CVector& amplitudes,
                                        const std::string& label) {
  return QuantumRegister({static_cast<int>(amplitudes.size())}, {label},
                         amplitudes);
}

QuantumRegister QuantumRegister::max_entangled(int d, const std::string& label_a,
                                               const std::string& label_b) {
  if (d < 2) throw std::invalid_argument("max_entangled: dimension must be >= 2");
  CVector amps = max_entangled_vector(d) / std::sqrt(static_cast<double>(d));
  return QuantumRegister({d, d}, {label_a, label_b}, std::move(amps));
}

QuantumRegister QuantumRegister::vectorized(const CMatrix& m,
                                            const std::string& label_a,
                                            const std::string& label_b) {
  const double n = m.norm();
  if (n < 1e-15) {
    throw std::invalid_argument("vectorized: zero matrix has no state");
  }
  return QuantumRegister({static_cast<int>(m.rows()), static_cast<int>(m.cols())},
                         {label_a, label_b}, vectorize(m) / n);
}

bool QuantumRegister::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

int QuantumRegister::axis_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw std::invalid_argument("unknown qudit label '" + label + "'");
  }
  return static_cast<int>(it - labels_.begin());
}

int QuantumRegister::dim_of(const std::string& label) const {
  return dims_[axis_of(label)];
}

QuantumRegister QuantumRegister::renamed(const std::string& from,
                                         const std::string& to) const {
  const int a = axis_of(from);
  if (from != to && has_label(to)) {
    throw std::invalid_argument("renamed: label '" + to + "' already present");
  }
  std::vector<std::string> labels = labels_;
  labels[a] = to;
  return QuantumRegister(dims_, std::move(labels), amps_);
}

CMatrix QuantumRegister::matrix_view(
    const std::vector<std::string>& row_labels) const {
  const auto row_axes = resolve_axes(*this, row_labels, "matrix_view");
  const auto col_axes = complement_axes(qudit_count(), row_axes);
  const auto strides = compute_strides(dims_);
  const auto row_off = axis_offsets(dims_, strides, row_axes);
  const auto col_off = axis_offsets(dims_, strides, col_axes);
  CMatrix m(static_cast<Index>(row_off.size()),
            static_cast<Index>(col_off.size()));
  for (std::size_t i = 0; i < row_off.size(); ++i) {
    for (std::size_t j = 0; j < col_off.size(); ++j) {
      m(i, j) = amps_(row_off[i] + col_off[j]);
    }
  }
  return m;
}

QuantumRegister tensor_product(const QuantumRegister& a,
                               const QuantumRegister& b) {
  for (const auto& l : b.labels()) {
    if (a.has_label(l)) {
      throw std::invalid_argument("tensor_product: label '" + l +
                                  "' present in both registers");
    }
  }
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return QuantumRegister(std::move(dims), std::move(labels),
                         kron(a.amplitudes(), b.amplitudes()));
}

QuantumRegister apply_operator(const QuantumRegister& reg, const CMatrix& op,
                               const std::vector<std::string>& targets) {
  if (targets.empty()) {
    throw std::invalid_argument("apply_operator: no target qudits");
  }
  const auto axes = resolve_axes(reg, targets, "apply_operator");
  Index dim_t = 1;
  for (int a : axes) dim_t *= reg.dims()[a];
  if (op.rows() != dim_t || op.cols() != dim_t) {
    throw std::invalid_argument(
        "apply_operator: operator is " + std::to_string(op.rows()) + "x" +
        std::to_string(op.cols()) + " but targets span dimension " +
        std::to_string(dim_t));
  }
  require_unitary(op, "apply_operator");

  const auto rest = complement_axes(reg.qudit_count(), axes);
  const auto strides = compute_strides(reg.dims());
  const auto off_t = axis_offsets(reg.dims(), strides, axes);
  const auto off_u = axis_offsets(reg.dims(), strides, rest);

  const CVector& in = reg.amplitudes();
  CVector out(in.size());
  CVector scratch(dim_t);
  for (const Index base : off_u) {
    for (Index t = 0; t < dim_t; ++t) scratch(t) = in(base + off_t[t]);
    const CVector transformed = op * scratch;
    for (Index t = 0; t < dim_t; ++t) out(base + off_t[t]) = transformed(t);
  }
  return QuantumRegister(reg.dims(), reg.labels(), std::move(out));
}

std::vector<MeasurementBranch> measure_branches(const QuantumRegister& reg,
                                                const std::string& target) {
  const int axis = reg.axis_of(target);
  const int d = reg.dims()[axis];
  const auto rest = complement_axes(reg.qudit_count(), {axis});
  const auto strides = compute_strides(reg.dims());
  const auto off_u = axis_offsets(reg.dims(), strides, rest);
  const Index stride_t = strides[axis];

  const CVector& in = reg.amplitudes();
  std::vector<MeasurementBranch> branches;
  for (int x = 0; x < d; ++x) {
    CVector post(static_cast<Index>(off_u.size()));
    for (std::size_t u = 0; u < off_u.size(); ++u) {
      post(static_cast<Index>(u)) = in(off_u[u] + x * stride_t);
    }
    const double p = post.squaredNorm();
    if (p < 1e-15) continue;
    branches.push_back(MeasurementBranch{
        x, p,
        QuantumRegister(select(reg.dims(), rest), select(reg.labels(), rest),
                        post / std::sqrt(p))});
  }
  return branches;
}

std::pair<int, QuantumRegister> measure_computational(const QuantumRegister& reg,
                                                      const std::string& target,
                                                      RandomStream& rng) {
  auto branches = measure_branches(reg, target);
  std::vector<double> weights(branches.size());
  for (std::size_t i = 0; i < branches.size(); ++i) {
    weights[i] = branches[i].probability;
  }
  const int pick = rng.sample_discrete(weights);
  return {branches[pick].outcome, std::move(branches[pick].state)};
}

std::vector<BellBranch> bell_branches(const QuantumRegister& reg,
                                      const std::string& first,
                                      const std::string& second) {
  const int axis_f = reg.axis_of(first);
  const int axis_s = reg.axis_of(second);
  if (axis_f == axis_s) {
    throw std::invalid_argument("bell_branches: the two qudits must differ");
  }
  const int d = reg.dims()[axis_f];
  if (reg.dims()[axis_s] != d) {
    throw std::invalid_argument(
        "bell_branches: qudit dimensions differ (" + std::to_string(d) + " vs " +
        std::to_string(reg.dims()[axis_s]) + ")");
  }
  const auto rest = complement_axes(reg.qudit_count(), {axis_f, axis_s});
  const auto strides = compute_strides(reg.dims());
  const auto off_u = axis_offsets(reg.dims(), strides, rest);
  const Index stride_f = strides[axis_f];
  const Index stride_s = strides[axis_s];
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

  const CVector& in = reg.amplitudes();
  std::vector<BellBranch> branches;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      // <<X^a Z^b| contracts the pair: the basis vector places omega^{b t} at
      // (first, second) digits ((t + a) mod d, t).
      CVector post(static_cast<Index>(off_u.size()));
      for (std::size_t u = 0; u < off_u.size(); ++u) {
        Complex acc(0, 0);
        for (int t = 0; t < d; ++t) {
          acc += std::conj(omega_power(d, static_cast<long long>(b) * t)) *
                 in(off_u[u] + ((t + a) % d) * stride_f + t * stride_s);
        }
        post(static_cast<Index>(u)) = acc * inv_sqrt_d;
      }
      const double p = post.squaredNorm();
      if (p < 1e-15) continue;
      branches.push_back(BellBranch{
          BellOutcome{a, b, d}, p,
          QuantumRegister(select(reg.dims(), rest), select(reg.labels(), rest),
                          post / std::sqrt(p))});
    }
  }
  return branches;
}

std::pair<BellOutcome, QuantumRegister> bell_measure(const QuantumRegister& reg,
                                                     const std::string& first,
                                                     const std::string& second,
                                                     RandomStream& rng) {
  auto branches = bell_branches(reg, first, second);
  std::vector<double> weights(branches.size());
  for (std::size_t i = 0; i < branches.size(); ++i) {
    weights[i] = branches[i].probability;
  }
  const int pick = rng.sample_discrete(weights);
  return {branches[pick].outcome, std::move(branches[pick].state)};
}

DensityMatrix partial_trace(const QuantumRegister& reg,
                            const std::vector<std::string>& keep) {
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace: nothing kept");
  }
  const auto keep_axes = resolve_axes(reg, keep, "partial_trace");
  const auto rest = complement_axes(reg.qudit_count(), keep_axes);
  const auto strides = compute_strides(reg.dims());
  const auto off_k = axis_offsets(reg.dims(), strides, keep_axes);
  const auto off_u = axis_offsets(reg.dims(), strides, rest);

  const CVector& in = reg.amplitudes();
  const Index n = static_cast<Index>(off_k.size());
  CMatrix rho = CMatrix::Zero(n, n);
  for (const Index base : off_u) {
    for (Index i = 0; i < n; ++i) {
      const Complex ai = in(base + off_k[i]);
      if (ai == Complex(0, 0)) continue;
      for (Index j = 0; j < n; ++j) {
        rho(i, j) += ai * std::conj(in(base + off_k[j]));
      }
    }
  }
  return DensityMatrix(select(reg.dims(), keep_axes),
                       select(reg.labels(), keep_axes), std::move(rho));
}

Complex inner_product(const QuantumRegister& a, const QuantumRegister& b) {
  if (a.dims() != b.dims()) {
    throw std::invalid_argument("inner_product: dimension lists differ");
  }
  return a.amplitudes().dot(b.amplitudes());
}

double fidelity_up_to_phase(const QuantumRegister& a, const QuantumRegister& b) {
  return std::abs(inner_product(a, b));
}

}  // namespace qpir
