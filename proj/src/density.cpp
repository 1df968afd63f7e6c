#include "qpir/density.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

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

}  // namespace

DensityMatrix::DensityMatrix(std::vector<int> dims,
                             std::vector<std::string> labels, CMatrix matrix)
    : dims_(std::move(dims)), labels_(std::move(labels)),
      mat_(std::move(matrix)) {
  validate();
}

void DensityMatrix::validate() const {
  if (dims_.size() != labels_.size()) {
    throw std::invalid_argument("DensityMatrix: dims/labels size mismatch");
  }
  Index expected = 1;
  for (int d : dims_) {
    if (d < 2) {
      throw std::invalid_argument("DensityMatrix: qudit dimension " +
                                  std::to_string(d) + " < 2");
    }
    expected *= d;
  }
  if (mat_.rows() != expected || mat_.cols() != expected) {
    throw std::invalid_argument("DensityMatrix: matrix is " +
                                std::to_string(mat_.rows()) + "x" +
                                std::to_string(mat_.cols()) +
                                ", dimensions require " +
                                std::to_string(expected));
  }
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument("DensityMatrix: duplicate label '" + l + "'");
    }
  }
  if (!mat_.allFinite()) {
    throw std::invalid_argument("DensityMatrix: non-finite entry");
  }
  if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > tol::kUnitary) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > tol::kNorm) {
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) +
                                " is not 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(mat_, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol::kNorm) {
    throw std::invalid_argument(
        "DensityMatrix: not positive semidefinite (eigenvalue " +
        std::to_string(min_eig) + ")");
  }
}

DensityMatrix DensityMatrix::from_pure(const QuantumRegister& reg) {
  const CVector& v = reg.amplitudes();
  return DensityMatrix(reg.dims(), reg.labels(), v * v.adjoint());
}

int DensityMatrix::axis_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw std::invalid_argument("unknown qudit label '" + label + "'");
  }
  return static_cast<int>(it - labels_.begin());
}

std::vector<double> density_spectrum(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix(),
                                            Eigen::EigenvaluesOnly);
  std::vector<double> spectrum(es.eigenvalues().size());
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    spectrum[i] = std::clamp(es.eigenvalues()(i), 0.0, 1.0);
  }
  return spectrum;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double h = 0.0;
  for (double p : density_spectrum(rho)) {
    if (p > tol::kEigZero) h -= p * std::log2(p);
  }
  return h;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("trace_distance: dimensions differ (" +
                                std::to_string(rho.dim()) + " vs " +
                                std::to_string(sigma.dim()) + ")");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix() - sigma.matrix(),
                                            Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep) {
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace: nothing kept");
  }
  std::vector<int> keep_axes;
  std::set<int> seen;
  for (const auto& l : keep) {
    const int a = rho.axis_of(l);
    if (!seen.insert(a).second) {
      throw std::invalid_argument("partial_trace: duplicate label '" + l + "'");
    }
    keep_axes.push_back(a);
  }
  std::vector<int> rest;
  for (int i = 0; i < static_cast<int>(rho.dims().size()); ++i) {
    if (!seen.count(i)) rest.push_back(i);
  }
  const auto strides = compute_strides(rho.dims());
  const auto off_k = axis_offsets(rho.dims(), strides, keep_axes);
  const auto off_u = axis_offsets(rho.dims(), strides, rest);

  const Index n = static_cast<Index>(off_k.size());
  CMatrix out = CMatrix::Zero(n, n);
  for (const Index base : off_u) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        out(i, j) += rho.matrix()(base + off_k[i], base + off_k[j]);
      }
    }
  }
  std::vector<int> out_dims;
  std::vector<std::string> out_labels;
  for (int a : keep_axes) {
    out_dims.push_back(rho.dims()[a]);
    out_labels.push_back(rho.labels()[a]);
  }
  return DensityMatrix(std::move(out_dims), std::move(out_labels),
                       std::move(out));
}

QuantumRegister purify(const DensityMatrix& rho, const std::string& ref_label,
                       const std::string& sys_label) {
  if (rho.dims().size() != 1) {
    throw std::invalid_argument("purify: expected a single-qudit density");
  }
  const int d = rho.dims()[0];
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  CVector amps = CVector::Zero(static_cast<Index>(d) * d);
  for (int i = 0; i < d; ++i) {
    const double p = std::clamp(es.eigenvalues()(i), 0.0, 1.0);
    if (p <= tol::kEigZero) continue;
    const double sp = std::sqrt(p);
    for (int s = 0; s < d; ++s) {
      amps(static_cast<Index>(i) * d + s) = sp * es.eigenvectors()(s, i);
    }
  }
  amps /= amps.norm();
  return QuantumRegister({d, d}, {ref_label, sys_label}, std::move(amps));
}

double state_overlap(const DensityMatrix& rho, const QuantumRegister& psi) {
  if (rho.dim() != psi.total_dim()) {
    throw std::invalid_argument("state_overlap: dimensions differ");
  }
  const CVector& v = psi.amplitudes();
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

}  // namespace qpir
