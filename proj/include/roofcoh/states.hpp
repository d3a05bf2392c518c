#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "roofcoh/shape.hpp"

namespace roofcoh {

// Validation and numerical thresholds shared across the library.
inline constexpr double kNormTol = 1e-12;        // pure-state norm
inline constexpr double kHermTol = 1e-12;        // entrywise |M - M^dag|
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;         // most negative admissible eigenvalue
inline constexpr double kRankRelTol = 1e-12;     // numerical rank: lambda >= tol * trace
inline constexpr double kEntropyFloor = 1e-15;   // eigenvalues below this contribute 0
inline constexpr double kZeroWeightTol = 1e-14;  // ensemble branches below this are dropped

using Complex = std::complex<double>;

/// Nonnegative entries summing to 1. Entries within -1e-12 of zero are
/// clamped on construction; anything worse is rejected.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(Eigen::VectorXd probs) : probs_(std::move(probs)) {
    if (probs_.size() == 0) {
      throw std::invalid_argument("ProbabilityVector: empty");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
      if (probs_(i) < -kNormTol) {
        throw std::invalid_argument("ProbabilityVector: negative entry");
      }
      if (probs_(i) < 0.0) probs_(i) = 0.0;
      sum += probs_(i);
    }
    if (std::abs(sum - 1.0) > 1e-11) {
      throw std::invalid_argument("ProbabilityVector: entries do not sum to 1");
    }
  }

  const Eigen::VectorXd& probs() const { return probs_; }
  Eigen::Index size() const { return probs_.size(); }
  double operator()(Eigen::Index i) const { return probs_(i); }

 private:
  Eigen::VectorXd probs_;
};

/// Normalized complex amplitude vector over the computational basis of a
/// multipartite system. Immutable after validated construction.
class PureState {
 public:
  PureState(Eigen::VectorXcd amplitudes, SubsystemShape shape)
      : amps_(std::move(amplitudes)), shape_(std::move(shape)) {
    if (amps_.size() != shape_.total_dim()) {
      throw std::invalid_argument("PureState: amplitude count does not match shape");
    }
    const double norm = amps_.norm();
    if (std::abs(norm - 1.0) > kNormTol) {
      throw std::invalid_argument("PureState: amplitudes must have unit norm");
    }
  }

  /// Rescales to unit norm; rejects (near-)zero vectors.
  static PureState normalized(Eigen::VectorXcd amplitudes, SubsystemShape shape) {
    const double norm = amplitudes.norm();
    if (norm < 1e-150) {
      throw std::invalid_argument("PureState: cannot normalize a zero vector");
    }
    return PureState(amplitudes / norm, std::move(shape));
  }

  static PureState basis(const SubsystemShape& shape, int flat) {
    if (flat < 0 || flat >= shape.total_dim()) {
      throw std::invalid_argument("PureState: basis index out of range");
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(shape.total_dim());
    amps(flat) = 1.0;
    return PureState(std::move(amps), shape);
  }

  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  const SubsystemShape& shape() const { return shape_; }
  int dim() const { return shape_.total_dim(); }

 private:
  Eigen::VectorXcd amps_;
  SubsystemShape shape_;
};

/// Hermitian, positive-semidefinite, unit-trace matrix. The stored matrix is
/// the exact Hermitian part of the input; eigenvalues in [-1e-10, 0) are
/// clipped to zero on construction (with a trace renormalization), anything
/// more negative is rejected.
class DensityMatrix {
 public:
  DensityMatrix(Eigen::MatrixXcd matrix, SubsystemShape shape)
      : matrix_(std::move(matrix)), shape_(std::move(shape)) {
    const int n = shape_.total_dim();
    if (matrix_.rows() != n || matrix_.cols() != n) {
      throw std::invalid_argument("DensityMatrix: size does not match shape");
    }
    const double herm_err = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > kHermTol) {
      throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
    }
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
    const double trace = matrix_.trace().real();
    if (std::abs(trace - 1.0) > kTraceTol) {
      throw std::invalid_argument("DensityMatrix: trace must be 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -kPsdTol) {
      throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
    }
    if (min_eig < 0.0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> full(matrix_);
      const Eigen::VectorXd clipped = full.eigenvalues().cwiseMax(0.0);
      matrix_ = full.eigenvectors() * clipped.asDiagonal() * full.eigenvectors().adjoint();
      matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
      matrix_ /= matrix_.trace().real();
    }
  }

  static DensityMatrix from_pure(const PureState& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint(), psi.shape());
  }

  static DensityMatrix diagonal(const ProbabilityVector& probs, SubsystemShape shape) {
    if (probs.size() != shape.total_dim()) {
      throw std::invalid_argument("DensityMatrix: probability count does not match shape");
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(probs.size(), probs.size());
    for (Eigen::Index i = 0; i < probs.size(); ++i) m(i, i) = probs(i);
    return DensityMatrix(std::move(m), std::move(shape));
  }

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const SubsystemShape& shape() const { return shape_; }
  int dim() const { return shape_.total_dim(); }

 private:
  Eigen::MatrixXcd matrix_;
  SubsystemShape shape_;
};

inline PureState tensor_product(const PureState& a, const PureState& b) {
  const Eigen::Index da = a.amplitudes().size();
  const Eigen::Index db = b.amplitudes().size();
  Eigen::VectorXcd out(da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < db; ++j) {
      out(i * db + j) = a.amplitudes()(i) * b.amplitudes()(j);
    }
  }
  return PureState(std::move(out), a.shape().concatenated_with(b.shape()));
}

inline DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  const Eigen::Index da = a.matrix().rows();
  const Eigen::Index db = b.matrix().rows();
  Eigen::MatrixXcd out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index k = 0; k < da; ++k) {
      out.block(i * db, k * db, db, db) = a.matrix()(i, k) * b.matrix();
    }
  }
  return DensityMatrix(std::move(out), a.shape().concatenated_with(b.shape()));
}

/// Traces out all parties not listed in `keep`. `keep` must be a nonempty
/// proper subset of the parties (duplicates rejected); the result keeps the
/// original party order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  const SubsystemShape& shape = rho.shape();
  const int n = shape.num_parties();
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw std::invalid_argument("partial_trace: duplicate party in keep set");
  }
  for (int party : keep) {
    if (party < 0 || party >= n) {
      throw std::invalid_argument("partial_trace: party index out of range");
    }
  }
  if (keep.empty() || static_cast<int>(keep.size()) == n) {
    throw std::invalid_argument("partial_trace: keep must be a nonempty proper subset");
  }

  std::vector<int> strides(static_cast<std::size_t>(n), 1);
  for (int j = n - 2; j >= 0; --j) {
    strides[static_cast<std::size_t>(j)] =
        strides[static_cast<std::size_t>(j + 1)] * shape.dim(j + 1);
  }
  std::vector<int> keep_dims, keep_strides, tr_dims, tr_strides;
  for (int j = 0, k = 0; j < n; ++j) {
    const bool kept = k < static_cast<int>(keep.size()) && keep[static_cast<std::size_t>(k)] == j;
    if (kept) {
      keep_dims.push_back(shape.dim(j));
      keep_strides.push_back(strides[static_cast<std::size_t>(j)]);
      ++k;
    } else {
      tr_dims.push_back(shape.dim(j));
      tr_strides.push_back(strides[static_cast<std::size_t>(j)]);
    }
  }
  auto offsets = [](const std::vector<int>& dims, const std::vector<int>& strs) {
    int total = 1;
    for (int d : dims) total *= d;
    std::vector<int> offs(static_cast<std::size_t>(total), 0);
    for (int flat = 0; flat < total; ++flat) {
      int rem = flat, off = 0;
      for (std::size_t j = dims.size(); j-- > 0;) {
        off += (rem % dims[j]) * strs[j];
        rem /= dims[j];
      }
      offs[static_cast<std::size_t>(flat)] = off;
    }
    return offs;
  };
  const std::vector<int> keep_offs = offsets(keep_dims, keep_strides);
  const std::vector<int> tr_offs = offsets(tr_dims, tr_strides);

  const Eigen::Index dk = static_cast<Eigen::Index>(keep_offs.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (int t : tr_offs) {
        acc += rho.matrix()(keep_offs[static_cast<std::size_t>(a)] + t,
                            keep_offs[static_cast<std::size_t>(b)] + t);
      }
      out(a, b) = acc;
    }
  }
  return DensityMatrix(std::move(out), shape.restricted_to(keep));
}

/// Zeroes all off-diagonal entries in the reference basis.
inline DensityMatrix dephase(const DensityMatrix& rho) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.matrix().rows(), rho.matrix().cols());
  out.diagonal() = rho.matrix().diagonal().real().cast<Complex>();
  return DensityMatrix(std::move(out), rho.shape());
}

/// Von Neumann entropy in bits. Eigenvalues below 1e-15 contribute 0.
inline double vn_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda > kEntropyFloor) entropy -= lambda * std::log2(lambda);
  }
  return entropy;
}

/// Squared amplitude moduli. Renormalized by their sum to absorb the
/// rounding slack the unit-norm invariant allows.
inline ProbabilityVector diag_probs(const PureState& psi) {
  Eigen::VectorXd probs = psi.amplitudes().cwiseAbs2();
  probs /= probs.sum();
  return ProbabilityVector(std::move(probs));
}

struct EigPsd {
  Eigen::VectorXd values;    // descending, clipped to >= 0
  Eigen::MatrixXcd vectors;  // orthonormal columns matching values
  int rank = 0;              // values >= kRankRelTol * trace
};

/// Eigendecomposition tailored to density matrices: descending clipped
/// eigenvalues and a deterministic phase convention (the largest-modulus
/// component of each eigenvector is made real positive), so repeated runs
/// and degenerate spectra produce identical output.
inline EigPsd eig_psd(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
  const Eigen::Index d = rho.matrix().rows();
  EigPsd out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out.values(i) = std::max(0.0, solver.eigenvalues()(d - 1 - i));
    out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    Eigen::Index lead = 0;
    out.vectors.col(i).cwiseAbs().maxCoeff(&lead);
    const Complex pivot = out.vectors.col(i)(lead);
    if (std::abs(pivot) > 0.0) {
      out.vectors.col(i) *= std::conj(pivot) / std::abs(pivot);
    }
  }
  const double threshold = kRankRelTol * out.values.sum();
  out.rank = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (out.values(i) >= threshold && out.values(i) > 0.0) ++out.rank;
  }
  out.rank = std::max(out.rank, 1);
  return out;
}

}  // namespace roofcoh
