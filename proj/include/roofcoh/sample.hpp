#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "roofcoh/rng.hpp"
#include "roofcoh/states.hpp"

namespace roofcoh {

/// Trace-preserving map whose Kraus operators each have at most one nonzero
/// entry per column, so every operator sends incoherent states to incoherent
/// states.
class IncoherentChannel {
 public:
  explicit IncoherentChannel(std::vector<Eigen::MatrixXcd> kraus)
      : kraus_(std::move(kraus)) {
    if (kraus_.empty()) {
      throw std::invalid_argument("IncoherentChannel: at least one Kraus operator");
    }
    const Eigen::Index d = kraus_.front().rows();
    Eigen::MatrixXcd completeness = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& K : kraus_) {
      if (K.rows() != d || K.cols() != d) {
        throw std::invalid_argument("IncoherentChannel: operators must be square, same size");
      }
      for (Eigen::Index c = 0; c < d; ++c) {
        int support = 0;
        for (Eigen::Index r = 0; r < d; ++r) {
          if (std::abs(K(r, c)) > 1e-14) ++support;
        }
        if (support > 1) {
          throw std::invalid_argument(
              "IncoherentChannel: a column has more than one nonzero entry");
        }
      }
      completeness += K.adjoint() * K;
    }
    const double err =
        (completeness - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (err > 1e-10) {
      throw std::invalid_argument("IncoherentChannel: not trace preserving");
    }
  }

  const std::vector<Eigen::MatrixXcd>& kraus() const { return kraus_; }
  int dim() const { return static_cast<int>(kraus_.front().rows()); }

  /// Lambda(rho) = sum_n K_n rho K_n^dag, trace renormalized to absorb the
  /// completeness tolerance.
  DensityMatrix apply(const DensityMatrix& rho) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim(), dim());
    for (const auto& K : kraus_) out += K * rho.matrix() * K.adjoint();
    out /= out.trace().real();
    return DensityMatrix(std::move(out), rho.shape());
  }

  struct Branch {
    double prob = 0.0;
    DensityMatrix state;
  };

  /// Selective-measurement outcomes (p_n, K_n rho K_n^dag / p_n); branches
  /// with probability <= prob_floor are dropped.
  std::vector<Branch> branches(const DensityMatrix& rho, double prob_floor = 1e-12) const {
    std::vector<Branch> out;
    for (const auto& K : kraus_) {
      Eigen::MatrixXcd raw = K * rho.matrix() * K.adjoint();
      const double p = raw.trace().real();
      if (p <= prob_floor) continue;
      raw /= p;
      out.push_back(Branch{p, DensityMatrix(std::move(raw), rho.shape())});
    }
    return out;
  }

 private:
  std::vector<Eigen::MatrixXcd> kraus_;
};

/// Haar-random pure state: i.i.d. standard complex Gaussian amplitudes,
/// normalized. Deterministic per seed.
inline PureState haar_pure(const SubsystemShape& shape, std::uint64_t seed) {
  rng::Xoshiro256pp gen(seed);
  Eigen::VectorXcd amps(shape.total_dim());
  for (Eigen::Index i = 0; i < amps.size(); ++i) amps(i) = gen.complex_gaussian();
  return PureState::normalized(std::move(amps), shape);
}

/// Ginibre-induced mixed state rho = G G^dag / tr(G G^dag) with G a
/// (total_dim x rank) complex Gaussian matrix.
inline DensityMatrix ginibre_mixed(const SubsystemShape& shape, int rank,
                                   std::uint64_t seed) {
  const int d = shape.total_dim();
  if (rank < 1 || rank > d) {
    throw std::invalid_argument("ginibre_mixed: rank out of range");
  }
  rng::Xoshiro256pp gen(seed);
  Eigen::MatrixXcd g(d, rank);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < rank; ++k) g(i, k) = gen.complex_gaussian();
  }
  Eigen::MatrixXcd m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(std::move(m), shape);
}

inline DensityMatrix ginibre_mixed(int dim, int rank, std::uint64_t seed) {
  return ginibre_mixed(SubsystemShape({dim}), rank, seed);
}

struct ProductSample {
  PureState composite;
  std::vector<PureState> parts;
};

/// Haar-random state on each party (part j drawn from stream j), with the
/// composite formed by the tensor-product fold of the parts.
inline ProductSample random_product_pure(const SubsystemShape& shape, std::uint64_t seed) {
  std::vector<PureState> parts;
  parts.reserve(static_cast<std::size_t>(shape.num_parties()));
  for (int party = 0; party < shape.num_parties(); ++party) {
    parts.push_back(haar_pure(SubsystemShape({shape.dim(party)}),
                              rng::derive_stream(seed, static_cast<std::uint64_t>(party))));
  }
  PureState composite = parts.front();
  for (std::size_t j = 1; j < parts.size(); ++j) {
    composite = tensor_product(composite, parts[j]);
  }
  return ProductSample{std::move(composite), std::move(parts)};
}

/// Full dephasing: K_i = |i><i|.
inline IncoherentChannel dephasing_channel(int dim) {
  std::vector<Eigen::MatrixXcd> ks;
  ks.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(dim, dim);
    K(i, i) = 1.0;
    ks.push_back(std::move(K));
  }
  return IncoherentChannel(std::move(ks));
}

/// Single-Kraus relabeling channel K = sum_c |perm[c]><c|.
inline IncoherentChannel permutation_channel(const std::vector<int>& perm) {
  const int dim = static_cast<int>(perm.size());
  std::vector<bool> seen(static_cast<std::size_t>(dim), false);
  for (int r : perm) {
    if (r < 0 || r >= dim || seen[static_cast<std::size_t>(r)]) {
      throw std::invalid_argument("permutation_channel: not a permutation");
    }
    seen[static_cast<std::size_t>(r)] = true;
  }
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(dim, dim);
  for (int c = 0; c < dim; ++c) K(perm[static_cast<std::size_t>(c)], c) = 1.0;
  return IncoherentChannel({std::move(K)});
}

/// Random incoherent channel. Each Kraus operator assigns a random subset of
/// columns to distinct rows (injective within the operator, so the
/// completeness sum stays exactly diagonal) with complex Gaussian amplitudes;
/// the amplitudes are then normalized per column across the whole Kraus set.
/// Draws that leave a column unassigned are regenerated internally.
inline IncoherentChannel random_incoherent_channel(int dim, int n_kraus,
                                                   std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("random_incoherent_channel: dim must be >= 2");
  if (n_kraus < 1) {
    throw std::invalid_argument("random_incoherent_channel: n_kraus must be >= 1");
  }
  rng::Xoshiro256pp gen(seed);
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<std::vector<int>> row_of(
        static_cast<std::size_t>(n_kraus), std::vector<int>(static_cast<std::size_t>(dim), -1));
    std::vector<std::vector<Complex>> amp_of(
        static_cast<std::size_t>(n_kraus),
        std::vector<Complex>(static_cast<std::size_t>(dim), 0.0));
    for (int n = 0; n < n_kraus; ++n) {
      std::vector<int> rows(static_cast<std::size_t>(dim));
      std::iota(rows.begin(), rows.end(), 0);
      for (int i = dim - 1; i > 0; --i) {
        const int j = static_cast<int>(gen.below(static_cast<std::uint64_t>(i + 1)));
        std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
      }
      int next_row = 0;
      for (int c = 0; c < dim; ++c) {
        const bool include = (n_kraus == 1) || (gen.uniform01() < 0.8);
        if (!include) continue;
        row_of[static_cast<std::size_t>(n)][static_cast<std::size_t>(c)] =
            rows[static_cast<std::size_t>(next_row++)];
        amp_of[static_cast<std::size_t>(n)][static_cast<std::size_t>(c)] =
            gen.complex_gaussian();
      }
    }
    bool feasible = true;
    std::vector<double> column_sq(static_cast<std::size_t>(dim), 0.0);
    for (int c = 0; c < dim && feasible; ++c) {
      for (int n = 0; n < n_kraus; ++n) {
        if (row_of[static_cast<std::size_t>(n)][static_cast<std::size_t>(c)] >= 0) {
          column_sq[static_cast<std::size_t>(c)] +=
              std::norm(amp_of[static_cast<std::size_t>(n)][static_cast<std::size_t>(c)]);
        }
      }
      if (column_sq[static_cast<std::size_t>(c)] < 1e-12) feasible = false;
    }
    if (!feasible) continue;
    std::vector<Eigen::MatrixXcd> ks;
    ks.reserve(static_cast<std::size_t>(n_kraus));
    for (int n = 0; n < n_kraus; ++n) {
      Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(dim, dim);
      for (int c = 0; c < dim; ++c) {
        const int r = row_of[static_cast<std::size_t>(n)][static_cast<std::size_t>(c)];
        if (r < 0) continue;
        K(r, c) = amp_of[static_cast<std::size_t>(n)][static_cast<std::size_t>(c)] /
                  std::sqrt(column_sq[static_cast<std::size_t>(c)]);
      }
      ks.push_back(std::move(K));
    }
    return IncoherentChannel(std::move(ks));
  }
  throw std::runtime_error("random_incoherent_channel: no feasible draw");
}

}  // namespace roofcoh
