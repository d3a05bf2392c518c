#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "roofcoh/functionals.hpp"
#include "roofcoh/rng.hpp"
#include "roofcoh/states.hpp"

namespace roofcoh {

struct RoofConfig {
  int ensemble_size = 0;  // 0 = auto: min(rank^2, 16); must be >= rank otherwise
  int restarts = 32;
  int max_iters = 2000;
  double obj_tol = 1e-8;
  std::uint64_t seed = 0;
};

struct RoofResult {
  double value = 0.0;  // attained ensemble average — an upper bound on the infimum
  std::vector<std::pair<double, PureState>> ensemble;
  std::vector<double> per_restart_values;
  bool converged = false;
};

/// Weighted average sum_i p_i C_f(phi_i) of an explicit decomposition.
inline double ensemble_objective(const std::vector<std::pair<double, PureState>>& ensemble,
                                 const CoherenceFunctional& f) {
  Eigen::VectorXd weights(static_cast<Eigen::Index>(ensemble.size()));
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    weights(static_cast<Eigen::Index>(i)) = ensemble[i].first;
  }
  ProbabilityVector check(weights);  // weights must form a probability vector
  double objective = 0.0;
  for (const auto& [weight, state] : ensemble) {
    objective += weight * c_f_pure(f, state);
  }
  return objective;
}

/// Exact coherence of formation of a single qubit:
/// h((1 + sqrt(1 - 4|rho_01|^2)) / 2) in bits. Serves as the independent
/// oracle the roof optimizer is validated against.
inline double qubit_formation_closed_form(const DensityMatrix& rho) {
  if (rho.shape().total_dim() != 2) {
    throw std::invalid_argument("qubit_formation_closed_form: qubit input required");
  }
  const double off = std::abs(rho.matrix()(0, 1));
  const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * off * off));
  return binary_entropy(0.5 * (1.0 + disc));
}

namespace detail {

/// Objective over the isometry parametrization. With rho = sum_k l_k |e_k><e_k|
/// on its rank-r support, every size-m decomposition arises as
///   sqrt(p_i) |phi_i> = sum_k V_ik sqrt(l_k) |e_k>,   V^dag V = I_r.
/// Rows of W = V * B are the unnormalized members (B row k = sqrt(l_k) e_k^T),
/// and the objective extends smoothly off the isometry manifold, which is what
/// the ambient (Euclidean) gradient differentiates.
struct RoofProblem {
  Eigen::MatrixXcd scaled_vectors;  // r x d
  const CoherenceFunctional* functional = nullptr;

  double objective(const Eigen::MatrixXcd& V) const {
    const Eigen::MatrixXcd W = V * scaled_vectors;
    double obj = 0.0;
    Eigen::VectorXd probs(W.cols());
    for (Eigen::Index i = 0; i < W.rows(); ++i) {
      const double p = W.row(i).squaredNorm();
      if (p <= kZeroWeightTol) continue;
      probs = W.row(i).cwiseAbs2().transpose() / p;
      obj += p * functional->eval_raw(probs);
    }
    return obj;
  }

  /// Gradient with respect to the real and imaginary parts of V, packed as
  /// d/dRe + i d/dIm (twice the Wirtinger conjugate derivative). Uses the
  /// functional's simplex gradient when present, else central differences.
  Eigen::MatrixXcd euclidean_grad(const Eigen::MatrixXcd& V) const {
    if (functional->has_grad()) {
      const Eigen::MatrixXcd W = V * scaled_vectors;
      Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(W.rows(), W.cols());
      Eigen::VectorXd probs(W.cols());
      for (Eigen::Index i = 0; i < W.rows(); ++i) {
        const double p = W.row(i).squaredNorm();
        if (p <= kZeroWeightTol) continue;
        probs = W.row(i).cwiseAbs2().transpose() / p;
        const double f_val = functional->eval_raw(probs);
        const Eigen::VectorXd g = functional->grad_raw(probs);
        const double pivot = g.dot(probs);
        for (Eigen::Index j = 0; j < W.cols(); ++j) {
          G(i, j) = W(i, j) * (f_val + g(j) - pivot);
        }
      }
      return 2.0 * (G * scaled_vectors.adjoint());
    }
    constexpr double h = 1e-6;
    Eigen::MatrixXcd grad(V.rows(), V.cols());
    Eigen::MatrixXcd probe = V;
    for (Eigen::Index i = 0; i < V.rows(); ++i) {
      for (Eigen::Index k = 0; k < V.cols(); ++k) {
        probe(i, k) = V(i, k) + h;
        const double fr_plus = objective(probe);
        probe(i, k) = V(i, k) - h;
        const double fr_minus = objective(probe);
        probe(i, k) = V(i, k) + Complex(0.0, h);
        const double fi_plus = objective(probe);
        probe(i, k) = V(i, k) - Complex(0.0, h);
        const double fi_minus = objective(probe);
        probe(i, k) = V(i, k);
        grad(i, k) = Complex((fr_plus - fr_minus) / (2.0 * h),
                             (fi_plus - fi_minus) / (2.0 * h));
      }
    }
    return grad;
  }
};

/// Polar retraction: the nearest isometry to X in Frobenius norm.
inline Eigen::MatrixXcd polar_retract(const Eigen::MatrixXcd& X) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Projection onto the tangent space of {V : V^dag V = I} at V.
inline Eigen::MatrixXcd tangent_project(const Eigen::MatrixXcd& V,
                                        const Eigen::MatrixXcd& G) {
  const Eigen::MatrixXcd S = V.adjoint() * G;
  return G - V * (0.5 * (S + S.adjoint()));
}

struct DescentOutcome {
  double value = 0.0;
  Eigen::MatrixXcd V;
  bool converged = false;
};

/// Projected gradient descent with Armijo backtracking and polar retraction.
inline DescentOutcome minimize_over_isometries(const RoofProblem& problem,
                                               Eigen::MatrixXcd V, int max_iters,
                                               double obj_tol) {
  DescentOutcome out;
  double value = problem.objective(V);
  double step = 0.5;
  int stall = 0;
  bool converged = false;
  for (int iter = 0; iter < max_iters && !converged; ++iter) {
    const Eigen::MatrixXcd direction = tangent_project(V, problem.euclidean_grad(V));
    const double grad_sq = direction.squaredNorm();
    if (std::sqrt(grad_sq) <= 1e-9 * (1.0 + std::abs(value))) {
      converged = true;
      break;
    }
    bool accepted = false;
    double alpha = step;
    for (int backtrack = 0; backtrack < 50; ++backtrack) {
      const Eigen::MatrixXcd trial = polar_retract(V - alpha * direction);
      const double trial_value = problem.objective(trial);
      if (trial_value <= value - 1e-4 * alpha * grad_sq) {
        const double drop = value - trial_value;
        V = trial;
        value = trial_value;
        accepted = true;
        step = std::min(alpha * 1.8, 64.0);
        if (drop <= obj_tol * (1.0 + std::abs(value))) {
          if (++stall >= 3) converged = true;
        } else {
          stall = 0;
        }
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // no descent at line-search resolution: treat as converged
      converged = true;
    }
  }
  out.value = value;
  out.V = std::move(V);
  out.converged = converged;
  return out;
}

}  // namespace detail

/// Convex-roof upper bound C_f(rho) = inf over decompositions, computed by
/// multi-restart descent over the isometry freedom. Restart 0 starts from the
/// eigendecomposition itself, so the result never exceeds the eigendecomposition
/// ensemble average; remaining restarts start from seeded random isometries
/// (stream = restart index). The returned value is attained by the returned
/// ensemble and is therefore always a valid upper bound on the true infimum.
inline RoofResult roof_value(const DensityMatrix& rho, const CoherenceFunctional& f,
                             const RoofConfig& cfg = {}) {
  if (cfg.restarts < 1) throw std::invalid_argument("RoofConfig: restarts must be >= 1");
  if (cfg.max_iters < 1) throw std::invalid_argument("RoofConfig: max_iters must be >= 1");
  if (cfg.obj_tol <= 0.0) throw std::invalid_argument("RoofConfig: obj_tol must be > 0");

  const EigPsd eig = eig_psd(rho);
  const int rank = eig.rank;
  const int d = rho.shape().total_dim();
  int m = cfg.ensemble_size;
  if (m == 0) {
    m = std::min(rank * rank, 16);
    m = std::max(m, rank);
  } else if (m < rank) {
    throw std::invalid_argument("RoofConfig: ensemble_size below the numerical rank");
  }

  detail::RoofProblem problem;
  problem.scaled_vectors.resize(rank, d);
  for (int k = 0; k < rank; ++k) {
    problem.scaled_vectors.row(k) = std::sqrt(eig.values(k)) * eig.vectors.col(k).transpose();
  }
  problem.functional = &f;

  RoofResult result;
  result.per_restart_values.assign(static_cast<std::size_t>(cfg.restarts), 0.0);
  double best_value = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd best_V;
  bool best_converged = false;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    Eigen::MatrixXcd V0;
    if (restart == 0) {
      V0 = Eigen::MatrixXcd::Zero(m, rank);
      V0.topRows(rank) = Eigen::MatrixXcd::Identity(rank, rank);
    } else {
      rng::Xoshiro256pp gen(cfg.seed, static_cast<std::uint64_t>(restart));
      V0.resize(m, rank);
      for (int i = 0; i < m; ++i) {
        for (int k = 0; k < rank; ++k) V0(i, k) = gen.complex_gaussian();
      }
      V0 = detail::polar_retract(V0);
    }
    const detail::DescentOutcome outcome =
        detail::minimize_over_isometries(problem, std::move(V0), cfg.max_iters, cfg.obj_tol);
    result.per_restart_values[static_cast<std::size_t>(restart)] = outcome.value;
    if (outcome.value < best_value) {
      best_value = outcome.value;
      best_V = outcome.V;
      best_converged = outcome.converged;
    }
  }

  const Eigen::MatrixXcd W = best_V * problem.scaled_vectors;
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    const double p = W.row(i).squaredNorm();
    if (p <= kZeroWeightTol) continue;
    result.ensemble.emplace_back(
        p, PureState::normalized(W.row(i).transpose(), rho.shape()));
  }
  result.converged = best_converged;
  result.value = 0.0;
  for (const auto& [weight, state] : result.ensemble) {
    result.value += weight * c_f_pure(f, state);
  }
  return result;
}

}  // namespace roofcoh
