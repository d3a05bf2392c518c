#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "roofcoh/rng.hpp"
#include "roofcoh/states.hpp"

namespace roofcoh {

/// Binary entropy in bits with 0*log0 := 0.
inline double binary_entropy(double x) {
  double h = 0.0;
  if (x > kEntropyFloor) h -= x * std::log2(x);
  if (1.0 - x > kEntropyFloor) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

/// A symmetric function f on probability vectors, in bits. Defines the
/// pure-state coherence C_f(phi) = f(|c_0|^2, ..., |c_{d-1}|^2).
///
/// A functional may declare that it satisfies multiplicative separability
/// f(x) + f(y) = f(x kron y); the product-additivity verifier consults this
/// flag and otherwise spot-checks numerically. An analytic gradient on the
/// probability simplex is optional — the roof optimizer falls back to finite
/// differences without one.
class CoherenceFunctional {
 public:
  using Eval = std::function<double(const Eigen::VectorXd&)>;
  using Grad = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  CoherenceFunctional(std::string name, Eval eval, bool multiplicatively_separable,
                      Grad grad = nullptr)
      : name_(std::move(name)),
        eval_(std::move(eval)),
        grad_(std::move(grad)),
        mult_separable_(multiplicatively_separable) {
    if (!eval_) throw std::invalid_argument("CoherenceFunctional: eval required");
  }

  const std::string& name() const { return name_; }
  bool multiplicatively_separable() const { return mult_separable_; }
  bool has_grad() const { return static_cast<bool>(grad_); }

  double eval_raw(const Eigen::VectorXd& probs) const { return eval_(probs); }
  double eval(const ProbabilityVector& p) const { return eval_(p.probs()); }
  Eigen::VectorXd grad_raw(const Eigen::VectorXd& probs) const {
    if (!grad_) throw std::logic_error("CoherenceFunctional: no gradient registered");
    return grad_(probs);
  }

 private:
  std::string name_;
  Eval eval_;
  Grad grad_;
  bool mult_separable_;
};

/// Pure-state coherence C_f(psi) = f(diag_probs(psi)), clamped at zero to
/// absorb rounding in f.
inline double c_f_pure(const CoherenceFunctional& f, const PureState& psi) {
  return std::max(0.0, f.eval(diag_probs(psi)));
}

/// Shannon entropy of the probabilities, base 2. Pure-state value of the
/// coherence of formation.
inline CoherenceFunctional formation_functional() {
  auto eval = [](const Eigen::VectorXd& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p(i) > kEntropyFloor) s -= p(i) * std::log2(p(i));
    }
    return s;
  };
  auto grad = [](const Eigen::VectorXd& p) {
    Eigen::VectorXd g(p.size());
    constexpr double inv_ln2 = 1.4426950408889634;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      g(i) = -std::log2(std::max(p(i), 1e-18)) - inv_ln2;
    }
    return g;
  };
  return CoherenceFunctional("formation", eval, /*multiplicatively_separable=*/true, grad);
}

/// 2*log2(sum_i sqrt(p_i)) — the Renyi-1/2-type pure-state functional.
/// The gradient diverges at zero entries; it is clamped to the finite
/// subgradient scale the optimizer needs.
inline CoherenceFunctional half_functional() {
  auto eval = [](const Eigen::VectorXd& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += std::sqrt(std::max(0.0, p(i)));
    return 2.0 * std::log2(s);
  };
  auto grad = [](const Eigen::VectorXd& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += std::sqrt(std::max(0.0, p(i)));
    constexpr double inv_ln2 = 1.4426950408889634;
    Eigen::VectorXd g(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double root = std::max(std::sqrt(std::max(0.0, p(i))), 1e-8);
      g(i) = inv_ln2 / (s * root);
    }
    return g;
  };
  return CoherenceFunctional("half", eval, /*multiplicatively_separable=*/true, grad);
}

struct SeparabilityCheck {
  double f_x = 0.0;
  double f_y = 0.0;
  double f_xy = 0.0;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Tests f(x) + f(y) = f(x kron y) on one pair of probability vectors.
inline SeparabilityCheck check_mult_separability(const CoherenceFunctional& f,
                                                 const ProbabilityVector& x,
                                                 const ProbabilityVector& y, double tol) {
  const Eigen::Index nx = x.size();
  const Eigen::Index ny = y.size();
  Eigen::VectorXd xy(nx * ny);
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) xy(i * ny + j) = x(i) * y(j);
  }
  SeparabilityCheck out;
  out.f_x = f.eval(x);
  out.f_y = f.eval(y);
  out.f_xy = f.eval_raw(xy);
  out.residual = std::abs(out.f_x + out.f_y - out.f_xy);
  out.tol = tol;
  out.pass = out.residual <= tol;
  return out;
}

/// Name-keyed functional registry. Registration spot-checks the invariants a
/// functional must satisfy (zero on deterministic vectors, permutation
/// symmetry, padding invariance, nonnegativity) instead of assuming them.
class FunctionalRegistry {
 public:
  void add(CoherenceFunctional f) {
    spot_check(f);
    const std::string name = f.name();
    table_.erase(name);
    table_.emplace(name, std::move(f));
  }

  bool contains(const std::string& name) const { return table_.count(name) > 0; }

  const CoherenceFunctional& get(const std::string& name) const {
    const auto it = table_.find(name);
    if (it == table_.end()) {
      throw std::invalid_argument("unknown measure: " + name);
    }
    return it->second;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(table_.size());
    for (const auto& [name, f] : table_) out.push_back(name);
    return out;
  }

  static const FunctionalRegistry& builtins() {
    static const FunctionalRegistry reg = [] {
      FunctionalRegistry r;
      r.add(formation_functional());
      r.add(half_functional());
      return r;
    }();
    return reg;
  }

 private:
  static void spot_check(const CoherenceFunctional& f) {
    constexpr double tol = 1e-12;
    rng::Xoshiro256pp gen(0x5EEDC0DE5EEDC0DEULL);
    for (const int d : {2, 3, 5}) {
      for (int i = 0; i < d; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
        e(i) = 1.0;
        if (std::abs(f.eval_raw(e)) > tol) {
          throw std::invalid_argument("functional '" + f.name() +
                                      "': nonzero on a deterministic vector");
        }
      }
      for (int trial = 0; trial < 8; ++trial) {
        Eigen::VectorXd p(d);
        double sum = 0.0;
        for (int i = 0; i < d; ++i) {
          const Complex z = gen.complex_gaussian();
          p(i) = std::norm(z);
          sum += p(i);
        }
        p /= sum;
        const double base = f.eval_raw(p);
        if (base < -tol) {
          throw std::invalid_argument("functional '" + f.name() + "': negative value");
        }
        Eigen::VectorXd shuffled = p;
        for (int i = d - 1; i > 0; --i) {
          const int j = static_cast<int>(gen.below(static_cast<std::uint64_t>(i + 1)));
          std::swap(shuffled(i), shuffled(j));
        }
        if (std::abs(f.eval_raw(shuffled) - base) > tol) {
          throw std::invalid_argument("functional '" + f.name() +
                                      "': not permutation-symmetric");
        }
        Eigen::VectorXd padded = Eigen::VectorXd::Zero(d + 2);
        padded.head(d) = p;
        if (std::abs(f.eval_raw(padded) - base) > tol) {
          throw std::invalid_argument("functional '" + f.name() +
                                      "': not invariant under zero padding");
        }
      }
    }
  }

  std::map<std::string, CoherenceFunctional> table_;
};

}  // namespace roofcoh
