#pragma once

// Shared fixtures for the test suite: named states and independent oracles
// kept deliberately separate from the library implementation paths.

#include <cmath>
#include <roofcoh/roofcoh.hpp>

namespace testutil {

using namespace roofcoh;

inline PureState plus_state() {
  Eigen::VectorXcd a(2);
  a << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return PureState(a, SubsystemShape({2}));
}

inline PureState bell_state() {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(4);
  a(0) = a(3) = 1.0 / std::sqrt(2.0);
  return PureState(a, SubsystemShape({2, 2}));
}

inline PureState ghz_state(int parties = 3) {
  const int d = 1 << parties;
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(d);
  a(0) = a(d - 1) = 1.0 / std::sqrt(2.0);
  return PureState(a, SubsystemShape(std::vector<int>(static_cast<std::size_t>(parties), 2)));
}

inline PureState w_state() {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(8);
  a(1) = a(2) = a(4) = 1.0 / std::sqrt(3.0);
  return PureState(a, SubsystemShape({2, 2, 2}));
}

inline PureState uniform_state(int d) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Constant(d, 1.0 / std::sqrt(double(d)));
  return PureState(a, SubsystemShape({d}));
}

/// Independent Shannon-entropy oracle (bits).
inline double shannon_bits(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 1e-15) s -= p(i) * std::log2(p(i));
  }
  return s;
}

/// Brute-force qubit roof for the formation measure over all size-2
/// decompositions, parametrized by 2x2 unitary mixing of the scaled
/// eigenvectors:
///   U(t, phi, chi) = [[cos t, e^{i phi} sin t],
///                     [-e^{i chi} sin t, e^{i(phi+chi)} cos t]]
/// (row phases are irrelevant to the objective). A coarse grid is refined
/// around the best point until the angular resolution is below `resolution`.
/// Fully independent of the roof optimizer.
inline double brute_force_qubit_formation(const DensityMatrix& rho,
                                          double resolution = 1e-3) {
  const EigPsd eig = eig_psd(rho);
  const Eigen::VectorXcd e0 = std::sqrt(eig.values(0)) * eig.vectors.col(0);
  const Eigen::VectorXcd e1 =
      eig.values.size() > 1 && eig.values(1) > 0.0
          ? Eigen::VectorXcd(std::sqrt(eig.values(1)) * eig.vectors.col(1))
          : Eigen::VectorXcd(Eigen::VectorXcd::Zero(2));

  auto objective = [&](double t, double phi, double chi) {
    const Complex u00 = std::cos(t);
    const Complex u01 = std::polar(std::sin(t), phi);
    const Complex u10 = -std::polar(std::sin(t), chi);
    const Complex u11 = std::polar(std::cos(t), phi + chi);
    double obj = 0.0;
    const Complex rows[2][2] = {{u00, u01}, {u10, u11}};
    for (const auto& row : rows) {
      const Complex w0 = row[0] * e0(0) + row[1] * e1(0);
      const Complex w1 = row[0] * e0(1) + row[1] * e1(1);
      const double p = std::norm(w0) + std::norm(w1);
      if (p < 1e-14) continue;
      obj += p * binary_entropy(std::norm(w0) / p);
    }
    return obj;
  };

  const double pi = std::numbers::pi;
  double t_lo = 0.0, p_lo = 0.0, c_lo = 0.0;
  double t_step = (pi / 2) / 40, p_step = (2 * pi) / 40, c_step = (2 * pi) / 40;
  double best = 1e300, bt = 0, bp = 0, bc = 0;
  while (true) {
    for (int i = 0; i <= 40; ++i) {
      for (int j = 0; j <= 40; ++j) {
        for (int k = 0; k <= 40; ++k) {
          const double v = objective(t_lo + i * t_step, p_lo + j * p_step, c_lo + k * c_step);
          if (v < best) {
            best = v;
            bt = t_lo + i * t_step;
            bp = p_lo + j * p_step;
            bc = c_lo + k * c_step;
          }
        }
      }
    }
    if (t_step <= resolution && p_step <= resolution && c_step <= resolution) break;
    t_lo = bt - 2 * t_step;
    p_lo = bp - 2 * p_step;
    c_lo = bc - 2 * c_step;
    t_step = 4 * t_step / 40;
    p_step = 4 * p_step / 40;
    c_step = 4 * c_step / 40;
  }
  return best;
}

}  // namespace testutil
