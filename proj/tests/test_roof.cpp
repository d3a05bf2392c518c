#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace roofcoh;
using testutil::brute_force_qubit_formation;
using testutil::plus_state;

namespace {

DensityMatrix real_qubit(double off_diagonal) {
  Eigen::MatrixXcd m(2, 2);
  m << 0.5, off_diagonal, off_diagonal, 0.5;
  return DensityMatrix(m, SubsystemShape({2}));
}

}  // namespace

TEST_CASE("ensemble objective") {
  const auto& formation = FunctionalRegistry::builtins().get("formation");
  const SubsystemShape q({2});

  CHECK(ensemble_objective({{1.0, plus_state()}}, formation) == Approx(1.0).margin(1e-13));
  CHECK(ensemble_objective({{0.4, PureState::basis(q, 0)}, {0.6, PureState::basis(q, 1)}},
                           formation) == Approx(0.0).margin(1e-13));
  CHECK(ensemble_objective({{0.5, plus_state()}, {0.5, PureState::basis(q, 0)}}, formation) ==
        Approx(0.5).margin(1e-13));
  // weights must form a probability vector
  CHECK_THROWS_AS(ensemble_objective({{0.5, plus_state()}}, formation), std::invalid_argument);
}

TEST_CASE("qubit closed form against the brute-force oracle") {
  // diagonal -> 0, |+><+| -> 1
  Eigen::VectorXd d(2);
  d << 0.8, 0.2;
  CHECK(qubit_formation_closed_form(
            DensityMatrix::diagonal(ProbabilityVector(d), SubsystemShape({2}))) ==
        Approx(0.0).margin(1e-14));
  CHECK(qubit_formation_closed_form(DensityMatrix::from_pure(plus_state())) ==
        Approx(1.0).margin(1e-12));

  // frozen value for rho_01 = 0.25, cross-validated by the independent grid search
  const DensityMatrix quarter = real_qubit(0.25);
  const double closed = qubit_formation_closed_form(quarter);
  CHECK(closed == Approx(0.35457890266527).margin(1e-12));
  CHECK(brute_force_qubit_formation(quarter) == Approx(closed).margin(2e-6));

  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const DensityMatrix rho = ginibre_mixed(2, 2, rng::derive_stream(51, seed));
    CHECK(brute_force_qubit_formation(rho) ==
          Approx(qubit_formation_closed_form(rho)).margin(2e-6));
  }

  CHECK_THROWS_AS(qubit_formation_closed_form(ginibre_mixed(3, 2, 1)), std::invalid_argument);
}

TEST_CASE("roof of a pure state is the pure value with a singleton ensemble") {
  const auto& formation = FunctionalRegistry::builtins().get("formation");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PureState psi = haar_pure(SubsystemShape({2, 2}), seed);
    const RoofResult result =
        roof_value(DensityMatrix::from_pure(psi), formation, {.restarts = 4, .seed = seed});
    CHECK(result.value == Approx(c_f_pure(formation, psi)).margin(1e-9));
    CHECK(result.ensemble.size() == 1);
  }
}

TEST_CASE("roof of a diagonal state is zero via basis states") {
  const auto& formation = FunctionalRegistry::builtins().get("formation");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto probs = diag_probs(haar_pure(SubsystemShape({4}), seed));
    const DensityMatrix rho = DensityMatrix::diagonal(probs, SubsystemShape({4}));
    const RoofResult result = roof_value(rho, formation, {.restarts = 4, .seed = seed});
    CHECK(result.value <= 1e-8);
    for (const auto& [weight, state] : result.ensemble) {
      CHECK(diag_probs(state).probs().maxCoeff() >= 1.0 - 1e-6);
    }
  }
}

TEST_CASE("roof matches the qubit oracle") {
  const auto& formation = FunctionalRegistry::builtins().get("formation");
  const RoofResult quarter = roof_value(real_qubit(0.25), formation, {.restarts = 32, .seed = 9});
  CHECK(quarter.value == Approx(0.35457890266527).margin(1e-4));

  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const DensityMatrix rho = ginibre_mixed(2, 2, rng::derive_stream(52, seed));
    const RoofResult result =
        roof_value(rho, formation, {.restarts = 32, .seed = rng::derive_stream(53, seed)});
    CHECK(result.value == Approx(qubit_formation_closed_form(rho)).margin(1e-4));
  }
}

TEST_CASE("roof never exceeds an explicit decomposition") {
  const auto& formation = FunctionalRegistry::builtins().get("formation");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix rho = ginibre_mixed(4, 2, rng::derive_stream(54, seed));
    const RoofResult result =
        roof_value(rho, formation, {.restarts = 16, .seed = rng::derive_stream(55, seed)});

    // eigendecomposition ensemble
    const EigPsd eig = eig_psd(rho);
    std::vector<std::pair<double, PureState>> eigen_ensemble;
    for (int k = 0; k < eig.rank; ++k) {
      eigen_ensemble.emplace_back(eig.values(k),
                                  PureState::normalized(eig.vectors.col(k), rho.shape()));
    }
    CHECK(result.value <= ensemble_objective(eigen_ensemble, formation) + 1e-9);

    // random isometry pushforwards (independent construction via QR)
    rng::Xoshiro256pp gen(rng::derive_stream(56, seed));
    for (int trial = 0; trial < 5; ++trial) {
      const int m = eig.rank + 2;
      Eigen::MatrixXcd raw(m, eig.rank);
      for (int i = 0; i < m; ++i) {
        for (int k = 0; k < eig.rank; ++k) raw(i, k) = gen.complex_gaussian();
      }
      const Eigen::MatrixXcd iso =
          Eigen::HouseholderQR<Eigen::MatrixXcd>(raw).householderQ() *
          Eigen::MatrixXcd::Identity(m, eig.rank);
      std::vector<std::pair<double, PureState>> pushed;
      double total = 0.0;
      for (int i = 0; i < m; ++i) {
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(rho.shape().total_dim());
        for (int k = 0; k < eig.rank; ++k) {
          w += iso(i, k) * std::sqrt(eig.values(k)) * eig.vectors.col(k);
        }
        const double p = w.squaredNorm();
        total += p;
        if (p > 1e-14) pushed.emplace_back(p, PureState::normalized(w, rho.shape()));
      }
      REQUIRE(total == Approx(1.0).margin(1e-10));
      CHECK(result.value <= ensemble_objective(pushed, formation) + 1e-9);
    }
  }
}

TEST_CASE("roof result invariants") {
  const auto& formation = FunctionalRegistry::builtins().get("formation");
  const DensityMatrix rho = ginibre_mixed(SubsystemShape({2, 2}), 3, 77);
  const RoofConfig cfg{.restarts = 12, .seed = 4242};
  const RoofResult result = roof_value(rho, formation, cfg);

  // returned ensemble reconstructs rho
  Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(4, 4);
  for (const auto& [weight, state] : result.ensemble) {
    mix += weight * state.amplitudes() * state.amplitudes().adjoint();
  }
  CHECK((mix - rho.matrix()).cwiseAbs().maxCoeff() < 1e-8);

  // the reported value is attained by the returned ensemble
  CHECK(result.value == Approx(ensemble_objective(result.ensemble, formation)).margin(1e-10));
  CHECK(static_cast<int>(result.per_restart_values.size()) == cfg.restarts);

  // deterministic given the seed, bit for bit
  const RoofResult again = roof_value(rho, formation, cfg);
  REQUIRE(again.per_restart_values.size() == result.per_restart_values.size());
  for (std::size_t i = 0; i < again.per_restart_values.size(); ++i) {
    CHECK(again.per_restart_values[i] == result.per_restart_values[i]);
  }
  CHECK(again.value == result.value);
}

TEST_CASE("roof convexity spot checks") {
  const auto& formation = FunctionalRegistry::builtins().get("formation");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DensityMatrix rho1 = ginibre_mixed(3, 2, rng::derive_stream(57, seed));
    const DensityMatrix rho2 = ginibre_mixed(3, 3, rng::derive_stream(58, seed));
    const double c1 = roof_value(rho1, formation, {.restarts = 16, .seed = 1}).value;
    const double c2 = roof_value(rho2, formation, {.restarts = 16, .seed = 2}).value;
    for (double t : {0.25, 0.5, 0.75}) {
      const DensityMatrix mix(t * rho1.matrix() + (1.0 - t) * rho2.matrix(),
                              SubsystemShape({3}));
      const double cm = roof_value(mix, formation, {.restarts = 16, .seed = 3}).value;
      CHECK(cm <= t * c1 + (1.0 - t) * c2 + 1e-4);
    }
  }
}

TEST_CASE("non-convergence is flagged but the bound is still valid") {
  const auto& formation = FunctionalRegistry::builtins().get("formation");
  const DensityMatrix rho = real_qubit(0.25);
  const RoofResult result =
      roof_value(rho, formation, {.restarts = 2, .max_iters = 1, .seed = 1});
  CHECK_FALSE(result.converged);
  CHECK(result.value >= qubit_formation_closed_form(rho) - 1e-12);
  Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(2, 2);
  for (const auto& [weight, state] : result.ensemble) {
    mix += weight * state.amplitudes() * state.amplitudes().adjoint();
  }
  CHECK((mix - rho.matrix()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("roof config contract") {
  const auto& formation = FunctionalRegistry::builtins().get("formation");
  const DensityMatrix rho = ginibre_mixed(3, 3, 5);
  CHECK_THROWS_AS(roof_value(rho, formation, {.restarts = 0}), std::invalid_argument);
  CHECK_THROWS_AS(roof_value(rho, formation, {.max_iters = 0}), std::invalid_argument);
  CHECK_THROWS_AS(roof_value(rho, formation, {.obj_tol = 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(roof_value(rho, formation, {.ensemble_size = 2}), std::invalid_argument);
  CHECK_NOTHROW(roof_value(rho, formation, {.ensemble_size = 3, .restarts = 2}));
}

TEST_CASE("roof works without an analytic gradient") {
  // same functional, no registered gradient: exercises the finite-difference path
  const auto& formation = FunctionalRegistry::builtins().get("formation");
  const CoherenceFunctional fd_only(
      "formation-fd", [&](const Eigen::VectorXd& p) { return formation.eval_raw(p); }, true);
  const DensityMatrix rho = ginibre_mixed(2, 2, 31415);
  const double with_grad = roof_value(rho, formation, {.restarts = 8, .seed = 6}).value;
  const double with_fd = roof_value(rho, fd_only, {.restarts = 8, .seed = 6}).value;
  CHECK(with_fd == Approx(with_grad).margin(1e-5));
  CHECK(with_fd == Approx(qubit_formation_closed_form(rho)).margin(1e-4));
}
