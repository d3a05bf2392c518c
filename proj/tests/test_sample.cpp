#include <catch2/catch.hpp>

#include "helpers.hpp"

using namespace roofcoh;

TEST_CASE("prng stream regression") {
  // frozen outputs of the declared algorithm; a change here breaks every
  // seeded report, so it must be deliberate
  rng::Xoshiro256pp gen(1, 0);
  const std::uint64_t first = gen.next();
  rng::Xoshiro256pp same(1, 0);
  CHECK(same.next() == first);
  rng::Xoshiro256pp other_stream(1, 1);
  CHECK(other_stream.next() != first);
  CHECK(rng::derive_stream(7, 0) != rng::derive_stream(7, 1));
  CHECK(rng::derive_stream(7, 0) == rng::derive_stream(7, 0));

  // uniforms live in [0, 1); gaussians are finite and not all equal
  rng::Xoshiro256pp g2(42);
  double mean = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double u = g2.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    mean += g2.gaussian();
  }
  CHECK(std::abs(mean / 1000.0) < 0.2);
}

TEST_CASE("haar sampler") {
  const SubsystemShape shape({2, 2});
  const PureState a = haar_pure(shape, 5);
  const PureState b = haar_pure(shape, 5);
  CHECK((a.amplitudes() - b.amplitudes()).norm() == 0.0);  // deterministic
  CHECK(std::abs(a.amplitudes().norm() - 1.0) <= 1e-12);

  // mean diagonal probabilities over many samples approach uniform
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    mean += diag_probs(haar_pure(shape, rng::derive_stream(71, i))).probs();
  }
  mean /= samples;
  for (int i = 0; i < 4; ++i) CHECK(mean(i) == Approx(0.25).margin(0.02));
}

TEST_CASE("ginibre sampler") {
  const DensityMatrix rank1 = ginibre_mixed(4, 1, 3);
  CHECK(vn_entropy(rank1) <= 1e-10);
  CHECK(eig_psd(rank1).rank == 1);

  CHECK_THROWS_AS(ginibre_mixed(4, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ginibre_mixed(4, 5, 1), std::invalid_argument);

  const DensityMatrix a = ginibre_mixed(3, 2, 9);
  const DensityMatrix b = ginibre_mixed(3, 2, 9);
  CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() == 0.0);

  // full-rank draws stay comfortably full rank at desk scale
  double min_eig = 1.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DensityMatrix g = ginibre_mixed(3, 3, rng::derive_stream(72, seed));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.matrix(), Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  CHECK(min_eig > 1e-6);
}

TEST_CASE("random product states") {
  const SubsystemShape shape({2, 3, 2});
  const ProductSample sample = random_product_pure(shape, 11);
  REQUIRE(sample.parts.size() == 3);

  // composite equals the fold of the parts
  PureState fold = sample.parts[0];
  for (std::size_t j = 1; j < sample.parts.size(); ++j) {
    fold = tensor_product(fold, sample.parts[j]);
  }
  CHECK((sample.composite.amplitudes() - fold.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);

  // diagonal probabilities factor as a Kronecker product
  const Eigen::VectorXd composite_probs = diag_probs(sample.composite).probs();
  Eigen::VectorXd kron = diag_probs(sample.parts[0]).probs();
  for (std::size_t j = 1; j < sample.parts.size(); ++j) {
    const Eigen::VectorXd next = diag_probs(sample.parts[j]).probs();
    Eigen::VectorXd out(kron.size() * next.size());
    for (Eigen::Index a = 0; a < kron.size(); ++a) {
      for (Eigen::Index b = 0; b < next.size(); ++b) out(a * next.size() + b) = kron(a) * next(b);
    }
    kron = out;
  }
  CHECK((composite_probs - kron).cwiseAbs().maxCoeff() < 1e-12);

  const ProductSample again = random_product_pure(shape, 11);
  CHECK((again.composite.amplitudes() - sample.composite.amplitudes()).norm() == 0.0);
}

TEST_CASE("incoherent channel construction") {
  // the named presets
  const IncoherentChannel dephaser = dephasing_channel(2);
  const DensityMatrix plus = DensityMatrix::from_pure(testutil::plus_state());
  CHECK((dephaser.apply(plus).matrix() - 0.5 * Eigen::MatrixXcd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  const IncoherentChannel perm = permutation_channel({1, 2, 0});
  Eigen::VectorXd p(3);
  p << 0.5, 0.3, 0.2;
  const DensityMatrix diag = DensityMatrix::diagonal(ProbabilityVector(p), SubsystemShape({3}));
  const DensityMatrix permuted = perm.apply(diag);
  CHECK(std::abs(permuted.matrix()(1, 1).real() - 0.5) < 1e-12);
  CHECK((permuted.matrix() - dephase(permuted).matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(permutation_channel({0, 0, 1}), std::invalid_argument);

  // malformed operator sets are rejected
  Eigen::MatrixXcd two_per_column(2, 2);
  two_per_column << 1.0, 0.0, 1.0, 0.0;
  CHECK_THROWS_AS(IncoherentChannel({two_per_column}), std::invalid_argument);
  CHECK_THROWS_AS(IncoherentChannel({0.5 * Eigen::MatrixXcd::Identity(2, 2)}),
                  std::invalid_argument);
}

TEST_CASE("random incoherent channels") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int dim = 2 + static_cast<int>(seed % 3);
    const int n_kraus = 1 + static_cast<int>(seed % 4);
    const IncoherentChannel channel =
        random_incoherent_channel(dim, n_kraus, rng::derive_stream(73, seed));

    // trace preservation at machine precision
    Eigen::MatrixXcd completeness = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& K : channel.kraus()) completeness += K.adjoint() * K;
    CHECK((completeness - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-10);

    // at most one nonzero entry per column
    for (const auto& K : channel.kraus()) {
      for (int c = 0; c < dim; ++c) {
        int nonzero = 0;
        for (int r = 0; r < dim; ++r) {
          if (std::abs(K(r, c)) > 1e-14) ++nonzero;
        }
        CHECK(nonzero <= 1);
      }
    }

    // diagonal inputs stay diagonal; any valid input maps to a valid state
    const DensityMatrix diag = DensityMatrix::diagonal(
        diag_probs(haar_pure(SubsystemShape({dim}), rng::derive_stream(74, seed))),
        SubsystemShape({dim}));
    const DensityMatrix out = channel.apply(diag);
    CHECK((out.matrix() - dephase(out).matrix()).cwiseAbs().maxCoeff() < 1e-12);

    const DensityMatrix mixed = ginibre_mixed(dim, dim, rng::derive_stream(75, seed));
    CHECK_NOTHROW(channel.apply(mixed));  // constructor revalidates the invariants

    // selective branches are normalized states with weights summing to 1
    double total = 0.0;
    for (const auto& branch : channel.branches(mixed)) {
      total += branch.prob;
      CHECK(branch.state.matrix().trace().real() == Approx(1.0).margin(1e-10));
    }
    CHECK(total == Approx(1.0).margin(1e-10));
  }

  CHECK_THROWS_AS(random_incoherent_channel(1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(random_incoherent_channel(2, 0, 0), std::invalid_argument);
}
