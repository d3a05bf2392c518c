#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "roofcoh/functionals.hpp"
#include "roofcoh/states.hpp"

namespace roofcoh {

struct EnsembleMember {
  std::vector<int> label;  // multi-index over the complementary parties
  double weight = 0.0;
  PureState state;
};

/// Weighted pure-state decomposition of one party's reduced state, labeled by
/// the computational-basis multi-index of all other parties. The mixture of
/// the members reconstructs the partial trace to the party — that identity is
/// what the superadditivity arguments rest on, and it is property-tested.
class IndexedEnsemble {
 public:
  IndexedEnsemble(int party, std::vector<EnsembleMember> members)
      : party_(party), members_(std::move(members)) {
    double sum = 0.0;
    for (const auto& member : members_) {
      if (member.weight < 0.0) {
        throw std::invalid_argument("IndexedEnsemble: negative weight");
      }
      sum += member.weight;
    }
    if (std::abs(sum - 1.0) > 1e-10) {
      throw std::invalid_argument("IndexedEnsemble: weights do not sum to 1");
    }
  }

  int party() const { return party_; }
  const std::vector<EnsembleMember>& members() const { return members_; }

  /// sum_m w_m |alpha_m><alpha_m| — for checking reconstruction.
  Eigen::MatrixXcd mixture() const {
    if (members_.empty()) return {};
    const Eigen::Index d = members_.front().state.amplitudes().size();
    Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& member : members_) {
      mix += member.weight * member.state.amplitudes() * member.state.amplitudes().adjoint();
    }
    return mix;
  }

 private:
  int party_;
  std::vector<EnsembleMember> members_;
};

/// Conditional ensemble of `party` induced by grouping the coefficients of
/// psi by the basis multi-index of all other parties: member m has weight
/// w_m = sum_i |c(i; m)|^2 and state (1/sqrt(w_m)) sum_i c(i; m) |i>.
/// Branches with w_m <= 1e-14 are dropped to avoid 0/0 in the normalization.
inline IndexedEnsemble induced_ensemble(const PureState& psi, int party) {
  if (psi.shape().num_parties() < 2) {
    throw std::invalid_argument("induced_ensemble: at least two parties required");
  }
  const PartySplit split(psi.shape(), party);
  const SubsystemShape party_shape({split.party_dim()});
  std::vector<EnsembleMember> members;
  for (int m = 0; m < split.comp_dim(); ++m) {
    Eigen::VectorXcd branch(split.party_dim());
    double weight = 0.0;
    for (int i = 0; i < split.party_dim(); ++i) {
      branch(i) = psi.amplitudes()(split.flat(i, m));
      weight += std::norm(branch(i));
    }
    if (weight <= kZeroWeightTol) continue;
    members.push_back(EnsembleMember{split.comp_multi(m), weight,
                                     PureState(branch / std::sqrt(weight), party_shape)});
  }
  return IndexedEnsemble(party, std::move(members));
}

/// The single-party state sum_i sqrt(q_i) |i> whose diagonal probabilities
/// equal the diagonal of the party's reduced state.
inline PureState dephased_weight_state(const PureState& psi, int party) {
  if (psi.shape().num_parties() < 2) {
    throw std::invalid_argument("dephased_weight_state: at least two parties required");
  }
  const PartySplit split(psi.shape(), party);
  Eigen::VectorXcd amps(split.party_dim());
  for (int i = 0; i < split.party_dim(); ++i) {
    double q = 0.0;
    for (int m = 0; m < split.comp_dim(); ++m) {
      q += std::norm(psi.amplitudes()(split.flat(i, m)));
    }
    amps(i) = std::sqrt(q);
  }
  return PureState::normalized(std::move(amps), SubsystemShape({split.party_dim()}));
}

/// For each party j, the weighted conditional coherence
/// sum_m w_m C_f(alpha_m) of that party's induced ensemble.
inline std::vector<double> rhs_conditional_sum(const PureState& psi,
                                               const CoherenceFunctional& f) {
  if (psi.shape().num_parties() < 2) {
    throw std::invalid_argument("rhs_conditional_sum: at least two parties required");
  }
  std::vector<double> sums;
  sums.reserve(static_cast<std::size_t>(psi.shape().num_parties()));
  for (int party = 0; party < psi.shape().num_parties(); ++party) {
    const IndexedEnsemble ensemble = induced_ensemble(psi, party);
    double acc = 0.0;
    for (const auto& member : ensemble.members()) {
      acc += member.weight * c_f_pure(f, member.state);
    }
    sums.push_back(acc);
  }
  return sums;
}

}  // namespace roofcoh
