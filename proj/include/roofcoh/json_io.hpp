#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "roofcoh/marginals.hpp"
#include "roofcoh/roof.hpp"
#include "roofcoh/states.hpp"

namespace roofcoh {

// State file schema:
//   pure:  {"type":"pure",  "dims":[d1,...,dn], "amplitudes":[[re,im],...]}
//   mixed: {"type":"mixed", "dims":[d1,...,dn], "matrix":[[[re,im],...],...]}
// Loaded states are validated against the usual invariants (unit norm,
// Hermitian PSD unit trace).

using LoadedState = std::variant<PureState, DensityMatrix>;

namespace detail {

inline Complex complex_from_json(const nlohmann::json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::runtime_error(std::string("state schema: ") + where +
                             " entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline SubsystemShape shape_from_json(const nlohmann::json& j) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
    throw std::runtime_error("state schema: 'dims' must be a nonempty array");
  }
  std::vector<int> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<int>() < 2) {
      throw std::runtime_error("state schema: every dim must be an integer >= 2");
    }
    dims.push_back(d.get<int>());
  }
  return SubsystemShape(std::move(dims));
}

}  // namespace detail

inline nlohmann::json complex_to_json(const Complex& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

inline nlohmann::json pure_to_json(const PureState& psi) {
  nlohmann::json amps = nlohmann::json::array();
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
    amps.push_back(complex_to_json(psi.amplitudes()(i)));
  }
  return nlohmann::json{{"type", "pure"}, {"dims", psi.shape().dims()}, {"amplitudes", amps}};
}

inline nlohmann::json mixed_to_json(const DensityMatrix& rho) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < rho.matrix().rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < rho.matrix().cols(); ++j) {
      row.push_back(complex_to_json(rho.matrix()(i, j)));
    }
    rows.push_back(row);
  }
  return nlohmann::json{{"type", "mixed"}, {"dims", rho.shape().dims()}, {"matrix", rows}};
}

inline LoadedState load_state_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw std::runtime_error("state schema: top-level object with a 'type' string required");
  }
  const std::string type = j["type"].get<std::string>();
  const SubsystemShape shape = detail::shape_from_json(j);
  const int n = shape.total_dim();
  try {
    if (type == "pure") {
      if (!j.contains("amplitudes") || !j["amplitudes"].is_array() ||
          static_cast<int>(j["amplitudes"].size()) != n) {
        throw std::runtime_error(
            "state schema: 'amplitudes' must be an array of total_dim [re, im] pairs");
      }
      Eigen::VectorXcd amps(n);
      for (int i = 0; i < n; ++i) {
        amps(i) = detail::complex_from_json(j["amplitudes"][static_cast<std::size_t>(i)],
                                            "amplitudes");
      }
      return PureState(std::move(amps), shape);
    }
    if (type == "mixed") {
      if (!j.contains("matrix") || !j["matrix"].is_array() ||
          static_cast<int>(j["matrix"].size()) != n) {
        throw std::runtime_error(
            "state schema: 'matrix' must be an array of total_dim rows");
      }
      Eigen::MatrixXcd m(n, n);
      for (int i = 0; i < n; ++i) {
        const auto& row = j["matrix"][static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
          throw std::runtime_error("state schema: every matrix row needs total_dim entries");
        }
        for (int k = 0; k < n; ++k) {
          m(i, k) = detail::complex_from_json(row[static_cast<std::size_t>(k)], "matrix");
        }
      }
      return DensityMatrix(std::move(m), shape);
    }
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("state validation: ") + e.what());
  }
  throw std::runtime_error("state schema: 'type' must be \"pure\" or \"mixed\"");
}

inline LoadedState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open state file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("state file " + path + ": " + e.what());
  }
  return load_state_json(j);
}

inline const SubsystemShape& loaded_shape(const LoadedState& state) {
  if (std::holds_alternative<PureState>(state)) {
    return std::get<PureState>(state).shape();
  }
  return std::get<DensityMatrix>(state).shape();
}

inline nlohmann::json ensemble_to_json(const IndexedEnsemble& ensemble) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& member : ensemble.members()) {
    nlohmann::json amps = nlohmann::json::array();
    for (Eigen::Index i = 0; i < member.state.amplitudes().size(); ++i) {
      amps.push_back(complex_to_json(member.state.amplitudes()(i)));
    }
    members.push_back(nlohmann::json{
        {"label", member.label}, {"weight", member.weight}, {"amplitudes", amps}});
  }
  return nlohmann::json{{"party", ensemble.party()}, {"members", members}};
}

inline nlohmann::json roof_config_to_json(const RoofConfig& cfg) {
  return nlohmann::json{{"ensemble_size", cfg.ensemble_size},
                        {"restarts", cfg.restarts},
                        {"max_iters", cfg.max_iters},
                        {"obj_tol", cfg.obj_tol},
                        {"seed", cfg.seed}};
}

inline nlohmann::json roof_result_to_json(const RoofResult& result, const RoofConfig& cfg,
                                          const std::string& measure) {
  nlohmann::json ensemble = nlohmann::json::array();
  for (const auto& [weight, state] : result.ensemble) {
    nlohmann::json amps = nlohmann::json::array();
    for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) {
      amps.push_back(complex_to_json(state.amplitudes()(i)));
    }
    ensemble.push_back(nlohmann::json{{"weight", weight}, {"amplitudes", amps}});
  }
  return nlohmann::json{{"measure", measure},
                        {"value_bits", result.value},
                        {"direction", "upper-bound"},
                        {"converged", result.converged},
                        {"per_restart_values", result.per_restart_values},
                        {"ensemble", ensemble},
                        {"config", roof_config_to_json(cfg)}};
}

}  // namespace roofcoh
