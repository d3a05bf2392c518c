// Batch front end: single-state values and checks, randomized sweeps, roof
// computations, axiom suites, and state generation. Exit codes: 0 all pass,
// 1 at least one fail or finding, 2 usage, schema, or numeric error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <roofcoh/roofcoh.hpp>

namespace {

using namespace roofcoh;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << text;
}

PureState require_pure(const LoadedState& state, const std::string& path) {
  if (!std::holds_alternative<PureState>(state)) {
    throw std::runtime_error(path + ": a pure state is required here");
  }
  return std::get<PureState>(state);
}

DensityMatrix as_mixed(const LoadedState& state) {
  if (std::holds_alternative<DensityMatrix>(state)) {
    return std::get<DensityMatrix>(state);
  }
  return DensityMatrix::from_pure(std::get<PureState>(state));
}

struct RoofFlags {
  int restarts = 32;
  int max_iters = 2000;
  double obj_tol = 1e-8;
  std::string ensemble_size = "auto";
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--restarts", restarts, "independent optimizer restarts");
    cmd->add_option("--max-iters", max_iters, "iteration cap per restart");
    cmd->add_option("--obj-tol", obj_tol, "objective stall tolerance");
    cmd->add_option("--ensemble-size", ensemble_size,
                    "decomposition size m ('auto' = min(rank^2, 16))");
  }

  RoofConfig config() const {
    RoofConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.obj_tol = obj_tol;
    cfg.seed = seed;
    cfg.ensemble_size = ensemble_size == "auto" ? 0 : std::stoi(ensemble_size);
    return cfg;
  }
};

int exit_code_for(const SweepSummary& summary) {
  return summary.violations() > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex-roof coherence measures: values, superadditivity checks, sweeps"};
  app.require_subcommand(1);
  const FunctionalRegistry& registry = FunctionalRegistry::builtins();

  int exit_code = 0;

  // ---- pure-value ----------------------------------------------------------
  auto* pure_cmd = app.add_subcommand("pure-value", "pure-state coherence C_f in bits");
  std::string pv_state, pv_measure = "formation", pv_format = "text", pv_out;
  pure_cmd->add_option("--state", pv_state, "pure-state JSON file")->required();
  pure_cmd->add_option("--measure", pv_measure, "measure name");
  pure_cmd->add_option("--format", pv_format, "text|json")->check(CLI::IsMember({"text", "json"}));
  pure_cmd->add_option("--out", pv_out, "output file (default stdout)");
  pure_cmd->callback([&] {
    const PureState psi = require_pure(load_state_file(pv_state), pv_state);
    const double value = c_f_pure(registry.get(pv_measure), psi);
    if (pv_format == "json") {
      const nlohmann::json j{{"measure", pv_measure},
                             {"value_bits", value},
                             {"dims", psi.shape().dims()},
                             {"input_digest", state_digest(psi)}};
      write_text(pv_out, j.dump(2) + "\n");
    } else {
      write_text(pv_out, "C_" + pv_measure + " = " + format_double(value) + " bits\n");
    }
  });

  // ---- roof ----------------------------------------------------------------
  auto* roof_cmd = app.add_subcommand("roof", "convex-roof value via ensemble optimization");
  std::string rf_state, rf_measure = "formation", rf_out;
  RoofFlags rf_flags;
  roof_cmd->add_option("--state", rf_state, "state JSON file (pure or mixed)")->required();
  roof_cmd->add_option("--measure", rf_measure, "measure name");
  roof_cmd->add_option("--seed", rf_flags.seed, "PRNG seed for restarts");
  rf_flags.attach(roof_cmd);
  roof_cmd->add_option("--out", rf_out, "output file (default stdout)");
  roof_cmd->callback([&] {
    const DensityMatrix rho = as_mixed(load_state_file(rf_state));
    const RoofConfig cfg = rf_flags.config();
    const RoofResult result = roof_value(rho, registry.get(rf_measure), cfg);
    write_text(rf_out, roof_result_to_json(result, cfg, rf_measure).dump(2) + "\n");
  });

  // ---- verify ----------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "evaluate one inequality on given states");
  std::vector<std::string> vf_states;
  std::string vf_inequality, vf_measure = "formation", vf_format = "csv", vf_out;
  std::string vf_marginal = "auto";
  double vf_tol = kPureCheckTol, vf_roof_tol = kRoofCheckTol;
  RoofFlags vf_flags;
  verify_cmd->add_option("--state", vf_states, "state JSON file(s)")->required();
  verify_cmd->add_option("--inequality", vf_inequality, "inequality id")
      ->required()
      ->check(CLI::IsMember(known_inequalities()));
  verify_cmd->add_option("--measure", vf_measure, "measure name");
  verify_cmd->add_option("--tol", vf_tol, "pass tolerance for exact checks");
  verify_cmd->add_option("--roof-tol", vf_roof_tol, "pass tolerance for roof-backed checks");
  verify_cmd->add_option("--marginal-method", vf_marginal, "auto|closed-form|roof")
      ->check(CLI::IsMember({"auto", "closed-form", "roof"}));
  verify_cmd->add_option("--seed", vf_flags.seed, "PRNG seed for roof restarts");
  vf_flags.attach(verify_cmd);
  verify_cmd->add_option("--format", vf_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  verify_cmd->add_option("--out", vf_out, "output file (default stdout)");
  verify_cmd->callback([&] {
    const CoherenceFunctional& f = registry.get(vf_measure);
    std::vector<LoadedState> states;
    states.reserve(vf_states.size());
    for (const auto& path : vf_states) states.push_back(load_state_file(path));

    VerificationReport report;
    bool drill_down = false;
    std::string dims_label = loaded_shape(states[0]).to_string();
    if (vf_inequality == "product-additivity") {
      std::vector<PureState> parts;
      for (std::size_t i = 0; i < states.size(); ++i) {
        parts.push_back(require_pure(states[i], vf_states[i]));
      }
      SubsystemShape joint = parts[0].shape();
      for (std::size_t i = 1; i < parts.size(); ++i) {
        joint = joint.concatenated_with(parts[i].shape());
      }
      dims_label = joint.to_string();
      report = check_product_additivity(parts, f, vf_tol);
    } else if (vf_inequality == "mult-separability") {
      if (states.size() != 2) {
        throw std::runtime_error("mult-separability needs exactly two pure states");
      }
      const auto x = diag_probs(require_pure(states[0], vf_states[0]));
      const auto y = diag_probs(require_pure(states[1], vf_states[1]));
      const SeparabilityCheck check = check_mult_separability(f, x, y, vf_tol);
      report.inequality_id = "mult-separability";
      report.lhs = check.f_xy;
      report.rhs_terms = {{"f_x", check.f_x}, {"f_y", check.f_y}};
      report.gap = report.lhs - report.rhs_total();
      report.tol = vf_tol;
      report.verdict = check.pass ? Verdict::pass : Verdict::fail;
      report.direction_notes = "equality check, |gap| <= tol, both sides exact";
      report.input_digest = state_digest(require_pure(states[0], vf_states[0]));
    } else if (vf_inequality == "mixed-superadditivity") {
      if (states.size() != 1) throw std::runtime_error("exactly one state expected");
      RoofConfig cfg = vf_flags.config();
      report = check_mixed_superadditivity(as_mixed(states[0]), f, cfg, vf_roof_tol);
    } else {
      if (states.size() != 1) throw std::runtime_error("exactly one state expected");
      const PureState psi = require_pure(states[0], vf_states[0]);
      if (vf_inequality == "bipartite-sufficient") {
        report = check_bipartite_sufficient(psi, f, vf_tol);
      } else if (vf_inequality == "bipartite-alternative") {
        report = check_bipartite_alternative(psi, f, vf_tol);
      } else if (vf_inequality == "tripartite") {
        report = check_tripartite(psi, f, vf_tol);
      } else if (vf_inequality == "npartite") {
        report = check_npartite(psi, f, vf_tol);
      } else {  // reduced-superadditivity
        const auto& dims = psi.shape().dims();
        bool closed = f.name() == "formation" &&
                      std::all_of(dims.begin(), dims.end(), [](int d) { return d == 2; });
        if (vf_marginal == "closed-form") closed = true;
        if (vf_marginal == "roof") closed = false;
        report = check_superadditivity_reduced(
            psi, f, closed ? vf_tol : vf_roof_tol,
            closed ? MarginalMethod::closed_form : MarginalMethod::roof_optimizer,
            vf_flags.config());
      }
      drill_down = true;
    }

    LabeledReport row;
    row.report = report;
    row.dims = dims_label;
    row.measure = vf_measure;
    if (vf_format == "json") {
      nlohmann::json j = report_to_json(row);
      if (drill_down && std::holds_alternative<PureState>(states[0]) &&
          std::get<PureState>(states[0]).shape().num_parties() >= 2) {
        const PureState& psi = std::get<PureState>(states[0]);
        nlohmann::json ensembles = nlohmann::json::array();
        for (int party = 0; party < psi.shape().num_parties(); ++party) {
          ensembles.push_back(ensemble_to_json(induced_ensemble(psi, party)));
        }
        j["conditional_ensembles"] = ensembles;
      }
      write_text(vf_out, j.dump(2) + "\n");
    } else {
      write_text(vf_out, csv_header() + "\n" + csv_row(row) + "\n");
    }
    if (report.verdict == Verdict::fail) exit_code = 1;
  });

  // ---- sweep ----------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "randomized batch verification, CSV report");
  SweepSpec sw_spec;
  std::string sw_spec_file, sw_plot_out;
  bool sw_assert = false, sw_exploratory = false;
  RoofFlags sw_flags;
  sweep_cmd->add_option("--spec", sw_spec_file,
                        "sweep spec JSON file (replaces the row-determining flags)");
  sweep_cmd->add_option("--dims", sw_spec.dims, "party dimensions, e.g. 2,2,2")->delimiter(',');
  sweep_cmd->add_option("--count", sw_spec.count, "number of sampled states");
  sweep_cmd->add_option("--measure", sw_spec.measure, "measure name");
  sweep_cmd->add_option("--inequality", sw_spec.inequalities, "inequality id(s)")
      ->check(CLI::IsMember(known_inequalities()));
  sweep_cmd->add_option("--seed", sw_spec.seed, "base PRNG seed");
  sweep_cmd->add_option("--tol", sw_spec.tol, "pass tolerance for exact checks");
  sweep_cmd->add_option("--roof-tol", sw_spec.roof_tol, "tolerance for roof-backed checks");
  sweep_cmd->add_option("--rank", sw_spec.mixed_rank, "rank of sampled mixed states");
  sweep_cmd->add_flag("--exploratory", sw_exploratory,
                      "record gaps without asserting their sign");
  sweep_cmd->add_flag("--assert", sw_assert, "force pass/fail verdicts (overrides default)");
  sw_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--out", sw_spec.out_path, "CSV output file (default stdout)");
  sweep_cmd->add_option("--emit-plot", sw_plot_out, "write gap-histogram columns to this file");
  sweep_cmd->callback([&] {
    if (!sw_spec_file.empty()) {
      // a spec file replaces every row-determining flag; --out/--emit-plot still apply
      std::ifstream in(sw_spec_file);
      if (!in) throw std::runtime_error("cannot open spec file: " + sw_spec_file);
      nlohmann::json j;
      in >> j;
      const std::string out_path = sw_spec.out_path;
      sw_spec = SweepSpec::from_json(j);
      sw_spec.out_path = out_path;
    } else {
      RoofConfig roof = sw_flags.config();
      roof.seed = 0;  // per-row roof seeds derive from the sweep seed
      sw_spec.roof = roof;
      // superadditivity sweeps with the half measure are exploratory unless forced
      if (sw_exploratory) {
        sw_spec.exploratory = true;
      } else if (!sw_assert) {
        sw_spec.exploratory = sw_spec.measure == "half";
      }
    }
    const SweepResult result = run_sweep(sw_spec, registry);
    write_text(sw_spec.out_path, sweep_csv(result));
    if (!sw_plot_out.empty()) write_text(sw_plot_out, sweep_histogram(result));
    exit_code = exit_code_for(result.summary);
  });

  // ---- axioms ----------------------------------------------------------------
  auto* ax_cmd = app.add_subcommand("axioms", "coherence-measure axiom suite at one dimension");
  std::string ax_measure = "formation", ax_format = "csv", ax_out;
  int ax_dim = 2, ax_samples = 100;
  double ax_tol = kRoofCheckTol;
  RoofFlags ax_flags;
  ax_cmd->add_option("--measure", ax_measure, "measure name");
  ax_cmd->add_option("--dim", ax_dim, "system dimension");
  ax_cmd->add_option("--samples", ax_samples, "trials per axiom");
  ax_cmd->add_option("--seed", ax_flags.seed, "base PRNG seed");
  ax_cmd->add_option("--tol", ax_tol, "pass tolerance (roof slack)");
  ax_flags.attach(ax_cmd);
  ax_cmd->add_option("--format", ax_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  ax_cmd->add_option("--out", ax_out, "output file (default stdout)");
  ax_cmd->callback([&] {
    RoofConfig roof = ax_flags.config();
    const std::uint64_t seed = ax_flags.seed;
    roof.seed = 0;
    const auto reports =
        check_axioms(registry.get(ax_measure), ax_dim, ax_samples, seed, ax_tol, roof);
    std::string text;
    nlohmann::json jout = nlohmann::json::array();
    if (ax_format == "csv") text += csv_header() + "\n";
    bool any_fail = false;
    for (const auto& report : reports) {
      LabeledReport row;
      row.report = report;
      row.dims = std::to_string(ax_dim);
      row.measure = ax_measure;
      if (ax_format == "csv") {
        text += csv_row(row) + "\n";
      } else {
        jout.push_back(report_to_json(row));
      }
      if (report.verdict == Verdict::fail) any_fail = true;
    }
    if (ax_format == "json") text = jout.dump(2) + "\n";
    write_text(ax_out, text);
    if (any_fail) exit_code = 1;
  });

  // ---- sample ----------------------------------------------------------------
  auto* sm_cmd = app.add_subcommand("sample", "write seeded random state files");
  std::vector<int> sm_dims;
  std::string sm_kind = "pure", sm_out;
  int sm_count = 1, sm_rank = 2;
  std::uint64_t sm_seed = 0;
  sm_cmd->add_option("--dims", sm_dims, "party dimensions, e.g. 2,2,2")
      ->required()
      ->delimiter(',');
  sm_cmd->add_option("--kind", sm_kind, "pure|mixed|product")
      ->check(CLI::IsMember({"pure", "mixed", "product"}));
  sm_cmd->add_option("--count", sm_count, "number of states");
  sm_cmd->add_option("--seed", sm_seed, "base PRNG seed");
  sm_cmd->add_option("--rank", sm_rank, "rank for mixed states");
  sm_cmd->add_option("--out", sm_out, "output directory")->required();
  sm_cmd->callback([&] {
    const SubsystemShape shape(sm_dims);
    std::filesystem::create_directories(sm_out);
    for (int i = 0; i < sm_count; ++i) {
      const std::uint64_t seed = rng::derive_stream(sm_seed, static_cast<std::uint64_t>(i));
      char name[64];
      std::snprintf(name, sizeof name, "state_%04d", i);
      const std::string base = sm_out + "/" + name;
      if (sm_kind == "pure") {
        write_text(base + ".json", pure_to_json(haar_pure(shape, seed)).dump(2) + "\n");
      } else if (sm_kind == "mixed") {
        write_text(base + ".json",
                   mixed_to_json(ginibre_mixed(shape, sm_rank, seed)).dump(2) + "\n");
      } else {
        const ProductSample sample = random_product_pure(shape, seed);
        write_text(base + ".json", pure_to_json(sample.composite).dump(2) + "\n");
        for (std::size_t p = 0; p < sample.parts.size(); ++p) {
          write_text(base + "_part" + std::to_string(p) + ".json",
                     pure_to_json(sample.parts[p]).dump(2) + "\n");
        }
      }
    }
    std::cout << "wrote " << sm_count << " " << sm_kind << " state(s) to " << sm_out << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
